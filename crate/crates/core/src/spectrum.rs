//! Spectra of `G_q(f_2(x)y, ..., f_(m+1)(x)y)` with exact eigenvalues.
//!
//! Every eigenvalue of these graphs has the form `±√(q N)` for an integer
//! `N`, so a spectrum is stored as `(sign, radicand)` pairs with big-integer
//! multiplicities. Three routes produce or check one:
//!
//! * [`spectrum_enumerate`]: histogram of root counts `N_{F_w}` over all `w`;
//! * [`closed_form_linearized`]: closed-form multiplicities for `L_m(q)`, `m >= e`;
//! * [`walk_trace`]: closed-walk counts `tr(A^(2k))`, compared through
//!   [`SpectrumReport::power_sum`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{Family, FamilySpec};
use crate::field::linalg;
use crate::graph::{Budget, Graph, GraphError};
use crate::linearized::{rank_count, LinPoly, WeightVector};

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("u -> (1, f_2(u), ..., f_(m+1)(u)) is not injective; the root-count spectrum does not apply")]
    ThetaNotInjective,
    #[error("enumeration needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("closed form requires m ≥ e (got m = {m}, e = {e})")]
    UnsupportedRegime { m: usize, e: usize },
    #[error("walk length parameter k must be in 1..=4 (got {0})")]
    InvalidWalkLength(u32),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "0")]
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Enumerated,
    ClosedForm,
    Oracle,
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(D::Error::custom(format!("not a decimal integer: {s:?}")));
        }
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom("bad integer"))
    }
}

/// One eigenvalue `sign * √radicand` with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub sign: Sign,
    #[serde(with = "decimal")]
    pub radicand: BigUint,
    #[serde(with = "decimal")]
    pub multiplicity: BigUint,
}

impl SpectrumEntry {
    /// Descending eigenvalue order: `+√big .. +√small, 0, -√small .. -√big`.
    pub fn cmp_desc(&self, other: &Self) -> Ordering {
        let group = |s: Sign| match s {
            Sign::Plus => 0,
            Sign::Zero => 1,
            Sign::Minus => 2,
        };
        group(self.sign).cmp(&group(other.sign)).then_with(|| match self.sign {
            Sign::Minus => self.radicand.cmp(&other.radicand),
            _ => other.radicand.cmp(&self.radicand),
        })
    }
}

impl fmt::Display for SpectrumEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.radicand;
        let root = r.sqrt();
        let body = if &root * &root == *r { root.to_string() } else { format!("√{r}") };
        match self.sign {
            Sign::Zero => write!(f, "0"),
            Sign::Plus => write!(f, "{body}"),
            Sign::Minus => write!(f, "-{body}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub spec: FamilySpec,
    pub entries: Vec<SpectrumEntry>,
    #[serde(with = "decimal")]
    pub total: BigUint,
    pub provenance: Provenance,
}

impl SpectrumReport {
    /// Builds a report from `hist[N] = |{w : N_{F_w} = N}|`.
    pub fn from_histogram(spec: FamilySpec, q: u64, hist: &[u64], provenance: Provenance) -> Self {
        let mut entries = Vec::new();
        for (n, &count) in hist.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let count = BigUint::from(count);
            if n == 0 {
                entries.push(SpectrumEntry {
                    sign: Sign::Zero,
                    radicand: BigUint::zero(),
                    multiplicity: count * 2u32,
                });
            } else {
                let radicand = BigUint::from(q) * n as u64;
                entries.push(SpectrumEntry { sign: Sign::Plus, radicand: radicand.clone(), multiplicity: count.clone() });
                entries.push(SpectrumEntry { sign: Sign::Minus, radicand, multiplicity: count });
            }
        }
        Self::from_entries(spec, entries, provenance)
    }

    pub fn from_entries(spec: FamilySpec, mut entries: Vec<SpectrumEntry>, provenance: Provenance) -> Self {
        entries.retain(|e| !e.multiplicity.is_zero());
        entries.sort_by(SpectrumEntry::cmp_desc);
        let total = entries.iter().map(|e| &e.multiplicity).sum();
        SpectrumReport { spec, entries, total, provenance }
    }

    /// Same eigenvalues with the same multiplicities, provenance ignored.
    pub fn same_spectrum(&self, other: &SpectrumReport) -> bool {
        self.entries == other.entries
    }

    pub fn multiplicity(&self, sign: Sign, radicand: &BigUint) -> BigUint {
        self.entries
            .iter()
            .find(|e| e.sign == sign && &e.radicand == radicand)
            .map(|e| e.multiplicity.clone())
            .unwrap_or_default()
    }

    /// Distinct positive radicands, largest first.
    pub fn positive_radicands(&self) -> Vec<BigUint> {
        self.entries
            .iter()
            .filter(|e| e.sign == Sign::Plus)
            .map(|e| e.radicand.clone())
            .collect()
    }

    /// Σ λ^(2k) over all eigenvalues, i.e. Σ multiplicity · radicand^k.
    pub fn power_sum(&self, k: u32) -> BigUint {
        self.entries
            .iter()
            .map(|e| &e.multiplicity * e.radicand.pow(k))
            .sum()
    }

    /// Every nonzero radicand carries equal `+` and `-` multiplicity.
    pub fn is_symmetric(&self) -> bool {
        self.entries
            .iter()
            .filter(|e| e.sign == Sign::Plus)
            .all(|e| self.multiplicity(Sign::Minus, &e.radicand) == e.multiplicity)
            && self
                .entries
                .iter()
                .filter(|e| e.sign == Sign::Minus)
                .all(|e| self.multiplicity(Sign::Plus, &e.radicand) == e.multiplicity)
    }
}

/// `hist[N] = |{w ∈ F_q^(m+1) : N_{F_w} = N}|` for `N = 0..=q`.
pub fn root_count_histogram(family: &Family, budget: Budget) -> Result<Vec<u64>, SpectrumError> {
    if !family.theta_injective() {
        return Err(SpectrumError::ThetaNotInjective);
    }
    let q = family.q();
    let count = q.checked_pow(family.m() as u32 + 1);
    let needed = count.and_then(|c| c.checked_mul(q)).unwrap_or(u64::MAX);
    if needed > budget.max_evals {
        return Err(SpectrumError::BudgetExceeded { needed, budget: budget.max_evals });
    }
    let count = count.expect("bounded by budget");
    let hist = (0..count)
        .into_par_iter()
        .fold(
            || vec![0u64; q as usize + 1],
            |mut h, idx| {
                let poly = LinPoly::new(family, WeightVector::from_index(family, idx));
                h[poly.count_roots() as usize] += 1;
                h
            },
        )
        .reduce(
            || vec![0u64; q as usize + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(hist)
}

/// Spectrum from the root-count histogram of every weight vector.
pub fn spectrum_enumerate(family: &Family, budget: Budget) -> Result<SpectrumReport, SpectrumError> {
    let hist = root_count_histogram(family, budget)?;
    Ok(SpectrumReport::from_histogram(family.spec().clone(), family.q(), &hist, Provenance::Enumerated))
}

/// Closed-form multiplicities of `L_m(q)` for `m >= e`.
///
/// `by_kernel[i]` is `n_{p^i}` (multiplicity of each of `±√(q p^i)`) and
/// `zero` is `n_0`, both before multiplying by `scale = q^(m-e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityTable {
    pub p: u32,
    pub e: usize,
    pub m: usize,
    pub by_kernel: Vec<BigUint>,
    pub zero: BigUint,
    pub scale: BigUint,
}

impl MultiplicityTable {
    pub fn q(&self) -> BigUint {
        BigUint::from(self.p).pow(self.e as u32)
    }

    /// `n_{p^i}` after scaling.
    pub fn scaled(&self, i: usize) -> BigUint {
        &self.by_kernel[i] * &self.scale
    }

    pub fn scaled_zero(&self) -> BigUint {
        &self.zero * &self.scale
    }

    /// Unscaled total, `q^(e+1)` when the table is consistent.
    pub fn unscaled_total(&self) -> BigUint {
        self.by_kernel.iter().sum::<BigUint>() + &self.zero
    }

    pub fn to_report(&self, spec: FamilySpec) -> SpectrumReport {
        let q = self.q();
        let p = BigUint::from(self.p);
        let mut entries = Vec::new();
        for i in 0..=self.e {
            let radicand = &q * p.pow(i as u32);
            let mult = self.scaled(i);
            entries.push(SpectrumEntry { sign: Sign::Plus, radicand: radicand.clone(), multiplicity: mult.clone() });
            entries.push(SpectrumEntry { sign: Sign::Minus, radicand, multiplicity: mult });
        }
        entries.push(SpectrumEntry {
            sign: Sign::Zero,
            radicand: BigUint::zero(),
            multiplicity: self.scaled_zero() * 2u32,
        });
        SpectrumReport::from_entries(spec, entries, Provenance::ClosedForm)
    }
}

pub fn closed_form_linearized(p: u32, e: usize, m: usize) -> Result<MultiplicityTable, SpectrumError> {
    if m < e {
        return Err(SpectrumError::UnsupportedRegime { m, e });
    }
    let pb = BigUint::from(p);
    let q = pb.pow(e as u32);
    // number of linear parts with kernel dimension i = number of e x e
    // matrices over F_p of rank e - i
    let with_kernel = |i: usize| rank_count(e, e, e - i, p as u64).expect("rank within bounds");
    let by_kernel = (0..=e).map(|i| pb.pow((e - i) as u32) * with_kernel(i)).collect();
    let zero = (1..=e)
        .map(|i| (&q - pb.pow((e - i) as u32)) * with_kernel(i))
        .sum();
    Ok(MultiplicityTable {
        p,
        e,
        m,
        by_kernel,
        zero,
        scale: q.pow((m - e) as u32),
    })
}

/// `rank_{F_q}(1, f_2, ..., f_(m+1))` as functions on F_q.
pub fn function_rank(family: &Family) -> usize {
    let f = family.field();
    let rows: Vec<Vec<_>> = std::iter::once(f.elements().map(|_| f.one()).collect())
        .chain((0..family.m()).map(|j| f.elements().map(|x| family.f(j, x)).collect()))
        .collect();
    linalg::rank(f, &rows)
}

/// `q^(m + 1 - rank(1, f_2, ..., f_(m+1)))`.
pub fn component_count_formula(family: &Family) -> BigUint {
    let exp = family.m() + 1 - function_rank(family);
    BigUint::from(family.q()).pow(exp as u32)
}

/// `tr(A^(2k))`, the number of closed walks of length `2k`.
///
/// For each start vertex the walk counts `(A^k)_{v,·}` are propagated
/// exactly; since `A` is symmetric the closed `2k`-walks at `v` number
/// `Σ_u (A^k)_{v,u}^2`.
pub fn walk_trace(graph: &Graph, k: u32) -> Result<BigUint, SpectrumError> {
    if !(1..=4).contains(&k) {
        return Err(SpectrumError::InvalidWalkLength(k));
    }
    let adj = graph.adjacency()?;
    let n = adj.vertex_count();
    let total: u128 = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![0u64; n], vec![0u64; n]),
            |(cur, next), v| {
                let mut frontier = vec![v as u32];
                cur[v] = 1;
                for _ in 0..k {
                    let mut touched = Vec::new();
                    for &u in &frontier {
                        let c = cur[u as usize];
                        for &w in adj.neighbors(u as usize) {
                            if next[w as usize] == 0 {
                                touched.push(w);
                            }
                            next[w as usize] += c;
                        }
                        cur[u as usize] = 0;
                    }
                    std::mem::swap(cur, next);
                    frontier = touched;
                }
                let sum: u128 = frontier.iter().map(|&u| (cur[u as usize] as u128).pow(2)).sum();
                for &u in &frontier {
                    cur[u as usize] = 0;
                }
                sum
            },
        )
        .sum();
    Ok(BigUint::from(total))
}

/// Spectral-gap bound for `L_e(q)`: edge expansion exceeds
/// `(q - √radicand) / divisor` with `radicand = q p^(e-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionBound {
    pub q: u64,
    #[serde(with = "decimal")]
    pub radicand: BigUint,
    pub divisor: u32,
    /// Largest radicand below `q^2`, expected to equal `radicand`.
    #[serde(with = "decimal")]
    pub second_radicand: BigUint,
}

impl ExpansionBound {
    pub fn approx(&self) -> f64 {
        let r = self.radicand.to_f64().unwrap_or(f64::INFINITY);
        (self.q as f64 - r.sqrt()) / self.divisor as f64
    }
}

impl fmt::Display for ExpansionBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} - √{})/{} ≈ {:.6}", self.q, self.radicand, self.divisor, self.approx())
    }
}

/// Holds in the `m = e` regime.
pub fn expansion_bound(p: u32, e: usize) -> ExpansionBound {
    let q = (p as u64).pow(e as u32);
    let radicand = BigUint::from(q) * BigUint::from(p).pow(e as u32 - 1);
    ExpansionBound { q, second_radicand: radicand.clone(), radicand, divisor: 2 }
}

/// Second-largest positive radicand of a report, if any.
pub fn second_largest_radicand(report: &SpectrumReport) -> Option<BigUint> {
    report.positive_radicands().into_iter().nth(1)
}

/// `q^(m+1)` as a big integer.
pub fn side_order(q: u64, m: usize) -> BigUint {
    BigUint::from(q).pow(m as u32 + 1)
}

/// Convenience: total eigenvalue count `2 q^(m+1)`.
pub fn expected_total(family: &Family) -> BigUint {
    side_order(family.q(), family.m()) * 2u32
}
