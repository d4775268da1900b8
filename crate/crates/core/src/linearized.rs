//! Affine maps `F_w(x) = w_1 + w_2 f_2(x) + ... + w_(m+1) f_(m+1)(x)` and,
//! for the linearized family, the F_p-linear algebra of their linear part.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::family::Family;
use crate::field::{FieldElement, FpMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearizedError {
    #[error("weight vector has length {got}, expected m + 1 = {expected}")]
    WeightLength { expected: usize, got: usize },
    #[error("element does not belong to the family's field")]
    FieldMismatch,
    #[error("operation needs the linearized family (f_k(x) = x^(p^(k-2)))")]
    NotLinearized,
    #[error("rank {k} exceeds min({l}, {n})")]
    InvalidRank { l: usize, n: usize, k: usize },
    #[error("q must be at least 2")]
    InvalidOrder,
}

/// `w = (w_1, ..., w_(m+1))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<FieldElement>);

impl WeightVector {
    pub fn new(family: &Family, weights: Vec<FieldElement>) -> Result<Self, LinearizedError> {
        if weights.len() != family.m() + 1 {
            return Err(LinearizedError::WeightLength { expected: family.m() + 1, got: weights.len() });
        }
        if weights.iter().any(|&w| !family.field().contains(w)) {
            return Err(LinearizedError::FieldMismatch);
        }
        Ok(WeightVector(weights))
    }

    pub fn zero(family: &Family) -> Self {
        WeightVector(vec![family.field().zero(); family.m() + 1])
    }

    /// The `index`-th weight vector in base-q order, `w_1` least significant.
    pub fn from_index(family: &Family, mut index: u64) -> Self {
        let q = family.q();
        let field = family.field();
        let w = (0..=family.m())
            .map(|_| {
                let x = field.element(index % q).expect("digit below q");
                index /= q;
                x
            })
            .collect();
        WeightVector(w)
    }

    pub fn as_slice(&self) -> &[FieldElement] {
        &self.0
    }

    /// `w_1`.
    pub fn constant(&self) -> FieldElement {
        self.0[0]
    }

    /// `(w_2, ..., w_(m+1))`.
    pub fn linear(&self) -> &[FieldElement] {
        &self.0[1..]
    }
}

/// `F_w` bound to its family.
#[derive(Debug, Clone)]
pub struct LinPoly<'a> {
    family: &'a Family,
    weights: WeightVector,
}

impl<'a> LinPoly<'a> {
    pub fn new(family: &'a Family, weights: WeightVector) -> Self {
        LinPoly { family, weights }
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    /// `F_w(x)`.
    pub fn eval(&self, x: FieldElement) -> Result<FieldElement, LinearizedError> {
        if !self.family.field().contains(x) {
            return Err(LinearizedError::FieldMismatch);
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: FieldElement) -> FieldElement {
        let f = self.family.field();
        f.add(self.weights.constant(), self.eval_linear(x))
    }

    /// `F̄_w(x)`, the map without its constant term.
    pub fn eval_linear(&self, x: FieldElement) -> FieldElement {
        let f = self.family.field();
        self.weights
            .linear()
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .fold(f.zero(), |acc, (j, &w)| f.add(acc, f.mul(w, self.family.f(j, x))))
    }

    fn require_linearized(&self) -> Result<(), LinearizedError> {
        if self.family.is_linearized() {
            Ok(())
        } else {
            Err(LinearizedError::NotLinearized)
        }
    }

    /// Matrix of `F̄_w` in the polynomial basis: column `j` holds the
    /// coordinates of `F̄_w(basis[j])`.
    pub fn matrix(&self) -> Result<FpMatrix, LinearizedError> {
        self.require_linearized()?;
        let field = self.family.field();
        let e = field.degree();
        let mut m = FpMatrix::zeros(e, e, field.characteristic());
        for (j, &a) in field.basis().iter().enumerate() {
            for (i, c) in field.coords(self.eval_linear(a)).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        Ok(m)
    }

    /// `dim_{F_p} ker F̄_w`.
    pub fn kernel_dim(&self) -> Result<usize, LinearizedError> {
        let m = self.matrix()?;
        Ok(m.cols() - m.rank())
    }

    /// Whether `y` lies in the image of `F̄_w`, by solving the F_p system.
    pub fn in_image(&self, y: FieldElement) -> Result<bool, LinearizedError> {
        if !self.family.field().contains(y) {
            return Err(LinearizedError::FieldMismatch);
        }
        Ok(self.matrix()?.solve(&self.family.field().coords(y)).is_some())
    }

    /// `β_1..β_e` with `F̄_w(x) = Σ tr(β_i x) α_i`.
    pub fn beta_rep(&self) -> Result<BetaRep, LinearizedError> {
        let m = self.matrix()?;
        let field = self.family.field();
        let dual = field.dual_basis();
        // tr(β_i x) is the i-th coordinate of F̄_w(x); a functional φ equals
        // tr(β ·) exactly for β = Σ_j φ(α_j) δ_j.
        let betas = (0..m.rows())
            .map(|i| {
                (0..m.cols()).fold(field.zero(), |acc, j| field.add(acc, field.scale(m.get(i, j), dual[j])))
            })
            .collect();
        Ok(BetaRep { betas })
    }

    /// `N_{F_w}` by evaluating at every element.
    pub fn count_roots_exhaustive(&self) -> u64 {
        self.family
            .field()
            .elements()
            .filter(|&x| self.eval_unchecked(x).is_zero())
            .count() as u64
    }

    /// `N_{F_w}` from kernel dimension and image membership of `-w_1`.
    pub fn count_roots_structured(&self) -> Result<u64, LinearizedError> {
        let field = self.family.field();
        let m = self.matrix()?;
        let target = field.coords(field.neg(self.weights.constant()));
        let Some(_) = m.solve(&target) else { return Ok(0) };
        let dim = m.cols() - m.rank();
        Ok((field.characteristic() as u64).pow(dim as u32))
    }

    /// `N_{F_w}`: structured for the linearized family, exhaustive otherwise.
    pub fn count_roots(&self) -> u64 {
        match self.count_roots_structured() {
            Ok(n) => n,
            Err(_) => self.count_roots_exhaustive(),
        }
    }
}

/// The β-representation of a linear part `F̄_w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaRep {
    pub betas: Vec<FieldElement>,
}

impl BetaRep {
    /// `Σ tr(β_i x) α_i`.
    pub fn eval(&self, family: &Family, x: FieldElement) -> FieldElement {
        let f = family.field();
        self.betas
            .iter()
            .zip(f.basis())
            .fold(f.zero(), |acc, (&b, a)| f.add(acc, f.scale(f.trace(f.mul(b, x)), a)))
    }

    /// `rank_{F_p}(β_1, ..., β_e)`.
    pub fn rank(&self, family: &Family) -> usize {
        let f = family.field();
        let rows: Vec<Vec<u32>> = self.betas.iter().map(|&b| f.coords(b)).collect();
        FpMatrix::from_rows(&rows, f.characteristic()).rank()
    }
}

/// Number of `l x n` matrices of rank `k` over F_q:
/// `∏_{i<k} (q^l - q^i)(q^n - q^i) / ∏_{i<k} (q^k - q^i)`.
pub fn rank_count(l: usize, n: usize, k: usize, q: u64) -> Result<BigUint, LinearizedError> {
    if k > l.min(n) {
        return Err(LinearizedError::InvalidRank { l, n, k });
    }
    if q < 2 {
        return Err(LinearizedError::InvalidOrder);
    }
    let q = BigUint::from(q);
    let pow = |a: usize| q.pow(a as u32);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= (pow(l) - pow(i)) * (pow(n) - pow(i));
        den *= pow(k) - pow(i);
    }
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilySpec;

    fn weights(fam: &Family, idx: &[u64]) -> WeightVector {
        let f = fam.field();
        WeightVector::new(fam, idx.iter().map(|&i| f.element(i).unwrap()).collect()).unwrap()
    }

    #[test]
    fn zero_weights() {
        let fam = FamilySpec::linearized(2, 2, 2).realize().unwrap();
        let poly = LinPoly::new(&fam, WeightVector::zero(&fam));
        for x in fam.field().elements() {
            assert!(poly.eval(x).unwrap().is_zero());
        }
        assert_eq!(poly.kernel_dim().unwrap(), 2);
        assert_eq!(poly.count_roots_exhaustive(), 4);
        assert_eq!(poly.count_roots_structured().unwrap(), 4);
        assert!(poly.beta_rep().unwrap().betas.iter().all(|b| b.is_zero()));
    }

    #[test]
    fn identity_map_in_gf4() {
        let fam = FamilySpec::linearized(2, 2, 1).realize().unwrap();
        let poly = LinPoly::new(&fam, weights(&fam, &[0, 1]));
        let t = fam.field().basis()[1];
        assert_eq!(poly.eval(t).unwrap(), t);
        assert_eq!(poly.kernel_dim().unwrap(), 0);
    }

    #[test]
    fn x_plus_x_squared_in_gf4() {
        let fam = FamilySpec::linearized(2, 2, 2).realize().unwrap();
        let f = fam.field();
        let t = f.basis()[1];
        let poly = LinPoly::new(&fam, weights(&fam, &[0, 1, 1]));
        assert_eq!(poly.eval(t).unwrap(), f.one());
        // 1 + x + x^2 has roots t and t + 1
        let shifted = LinPoly::new(&fam, weights(&fam, &[1, 1, 1]));
        assert_eq!(shifted.count_roots_exhaustive(), 2);
        assert_eq!(shifted.count_roots_structured().unwrap(), 2);
    }

    #[test]
    fn no_roots_over_gf2() {
        let fam = FamilySpec::linearized(2, 1, 2).realize().unwrap();
        let poly = LinPoly::new(&fam, weights(&fam, &[1, 1, 1]));
        assert_eq!(poly.count_roots_exhaustive(), 0);
        assert_eq!(poly.count_roots_structured().unwrap(), 0);
        assert!(!poly.in_image(fam.field().one()).unwrap());
    }

    #[test]
    fn artin_schreier_kernel_is_prime_field() {
        for (p, e) in [(2u32, 2usize), (2, 3), (3, 2)] {
            let fam = FamilySpec::linearized(p, e, 2).realize().unwrap();
            let f = fam.field();
            let w = WeightVector::new(&fam, vec![f.zero(), f.neg(f.one()), f.one()]).unwrap();
            let poly = LinPoly::new(&fam, w);
            assert_eq!(poly.kernel_dim().unwrap(), 1);
            let zeros = f.elements().filter(|&x| poly.eval_linear(x).is_zero()).count();
            assert_eq!(zeros as u32, p);
        }
    }

    #[test]
    fn beta_rep_of_identity_over_gf2() {
        let fam = FamilySpec::linearized(2, 1, 1).realize().unwrap();
        let poly = LinPoly::new(&fam, weights(&fam, &[0, 1]));
        assert_eq!(poly.beta_rep().unwrap().betas, vec![fam.field().one()]);
    }

    #[test]
    fn beta_rep_all_gf4_maps() {
        let fam = FamilySpec::linearized(2, 2, 2).realize().unwrap();
        let f = fam.field();
        for w2 in 0..4 {
            for w3 in 0..4 {
                let poly = LinPoly::new(&fam, weights(&fam, &[0, w2, w3]));
                let beta = poly.beta_rep().unwrap();
                for x in f.elements() {
                    assert_eq!(beta.eval(&fam, x), poly.eval_linear(x));
                }
                assert_eq!(poly.kernel_dim().unwrap(), 2 - beta.rank(&fam));
            }
        }
    }

    #[test]
    fn non_linearized_family_rejects_structure() {
        let fam = FamilySpec::wenger(3, 1, 2).realize().unwrap();
        let poly = LinPoly::new(&fam, weights(&fam, &[1, 0, 1]));
        assert_eq!(poly.kernel_dim(), Err(LinearizedError::NotLinearized));
        // 1 + x^2 over F_3 has no roots
        assert_eq!(poly.count_roots(), 0);
    }

    #[test]
    fn weight_validation() {
        let fam = FamilySpec::linearized(2, 1, 2).realize().unwrap();
        let f = fam.field();
        assert!(matches!(
            WeightVector::new(&fam, vec![f.zero()]),
            Err(LinearizedError::WeightLength { .. })
        ));
        let other = FamilySpec::linearized(3, 1, 2).realize().unwrap();
        let g = other.field();
        assert_eq!(
            WeightVector::new(&fam, vec![g.zero(); 3]),
            Err(LinearizedError::FieldMismatch)
        );
        let poly = LinPoly::new(&fam, WeightVector::zero(&fam));
        assert_eq!(poly.eval(g.one()), Err(LinearizedError::FieldMismatch));
    }

    #[test]
    fn rank_count_values() {
        assert_eq!(rank_count(3, 5, 0, 7).unwrap(), BigUint::one());
        assert_eq!(rank_count(2, 2, 1, 2).unwrap(), BigUint::from(9u32));
        assert_eq!(rank_count(2, 2, 2, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(rank_count(2, 3, 3, 2), Err(LinearizedError::InvalidRank { l: 2, n: 3, k: 3 }));
        assert_eq!(rank_count(2, 2, 1, 1), Err(LinearizedError::InvalidOrder));
    }
}
