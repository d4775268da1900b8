//! Family parameters and the univariate functions `f_2, ..., f_(m+1)`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// `f_k(x) = x^(k-1)`.
    Wenger,
    /// `f_k(x) = x^(p^(k-2))`.
    Linearized,
    /// Arbitrary polynomials over F_q.
    Custom,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Wenger => "wenger",
            FamilyKind::Linearized => "linearized",
            FamilyKind::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("m must be at least 1")]
    InvalidM,
    #[error("custom family needs {expected} polynomials f_2..f_(m+1), got {got}")]
    FListLength { expected: usize, got: usize },
    #[error("f-list given for a non-custom family")]
    UnexpectedFList,
    #[error("polynomial coefficient index {0} is not a field element")]
    BadCoefficient(u32),
}

/// Everything needed to rebuild a graph: field, `m`, and the f-list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub p: u32,
    pub e: usize,
    pub m: usize,
    pub family: FamilyKind,
    /// Modulus coefficients, low degree first. `None` picks the default.
    #[serde(default)]
    pub modulus: Option<Vec<u32>>,
    /// Custom family only: `f_2..f_(m+1)` as coefficient lists (low degree
    /// first), each coefficient a canonical element index.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f_list: Vec<Vec<u32>>,
}

impl FamilySpec {
    pub fn linearized(p: u32, e: usize, m: usize) -> Self {
        FamilySpec { p, e, m, family: FamilyKind::Linearized, modulus: None, f_list: Vec::new() }
    }

    pub fn wenger(p: u32, e: usize, m: usize) -> Self {
        FamilySpec { p, e, m, family: FamilyKind::Wenger, modulus: None, f_list: Vec::new() }
    }

    pub fn custom(p: u32, e: usize, f_list: Vec<Vec<u32>>) -> Self {
        FamilySpec {
            p,
            e,
            m: f_list.len(),
            family: FamilyKind::Custom,
            modulus: None,
            f_list,
        }
    }

    pub fn with_modulus(mut self, modulus: Vec<u32>) -> Self {
        self.modulus = Some(modulus);
        self
    }

    pub fn realize(&self) -> Result<Family, FamilyError> {
        Family::new(self.clone())
    }

    /// `q = p^e`, saturating.
    pub fn order(&self) -> u64 {
        (self.p as u64).saturating_pow(self.e as u32)
    }

    /// Short label such as `L_2(9)` or `W_1(3)`.
    pub fn label(&self) -> String {
        let tag = match self.family {
            FamilyKind::Linearized => "L",
            FamilyKind::Wenger => "W",
            FamilyKind::Custom => "G",
        };
        format!("{tag}_{}({})", self.m, self.order())
    }
}

#[derive(Debug, Clone)]
enum Function {
    /// `x^(p^i)`
    Frobenius(usize),
    /// `x^k`
    Power(u64),
    /// Horner evaluation, coefficients low degree first.
    Poly(Vec<FieldElement>),
}

const TABLE_LIMIT: u64 = 1 << 22;

/// A realized family: the field plus evaluators for every `f_k`.
#[derive(Debug, Clone)]
pub struct Family {
    spec: FamilySpec,
    field: Field,
    functions: Vec<Function>,
    // values[x * m + j] = f_(j+2)(x)
    table: Option<Vec<FieldElement>>,
}

impl Family {
    pub fn new(mut spec: FamilySpec) -> Result<Family, FamilyError> {
        if spec.m == 0 {
            return Err(FamilyError::InvalidM);
        }
        let modulus: Option<Vec<u64>> =
            spec.modulus.as_ref().map(|m| m.iter().map(|&c| c as u64).collect());
        let field = Field::new(spec.p as u64, spec.e, modulus.as_deref())?;
        spec.modulus = Some(field.modulus().to_vec());
        let functions = match spec.family {
            FamilyKind::Linearized => {
                if !spec.f_list.is_empty() {
                    return Err(FamilyError::UnexpectedFList);
                }
                (0..spec.m).map(Function::Frobenius).collect()
            }
            FamilyKind::Wenger => {
                if !spec.f_list.is_empty() {
                    return Err(FamilyError::UnexpectedFList);
                }
                (1..=spec.m as u64).map(Function::Power).collect()
            }
            FamilyKind::Custom => {
                if spec.f_list.len() != spec.m {
                    return Err(FamilyError::FListLength { expected: spec.m, got: spec.f_list.len() });
                }
                spec.f_list
                    .iter()
                    .map(|coeffs| {
                        coeffs
                            .iter()
                            .map(|&c| {
                                field.element(c as u64).map_err(|_| FamilyError::BadCoefficient(c))
                            })
                            .collect::<Result<Vec<_>, _>>()
                            .map(Function::Poly)
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
        };
        let mut family = Family { spec, field, functions, table: None };
        let q = family.field.order() as u64;
        if q * family.spec.m as u64 <= TABLE_LIMIT {
            let mut table = Vec::with_capacity((q as usize) * family.spec.m);
            for x in family.field.elements() {
                for j in 0..family.spec.m {
                    table.push(family.eval_uncached(j, x));
                }
            }
            family.table = Some(table);
        }
        Ok(family)
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn kind(&self) -> FamilyKind {
        self.spec.family
    }

    pub fn m(&self) -> usize {
        self.spec.m
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn is_linearized(&self) -> bool {
        self.spec.family == FamilyKind::Linearized
    }

    fn eval_uncached(&self, j: usize, x: FieldElement) -> FieldElement {
        let f = &self.field;
        match &self.functions[j] {
            Function::Frobenius(i) => f.frobenius_iter(x, *i),
            Function::Power(k) => f.pow(x, *k),
            Function::Poly(coeffs) => coeffs
                .iter()
                .rev()
                .fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c)),
        }
    }

    /// `f_(j+2)(x)` for `j` in `0..m`.
    #[inline]
    pub fn f(&self, j: usize, x: FieldElement) -> FieldElement {
        match &self.table {
            Some(t) => {
                assert!(self.field.contains(x), "element used with a foreign field");
                t[x.index() as usize * self.spec.m + j]
            }
            None => self.eval_uncached(j, x),
        }
    }

    /// `(1, f_2(u), ..., f_(m+1)(u))`.
    pub fn theta(&self, u: FieldElement) -> Vec<FieldElement> {
        std::iter::once(self.field.one())
            .chain((0..self.spec.m).map(|j| self.f(j, u)))
            .collect()
    }

    /// Whether `u -> (1, f_2(u), ..., f_(m+1)(u))` is injective on F_q.
    pub fn theta_injective(&self) -> bool {
        let mut seen = HashSet::new();
        self.field.elements().all(|u| seen.insert(self.theta(u)))
    }
}
