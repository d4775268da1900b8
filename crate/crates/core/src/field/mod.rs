//! Exact arithmetic in GF(p^e).
//!
//! Elements are coordinate vectors over F_p in the polynomial basis
//! `1, t, ..., t^(e-1)`. A [`FieldElement`] packs those coordinates into a
//! single canonical index (the coordinate vector read as a base-p integer,
//! lowest basis coordinate least significant) together with a tag of the
//! field it belongs to, so elements are `Copy` and cheap to hash.

mod conway;
mod fp_poly;
pub mod linalg;
mod matrix;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use matrix::FpMatrix;

/// Largest supported characteristic.
pub const MAX_CHARACTERISTIC: u32 = 1 << 15;
/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("p must be prime (got {0})")]
    NonPrime(u64),
    #[error("modulus is reducible over F_p")]
    ReducibleModulus,
    #[error("modulus must be monic of degree {expected} (got {got} coefficients)")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("coefficient {value} is not in [0, {p})")]
    CoefficientOutOfRange { value: u64, p: u32 },
    #[error("field GF({p}^{e}) is outside the supported range (p <= 2^15, q <= 2^24, e >= 1)")]
    Unsupported { p: u64, e: usize },
    #[error("element index {index} out of range for a field of order {q}")]
    IndexOutOfRange { index: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
}

/// An element of some [`Field`].
///
/// Ordering compares canonical indices, which is the canonical element order
/// used for every deterministic enumeration in this crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    index: u32,
    field: u32,
}

impl FieldElement {
    /// Canonical index in `[0, q)`.
    pub fn index(self) -> u32 {
        self.index
    }

    pub fn is_zero(self) -> bool {
        self.index == 0
    }

    pub fn field_tag(self) -> u32 {
        self.field
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.index)
    }
}

/// Binary and unary operations accepted by [`Field::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(u64),
}

/// A concrete finite field GF(p^e) with a fixed irreducible modulus.
#[derive(Clone)]
pub struct Field {
    p: u32,
    e: usize,
    q: u32,
    // monic, low degree first, length e + 1
    modulus: Vec<u32>,
    tag: u32,
    pow_p: Vec<u32>,
    dual: Vec<FieldElement>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for Field {}

/// Serializable description of a field: enough to rebuild it exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub e: usize,
    pub modulus: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Builds GF(p^e). Without an explicit modulus the Conway polynomial is
    /// used when tabulated (p <= 11, e <= 6), otherwise the lexicographically
    /// smallest monic irreducible polynomial of degree `e`.
    pub fn new(p: u64, e: usize, modulus: Option<&[u64]>) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if e == 0 || p > MAX_CHARACTERISTIC as u64 {
            return Err(FieldError::Unsupported { p, e });
        }
        let q = (p as u128).checked_pow(e as u32);
        let q = match q {
            Some(q) if q <= MAX_ORDER as u128 => q as u32,
            _ => return Err(FieldError::Unsupported { p, e }),
        };
        let p = p as u32;
        let modulus = match modulus {
            Some(coeffs) => {
                if coeffs.len() != e + 1 {
                    return Err(FieldError::DegreeMismatch { expected: e, got: coeffs.len() });
                }
                if let Some(&bad) = coeffs.iter().find(|&&c| c >= p as u64) {
                    return Err(FieldError::CoefficientOutOfRange { value: bad, p });
                }
                if coeffs[e] != 1 {
                    return Err(FieldError::DegreeMismatch { expected: e, got: coeffs.len() });
                }
                let coeffs: Vec<u32> = coeffs.iter().map(|&c| c as u32).collect();
                if !fp_poly::is_irreducible(&coeffs, p) {
                    return Err(FieldError::ReducibleModulus);
                }
                coeffs
            }
            None => default_modulus(p, e),
        };
        Ok(Self::from_verified(p, e, q, modulus))
    }

    pub fn from_params(params: &FieldParams) -> Result<Field, FieldError> {
        let m: Vec<u64> = params.modulus.iter().map(|&c| c as u64).collect();
        Field::new(params.p as u64, params.e, Some(&m))
    }

    fn from_verified(p: u32, e: usize, q: u32, modulus: Vec<u32>) -> Field {
        let mut pow_p = Vec::with_capacity(e + 1);
        let mut acc = 1u32;
        for _ in 0..=e {
            pow_p.push(acc);
            acc = acc.saturating_mul(p);
        }
        let mut field = Field {
            p,
            e,
            q,
            tag: fingerprint(p, &modulus),
            modulus,
            pow_p,
            dual: Vec::new(),
        };
        field.dual = field.compute_dual_basis();
        field
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, low degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn params(&self) -> FieldParams {
        FieldParams { p: self.p, e: self.e, modulus: self.modulus.clone() }
    }

    pub fn tag(&self) -> u32 {
        self.tag
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.field == self.tag
    }

    fn wrap(&self, index: u32) -> FieldElement {
        FieldElement { index, field: self.tag }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// The element with the given canonical index.
    pub fn element(&self, index: u64) -> Result<FieldElement, FieldError> {
        if index >= self.q as u64 {
            return Err(FieldError::IndexOutOfRange { index, q: self.q });
        }
        Ok(self.wrap(index as u32))
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, value: i64) -> FieldElement {
        self.wrap(value.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElement, FieldError> {
        if coords.len() > self.e {
            return Err(FieldError::DegreeMismatch { expected: self.e, got: coords.len() });
        }
        let mut index = 0u32;
        for (i, &c) in coords.iter().enumerate() {
            if c >= self.p {
                return Err(FieldError::CoefficientOutOfRange { value: c as u64, p: self.p });
            }
            index += c * self.pow_p[i];
        }
        Ok(self.wrap(index))
    }

    /// Coordinates in the polynomial basis, length `e`.
    pub fn coords(&self, x: FieldElement) -> Vec<u32> {
        self.check(x);
        let mut out = vec![0; self.e];
        self.digits(x.index, &mut out);
        out
    }

    fn digits(&self, mut index: u32, out: &mut [u32]) {
        for d in out.iter_mut().take(self.e) {
            *d = index % self.p;
            index /= self.p;
        }
    }

    fn undigits(&self, digits: &[u32]) -> u32 {
        digits
            .iter()
            .take(self.e)
            .rev()
            .fold(0u32, |acc, &d| acc * self.p + d)
    }

    /// Polynomial basis `1, t, ..., t^(e-1)`.
    pub fn basis(&self) -> Vec<FieldElement> {
        (0..self.e).map(|i| self.wrap(self.pow_p[i])).collect()
    }

    /// Trace-dual of [`Field::basis`]: `tr(basis[i] * dual[j]) = [i == j]`.
    pub fn dual_basis(&self) -> &[FieldElement] {
        &self.dual
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |i| self.wrap(i))
    }

    /// Nonzero elements in canonical order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(move |i| self.wrap(i))
    }

    #[inline]
    fn check(&self, x: FieldElement) {
        assert_eq!(x.field, self.tag, "element used with a foreign field");
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        if self.p == 2 {
            return self.wrap(a.index ^ b.index);
        }
        if self.e == 1 {
            return self.wrap((a.index + b.index) % self.p);
        }
        let (mut x, mut y) = (a.index, b.index);
        let mut out = 0u32;
        for i in 0..self.e {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * self.pow_p[i];
            x /= self.p;
            y /= self.p;
        }
        self.wrap(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.check(a);
        if self.p == 2 {
            return a;
        }
        let mut x = a.index;
        let mut out = 0u32;
        for i in 0..self.e {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * self.pow_p[i];
            x /= self.p;
        }
        self.wrap(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// Multiplication by an F_p scalar.
    pub fn scale(&self, c: u32, a: FieldElement) -> FieldElement {
        self.check(a);
        let c = (c % self.p) as u64;
        let mut x = a.index;
        let mut out = 0u32;
        for i in 0..self.e {
            let d = ((x % self.p) as u64 * c % self.p as u64) as u32;
            out += d * self.pow_p[i];
            x /= self.p;
        }
        self.wrap(out)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        if a.index == 0 || b.index == 0 {
            return self.zero();
        }
        if a.index == 1 {
            return b;
        }
        if b.index == 1 {
            return a;
        }
        let p = self.p as u64;
        if self.e == 1 {
            return self.wrap((a.index as u64 * b.index as u64 % p) as u32);
        }
        let e = self.e;
        let mut da = [0u32; 32];
        let mut db = [0u32; 32];
        self.digits(a.index, &mut da);
        self.digits(b.index, &mut db);
        let mut prod = [0u64; 64];
        for i in 0..e {
            if da[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        // reduce: t^e = -(m_0 + m_1 t + ... + m_{e-1} t^{e-1})
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..e {
                let m = self.modulus[j] as u64;
                if m != 0 {
                    prod[k - e + j] = (prod[k - e + j] + (p - c) * m) % p;
                }
            }
        }
        let mut out = [0u32; 32];
        for i in 0..e {
            out[i] = prod[i] as u32;
        }
        self.wrap(self.undigits(&out[..e]))
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        self.check(a);
        let mut base = a;
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// x -> x^p.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        if self.e == 1 {
            self.check(a);
            return a;
        }
        self.pow(a, self.p as u64)
    }

    /// x -> x^(p^i), by `i mod e` repeated p-th powerings.
    pub fn frobenius_iter(&self, a: FieldElement, i: usize) -> FieldElement {
        let mut x = a;
        for _ in 0..(i % self.e) {
            x = self.frobenius(x);
        }
        self.check(x);
        x
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a);
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Checked entry point: validates field membership instead of panicking.
    pub fn arith(
        &self,
        a: FieldElement,
        b: Option<FieldElement>,
        op: ArithOp,
    ) -> Result<FieldElement, FieldError> {
        if !self.contains(a) || b.is_some_and(|b| !self.contains(b)) {
            return Err(FieldError::FieldMismatch);
        }
        let rhs = || b.ok_or(FieldError::FieldMismatch);
        match op {
            ArithOp::Add => Ok(self.add(a, rhs()?)),
            ArithOp::Sub => Ok(self.sub(a, rhs()?)),
            ArithOp::Mul => Ok(self.mul(a, rhs()?)),
            ArithOp::Div => self.div(a, rhs()?),
            ArithOp::Neg => Ok(self.neg(a)),
            ArithOp::Inv => self.inv(a),
            ArithOp::Pow(k) => Ok(self.pow(a, k)),
        }
    }

    /// Absolute trace `x + x^p + ... + x^(p^(e-1))`, as a value in `[0, p)`.
    pub fn trace(&self, x: FieldElement) -> u32 {
        let mut acc = self.zero();
        let mut y = x;
        for _ in 0..self.e {
            acc = self.add(acc, y);
            y = self.frobenius(y);
        }
        debug_assert!(acc.index < self.p, "trace left the prime field");
        acc.index
    }

    pub fn checked_trace(&self, x: FieldElement) -> Result<u32, FieldError> {
        if !self.contains(x) {
            return Err(FieldError::FieldMismatch);
        }
        Ok(self.trace(x))
    }

    fn compute_dual_basis(&self) -> Vec<FieldElement> {
        let basis = self.basis();
        let e = self.e;
        let mut gram = FpMatrix::zeros(e, e, self.p);
        for i in 0..e {
            for j in 0..e {
                gram.set(i, j, self.trace(self.mul(basis[i], basis[j])));
            }
        }
        let inv = gram
            .inverse()
            .expect("trace form is nondegenerate for a field");
        (0..e)
            .map(|j| {
                (0..e).fold(self.zero(), |acc, i| {
                    self.add(acc, self.scale(inv.get(i, j), basis[i]))
                })
            })
            .collect()
    }

    /// Coordinates of `x` recovered through the dual basis, `x = sum tr(dual_i x) basis_i`.
    pub fn coords_via_trace(&self, x: FieldElement) -> Vec<u32> {
        self.dual.iter().map(|&d| self.trace(self.mul(d, x))).collect()
    }

    /// Renders an element as a polynomial in `t`, e.g. `t^2+2t+1`.
    pub fn display(&self, x: FieldElement) -> String {
        let c = self.coords(x);
        let terms: Vec<String> = (0..self.e)
            .rev()
            .filter(|&i| c[i] != 0)
            .map(|i| {
                let coeff = if c[i] == 1 && i > 0 { String::new() } else { c[i].to_string() };
                match i {
                    0 => coeff,
                    1 => format!("{coeff}t"),
                    _ => format!("{coeff}t^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_owned()
        } else {
            terms.join("+")
        }
    }
}

fn default_modulus(p: u32, e: usize) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    if let Some(c) = conway::lookup(p, e) {
        return c.to_vec();
    }
    fp_poly::smallest_irreducible(p, e)
}

fn fingerprint(p: u32, modulus: &[u32]) -> u32 {
    // FNV-1a over the defining data
    let mut h: u32 = 0x811c_9dc5;
    for w in std::iter::once(p).chain(modulus.iter().copied()) {
        for b in w.to_le_bytes() {
            h ^= b as u32;
            h = h.wrapping_mul(0x0100_0193);
        }
    }
    h
}
