//! Just enough F_p[x] arithmetic to test moduli for irreducibility.
//!
//! Polynomials are coefficient vectors, low degree first, with no trailing
//! zeros (the zero polynomial is the empty vector).

type Poly = Vec<u32>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (p, mut base, mut k, mut acc) = (p as u64, a as u64, p as u64 - 2, 1u64);
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        k >>= 1;
    }
    acc as u32
}

fn rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let mut a = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    let p64 = p as u64;
    while a.len() > dm {
        let da = a.len() - 1;
        let c = a[da] as u64 * lead_inv % p64;
        for (j, &mj) in m.iter().enumerate() {
            let idx = da - dm + j;
            a[idx] = ((a[idx] as u64 + (p64 - c) * mj as u64) % p64) as u32;
        }
        a = trim(a);
    }
    a
}

fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    rem(&prod.into_iter().map(|c| c as u32).collect::<Vec<_>>(), m, p)
}

fn pow_mod(base: &[u32], mut k: u64, m: &[u32], p: u32) -> Poly {
    let mut acc = vec![1];
    let mut b = rem(base, m, p);
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        k >>= 1;
    }
    acc
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn has_root(f: &[u32], p: u32) -> bool {
    let p64 = p as u64;
    (0..p64).any(|x| f.iter().rev().fold(0u64, |acc, &c| (acc * x + c as u64) % p64) == 0)
}

/// Irreducibility of a monic polynomial over F_p: root search up to degree 3,
/// distinct-degree gcd test above that.
pub(super) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    let deg = match f.len() {
        0 | 1 => return false,
        n => n - 1,
    };
    if deg == 1 {
        return true;
    }
    if deg <= 3 {
        return !has_root(&f, p);
    }
    let x = vec![0, 1];
    let mut h = x.clone();
    for _ in 1..=deg / 2 {
        h = pow_mod(&h, p as u64, &f, p);
        let g = gcd(&sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `e`, comparing
/// coefficient vectors `(c_0, c_1, ..., c_{e-1})` from `c_0` onwards.
pub(super) fn smallest_irreducible(p: u32, e: usize) -> Vec<u32> {
    let total = (p as u64).pow(e as u32);
    for n in 0..total {
        let mut coeffs = vec![0u32; e + 1];
        let mut rest = n;
        for i in (0..e).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[e] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
