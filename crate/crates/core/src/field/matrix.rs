use std::fmt;

/// Dense matrix over F_p, row-major, entries kept in `[0, p)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    p: u32,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} over F_{}", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
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

/// Reduced row-echelon form plus the pivot column of each nonzero row.
pub struct Echelon {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize, p: u32) -> Self {
        FpMatrix { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.set(i, i, 1 % p);
        }
        m
    }

    /// Builds from rows; every entry is reduced mod `p`.
    pub fn from_rows(rows: &[Vec<u32>], p: u32) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols, p);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v % p);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.p as u64;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p) as u32
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let p = self.p as u64;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else { continue };
            m.swap_rows(row, pr);
            let inv = inv_mod(m.get(row, col), self.p) as u64;
            for c in 0..m.cols {
                let v = m.get(row, c) as u64 * inv % p;
                m.set(row, c, v as u32);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col) as u64;
                if factor == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let v = (m.get(r, c) as u64 + (p - factor) * m.get(row, c) as u64) % p;
                    m.set(r, c, v as u32);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Rank and a basis of the right kernel `{x : M x = 0}`.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<u32>>) {
        let Echelon { matrix, pivots } = self.echelon();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let kernel = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1 % p;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - matrix.get(r, f)) % p;
                }
                v
            })
            .collect();
        (pivots.len(), kernel)
    }

    /// Some solution of `M x = b`, or `None` when `b` is outside the column space.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1, self.p);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let Echelon { matrix, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = matrix.get(r, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n, self.p);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let Echelon { matrix, pivots } = aug.echelon();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n, self.p);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, matrix.get(r, n + c));
            }
        }
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix() {
        let (rank, ker) = FpMatrix::zeros(2, 2, 2).rank_kernel();
        assert_eq!(rank, 0);
        assert_eq!(ker.len(), 2);
    }

    #[test]
    fn identity_matrix() {
        let (rank, ker) = FpMatrix::identity(4, 5).rank_kernel();
        assert_eq!(rank, 4);
        assert!(ker.is_empty());
    }

    #[test]
    fn all_ones_over_f2() {
        let m = FpMatrix::from_rows(&[vec![1, 1], vec![1, 1]], 2);
        let (rank, ker) = m.rank_kernel();
        assert_eq!(rank, 1);
        assert_eq!(ker, vec![vec![1, 1]]);
    }

    #[test]
    fn solve_and_inverse() {
        let m = FpMatrix::from_rows(&[vec![0, 1], vec![1, 1]], 2);
        let inv = m.inverse().unwrap();
        assert_eq!(inv, FpMatrix::from_rows(&[vec![1, 1], vec![1, 0]], 2));
        let x = m.solve(&[1, 0]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![1, 0]);
        let singular = FpMatrix::from_rows(&[vec![1, 2], vec![2, 4]], 5);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&[1, 0]).is_none());
        assert!(singular.solve(&[1, 2]).is_some());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = FpMatrix::from_rows(&[vec![1, 2, 0, 4], vec![2, 4, 1, 1], vec![3, 6, 1, 0]], 5);
        let (rank, ker) = m.rank_kernel();
        assert_eq!(rank + ker.len(), 4);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
        let kmat = FpMatrix::from_rows(&ker, 5);
        assert_eq!(kmat.rank(), ker.len());
    }
}
