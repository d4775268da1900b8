//! Gaussian elimination over GF(q) itself.

use super::{Field, FieldElement};

/// Rank of a list of row vectors over GF(q).
pub fn rank(field: &Field, rows: &[Vec<FieldElement>]) -> usize {
    let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, pr);
        let inv = field.inv(m[rank][col]).expect("pivot is nonzero");
        let pivot_row: Vec<FieldElement> = m[rank].iter().map(|&x| field.mul(x, inv)).collect();
        for r in (rank + 1)..m.len() {
            let factor = m[r][col];
            if factor.is_zero() {
                continue;
            }
            for c in col..cols {
                m[r][c] = field.sub(m[r][c], field.mul(factor, pivot_row[c]));
            }
        }
        m[rank] = pivot_row;
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Unique solution of the square system `A x = b`, `None` if `A` is singular.
pub fn solve(field: &Field, a: &[Vec<FieldElement>], b: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<FieldElement>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            assert_eq!(row.len(), n, "system must be square");
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for col in 0..n {
        let pr = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pr);
        let inv = field.inv(m[col][col]).expect("pivot is nonzero");
        for c in col..=n {
            m[col][c] = field.mul(m[col][c], inv);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col];
            for c in col..=n {
                m[r][c] = field.sub(m[r][c], field.mul(factor, m[col][c]));
            }
        }
    }
    Some(m.into_iter().map(|row| row[n]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system_in_gf9() {
        let f = Field::new(3, 2, None).unwrap();
        let t = f.basis()[1];
        let a = vec![vec![f.one(), t], vec![t, f.one()]];
        let x = vec![f.from_int(2), f.add(t, f.one())];
        let b: Vec<_> = a
            .iter()
            .map(|row| f.add(f.mul(row[0], x[0]), f.mul(row[1], x[1])))
            .collect();
        assert_eq!(solve(&f, &a, &b).unwrap(), x);
        assert_eq!(rank(&f, &a), 2);
    }

    #[test]
    fn singular_system() {
        let f = Field::new(5, 1, None).unwrap();
        let a = vec![vec![f.one(), f.from_int(2)], vec![f.from_int(2), f.from_int(4)]];
        assert!(solve(&f, &a, &[f.one(), f.zero()]).is_none());
        assert_eq!(rank(&f, &a), 1);
        assert_eq!(rank(&f, &[]), 0);
    }
}
