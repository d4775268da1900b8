//! Conway polynomials for p <= 11, e <= 6, coefficients low degree first.

const TABLE: &[(u32, usize, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (5, 5, &[3, 4, 0, 0, 0, 1]),
    (5, 6, &[2, 0, 1, 4, 1, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (7, 4, &[3, 4, 5, 0, 1]),
    (7, 5, &[4, 1, 0, 0, 0, 1]),
    (7, 6, &[3, 6, 4, 5, 1, 0, 1]),
    (11, 1, &[9, 1]),
    (11, 2, &[2, 7, 1]),
    (11, 3, &[9, 2, 0, 1]),
    (11, 4, &[2, 10, 8, 0, 1]),
    (11, 5, &[9, 0, 10, 0, 0, 1]),
    (11, 6, &[2, 7, 6, 4, 3, 0, 1]),
];

pub(super) fn lookup(p: u32, e: usize) -> Option<&'static [u32]> {
    TABLE
        .iter()
        .find(|&&(tp, te, _)| tp == p && te == e)
        .map(|&(_, _, c)| c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::fp_poly::is_irreducible;

    #[test]
    fn table_entries_are_monic_irreducible() {
        for &(p, e, c) in TABLE {
            assert_eq!(c.len(), e + 1);
            assert_eq!(c[e], 1);
            assert!(is_irreducible(c, p), "p={p} e={e}");
        }
    }

    #[test]
    fn known_entries() {
        assert_eq!(lookup(2, 2), Some(&[1, 1, 1][..]));
        assert_eq!(lookup(3, 2), Some(&[2, 2, 1][..]));
        assert_eq!(lookup(13, 2), None);
    }
}
