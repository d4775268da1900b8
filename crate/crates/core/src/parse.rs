//! Text syntaxes for command-line input.
//!
//! * modulus: `c0,c1,...,ce`, F_p coefficients, low degree first.
//! * f-list: `poly;poly;...`, each poly a comma-separated coefficient list
//!   (low degree first). A coefficient is a base-p numeral whose digits are
//!   its basis coordinates, most significant first, so its value is the
//!   canonical element index. `12` over GF(9) is `t + 2`. Digits above 9 use
//!   `a..z`, which caps custom families at p <= 36.
//! * vertex id: a decimal integer below `2 q^(m+1)`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("'{0}' is not a non-negative integer")]
    NotANumber(String),
    #[error("coefficient {value} is not below p = {p}")]
    CoefficientOutOfRange { value: u64, p: u32 },
    #[error("'{digit}' is not a base-{p} digit")]
    BadDigit { digit: char, p: u32 },
    #[error("coefficient '{text}' has more than e = {e} digits")]
    TooManyDigits { text: String, e: usize },
    #[error("digit strings need p <= 36, got {0}")]
    RadixTooLarge(u32),
    #[error("vertex id {id} out of range [0, {limit})")]
    IdOutOfRange { id: u64, limit: u64 },
}

fn number(s: &str) -> Result<u64, ParseError> {
    let t = s.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::NotANumber(t.to_string()));
    }
    t.parse().map_err(|_| ParseError::NotANumber(t.to_string()))
}

/// Parses `c0,c1,...` into F_p coefficients.
pub fn parse_modulus(s: &str, p: u32) -> Result<Vec<u32>, ParseError> {
    if s.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    s.split(',')
        .map(|c| {
            let v = number(c)?;
            if v >= p as u64 {
                return Err(ParseError::CoefficientOutOfRange { value: v, p });
            }
            Ok(v as u32)
        })
        .collect()
}

pub fn format_modulus(coeffs: &[u32]) -> String {
    coeffs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn coefficient(text: &str, p: u32, e: usize) -> Result<u32, ParseError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ParseError::NotANumber(String::new()));
    }
    if t.chars().count() > e {
        return Err(ParseError::TooManyDigits { text: t.to_string(), e });
    }
    t.chars().try_fold(0u32, |acc, ch| {
        let d = ch
            .to_digit(36)
            .filter(|&d| d < p)
            .ok_or(ParseError::BadDigit { digit: ch, p })?;
        // e digits of base p fit: the field order is bounded well below u32
        Ok(acc * p + d)
    })
}

/// Parses an f-list into canonical element indices per coefficient.
pub fn parse_f_list(s: &str, p: u32, e: usize) -> Result<Vec<Vec<u32>>, ParseError> {
    if p > 36 {
        return Err(ParseError::RadixTooLarge(p));
    }
    if (p as u64).checked_pow(e as u32).is_none_or(|q| q > u32::MAX as u64) {
        return Err(ParseError::TooManyDigits { text: s.to_string(), e });
    }
    if s.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    s.split(';')
        .map(|poly| poly.split(',').map(|c| coefficient(c, p, e)).collect())
        .collect()
}

/// Inverse of [`parse_f_list`]; every coefficient is written with `e` digits.
pub fn format_f_list(f_list: &[Vec<u32>], p: u32, e: usize) -> String {
    f_list
        .iter()
        .map(|poly| {
            poly.iter()
                .map(|&c| {
                    let mut digits = vec!['0'; e];
                    let mut v = c;
                    for slot in digits.iter_mut().rev() {
                        *slot = char::from_digit(v % p, 36).expect("digit below 36");
                        v /= p;
                    }
                    digits.into_iter().collect::<String>()
                })
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Parses a decimal vertex id and checks it against `limit = 2 q^(m+1)`.
pub fn parse_vertex_id(s: &str, limit: u64) -> Result<u64, ParseError> {
    let id = number(s)?;
    if id >= limit {
        return Err(ParseError::IdOutOfRange { id, limit });
    }
    Ok(id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn modulus_examples() {
        assert_eq!(parse_modulus("1,1,1", 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(parse_modulus(" 2, 0 ,1", 3).unwrap(), vec![2, 0, 1]);
        assert_eq!(parse_modulus("1,2", 2), Err(ParseError::CoefficientOutOfRange { value: 2, p: 2 }));
        assert!(matches!(parse_modulus("1,-1", 5), Err(ParseError::NotANumber(_))));
        assert!(matches!(parse_modulus("1,,1", 5), Err(ParseError::NotANumber(_))));
        assert_eq!(parse_modulus("", 5), Err(ParseError::Empty));
    }

    #[test]
    fn f_list_examples() {
        // GF(9): "12" = t + 2 = index 5
        assert_eq!(parse_f_list("0,12;1", 3, 2).unwrap(), vec![vec![0, 5], vec![1]]);
        assert_eq!(parse_f_list("0,0,1;0,0,0,1", 5, 1).unwrap(), vec![vec![0, 0, 1], vec![0, 0, 0, 1]]);
        assert_eq!(parse_f_list("0,b", 13, 1).unwrap(), vec![vec![0, 11]]);
        assert_eq!(parse_f_list("3", 3, 1), Err(ParseError::BadDigit { digit: '3', p: 3 }));
        assert!(matches!(parse_f_list("012", 3, 2), Err(ParseError::TooManyDigits { .. })));
        assert_eq!(parse_f_list("1", 37, 1), Err(ParseError::RadixTooLarge(37)));
        assert_eq!(format_f_list(&[vec![0, 5], vec![1]], 3, 2), "00,12;01");
    }

    #[test]
    fn vertex_ids() {
        assert_eq!(parse_vertex_id("7", 8).unwrap(), 7);
        assert_eq!(parse_vertex_id("8", 8), Err(ParseError::IdOutOfRange { id: 8, limit: 8 }));
        assert!(parse_vertex_id("+1", 8).is_err());
        assert!(parse_vertex_id("99999999999999999999999", u64::MAX).is_err());
    }

    proptest! {
        #[test]
        fn modulus_round_trip(p in prop::sample::select(vec![2u32, 3, 5, 7, 13]), raw in prop::collection::vec(0u32..1000, 1..8)) {
            let coeffs: Vec<u32> = raw.iter().map(|c| c % p).collect();
            prop_assert_eq!(parse_modulus(&format_modulus(&coeffs), p).unwrap(), coeffs);
        }

        #[test]
        fn f_list_round_trip(
            (p, e) in prop::sample::select(vec![(2u32, 1usize), (2, 3), (3, 2), (5, 2), (31, 1), (7, 3)]),
            raw in prop::collection::vec(prop::collection::vec(0u32..u32::MAX, 1..5), 1..4),
        ) {
            let q = p.pow(e as u32);
            let list: Vec<Vec<u32>> = raw.iter().map(|poly| poly.iter().map(|c| c % q).collect()).collect();
            prop_assert_eq!(parse_f_list(&format_f_list(&list, p, e), p, e).unwrap(), list);
        }

        #[test]
        fn parsers_never_panic(s in "\\PC{0,24}") {
            let _ = parse_modulus(&s, 7);
            let _ = parse_f_list(&s, 7, 3);
            let _ = parse_vertex_id(&s, 1000);
        }
    }
}
