#![no_main]

use libfuzzer_sys::fuzz_target;
use linwenger::parse::{format_modulus, parse_modulus};
use linwenger::Field;

fuzz_target!(|data: &[u8]| {
    let Some((&pb, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let p = [2u32, 3, 5, 7, 11, 13][pb as usize % 6];
    if let Ok(coeffs) = parse_modulus(text, p) {
        assert!(coeffs.iter().all(|&c| c < p));
        assert_eq!(parse_modulus(&format_modulus(&coeffs), p).unwrap(), coeffs);
        if coeffs.len() >= 2 && coeffs.len() <= 8 {
            let wide: Vec<u64> = coeffs.iter().map(|&c| c as u64).collect();
            // construction either succeeds or reports an error, never panics
            let _ = Field::new(p as u64, coeffs.len() - 1, Some(&wide));
        }
    }
});
