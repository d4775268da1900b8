#![no_main]

use libfuzzer_sys::fuzz_target;
use linwenger::parse::{format_f_list, parse_f_list};
use linwenger::FamilySpec;

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let (p, e) = [(2u32, 1usize), (2, 3), (3, 2), (5, 1), (7, 2), (31, 1)][sel as usize % 6];
    if let Ok(list) = parse_f_list(text, p, e) {
        assert_eq!(parse_f_list(&format_f_list(&list, p, e), p, e).unwrap(), list);
        if list.len() <= 3 && list.iter().all(|f| f.len() <= 16) {
            if let Ok(fam) = FamilySpec::custom(p, e, list).realize() {
                let _ = fam.theta_injective();
            }
        }
    }
});
