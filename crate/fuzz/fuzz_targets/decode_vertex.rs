#![no_main]

use libfuzzer_sys::fuzz_target;
use linwenger::parse::parse_vertex_id;
use linwenger::{Budget, BuildMode, FamilySpec, Graph};

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let (p, e, m) = [(2u32, 1usize, 1usize), (3, 2, 2), (5, 1, 3), (2, 4, 2)][sel as usize % 4];
    let g = Graph::build(&FamilySpec::linearized(p, e, m), BuildMode::Lazy, Budget::default()).unwrap();
    let limit = g.vertex_count();
    if let Ok(id) = parse_vertex_id(text, limit) {
        let v = g.decode(id).unwrap();
        assert_eq!(g.encode(&v), id);
        assert_eq!(g.neighbor_ids(id).len() as u64, g.family().q());
    }
    if let Ok(raw) = text.trim().parse::<u64>() {
        assert_eq!(g.decode(raw).is_ok(), raw < limit);
    }
});
