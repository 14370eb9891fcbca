#![no_main]

use entropic::io::{emit_porta, parse_porta};
use entropic::{Scenario, SubsetIndex};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let cycle = Scenario::cycle(3).unwrap().nonempty_members().to_vec();
    let all: Vec<SubsetIndex> = SubsetIndex::all(3).into_iter().filter(|s| !s.is_empty()).collect();
    for coords in [cycle, all] {
        if let Ok(sys) = parse_porta(text, 3, &coords) {
            assert_eq!(parse_porta(&emit_porta(&sys), 3, &coords).expect("emitted file parses"), sys);
        }
    }
});
