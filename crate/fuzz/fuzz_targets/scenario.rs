#![no_main]

use entropic::io::{emit_scenario, parse_scenario};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_scenario(text) {
        assert_eq!(parse_scenario(&emit_scenario(&file)).expect("emitted file parses"), file);
    }
});
