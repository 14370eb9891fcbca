#![no_main]

use entropic::io::{emit_inequalities, parse_inequalities};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_inequalities(text) {
        let again = parse_inequalities(&emit_inequalities(&file)).expect("emitted file parses");
        assert_eq!(again.system, file.system);
        assert_eq!(again.labels, file.labels);
    }
});
