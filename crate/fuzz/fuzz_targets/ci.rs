#![no_main]

use entropic::io::{emit_ci, parse_ci, Labels};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let labels = Labels::default_for(6);
    if let Ok(constraints) = parse_ci(text, &labels) {
        let again = parse_ci(&emit_ci(&constraints, &labels), &labels).expect("emitted file parses");
        assert_eq!(again, constraints);
    }
});
