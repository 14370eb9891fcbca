#![no_main]

use entropic::io::{emit_distribution, parse_distribution};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_distribution(text) {
        assert_eq!(parse_distribution(&emit_distribution(&file)).expect("emitted file parses"), file);
    }
});
