#![no_main]

use entropic::io::{emit_partial, parse_partial};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_partial(text) {
        let again = parse_partial(&emit_partial(&file.vector, &file.labels)).expect("emitted file parses");
        assert_eq!(again.vector, file.vector);
        assert!(again.exact);
    }
});
