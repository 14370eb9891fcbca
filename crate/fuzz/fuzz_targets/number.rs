#![no_main]

use entropic::io::parse_number;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((value, exact)) = parse_number(text) {
        if exact {
            assert_eq!(parse_number(&value.to_string()), Ok((value, true)));
        }
    }
});
