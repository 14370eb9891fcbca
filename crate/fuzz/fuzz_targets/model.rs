#![no_main]

use entropic::entropy::{check_compatibility, marginal_entropy_vector};
use entropic::io::{emit_model, parse_model};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_model(text) {
        assert_eq!(parse_model(&emit_model(&file)).expect("emitted file parses"), file);
        assert!(check_compatibility(&file.model).is_compatible());
        let _ = marginal_entropy_vector(&file.model);
    }
});
