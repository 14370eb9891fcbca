#![no_main]

use entropic::io::{emit_bayes_net, parse_bayes_net};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_bayes_net(text) {
        assert_eq!(parse_bayes_net(&emit_bayes_net(&file)).expect("emitted file parses"), file);
    }
});
