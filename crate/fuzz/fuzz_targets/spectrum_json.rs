#![no_main]

use libfuzzer_sys::fuzz_target;
use lowrank_core::io::{parse_spectrum_json, spectrum_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = parse_spectrum_json(text) {
        assert!(spec.values().windows(2).all(|w| w[0] >= w[1]));
        let back = parse_spectrum_json(&spectrum_to_json(&spec).unwrap()).unwrap();
        assert_eq!(back.values(), spec.values());
    }
});
