#![no_main]

use libfuzzer_sys::fuzz_target;
use lowrank_core::rangefinder::parse_sidecar;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_sidecar(text);
    }
});
