#![no_main]

use libfuzzer_sys::fuzz_target;
use lowrank_core::io::{parse_matrix_market_with_limit, write_matrix_market};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // small limit so huge declared sizes fail fast instead of allocating
    if let Ok(m) = parse_matrix_market_with_limit(text, 1 << 16) {
        let mut buf = Vec::new();
        write_matrix_market(&m, &mut buf).unwrap();
        let back =
            parse_matrix_market_with_limit(std::str::from_utf8(&buf).unwrap(), 1 << 16).unwrap();
        assert_eq!(back.as_slice(), m.as_slice());
    }
});
