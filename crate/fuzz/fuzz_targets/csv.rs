#![no_main]

use libfuzzer_sys::fuzz_target;
use lowrank_core::io::{parse_csv, write_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse_csv(text) {
        let mut buf = Vec::new();
        write_csv(&m, &mut buf).unwrap();
        let back = parse_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back.as_slice(), m.as_slice());
    }
});
