#![no_main]

use libfuzzer_sys::fuzz_target;
use supercong_core::rational::{format_rational, parse_rational};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_rational(text) {
        assert!(!q.denom().to_string().starts_with('-'));
        let again = parse_rational(&format_rational(&q)).expect("formatted value parses");
        assert_eq!(again, q);
    }
});
