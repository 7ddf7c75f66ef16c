#![no_main]

use libfuzzer_sys::fuzz_target;
use supercong_core::verifier::StatementId;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(id) = text.parse::<StatementId>() {
        assert_eq!(id.name(), text.trim());
        let _ = id.needs();
        let _ = id.exponent_rule();
    }
});
