#![no_main]

use libfuzzer_sys::fuzz_target;
use supercong_core::report::{emit, Format, Report};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = Report::from_json(text) {
        for format in [Format::Json, Format::Csv, Format::Text] {
            let mut sink = Vec::new();
            emit(&report, format, &mut sink).expect("emits to memory");
        }
        let again = Report::from_json(&report.to_json().unwrap()).expect("round trip");
        assert_eq!(again, report);
    }
});
