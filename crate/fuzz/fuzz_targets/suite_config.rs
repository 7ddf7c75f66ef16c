#![no_main]

use libfuzzer_sys::fuzz_target;
use supercong_core::report::SuiteConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(config) = SuiteConfig::from_json(text) {
        config.validate().expect("accepted configs validate");
        let echoed = serde_json::to_string(&config).expect("serializes");
        assert_eq!(SuiteConfig::from_json(&echoed).expect("echo parses"), config);
    }
});
