#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = qcdos::parse_config(text) {
        // Anything accepted must survive its own canonical form.
        let canonical = config.to_canonical_json();
        let again = qcdos::parse_config(&canonical).expect("canonical config reparses");
        assert_eq!(again, config);
    }
});
