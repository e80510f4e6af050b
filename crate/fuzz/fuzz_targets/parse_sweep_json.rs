#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(sweep) = qcdos::emit::parse_sweep_json(text) {
        let back = qcdos::emit::parse_sweep_json(&qcdos::emit::sweep_json(&sweep)).expect("reparses");
        assert_eq!(back, sweep);
    }
});
