#![no_main]

use libfuzzer_sys::fuzz_target;
use qcdos::units::{parse_quantity, QuantityKind};

const KINDS: [QuantityKind; 6] = [
    QuantityKind::Distance,
    QuantityKind::Aperture,
    QuantityKind::Power,
    QuantityKind::FovAngle,
    QuantityKind::Zenith,
    QuantityKind::Wavelength,
];

fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(v) = parse_quantity(text, KINDS[k as usize % KINDS.len()]) {
        assert!(v.is_finite());
    }
});
