//! Unit-suffixed quantity parsing for the command line.
//!
//! Everything inside the library is SI (m, W, rad). Human input such as
//! `500km`, `2.5 kW`, `10urad` or `60deg` is converted here. A bare number
//! takes the default unit of its [`QuantityKind`].

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantityKind {
    /// Distances and altitudes; bare numbers are km.
    Distance,
    /// Aperture diameters; bare numbers are m.
    Aperture,
    /// Laser and received power; bare numbers are kW.
    Power,
    /// FOV angles; bare numbers are µrad.
    FovAngle,
    /// Zenith angles; bare numbers are degrees.
    Zenith,
    /// Optical wavelength; bare numbers are nm.
    Wavelength,
}

impl QuantityKind {
    // Factors are (numerator, denominator) so that e.g. 810 nm divides by
    // 1e9 and lands on the same f64 as the literal 810e-9.
    fn default_factor(self) -> (f64, f64) {
        let unit = match self {
            QuantityKind::Distance => "km",
            QuantityKind::Aperture => "m",
            QuantityKind::Power => "kW",
            QuantityKind::FovAngle => "urad",
            QuantityKind::Zenith => "deg",
            QuantityKind::Wavelength => "nm",
        };
        self.unit_factor(unit).expect("default unit is known")
    }

    fn unit_factor(self, unit: &str) -> Option<(f64, f64)> {
        use QuantityKind::*;
        let f = match (self, unit) {
            (Distance | Aperture | Wavelength, "m") => (1.0, 1.0),
            (Distance | Aperture, "km") => (1e3, 1.0),
            (Distance | Aperture | Wavelength, "cm") => (1.0, 1e2),
            (Distance | Aperture | Wavelength, "mm") => (1.0, 1e3),
            (Wavelength, "um" | "µm") => (1.0, 1e6),
            (Wavelength, "nm") => (1.0, 1e9),
            (Power, "W") => (1.0, 1.0),
            (Power, "mW") => (1.0, 1e3),
            (Power, "kW") => (1e3, 1.0),
            (Power, "MW") => (1e6, 1.0),
            (FovAngle | Zenith, "rad") => (1.0, 1.0),
            (FovAngle | Zenith, "mrad") => (1.0, 1e3),
            (FovAngle | Zenith, "urad" | "µrad") => (1.0, 1e6),
            (FovAngle | Zenith, "deg" | "°") => (std::f64::consts::PI, 180.0),
            _ => return None,
        };
        Some(f)
    }
}

/// Parse `text` as a quantity of `kind`, returning its SI value.
pub fn parse_quantity(text: &str, kind: QuantityKind) -> Result<f64> {
    let t = text.trim();
    let split = t
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == '+'
                || c == '-'
                || ((c == 'e' || c == 'E') && is_exponent(t, i)))
        })
        .map(|(i, _)| i)
        .unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let value: f64 = num
        .parse()
        .map_err(|_| Error::domain(format!("cannot parse number in `{text}`")))?;
    if !value.is_finite() {
        return Err(Error::domain(format!("non-finite quantity `{text}`")));
    }
    let unit = unit.trim();
    let factor = if unit.is_empty() {
        kind.default_factor()
    } else {
        kind.unit_factor(unit)
            .ok_or_else(|| Error::domain(format!("unknown unit `{unit}` for {kind:?}")))?
    };
    Ok(value * factor.0 / factor.1)
}

// An `e` is an exponent marker only when a digit precedes it and a digit or
// sign follows.
fn is_exponent(t: &str, i: usize) -> bool {
    let b = t.as_bytes();
    let before = i > 0 && b[i - 1].is_ascii_digit();
    let after = b
        .get(i + 1)
        .is_some_and(|c| c.is_ascii_digit() || *c == b'-' || *c == b'+');
    before && after
}
