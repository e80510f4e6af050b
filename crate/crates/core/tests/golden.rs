//! Reference values computed independently with a dense trapezoid rule
//! (10^6 panels) and direct arithmetic, then frozen here.

use std::f64::consts::FRAC_PI_3;

use qcdos::atmosphere::{cn2, turbulence_moment, HufnagelValley, QuadratureSettings};
use qcdos::risk::AttackType;
use qcdos::scattering::SatelliteSurface;
use qcdos::turbulence::fried_parameter;
use qcdos::{
    build_scenario, BandEdge, ConfigDocument, Direction, Evaluator, PathGeometry, ScenarioOverrides,
};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn hv57_profile_values() {
    let hv = HufnagelValley::default();
    assert!(rel(cn2(0.0, &hv).unwrap(), 1.727e-14) < 1e-12);
    assert!(rel(cn2(1000.0, &hv).unwrap(), 1.3939443794079227e-16) < 1e-12);
}

#[test]
fn moments_and_fried_length_500km() {
    let hv = HufnagelValley::default();
    let q = QuadratureSettings::default();
    let up = PathGeometry::new(0.0, 500e3, 0.0, Direction::Uplink).unwrap();
    let down = PathGeometry::new(0.0, 500e3, 0.0, Direction::Downlink).unwrap();
    let mu_u = turbulence_moment(&up, &hv, 30e3, q).unwrap();
    let mu_d = turbulence_moment(&down, &hv, 30e3, q).unwrap();
    assert!(rel(mu_u, 2.2639618062630746e-12) < 1e-6, "{mu_u}");
    assert!(rel(mu_d, 3.4380268197745986e-16) < 1e-6, "{mu_d}");
    let r0 = fried_parameter(810e-9, 0.0, mu_u).unwrap();
    assert!(rel(r0, 0.086778263550055232) < 1e-6, "{r0}");
}

#[test]
fn ground_leo_ground_chain() {
    // 1 kW, 1 m aperture, 810 nm, no AO, satellite at 500 km seen at 60°
    // on the way up and at zenith on the way down, S = 4 m², ε = 1,
    // 0.6 m receiver, T0 = 0.85.
    let config = ConfigDocument::default();
    let ov = ScenarioOverrides {
        power: Some(1e3),
        surface: Some(SatelliteSurface {
            area: 4.0,
            albedo: 1.0,
            ..Default::default()
        }),
        ..Default::default()
    };
    let spec = build_scenario("Ground-LEO-Ground", &ov, &config).unwrap();
    assert_eq!(spec.attack_type, AttackType::OutOfFov);
    assert_eq!(spec.geometry.zenith, FRAC_PI_3);
    assert_eq!(spec.receiver.aperture_diameter, 0.6);
    assert!(!spec.uses_adaptive_optics());

    let eval = Evaluator::new(&spec, &config).unwrap();
    let s = &eval.state;
    assert!(rel(s.fried_length.unwrap(), 0.0572523026187165) < 1e-6);
    assert!(rel(s.w_tot * s.w_tot, 38.588955766551841) < 1e-6);
    let i0 = qcdos::beam::intensity(s, 1e3, 0.0);
    assert!(rel(i0, 11.919415190142566) < 1e-6, "{i0}");
    let p = eval.received_power(1e3, BandEdge::Nominal);
    assert!(rel(p, 1.0316238353882768e-11) < 1e-6, "{p}");
}
