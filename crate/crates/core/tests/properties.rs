use proptest::prelude::*;

use qcdos::atmosphere::{turbulence_moment, HufnagelValley, QuadratureSettings};
use qcdos::beam::{pointing_factor, received_power_in_fov, PropagationModel};
use qcdos::effects::{classify_effects, default_ladder};
use qcdos::risk::{impact_from_effects, AttackType};
use qcdos::scenario::Preset;
use qcdos::turbulence::{turbulence_waist, turbulence_waist_from_variance};
use qcdos::{
    build_scenario, find_threshold_power, parse_config, run_sweep, BandEdge, ConfigDocument,
    Direction, Evaluator, LaserSource, PathGeometry, PowerGrid, Receiver, ScenarioOverrides,
};

fn direction() -> impl Strategy<Value = Direction> {
    prop_oneof![Just(Direction::Uplink), Just(Direction::Downlink)]
}

fn attack() -> impl Strategy<Value = AttackType> {
    prop_oneof![Just(AttackType::InFov), Just(AttackType::OutOfFov)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn waist_grows_and_power_falls_with_distance(
        d in 0.05f64..1.5,
        h1 in 50e3f64..2000e3,
        zenith in 0.0f64..1.2,
        dir in direction(),
        ao in any::<bool>(),
        z1 in 1e3f64..1e6,
        dz in 0.0f64..1e7,
        dr in 0.05f64..1.0,
        ddr in 0.0f64..1.0,
    ) {
        let model = PropagationModel::default();
        let src = LaserSource::new(1e3, d, 810e-9);
        let g = PathGeometry::new(0.0, h1, zenith, dir).unwrap();
        let a = model.propagate_to(&src, &g, z1, ao).unwrap();
        let b = model.propagate_to(&src, &g, z1 + dz, ao).unwrap();
        prop_assert!(b.w_tot >= a.w_tot);
        let rx = Receiver::new(dr);
        prop_assert!(received_power_in_fov(&b, 1e3, &rx) <= received_power_in_fov(&a, 1e3, &rx));
        let bigger = Receiver::new(dr + ddr);
        prop_assert!(received_power_in_fov(&a, 1e3, &bigger) >= received_power_in_fov(&a, 1e3, &rx));
    }

    #[test]
    fn turbulence_waist_orderings(
        wd in 0.1f64..100.0,
        d in 0.05f64..2.0,
        r0 in 0.01f64..1.0,
        dr0 in 0.0f64..1.0,
        var in 0.0f64..5.0,
        dvar in 0.0f64..5.0,
    ) {
        prop_assert!(turbulence_waist(wd, 1.0, d, r0 + dr0) <= turbulence_waist(wd, 1.0, d, r0));
        prop_assert!(
            turbulence_waist_from_variance(wd, var + dvar) >= turbulence_waist_from_variance(wd, var)
        );
    }

    #[test]
    fn moment_grows_with_path_length(
        h0 in 0.0f64..20e3,
        len in 100.0f64..1e6,
        extra in 0.0f64..1e6,
    ) {
        let hv = HufnagelValley::default();
        let q = QuadratureSettings::default();
        // Uplinks grow at the top; downlinks keep their receiver end (h0)
        // and grow at the source end, so the weight is anchored at h0 for
        // both through the direction-specific form.
        let up = PathGeometry::new(h0, h0 + len, 0.0, Direction::Uplink).unwrap();
        let up_long = PathGeometry::new(h0, h0 + len + extra, 0.0, Direction::Uplink).unwrap();
        let a = turbulence_moment(&up, &hv, 30e3, q).unwrap();
        let b = turbulence_moment(&up_long, &hv, 30e3, q).unwrap();
        prop_assert!(b >= a * (1.0 - 1e-6));

        let top = 40e3 + h0;
        let lo = (top - len).max(0.0);
        let lower = (lo - extra).max(0.0);
        if lo < top {
            let down = PathGeometry::new(lo, top, 0.0, Direction::Downlink).unwrap();
            let down_long = PathGeometry::new(lower, top, 0.0, Direction::Downlink).unwrap();
            let a = turbulence_moment(&down, &hv, 30e3, q).unwrap();
            let b = turbulence_moment(&down_long, &hv, 30e3, q).unwrap();
            prop_assert!(b >= a * (1.0 - 1e-6), "{a} {b}");
        }
    }

    #[test]
    fn pointing_factor_is_a_fraction(wt in 0.0f64..100.0, sigma in 0.0f64..100.0) {
        let t = pointing_factor(wt, sigma);
        prop_assert!((0.0..=1.0).contains(&t));
    }

    #[test]
    fn effect_reports_grow_with_power(a in -17.0f64..7.0, b in -17.0f64..7.0, d in 0.05f64..1.5) {
        let (lo, hi) = (10f64.powf(a.min(b)), 10f64.powf(a.max(b)));
        let rx = Receiver::new(d);
        let ladder = default_ladder();
        let r1 = classify_effects(lo, &rx, &ladder).unwrap();
        let r2 = classify_effects(hi, &rx, &ladder).unwrap();
        for t in &r1.triggered {
            let u = r2.triggered.iter().find(|u| u.id == t.id);
            prop_assert!(u.is_some_and(|u| u.certainty >= t.certainty));
        }
        prop_assert!(impact_from_effects(&r1) <= impact_from_effects(&r2));
    }

    #[test]
    fn suppression_ratio_below_one(h in 200e3f64..2000e3, zenith in 0.05f64..1.3, ao in any::<bool>()) {
        let config = ConfigDocument::default();
        let power = |z: f64| {
            let ov = ScenarioOverrides {
                attack_type: Some(AttackType::InFov),
                target_altitude: Some(h),
                zenith: Some(z),
                adaptive_optics: Some(ao),
                ..Default::default()
            };
            let spec = build_scenario("Ground-LEO", &ov, &config).unwrap();
            Evaluator::new(&spec, &config).unwrap().received_power(1.0, BandEdge::Nominal)
        };
        prop_assert!(power(zenith) / power(0.0) < 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sweep_bands_are_ordered(preset in 0usize..9, attack in attack(), wl in prop_oneof![Just(810e-9), Just(1550e-9)]) {
        let config = ConfigDocument::default();
        let ov = ScenarioOverrides {
            attack_type: Some(attack),
            wavelength: Some(wl),
            ..Default::default()
        };
        let Ok(spec) = build_scenario(Preset::ALL[preset].name(), &ov, &config) else {
            return Ok(());
        };
        let grid = PowerGrid { points_per_decade: 5, ..Default::default() };
        let r = run_sweep(&spec, &config, &grid).unwrap();
        for w in r.points.windows(2) {
            prop_assert!(w[1].p_recv_w > w[0].p_recv_w);
        }
        for p in &r.points {
            prop_assert!(p.p_recv_low_w <= p.p_recv_w && p.p_recv_w <= p.p_recv_high_w);
        }
    }

    #[test]
    fn threshold_agrees_with_sweep(preset in 0usize..9, attack in attack(), effect in 0usize..10) {
        let config = ConfigDocument::default();
        let ov = ScenarioOverrides { attack_type: Some(attack), ..Default::default() };
        let Ok(spec) = build_scenario(Preset::ALL[preset].name(), &ov, &config) else {
            return Ok(());
        };
        let id = config.effects[effect].id.clone();
        let grid = PowerGrid::default();
        let t = find_threshold_power(&spec, &config, &id, BandEdge::Nominal).unwrap();
        let sweep = run_sweep(&spec, &config, &grid).unwrap();
        let first = sweep.points.iter().find(|p| p.effects.contains(&id)).map(|p| p.p_ini_w);
        match (t, first) {
            (Some(t), Some(f)) if t <= grid.p_min => prop_assert_eq!(f, grid.p_min),
            (Some(t), Some(f)) => {
                // Within one grid cell (25 points per decade) plus the 1% bisection.
                let cell = 10f64.powf(1.0 / 25.0);
                prop_assert!(f / t <= cell * 1.01 && t / f <= cell * 1.01, "{t} vs {f}");
                let at = run_sweep(
                    &spec,
                    &config,
                    &PowerGrid { p_min: t, p_max: t, points_per_decade: 1 },
                )
                .unwrap();
                prop_assert!(at.points[0].effects.contains(&id));
            }
            (None, Some(f)) => prop_assert!(false, "sweep reached {id} at {f} W"),
            (Some(t), None) => prop_assert!(t < 1.0 || t > 1e6 / 1.05),
            (None, None) => {}
        }
    }
}

fn valid_config() -> impl Strategy<Value = ConfigDocument> {
    (
        (1e-15f64..1e-13, 5.0f64..40.0, 0.5f64..1.0, 0.5f64..1.0),
        (0.05f64..1.0, 0.1f64..2.0, 1.0f64..100.0, 1.0f64..100.0, 1.0f64..500.0),
        (1e-9f64..1e-6, 0.01f64..4.0, 0.01f64..1.0),
        (1.0f64..3.0, 0.0f64..1.0, 0.0f64..1e-5, 1u32..50),
    )
        .prop_map(|(atm, ao, band, beam)| {
            let mut c = ConfigDocument::default();
            c.atmosphere.a0 = atm.0;
            c.atmosphere.v = atm.1;
            c.set_zenith_transmittance(810e-9, atm.2);
            c.set_zenith_transmittance(1550e-9, atm.3);
            c.ao.fitting_coefficient = ao.0;
            c.ao.actuator_spacing = ao.1;
            c.ao.bandwidth = ao.2;
            c.ao.greenwood_frequency = ao.3;
            c.ao.snr = ao.4;
            c.out_of_fov.kappa = band.0;
            c.surface.area = band.1;
            c.surface.albedo = band.2;
            c.beam.beam_quality = beam.0;
            c.beam.pointing_sigma = beam.1;
            c.beam.jitter_rad = beam.2;
            c.sweep.points_per_decade = beam.3;
            c
        })
}

// (JSON pointer, replacement) pairs that break exactly one invariant.
const BREAKERS: &[(&str, &str)] = &[
    ("/atmosphere/A0", "-1.0"),
    ("/atmosphere/v", "0.0"),
    ("/atmosphere/T0/810e-9", "1.5"),
    ("/atmosphere/T0/1550e-9", "0.0"),
    ("/atmosphere/transmitter_loss", "2.0"),
    ("/atmosphere/ceiling", "-5.0"),
    ("/atmosphere/quadrature/rel_tol", "0.0"),
    ("/atmosphere/quadrature/max_depth", "0"),
    ("/ao/snr", "-3.0"),
    ("/ao/actuator_spacing", "0.0"),
    ("/beam/beam_quality", "0.5"),
    ("/beam/pointing_sigma", "-1.0"),
    ("/beam/jitter_rad", "-1e-6"),
    ("/apertures/ground_lws", "0.0"),
    ("/out_of_fov/kappa", "2e-6"),
    ("/out_of_fov/kappa_range/0", "1e-5"),
    ("/surface/albedo", "1.5"),
    ("/surface/area", "10.0"),
    ("/effects/0/onset", "-1.0"),
    ("/effects/1/onset_upper", "1e-12"),
    ("/sweep/p_min", "0.0"),
    ("/sweep/points_per_decade", "0"),
    ("/platforms/plane/power_envelope/0", "-1.0"),
    ("/platforms/drone/altitude", "-10.0"),
    ("/wavelength", "0.0"),
    ("/schema_version", "\"9\""),
    ("/ao/unknown_key", "1.0"),
    ("/nonsense", "{}"),
];

fn set_pointer(doc: &mut serde_json::Value, pointer: &str, value: serde_json::Value) {
    let (parent, key) = pointer.rsplit_once('/').unwrap();
    let target = doc.pointer_mut(parent).expect("parent exists");
    match target {
        serde_json::Value::Object(m) => {
            m.insert(key.to_string(), value);
        }
        serde_json::Value::Array(a) => a[key.parse::<usize>().unwrap()] = value,
        _ => panic!("not a container at {parent}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_form_is_a_fixed_point(c in valid_config()) {
        c.validate().unwrap();
        let text = c.to_canonical_json();
        let back = parse_config(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.to_canonical_json(), text);
    }

    #[test]
    fn any_broken_invariant_is_rejected(c in valid_config(), which in 0usize..BREAKERS.len()) {
        let (pointer, value) = BREAKERS[which];
        let mut doc: serde_json::Value = serde_json::from_str(&c.to_canonical_json()).unwrap();
        set_pointer(&mut doc, pointer, serde_json::from_str(value).unwrap());
        let err = parse_config(&doc.to_string()).unwrap_err();
        prop_assert!(err.is_config(), "{pointer}: {err}");
    }
}

#[test]
fn exoatmospheric_legs_skip_the_atmosphere() {
    let config = ConfigDocument::default();
    for name in ["LEO-LEO", "LEO-GEO"] {
        let spec = build_scenario(name, &ScenarioOverrides::default(), &config).unwrap();
        let eval = Evaluator::new(&spec, &config).unwrap();
        assert_eq!(eval.state.moment, 0.0);
        assert_eq!(eval.state.w_t, 0.0);
        assert_eq!(eval.state.tau_a, 1.0);
    }
}

#[test]
fn reflection_scales_with_surface() {
    let config = ConfigDocument::default();
    let spec = build_scenario("Ground-LEO-Ground", &ScenarioOverrides::default(), &config).unwrap();
    let mut brighter = spec.clone();
    let r = brighter.reflection.as_mut().unwrap();
    r.surface.albedo *= 10.0;
    let a = Evaluator::new(&spec, &config).unwrap().received_power(1e3, BandEdge::Nominal);
    let b = Evaluator::new(&brighter, &config).unwrap().received_power(1e3, BandEdge::Nominal);
    assert!((b / a - 10.0).abs() < 1e-12);
}
