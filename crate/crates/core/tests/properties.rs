use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;

use xlab::asymptotics::{jump_factor, predicted_limit, routes_agree, schedule};
use xlab::christoffel::{Basis, ComputeOptions, Method};
use xlab::geometry::SupportSpec;
use xlab::measure::{DensityProfile, EvalPoint, JumpWeight, MeasureSpec, WeightPiece};
use xlab::measure_file::{MeasureFile, SupportKind};
use xlab::scalar::Precision;

fn double() -> ComputeOptions {
    ComputeOptions {
        precision: Precision::Double,
        ..ComputeOptions::default()
    }
}

fn circle_jump(a: f64, b: f64, t0: f64) -> MeasureSpec {
    MeasureSpec::with_weight(
        SupportSpec::unit_circle(),
        WeightPiece::jump(JumpWeight::new(a, b, t0).unwrap()),
        EvalPoint::AutoJump,
    )
    .unwrap()
}

fn measure_file() -> impl Strategy<Value = MeasureFile> {
    let kind = prop_oneof![
        Just(SupportKind::Circle),
        Just(SupportKind::Interval),
        Just(SupportKind::Ellipse),
        Just(SupportKind::Lemniscate),
    ];
    (
        kind,
        prop::collection::vec(-10.0f64..10.0, 6),
        prop::option::of((0.1f64..10.0, 0.1f64..10.0, -3.0f64..3.0)),
        prop::collection::vec(0.1f64..5.0, 1..4),
        any::<bool>(),
        (-2.0f64..2.0, -2.0f64..2.0),
    )
        .prop_map(|(kind, raw, jump, w0, auto, (re, im))| {
            let params = match kind {
                SupportKind::Circle => raw[..3].to_vec(),
                SupportKind::Interval => raw[..2].to_vec(),
                SupportKind::Ellipse => raw[..5].to_vec(),
                SupportKind::Lemniscate => raw.clone(),
            };
            MeasureFile {
                kind,
                params,
                jump,
                w0,
                profile: if kind == SupportKind::Interval && auto {
                    DensityProfile::Arcsine
                } else {
                    DensityProfile::ArcLength
                },
                z0: if auto && jump.is_some() {
                    EvalPoint::AutoJump
                } else {
                    EvalPoint::Point(Complex64::new(re, im))
                },
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn measure_files_round_trip(file in measure_file()) {
        let text = file.to_string();
        let again: MeasureFile = text.parse().unwrap();
        prop_assert_eq!(again, file);
    }

    #[test]
    fn jump_factor_is_a_symmetric_mean(a in 1e-3f64..1e3, b in 1e-3f64..1e3) {
        let f = jump_factor(a, b).unwrap();
        prop_assert!((f - jump_factor(b, a).unwrap()).abs() <= 1e-14 * f);
        // the logarithmic mean lies between the geometric and arithmetic means
        prop_assert!(f >= (a * b).sqrt() * (1.0 - 1e-12));
        prop_assert!(f <= 0.5 * (a + b) * (1.0 + 1e-12));
        let c = 3.7;
        prop_assert!((jump_factor(c * a, c * b).unwrap() - c * f).abs() <= 1e-13 * c * f);
    }

    #[test]
    fn schedules_are_increasing_and_closed(n_min in 1usize..50, span in 0usize..500, ratio in 1.01f64..3.0) {
        let n_max = n_min + span;
        let s = schedule(n_min, n_max, ratio).unwrap();
        prop_assert_eq!(s[0], n_min);
        prop_assert_eq!(*s.last().unwrap(), n_max);
        prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lambda_is_linear_in_the_measure(
        a in 0.2f64..5.0,
        b in 0.2f64..5.0,
        t0 in -3.0f64..3.0,
        scale in 1e-4f64..1e4,
        n in 1usize..24,
    ) {
        let mu = circle_jump(a, b, t0);
        let z0 = mu.z0().unwrap().z;
        let l = Basis::build(&mu, n, &double()).unwrap().lambda(z0, n, Method::Kernel).unwrap().lambda;
        let scaled = mu.scaled(scale).unwrap();
        let ls = Basis::build(&scaled, n, &double()).unwrap().lambda(z0, n, Method::Kernel).unwrap().lambda;
        prop_assert!((ls / (scale * l) - 1.0).abs() < 1e-12);
        let p = predicted_limit(&mu).unwrap().value;
        let ps = predicted_limit(&scaled).unwrap().value;
        prop_assert!((ps / (scale * p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lambda_decreases_and_starts_at_the_mass(
        a in 0.2f64..5.0,
        b in 0.2f64..5.0,
        t0 in -3.0f64..3.0,
        theta in 0.0f64..TAU,
    ) {
        let mu = circle_jump(a, b, t0);
        let n = 30;
        let z = Complex64::from_polar(1.0, theta);
        let basis = Basis::build(&mu, n, &double()).unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..=n {
            let l = basis.lambda(z, k, Method::Direct).unwrap().lambda;
            prop_assert!(l <= prev * (1.0 + 1e-12));
            prev = l;
        }
        let mass = mu.mass().unwrap();
        let l0 = basis.lambda(z, 0, Method::Kernel).unwrap().lambda;
        prop_assert!((l0 / mass - 1.0).abs() < 1e-12);
        // bounded by the extreme weights times the uniform law
        let (lo, hi) = (a.min(b), a.max(b));
        let ln = basis.lambda(z, n, Method::Kernel).unwrap().lambda;
        let uniform = TAU / (n + 1) as f64;
        prop_assert!(ln >= lo * uniform * (1.0 - 1e-12) && ln <= hi * uniform * (1.0 + 1e-12));
    }

    #[test]
    fn kernel_and_direct_agree(a in 0.2f64..5.0, b in 0.2f64..5.0, t0 in -3.0f64..3.0, n in 0usize..40) {
        let mu = circle_jump(a, b, t0);
        let z0 = mu.z0().unwrap().z;
        let basis = Basis::build(&mu, n, &double()).unwrap();
        let k = basis.lambda(z0, n, Method::Kernel).unwrap().lambda;
        let d = basis.lambda(z0, n, Method::Direct).unwrap();
        prop_assert!((d.lambda / k - 1.0).abs() < 1e-10);
        prop_assert!(d.anchor_residual.unwrap() < 1e-10);
    }

    #[test]
    fn predicted_routes_agree_on_ellipses(
        a in 1.0f64..3.0,
        ratio in 0.2f64..0.95,
        t in 0.0f64..TAU,
        rotation in -1.0f64..1.0,
    ) {
        let b = a * ratio;
        let mu = MeasureSpec::with_weight(
            SupportSpec::Ellipse { a, b, center: Complex64::new(0.3, -0.2), rotation },
            WeightPiece::jump(JumpWeight::new(2.0, 1.0, t).unwrap()),
            EvalPoint::AutoJump,
        )
        .unwrap();
        let p = predicted_limit(&mu).unwrap();
        prop_assert!(routes_agree(&p, 1e-12));
    }
}
