use holodyn_core::cr::{cr_lower, cr_upper, dilation_check, measure_dilation, DEFAULT_ROUNDS};
use holodyn_core::geometry::{rng::stream, DomainModel, PointC2};
use holodyn_core::kobayashi::{feps_diameter, kobayashi_bounds, kobayashi_exact, psi1, EuclidBall};
use holodyn_core::maps::{BallAutomorphism, Identity};
use num_complex::Complex64;
use proptest::prelude::*;

fn ball_point() -> impl Strategy<Value = PointC2> {
    (0.0f64..0.999, 0.0f64..1.0, 0.0f64..6.3, 0.0f64..6.3).prop_map(|(r, t, a, b)| {
        let c = (t * std::f64::consts::FRAC_PI_2).cos();
        PointC2::new(Complex64::from_polar(r * c, a), Complex64::from_polar(r * (1.0 - c * c).sqrt(), b))
    })
}

fn polydisc_point() -> impl Strategy<Value = PointC2> {
    (0.0f64..0.999, 0.0f64..0.999, 0.0f64..6.3, 0.0f64..6.3)
        .prop_map(|(r, s, a, b)| PointC2::new(Complex64::from_polar(r, a), Complex64::from_polar(s, b)))
}

fn axioms(domain: DomainModel, a: PointC2, b: PointC2, c: PointC2) -> Result<(), TestCaseError> {
    let d = |x, y| kobayashi_exact(&domain, x, y).unwrap().upper;
    prop_assert_eq!(d(a, b), d(b, a));
    prop_assert!(d(a, a) < 1e-7);
    prop_assert!(d(a, c) <= d(a, b) + d(b, c) + 1e-12);
    Ok(())
}

proptest! {
    #[test]
    fn ball_distance_is_a_metric(a in ball_point(), b in ball_point(), c in ball_point()) {
        axioms(DomainModel::UnitBall2, a, b, c)?;
    }

    #[test]
    fn polydisc_distance_is_a_metric(a in polydisc_point(), b in polydisc_point(), c in polydisc_point()) {
        axioms(DomainModel::Polydisc2, a, b, c)?;
    }

    #[test]
    fn disk_distance_is_a_metric(a in polydisc_point(), b in polydisc_point(), c in polydisc_point()) {
        let flat = |p: PointC2| PointC2::new(p.w, Complex64::new(0.0, 0.0));
        axioms(DomainModel::UnitDisk, flat(a), flat(b), flat(c))?;
    }

    #[test]
    fn automorphisms_are_isometries(a in ball_point(), b in ball_point(), c in ball_point()) {
        use holodyn_core::maps::BoundaryMap;
        prop_assume!(c.norm() < 0.95);
        let phi = BallAutomorphism::involution(c);
        let ball = DomainModel::UnitBall2;
        let before = kobayashi_exact(&ball, a, b).unwrap().upper;
        let after = kobayashi_exact(&ball, phi.apply(a), phi.apply(b)).unwrap().upper;
        prop_assert!((before - after).abs() <= 1e-7 * (1.0 + before));
    }

    #[test]
    fn bracket_never_inverts(a in ball_point(), b in ball_point()) {
        let inner = EuclidBall::new(PointC2::ORIGIN, 1.0);
        let outer = EuclidBall::new(PointC2::ORIGIN, 1.5);
        let v = kobayashi_bounds(&DomainModel::UnitBall2, a, b, inner, outer).unwrap();
        prop_assert!(v.lower <= v.upper);
    }
}

#[test]
fn feps_diameter_grows_with_tau() {
    let ball = DomainModel::UnitBall2;
    let p = PointC2::real(1.0, 0.0);
    let mut last = 0.0;
    for tau in [0.02, 0.05, 0.1, 0.2] {
        let d = feps_diameter(&ball, p, 0.01, tau, 200).unwrap();
        assert!(d >= last && d <= psi1(tau), "{tau} {d}");
        last = d;
    }
}

#[test]
fn cr_upper_bracket_on_random_sphere_pairs() {
    let ball = DomainModel::UnitBall2;
    let mut rng = stream(21, 0);
    for _ in 0..50 {
        let x = ball.sample_boundary(&mut rng);
        let y = ball.sample_boundary(&mut rng);
        let path = cr_upper(&ball, x, y, 32, DEFAULT_ROUNDS).unwrap();
        assert!(cr_lower(x, y) <= path.length);
    }
}

#[test]
fn dilation_of_an_automorphism() {
    let ball = DomainModel::UnitBall2;
    let x = PointC2::real(1.0, 0.0);
    let phi = BallAutomorphism::involution(PointC2::real(0.3, 0.0));
    let c = measure_dilation(&ball, &phi, x, 0.2, 5).unwrap();
    assert!(c > 1.0);
    assert!(dilation_check(&ball, &phi, x, 0.2, c, 5).unwrap().holds);
    assert!(!dilation_check(&ball, &phi, x, 0.2, 10.0 * c, 5).unwrap().holds);
    assert!(dilation_check(&ball, &Identity, x, 0.2, 1.0, 5).unwrap().holds);
}
