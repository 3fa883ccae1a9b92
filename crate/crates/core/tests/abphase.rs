use std::f64::consts::{PI, TAU};

use coulomb_gauge::abphase::*;
use coulomb_gauge::fieldcore::integrate::{line_integral, Analytic, LineQuadrature};
use coulomb_gauge::fieldcore::PathPolyline;
use coulomb_gauge::presets::GaussianBump;
use coulomb_gauge::solenoid::a_stokes;
use coulomb_gauge::{Constants, Error};
use proptest::prelude::*;

fn units() -> Constants {
    Constants::default()
}

struct XY;
impl GaugeFunction for XY {
    fn value(&self, p: [f64; 3]) -> f64 {
        p[0] * p[1]
    }
}

#[test]
fn half_circles_carry_half_the_flux_phase() {
    let g = PureGaugeField::new(1.7);
    let abd = path_phase(&path_abd(), &g, &units()).unwrap();
    let acd = path_phase(&path_acd(), &g, &units()).unwrap();
    assert_eq!(abd, -1.7 / 2.0);
    assert_eq!(acd, 1.7 / 2.0);
    let q2 = Constants { q: 2.0, hbar: 0.5, ..Constants::default() };
    assert_eq!(path_phase(&path_abd(), &g, &q2).unwrap(), -2.0 * 1.7 / (2.0 * 0.5));
}

#[test]
fn closed_loops_follow_the_winding_number() {
    let g = PureGaugeField::new(3.0);
    let ring = PathPolyline::circle([0.0, 0.0, 0.0], 2.0, 40).unwrap();
    assert_eq!(winding_number(&ring).unwrap(), 1);
    assert!((path_phase(&ring, &g, &units()).unwrap() - 3.0).abs() < 1e-14);
    let away = PathPolyline::circle([5.0, 0.0, 1.0], 1.0, 40).unwrap();
    assert_eq!(winding_number(&away).unwrap(), 0);
    assert_eq!(path_phase(&away, &g, &units()).unwrap(), 0.0);
    let twice = PathPolyline::arc(1.0, 0.0, 2.0 * TAU - 0.1, 0.0, 80).unwrap();
    assert!((winding_angle(&twice).unwrap() - (2.0 * TAU - 0.1)).abs() < 1e-12);
    let backwards = PathPolyline::arc(1.0, 0.0, -1.5 * TAU, 0.0, 80).unwrap();
    assert!((winding_angle(&backwards).unwrap() + 1.5 * TAU).abs() < 1e-12);
}

#[test]
fn paths_through_the_axis_are_rejected() {
    let through = PathPolyline::segment([-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]);
    assert!(matches!(winding_angle(&through), Err(Error::Singularity(_))));
    let onto = PathPolyline::segment([0.0, 0.0, 2.0], [1.0, 0.0, 0.0]);
    assert!(matches!(winding_angle(&onto), Err(Error::Singularity(_))));
}

#[test]
fn two_slit_difference_is_charge_times_flux() {
    assert!((two_slit_phase_difference(TAU, &units()).unwrap() - TAU).abs() < 1e-14);
    assert_eq!(two_slit_phase_difference(0.0, &units()).unwrap(), 0.0);
    for f in [0.3, 1.0, 2.5, -4.0] {
        let d = two_slit_phase_difference(f, &units()).unwrap();
        assert!((d - f).abs() < 1e-14 * f.abs().max(1.0));
    }
    let si = Constants::si();
    let d = two_slit_phase_difference(si.flux_quantum(), &si).unwrap();
    assert!((d - TAU).abs() < 1e-12);
}

#[test]
fn gauge_phase_matches_line_integral_of_the_thin_line_potential() {
    let flux = 2.3;
    let a = Analytic(move |p: [f64; 3]| {
        let rho = p[0].hypot(p[1]);
        let s = a_stokes(rho, flux).unwrap() / rho;
        [-p[1] * s, p[0] * s, 0.0]
    });
    let quad = LineQuadrature::default();
    let g = PureGaugeField::new(flux);
    for path in [path_abd(), path_acd()] {
        let direct = line_integral(&a, &path, quad).unwrap();
        let phase = path_phase(&path, &g, &units()).unwrap();
        assert!((direct - phase).abs() < 1e-10, "{direct} {phase}");
    }
}

#[test]
fn gauge_addition_leaves_closed_loops_unchanged() {
    let ring = PathPolyline::circle([0.2, -0.1, 0.3], 1.5, 48).unwrap();
    let xy = gauge_addition_invariance(&ring, &XY).unwrap();
    assert!(xy.integral.abs() < 1e-10 && !xy.multivalued);
    let bump = GaussianBump { center: [0.5, 0.0, 0.0], width: 0.7, amplitude: 1.3 };
    let gb = gauge_addition_invariance(&ring, &bump).unwrap();
    assert!(gb.integral.abs() < 1e-10 && !gb.multivalued);
    let pure = gauge_addition_invariance(&ring, &PureGaugeField::new(2.0)).unwrap();
    assert!(pure.multivalued);
    assert!((pure.integral - 2.0).abs() < 1e-9);
    assert!(gauge_addition_invariance(&path_abd(), &XY).is_err());
}

#[test]
fn default_gradient_is_fourth_order() {
    struct Cubic;
    impl GaugeFunction for Cubic {
        fn value(&self, p: [f64; 3]) -> f64 {
            p[0].powi(3) + p[1] * p[2] * p[2]
        }
    }
    let g = Cubic.gradient([0.5, -0.4, 0.9]);
    let want = [3.0 * 0.25, 0.81, 2.0 * -0.4 * 0.9];
    for k in 0..3 {
        assert!((g[k] - want[k]).abs() < 1e-10);
    }
}

#[test]
fn fringe_pattern_shape() {
    let p = FringeParams::default();
    let x = linspace(-2e-3, 2e-3, 401);
    let zero = fringe_pattern(&p, 0.0, &x, &units()).unwrap();
    assert_eq!(zero[200], 1.0);
    let spacing = p.fringe_spacing();
    assert!((spacing - 5e-4).abs() < 1e-18);
    assert!((p.fringe_wavenumber() * spacing - TAU).abs() < 1e-12);
    // One flux quantum shifts by a whole fringe; half a quantum swaps maxima and minima.
    let full = fringe_pattern(&p, units().flux_quantum(), &x, &units()).unwrap();
    let half = fringe_pattern(&p, 0.5 * units().flux_quantum(), &x, &units()).unwrap();
    for i in 0..x.len() {
        assert!((full[i] - zero[i]).abs() < 1e-12);
        assert!((half[i] + zero[i] - 1.0).abs() < 1e-12);
    }
    let bad = FringeParams { wavelength: 0.0, ..p };
    assert!(matches!(fringe_pattern(&bad, 0.0, &x, &units()), Err(Error::Parameter(_))));
}

#[test]
fn row_phase_reads_the_flux_offset() {
    let p = FringeParams::default();
    let x = linspace(-2e-3, 2e-3, 256);
    for f in [0.0, 0.4, 1.0, 2.5] {
        let row = fringe_pattern(&p, f, &x, &units()).unwrap();
        let ph = row_phase(&x, &row, p.fringe_wavenumber()).unwrap();
        let d = ph + f;
        assert!((d - TAU * (d / TAU).round()).abs() < 1e-9, "{f} {ph}");
    }
    assert!(matches!(row_phase(&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0], 1.0), Err(Error::Resolution(_))));
}

fn scan(u: &Constants, periods: f64, n_flux: usize, noise: f64) -> FringeScan {
    let fq = u.flux_quantum();
    let s = FringeScan::synthesize(
        FringeParams::default(),
        linspace(0.0, periods * fq, n_flux),
        linspace(-2e-3, 2e-3, 256),
        u,
    )
    .unwrap();
    if noise > 0.0 {
        s.with_noise(noise, 7).unwrap()
    } else {
        s
    }
}

#[test]
fn period_is_the_flux_quantum() {
    let fit = flux_period_fit(&scan(&units(), 4.0, 129, 0.0)).unwrap();
    assert!((fit.period - TAU).abs() < 1e-6 * TAU);
    assert!((fit.periods_covered - 4.0).abs() < 1e-6);
    assert!((fit.samples_per_period - 32.0).abs() < 1e-5);
    assert!(fit.slope < 0.0);
    let q2 = Constants { q: 2.0, ..Constants::default() };
    let p2 = flux_period(&scan(&q2, 4.0, 129, 0.0)).unwrap();
    assert!((p2 - PI).abs() < 1e-6 * PI);
    let si = Constants::si();
    let psi = flux_period(&scan(&si, 3.0, 97, 0.0)).unwrap();
    assert!((psi / si.flux_quantum() - 1.0).abs() < 1e-6);
}

#[test]
fn noisy_period_within_one_percent() {
    let p = flux_period(&scan(&units(), 4.0, 129, 0.01)).unwrap();
    assert!((p / TAU - 1.0).abs() < 1e-2, "{p}");
}

#[test]
fn noise_is_seeded() {
    let a = scan(&units(), 2.0, 33, 0.05);
    let b = scan(&units(), 2.0, 33, 0.05);
    assert_eq!(a, b);
    assert_eq!(a.to_csv(), b.to_csv());
    assert!(a.intensities.iter().flatten().all(|v| (0.0..=1.0).contains(v)));
}

#[test]
fn under_resolved_scans_are_rejected() {
    assert!(matches!(flux_period_fit(&scan(&units(), 1.5, 129, 0.0)), Err(Error::Resolution(_))));
    assert!(matches!(flux_period_fit(&scan(&units(), 4.0, 40, 0.0)), Err(Error::Resolution(_))));
    assert!(matches!(flux_period_fit(&scan(&units(), 4.0, 2, 0.0)), Err(Error::Resolution(_))));
}

#[test]
fn scan_csv_layout() {
    let s = scan(&units(), 2.0, 33, 0.0);
    let csv = s.to_csv();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("flux,x="));
    assert_eq!(header.split(',').count(), 257);
    assert_eq!(lines.count(), 33);
}

#[test]
fn linspace_edges() {
    assert!(linspace(0.0, 1.0, 0).is_empty());
    assert_eq!(linspace(3.0, 5.0, 1), vec![3.0]);
    assert_eq!(linspace(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
}

proptest! {
    #[test]
    fn winding_is_additive(t0 in -6.0f64..6.0, d1 in -5.0f64..5.0, d2 in -5.0f64..5.0) {
        prop_assume!(d1.abs() > 1e-3 && d2.abs() > 1e-3);
        let a = PathPolyline::arc(1.0, t0, t0 + d1, 0.0, 64).unwrap();
        let b = PathPolyline::arc(1.0, t0 + d1, t0 + d1 + d2, 0.0, 64).unwrap();
        let wa = winding_angle(&a).unwrap();
        let wb = winding_angle(&b).unwrap();
        prop_assert!((wa - d1).abs() < 1e-9);
        prop_assert!((wb - d2).abs() < 1e-9);
    }

    #[test]
    fn phase_depends_only_on_endpoints_and_homotopy(r1 in 0.2f64..3.0, r2 in 0.2f64..3.0, z in -2.0f64..2.0, flux in -5.0f64..5.0) {
        // Two arcs between the same rays, on different radii and heights, are homotopic in the punctured plane.
        let g = PureGaugeField::new(flux);
        let a = PathPolyline::arc(r1, 0.3, 2.1, 0.0, 32).unwrap();
        let b = PathPolyline::arc(r2, 0.3, 2.1, z, 7).unwrap();
        let pa = path_phase(&a, &g, &units()).unwrap();
        let pb = path_phase(&b, &g, &units()).unwrap();
        prop_assert!((pa - pb).abs() < 1e-12 * flux.abs().max(1.0));
    }

    #[test]
    fn fringes_are_periodic_in_the_flux_quantum(f in -10.0f64..10.0, n in -3i32..3) {
        let p = FringeParams::default();
        let x = linspace(-1e-3, 1e-3, 33);
        let a = fringe_pattern(&p, f, &x, &units()).unwrap();
        let b = fringe_pattern(&p, f + n as f64 * units().flux_quantum(), &x, &units()).unwrap();
        for (u, v) in a.iter().zip(&b) {
            prop_assert!((u - v).abs() < 1e-9);
        }
    }
}
