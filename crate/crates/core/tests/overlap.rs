use overlap_core::density::{kde_fit, normal_density, DensityModel};
use overlap_core::normal;
use overlap_core::overlap::*;
use overlap_core::quadrature::{Lattice, DEFAULT_GRID_1D, DEFAULT_GRID_2D};

fn n(mean: f64, sd: f64) -> DensityModel {
    normal_density(mean, sd).unwrap()
}

fn closed(theta: f64) -> f64 {
    2.0 * (1.0 - normal::cdf(theta.abs() / std::f64::consts::SQRT_2))
}

const OB_AT_0164: f64 = 0.986728930716;

#[test]
fn closed_form_examples() {
    let q = q_normal_closed_form(0.164, 1.0).unwrap();
    assert!((q.value - 0.91).abs() < 0.005);
    assert!((q.value - 0.9077).abs() < 1e-4);
    assert_eq!(q.std_error, 0.0);
    assert_eq!(q_normal_closed_form(0.0, 1.0).unwrap().value, 1.0);
    assert!((q_normal_closed_form(0.9539, 1.0).unwrap().value - 0.5).abs() < 1e-3);
    assert_eq!(
        q_normal_closed_form(-0.7, 2.0).unwrap().value,
        q_normal_closed_form(0.7, 2.0).unwrap().value
    );
    assert!(q_normal_closed_form(1.0, 0.0).is_err());
}

#[test]
fn acceptance_examples() {
    let p0 = n(0.0, 1.0);
    let p1 = n(1.0, 1.0);
    assert!((mh_acceptance(0.0, 1.0, &p0, &p1).unwrap() - (-1.0f64).exp()).abs() < 1e-12);
    assert_eq!(mh_acceptance(0.3, 0.3, &p0, &p1).unwrap(), 1.0);
    assert_eq!(mh_acceptance(-2.0, 5.0, &p0, &p0).unwrap(), 1.0);
    let narrow = kde_fit(&[0.0, 0.1], Some(0.01)).unwrap();
    assert!(mh_acceptance(0.0, 50.0, &narrow, &narrow).is_err());
}

#[test]
fn quadrature_examples() {
    let p0 = n(0.0, 1.0);
    let om = om_quadrature(&p0, &p0, DEFAULT_GRID_2D).unwrap();
    assert!((om.value - 1.0).abs() < 1e-6);
    assert_eq!(om.method, Method::Quadrature);
    let om = om_quadrature(&p0, &n(0.164, 1.0), DEFAULT_GRID_2D).unwrap();
    assert!((om.value - 0.9077).abs() < 1e-4);
    let far = om_quadrature(&p0, &n(20.0, 1.0), DEFAULT_GRID_2D).unwrap();
    assert!(far.value < 1e-6);
    assert!(far.degenerate_support);
    assert!(om_quadrature(&p0, &p0, 100).is_err());
    assert!(om_quadrature(&p0, &p0, 99).is_err());
}

#[test]
fn ovl_examples() {
    let p0 = n(0.0, 1.0);
    assert!((ovl_quadrature(&p0, &p0, DEFAULT_GRID_1D).unwrap().value - 1.0).abs() < 1e-8);
    let v = ovl_quadrature(&p0, &n(0.164, 1.0), DEFAULT_GRID_1D)
        .unwrap()
        .value;
    assert!((v - 2.0 * normal::cdf(-0.082)).abs() < 1e-4);
    assert!((v - 0.9346).abs() < 1e-4);
    let v = ovl_quadrature(&p0, &n(3.0, 1.0), DEFAULT_GRID_1D)
        .unwrap()
        .value;
    assert!((v - 0.1336).abs() < 1e-4);
}

#[test]
fn ovl_closed_form_against_dense_brute_force() {
    for theta in [0.164, 1.0, 3.0] {
        let (lo, hi) = (-10.0, 10.0 + theta);
        let m = 1_000_000;
        let h = (hi - lo) / m as f64;
        let s: f64 = (0..m)
            .map(|i| {
                let x = lo + (i as f64 + 0.5) * h;
                let a = (-0.5 * x * x).exp();
                let b = (-0.5 * (x - theta) * (x - theta)).exp();
                a.min(b)
            })
            .sum::<f64>()
            * h
            / (2.0 * std::f64::consts::PI).sqrt();
        assert!(
            (s - 2.0 * normal::cdf(-theta / 2.0)).abs() < 1e-9,
            "theta {theta}"
        );
    }
}

#[test]
fn barker_and_crossmatch_limits() {
    let p0 = n(0.0, 1.0);
    assert!((ob_quadrature(&p0, &p0, DEFAULT_GRID_2D).unwrap().value - 1.0).abs() < 1e-6);
    assert!((oc_quadrature(&p0, &p0, DEFAULT_GRID_1D).unwrap().value - 1.0).abs() < 1e-6);

    let ob = ob_quadrature(&p0, &n(0.164, 1.0), DEFAULT_GRID_2D).unwrap();
    assert!(ob.value >= 0.9077 && ob.value <= 1.0);
    assert!((ob.value - OB_AT_0164).abs() < 1e-10, "{}", ob.value);

    let oc = oc_quadrature(&p0, &n(3.0, 1.0), DEFAULT_GRID_1D)
        .unwrap()
        .value;
    assert!(oc >= 0.1336);
    assert!(
        oc_quadrature(&p0, &n(20.0, 1.0), DEFAULT_GRID_1D)
            .unwrap()
            .value
            < 1e-6
    );
}

#[test]
fn barker_monte_carlo_agrees_with_quadrature() {
    let p0 = n(0.0, 1.0);
    let p1 = n(1.0, 1.0);
    let quad = ob_quadrature(&p0, &p1, DEFAULT_GRID_2D).unwrap().value;
    let mc = ob_monte_carlo(&p0, &p1, 100_000, 11).unwrap();
    assert!(mc.std_error > 0.0);
    assert!(
        (mc.value - quad).abs() < 3.0 * mc.std_error,
        "{} vs {quad}",
        mc.value
    );
}

#[test]
fn quadrature_symmetry_is_exact() {
    let pairs = [
        (n(0.0, 1.0), n(0.7, 1.0)),
        (n(-1.0, 0.5), n(2.0, 3.0)),
        (
            kde_fit(&[0.1, 0.4, 2.0, 2.2], Some(0.3)).unwrap(),
            n(1.0, 1.0),
        ),
    ];
    for (a, b) in &pairs {
        let ab = om_quadrature(a, b, 301).unwrap().value;
        let ba = om_quadrature(b, a, 301).unwrap().value;
        assert_eq!(ab.to_bits(), ba.to_bits());
    }
}

#[test]
fn quadrature_matches_closed_form_on_theta_grid() {
    let p0 = n(0.0, 1.0);
    for theta in [0.0, 0.25, 0.5, 1.0, 2.0, 4.0] {
        let v = om_quadrature(&p0, &n(theta, 1.0), DEFAULT_GRID_2D)
            .unwrap()
            .value;
        assert!((v - closed(theta)).abs() < 1e-4, "theta {theta}: {v}");
    }
}

#[test]
fn complement_identity() {
    for (a, b) in [(n(0.0, 1.0), n(0.5, 1.0)), (n(0.0, 1.0), n(1.0, 2.0))] {
        let lat = Lattice::union(&a, &b, 401).unwrap();
        let fa = lat.eval(&a);
        let fb = lat.eval(&b);
        let w = &lat.weights;
        let mut abs = 0.0;
        for i in 0..w.len() {
            for j in 0..w.len() {
                abs += w[i] * w[j] * (fa[i] * fb[j] - fa[j] * fb[i]).abs();
            }
        }
        let om = om_quadrature(&a, &b, 401).unwrap().value;
        assert!(
            (om - (1.0 - 0.5 * abs)).abs() < 1e-6,
            "{om} vs {}",
            1.0 - 0.5 * abs
        );
    }
}

#[test]
fn measure_ordering() {
    let pairs = [
        (n(0.0, 1.0), n(0.0, 1.0)),
        (n(0.0, 1.0), n(0.164, 1.0)),
        (n(0.0, 1.0), n(1.5, 1.0)),
        (n(0.0, 1.0), n(0.5, 3.0)),
        (
            kde_fit(&[-1.0, 0.0, 0.5, 3.0], Some(0.4)).unwrap(),
            n(1.0, 1.0),
        ),
    ];
    for (a, b) in &pairs {
        let om = om_quadrature(a, b, 401).unwrap().value;
        let ob = ob_quadrature(a, b, 401).unwrap().value;
        let ovl = ovl_quadrature(a, b, DEFAULT_GRID_1D).unwrap().value;
        let oc = oc_quadrature(a, b, DEFAULT_GRID_1D).unwrap().value;
        assert!(om <= ob + 1e-8 && ob <= 1.0);
        assert!(ovl <= oc + 1e-8 && oc <= 1.0);
    }
}

#[test]
fn monte_carlo_identical_densities_is_exact() {
    let p0 = n(0.0, 1.0);
    let mc = om_monte_carlo(&p0, &p0, 1000, 99).unwrap();
    assert_eq!(mc.value, 1.0);
    assert_eq!(mc.std_error, 0.0);
    assert_eq!(mc.seed, Some(99));
    assert!(om_monte_carlo(&p0, &p0, 99, 1).is_err());
}

#[test]
fn monte_carlo_against_closed_form() {
    let p0 = n(0.0, 1.0);
    assert!((closed(1.0) - 0.4795).abs() < 5e-5);
    for theta in [0.164, 1.0] {
        let mc = om_monte_carlo(&p0, &n(theta, 1.0), 100_000, 2024).unwrap();
        assert!(
            (mc.value - closed(theta)).abs() < 3.0 * mc.std_error,
            "theta {theta}: {} ± {}",
            mc.value,
            mc.std_error
        );
    }
}

#[test]
fn monte_carlo_consistency_across_sizes() {
    let p0 = n(0.0, 1.0);
    let p1 = n(0.8, 1.3);
    let quad = om_quadrature(&p0, &p1, DEFAULT_GRID_2D).unwrap().value;
    let mut last = f64::INFINITY;
    for draws in [1_000, 10_000, 100_000] {
        let mc = om_monte_carlo(&p0, &p1, draws, 5).unwrap();
        assert!(mc.std_error < last);
        last = mc.std_error;
        assert!(
            (mc.value - quad).abs() < 4.0 * mc.std_error,
            "{draws}: {} vs {quad}",
            mc.value
        );
    }
}

#[test]
fn monte_carlo_symmetry_within_combined_error() {
    let p0 = n(0.0, 1.0);
    let p1 = n(0.6, 1.0);
    let a = om_monte_carlo(&p0, &p1, 50_000, 3).unwrap();
    let b = om_monte_carlo(&p1, &p0, 50_000, 3).unwrap();
    let se = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
    assert!((a.value - b.value).abs() < 3.0 * se);
}

#[test]
fn monte_carlo_is_reproducible() {
    let p0 = n(0.0, 1.0);
    let p1 = n(0.3, 1.0);
    let a = om_monte_carlo(&p0, &p1, 5_000, 17).unwrap();
    let b = om_monte_carlo(&p0, &p1, 5_000, 17).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
}

#[test]
fn unit_interval_clamps_only_round_off() {
    assert_eq!(unit_interval(1.0 + 5e-13, "x").unwrap(), 1.0);
    assert_eq!(unit_interval(-5e-13, "x").unwrap(), 0.0);
    assert!(unit_interval(1.0 + 1e-9, "x").is_err());
    assert!(unit_interval(f64::NAN, "x").is_err());
}
