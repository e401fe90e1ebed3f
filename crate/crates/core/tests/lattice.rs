use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ridgerate::lattice::{
    default_fft_grid, fft_nd, lattice_coefficients, make_cutoff, shift_search, shift_search_masses, window_samples,
    windowed_coefficients, CutoffFunction, Weight,
};
use ridgerate::targets::{by_name, TargetFunction};
use ridgerate::{Complex64, Error};

fn cutoff(d: usize) -> CutoffFunction {
    make_cutoff(d, 2.0, 0.25, 2.0, 256).unwrap()
}

/// Midpoint-rule `L²([0,1])` distance between the expansion and the target.
fn l2_error_1d(f: &TargetFunction, r: f64) -> f64 {
    let c = cutoff(1);
    let e = lattice_coefficients(f, &c, &[0.0], r, default_fft_grid(1, r, 2.0)).unwrap();
    let n = 512;
    ((0..n)
        .map(|i| {
            let x = (i as f64 + 0.5) / n as f64;
            (e.reconstruct(&[x]) - f.eval(&[x])).norm_sqr()
        })
        .sum::<f64>()
        / n as f64)
        .sqrt()
}

#[test]
fn cutoff_examples() {
    let c = cutoff(1);
    assert_eq!(c.eval(&[0.5]), 1.0);
    assert_eq!(c.eval(&[1.9]), 0.0);
    assert!(matches!(make_cutoff(1, 1.5, 0.25, 2.0, 64), Err(Error::CutoffGeometryInfeasible { .. })));
}

#[test]
fn cutoff_identity_region_and_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for d in 1..=3 {
        let c = cutoff(d);
        for _ in 0..1000 {
            let inside: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
            assert_eq!(c.eval(&inside), 1.0);
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..3.0)).collect();
            let v = c.eval(&x);
            assert!((0.0..=1.0).contains(&v));
            if x.iter().any(|&t| !(-0.25..=1.75).contains(&t)) {
                assert_eq!(v, 0.0, "{x:?}");
            }
        }
    }
}

#[test]
fn cutoff_transform_envelope() {
    // |φ̂(ξ)| ≤ C e^{-c|ξ|^{1/2}}, fitted through ξ = 1, 2
    let c = cutoff(1);
    let mag = |xi: f64| c.fourier_1d(xi, 512).norm();
    let (m1, m2) = (mag(1.0), mag(2.0));
    let rate = (m1 / m2).ln() / (2f64.sqrt() - 1.0);
    let constant = m1 * rate.exp();
    assert!(rate > 0.0, "{m1} {m2}");
    for xi in [4.0, 8.0, 16.0, 32.0] {
        let envelope = constant * (-rate * f64::sqrt(xi)).exp();
        assert!(mag(xi) <= envelope, "xi={xi}: {} > {envelope}", mag(xi));
    }
    assert!((c.fourier_1d(0.0, 512).re - 1.75).abs() < 1e-10);
}

#[test]
fn exponential_reconstructs_on_the_domain() {
    let f = TargetFunction::exponential(&[1]);
    assert!(l2_error_1d(&f, 4.0) <= 1e-6);
}

#[test]
fn zero_target_has_no_coefficients() {
    for d in 1..=2 {
        let f = by_name("zero", d).unwrap();
        let e = lattice_coefficients(&f, &cutoff(d), &vec![0.0; d], 4.0, default_fft_grid(d, 4.0, 2.0)).unwrap();
        assert!(e.is_empty());
    }
}

#[test]
fn windowed_exponential_matches_convolution() {
    // h = φ e^{2πix}, so ĥ(ξ) = φ̂(ξ - 1)
    let f = TargetFunction::exponential(&[1]);
    let c = cutoff(1);
    for a in [0.0, 0.2] {
        let e = windowed_coefficients(&f, &c, &[a], 6.0, 2048).unwrap();
        for nu in -12..=12i64 {
            let expected = c.fourier_1d(a + nu as f64 / 2.0 - 1.0, 512) / 2.0;
            let got = e.coefficient(&[nu]).unwrap_or_default();
            assert!((got - expected).norm() < 1e-9, "a={a} nu={nu}: {got} vs {expected}");
        }
    }
}

#[test]
fn gaussian_mass_stabilizes() {
    let f = TargetFunction::gaussian(1, 1.0, 0.5);
    let c = cutoff(1);
    let a = shift_search(&f, &c, Weight::Polynomial { s: 0.0 }, 8.0, 8, 1024).unwrap();
    let mass = |r: f64| lattice_coefficients(&f, &c, &a, r, default_fft_grid(1, r, 2.0)).unwrap().ell1_mass();
    let masses: Vec<f64> = [4.0, 8.0, 16.0, 32.0, 64.0].iter().map(|&r| mass(r)).collect();
    // the cutoff transform only decays like e^{-c|ξ|^{1/2}}, so the tail
    // settles slowly; check that successive increments shrink geometrically
    let steps: Vec<f64> = masses.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(steps.iter().all(|&s| s > 0.0), "{masses:?}");
    assert!(steps.windows(2).all(|w| w[1] <= 0.35 * w[0]), "{masses:?}");
    assert!(steps[3] <= 1e-3, "{masses:?}");
}

#[test]
fn reconstruction_improves_with_radius() {
    for name in ["gaussian", "bump3"] {
        let f = by_name(name, 1).unwrap();
        let errors: Vec<f64> = [4.0, 8.0, 16.0].iter().map(|&r| l2_error_1d(&f, r)).collect();
        assert!(errors.windows(2).all(|w| w[1] < w[0]), "{name}: {errors:?}");
    }
}

#[test]
fn aliasing_is_rejected() {
    let f = by_name("gaussian", 1).unwrap();
    let err = lattice_coefficients(&f, &cutoff(1), &[0.0], 64.0, 128).unwrap_err();
    assert!(matches!(err, Error::Aliasing { .. }));
}

#[test]
fn shift_search_examples() {
    let c = cutoff(1);
    let g = TargetFunction::gaussian(1, 1.0, 0.5);
    assert_eq!(shift_search(&g, &c, Weight::Polynomial { s: 0.0 }, 8.0, 1, 1024).unwrap(), vec![0.0]);

    let e = TargetFunction::exponential(&[1]);
    let (a, masses) = shift_search_masses(&e, &c, Weight::Polynomial { s: 0.0 }, 8.0, 8, 1024).unwrap();
    let at = |a: &[f64]| lattice_coefficients(&e, &c, a, 8.0, 1024).unwrap().weighted_mass(Weight::Polynomial { s: 0.0 }, 8.0);
    assert!(at(&a) <= at(&[0.0]));
    assert_eq!(masses.len(), 8);

    let (a, masses) = shift_search_masses(&g, &c, Weight::Polynomial { s: 2.0 }, 8.0, 8, 1024).unwrap();
    let average = masses.iter().sum::<f64>() / masses.len() as f64;
    let best = lattice_coefficients(&g, &c, &a, 8.0, 1024).unwrap().weighted_mass(Weight::Polynomial { s: 2.0 }, 8.0);
    assert!(best <= average);
    assert!(masses.iter().all(|&m| best <= m));
}

#[test]
fn weights_are_submultiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..100 {
        let d = rng.gen_range(1..=3);
        let xi: Vec<f64> = (0..d).map(|_| rng.gen_range(-20.0..20.0)).collect();
        let omega: Vec<f64> = (0..d).map(|_| rng.gen_range(-20.0..20.0)).collect();
        let sum: Vec<f64> = xi.iter().zip(&omega).map(|(p, q)| p + q).collect();
        for s in [0.5, 1.0, 2.5] {
            let w = Weight::Polynomial { s };
            assert!(w.eval(norm(&sum)) <= w.eval(norm(&xi)) * w.eval(norm(&omega)) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn sample_energy_matches_coefficient_energy() {
    for d in 1..=2 {
        let n = if d == 1 { 1024 } else { 128 };
        for name in ["gaussian", "bump3", "cossum"] {
            let f = by_name(name, d).unwrap();
            let samples = window_samples(&f, &cutoff(d), &vec![0.1; d], n);
            let cell = (2.0 / n as f64).powi(d as i32);
            let quadrature: f64 = samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * cell;
            let spectrum = fft_nd(samples, n, d);
            // c_ν = F_ν / n^d and the box has volume 2^d
            let scale = (n as f64).powi(d as i32);
            let coefficients: f64 =
                spectrum.iter().map(|v| (v / scale).norm_sqr()).sum::<f64>() * 2f64.powi(d as i32);
            assert!((quadrature - coefficients).abs() <= 1e-8 * quadrature, "{name} d={d}");
        }
    }
}

#[test]
fn lattice_frequencies_include_the_shift() {
    let f = by_name("gaussian", 2).unwrap();
    let e = lattice_coefficients(&f, &cutoff(2), &[0.125, 0.25], 2.0, 256).unwrap();
    let xi = e.frequency(&[1, -2]);
    assert!((xi[0] - 0.625).abs() < 1e-15 && (xi[1] + 0.75).abs() < 1e-15);
    let x = [0.3, 0.6];
    let direct: Complex64 = e
        .iter()
        .map(|(nu, c)| {
            let w = e.frequency(nu);
            c * Complex64::cis(2.0 * PI * (w[0] * x[0] + w[1] * x[1]))
        })
        .sum();
    assert!((direct - e.reconstruct(&x)).norm() < 1e-12);
}
