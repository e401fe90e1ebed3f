use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ridgerate::cosine_net::{greedy_truncate, hm_error_orthogonal, CosineNetwork, CosineTerm, WeightMode};
use ridgerate::lattice::{default_fft_grid, lattice_coefficients, make_cutoff, LatticeExpansion};
use ridgerate::oracles::QuadratureGrid;
use ridgerate::targets::by_name;
use ridgerate::{Complex64, Error};

fn expansion_1d(coeffs: &[(i64, Complex64)]) -> LatticeExpansion {
    LatticeExpansion::from_coefficients(2.0, vec![0.0], 16.0, coeffs.iter().map(|&(nu, c)| (vec![nu], c))).unwrap()
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn random_expansion(rng: &mut ChaCha8Rng, size: usize) -> LatticeExpansion {
    let mut nus: Vec<i64> = (-30..=30).collect();
    nus.shuffle(rng);
    let coeffs: Vec<(i64, Complex64)> = nus[..size]
        .iter()
        .map(|&nu| (nu, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    expansion_1d(&coeffs)
}

/// Net built from an arbitrary subset of the expansion.
fn subset_net(e: &LatticeExpansion, keep: &[usize]) -> CosineNetwork {
    let all: Vec<(&Vec<i64>, &Complex64)> = e.iter().collect();
    let terms = keep
        .iter()
        .map(|&i| CosineTerm {
            amplitude: *all[i].1,
            frequency: e.frequency(all[i].0),
            index: Some(all[i].0.clone()),
        })
        .collect();
    CosineNetwork::new(e.dim(), terms).unwrap()
}

fn subsets(size: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    if size < n {
        return vec![];
    }
    let mut out = subsets(size - 1, n);
    for mut s in subsets(size - 1, n - 1) {
        s.push(size - 1);
        out.push(s);
    }
    out
}

#[test]
fn ordering_examples() {
    let e = expansion_1d(&[(0, real(1.0)), (1, real(0.1))]);
    let net = greedy_truncate(&e, 1, 0.0, 0, WeightMode::Polynomial).unwrap();
    assert_eq!(net.terms()[0].frequency, vec![0.0]);

    // keys 0.1 against (1+4)^{-2} 0.9 = 0.036
    let e = expansion_1d(&[(0, real(0.1)), (8, real(0.9))]);
    let net = greedy_truncate(&e, 1, 2.0, 0, WeightMode::Polynomial).unwrap();
    assert_eq!(net.terms()[0].frequency, vec![0.0]);
    let net = greedy_truncate(&e, 1, 0.0, 0, WeightMode::Polynomial).unwrap();
    assert_eq!(net.terms()[0].frequency, vec![4.0]);

    assert!(matches!(greedy_truncate(&e, 3, 0.0, 0, WeightMode::Polynomial), Err(Error::ExpansionTooSmall { .. })));
}

#[test]
fn ties_break_lexicographically() {
    let e = expansion_1d(&[(3, real(0.5)), (-3, real(0.5)), (0, real(0.1))]);
    let net = greedy_truncate(&e, 1, 0.0, 0, WeightMode::Polynomial).unwrap();
    assert_eq!(net.terms()[0].index, Some(vec![-3]));
}

#[test]
fn evaluation_examples() {
    let one = CosineNetwork::new(1, vec![CosineTerm { amplitude: real(1.0), frequency: vec![0.0], index: None }]).unwrap();
    assert_eq!(one.evaluate(&[0.77]).unwrap(), real(1.0));
    let cos = CosineNetwork::new(
        1,
        vec![
            CosineTerm { amplitude: real(0.5), frequency: vec![1.0], index: None },
            CosineTerm { amplitude: real(0.5), frequency: vec![-1.0], index: None },
        ],
    )
    .unwrap();
    assert!(cos.evaluate(&[0.25]).unwrap().norm() < 1e-15);
    assert!(matches!(cos.evaluate(&[0.25, 0.5]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn random_net_matches_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for d in 1..=3 {
        let terms: Vec<CosineTerm> = (0..5)
            .map(|_| CosineTerm {
                amplitude: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                frequency: (0..d).map(|_| rng.gen_range(-4.0..4.0)).collect(),
                index: None,
            })
            .collect();
        let net = CosineNetwork::new(d, terms.clone()).unwrap();
        let x: Vec<f64> = vec![0.3; d];
        let mut re = 0.0;
        let mut im = 0.0;
        for t in &terms {
            let phase = 2.0 * PI * t.frequency.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
            re += t.amplitude.re * phase.cos() - t.amplitude.im * phase.sin();
            im += t.amplitude.re * phase.sin() + t.amplitude.im * phase.cos();
        }
        let got = net.evaluate(&x).unwrap();
        assert!((got - Complex64::new(re, im)).norm() < 1e-13);
        assert!((net.evaluate_cosine_form(&x).unwrap() - got).norm() < 1e-13);
        let mass: f64 = terms.iter().map(|t| t.amplitude.norm()).sum();
        assert!((net.ell1_mass() - mass).abs() <= 1e-12);
    }
}

#[test]
fn orthogonal_error_examples() {
    let e = expansion_1d(&[(0, real(0.5)), (1, real(1.0))]);
    let full = greedy_truncate(&e, 2, 0.0, 0, WeightMode::Polynomial).unwrap();
    assert_eq!(hm_error_orthogonal(&e, &full, 0).unwrap(), 0.0);
    let net = greedy_truncate(&e, 1, 0.0, 0, WeightMode::Polynomial).unwrap();
    assert!((hm_error_orthogonal(&e, &net, 0).unwrap() - 0.5 * 2f64.sqrt()).abs() < 1e-15);

    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let e = random_expansion(&mut rng, 20);
    let net = greedy_truncate(&e, 7, 1.0, 0, WeightMode::Polynomial).unwrap();
    assert!(hm_error_orthogonal(&e, &net, 1).unwrap() >= hm_error_orthogonal(&e, &net, 0).unwrap());

    let stranger = CosineNetwork::new(
        1,
        vec![CosineTerm { amplitude: real(0.3), frequency: vec![0.0], index: Some(vec![0]) }],
    )
    .unwrap();
    assert!(matches!(hm_error_orthogonal(&e, &stranger, 0), Err(Error::NetExpansionMismatch(_))));
}

#[test]
fn greedy_is_optimal_for_the_plain_key() {
    // with s = m = 0 the key is |c| and every term has the same weight
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for size in [8, 12] {
        let e = random_expansion(&mut rng, size);
        for n in 1..=6 {
            let greedy = greedy_truncate(&e, n, 0.0, 0, WeightMode::Polynomial).unwrap();
            let best = hm_error_orthogonal(&e, &greedy, 0).unwrap();
            for keep in subsets(size, n) {
                assert!(best <= hm_error_orthogonal(&e, &subset_net(&e, &keep), 0).unwrap() + 1e-14);
            }
        }
    }
    let e = random_expansion(&mut rng, 30);
    let greedy = greedy_truncate(&e, 10, 0.0, 0, WeightMode::Polynomial).unwrap();
    let best = hm_error_orthogonal(&e, &greedy, 0).unwrap();
    let mut idx: Vec<usize> = (0..30).collect();
    for _ in 0..200 {
        idx.shuffle(&mut rng);
        assert!(best <= hm_error_orthogonal(&e, &subset_net(&e, &idx[..10]), 0).unwrap() + 1e-14);
    }
}

#[test]
fn full_truncation_reproduces_the_expansion() {
    let f = by_name("gaussian", 2).unwrap();
    let cutoff = make_cutoff(2, 2.0, 0.25, 2.0, 256).unwrap();
    let e = lattice_coefficients(&f, &cutoff, &[0.0, 0.0], 3.0, default_fft_grid(2, 3.0, 2.0)).unwrap();
    let net = greedy_truncate(&e, e.len(), 1.0, 0, WeightMode::Polynomial).unwrap();
    assert_eq!(hm_error_orthogonal(&e, &net, 1).unwrap(), 0.0);
    for x in [[0.1, 0.2], [0.5, 0.5], [0.93, 0.04]] {
        assert!((net.evaluate(&x).unwrap() - e.reconstruct(&x)).norm() < 1e-12);
    }
}

#[test]
fn domain_error_is_below_box_error() {
    for d in 1..=2 {
        for name in ["gaussian", "bump3"] {
            let f = by_name(name, d).unwrap();
            let cutoff = make_cutoff(d, 2.0, 0.25, 2.0, 256).unwrap();
            let r = if d == 1 { 16.0 } else { 6.0 };
            let e = lattice_coefficients(&f, &cutoff, &vec![0.0; d], r, default_fft_grid(d, r, 2.0)).unwrap();
            let grid = QuadratureGrid::composite(d, if d == 1 { 64 } else { 16 }, 8, 0.0, 1.0);
            for n in [1, 4, 16, 40] {
                let net = greedy_truncate(&e, n, 1.0, 0, WeightMode::Polynomial).unwrap();
                let on_box = hm_error_orthogonal(&e, &net, 0).unwrap();
                let on_domain = grid
                    .integrate(|x| (e.reconstruct(x) - net.evaluate(x).unwrap()).norm_sqr())
                    .sqrt();
                assert!(on_domain <= on_box + 1e-6, "{name} d={d} n={n}: {on_domain} > {on_box}");
            }
        }
    }
}

#[test]
fn exponential_ordering_prefers_low_frequencies() {
    let e = expansion_1d(&[(0, real(0.3)), (20, real(0.5))]);
    let net = greedy_truncate(&e, 1, 0.0, 0, WeightMode::Exponential { beta: 0.9, c: 1.0 }).unwrap();
    assert_eq!(net.terms()[0].index, Some(vec![0]));
}
