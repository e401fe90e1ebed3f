//! Cardinal B-splines built from truncated powers, de Boor–Fix
//! quasi-interpolation onto `S^k_λ`, and the multiscale spline expansion of
//! `e^{2πix}`.
//!
//! The degree-`k` cardinal B-spline is the alternating sum
//! `N_k(x) = (1/k!) Σ_{i=0}^{k+1} (-1)^i C(k+1,i) σ_k(x - i)` with
//! `σ_k(x) = max(0,x)^k` and `σ_0` the Heaviside step (`σ_0(0) = 0`), so each
//! `N_k` is a combination of `k+2` ReLU^k units.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 3;
pub const MAX_LEVELS: usize = 14;

/// `max(0,x)^k`; for `k = 0` the Heaviside step with `σ_0(0) = 0`.
pub fn relu_power(k: usize, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if k == 0 {
        1.0
    } else {
        x.powi(k as i32)
    }
}

/// Right-continuous variant used for derivatives of order `k`.
fn relu_power_right(k: usize, x: f64) -> f64 {
    if k == 0 {
        if x >= 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        relu_power(k, x)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Cardinal B-spline `N_k` on the integer knots `0, 1, ..., k+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BSpline {
    k: usize,
}

/// Builds `N_k`; `k` must be at most [`MAX_DEGREE`].
pub fn bspline(k: usize) -> Result<BSpline> {
    BSpline::new(k)
}

impl BSpline {
    pub fn new(k: usize) -> Result<Self> {
        if k > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(k));
        }
        Ok(Self { k })
    }

    /// For callers that have already validated `k`.
    pub(crate) const fn of_degree(k: usize) -> Self {
        Self { k }
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn support(&self) -> (f64, f64) {
        (0.0, (self.k + 1) as f64)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.k;
        if k > 0 && (x <= 0.0 || x >= (k + 1) as f64) {
            return 0.0;
        }
        let sum: f64 = (0..=k + 1)
            .map(|i| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                sign * binomial(k + 1, i) * relu_power(k, x - i as f64)
            })
            .sum();
        sum / factorial(k)
    }

    /// `r`-th derivative. The order-`k` derivative is piecewise constant and is
    /// taken from the right at knots.
    pub fn derivative(&self, x: f64, r: usize) -> f64 {
        if r == 0 {
            return self.eval(x);
        }
        let k = self.k;
        if r > k || x < 0.0 || x >= (k + 1) as f64 {
            return 0.0;
        }
        let p = k - r;
        let sum: f64 = (0..=k + 1)
            .map(|i| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                sign * binomial(k + 1, i) * relu_power_right(p, x - i as f64)
            })
            .sum();
        sum / factorial(p)
    }

    /// Exact `‖N_k^{(r)}‖²_{L²(R)}` by Gauss–Legendre on each knot interval.
    pub fn derivative_energy(&self, r: usize) -> f64 {
        let (nodes, weights) = crate::oracles::quadrature::gauss_legendre(self.k + 2);
        (0..=self.k)
            .map(|cell| {
                nodes
                    .iter()
                    .zip(&weights)
                    .map(|(&t, &w)| {
                        let x = cell as f64 + 0.5 * (t + 1.0);
                        0.5 * w * self.derivative(x, r).powi(2)
                    })
                    .sum::<f64>()
            })
            .sum()
    }

    /// `sup |N_k^{(r)}|`, sampled densely (exact at the piecewise extrema for k ≤ 3).
    pub fn derivative_sup(&self, r: usize) -> f64 {
        let n = 64 * (self.k + 1);
        (0..=n)
            .map(|i| self.derivative(i as f64 * (self.k + 1) as f64 / n as f64, r).abs())
            .fold(0.0, f64::max)
    }
}

/// For `y` with `u = y - (⌈y⌉ - 1) ∈ (0, 1]`, fills `values[i] = N_k(u + i)`
/// and `slopes[i] = N_k'(u + i)` for `i = 0..=k`: the only B-splines
/// `N_k(y - j)` that can be nonzero at `y` are `j = ⌈y⌉ - 1 - i`.
pub(crate) fn local_basis(k: usize, u: f64, values: &mut [f64; 4], slopes: &mut [f64; 4]) {
    let mut v = [1.0, 0.0, 0.0, 0.0];
    let mut prev = v;
    for p in 1..=k {
        prev = v;
        let mut next = [0.0; 4];
        for i in 0..=p {
            let up = if i < p { (u + i as f64) * prev[i] } else { 0.0 };
            let down = if i > 0 { (p as f64 + 1.0 - u - i as f64) * prev[i - 1] } else { 0.0 };
            next[i] = (up + down) / p as f64;
        }
        v = next;
    }
    *values = v;
    *slopes = [0.0; 4];
    if k > 0 {
        for i in 0..=k {
            let here = if i < k { prev[i] } else { 0.0 };
            let below = if i > 0 { prev[i - 1] } else { 0.0 };
            slopes[i] = here - below;
        }
    }
}

/// A function of one real variable with exact derivatives, the input class of
/// the de Boor–Fix quasi-interpolant.
pub trait Smooth1D {
    /// `r`-th derivative at `x`; `r = 0` is the value.
    fn derivative(&self, x: f64, r: usize) -> Complex64;
}

/// `e^{2πi ω x}`.
#[derive(Debug, Clone, Copy)]
pub struct ComplexExponential {
    pub frequency: f64,
}

impl Smooth1D for ComplexExponential {
    fn derivative(&self, x: f64, r: usize) -> Complex64 {
        let w = 2.0 * PI * self.frequency;
        Complex64::new(0.0, w).powu(r as u32) * Complex64::from_polar(1.0, w * x)
    }
}

/// `Σ_p c_p x^p`.
#[derive(Debug, Clone)]
pub struct Polynomial {
    pub coeffs: Vec<Complex64>,
}

impl Smooth1D for Polynomial {
    fn derivative(&self, x: f64, r: usize) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(r)
            .map(|(p, c)| {
                let falling: f64 = ((p - r + 1)..=p).map(|q| q as f64).product();
                c * falling * x.powi((p - r) as i32)
            })
            .sum()
    }
}

/// `a - b`.
pub struct Difference1D<'a> {
    pub a: &'a dyn Smooth1D,
    pub b: &'a dyn Smooth1D,
}

impl Smooth1D for Difference1D<'_> {
    fn derivative(&self, x: f64, r: usize) -> Complex64 {
        self.a.derivative(x, r) - self.b.derivative(x, r)
    }
}

/// Evaluates `Σ_j c_j λ^{-r} N_k^{(r)}(x/λ - j)` for a coefficient lookup.
fn series_derivative(
    basis: BSpline,
    spacing: f64,
    x: f64,
    r: usize,
    coeff: impl Fn(i64) -> Complex64,
) -> Complex64 {
    let u = x / spacing;
    let base = u.floor() as i64;
    let k = basis.degree() as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in (base - k - 1)..=(base + 1) {
        let b = basis.derivative(u - j as f64, r);
        if b != 0.0 {
            acc += coeff(j) * b;
        }
    }
    acc * spacing.powi(-(r as i32))
}

/// A spline in `S^k_λ` stored as sparse B-spline coefficients:
/// `S(x) = Σ_j c_j N_k(x/λ - j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineSeries {
    pub basis: BSpline,
    pub spacing: f64,
    pub coeffs: BTreeMap<i64, Complex64>,
}

impl SplineSeries {
    pub fn eval(&self, x: f64) -> Complex64 {
        self.derivative_at(x, 0)
    }

    pub fn derivative_at(&self, x: f64, r: usize) -> Complex64 {
        series_derivative(self.basis, self.spacing, x, r, |j| {
            self.coeffs.get(&j).copied().unwrap_or_default()
        })
    }

    /// Re-expresses the spline on knots of half the spacing (two-scale relation).
    pub fn refine(&self) -> SplineSeries {
        let k = self.basis.degree();
        let scale = 0.5f64.powi(k as i32);
        let mut fine = BTreeMap::new();
        for (&j, &c) in &self.coeffs {
            for i in 0..=k + 1 {
                *fine.entry(2 * j + i as i64).or_insert(Complex64::new(0.0, 0.0)) +=
                    c * (scale * binomial(k + 1, i));
            }
        }
        SplineSeries {
            basis: self.basis,
            spacing: 0.5 * self.spacing,
            coeffs: fine,
        }
    }
}

impl Smooth1D for SplineSeries {
    fn derivative(&self, x: f64, r: usize) -> Complex64 {
        self.derivative_at(x, r)
    }
}

/// de Boor–Fix weights `w_r` and evaluation point `u_τ` (relative to the first
/// knot of a unit-spaced B-spline) such that `λ_0(f) = Σ_r w_r f^{(r)}(u_τ)`.
///
/// `u_τ` is the midpoint of the knot interval nearest the centre of the support,
/// which keeps it off the knots for every degree.
#[derive(Debug, Clone)]
pub struct DualFunctional {
    pub weights: Vec<f64>,
    pub tau: f64,
}

impl DualFunctional {
    pub fn new(k: usize) -> Self {
        // ψ(u) = Π_{i=1}^k (u - i), as ascending coefficients.
        let mut psi = vec![1.0];
        for i in 1..=k {
            let mut next = vec![0.0; psi.len() + 1];
            for (p, &c) in psi.iter().enumerate() {
                next[p + 1] += c;
                next[p] -= c * i as f64;
            }
            psi = next;
        }
        let tau = (k / 2) as f64 + 0.5;
        let psi_derivative = |order: usize| -> f64 {
            psi.iter()
                .enumerate()
                .skip(order)
                .map(|(p, c)| {
                    let falling: f64 = ((p - order + 1)..=p).map(|q| q as f64).product();
                    c * falling * tau.powi((p - order) as i32)
                })
                .sum()
        };
        let kf = factorial(k);
        let weights = (0..=k)
            .map(|r| {
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                sign * psi_derivative(k - r) / kf
            })
            .collect();
        Self { weights, tau }
    }

    /// Coefficient of `N_k(x/λ - j)` in the quasi-interpolant of `f`.
    pub fn apply(&self, f: &dyn Smooth1D, spacing: f64, j: i64) -> Complex64 {
        let x = spacing * (j as f64 + self.tau);
        self.weights
            .iter()
            .enumerate()
            .map(|(r, &w)| f.derivative(x, r) * (w * spacing.powi(r as i32)))
            .sum()
    }
}

/// Quasi-interpolant `Q_λ f = Σ_j γ_j N_k(x/λ - j)` on the knots whose support
/// meets `window`. Reproduces every spline in `S^k_λ`.
pub fn quasi_interpolate(
    f: &dyn Smooth1D,
    spacing: f64,
    k: usize,
    window: (f64, f64),
) -> Result<SplineSeries> {
    let basis = BSpline::new(k)?;
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::DegenerateWindow { lo, hi });
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidParameter(format!("spline spacing {spacing} must be positive")));
    }
    let dual = DualFunctional::new(k);
    let j_min = (lo / spacing).floor() as i64 - k as i64;
    let j_max = (hi / spacing).ceil() as i64 - 1;
    let coeffs = (j_min..=j_max).map(|j| (j, dual.apply(f, spacing, j))).collect();
    Ok(SplineSeries {
        basis,
        spacing,
        coeffs,
    })
}

/// Multiscale expansion `e^{2πix} = Σ_{l≥1} h_l(x)`,
/// `h_l(x) = Σ_j α_{j,l} N_k(2^l x - j)`.
///
/// The exponential has period one and every level spacing divides one, so
/// `α_{j + 2^l, l} = α_{j,l}`; only one period of coefficients is stored per
/// level.
#[derive(Debug, Clone)]
pub struct MultiscaleExpansion {
    basis: BSpline,
    window: (f64, f64),
    /// `levels[l-1][j]`, `0 <= j < 2^l`.
    levels: Vec<Vec<Complex64>>,
    /// Coefficients of `Q_{2^{-l}}(e^{2πix})` on level `l`, same layout.
    partial: Vec<Vec<Complex64>>,
}

struct PeriodicSpline<'a> {
    basis: BSpline,
    level: usize,
    coeffs: &'a [Complex64],
}

impl Smooth1D for PeriodicSpline<'_> {
    fn derivative(&self, x: f64, r: usize) -> Complex64 {
        let period = 1i64 << self.level;
        series_derivative(self.basis, 0.5f64.powi(self.level as i32), x, r, |j| {
            self.coeffs[j.rem_euclid(period) as usize]
        })
    }
}

/// Builds the expansion up to level `l_max` (at most [`MAX_LEVELS`]).
pub fn multiscale_expand(k: usize, l_max: usize, window: (f64, f64)) -> Result<MultiscaleExpansion> {
    let basis = BSpline::new(k)?;
    if l_max == 0 || l_max > MAX_LEVELS {
        return Err(Error::LevelOutOfRange(l_max));
    }
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::DegenerateWindow { lo, hi });
    }
    let dual = DualFunctional::new(k);
    let target = ComplexExponential { frequency: 1.0 };
    let mut levels: Vec<Vec<Complex64>> = Vec::with_capacity(l_max);
    let mut partial: Vec<Vec<Complex64>> = Vec::with_capacity(l_max);
    for l in 1..=l_max {
        let spacing = 0.5f64.powi(l as i32);
        let period = 1usize << l;
        let alpha: Vec<Complex64> = match partial.last() {
            None => (0..period as i64).map(|j| dual.apply(&target, spacing, j)).collect(),
            Some(coarse) => {
                let previous = PeriodicSpline {
                    basis,
                    level: l - 1,
                    coeffs: coarse,
                };
                let residual = Difference1D {
                    a: &target,
                    b: &previous,
                };
                (0..period as i64).map(|j| dual.apply(&residual, spacing, j)).collect()
            }
        };
        let mut beta = match partial.last() {
            None => vec![Complex64::new(0.0, 0.0); period],
            Some(coarse) => refine_periodic(coarse, k),
        };
        for (b, a) in beta.iter_mut().zip(&alpha) {
            *b += a;
        }
        levels.push(alpha);
        partial.push(beta);
    }
    Ok(MultiscaleExpansion {
        basis,
        window,
        levels,
        partial,
    })
}

fn refine_periodic(coarse: &[Complex64], k: usize) -> Vec<Complex64> {
    let period = 2 * coarse.len();
    let scale = 0.5f64.powi(k as i32);
    let mut fine = vec![Complex64::new(0.0, 0.0); period];
    for (j, &c) in coarse.iter().enumerate() {
        for i in 0..=k + 1 {
            fine[(2 * j + i) % period] += c * (scale * binomial(k + 1, i));
        }
    }
    fine
}

impl MultiscaleExpansion {
    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn basis(&self) -> BSpline {
        self.basis
    }

    pub fn max_level(&self) -> usize {
        self.levels.len()
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    /// `α_{j,l}` for any integer `j`.
    pub fn coefficient(&self, l: usize, j: i64) -> Complex64 {
        let level = &self.levels[l - 1];
        level[j.rem_euclid(level.len() as i64) as usize]
    }

    /// `α_{·,l}` restricted to knots whose support meets the window.
    pub fn level_coefficients(&self, l: usize) -> BTreeMap<i64, Complex64> {
        let scale = (1u64 << l) as f64;
        let k = self.degree() as i64;
        let j_min = (self.window.0 * scale).floor() as i64 - k;
        let j_max = (self.window.1 * scale).ceil() as i64 - 1;
        (j_min..=j_max).map(|j| (j, self.coefficient(l, j))).collect()
    }

    pub fn max_abs_coefficient(&self, l: usize) -> f64 {
        self.levels[l - 1].iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `r`-th derivative of `h_l` at `x`.
    pub fn level_derivative(&self, l: usize, x: f64, r: usize) -> Complex64 {
        PeriodicSpline {
            basis: self.basis,
            level: l,
            coeffs: &self.levels[l - 1],
        }
        .derivative(x, r)
    }

    /// `Σ_{l ≤ levels} h_l(x)`; zero for `levels = 0`.
    pub fn level_sum_eval(&self, levels: usize, x: f64) -> Complex64 {
        self.level_sum_derivative(levels, x, 0)
    }

    pub fn level_sum_derivative(&self, levels: usize, x: f64, r: usize) -> Complex64 {
        (1..=levels.min(self.max_level()))
            .map(|l| self.level_derivative(l, x, r))
            .sum()
    }

    /// `Q_{2^{-l}}(e^{2πix})` evaluated through its own single-level
    /// coefficients (equal to the level sum by telescoping).
    pub fn quasi_interpolant_eval(&self, l: usize, x: f64) -> Complex64 {
        PeriodicSpline {
            basis: self.basis,
            level: l,
            coeffs: &self.partial[l - 1],
        }
        .derivative(x, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_basis_matches_direct() {
        for k in 0..=3 {
            let b = BSpline::new(k).unwrap();
            for &u in &[0.01, 0.25, 0.5, 0.999, 1.0] {
                let (mut v, mut s) = ([0.0; 4], [0.0; 4]);
                local_basis(k, u, &mut v, &mut s);
                for i in 0..=k {
                    let x = u + i as f64;
                    assert!((v[i] - b.eval(x)).abs() < 1e-14, "k={k} u={u} i={i}");
                    if k > 0 && u < 1.0 {
                        assert!((s[i] - b.derivative(x, 1)).abs() < 1e-13, "k={k} u={u} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn spline_values() {
        let n0 = bspline(0).unwrap();
        assert_eq!(n0.eval(0.5), 1.0);
        assert_eq!(n0.eval(1.5), 0.0);
        assert_eq!(n0.eval(1.0), 1.0);
        assert_eq!(n0.eval(0.0), 0.0);
        assert_eq!(bspline(1).unwrap().eval(1.0), 1.0);
        assert!((bspline(2).unwrap().eval(1.5) - 0.75).abs() < 1e-15);
        assert!(matches!(bspline(4), Err(Error::UnsupportedDegree(4))));
    }

    #[test]
    fn support_and_sign() {
        for k in 0..=3 {
            let b = bspline(k).unwrap();
            assert_eq!(b.eval(-0.3), 0.0);
            assert_eq!(b.eval((k + 1) as f64 + 0.01), 0.0);
            if k > 0 {
                assert_eq!(b.eval(0.0), 0.0);
                assert_eq!(b.eval((k + 1) as f64), 0.0);
            }
            for i in 0..200 {
                assert!(b.eval(i as f64 * 0.0213) >= 0.0);
            }
        }
    }

    #[test]
    fn derivative_matches_difference_recursion() {
        // N_k' (x) = N_{k-1}(x) - N_{k-1}(x-1)
        for k in 1..=3 {
            let b = bspline(k).unwrap();
            let lower = bspline(k - 1).unwrap();
            for i in 0..97 {
                let x = 0.013 + i as f64 * 0.041;
                let expected = lower.eval(x) - lower.eval(x - 1.0);
                assert!((b.derivative(x, 1) - expected).abs() < 1e-12, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn derivative_energy_of_hat() {
        // ∫ N_1² = 2/3, ∫ (N_1')² = 2
        let b = bspline(1).unwrap();
        assert!((b.derivative_energy(0) - 2.0 / 3.0).abs() < 1e-14);
        assert!((b.derivative_energy(1) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn dual_functional_reproduces_basis() {
        // λ_i(N_k(· - j)) = δ_ij
        for k in 0..=3 {
            let dual = DualFunctional::new(k);
            let mut coeffs = BTreeMap::new();
            coeffs.insert(0i64, Complex64::new(1.0, 0.0));
            let single = SplineSeries {
                basis: bspline(k).unwrap(),
                spacing: 1.0,
                coeffs,
            };
            for i in -(k as i64) - 1..=k as i64 + 1 {
                let value = dual.apply(&single, 1.0, i);
                let expected = if i == 0 { 1.0 } else { 0.0 };
                assert!((value - expected).norm() < 1e-12, "k={k} i={i} got {value}");
            }
        }
    }

    #[test]
    fn zero_function_gives_zero_coefficients() {
        let zero = Polynomial { coeffs: vec![] };
        let q = quasi_interpolate(&zero, 0.25, 2, (0.0, 1.0)).unwrap();
        assert!(q.coeffs.values().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn degenerate_window_is_rejected() {
        let zero = Polynomial { coeffs: vec![] };
        assert!(matches!(
            quasi_interpolate(&zero, 0.25, 2, (1.0, 1.0)),
            Err(Error::DegenerateWindow { .. })
        ));
        assert!(matches!(
            multiscale_expand(1, 15, (0.0, 1.0)),
            Err(Error::LevelOutOfRange(15))
        ));
    }

    #[test]
    fn window_covers_exactly_the_touching_knots() {
        let one = Polynomial {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        };
        let q = quasi_interpolate(&one, 0.5, 1, (0.0, 1.0)).unwrap();
        // supports (j/2, (j+2)/2) meeting (0,1): j = -1, 0, 1
        assert_eq!(q.coeffs.keys().copied().collect::<Vec<_>>(), vec![-1, 0, 1]);
    }

    #[test]
    fn level_sum_is_zero_for_no_levels_and_telescopes() {
        let exp = multiscale_expand(2, 5, (0.0, 1.0)).unwrap();
        assert_eq!(exp.level_sum_eval(0, 0.3), Complex64::new(0.0, 0.0));
        for &x in &[0.0, 0.17, 0.5, 0.93] {
            for l in 1..=5 {
                let diff = exp.level_sum_eval(l, x) - exp.level_sum_eval(l - 1, x);
                assert!((diff - exp.level_derivative(l, x, 0)).norm() < 1e-15);
                let direct = exp.quasi_interpolant_eval(l, x);
                assert!((exp.level_sum_eval(l, x) - direct).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn first_level_is_nontrivial() {
        let exp = multiscale_expand(1, 3, (0.0, 1.0)).unwrap();
        let top = exp.max_abs_coefficient(1);
        assert!(top.is_finite() && top > 0.0);
    }

    #[test]
    fn periodic_storage_matches_direct_quasi_interpolant() {
        let k = 2;
        let exp = multiscale_expand(k, 4, (-3.0, 5.0)).unwrap();
        let target = ComplexExponential { frequency: 1.0 };
        let direct = quasi_interpolate(&target, 1.0 / 16.0, k, (-3.0, 5.0)).unwrap();
        let series = SplineSeries {
            basis: exp.basis(),
            spacing: 1.0 / 16.0,
            coeffs: direct.coeffs.clone(),
        };
        for i in 0..50 {
            let x = -2.9 + i as f64 * 0.157;
            assert!((series.eval(x) - exp.level_sum_eval(4, x)).norm() < 1e-12);
        }
        assert_eq!(exp.level_coefficients(4).len(), direct.coeffs.len());
    }
}
