//! Windowed periodization: a smooth cutoff `φ_Ω` equal to one on `[0,1]^d`,
//! the product `h_f = φ_Ω f`, and its Fourier coefficients on the shifted
//! lattice `a + L^{-1}Z^d`. On `[0,1]^d`,
//! `f(x) = Σ_ν c_ν e^{2πi(a + ν/L)·x}` with `c_ν = L^{-d} ĥ_f(a + ν/L)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::oracles::quadrature::gauss_legendre;
use crate::targets::TargetFunction;

pub const DEFAULT_L: f64 = 2.0;
pub const DEFAULT_EPS: f64 = 0.25;
pub const DEFAULT_ALPHA: f64 = 2.0;
pub const DEFAULT_MOLLIFIER_GRID: usize = 256;

/// Coefficients below this magnitude are not stored.
pub const COEFF_THRESHOLD: f64 = 1e-14;

/// Nodes per panel of the composite rules used inside the cutoff.
const PANEL_NODES: usize = 16;

/// Tolerance for recognising an atom frequency as a lattice point.
const ON_LATTICE_TOL: f64 = 1e-12;

/// Frequency weight `μ(θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    /// `(1 + |θ|)^s`
    Polynomial { s: f64 },
    /// `e^{c|θ|^β}`
    Exponential { beta: f64, c: f64 },
}

impl Weight {
    pub fn eval(&self, theta_norm: f64) -> f64 {
        match *self {
            Weight::Polynomial { s } => (1.0 + theta_norm).powf(s),
            Weight::Exponential { beta, c } => (c * theta_norm.powf(beta)).exp(),
        }
    }
}

/// Unnormalized bump `g(t) = exp(-(1-t²)^{1-α})` on `(-1, 1)`.
pub fn bump(alpha: f64, t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-(1.0 - t * t).powf(1.0 - alpha)).exp()
    }
}

/// `φ_Ω(x) = Π_i φ₁(x_i)`, where `φ₁` is the indicator of
/// `Ω′ = [-ε/2, L - 3ε/2]` mollified by `(4/ε) g(4t/ε)` (normalized).
/// Equal to one on `[-ε/4, L - 7ε/4] ⊇ [0,1]` and zero outside
/// `(-3ε/4, L - 5ε/4)`.
#[derive(Debug, Clone)]
pub struct CutoffFunction {
    alpha: f64,
    l: f64,
    eps: f64,
    dim: usize,
    /// Cumulative integral of the normalized bump at the panel edges
    /// `-1 + 2i/panels`.
    cumulative: Vec<f64>,
    bump_total: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

pub fn make_cutoff(dim: usize, l: f64, eps: f64, alpha: f64, mollifier_grid: usize) -> Result<CutoffFunction> {
    if dim == 0 {
        return Err(Error::UnsupportedDimension(dim));
    }
    if !(alpha > 1.0) || mollifier_grid == 0 {
        return Err(Error::InvalidParameter(format!(
            "cutoff needs alpha > 1 and a positive mollifier grid (alpha={alpha}, grid={mollifier_grid})"
        )));
    }
    if !(l > 1.0 && eps > 0.0 && 1.0 + 2.0 * eps < l) {
        return Err(Error::CutoffGeometryInfeasible { l, eps });
    }
    let (nodes, weights) = gauss_legendre(PANEL_NODES);
    let mut cutoff = CutoffFunction {
        alpha,
        l,
        eps,
        dim,
        cumulative: vec![0.0; mollifier_grid + 1],
        bump_total: 1.0,
        nodes,
        weights,
    };
    let width = 2.0 / mollifier_grid as f64;
    for i in 0..mollifier_grid {
        let lo = -1.0 + i as f64 * width;
        cutoff.cumulative[i + 1] = cutoff.cumulative[i] + cutoff.bump_integral(lo, lo + width);
    }
    let total = cutoff.cumulative[mollifier_grid];
    cutoff.bump_total = total;
    for v in cutoff.cumulative.iter_mut() {
        *v /= total;
    }
    Ok(cutoff)
}

impl CutoffFunction {
    pub fn with_defaults(dim: usize) -> Result<Self> {
        make_cutoff(dim, DEFAULT_L, DEFAULT_EPS, DEFAULT_ALPHA, DEFAULT_MOLLIFIER_GRID)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn bump_integral(&self, lo: f64, hi: f64) -> f64 {
        let half = 0.5 * (hi - lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| w * bump(self.alpha, lo + half * (t + 1.0)))
            .sum::<f64>()
            * half
    }

    /// Normalized cumulative bump `G(u) = ∫_{-1}^u g / ∫_{-1}^1 g`.
    fn cumulative_bump(&self, u: f64) -> f64 {
        if u <= -1.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return 1.0;
        }
        let panels = self.cumulative.len() - 1;
        let width = 2.0 / panels as f64;
        let i = (((u + 1.0) / width).floor() as usize).min(panels - 1);
        let lo = -1.0 + i as f64 * width;
        self.cumulative[i] + self.bump_integral(lo, u) / self.bump_total
    }

    /// One-dimensional factor `φ₁`.
    pub fn eval_1d(&self, x: f64) -> f64 {
        let scale = 4.0 / self.eps;
        let left = self.cumulative_bump((x + 0.5 * self.eps) * scale);
        let right = self.cumulative_bump((x - (self.l - 1.5 * self.eps)) * scale);
        (left - right).clamp(0.0, 1.0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        x.iter().map(|&xi| self.eval_1d(xi)).product()
    }

    /// `φ̂₁(ξ)` by composite Gauss–Legendre quadrature over the support.
    pub fn fourier_1d(&self, xi: f64, panels: usize) -> Complex64 {
        let lo = -0.75 * self.eps;
        let hi = self.l - 1.25 * self.eps;
        let width = (hi - lo) / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let a = lo + p as f64 * width;
            for (t, w) in self.nodes.iter().zip(&self.weights) {
                let x = a + 0.5 * width * (t + 1.0);
                acc += Complex64::cis(-2.0 * PI * xi * x) * (w * 0.5 * width * self.eval_1d(x));
            }
        }
        acc
    }

    pub fn fourier(&self, xi: &[f64], panels: usize) -> Complex64 {
        xi.iter().map(|&v| self.fourier_1d(v, panels)).product()
    }
}

/// Coefficients `c_ν` on the shifted lattice `a + L^{-1}Z^d`, keyed by `ν`
/// (lexicographic order).
#[derive(Debug, Clone)]
pub struct LatticeExpansion {
    l: f64,
    shift: Vec<f64>,
    radius: f64,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
}

impl LatticeExpansion {
    /// Builds an expansion from explicit coefficients.
    pub fn from_coefficients(
        l: f64,
        shift: Vec<f64>,
        radius: f64,
        coeffs: impl IntoIterator<Item = (Vec<i64>, Complex64)>,
    ) -> Result<Self> {
        let coeffs: BTreeMap<Vec<i64>, Complex64> = coeffs.into_iter().collect();
        if let Some(nu) = coeffs.keys().find(|nu| nu.len() != shift.len()) {
            return Err(Error::DimensionMismatch {
                expected: shift.len(),
                got: nu.len(),
            });
        }
        Ok(Self { l, shift, radius, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn truncation_radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, nu: &[i64]) -> Option<Complex64> {
        self.coeffs.get(nu).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.coeffs.iter()
    }

    /// `a + ν/L`.
    pub fn frequency(&self, nu: &[i64]) -> Vec<f64> {
        self.shift.iter().zip(nu).map(|(a, &n)| a + n as f64 / self.l).collect()
    }

    /// `Σ μ(a + ν/L) |c_ν|` over stored coefficients with `|ν|/L ≤ radius`.
    pub fn weighted_mass(&self, weight: Weight, radius: f64) -> f64 {
        self.coeffs
            .iter()
            .filter(|(nu, _)| lattice_norm(nu) / self.l <= radius)
            .map(|(nu, c)| weight.eval(norm(&self.frequency(nu))) * c.norm())
            .sum()
    }

    pub fn ell1_mass(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// `Σ c_ν e^{2πi(a+ν/L)·x}`.
    pub fn reconstruct(&self, x: &[f64]) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(nu, c)| c * Complex64::cis(2.0 * PI * dot(&self.frequency(nu), x)))
            .sum()
    }
}

impl ScalarField for LatticeExpansion {
    fn dim(&self) -> usize {
        self.dim()
    }

    fn value(&self, x: &[f64]) -> Complex64 {
        self.reconstruct(x)
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<Complex64>> {
        let mut g = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (nu, c) in &self.coeffs {
            let theta = self.frequency(nu);
            let e = c * Complex64::cis(2.0 * PI * dot(&theta, x));
            for (gi, t) in g.iter_mut().zip(&theta) {
                *gi += e * Complex64::new(0.0, 2.0 * PI * t);
            }
        }
        Some(g)
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn lattice_norm(nu: &[i64]) -> f64 {
    nu.iter().map(|&n| (n * n) as f64).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Smallest power of two that resolves radius `r` on a box of side `l`,
/// floored at a per-dimension default that resolves the cutoff's transition.
pub fn default_fft_grid(dim: usize, r: f64, l: f64) -> usize {
    let base = match dim {
        1 => 1024,
        2 => 256,
        _ => 64,
    };
    let needed = (2.0 * r * l).floor() as usize + 1;
    needed.next_power_of_two().max(base)
}

/// All lattice indices with `|ν| ≤ radius_index`, lexicographic.
fn ball_indices(dim: usize, radius_index: f64) -> Vec<Vec<i64>> {
    let m = radius_index.floor() as i64;
    let mut out = Vec::new();
    let mut nu = vec![-m; dim];
    loop {
        if lattice_norm(&nu) <= radius_index + 1e-12 {
            out.push(nu.clone());
        }
        let mut axis = dim;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if nu[axis] < m {
                nu[axis] += 1;
                break;
            }
            nu[axis] = -m;
        }
    }
}

/// `c_ν` for all `|ν|/L ≤ r`.
///
/// Discrete-spectrum targets whose atoms all lie on `a + L^{-1}Z^d` are
/// already periodic on the box and are expanded exactly; everything else goes
/// through the sampled window ([`windowed_coefficients`]).
pub fn lattice_coefficients(
    f: &TargetFunction,
    cutoff: &CutoffFunction,
    a: &[f64],
    r: f64,
    fft_grid: usize,
) -> Result<LatticeExpansion> {
    check_inputs(f, cutoff, a, r, fft_grid)?;
    if let Some(atoms) = f.atoms() {
        let l = cutoff.l();
        let mut coeffs = BTreeMap::new();
        let mut on_lattice = true;
        for atom in atoms {
            let nu: Vec<f64> = (0..f.dim()).map(|i| (atom.frequency[i] - a[i]) * l).collect();
            if nu.iter().any(|v| (v - v.round()).abs() > ON_LATTICE_TOL) {
                on_lattice = false;
                break;
            }
            let key: Vec<i64> = nu.iter().map(|v| v.round() as i64).collect();
            *coeffs.entry(key).or_insert(Complex64::new(0.0, 0.0)) += atom.amplitude;
        }
        if on_lattice {
            coeffs.retain(|nu: &Vec<i64>, c: &mut Complex64| lattice_norm(nu) / l <= r && c.norm() >= COEFF_THRESHOLD);
            return LatticeExpansion::from_coefficients(l, a.to_vec(), r, coeffs);
        }
    }
    windowed_coefficients(f, cutoff, a, r, fft_grid)
}

fn check_inputs(f: &TargetFunction, cutoff: &CutoffFunction, a: &[f64], r: f64, fft_grid: usize) -> Result<()> {
    let d = f.dim();
    if cutoff.dim() != d || a.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: if cutoff.dim() != d { cutoff.dim() } else { a.len() },
        });
    }
    let l = cutoff.l();
    if a.iter().any(|&v| !(0.0..=1.0 / l + 1e-15).contains(&v)) {
        return Err(Error::InvalidParameter(format!("shift {a:?} outside [0, 1/L]^d")));
    }
    if !(r > 0.0) || !fft_grid.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "need R > 0 and a power-of-two grid (R={r}, grid={fft_grid})"
        )));
    }
    if r >= fft_grid as f64 / (2.0 * l) {
        return Err(Error::Aliasing { radius: r, grid: fft_grid, l });
    }
    Ok(())
}

/// `c_ν = L^{-d} ĥ_f(a + ν/L)` from the DFT of `h_f(x) e^{-2πia·x}` sampled at
/// `x_j = -ε + jL/N` on `fft_grid^d` points.
pub fn windowed_coefficients(
    f: &TargetFunction,
    cutoff: &CutoffFunction,
    a: &[f64],
    r: f64,
    fft_grid: usize,
) -> Result<LatticeExpansion> {
    check_inputs(f, cutoff, a, r, fft_grid)?;
    let d = f.dim();
    let n = fft_grid;
    let l = cutoff.l();
    let eps = cutoff.eps();
    let samples = window_samples(f, cutoff, a, n);
    let spectrum = fft_nd(samples, n, d);
    let scale = (n as f64).powi(d as i32);
    let coeffs: BTreeMap<Vec<i64>, Complex64> = ball_indices(d, r * l)
        .into_iter()
        .filter_map(|nu| {
            let mut flat = 0usize;
            for &v in &nu {
                flat = flat * n + v.rem_euclid(n as i64) as usize;
            }
            let total: i64 = nu.iter().sum();
            let c = spectrum[flat] * Complex64::cis(2.0 * PI * eps * total as f64 / l) / scale;
            (c.norm() >= COEFF_THRESHOLD).then_some((nu, c))
        })
        .collect();
    LatticeExpansion::from_coefficients(l, a.to_vec(), r, coeffs)
}

/// `h_f(x_j) e^{-2πia·x_j}` on the sampling grid, row-major.
pub fn window_samples(f: &TargetFunction, cutoff: &CutoffFunction, a: &[f64], n: usize) -> Vec<Complex64> {
    let d = f.dim();
    let l = cutoff.l();
    let eps = cutoff.eps();
    let xs: Vec<f64> = (0..n).map(|j| -eps + j as f64 * l / n as f64).collect();
    let phi: Vec<f64> = xs.iter().map(|&x| cutoff.eval_1d(x)).collect();
    let total = n.pow(d as u32);
    (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rest = flat;
            let mut x = vec![0.0; d];
            let mut w = 1.0;
            for axis in (0..d).rev() {
                let j = rest % n;
                rest /= n;
                x[axis] = xs[j];
                w *= phi[j];
            }
            if w == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            f.eval(&x) * w * Complex64::cis(-2.0 * PI * dot(a, &x))
        })
        .collect()
}

/// Unnormalized forward DFT along every axis of a row-major `n^d` array.
pub fn fft_nd(mut data: Vec<Complex64>, n: usize, d: usize) -> Vec<Complex64> {
    let fft = FftPlanner::new().plan_fft_forward(n);
    let total = data.len();
    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        let lines = total / n;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for line in 0..lines {
            let outer = line / stride;
            let inner = line % stride;
            let base = outer * stride * n + inner;
            for (i, b) in buf.iter_mut().enumerate() {
                *b = data[base + i * stride];
            }
            fft.process(&mut buf);
            for (i, b) in buf.iter().enumerate() {
                data[base + i * stride] = *b;
            }
        }
    }
    data
}

/// The `candidates^d` uniformly spaced shifts `i/(candidates·L)`.
pub fn shift_candidates(dim: usize, l: f64, candidates: usize) -> Vec<Vec<f64>> {
    let count = candidates.pow(dim as u32);
    (0..count)
        .map(|flat| {
            let mut rest = flat;
            let mut a = vec![0.0; dim];
            for axis in (0..dim).rev() {
                a[axis] = (rest % candidates) as f64 / (candidates as f64 * l);
                rest /= candidates;
            }
            a
        })
        .collect()
}

/// The candidate shift minimizing `Σ_{|ξ|≤R} μ(a+ξ)|c_ξ|`, together with
/// every candidate's mass (in candidate order).
pub fn shift_search_masses(
    f: &TargetFunction,
    cutoff: &CutoffFunction,
    weight: Weight,
    r: f64,
    candidates: usize,
    fft_grid: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if candidates == 0 {
        return Err(Error::InvalidParameter("candidates must be at least 1".into()));
    }
    let shifts = shift_candidates(f.dim(), cutoff.l(), candidates);
    let masses = shifts
        .par_iter()
        .map(|a| lattice_coefficients(f, cutoff, a, r, fft_grid).map(|e| e.weighted_mass(weight, r)))
        .collect::<Result<Vec<f64>>>()?;
    let mut best = 0;
    for (i, m) in masses.iter().enumerate() {
        if *m < masses[best] {
            best = i;
        }
    }
    Ok((shifts[best].clone(), masses))
}

pub fn shift_search(
    f: &TargetFunction,
    cutoff: &CutoffFunction,
    weight: Weight,
    r: f64,
    candidates: usize,
    fft_grid: usize,
) -> Result<Vec<f64>> {
    shift_search_masses(f, cutoff, weight, r, candidates, fft_grid).map(|(a, _)| a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::by_name;

    #[test]
    fn cutoff_examples() {
        let c = make_cutoff(1, 2.0, 0.25, 2.0, 256).unwrap();
        assert_eq!(c.eval(&[0.5]), 1.0);
        assert_eq!(c.eval(&[0.0]), 1.0);
        assert_eq!(c.eval(&[1.0]), 1.0);
        assert_eq!(c.eval(&[1.9]), 0.0);
        assert_eq!(c.eval(&[1.74]), 0.0);
        let v = c.eval(&[1.6]);
        assert!(v > 0.0 && v < 1.0, "{v}");
        assert!(matches!(
            make_cutoff(1, 1.4, 0.25, 2.0, 64),
            Err(Error::CutoffGeometryInfeasible { .. })
        ));
    }

    #[test]
    fn cumulative_is_continuous_at_panel_edges() {
        let c = make_cutoff(1, 2.0, 0.25, 2.0, 64).unwrap();
        for i in 1..64 {
            let u = -1.0 + i as f64 / 32.0;
            let left = c.cumulative_bump(u - 1e-13);
            let right = c.cumulative_bump(u + 1e-13);
            assert!((left - right).abs() < 1e-11, "{i}: {left} {right}");
        }
    }

    #[test]
    fn ball_is_lexicographic() {
        let b = ball_indices(2, 1.0);
        assert_eq!(b, vec![vec![-1, 0], vec![0, -1], vec![0, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn fft_matches_direct_dft() {
        let n = 4;
        let data: Vec<Complex64> = (0..16).map(|i| Complex64::new(i as f64, (i * i) as f64 * 0.1)).collect();
        let out = fft_nd(data.clone(), n, 2);
        for k1 in 0..n {
            for k2 in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for j1 in 0..n {
                    for j2 in 0..n {
                        let ph = -2.0 * PI * ((k1 * j1 + k2 * j2) as f64) / n as f64;
                        s += data[j1 * n + j2] * Complex64::cis(ph);
                    }
                }
                assert!((s - out[k1 * n + k2]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_target_and_aliasing() {
        let c = CutoffFunction::with_defaults(1).unwrap();
        let z = by_name("zero", 1).unwrap();
        assert!(lattice_coefficients(&z, &c, &[0.0], 4.0, 64).unwrap().is_empty());
        let g = by_name("gaussian", 1).unwrap();
        assert!(windowed_coefficients(&z, &c, &[0.0], 4.0, 64).unwrap().is_empty());
        assert!(matches!(
            lattice_coefficients(&g, &c, &[0.0], 16.0, 64),
            Err(Error::Aliasing { .. })
        ));
    }

    #[test]
    fn singleton_search() {
        let c = CutoffFunction::with_defaults(2).unwrap();
        let g = by_name("gaussian", 2).unwrap();
        let a = shift_search(&g, &c, Weight::Polynomial { s: 0.0 }, 4.0, 1, 64).unwrap();
        assert_eq!(a, vec![0.0, 0.0]);
    }
}
