//! Analytic test functions on `[0,1]^d` with closed-form Fourier transforms
//! under the convention `f̂(ξ) = ∫ f(x) e^{-2πiξ·x} dx`.
//!
//! Discrete-spectrum targets (exponentials, cosine sums) carry an explicit
//! list of atoms; their `fourier` answers the atom amplitude at an atom and
//! zero elsewhere.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::splines::BSpline;

/// Increment ratio across doubling radii above which a Barron estimate is
/// declared divergent.
pub const DIVERGENCE_RATIO: f64 = 0.8;

/// Names accepted by [`by_name`].
pub const TARGET_NAMES: &[&str] = &["gaussian", "expwave", "cos", "cossum", "bump2", "bump3", "bump4", "zero"];

const BUMP_START: f64 = 0.1;
const BUMP_WIDTH: f64 = 0.8;

/// Spectral Barron membership: `f ∈ B^s` for every `s < s_sup` (all `s` when
/// infinite), and `f ∈ B_{β,c}` for the listed exponential parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarronInfo {
    pub s_sup: f64,
    pub exponential: Option<(f64, f64)>,
}

impl BarronInfo {
    pub fn contains(&self, s: f64) -> bool {
        s >= 0.0 && s < self.s_sup
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub frequency: [f64; 3],
    pub amplitude: Complex64,
}

#[derive(Debug, Clone)]
enum Kind {
    Gaussian { sigma: f64, center: f64 },
    Atoms(Vec<Atom>),
    Bump { spline: BSpline, h: f64 },
    Zero,
}

#[derive(Debug, Clone)]
pub struct TargetFunction {
    name: String,
    dim: usize,
    kind: Kind,
    barron: BarronInfo,
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

fn axis(i: usize, scale: f64) -> [f64; 3] {
    let mut v = [0.0; 3];
    v[i] = scale;
    v
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `sin(πx)/(πx)`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - (PI * x).powi(2) / 6.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Targets (i)-(iv) of the corpus: Gaussian, exponential, cosine sum, bump.
pub fn builtin_targets(dim: usize) -> Result<Vec<TargetFunction>> {
    ["gaussian", "expwave", "cossum", "bump3"]
        .iter()
        .map(|name| by_name(name, dim))
        .collect()
}

pub fn by_name(name: &str, dim: usize) -> Result<TargetFunction> {
    check_dim(dim)?;
    match name {
        "gaussian" => Ok(TargetFunction::gaussian(dim, 1.0, 0.5)),
        "expwave" => Ok(TargetFunction::exponential(&[1, 0, 0][..dim])),
        "cos" => Ok(TargetFunction::from_atoms(
            "cos",
            dim,
            vec![
                Atom { frequency: axis(0, 1.0), amplitude: real(0.5) },
                Atom { frequency: axis(0, -1.0), amplitude: real(0.5) },
            ],
        )),
        "cossum" => Ok(TargetFunction::cosine_sum(dim)),
        "bump2" => TargetFunction::bump(dim, 2),
        "bump3" => TargetFunction::bump(dim, 3),
        "bump4" => TargetFunction::bump(dim, 4),
        "zero" => Ok(TargetFunction {
            name: "zero".into(),
            dim,
            kind: Kind::Zero,
            barron: BarronInfo { s_sup: f64::INFINITY, exponential: Some((1.0, f64::INFINITY)) },
        }),
        other => Err(Error::UnknownTarget(other.to_string())),
    }
}

impl TargetFunction {
    /// `e^{-π|x - x₀|²/σ²}` with `x₀ = (center, ..., center)`.
    pub fn gaussian(dim: usize, sigma: f64, center: f64) -> Self {
        Self {
            name: "gaussian".into(),
            dim,
            kind: Kind::Gaussian { sigma, center },
            barron: BarronInfo { s_sup: f64::INFINITY, exponential: Some((1.0, 1.0)) },
        }
    }

    /// `e^{2πiν·x}` for an integer vector `ν`.
    pub fn exponential(nu: &[i64]) -> Self {
        let mut frequency = [0.0; 3];
        for (f, &n) in frequency.iter_mut().zip(nu) {
            *f = n as f64;
        }
        Self::from_atoms("expwave", nu.len(), vec![Atom { frequency, amplitude: real(1.0) }])
    }

    /// `cos 2πx₁ + ½cos 6πx₁`, plus `⅛cos 2π(x₁+2x₂) + ⅛cos 2π(x₁−2x₂)` for
    /// `d ≥ 2`. Vanishes on the hyperplane `x₁ = 1/4`.
    pub fn cosine_sum(dim: usize) -> Self {
        let mut atoms = Vec::new();
        let mut pair = |f: [f64; 3], a: f64| {
            atoms.push(Atom { frequency: f, amplitude: real(a / 2.0) });
            atoms.push(Atom { frequency: f.map(|v| -v), amplitude: real(a / 2.0) });
        };
        pair(axis(0, 1.0), 1.0);
        pair(axis(0, 3.0), 0.5);
        if dim >= 2 {
            pair([1.0, 2.0, 0.0], 0.125);
            pair([1.0, -2.0, 0.0], 0.125);
        }
        Self::from_atoms("cossum", dim, atoms)
    }

    /// Product of `N_{r-1}((x_i - 0.1)/h)` with `h = 0.8/r`: an r-fold
    /// convolution of interval indicators per axis, supported in `[0.1, 0.9]^d`.
    pub fn bump(dim: usize, r: usize) -> Result<Self> {
        check_dim(dim)?;
        if !(2..=4).contains(&r) {
            return Err(Error::InvalidParameter(format!("bump order r={r} outside 2..=4")));
        }
        Ok(Self {
            name: format!("bump{r}"),
            dim,
            kind: Kind::Bump { spline: BSpline::new(r - 1)?, h: BUMP_WIDTH / r as f64 },
            barron: BarronInfo { s_sup: r as f64 - 1.0, exponential: None },
        })
    }

    fn from_atoms(name: &str, dim: usize, atoms: Vec<Atom>) -> Self {
        Self {
            name: name.into(),
            dim,
            kind: Kind::Atoms(atoms),
            barron: BarronInfo { s_sup: f64::INFINITY, exponential: Some((1.0, f64::INFINITY)) },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn barron(&self) -> BarronInfo {
        self.barron
    }

    /// Discrete spectrum, if the target has one (the zero target has an
    /// empty one).
    pub fn atoms(&self) -> Option<&[Atom]> {
        match &self.kind {
            Kind::Atoms(a) => Some(a),
            Kind::Zero => Some(&[]),
            _ => None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        match &self.kind {
            Kind::Gaussian { sigma, center } => {
                let r2: f64 = x.iter().map(|xi| (xi - center).powi(2)).sum();
                real((-PI * r2 / (sigma * sigma)).exp())
            }
            Kind::Atoms(atoms) => atoms
                .iter()
                .map(|a| a.amplitude * Complex64::cis(2.0 * PI * dot(&a.frequency, x)))
                .sum(),
            Kind::Bump { spline, h } => real(x.iter().map(|&xi| spline.eval((xi - BUMP_START) / h)).product()),
            Kind::Zero => Complex64::new(0.0, 0.0),
        }
    }

    pub fn gradient_at(&self, x: &[f64]) -> Vec<Complex64> {
        match &self.kind {
            Kind::Gaussian { sigma, center } => {
                let v = self.eval(x);
                x.iter().map(|xi| v * (-2.0 * PI * (xi - center) / (sigma * sigma))).collect()
            }
            Kind::Atoms(atoms) => (0..self.dim)
                .map(|i| {
                    atoms
                        .iter()
                        .map(|a| {
                            a.amplitude
                                * Complex64::new(0.0, 2.0 * PI * a.frequency[i])
                                * Complex64::cis(2.0 * PI * dot(&a.frequency, x))
                        })
                        .sum()
                })
                .collect(),
            Kind::Bump { spline, h } => {
                let t: Vec<f64> = x.iter().map(|&xi| (xi - BUMP_START) / h).collect();
                (0..self.dim)
                    .map(|i| {
                        let p: f64 = t
                            .iter()
                            .enumerate()
                            .map(|(j, &tj)| if i == j { spline.derivative(tj, 1) / h } else { spline.eval(tj) })
                            .product();
                        real(p)
                    })
                    .collect()
            }
            Kind::Zero => vec![Complex64::new(0.0, 0.0); self.dim],
        }
    }

    /// `f̂(ξ)`; for discrete spectra the atom amplitude at an atom, zero
    /// elsewhere.
    pub fn fourier(&self, xi: &[f64]) -> Complex64 {
        match &self.kind {
            Kind::Atoms(atoms) => atoms
                .iter()
                .filter(|a| xi.iter().zip(&a.frequency).all(|(p, q)| p == q))
                .map(|a| a.amplitude)
                .sum(),
            Kind::Zero => Complex64::new(0.0, 0.0),
            _ => (0..self.dim).map(|i| self.fourier_factor(xi[i]).unwrap()).product(),
        }
    }

    /// One-dimensional factor of a separable transform density,
    /// `f̂(ξ) = Π_i factor(ξ_i)`. `None` for discrete spectra.
    pub fn fourier_factor(&self, xi: f64) -> Option<Complex64> {
        match &self.kind {
            Kind::Gaussian { sigma, center } => {
                Some(Complex64::from_polar(sigma * (-PI * (sigma * xi).powi(2)).exp(), -2.0 * PI * xi * center))
            }
            Kind::Bump { spline, h } => {
                let r = spline.degree() + 1;
                let phase = -2.0 * PI * xi * BUMP_START - PI * r as f64 * h * xi;
                Some(Complex64::from_polar(h * sinc(h * xi).powi(r as i32), phase))
            }
            _ => None,
        }
    }
}

fn dot(f: &[f64; 3], x: &[f64]) -> f64 {
    x.iter().zip(f).map(|(a, b)| a * b).sum()
}

impl ScalarField for TargetFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> Complex64 {
        self.eval(x)
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<Complex64>> {
        Some(self.gradient_at(x))
    }
}

/// Riemann-sum estimate of `∫_{|ξ| ≤ radius} (1+|ξ|)^s |f̂(ξ)| dξ` on the grid
/// `grid_step·Z^d`; discrete spectra are summed exactly over their atoms.
///
/// The estimate is also taken at `radius/2` and `radius/4`; if the outer shell
/// contributes at least [`DIVERGENCE_RATIO`] times the inner one (and a
/// non-negligible amount), the integral is reported as divergent.
pub fn barron_norm_estimate(f: &TargetFunction, s: f64, radius: f64, grid_step: f64) -> Result<f64> {
    if !(s >= 0.0 && radius > 0.0 && grid_step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "barron estimate needs s >= 0, radius > 0, step > 0 (s={s}, radius={radius}, step={grid_step})"
        )));
    }
    if let Some(atoms) = f.atoms() {
        return Ok(atoms
            .iter()
            .map(|a| (norm(&a.frequency[..f.dim]), a.amplitude.norm()))
            .filter(|(r, _)| *r <= radius)
            .map(|(r, c)| (1.0 + r).powf(s) * c)
            .sum());
    }
    let shells = riemann_shells(f, s, radius, grid_step);
    let (inner, middle, outer) = (shells[0], shells[1], shells[2]);
    let total = inner + middle + outer;
    if middle > 0.0 && outer > 1e-9 * total && outer >= DIVERGENCE_RATIO * middle {
        return Err(Error::NormEstimateDiverges { ratio: outer / middle, radius });
    }
    Ok(total)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Contributions of `|ξ| ≤ R/4`, `R/4 < |ξ| ≤ R/2`, `R/2 < |ξ| ≤ R`.
fn riemann_shells(f: &TargetFunction, s: f64, radius: f64, step: f64) -> [f64; 3] {
    let d = f.dim();
    let half = (radius / step).floor() as i64;
    let side = (2 * half + 1) as usize;
    let cell = step.powi(d as i32);
    let rows = side.pow(d as u32 - 1);
    (0..rows)
        .into_par_iter()
        .map(|row| {
            let mut xi = vec![0.0; d];
            let mut rest = row;
            for v in xi.iter_mut().skip(1) {
                *v = ((rest % side) as i64 - half) as f64 * step;
                rest /= side;
            }
            let mut acc = [0.0; 3];
            for i in -half..=half {
                xi[0] = i as f64 * step;
                let r = norm(&xi);
                if r > radius {
                    continue;
                }
                let w = (1.0 + r).powf(s) * f.fourier(&xi).norm() * cell;
                let shell = if r <= radius / 4.0 {
                    0
                } else if r <= radius / 2.0 {
                    1
                } else {
                    2
                };
                acc[shell] += w;
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold([0.0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]])
}
