use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::dictionary::{constant_weights, AtomShape, RidgeAtom};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::splines::{binomial, factorial, relu_power, MAX_DEGREE};

#[derive(Debug, Clone, PartialEq)]
pub struct ReluTerm {
    pub amplitude: Complex64,
    /// Unit direction.
    pub omega: Vec<f64>,
    pub bias: f64,
}

/// `Σ_i a_i σ_k(ω_i·x + b_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReLUkNetwork {
    k: usize,
    dim: usize,
    terms: Vec<ReluTerm>,
}

impl ReLUkNetwork {
    pub fn new(k: usize, dim: usize, terms: Vec<ReluTerm>) -> Result<Self> {
        if k > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(k));
        }
        if let Some(t) = terms.iter().find(|t| t.omega.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: t.omega.len() });
        }
        Ok(Self { k, dim, terms })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[ReluTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn ell1_mass(&self) -> f64 {
        self.terms.iter().map(|t| t.amplitude.norm()).sum()
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.amplitude * relu_power(self.k, dot(&t.omega, x) + t.bias))
            .sum()
    }
}

impl ScalarField for ReLUkNetwork {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> Complex64 {
        self.eval(x)
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<Complex64>> {
        if self.k == 0 {
            return Some(vec![Complex64::new(0.0, 0.0); self.dim]);
        }
        let mut g = vec![Complex64::new(0.0, 0.0); self.dim];
        for t in &self.terms {
            let d = self.k as f64 * relu_power(self.k - 1, dot(&t.omega, x) + t.bias);
            if d == 0.0 {
                continue;
            }
            for (gi, w) in g.iter_mut().zip(&t.omega) {
                *gi += t.amplitude * (d * w);
            }
        }
        Some(g)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Expands every selected atom into ReLU^k units: with `c = 2^l|θ|`,
/// `N_k(c ω·x - j) = (c^k/k!) Σ_{i=0}^{k+1} (-1)^i C(k+1,i) σ_k(ω·x - (j+i)/c)`.
pub fn to_relu_network(selection: &[(Complex64, RidgeAtom)], k: usize) -> Result<ReLUkNetwork> {
    if k > MAX_DEGREE {
        return Err(Error::UnsupportedDegree(k));
    }
    let Some(dim) = selection.first().map(|(_, a)| a.theta.len()) else {
        return ReLUkNetwork::new(k, 1, Vec::new());
    };
    let mut terms = Vec::with_capacity(selection.len() * (k + 2));
    for (amp, atom) in selection {
        match atom.shape {
            AtomShape::Spline { j } => {
                let norm = atom.theta.iter().map(|t| t * t).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(Error::DegenerateRidge);
                }
                let omega: Vec<f64> = atom.theta.iter().map(|t| t / norm).collect();
                let c = (1u64 << atom.l) as f64 * norm;
                let lead = c.powi(k as i32) / factorial(k);
                for i in 0..=k + 1 {
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    terms.push(ReluTerm {
                        amplitude: amp * (sign * binomial(k + 1, i) * lead),
                        omega: omega.clone(),
                        bias: -((j + i as i64) as f64) / c,
                    });
                }
            }
            AtomShape::Constant => {
                let mut omega = vec![0.0; dim];
                omega[0] = 1.0;
                for (i, w) in constant_weights(k).into_iter().enumerate() {
                    terms.push(ReluTerm {
                        amplitude: amp * w,
                        omega: omega.clone(),
                        bias: (i + 1) as f64,
                    });
                }
            }
        }
    }
    ReLUkNetwork::new(k, dim, terms)
}

/// CSV with header `k=<k> d=<d> n=<terms>` and one row
/// `amplitude_re,amplitude_im,omega_1..omega_d,bias` per term.
pub fn write_network_csv(net: &ReLUkNetwork, path: &Path) -> Result<()> {
    let mut out = format!("k={} d={} n={}\n", net.k, net.dim, net.terms.len());
    for t in &net.terms {
        let _ = write!(out, "{:.17e},{:.17e}", t.amplitude.re, t.amplitude.im);
        for w in &t.omega {
            let _ = write!(out, ",{w:.17e}");
        }
        let _ = writeln!(out, ",{:.17e}", t.bias);
    }
    std::fs::write(path, out).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn read_network_csv(path: &Path) -> Result<ReLUkNetwork> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let bad = |msg: &str| Error::Config(format!("{}: {msg}", path.display()));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty network file"))?;
    let mut fields = [None; 3];
    for part in header.split_whitespace() {
        let (key, value) = part.split_once('=').ok_or_else(|| bad("malformed header"))?;
        let value: usize = value.parse().map_err(|_| bad("malformed header value"))?;
        match key {
            "k" => fields[0] = Some(value),
            "d" => fields[1] = Some(value),
            "n" => fields[2] = Some(value),
            _ => return Err(bad("unknown header key")),
        }
    }
    let [Some(k), Some(d), Some(n)] = fields else {
        return Err(bad("header needs k, d and n"));
    };
    let mut terms = Vec::with_capacity(n);
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let values = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|_| bad("malformed number"))?;
        if values.len() != d + 3 {
            return Err(bad("wrong column count"));
        }
        terms.push(ReluTerm {
            amplitude: Complex64::new(values[0], values[1]),
            omega: values[2..2 + d].to_vec(),
            bias: values[2 + d],
        });
    }
    if terms.len() != n {
        return Err(bad("term count does not match header"));
    }
    ReLUkNetwork::new(k, d, terms)
}

/// `1 / (1 + e^{-t})`.
pub fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// A Heaviside network with every unit replaced by `σ(t(ω·x + b))`.
pub struct SigmoidalNetwork<F> {
    terms: Vec<ReluTerm>,
    dim: usize,
    sigma: F,
    t: f64,
}

pub fn sigmoidal_convert<F>(net: &ReLUkNetwork, sigma: F, t: f64) -> Result<SigmoidalNetwork<F>>
where
    F: Fn(f64) -> f64 + Sync,
{
    if net.k() != 0 {
        return Err(Error::Unsupported(format!("sigmoidal conversion of a k={} network", net.k())));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("sigmoid scale must be positive (got {t})")));
    }
    Ok(SigmoidalNetwork { terms: net.terms.clone(), dim: net.dim, sigma, t })
}

impl<F> SigmoidalNetwork<F>
where
    F: Fn(f64) -> f64 + Sync,
{
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|term| term.amplitude * (self.sigma)(self.t * (dot(&term.omega, x) + term.bias)))
            .sum()
    }
}

impl<F> ScalarField for SigmoidalNetwork<F>
where
    F: Fn(f64) -> f64 + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> Complex64 {
        self.eval(x)
    }
}
