//! n-term truncations of a lattice expansion: complex exponential networks
//! `Σ a_j e^{2πiθ_j·x}` chosen by a weighted coefficient ordering.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::lattice::{lattice_norm, norm, LatticeExpansion};

/// Ordering key used by [`greedy_truncate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightMode {
    /// `(1+|ξ|)^{2m-s} |c_ξ|`
    Polynomial,
    /// `(1+|ξ|)^{2m} e^{-c|a+ξ|^β} |c_ξ|`
    Exponential { beta: f64, c: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CosineTerm {
    pub amplitude: Complex64,
    pub frequency: Vec<f64>,
    /// Lattice index `ν` the term was taken from, if any.
    pub index: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CosineNetwork {
    dim: usize,
    terms: Vec<CosineTerm>,
    ell1_mass: f64,
}

impl CosineNetwork {
    pub fn new(dim: usize, terms: Vec<CosineTerm>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.frequency.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: t.frequency.len(),
            });
        }
        let ell1_mass = terms.iter().map(|t| t.amplitude.norm()).sum();
        Ok(Self { dim, terms, ell1_mass })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[CosineTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn ell1_mass(&self) -> f64 {
        self.ell1_mass
    }

    /// `Σ a_j e^{2πiθ_j·x}`.
    pub fn evaluate(&self, x: &[f64]) -> Result<Complex64> {
        self.check(x)?;
        Ok(self.eval_unchecked(x))
    }

    /// The same value written with real cosines only:
    /// `a e^{iφ} = |a| cos(φ + arg a) + i |a| cos(φ + arg a - π/2)`.
    pub fn evaluate_cosine_form(&self, x: &[f64]) -> Result<Complex64> {
        self.check(x)?;
        let mut re = 0.0;
        let mut im = 0.0;
        for t in &self.terms {
            let phase = 2.0 * PI * dot(&t.frequency, x) + t.amplitude.arg();
            let r = t.amplitude.norm();
            re += r * phase.cos();
            im += r * (phase - 0.5 * PI).cos();
        }
        Ok(Complex64::new(re, im))
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    fn eval_unchecked(&self, x: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.amplitude * Complex64::cis(2.0 * PI * dot(&t.frequency, x)))
            .sum()
    }
}

impl ScalarField for CosineNetwork {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> Complex64 {
        self.eval_unchecked(x)
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<Complex64>> {
        let mut g = vec![Complex64::new(0.0, 0.0); self.dim];
        for t in &self.terms {
            let e = t.amplitude * Complex64::cis(2.0 * PI * dot(&t.frequency, x));
            for (gi, f) in g.iter_mut().zip(&t.frequency) {
                *gi += e * Complex64::new(0.0, 2.0 * PI * f);
            }
        }
        Some(g)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Ordering key of one coefficient.
pub fn ordering_key(expansion: &LatticeExpansion, nu: &[i64], c: Complex64, s: f64, m: usize, mode: WeightMode) -> f64 {
    let xi = lattice_norm(nu) / expansion.l();
    match mode {
        WeightMode::Polynomial => (1.0 + xi).powf(2.0 * m as f64 - s) * c.norm(),
        WeightMode::Exponential { beta, c: rate } => {
            let theta = norm(&expansion.frequency(nu));
            (1.0 + xi).powi(2 * m as i32) * (-rate * theta.powf(beta)).exp() * c.norm()
        }
    }
}

/// The `n` coefficients with the largest ordering key (ties: lexicographic
/// `ν`), as a network with amplitudes `c_ξ` and frequencies `a+ξ`.
pub fn greedy_truncate(
    expansion: &LatticeExpansion,
    n: usize,
    s: f64,
    m: usize,
    mode: WeightMode,
) -> Result<CosineNetwork> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if mode == WeightMode::Polynomial && m as f64 > s {
        return Err(Error::InvalidParameter(format!("polynomial ordering needs m <= s (m={m}, s={s})")));
    }
    if n > expansion.len() {
        return Err(Error::ExpansionTooSmall {
            n,
            available: expansion.len(),
        });
    }
    let mut ranked: Vec<(f64, &Vec<i64>, Complex64)> = expansion
        .iter()
        .map(|(nu, &c)| (ordering_key(expansion, nu, c, s, m, mode), nu, c))
        .collect();
    // stable: equal keys stay in lexicographic order
    ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));
    let terms = ranked
        .into_iter()
        .take(n)
        .map(|(_, nu, c)| CosineTerm {
            amplitude: c,
            frequency: expansion.frequency(nu),
            index: Some(nu.clone()),
        })
        .collect();
    CosineNetwork::new(expansion.dim(), terms)
}

/// Exact squared `H^m([0,L]^d)` norm of `e^{2πiθ·x}`:
/// `L^d Σ_{|γ|≤m} Π_i (2πθ_i)^{2γ_i}`.
pub fn exponential_hm_weight(theta: &[f64], m: usize, l: f64) -> f64 {
    // complete homogeneous symmetric polynomials h_0..h_m of (2πθ_i)²
    let mut h = vec![0.0; m + 1];
    h[0] = 1.0;
    for &t in theta {
        let x = (2.0 * PI * t).powi(2);
        for j in 1..=m {
            h[j] += x * h[j - 1];
        }
    }
    h.iter().sum::<f64>() * l.powi(theta.len() as i32)
}

/// `sqrt(Σ_{discarded ξ} |c_ξ|² w_m(a+ξ))`: the exact `H^m` error on the
/// period box `[0,L]^d`, an upper bound for the error on `[0,1]^d`.
pub fn hm_error_orthogonal(expansion: &LatticeExpansion, net: &CosineNetwork, m: usize) -> Result<f64> {
    if net.dim() != expansion.dim() {
        return Err(Error::NetExpansionMismatch(format!(
            "dimension {} vs {}",
            net.dim(),
            expansion.dim()
        )));
    }
    let mut kept = std::collections::BTreeSet::new();
    for t in net.terms() {
        let nu = t
            .index
            .as_ref()
            .ok_or_else(|| Error::NetExpansionMismatch("term without lattice index".into()))?;
        match expansion.coefficient(nu) {
            Some(c) if (c - t.amplitude).norm() <= 1e-12 * c.norm().max(1.0) => {}
            _ => return Err(Error::NetExpansionMismatch(format!("term {nu:?} not in expansion"))),
        }
        if !kept.insert(nu.clone()) {
            return Err(Error::NetExpansionMismatch(format!("term {nu:?} repeated")));
        }
    }
    let l = expansion.l();
    Ok(expansion
        .iter()
        .filter(|(nu, _)| !kept.contains(*nu))
        .map(|(nu, c)| c.norm_sqr() * exponential_hm_weight(&expansion.frequency(nu), m, l))
        .sum::<f64>()
        .sqrt())
}
