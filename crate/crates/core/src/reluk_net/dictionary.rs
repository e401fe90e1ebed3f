use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{lattice_norm, norm, LatticeExpansion};
use crate::splines::{multiscale_expand, relu_power, BSpline, MultiscaleExpansion};

/// What an atom evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AtomShape {
    /// `N_k(2^l θ·x - j)`.
    Spline { j: i64 },
    /// The constant one on `Ω`, written as `Σ_i w_i σ_k(x₁ + i)` over
    /// `i = 1..=k+1` (see [`constant_weights`]). Used for `θ = 0`.
    Constant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RidgeAtom {
    /// Lattice index `ν` of the frequency `ξ = ν/L`.
    pub xi: Vec<i64>,
    /// `|ξ| = |ν|/L`.
    pub xi_norm: f64,
    pub l: usize,
    /// Position of the atom within its `(ξ, l)` group.
    pub p: usize,
    pub shape: AtomShape,
    /// Ridge vector `a+ξ`.
    pub theta: Vec<f64>,
    /// `(a+ξ)/|a+ξ|` (`e₁` for the constant atom).
    pub direction: Vec<f64>,
    /// `2^l |a+ξ|` (one for the constant atom).
    pub scale: f64,
    /// Coefficient of `ψ` in the expansion of `f`: `c_ξ α_{j,l}`.
    pub coeff_weight: Complex64,
    /// ℓ¹ budget coefficient `a_ξ 2^{-l(1+δ)} (1+|ξ|)^{-1}`,
    /// `a_ξ = c_ξ (1+|a+ξ|)^s`.
    pub budget: Complex64,
    /// `φ = phi_scale · ψ`, `phi_scale = 2^{l(1+δ)}(1+|ξ|) α_{j,l} (1+|a+ξ|)^{-s}`.
    pub phi_scale: Complex64,
    /// Upper bound for `‖φ‖_{H^m(Ω)}`.
    pub hm_norm_bound: f64,
}

impl RidgeAtom {
    pub fn eval(&self, x: &[f64], k: usize) -> f64 {
        match self.shape {
            AtomShape::Spline { j } => BSpline::of_degree(k).eval(self.ridge(x) - j as f64),
            AtomShape::Constant => constant_weights(k)
                .iter()
                .enumerate()
                .map(|(i, w)| w * relu_power(k, x[0] + (i + 1) as f64))
                .sum(),
        }
    }

    /// Gradient of `ψ`.
    pub fn gradient(&self, x: &[f64], k: usize) -> Vec<f64> {
        match self.shape {
            AtomShape::Spline { j } => {
                let d = BSpline::of_degree(k).derivative(self.ridge(x) - j as f64, 1);
                let factor = (1u64 << self.l) as f64;
                self.theta.iter().map(|t| d * factor * t).collect()
            }
            AtomShape::Constant => vec![0.0; x.len()],
        }
    }

    /// `2^l θ·x`.
    pub fn ridge(&self, x: &[f64]) -> f64 {
        let factor = (1u64 << self.l) as f64;
        factor * self.theta.iter().zip(x).map(|(t, v)| t * v).sum::<f64>()
    }
}

/// Weights `w_i` with `Σ_{i=1}^{k+1} w_i (t + i)^k = 1` for all `t`, so the
/// combination of `σ_k(x₁ + i)` is one wherever `x₁ > -1`.
pub fn constant_weights(k: usize) -> Vec<f64> {
    let n = k + 1;
    // match coefficients of t^p, p = 0..=k
    let a = DMatrix::from_fn(n, n, |p, i| {
        let b = (i + 1) as f64;
        crate::splines::binomial(k, p) * b.powi((k - p) as i32)
    });
    let mut rhs = DVector::zeros(n);
    rhs[0] = 1.0;
    a.lu().solve(&rhs).expect("shifted powers are linearly independent").iter().copied().collect()
}

/// `min(k - m + 1/2, 1/2) / 2`.
pub fn default_delta(k: usize, m: usize) -> f64 {
    (k as f64 - m as f64 + 0.5).min(0.5) / 2.0
}

/// Atoms of one `(ξ, l)` pair: `slots[j - j_first]` is the atom index of knot
/// offset `j`, `None` where `α_{j,l} = 0`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Group {
    pub slots: Vec<Option<usize>>,
    pub j_first: i64,
    pub theta: Vec<f64>,
    pub l: usize,
    pub constant: bool,
}

#[derive(Debug, Clone)]
pub struct Dictionary {
    k: usize,
    dim: usize,
    s: f64,
    m: usize,
    delta: f64,
    atoms: Vec<RidgeAtom>,
    pub(crate) groups: Vec<Group>,
    multiscale: MultiscaleExpansion,
}

impl Dictionary {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn atoms(&self) -> &[RidgeAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn multiscale(&self) -> &MultiscaleExpansion {
        &self.multiscale
    }

    /// `Σ |budget|` over all atoms.
    pub fn budget_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.budget.norm()).sum()
    }

    /// `n_{ξ,l}` for every group, as `(ξ, l, count)`.
    pub fn group_counts(&self) -> Vec<(Vec<i64>, usize, usize)> {
        self.groups
            .iter()
            .filter_map(|g| {
                let first = g.slots.iter().flatten().next()?;
                Some((self.atoms[*first].xi.clone(), g.l, g.slots.iter().flatten().count()))
            })
            .collect()
    }
}

/// Range of `θ·x` over the unit cube.
fn ridge_range(theta: &[f64]) -> (f64, f64) {
    let lo = theta.iter().map(|t| t.min(0.0)).sum();
    let hi = theta.iter().map(|t| t.max(0.0)).sum();
    (lo, hi)
}

/// Largest `(d-1)`-volume of a hyperplane section of the unit cube.
fn max_section(dim: usize) -> f64 {
    if dim == 1 {
        1.0
    } else {
        SQRT_2
    }
}

/// Upper bound for `‖N_k(c ω·x - j)‖_{H^m(Ω)}` with `|ω| = 1`: the smaller of
/// the section bound `A_d Σ_r c^{2r-1} ‖N_k^{(r)}‖²` and the sup bound
/// `Σ_r c^{2r} sup|N_k^{(r)}|²`.
fn psi_hm_bound(basis: BSpline, c: f64, m: usize, dim: usize) -> f64 {
    let section: f64 = (0..=m)
        .map(|r| max_section(dim) * c.powi(2 * r as i32 - 1) * basis.derivative_energy(r))
        .sum();
    let sup: f64 = (0..=m).map(|r| c.powi(2 * r as i32) * basis.derivative_sup(r).powi(2)).sum();
    section.min(sup).sqrt()
}

/// Enumerates every atom `N_k(2^l(a+ξ)·x - j)` that is not identically zero on
/// `Ω`, for all stored `ξ` and `l = 1..=l_max`.
pub fn build_dictionary(
    expansion: &LatticeExpansion,
    k: usize,
    l_max: usize,
    s: f64,
    m: usize,
    delta: f64,
) -> Result<Dictionary> {
    if expansion.is_empty() {
        return Err(Error::EmptyExpansion);
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be positive (got {delta})")));
    }
    let basis = BSpline::new(k)?;
    let dim = expansion.dim();
    let max_theta = expansion
        .iter()
        .map(|(nu, _)| norm(&expansion.frequency(nu)))
        .fold(0.0, f64::max);
    let reach = max_theta * (dim as f64).sqrt();
    let multiscale = multiscale_expand(k, l_max, (-reach - 1.0, reach + 1.0))?;
    let l_scale = expansion.l();
    let coeffs: Vec<(Vec<i64>, Complex64)> = expansion.iter().map(|(nu, c)| (nu.clone(), *c)).collect();

    let per_frequency: Vec<Vec<(Group, Vec<RidgeAtom>)>> = coeffs
        .par_iter()
        .map(|(nu, c)| {
            let theta = expansion.frequency(nu);
            let theta_norm = norm(&theta);
            let xi_norm = lattice_norm(nu) / l_scale;
            let a_xi = c * (1.0 + theta_norm).powf(s);
            if theta_norm == 0.0 {
                let mut direction = vec![0.0; dim];
                direction[0] = 1.0;
                let atom = RidgeAtom {
                    xi: nu.clone(),
                    xi_norm,
                    l: 0,
                    p: 0,
                    shape: AtomShape::Constant,
                    theta: theta.clone(),
                    direction,
                    scale: 1.0,
                    coeff_weight: *c,
                    budget: a_xi / (1.0 + xi_norm),
                    phi_scale: Complex64::new(1.0 + xi_norm, 0.0),
                    hm_norm_bound: 1.0 + xi_norm,
                };
                let group = Group { slots: vec![Some(0)], j_first: 0, theta, l: 0, constant: true };
                return vec![(group, vec![atom])];
            }
            let direction: Vec<f64> = theta.iter().map(|t| t / theta_norm).collect();
            let (lo, hi) = ridge_range(&theta);
            (1..=l_max)
                .filter_map(|l| {
                    let factor = (1u64 << l) as f64;
                    let (t_lo, t_hi) = (factor * lo, factor * hi);
                    // open support (j, j+k+1) must meet the open range (t_lo, t_hi)
                    let j_first = (t_lo - (k + 1) as f64).floor() as i64 + 1;
                    let j_last = t_hi.ceil() as i64 - 1;
                    let scale = factor * theta_norm;
                    let two_l = 2f64.powf(l as f64 * (1.0 + delta));
                    let budget = a_xi / (two_l * (1.0 + xi_norm));
                    let psi_bound = psi_hm_bound(basis, scale, m, dim);
                    let mut atoms = Vec::new();
                    let mut slots = Vec::new();
                    for j in j_first..=j_last {
                        let alpha = multiscale.coefficient(l, j);
                        if alpha.norm() == 0.0 || c.norm() == 0.0 {
                            slots.push(None);
                            continue;
                        }
                        slots.push(Some(atoms.len()));
                        let phi_scale = alpha * (two_l * (1.0 + xi_norm) * (1.0 + theta_norm).powf(-s));
                        atoms.push(RidgeAtom {
                            xi: nu.clone(),
                            xi_norm,
                            l,
                            p: atoms.len(),
                            shape: AtomShape::Spline { j },
                            theta: theta.clone(),
                            direction: direction.clone(),
                            scale,
                            coeff_weight: c * alpha,
                            budget,
                            phi_scale,
                            hm_norm_bound: phi_scale.norm() * psi_bound,
                        });
                    }
                    debug_assert!(atoms.len() as f64 <= factor * theta_norm * (dim as f64).sqrt() + k as f64 + 2.0);
                    (!atoms.is_empty()).then(|| {
                        let group = Group { slots, j_first, theta: theta.clone(), l, constant: false };
                        (group, atoms)
                    })
                })
                .collect()
        })
        .collect();

    let mut atoms = Vec::new();
    let mut groups = Vec::new();
    for (mut group, group_atoms) in per_frequency.into_iter().flatten() {
        let start = atoms.len();
        for slot in group.slots.iter_mut().flatten() {
            *slot += start;
        }
        atoms.extend(group_atoms);
        groups.push(group);
    }
    Ok(Dictionary {
        k,
        dim,
        s,
        m,
        delta,
        atoms,
        groups,
        multiscale,
    })
}
