//! Best piecewise polynomial with free (quantized) breakpoints on `[0,1]`.
//!
//! Breakpoints are restricted to the uniform candidate set `{i / dp_grid}`;
//! dynamic programming over (candidate, pieces used) then finds the global
//! optimum of the L² error over that set.

use num_complex::Complex64;
use rayon::prelude::*;

use super::quadrature::{gauss_legendre, legendre_values};
use crate::error::{Error, Result};

/// Extra Gauss points per interval beyond the polynomial degree.
const EXTRA_NODES: usize = 10;

#[derive(Debug, Clone)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    /// Coefficients in the Legendre basis of `[lo, hi]`.
    pub coeffs: Vec<Complex64>,
    pub squared_error: f64,
}

#[derive(Debug, Clone)]
pub struct FreeKnotFit {
    pub k: usize,
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<Piece>,
    pub l2_error: f64,
}

impl FreeKnotFit {
    pub fn eval(&self, x: f64) -> Complex64 {
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        let piece = &self.pieces[idx.min(self.pieces.len() - 1)];
        let t = 2.0 * (x - piece.lo) / (piece.hi - piece.lo) - 1.0;
        let mut p = Vec::with_capacity(self.k + 1);
        legendre_values(self.k, t, &mut p);
        piece.coeffs.iter().zip(&p).map(|(c, v)| c * v).sum()
    }
}

struct Projector {
    k: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `P_p` at each node.
    basis: Vec<Vec<f64>>,
}

impl Projector {
    fn new(k: usize) -> Self {
        let (nodes, weights) = gauss_legendre(k + EXTRA_NODES);
        let mut buf = Vec::new();
        let basis = nodes
            .iter()
            .map(|&t| {
                legendre_values(k, t, &mut buf);
                buf.clone()
            })
            .collect();
        Self {
            k,
            nodes,
            weights,
            basis,
        }
    }

    /// Legendre coefficients of the L² projection and the squared residual.
    fn project(&self, f: &(dyn Fn(f64) -> Complex64 + Sync), lo: f64, hi: f64) -> (Vec<Complex64>, f64) {
        let half = 0.5 * (hi - lo);
        let values: Vec<Complex64> = self.nodes.iter().map(|t| f(lo + half * (t + 1.0))).collect();
        let coeffs: Vec<Complex64> = (0..=self.k)
            .map(|p| {
                let s: Complex64 = values
                    .iter()
                    .zip(&self.weights)
                    .zip(&self.basis)
                    .map(|((v, w), b)| v * (w * b[p]))
                    .sum();
                s * ((2 * p + 1) as f64 / 2.0)
            })
            .collect();
        let residual: f64 = values
            .iter()
            .zip(&self.weights)
            .zip(&self.basis)
            .map(|((v, w), b)| {
                let fit: Complex64 = coeffs.iter().zip(b).map(|(c, bp)| c * bp).sum();
                w * (v - fit).norm_sqr()
            })
            .sum();
        (coeffs, residual * half)
    }
}

/// Optimal fit with at most `n_breakpoints` breakpoints from the candidate set
/// `{1/dp_grid, ..., (dp_grid-1)/dp_grid}`.
pub fn free_knot_fit(
    f: &(dyn Fn(f64) -> Complex64 + Sync),
    n_breakpoints: usize,
    k: usize,
    dp_grid: usize,
) -> Result<FreeKnotFit> {
    if n_breakpoints >= dp_grid {
        return Err(Error::FreeKnotInfeasible {
            breakpoints: n_breakpoints,
            grid: dp_grid,
        });
    }
    if k > crate::splines::MAX_DEGREE {
        return Err(Error::UnsupportedDegree(k));
    }
    let projector = Projector::new(k);
    let g = dp_grid;
    let x = |i: usize| i as f64 / g as f64;
    // cost[i][j - i - 1] for intervals [x_i, x_j], i < j.
    let cost: Vec<Vec<f64>> = (0..g)
        .into_par_iter()
        .map(|i| ((i + 1)..=g).map(|j| projector.project(f, x(i), x(j)).1).collect())
        .collect();
    let interval = |i: usize, j: usize| cost[i][j - i - 1];

    let pieces_max = n_breakpoints + 1;
    let mut best = vec![vec![f64::INFINITY; g + 1]; pieces_max + 1];
    let mut parent = vec![vec![usize::MAX; g + 1]; pieces_max + 1];
    best[0][0] = 0.0;
    for p in 1..=pieces_max {
        for j in p..=g {
            let mut value = f64::INFINITY;
            let mut arg = usize::MAX;
            for i in (p - 1)..j {
                let candidate = best[p - 1][i] + interval(i, j);
                if candidate < value {
                    value = candidate;
                    arg = i;
                }
            }
            best[p][j] = value;
            parent[p][j] = arg;
        }
    }
    let mut pieces_used = 1;
    for p in 1..=pieces_max {
        if best[p][g] < best[pieces_used][g] {
            pieces_used = p;
        }
    }
    let mut cuts = vec![g];
    let mut j = g;
    for p in (1..=pieces_used).rev() {
        j = parent[p][j];
        cuts.push(j);
    }
    cuts.reverse();
    let pieces: Vec<Piece> = cuts
        .windows(2)
        .map(|w| {
            let (lo, hi) = (x(w[0]), x(w[1]));
            let (coeffs, squared_error) = projector.project(f, lo, hi);
            Piece {
                lo,
                hi,
                coeffs,
                squared_error,
            }
        })
        .collect();
    let l2_error = pieces.iter().map(|p| p.squared_error).sum::<f64>().sqrt();
    Ok(FreeKnotFit {
        k,
        breakpoints: cuts[1..cuts.len() - 1].iter().map(|&i| x(i)).collect(),
        pieces,
        l2_error,
    })
}
