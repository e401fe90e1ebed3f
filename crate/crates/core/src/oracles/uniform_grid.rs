//! Per-cell tensor-product L² projection on a uniform grid of `[0,1]^d`: the
//! fixed-grid finite element baseline.

use num_complex::Complex64;
use rayon::prelude::*;

use super::quadrature::{gauss_legendre, legendre_values};
use crate::error::{Error, Result};
use crate::field::ScalarField;

#[derive(Debug, Clone)]
pub struct UniformGridFit {
    dim: usize,
    cells_per_axis: usize,
    k: usize,
    /// Per cell (row-major), tensor Legendre coefficients indexed by the
    /// multi-degree in base `k+1`.
    coeffs: Vec<Vec<Complex64>>,
}

/// Fits `f` with degree `≤ k` per axis on each of `cells_per_axis^d` cells.
pub fn uniform_grid_fit(f: &dyn ScalarField, cells_per_axis: usize, k: usize) -> Result<UniformGridFit> {
    if k > crate::splines::MAX_DEGREE {
        return Err(Error::UnsupportedDegree(k));
    }
    if cells_per_axis == 0 {
        return Err(Error::InvalidParameter("cells_per_axis must be positive".into()));
    }
    let dim = f.dim();
    let q = k + 4;
    let (nodes, weights) = gauss_legendre(q);
    let mut buf = Vec::new();
    let basis: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&t| {
            legendre_values(k, t, &mut buf);
            buf.clone()
        })
        .collect();
    let h = 1.0 / cells_per_axis as f64;
    let n_cells = cells_per_axis.pow(dim as u32);
    let n_modes = (k + 1).pow(dim as u32);
    let n_nodes = q.pow(dim as u32);

    let coeffs = (0..n_cells)
        .into_par_iter()
        .map(|cell| {
            let origin = unflatten(cell, cells_per_axis, dim);
            let mut acc = vec![Complex64::new(0.0, 0.0); n_modes];
            let mut x = vec![0.0; dim];
            for node in 0..n_nodes {
                let ni = unflatten(node, q, dim);
                let mut w = 1.0;
                for a in 0..dim {
                    x[a] = (origin[a] as f64 + 0.5 * (nodes[ni[a]] + 1.0)) * h;
                    w *= 0.5 * weights[ni[a]];
                }
                let v = f.value(&x) * w;
                for (mode, slot) in acc.iter_mut().enumerate() {
                    let mi = unflatten(mode, k + 1, dim);
                    let b: f64 = (0..dim).map(|a| basis[ni[a]][mi[a]]).product();
                    *slot += v * b;
                }
            }
            for (mode, slot) in acc.iter_mut().enumerate() {
                let mi = unflatten(mode, k + 1, dim);
                let norm: f64 = mi.iter().map(|&p| (2 * p + 1) as f64).product();
                *slot *= norm;
            }
            acc
        })
        .collect();
    Ok(UniformGridFit {
        dim,
        cells_per_axis,
        k,
        coeffs,
    })
}

fn unflatten(mut index: usize, base: usize, dim: usize) -> Vec<usize> {
    let mut out = vec![0; dim];
    for a in (0..dim).rev() {
        out[a] = index % base;
        index /= base;
    }
    out
}

impl UniformGridFit {
    /// Degrees of freedom, `cells^d (k+1)^d`.
    pub fn dof(&self) -> usize {
        (self.cells_per_axis * (self.k + 1)).pow(self.dim as u32)
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let c = self.cells_per_axis;
        let mut cell = 0;
        let mut local = Vec::with_capacity(self.dim);
        for &xi in x {
            let idx = ((xi * c as f64).floor() as isize).clamp(0, c as isize - 1) as usize;
            cell = cell * c + idx;
            local.push(2.0 * (xi * c as f64 - idx as f64) - 1.0);
        }
        let per_axis: Vec<Vec<f64>> = local
            .iter()
            .map(|&t| {
                let mut v = Vec::new();
                legendre_values(self.k, t, &mut v);
                v
            })
            .collect();
        self.coeffs[cell]
            .iter()
            .enumerate()
            .map(|(mode, coef)| {
                let mi = unflatten(mode, self.k + 1, self.dim);
                let b: f64 = (0..self.dim).map(|a| per_axis[a][mi[a]]).product();
                coef * b
            })
            .sum()
    }
}

impl ScalarField for UniformGridFit {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> Complex64 {
        self.eval(x)
    }
}
