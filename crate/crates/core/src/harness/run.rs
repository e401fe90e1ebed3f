use std::time::Instant;

use rayon::prelude::*;

use super::{predict_exponents, ExperimentConfig, Method, RateReport, RateRow};
use crate::cosine_net::{greedy_truncate, hm_error_orthogonal, WeightMode};
use crate::error::{Error, Result};
use crate::field::{Difference, FnField, ScalarField};
use crate::lattice::{
    default_fft_grid, lattice_coefficients, make_cutoff, shift_search, LatticeExpansion, Weight, DEFAULT_ALPHA,
    DEFAULT_EPS, DEFAULT_MOLLIFIER_GRID,
};
use crate::oracles::{free_knot_fit, hm_norm, uniform_grid_fit, QuadratureGrid};
use crate::reluk_net::{
    build_dictionary, default_delta, greedy_path, select_atoms, to_relu_network, write_network_csv, SelectionMode,
};
use crate::targets::{by_name, TargetFunction};

/// Grid on which errors are measured. Its node counts differ from
/// [`least_squares_grid`] so no error is read off the fitting nodes.
pub fn error_grid(dim: usize) -> QuadratureGrid {
    match dim {
        1 => QuadratureGrid::composite(1, 400, 6, 0.0, 1.0),
        2 => QuadratureGrid::composite(2, 40, 5, 0.0, 1.0),
        _ => QuadratureGrid::composite(dim, 10, 5, 0.0, 1.0),
    }
}

/// Grid for greedy least-squares refits.
pub fn least_squares_grid(dim: usize) -> QuadratureGrid {
    match dim {
        1 => QuadratureGrid::composite(1, 128, 8, 0.0, 1.0),
        2 => QuadratureGrid::composite(2, 16, 8, 0.0, 1.0),
        _ => QuadratureGrid::composite(dim, 3, 8, 0.0, 1.0),
    }
}

fn default_relu_radius(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 1.5,
        _ => 1.0,
    }
}

fn default_l_max(dim: usize) -> usize {
    match dim {
        1 => 7,
        2 => 5,
        _ => 4,
    }
}

/// Smallest `R = 4·2^j` whose lattice ball holds at least `2·n_max` points.
fn default_cosine_radius(dim: usize, l: f64, n_max: usize) -> f64 {
    let mut r = 4.0;
    while lattice_ball_size(dim, r * l) < 2 * n_max {
        r *= 2.0;
    }
    r
}

fn lattice_ball_size(dim: usize, radius: f64) -> usize {
    let b = radius.floor() as i64;
    let side = (2 * b + 1) as usize;
    (0..side.pow(dim as u32))
        .filter(|&flat| {
            let mut rest = flat;
            let mut sq = 0.0;
            for _ in 0..dim {
                let v = (rest % side) as i64 - b;
                rest /= side;
                sq += (v * v) as f64;
            }
            sq.sqrt() <= radius
        })
        .count()
}

/// Runs the sweep on the configured worker count (config key `threads`,
/// else `RIDGERATE_THREADS`, else all cores). Results do not depend on it.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RateReport> {
    cfg.validate()?;
    let report = match cfg.resolved_threads()? {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| sweep(cfg)),
        None => sweep(cfg),
    }?;
    if let Some(path) = &cfg.output {
        super::emit_csv(&report, path)?;
    }
    Ok(report)
}

fn sweep(cfg: &ExperimentConfig) -> Result<RateReport> {
    let f = by_name(&cfg.target, cfg.dim)?;
    let s = cfg.s.unwrap_or(0.0);
    let theory = predict_exponents(s, cfg.m, cfg.k, cfg.dim, cfg.method)?;
    let grid = error_grid(cfg.dim);
    let rows = match cfg.method {
        Method::Cosine | Method::CosineExp => cosine_rows(cfg, &f, &grid)?,
        Method::ReluGreedy | Method::ReluStratified => relu_rows(cfg, &f, &grid)?,
        Method::UniformGrid => cfg
            .n_list
            .par_iter()
            .map(|&cells| {
                let t0 = Instant::now();
                let fit = uniform_grid_fit(&f, cells, cfg.k).map_err(|e| e.at_n(cells))?;
                row(cfg, fit.dof(), &f, &fit, &grid, f64::NAN, None, t0).map_err(|e| e.at_n(cells))
            })
            .collect::<Result<Vec<_>>>()?,
        Method::FreeKnot => cfg
            .n_list
            .par_iter()
            .map(|&n| {
                let t0 = Instant::now();
                let fit = free_knot_fit(&|x| f.eval(&[x]), n, cfg.k, cfg.dp_grid).map_err(|e| e.at_n(n))?;
                let approx = FnField::new(1, |x: &[f64]| fit.eval(x[0]));
                row(cfg, n, &f, &approx, &grid, f64::NAN, None, t0).map_err(|e| e.at_n(n))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(RateReport::new(rows, theory))
}

#[allow(clippy::too_many_arguments)]
fn row(
    cfg: &ExperimentConfig,
    n: usize,
    f: &TargetFunction,
    approx: &dyn ScalarField,
    grid: &QuadratureGrid,
    ell1_mass: f64,
    error_orthogonal: Option<f64>,
    t0: Instant,
) -> Result<RateRow> {
    let diff = Difference { a: f, b: approx };
    let error_l2 = hm_norm(&diff, grid, 0)?;
    let error_hm = if cfg.m == 0 { error_l2 } else { hm_norm(&diff, grid, cfg.m)? };
    let wall_ms = if cfg.timing { t0.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    Ok(RateRow {
        n,
        error_l2,
        error_hm,
        error_orthogonal,
        ell1_mass,
        wall_ms,
    })
}

fn expansion(cfg: &ExperimentConfig, f: &TargetFunction, weight: Weight, r: f64) -> Result<LatticeExpansion> {
    let cutoff = make_cutoff(cfg.dim, cfg.l, DEFAULT_EPS, DEFAULT_ALPHA, DEFAULT_MOLLIFIER_GRID)?;
    let fft = default_fft_grid(cfg.dim, r, cfg.l);
    let a = shift_search(f, &cutoff, weight, r, cfg.shift_candidates, fft)?;
    lattice_coefficients(f, &cutoff, &a, r, fft)
}

fn cosine_rows(cfg: &ExperimentConfig, f: &TargetFunction, grid: &QuadratureGrid) -> Result<Vec<RateRow>> {
    let n_max = *cfg.n_list.last().unwrap();
    let r = cfg.r.unwrap_or_else(|| default_cosine_radius(cfg.dim, cfg.l, n_max));
    let s = cfg.s.unwrap_or(0.0);
    let (weight, mode) = match (cfg.beta, cfg.c) {
        (Some(beta), Some(c)) => (Weight::Exponential { beta, c }, WeightMode::Exponential { beta, c }),
        _ => (Weight::Polynomial { s }, WeightMode::Polynomial),
    };
    let exp = expansion(cfg, f, weight, r)?;
    cfg.n_list
        .par_iter()
        .map(|&n| {
            let t0 = Instant::now();
            // Σ_n contains the shorter networks, so a small expansion is used whole
            let net = greedy_truncate(&exp, n.min(exp.len()), s, cfg.m, mode).map_err(|e| e.at_n(n))?;
            let orth = hm_error_orthogonal(&exp, &net, cfg.m).map_err(|e| e.at_n(n))?;
            row(cfg, n, f, &net, grid, net.ell1_mass(), Some(orth), t0).map_err(|e| e.at_n(n))
        })
        .collect()
}

fn relu_rows(cfg: &ExperimentConfig, f: &TargetFunction, grid: &QuadratureGrid) -> Result<Vec<RateRow>> {
    let s = cfg.s.unwrap_or(0.0);
    let r = cfg.r.unwrap_or_else(|| default_relu_radius(cfg.dim));
    let l_max = cfg.l_max.unwrap_or_else(|| default_l_max(cfg.dim));
    let exp = expansion(cfg, f, Weight::Polynomial { s }, r)?;
    let dict = build_dictionary(&exp, cfg.k, l_max, s, cfg.m, default_delta(cfg.k, cfg.m))?;
    let ls = least_squares_grid(cfg.dim);
    let n_max = *cfg.n_list.last().unwrap();
    let selections = match cfg.method {
        Method::ReluGreedy => {
            let t0 = Instant::now();
            let path = greedy_path(&dict, &cfg.n_list, f, &ls, cfg.m).map_err(|e| e.at_n(n_max))?;
            path.snapshots.into_iter().map(|(n, sel)| (n, sel, t0)).collect::<Vec<_>>()
        }
        _ => cfg
            .n_list
            .par_iter()
            .map(|&n| {
                let t0 = Instant::now();
                select_atoms(&dict, n, SelectionMode::Stratified { seed: cfg.seed }, f, &ls, cfg.m)
                    .map(|sel| (n, sel, t0))
                    .map_err(|e| e.at_n(n))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let rows = selections
        .par_iter()
        .map(|(n, sel, t0)| {
            let net = to_relu_network(&sel.terms, cfg.k)?;
            if *n == n_max {
                if let Some(path) = &cfg.network_output {
                    write_network_csv(&net, path)?;
                }
            }
            row(cfg, *n, f, &net, grid, net.ell1_mass(), None, *t0).map_err(|e| e.at_n(*n))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows)
}
