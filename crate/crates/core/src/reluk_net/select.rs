use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::dictionary::{Dictionary, Group};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::oracles::{gradient, QuadratureGrid};
use crate::splines::local_basis;

/// An orthogonalized atom shorter than this fraction of its norm is treated
/// as linearly dependent and dropped.
const DEPENDENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMode {
    /// Orthogonal greedy with least-squares refit on a quadrature grid.
    Greedy,
    /// Stratified sampling proportional to the ℓ¹ budget.
    Stratified { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub terms: Vec<(Complex64, super::RidgeAtom)>,
    /// Atoms rejected as numerically dependent during greedy refits.
    pub dropped: usize,
}

#[derive(Debug, Clone)]
pub struct GreedyPath {
    /// One selection per requested `n`, in order.
    pub snapshots: Vec<(usize, Selection)>,
    pub dropped: usize,
}

pub fn select_atoms(
    dict: &Dictionary,
    n: usize,
    mode: SelectionMode,
    target: &dyn ScalarField,
    grid: &QuadratureGrid,
    m: usize,
) -> Result<Selection> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if n > dict.len() {
        return Err(Error::SelectionTooLarge { n, available: dict.len() });
    }
    match mode {
        SelectionMode::Greedy => {
            let mut path = greedy_path(dict, &[n], target, grid, m)?;
            Ok(path.snapshots.pop().expect("one snapshot per n").1)
        }
        SelectionMode::Stratified { seed } => Ok(stratified(dict, n, seed)),
    }
}

/// Weighted features of one atom: value block then (for `m = 1`) one
/// gradient block per axis, each scaled by `√w`.
struct Features<'a> {
    grid: &'a QuadratureGrid,
    sqrt_w: Vec<f64>,
    m: usize,
}

impl Features<'_> {
    fn len(&self) -> usize {
        self.grid.len() * (1 + self.m * self.grid.dim())
    }

    fn of_target(&self, f: &dyn ScalarField) -> Vec<Complex64> {
        let g = self.grid.len();
        let d = self.grid.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        for i in 0..g {
            let x = self.grid.point(i);
            out[i] = f.value(x) * self.sqrt_w[i];
            if self.m == 1 {
                for (axis, v) in gradient(f, x).into_iter().enumerate() {
                    out[(1 + axis) * g + i] = v * self.sqrt_w[i];
                }
            }
        }
        debug_assert_eq!(out.len(), g * (1 + self.m * d));
        out
    }

    fn of_atom(&self, atom: &super::RidgeAtom, k: usize) -> Vec<f64> {
        let g = self.grid.len();
        let mut out = vec![0.0; self.len()];
        for i in 0..g {
            let x = self.grid.point(i);
            out[i] = atom.eval(x, k) * self.sqrt_w[i];
            if self.m == 1 {
                for (axis, v) in atom.gradient(x, k).into_iter().enumerate() {
                    out[(1 + axis) * g + i] = v * self.sqrt_w[i];
                }
            }
        }
        out
    }
}

/// Correlations `⟨r, ψ_j⟩` and squared norms of every atom of a group,
/// by scattering grid points into the (at most `k+1`) atoms covering them.
fn scan_group(
    dict: &Dictionary,
    group: &Group,
    features: &Features,
    residual: Option<&[Complex64]>,
) -> (Vec<Complex64>, Vec<f64>) {
    let k = dict.k();
    let n = group.slots.len();
    let mut corr = vec![Complex64::new(0.0, 0.0); n];
    let mut norm2 = vec![0.0; n];
    let grid = features.grid;
    let g = grid.len();
    let d = grid.dim();
    if group.constant {
        let atom = &dict.atoms()[group.slots[0].expect("constant group has its atom")];
        let f = features.of_atom(atom, k);
        norm2[0] = f.iter().map(|v| v * v).sum();
        if let Some(r) = residual {
            corr[0] = f.iter().zip(r).map(|(a, b)| b * a).sum();
        }
        return (corr, norm2);
    }
    let factor = (1u64 << group.l) as f64;
    let (mut vals, mut slopes) = ([0.0; 4], [0.0; 4]);
    for i in 0..g {
        let x = grid.point(i);
        let y = factor * group.theta.iter().zip(x).map(|(t, v)| t * v).sum::<f64>();
        let top = y.ceil() as i64 - 1;
        local_basis(k, y - top as f64, &mut vals, &mut slopes);
        let sw = features.sqrt_w[i];
        for offset in 0..=k {
            let slot = top - offset as i64 - group.j_first;
            if slot < 0 || slot >= n as i64 || group.slots[slot as usize].is_none() {
                continue;
            }
            let slot = slot as usize;
            let v = vals[offset] * sw;
            let mut n2 = v * v;
            if let Some(r) = residual {
                corr[slot] += r[i] * v;
            }
            if features.m == 1 {
                let dv = slopes[offset] * factor * sw;
                for axis in 0..d {
                    let gv = dv * group.theta[axis];
                    n2 += gv * gv;
                    if let Some(r) = residual {
                        corr[slot] += r[(1 + axis) * g + i] * gv;
                    }
                }
            }
            norm2[slot] += n2;
        }
    }
    (corr, norm2)
}

/// Orthogonal greedy selection, recording the least-squares fit after each
/// `n` in `n_list` (strictly increasing).
pub fn greedy_path(
    dict: &Dictionary,
    n_list: &[usize],
    target: &dyn ScalarField,
    grid: &QuadratureGrid,
    m: usize,
) -> Result<GreedyPath> {
    if m > 1 {
        return Err(Error::Unsupported(format!("greedy fitting in H^{m}")));
    }
    if target.dim() != dict.dim() || grid.dim() != dict.dim() {
        return Err(Error::DimensionMismatch { expected: dict.dim(), got: target.dim() });
    }
    if n_list.is_empty() || n_list[0] == 0 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("n_list must be positive and strictly increasing".into()));
    }
    let n_max = *n_list.last().unwrap();
    if n_max > dict.len() {
        return Err(Error::SelectionTooLarge { n: n_max, available: dict.len() });
    }
    let k = dict.k();
    let features = Features {
        grid,
        sqrt_w: grid.weights().iter().map(|w| w.sqrt()).collect(),
        m,
    };
    let mut residual = features.of_target(target);

    let norms: Vec<f64> = {
        let per_group: Vec<(Vec<Complex64>, Vec<f64>)> =
            dict.groups.par_iter().map(|grp| scan_group(dict, grp, &features, None)).collect();
        let mut norms = vec![0.0; dict.len()];
        for (grp, (_, n2)) in dict.groups.iter().zip(per_group) {
            for (slot, v) in grp.slots.iter().zip(n2) {
                if let Some(idx) = slot {
                    norms[*idx] = v.sqrt();
                }
            }
        }
        norms
    };

    let mut used = vec![false; dict.len()];
    let mut q_cols: Vec<Vec<f64>> = Vec::new();
    let mut r_cols: Vec<Vec<f64>> = Vec::new();
    let mut z: Vec<Complex64> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut dropped = 0;
    let mut snapshots = Vec::new();
    let mut next = 0;

    while chosen.len() < n_max {
        let best = dict
            .groups
            .par_iter()
            .map(|grp| {
                let (corr, _) = scan_group(dict, grp, &features, Some(&residual));
                let mut best: Option<(f64, usize)> = None;
                for (slot, c) in grp.slots.iter().zip(corr) {
                    let Some(idx) = *slot else { continue };
                    if used[idx] || norms[idx] == 0.0 {
                        continue;
                    }
                    let score = c.norm() / norms[idx];
                    if best.map_or(true, |(s, _)| score > s) {
                        best = Some((score, idx));
                    }
                }
                best
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .fold(None, |acc: Option<(f64, usize)>, cand| match acc {
                Some((s, i)) if s > cand.0 || (s == cand.0 && i < cand.1) => Some((s, i)),
                _ => Some(cand),
            });
        let Some((_, idx)) = best else {
            return Err(Error::SelectionTooLarge { n: n_max, available: chosen.len() });
        };
        used[idx] = true;
        let raw = features.of_atom(&dict.atoms()[idx], k);
        let raw_norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut q = raw;
        let mut r = vec![0.0; q_cols.len() + 1];
        for _ in 0..2 {
            for (i, col) in q_cols.iter().enumerate() {
                let p: f64 = col.iter().zip(&q).map(|(a, b)| a * b).sum();
                r[i] += p;
                for (qv, cv) in q.iter_mut().zip(col) {
                    *qv -= p * cv;
                }
            }
        }
        let q_norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if q_norm < DEPENDENCE_TOL * raw_norm || q_norm == 0.0 {
            dropped += 1;
            continue;
        }
        for v in q.iter_mut() {
            *v /= q_norm;
        }
        r[q_cols.len()] = q_norm;
        let coef: Complex64 = q.iter().zip(&residual).map(|(a, b)| b * a).sum();
        for (rv, qv) in residual.iter_mut().zip(&q) {
            *rv -= coef * qv;
        }
        z.push(coef);
        q_cols.push(q);
        r_cols.push(r);
        chosen.push(idx);

        if chosen.len() == n_list[next] {
            let amps = back_substitute(&r_cols, &z);
            let terms = chosen
                .iter()
                .zip(amps)
                .map(|(&i, a)| (a, dict.atoms()[i].clone()))
                .collect();
            snapshots.push((chosen.len(), Selection { terms, dropped }));
            next += 1;
        }
    }
    Ok(GreedyPath { snapshots, dropped })
}

/// Solves `R c = z` for upper-triangular `R` stored by columns.
fn back_substitute(r_cols: &[Vec<f64>], z: &[Complex64]) -> Vec<Complex64> {
    let n = z.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = z[i];
        for j in (i + 1)..n {
            acc -= c[j] * r_cols[j][i];
        }
        c[i] = acc / r_cols[i][i];
    }
    c
}

/// Largest-remainder split of `n` draws proportional to `masses`; ties go to
/// the earlier stratum.
pub fn allocate_draws(masses: &[f64], n: usize) -> Vec<usize> {
    let total: f64 = masses.iter().sum();
    if total <= 0.0 || masses.is_empty() {
        return vec![0; masses.len()];
    }
    let quotas: Vec<f64> = masses.iter().map(|m| m / total * n as f64).collect();
    let mut draws: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = draws.iter().sum();
    let mut order: Vec<usize> = (0..masses.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.partial_cmp(&ra).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        draws[i] += 1;
    }
    draws
}

fn stratified(dict: &Dictionary, n: usize, seed: u64) -> Selection {
    let mut strata: BTreeMap<(usize, i64), Vec<usize>> = BTreeMap::new();
    for (i, atom) in dict.atoms().iter().enumerate() {
        if atom.budget.norm() == 0.0 {
            continue;
        }
        let shell = (1.0 + atom.xi_norm).log2().floor() as i64;
        strata.entry((atom.l, shell)).or_default().push(i);
    }
    let members: Vec<&Vec<usize>> = strata.values().collect();
    let masses: Vec<f64> = members
        .iter()
        .map(|idx| idx.iter().map(|&i| dict.atoms()[i].budget.norm()).sum())
        .collect();
    let draws = allocate_draws(&masses, n);
    let mut picked: BTreeMap<usize, Complex64> = BTreeMap::new();
    for (stream, ((idx, mass), count)) in members.iter().zip(&masses).zip(&draws).enumerate() {
        if *count == 0 {
            continue;
        }
        let weights: Vec<f64> = idx.iter().map(|&i| dict.atoms()[i].budget.norm()).collect();
        let dist = WeightedIndex::new(&weights).expect("stratum has positive mass");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream as u64);
        for _ in 0..*count {
            let i = idx[dist.sample(&mut rng)];
            let atom = &dict.atoms()[i];
            let amp = atom.coeff_weight * (mass / *count as f64 / atom.budget.norm());
            *picked.entry(i).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
    }
    Selection {
        terms: picked.into_iter().map(|(i, a)| (a, dict.atoms()[i].clone())).collect(),
        dropped: 0,
    }
}
