//! Shared inputs for the benchmarks.

use ridgerate::lattice::{default_fft_grid, lattice_coefficients, make_cutoff};
use ridgerate::oracles::QuadratureGrid;
use ridgerate::reluk_net::{build_dictionary, default_delta, select_atoms, to_relu_network};
use ridgerate::targets::by_name;
use ridgerate::{CutoffFunction, Dictionary, LatticeExpansion, ReLUkNetwork, SelectionMode, TargetFunction};

pub fn target(name: &str, dim: usize) -> TargetFunction {
    by_name(name, dim).expect("known target")
}

pub fn cutoff(dim: usize) -> CutoffFunction {
    make_cutoff(dim, 2.0, 0.25, 2.0, 256).expect("valid cutoff")
}

pub fn expansion(name: &str, dim: usize, r: f64) -> LatticeExpansion {
    let f = target(name, dim);
    lattice_coefficients(&f, &cutoff(dim), &vec![0.0; dim], r, default_fft_grid(dim, r, 2.0)).expect("expansion")
}

/// ReLU^k dictionary for the Gaussian in `dim` dimensions.
pub fn dictionary(dim: usize, k: usize, r: f64, l_max: usize) -> Dictionary {
    build_dictionary(&expansion("gaussian", dim, r), k, l_max, 2.0, 0, default_delta(k, 0)).expect("dictionary")
}

pub fn grid(dim: usize) -> QuadratureGrid {
    QuadratureGrid::composite(dim, if dim == 1 { 64 } else { 8 }, 6, 0.0, 1.0)
}

/// A stratified ReLU^k network with `n` atoms.
pub fn network(dim: usize, k: usize, n: usize) -> ReLUkNetwork {
    let dict = dictionary(dim, k, 3.0, 3);
    let f = target("gaussian", dim);
    let sel = select_atoms(&dict, n, SelectionMode::Stratified { seed: 1 }, &f, &grid(dim), 0).expect("selection");
    to_relu_network(&sel.terms, k).expect("network")
}
