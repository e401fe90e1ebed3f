//! Shallow ReLU^k networks assembled from ridge B-spline atoms.
//!
//! Each lattice exponential `e^{2πiθ·x}`, `θ = a+ξ`, is expanded along its
//! ridge direction in the multiscale spline series
//! `Σ_l Σ_j α_{j,l} N_k(2^l θ·x - j)`; every term is a ridge atom
//! `ψ_{ξ,l,p}` and every atom is `k+2` ReLU^k units. Atoms are selected by
//! orthogonal greedy fitting or by stratified sampling.

mod dictionary;
mod network;
mod select;

pub use dictionary::{build_dictionary, constant_weights, default_delta, AtomShape, Dictionary, RidgeAtom};
pub use network::{
    logistic, read_network_csv, sigmoidal_convert, to_relu_network, write_network_csv, ReLUkNetwork, ReluTerm,
    SigmoidalNetwork,
};
pub use select::{allocate_draws, greedy_path, select_atoms, GreedyPath, Selection, SelectionMode};
