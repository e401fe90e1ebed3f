//! Experiment configuration, the n-sweep runner, slope fitting and CSV
//! output.

mod predict;
mod report;
mod run;

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::splines::MAX_DEGREE;
use crate::targets::by_name;

pub use predict::predict_exponents;
pub use report::{emit_csv, fit_slope, RateReport, RateRow, CSV_HEADER};
pub use run::{error_grid, least_squares_grid, run_experiment};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "RIDGERATE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Cosine,
    CosineExp,
    ReluGreedy,
    ReluStratified,
    UniformGrid,
    FreeKnot,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Cosine,
        Method::CosineExp,
        Method::ReluGreedy,
        Method::ReluStratified,
        Method::UniformGrid,
        Method::FreeKnot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Cosine => "cosine",
            Method::CosineExp => "cosine_exp",
            Method::ReluGreedy => "reluk_greedy",
            Method::ReluStratified => "reluk_stratified",
            Method::UniformGrid => "uniform_grid",
            Method::FreeKnot => "free_knot",
        }
    }

    pub fn is_relu(self) -> bool {
        matches!(self, Method::ReluGreedy | Method::ReluStratified)
    }

    fn needs_s(self) -> bool {
        matches!(self, Method::Cosine | Method::ReluGreedy | Method::ReluStratified)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown method '{s}'")))
    }
}

/// One experiment: a target, an approximation method and the `n` values to
/// sweep.
///
/// For `uniform_grid` the entries of `n_list` are cells per axis and the
/// report's `n` is the degree-of-freedom count; for `free_knot` they are
/// breakpoint counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub target: String,
    pub dim: usize,
    pub method: Method,
    pub k: usize,
    pub m: usize,
    pub s: Option<f64>,
    pub beta: Option<f64>,
    pub c: Option<f64>,
    pub n_list: Vec<usize>,
    /// Period `L` of the lattice expansion.
    pub l: f64,
    /// Truncation radius `R`; chosen from the method and `n_list` if absent.
    pub r: Option<f64>,
    pub seed: u64,
    pub l_max: Option<usize>,
    /// Shift candidates per axis.
    pub shift_candidates: usize,
    pub dp_grid: usize,
    pub threads: Option<usize>,
    pub timing: bool,
    pub output: Option<PathBuf>,
    pub network_output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(target: &str, dim: usize, method: Method, n_list: Vec<usize>) -> Self {
        Self {
            target: target.to_string(),
            dim,
            method,
            k: 1,
            m: 0,
            s: None,
            beta: None,
            c: None,
            n_list,
            l: crate::lattice::DEFAULT_L,
            r: None,
            seed: 0,
            l_max: None,
            shift_candidates: 4,
            dp_grid: 512,
            threads: None,
            timing: false,
            output: None,
            network_output: None,
        }
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        text.parse()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(1..=3).contains(&self.dim) {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        by_name(&self.target, self.dim)?;
        if self.n_list.is_empty() || self.n_list[0] == 0 || self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return bad("n_list must be positive and strictly increasing".into());
        }
        if self.k > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(self.k));
        }
        if self.m > 1 {
            return bad(format!("m={} (errors are measured for m = 0, 1)", self.m));
        }
        if self.method.needs_s() && self.s.is_none() {
            return bad(format!("method {} needs s", self.method));
        }
        let exp = self.method == Method::CosineExp;
        if exp != (self.beta.is_some() && self.c.is_some()) || (!exp && (self.beta.is_some() || self.c.is_some())) {
            return bad("beta and c are required for cosine_exp and only there".into());
        }
        if let (Some(beta), Some(c)) = (self.beta, self.c) {
            if !(beta > 0.0 && beta < 1.0 && c > 0.0) {
                return bad(format!("need 0 < beta < 1 and c > 0 (beta={beta}, c={c})"));
            }
        }
        if matches!(self.method, Method::UniformGrid | Method::FreeKnot) && self.m != 0 {
            return bad(format!("{} errors are measured in L² only (m = 0)", self.method));
        }
        if self.method == Method::FreeKnot {
            if self.dim != 1 {
                return bad("free_knot is one-dimensional".into());
            }
            let n_max = *self.n_list.last().unwrap();
            if self.dp_grid < 4 * (n_max + 1) {
                return bad(format!("dp_grid must be at least 4(n+1) = {}", 4 * (n_max + 1)));
            }
        }
        if self.network_output.is_some() && !self.method.is_relu() {
            return bad("network_output applies to ReLU^k methods only".into());
        }
        if let Some(r) = self.r {
            if !(r > 0.0) {
                return bad(format!("R must be positive (got {r})"));
            }
        }
        if self.shift_candidates == 0 || self.threads == Some(0) {
            return bad("shift_candidates and threads must be positive".into());
        }
        if self.l_max.is_some_and(|l| l == 0) {
            return Err(Error::LevelOutOfRange(0));
        }
        predict_exponents(self.s.unwrap_or(0.0), self.m, self.k, self.dim, self.method)?;
        Ok(())
    }

    /// Worker count from the config, else from `RIDGERATE_THREADS`.
    pub fn resolved_threads(&self) -> Result<Option<usize>> {
        if self.threads.is_some() {
            return Ok(self.threads);
        }
        match std::env::var(THREADS_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(t) if t > 0 => Ok(Some(t)),
                _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer (got '{v}')"))),
            },
            Err(_) => Ok(None),
        }
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    /// `key = value` lines, `#` comments, comma-separated lists.
    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::new("", 0, Method::Cosine, Vec::new());
        let mut seen = BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Config(format!("line {}: {msg}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(format!("expected key=value, got '{line}'")))?;
            if !seen.insert(key.to_string()) {
                return Err(err(format!("duplicate key '{key}'")));
            }
            let parse_f = || value.parse::<f64>().map_err(|_| err(format!("{key}: not a number: '{value}'")));
            let parse_u = || value.parse::<usize>().map_err(|_| err(format!("{key}: not a count: '{value}'")));
            match key {
                "target" => cfg.target = value.to_string(),
                "dim" => cfg.dim = parse_u()?,
                "method" => cfg.method = value.parse().map_err(|e: Error| err(e.to_string()))?,
                "k" => cfg.k = parse_u()?,
                "m" => cfg.m = parse_u()?,
                "s" => cfg.s = Some(parse_f()?),
                "beta" => cfg.beta = Some(parse_f()?),
                "c" => cfg.c = Some(parse_f()?),
                "n_list" => {
                    cfg.n_list = value
                        .split(',')
                        .map(|v| v.trim().parse::<usize>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| err(format!("n_list: '{value}'")))?
                }
                "L" => cfg.l = parse_f()?,
                "R" => cfg.r = Some(parse_f()?),
                "seed" => cfg.seed = value.parse().map_err(|_| err(format!("seed: '{value}'")))?,
                "l_max" => cfg.l_max = Some(parse_u()?),
                "shift_candidates" => cfg.shift_candidates = parse_u()?,
                "dp_grid" => cfg.dp_grid = parse_u()?,
                "threads" => cfg.threads = Some(parse_u()?),
                "timing" => {
                    cfg.timing = value.parse().map_err(|_| err(format!("timing: expected true/false, got '{value}'")))?
                }
                "output" => cfg.output = Some(PathBuf::from(value)),
                "network_output" => cfg.network_output = Some(PathBuf::from(value)),
                _ => return Err(err(format!("unknown key '{key}'"))),
            }
        }
        for required in ["target", "dim", "method", "n_list"] {
            if !seen.contains(required) {
                return Err(Error::Config(format!("missing key '{required}'")));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
