use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "n,error_l2,error_hm,ell1_mass,wall_ms";

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub n: usize,
    pub error_l2: f64,
    pub error_hm: f64,
    /// Exact `H^m` error on the period box, when the method has one.
    pub error_orthogonal: Option<f64>,
    /// NaN for methods without amplitudes.
    pub ell1_mass: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub rows: Vec<RateRow>,
    pub fitted_slope: f64,
    pub slope_stderr: f64,
    pub theory_exponent: f64,
    pub theory_q: f64,
}

impl RateReport {
    /// Fits the slope of `log error_hm` against `log n`.
    pub fn new(rows: Vec<RateRow>, theory: (f64, f64)) -> Self {
        let (ns, errors): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r.n as f64, r.error_hm)).unzip();
        let (slope, stderr) = fit_slope(&ns, &errors);
        Self {
            rows,
            fitted_slope: slope,
            slope_stderr: stderr,
            theory_exponent: theory.0,
            theory_q: theory.1,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.n,
                num(r.error_l2),
                num(r.error_hm),
                num(r.ell1_mass),
                num(r.wall_ms)
            );
        }
        let _ = writeln!(
            out,
            "# slope={} stderr={} theory_t={} theory_q={}",
            num(self.fitted_slope),
            num(self.slope_stderr),
            num(self.theory_exponent),
            num(self.theory_q)
        );
        out
    }

    /// Inverse of [`RateReport::to_csv`]. The orthogonal error is not stored.
    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::Config(format!("rate csv: {msg}"));
        let mut lines = text.lines();
        if lines.next() != Some(CSV_HEADER) {
            return Err(bad("missing header".into()));
        }
        let mut rows = Vec::new();
        let mut footer = None;
        for line in lines {
            if let Some(rest) = line.strip_prefix("# ") {
                let mut values = [f64::NAN; 4];
                for (slot, (key, part)) in values
                    .iter_mut()
                    .zip(["slope", "stderr", "theory_t", "theory_q"].iter().zip(rest.split_whitespace()))
                {
                    let v = part
                        .strip_prefix(key)
                        .and_then(|p| p.strip_prefix('='))
                        .ok_or_else(|| bad(format!("footer field '{part}'")))?;
                    *slot = parse_num(v).ok_or_else(|| bad(format!("footer value '{v}'")))?;
                }
                footer = Some(values);
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(bad(format!("row '{line}'")));
            }
            let n = cols[0].parse().map_err(|_| bad(format!("n '{}'", cols[0])))?;
            let v: Vec<f64> = cols[1..]
                .iter()
                .map(|c| parse_num(c).ok_or_else(|| bad(format!("value '{c}'"))))
                .collect::<Result<_>>()?;
            rows.push(RateRow {
                n,
                error_l2: v[0],
                error_hm: v[1],
                error_orthogonal: None,
                ell1_mass: v[2],
                wall_ms: v[3],
            });
        }
        let [slope, stderr, t, q] = footer.ok_or_else(|| bad("missing footer".into()))?;
        Ok(Self {
            rows,
            fitted_slope: slope,
            slope_stderr: stderr,
            theory_exponent: t,
            theory_q: q,
        })
    }
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        v.to_string()
    }
}

fn parse_num(s: &str) -> Option<f64> {
    s.parse().ok()
}

pub fn emit_csv(report: &RateReport, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_csv()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Least-squares slope of `log y` on `log x` and its standard error,
/// skipping points with `y` zero, subnormal or non-finite. NaN when fewer
/// than two points (stderr: three) survive.
pub fn fit_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && b.is_finite() && **b >= f64::MIN_POSITIVE)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return (f64::NAN, f64::NAN);
    }
    let slope = sxy / sxx;
    if pts.len() < 3 {
        return (slope, f64::NAN);
    }
    let ssr: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    (slope, (ssr / (n - 2.0) / sxx).sqrt())
}
