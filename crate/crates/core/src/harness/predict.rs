use super::Method;
use crate::error::{Error, Result};

/// Theoretical rate `n^{-t} (log n)^q` for `method` at smoothness `s`.
///
/// Cosine networks get `t = 1/2 + (s-m)/d`; ReLU^k dictionaries get
/// `t = 1/2 + min((2(s-m)-1)/(2(d+1)), k-m+1/2)` with `q` switching at
/// `s* = (d+1)(k-m+1/2) + m + 1/2`. The exponential weight gives a
/// super-algebraic rate, reported as `t = inf`.
pub fn predict_exponents(s: f64, m: usize, k: usize, d: usize, method: Method) -> Result<(f64, f64)> {
    if d == 0 {
        return Err(Error::UnsupportedDimension(d));
    }
    let mf = m as f64;
    let kf = k as f64;
    let df = d as f64;
    let outside = |msg: String| Err(Error::OutsideHypotheses(msg));
    match method {
        Method::Cosine => {
            if mf > s {
                return outside(format!("cosine rate needs m <= s (m={m}, s={s})"));
            }
            Ok((0.5 + (s - mf) / df, 0.0))
        }
        Method::CosineExp => Ok((f64::INFINITY, 0.0)),
        Method::ReluGreedy | Method::ReluStratified => {
            if s < 0.5 || mf > s - 0.5 || mf >= kf + 0.5 {
                return outside(format!("ReLU^k rate needs s >= 1/2, m <= s - 1/2, m < k + 1/2 (s={s}, m={m}, k={k})"));
            }
            let cap = kf - mf + 0.5;
            let threshold = (df + 1.0) * cap + mf + 0.5;
            let t = 0.5 + ((2.0 * (s - mf) - 1.0) / (2.0 * (df + 1.0))).min(cap);
            let q = if s < threshold {
                0.0
            } else if s > threshold {
                1.0
            } else {
                1.0 + cap
            };
            Ok((t, q))
        }
        Method::UniformGrid => {
            if m > k {
                return outside(format!("piecewise degree-{k} fits have no H^{m} rate"));
            }
            Ok(((kf + 1.0 - mf) / df, 0.0))
        }
        Method::FreeKnot => {
            if d != 1 || m != 0 {
                return outside("free-knot fits are one-dimensional L² approximations".into());
            }
            Ok((kf + 1.0, 0.0))
        }
    }
}
