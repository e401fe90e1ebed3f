//! Error measurement and the piecewise-polynomial reference methods:
//! quadrature Sobolev norms, the 1D free-knot optimum and a uniform-grid
//! L² projection.

pub mod free_knot;
pub mod quadrature;
pub mod uniform_grid;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ScalarField;

pub use free_knot::{free_knot_fit, FreeKnotFit};
pub use quadrature::QuadratureGrid;
pub use uniform_grid::{uniform_grid_fit, UniformGridFit};

/// Central-difference step for gradients of fields without an analytic one.
pub const FD_STEP: f64 = 1e-4;

/// `‖f‖_{H^m}` over the grid's box for `m ∈ {0, 1}`.
pub fn hm_norm(f: &dyn ScalarField, grid: &QuadratureGrid, m: usize) -> Result<f64> {
    if m > 1 {
        return Err(Error::Unsupported(format!("H^{m} norms (only m = 0, 1)")));
    }
    if f.dim() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: f.dim(),
        });
    }
    let mut total = 0.0;
    for (x, w) in grid.iter() {
        let mut density = f.value(x).norm_sqr();
        if m == 1 {
            density += gradient(f, x).iter().map(|g| g.norm_sqr()).sum::<f64>();
        }
        total += w * density;
    }
    Ok(total.sqrt())
}

/// Analytic gradient if available, central differences otherwise.
pub fn gradient(f: &dyn ScalarField, x: &[f64]) -> Vec<Complex64> {
    if let Some(g) = f.gradient(x) {
        return g;
    }
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + FD_STEP;
            let up = f.value(&probe);
            probe[i] = x[i] - FD_STEP;
            let down = f.value(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * FD_STEP)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FnField;
    use std::f64::consts::PI;

    #[test]
    fn constant_and_sine() {
        let g = QuadratureGrid::gauss_legendre(1, 32);
        let one = FnField::new(1, |_| Complex64::new(1.0, 0.0));
        assert!((hm_norm(&one, &g, 0).unwrap() - 1.0).abs() < 1e-14);
        let sine = FnField::new(1, |x: &[f64]| Complex64::new((2.0 * PI * x[0]).sin(), 0.0));
        assert!((hm_norm(&sine, &g, 0).unwrap() - 0.5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn plane_wave_h1_by_finite_differences() {
        let g = QuadratureGrid::gauss_legendre(2, 24);
        let wave = FnField::new(2, |x: &[f64]| Complex64::from_polar(1.0, 2.0 * PI * x[0]));
        let expected = (1.0 + 4.0 * PI * PI).sqrt();
        let got = hm_norm(&wave, &g, 1).unwrap();
        assert!((got - expected).abs() / expected < 1e-6, "got {got}");
    }

    #[test]
    fn rejects_higher_order_and_wrong_dim() {
        let g = QuadratureGrid::gauss_legendre(2, 4);
        let one = FnField::new(1, |_| Complex64::new(1.0, 0.0));
        assert!(hm_norm(&one, &g, 0).is_err());
        let one2 = FnField::new(2, |_| Complex64::new(1.0, 0.0));
        assert!(hm_norm(&one2, &g, 2).is_err());
    }
}
