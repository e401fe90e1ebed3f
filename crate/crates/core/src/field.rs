//! Complex-valued functions on `R^d` that the error oracles can sample.

use num_complex::Complex64;

pub trait ScalarField: Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> Complex64;

    /// Analytic gradient, when the function knows it.
    fn gradient(&self, _x: &[f64]) -> Option<Vec<Complex64>> {
        None
    }
}

/// Adapts a closure to [`ScalarField`].
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> ScalarField for FnField<F>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> Complex64 {
        (self.f)(x)
    }
}

/// `a - b`, with a gradient whenever both sides have one.
pub struct Difference<'a> {
    pub a: &'a dyn ScalarField,
    pub b: &'a dyn ScalarField,
}

impl ScalarField for Difference<'_> {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn value(&self, x: &[f64]) -> Complex64 {
        self.a.value(x) - self.b.value(x)
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<Complex64>> {
        let ga = self.a.gradient(x)?;
        let gb = self.b.gradient(x)?;
        Some(ga.into_iter().zip(gb).map(|(p, q)| p - q).collect())
    }
}
