/// A scalar function to integrate. Non-numeric returns (NaN, ±Inf) are
/// allowed and treated as data by the integrators.
pub trait Integrand {
    fn eval(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64> Integrand for F {
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Wraps an integrand and counts fresh evaluations for one integration run.
pub struct CountingIntegrand<'f, F: Integrand + ?Sized> {
    f: &'f F,
    neval: usize,
}

impl<'f, F: Integrand + ?Sized> CountingIntegrand<'f, F> {
    pub fn new(f: &'f F) -> Self {
        Self { f, neval: 0 }
    }

    pub fn eval(&mut self, x: f64) -> f64 {
        self.neval += 1;
        self.f.eval(x)
    }

    pub fn neval(&self) -> usize {
        self.neval
    }
}

/// True for values that cannot enter an interpolation.
#[inline]
pub fn is_non_numeric(v: f64) -> bool {
    !v.is_finite()
}
