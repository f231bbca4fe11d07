use super::validate_problem;
use crate::engine::{QuadResult, Status};
use crate::error::QuadError;
use crate::integrand::{is_non_numeric, CountingIntegrand, Integrand};

/// Limits for the adaptive Simpson baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimpsonConfig {
    /// Evaluation budget; refinement stops once it is spent.
    pub max_neval: usize,
    /// Maximum bisection depth of any branch.
    pub max_depth: u32,
}

impl Default for SimpsonConfig {
    fn default() -> Self {
        Self {
            max_neval: 100_000,
            max_depth: 50,
        }
    }
}

struct Simpson<'a, 'f, F: Integrand + ?Sized> {
    fx: &'a mut CountingIntegrand<'f, F>,
    cfg: SimpsonConfig,
    capped: bool,
}

impl<F: Integrand + ?Sized> Simpson<'_, '_, F> {
    fn eval(&mut self, x: f64) -> f64 {
        let v = self.fx.eval(x);
        if is_non_numeric(v) {
            0.0
        } else {
            v
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> (f64, f64) {
        if self.fx.neval() + 2 > self.cfg.max_neval {
            // no budget left to even estimate this piece
            self.capped = true;
            return (whole, f64::INFINITY);
        }
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let flm = self.eval(lm);
        let frm = self.eval(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        let err = diff.abs() / 15.0;
        let q = left + right + diff / 15.0;
        if err <= tol || depth >= self.cfg.max_depth || m <= a || b <= m {
            return (q, err);
        }
        let (ql, el) = self.refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1);
        let (qr, er) = self.refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
        (ql + qr, el + er)
    }
}

/// Recursive adaptive Simpson quadrature with tolerance halving and the
/// `|S2 - S1| / 15` error estimate. Non-numeric samples count as zero.
pub fn int_simpson_baseline<F: Integrand + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    tau: f64,
    cfg: &SimpsonConfig,
) -> Result<QuadResult, QuadError> {
    validate_problem(a, b, tau)?;
    if cfg.max_neval < 5 {
        return Err(QuadError::InvalidConfig("max_neval must be at least 5"));
    }
    let mut fx = CountingIntegrand::new(f);
    let mut s = Simpson {
        fx: &mut fx,
        cfg: *cfg,
        capped: false,
    };
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (s.eval(a), s.eval(m), s.eval(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let (q, eps) = s.refine(a, b, fa, fm, fb, whole, tau, 0);
    let capped = s.capped;
    let status = if capped || eps > tau {
        Status::ToleranceNotMet
    } else {
        Status::Converged
    };
    Ok(QuadResult {
        q,
        eps,
        neval: fx.neval(),
        status,
    })
}
