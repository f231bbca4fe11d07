//! Error estimates from pairs of interpolants.

use crate::interp::{diff_norm, norm, CoeffVector, SampleVector};

/// Denominators below this are treated as zero in the derivative extraction.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-300;

/// Default relaxation of the pointwise validity test.
pub const DEFAULT_THETA1: f64 = 1.1;

/// Discrepancies below this multiple of `ε_mach · max|f_i|` are rounding
/// noise and never fail the pointwise test. At nodes shared with the parent
/// both sides of the test vanish in exact arithmetic.
pub const POINTWISE_ROUNDING_SLACK: f64 = 100.0;

/// Difference of two interpolants of different degree, scaled by `halfwidth`.
pub fn naive_error(c_hi: &CoeffVector, c_lo: &CoeffVector, halfwidth: f64) -> f64 {
    halfwidth * diff_norm(&c_hi.c, &c_lo.c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    /// The extracted derivative did not explain the parent's error at the child nodes.
    PointwiseTest,
    /// The two Newton polynomials coincide.
    DegenerateDenominator,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedEstimate {
    pub eps: f64,
    /// `|f^{(n+1)}(ξ)/(n+1)!|` in the child's reference variable.
    pub deriv_scale: f64,
    pub used_fallback: bool,
    pub fallback: Option<Fallback>,
}

/// Operands of the refined estimate, all expressed on the child's reference
/// interval.
#[derive(Debug, Clone, Copy)]
pub struct RefinedInputs<'a> {
    pub c_child: &'a CoeffVector,
    /// Parent interpolant transferred to the child.
    pub c_parent_xfer: &'a CoeffVector,
    /// Newton vector over the child's (possibly downdated) nodes.
    pub b_child: &'a [f64],
    /// Parent Newton vector transferred to the child and scaled by `2^{n+1}`.
    pub b_parent_xfer_scaled: &'a [f64],
    pub f_child: &'a SampleVector,
    /// Transferred parent interpolant evaluated at the child nodes.
    pub parent_pred: &'a [f64],
    /// Transferred, scaled parent Newton polynomial evaluated at the child nodes.
    pub parent_newton_at_nodes: &'a [f64],
}

/// Extrapolated L2 interpolation error of the child interpolant, falling back
/// to the plain coefficient difference when the constant-derivative
/// assumption is not supported by the samples.
pub fn refined_error(inp: &RefinedInputs<'_>, theta1: f64, halfwidth: f64) -> RefinedEstimate {
    let dc = diff_norm(&inp.c_child.c, &inp.c_parent_xfer.c);
    let db = diff_norm(inp.b_child, inp.b_parent_xfer_scaled);
    let unscaled = halfwidth * dc;
    if !(db >= DEGENERATE_DENOMINATOR) {
        return RefinedEstimate {
            eps: sanitize(unscaled),
            deriv_scale: 0.0,
            used_fallback: true,
            fallback: Some(Fallback::DegenerateDenominator),
        };
    }
    let deriv_scale = sanitize(dc / db);
    let fmax = inp.f_child.f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let slack = POINTWISE_ROUNDING_SLACK * f64::EPSILON * fmax;
    let violated = (0..inp.f_child.f.len())
        .filter(|&i| !inp.f_child.is_masked(i))
        .map(|i| {
            (inp.parent_pred[i] - inp.f_child.f[i]).abs()
                - theta1 * deriv_scale * inp.parent_newton_at_nodes[i].abs()
        })
        .any(|v| v > slack);
    if violated {
        RefinedEstimate {
            eps: sanitize(unscaled),
            deriv_scale,
            used_fallback: true,
            fallback: Some(Fallback::PointwiseTest),
        }
    } else {
        RefinedEstimate {
            eps: sanitize(halfwidth * deriv_scale * norm(inp.b_child)),
            deriv_scale,
            used_fallback: false,
            fallback: None,
        }
    }
}

/// Non-finite estimates become the largest finite value so that sums stay
/// ordered.
pub(crate) fn sanitize(eps: f64) -> f64 {
    if eps.is_finite() {
        eps.abs()
    } else {
        f64::MAX
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_vectors_have_no_error() {
        let c = CoeffVector::from_coeffs(vec![1.0, 2.0, 3.0]);
        assert_eq!(naive_error(&c, &c, 0.5), 0.0);
    }

    #[test]
    fn naive_error_pads_shorter_vector() {
        let hi = CoeffVector::from_coeffs(vec![1.0, 0.0, 3.0, 4.0]);
        let lo = CoeffVector::from_coeffs(vec![1.0, 0.0]);
        assert!((naive_error(&hi, &lo, 2.0) - 10.0).abs() < 1e-15);
    }

    #[test]
    fn nan_estimates_are_clamped() {
        assert_eq!(sanitize(f64::NAN), f64::MAX);
        assert_eq!(sanitize(-2.0), 2.0);
    }
}
