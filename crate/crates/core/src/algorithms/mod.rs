//! Public integrators.
//!
//! [`int_naive`] raises the rule degree (4, 8, 16, 32) before bisecting and
//! estimates errors from coefficient differences. [`int_refined`] always
//! bisects with a degree-10 rule and extrapolates the interpolation error of
//! each half from the parent interpolant. Both remove non-numeric nodes from
//! their interpolants and abort on integrals that look divergent.

mod naive;
mod probe;
mod refined;
mod simpson;

pub use naive::{int_naive, NaiveConfig};
pub use probe::{divergence_ratio_probe, ProbeRatios};
pub use refined::{int_refined, RefinedConfig};
pub use simpson::{int_simpson_baseline, SimpsonConfig};

use crate::basis::{RuleStencil, Side};
use crate::engine::{Excess, IntervalRecord};
use crate::error::QuadError;
use crate::interp::{integral, transfer_to_child};

pub(crate) fn validate_problem(a: f64, b: f64, tau: f64) -> Result<(), QuadError> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(QuadError::InvalidInterval { a, b });
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(QuadError::InvalidTolerance(tau));
    }
    Ok(())
}

/// Child interval bounds.
pub(crate) fn child_bounds(a: f64, b: f64, side: Side) -> (f64, f64) {
    let m = 0.5 * (a + b);
    match side {
        Side::Left => (a, m),
        Side::Right => (m, b),
    }
}

/// Known samples of a child rule of degree `child_n`: its endpoints, taken
/// from the parent rule (degree `parent_n`) and the shared midpoint.
pub(crate) fn child_reuse(
    parent: &IntervalRecord,
    parent_n: usize,
    child_n: usize,
    side: Side,
    mid: Option<f64>,
) -> Vec<Option<f64>> {
    let mut reuse = vec![None; child_n + 1];
    let mid = mid.or_else(|| parent_n.is_multiple_of(2).then(|| parent.samples.raw(parent_n / 2)));
    // node 0 is the right end, node n the left end
    match side {
        Side::Left => {
            reuse[0] = mid;
            reuse[child_n] = Some(parent.samples.raw(parent_n));
        }
        Side::Right => {
            reuse[0] = Some(parent.samples.raw(0));
            reuse[child_n] = mid;
        }
    }
    reuse
}

/// A child that could not be interpolated keeps the parent's view of it and
/// goes straight to the excess.
pub(crate) fn drop_uninterpolable_child(
    excess: &mut Excess,
    parent: &IntervalRecord,
    stencil: &RuleStencil,
    side: Side,
) {
    let (ca, cb) = child_bounds(parent.a, parent.b, side);
    let xfer = transfer_to_child(&parent.coeffs, side, stencil);
    excess.q += integral(&xfer, ca, cb);
    excess.eps += 0.5 * parent.eps;
}
