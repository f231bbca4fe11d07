use super::refined::evaluate_child;
use crate::basis::{Side, StencilSet};
use crate::errest::DEFAULT_THETA1;
use crate::integrand::CountingIntegrand;
use crate::interp::{fit_with_newton, sample};

/// Ratios of the left-half quantities over the whole-interval ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRatios {
    /// `ε[0, h/2] / ε[0, h]`
    pub eps_ratio: f64,
    /// `Q[0, h/2] / Q[0, h]`
    pub q_ratio: f64,
}

/// Refined error estimate and integral of `x^alpha` on `[0, w]`, obtained as
/// the left half of `[0, 2w]` with the degree-10 rule. The singular node at
/// zero is removed from both interpolants.
fn left_edge_estimate(alpha: f64, w: f64) -> (f64, f64) {
    let stencil = &StencilSet::shared().fixed;
    let f = |x: f64| x.powf(alpha);
    let mut fx = CountingIntegrand::new(&f);
    let parent_samples = sample(&mut fx, 0.0, 2.0 * w, stencil, &[]);
    let parent = fit_with_newton(&parent_samples, stencil).expect("one masked node");
    let child_samples = sample(&mut fx, 0.0, w, stencil, &[]);
    let child = evaluate_child(
        stencil,
        &parent.coeffs,
        &parent.newton,
        Side::Left,
        (0.0, w),
        &child_samples,
        DEFAULT_THETA1,
        w,
    )
    .expect("one masked node");
    (child.estimate.eps, child.q)
}

/// Compares the error estimate and integral of `∫ x^alpha` over `[0, h/2]`
/// with those over `[0, h]`. Ratios at or above one indicate a divergent
/// integral.
pub fn divergence_ratio_probe(alpha: f64, h: f64) -> ProbeRatios {
    assert!((-2.0..0.0).contains(&alpha), "alpha must lie in [-2, 0)");
    assert!(h > 0.0 && h.is_finite());
    let (eps_whole, q_whole) = left_edge_estimate(alpha, h);
    let (eps_half, q_half) = left_edge_estimate(alpha, 0.5 * h);
    ProbeRatios {
        eps_ratio: eps_half / eps_whole,
        q_ratio: q_half / q_whole,
    }
}
