use std::borrow::Cow;

use super::naive::{abort_divergent, commit_children, unresolvable};
use super::{child_bounds, child_reuse, drop_uninterpolable_child, validate_problem};
use crate::basis::{build_recurrence, build_stencil, RuleStencil, Side, StencilSet};
use crate::engine::{should_drop, Engine, EngineConfig, Excess, IntervalRecord, QuadResult};
use crate::errest::{refined_error, RefinedEstimate, RefinedInputs, DEFAULT_THETA1};
use crate::error::{InterpError, QuadError};
use crate::integrand::{CountingIntegrand, Integrand};
use crate::interp::{fit_with_newton, integral, sample, transfer_to_child, CoeffVector, SampleVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedConfig {
    pub n: usize,
    pub theta1: f64,
    pub engine: EngineConfig,
}

impl Default for RefinedConfig {
    fn default() -> Self {
        Self {
            n: 10,
            theta1: DEFAULT_THETA1,
            engine: EngineConfig::default(),
        }
    }
}

impl RefinedConfig {
    fn validate(&self) -> Result<(), QuadError> {
        if self.n < 4 || self.n > crate::basis::MAX_STENCIL_DEGREE {
            return Err(QuadError::InvalidConfig("n must lie in 4..=32"));
        }
        if !(self.theta1 >= 1.0) {
            return Err(QuadError::InvalidConfig("theta1 must be at least 1"));
        }
        self.engine.validate().map_err(QuadError::InvalidConfig)
    }

    pub(super) fn stencil(&self) -> Result<Cow<'static, RuleStencil>, QuadError> {
        match StencilSet::shared().degree(self.n) {
            Some(s) => Ok(Cow::Borrowed(s)),
            None => Ok(Cow::Owned(build_stencil(self.n, &build_recurrence(self.n + 1))?)),
        }
    }
}

/// A bisected half with its interpolant, integral and error estimate.
pub(super) struct ChildEval {
    pub coeffs: CoeffVector,
    pub newton: Vec<f64>,
    pub q: f64,
    pub estimate: RefinedEstimate,
}

/// Fits a child interpolant and estimates its error from the parent's
/// interpolant and Newton polynomial transferred to the child.
pub(super) fn evaluate_child(
    stencil: &RuleStencil,
    parent_coeffs: &CoeffVector,
    parent_newton: &[f64],
    side: Side,
    (ca, cb): (f64, f64),
    samples: &SampleVector,
    theta1: f64,
    halfwidth: f64,
) -> Result<ChildEval, InterpError> {
    let fitted = fit_with_newton(samples, stencil)?;
    let q = integral(&fitted.coeffs, ca, cb);
    let c_xfer = transfer_to_child(parent_coeffs, side, stencil);
    let scale = 2f64.powi(stencil.n as i32 + 1);
    let b_xfer: Vec<f64> = stencil
        .transfer(side, parent_newton)
        .into_iter()
        .map(|v| v * scale)
        .collect();
    let parent_pred = stencil.eval_at_nodes(&c_xfer.c);
    let parent_newton_at_nodes = stencil.eval_at_nodes(&b_xfer);
    let estimate = refined_error(
        &RefinedInputs {
            c_child: &fitted.coeffs,
            c_parent_xfer: &c_xfer,
            b_child: &fitted.newton,
            b_parent_xfer_scaled: &b_xfer,
            f_child: samples,
            parent_pred: &parent_pred,
            parent_newton_at_nodes: &parent_newton_at_nodes,
        },
        theta1,
        halfwidth,
    );
    Ok(ChildEval {
        coeffs: fitted.coeffs,
        newton: fitted.newton,
        q,
        estimate,
    })
}

/// Adaptive integration of `f` over `[a, b]` to absolute tolerance `tau`
/// with a fixed-degree rule and extrapolated error estimates.
pub fn int_refined<F: Integrand + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    tau: f64,
    cfg: &RefinedConfig,
) -> Result<QuadResult, QuadError> {
    validate_problem(a, b, tau)?;
    cfg.validate()?;
    let stencil = cfg.stencil()?;
    let n = stencil.n;
    let mut fx = CountingIntegrand::new(f);
    let mut engine = Engine::new(cfg.engine, tau);

    let samples = sample(&mut fx, a, b, &stencil, &[]);
    let Ok(root) = fit_with_newton(&samples, &stencil) else {
        return Ok(unresolvable(fx.neval()));
    };
    let q0 = integral(&root.coeffs, a, b);
    engine.push(IntervalRecord {
        a,
        b,
        coeffs: root.coeffs,
        newton: Some(root.newton),
        samples,
        q: q0,
        // no estimate is possible yet
        eps: f64::MAX,
        degree_index: 0,
        q_base: q0,
        nr_div: 0,
        nr_rec: 0,
    });

    while engine.should_continue(fx.neval()) {
        let rec = engine.select_worst().expect("loop guard checks non-empty");
        if should_drop(&rec, &stencil, engine.config()) {
            engine.accumulate_excess(rec);
            continue;
        }
        let h = 0.5 * (rec.b - rec.a);
        let parent_newton = rec.newton.as_deref().expect("records carry Newton vectors");

        let mut mid = None;
        let mut halves = Vec::with_capacity(2);
        for side in Side::BOTH {
            let bounds = child_bounds(rec.a, rec.b, side);
            let reuse = child_reuse(&rec, n, n, side, mid);
            let s = sample(&mut fx, bounds.0, bounds.1, &stencil, &reuse);
            if side == Side::Left {
                mid = Some(s.raw(0));
            }
            halves.push((side, bounds, s));
        }

        let mut children = Vec::with_capacity(2);
        let mut dropped = Excess::default();
        let mut divergent = false;
        for (side, bounds, s) in halves {
            let Ok(child) = evaluate_child(&stencil, &rec.coeffs, parent_newton, side, bounds, &s, cfg.theta1, h)
            else {
                drop_uninterpolable_child(&mut dropped, &rec, &stencil, side);
                continue;
            };
            let div = engine.divergence(child.q, rec.q, rec.nr_div, rec.nr_rec + 1);
            if div.divergent {
                divergent = true;
                break;
            }
            children.push(IntervalRecord {
                a: bounds.0,
                b: bounds.1,
                coeffs: child.coeffs,
                newton: Some(child.newton),
                samples: s,
                q: child.q,
                eps: child.estimate.eps,
                degree_index: 0,
                q_base: child.q,
                nr_div: div.nr_div,
                nr_rec: rec.nr_rec + 1,
            });
        }
        if divergent {
            return Ok(abort_divergent(engine, rec, fx.neval()));
        }
        commit_children(&mut engine, children, dropped);
    }
    Ok(engine.finish(fx.neval(), false))
}
