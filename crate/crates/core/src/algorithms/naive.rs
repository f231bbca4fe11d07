use std::borrow::Cow;

use super::{child_bounds, child_reuse, drop_uninterpolable_child, validate_problem};
use crate::basis::{build_recurrence, build_stencil, RuleStencil, Side, StencilSet};
use crate::engine::{should_drop, Engine, EngineConfig, Excess, IntervalRecord, QuadResult, Status};
use crate::errest::sanitize;
use crate::error::QuadError;
use crate::integrand::{CountingIntegrand, Integrand};
use crate::interp::{diff_norm, fit, integral, norm, sample, CoeffVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaiveConfig {
    /// Degree of the lowest rule.
    pub n0: usize,
    /// Number of degree doublings above `n0`.
    pub d_max: usize,
    /// Relative coefficient change above which a degree raise forces a split.
    pub hint: f64,
    pub engine: EngineConfig,
}

impl Default for NaiveConfig {
    fn default() -> Self {
        Self {
            n0: 4,
            d_max: 3,
            hint: 0.1,
            engine: EngineConfig::default(),
        }
    }
}

impl NaiveConfig {
    fn validate(&self) -> Result<(), QuadError> {
        if self.n0 < 2 || !self.n0.is_multiple_of(2) {
            return Err(QuadError::InvalidConfig("n0 must be even and at least 2"));
        }
        if self.d_max < 1 || self.n0 << self.d_max > crate::basis::MAX_STENCIL_DEGREE {
            return Err(QuadError::InvalidConfig("d_max must be >= 1 with n0 * 2^d_max <= 32"));
        }
        if !(self.hint > 0.0 && self.hint < 1.0) {
            return Err(QuadError::InvalidConfig("hint must lie in (0, 1)"));
        }
        self.engine.validate().map_err(QuadError::InvalidConfig)
    }

    fn ladder(&self) -> Result<Vec<Cow<'static, RuleStencil>>, QuadError> {
        let shared = StencilSet::shared();
        let degrees: Vec<usize> = (0..=self.d_max).map(|d| self.n0 << d).collect();
        if degrees.iter().all(|&n| shared.degree(n).is_some()) {
            return Ok(degrees
                .iter()
                .map(|&n| Cow::Borrowed(shared.degree(n).unwrap()))
                .collect());
        }
        let rec = build_recurrence(degrees[self.d_max] + 1);
        degrees
            .iter()
            .map(|&n| Ok(Cow::Owned(build_stencil(n, &rec)?)))
            .collect()
    }
}

/// Doubly adaptive integration of `f` over `[a, b]` to absolute tolerance `tau`.
pub fn int_naive<F: Integrand + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    tau: f64,
    cfg: &NaiveConfig,
) -> Result<QuadResult, QuadError> {
    validate_problem(a, b, tau)?;
    cfg.validate()?;
    let ladder = cfg.ladder()?;
    let top = cfg.d_max;
    let mut fx = CountingIntegrand::new(f);
    let mut engine = Engine::new(cfg.engine, tau);

    let samples = sample(&mut fx, a, b, &ladder[top], &[]);
    let Ok(c_top) = fit(&samples, &ladder[top]) else {
        return Ok(unresolvable(fx.neval()));
    };
    let c_prev = fit(&samples.subsample(2), &ladder[top - 1])
        .unwrap_or_else(|_| CoeffVector::zeros(ladder[top - 1].n));
    let q0 = integral(&c_top, a, b);
    let q_base = fit(&samples.subsample(1 << top), &ladder[0])
        .map(|c| integral(&c, a, b))
        .unwrap_or(q0);
    engine.push(IntervalRecord {
        a,
        b,
        eps: sanitize(0.5 * (b - a) * diff_norm(&c_top.c, &c_prev.c)),
        coeffs: c_top,
        newton: None,
        samples,
        q: q0,
        degree_index: top,
        q_base,
        nr_div: 0,
        nr_rec: 0,
    });

    while engine.should_continue(fx.neval()) {
        let mut rec = engine.select_worst().expect("loop guard checks non-empty");
        if should_drop(&rec, &ladder[rec.degree_index], engine.config()) {
            engine.accumulate_excess(rec);
            continue;
        }
        let h = 0.5 * (rec.b - rec.a);

        let split = if rec.degree_index < top {
            let next = &ladder[rec.degree_index + 1];
            let reuse: Vec<Option<f64>> = (0..=next.n)
                .map(|i| (i % 2 == 0).then(|| rec.samples.raw(i / 2)))
                .collect();
            let fresh = sample(&mut fx, rec.a, rec.b, next, &reuse);
            match fit(&fresh, next) {
                Ok(c_new) => {
                    let change = diff_norm(&c_new.c, &rec.coeffs.c);
                    let split = change > cfg.hint * norm(&c_new.c);
                    rec.q = integral(&c_new, rec.a, rec.b);
                    rec.eps = sanitize(h * change);
                    rec.coeffs = c_new;
                    rec.samples = fresh;
                    rec.degree_index += 1;
                    split
                }
                // keep the lower rule and bisect instead
                Err(_) => true,
            }
        } else {
            true
        };
        if !split {
            engine.push(rec);
            continue;
        }

        let parent_stencil = &ladder[rec.degree_index];
        let child_stencil = &ladder[0];
        let mut mid = None;
        let mut divergent = false;
        let mut children = Vec::with_capacity(2);
        let mut dropped = Excess::default();
        for side in Side::BOTH {
            let (ca, cb) = child_bounds(rec.a, rec.b, side);
            let reuse = child_reuse(&rec, parent_stencil.n, child_stencil.n, side, mid);
            let samples = sample(&mut fx, ca, cb, child_stencil, &reuse);
            if side == Side::Left {
                mid = Some(samples.raw(0));
            }
            let Ok(c_half) = fit(&samples, child_stencil) else {
                drop_uninterpolable_child(&mut dropped, &rec, parent_stencil, side);
                continue;
            };
            let q_half = integral(&c_half, ca, cb);
            let div = engine.divergence(q_half, rec.q_base, rec.nr_div, rec.nr_rec + 1);
            if div.divergent {
                divergent = true;
                break;
            }
            let mut xfer = parent_stencil.transfer(side, &rec.coeffs.c);
            xfer.truncate(child_stencil.n + 1);
            children.push(IntervalRecord {
                a: ca,
                b: cb,
                eps: sanitize(h * diff_norm(&c_half.c, &xfer)),
                coeffs: c_half,
                newton: None,
                samples,
                q: q_half,
                degree_index: 0,
                q_base: q_half,
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

/// Result for an integrand that cannot be interpolated on the whole interval.
pub(super) fn unresolvable(neval: usize) -> QuadResult {
    QuadResult {
        q: 0.0,
        eps: f64::INFINITY,
        neval,
        status: Status::ToleranceNotMet,
    }
}

/// Divergence abort: the parent being split goes back so the partial result
/// still covers the whole domain.
pub(super) fn abort_divergent(mut engine: Engine, parent: IntervalRecord, neval: usize) -> QuadResult {
    engine.push(parent);
    engine.finish(neval, true)
}

pub(super) fn commit_children(engine: &mut Engine, children: Vec<IntervalRecord>, dropped: Excess) {
    engine.excess.q += dropped.q;
    engine.excess.eps += dropped.eps;
    for child in children {
        engine.push(child);
    }
    engine.enforce_heap_cap();
}
