//! Globally adaptive driver state shared by both integrators: the interval
//! heap keyed by error, excess accumulation, drop rules, the heap-size cap,
//! divergence counting and the final result.

use crate::basis::RuleStencil;
use crate::interp::{map_node, CoeffVector, SampleVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Converged,
    ToleranceNotMet,
    Divergent,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::ToleranceNotMet => "tolerance-not-met",
            Status::Divergent => "divergent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub q: f64,
    /// Sum of the error estimates over the heap and the excess.
    pub eps: f64,
    pub neval: usize,
    pub status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub heap_cap: usize,
    pub nr_divmax: u32,
    pub eps_mach: f64,
    /// Stop once this many evaluations have been spent.
    pub max_neval: Option<usize>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            heap_cap: 200,
            nr_divmax: 20,
            eps_mach: f64::EPSILON,
            max_neval: None,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), &'static str> {
        if self.heap_cap < 2 {
            return Err("heap_cap must be at least 2");
        }
        if self.nr_divmax < 1 {
            return Err("nr_divmax must be at least 1");
        }
        if !(self.eps_mach > 0.0) {
            return Err("eps_mach must be positive");
        }
        Ok(())
    }
}

/// One heap entry.
#[derive(Debug, Clone)]
pub struct IntervalRecord {
    pub a: f64,
    pub b: f64,
    pub coeffs: CoeffVector,
    /// Newton vector over the interpolation nodes (fixed-degree integrator).
    pub newton: Option<Vec<f64>>,
    /// Samples at the nodes of the current rule, kept for reuse.
    pub samples: SampleVector,
    pub q: f64,
    pub eps: f64,
    /// Index into the degree ladder (degree-doubling integrator).
    pub degree_index: usize,
    /// Integral from the lowest-degree rule on this interval.
    pub q_base: f64,
    pub nr_div: u32,
    pub nr_rec: u32,
}

/// Integral and error of intervals dropped from the heap.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Excess {
    pub q: f64,
    pub eps: f64,
}

impl Excess {
    pub fn accumulate(&mut self, rec: &IntervalRecord) {
        self.q += rec.q;
        self.eps += rec.eps;
    }
}

/// True if the interval's error is at the rounding floor of its integral or
/// the stencil's outer nodes coincide once mapped to `[a, b]`.
pub fn should_drop(rec: &IntervalRecord, stencil: &RuleStencil, cfg: &EngineConfig) -> bool {
    rec.eps < rec.q.abs() * cfg.eps_mach * stencil.cond || too_small(rec.a, rec.b, stencil)
}

pub fn too_small(a: f64, b: f64, stencil: &RuleStencil) -> bool {
    let x = &stencil.nodes;
    let n = stencil.n;
    map_node(x[0], a, b) == map_node(x[1], a, b) || map_node(x[n - 1], a, b) == map_node(x[n], a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivergenceUpdate {
    pub nr_div: u32,
    pub divergent: bool,
}

/// Counts a non-shrinking child integral and decides whether the lineage
/// looks divergent. Magnitudes are compared, so the sign of the integrand
/// does not matter.
pub fn divergence_update(
    q_child: f64,
    q_parent: f64,
    parent_nr_div: u32,
    child_nr_rec: u32,
    cfg: &EngineConfig,
) -> DivergenceUpdate {
    let nr_div = parent_nr_div + u32::from(q_child.abs() >= q_parent.abs());
    DivergenceUpdate {
        nr_div,
        divergent: nr_div > cfg.nr_divmax && 2 * nr_div > child_nr_rec,
    }
}

/// Interval heap plus excess totals for one integration run.
#[derive(Debug)]
pub struct Engine {
    cfg: EngineConfig,
    tau: f64,
    // (insertion sequence, record); small enough that linear scans win.
    heap: Vec<(u64, IntervalRecord)>,
    seq: u64,
    pub excess: Excess,
}

impl Engine {
    pub fn new(cfg: EngineConfig, tau: f64) -> Self {
        Self {
            cfg,
            tau,
            heap: Vec::with_capacity(cfg.heap_cap + 2),
            seq: 0,
            excess: Excess::default(),
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn push(&mut self, rec: IntervalRecord) {
        self.heap.push((self.seq, rec));
        self.seq += 1;
    }

    pub fn records(&self) -> impl Iterator<Item = &IntervalRecord> {
        self.heap.iter().map(|(_, r)| r)
    }

    /// Removes and returns the record with the largest error; ties go to
    /// the earliest inserted.
    pub fn select_worst(&mut self) -> Option<IntervalRecord> {
        let idx = self
            .heap
            .iter()
            .enumerate()
            .max_by(|(_, (sa, ra)), (_, (sb, rb))| {
                ra.eps.total_cmp(&rb.eps).then_with(|| sb.cmp(sa))
            })
            .map(|(i, _)| i)?;
        Some(self.heap.swap_remove(idx).1)
    }

    pub fn accumulate_excess(&mut self, rec: IntervalRecord) {
        self.excess.accumulate(&rec);
    }

    /// Moves the smallest-error records into the excess until the heap fits.
    pub fn enforce_heap_cap(&mut self) {
        while self.heap.len() > self.cfg.heap_cap {
            let idx = self
                .heap
                .iter()
                .enumerate()
                .min_by(|(_, (sa, ra)), (_, (sb, rb))| {
                    ra.eps.total_cmp(&rb.eps).then_with(|| sb.cmp(sa))
                })
                .map(|(i, _)| i)
                .expect("heap is non-empty");
            let (_, rec) = self.heap.swap_remove(idx);
            self.excess.accumulate(&rec);
        }
    }

    pub fn heap_eps(&self) -> f64 {
        self.heap.iter().map(|(_, r)| r.eps).sum()
    }

    pub fn heap_q(&self) -> f64 {
        self.heap.iter().map(|(_, r)| r.q).sum()
    }

    /// Loop guard: more work is needed and allowed.
    pub fn should_continue(&self, neval: usize) -> bool {
        if self.heap.is_empty() || self.heap_eps() <= self.tau {
            return false;
        }
        self.cfg.max_neval.is_none_or(|cap| neval < cap)
    }

    pub fn divergence(&self, q_child: f64, q_parent: f64, parent_nr_div: u32, child_nr_rec: u32) -> DivergenceUpdate {
        divergence_update(q_child, q_parent, parent_nr_div, child_nr_rec, &self.cfg)
    }

    pub fn finish(&self, neval: usize, divergent: bool) -> QuadResult {
        let q = self.excess.q + self.heap_q();
        let eps = self.excess.eps + self.heap_eps();
        let status = if divergent {
            Status::Divergent
        } else if eps <= self.tau {
            Status::Converged
        } else {
            Status::ToleranceNotMet
        };
        QuadResult { q, eps, neval, status }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::StencilSet;

    fn rec(q: f64, eps: f64) -> IntervalRecord {
        IntervalRecord {
            a: 0.0,
            b: 1.0,
            coeffs: CoeffVector::zeros(4),
            newton: None,
            samples: SampleVector::from_raw(&[0.0; 5]),
            q,
            eps,
            degree_index: 0,
            q_base: q,
            nr_div: 0,
            nr_rec: 0,
        }
    }

    fn engine() -> Engine {
        Engine::new(EngineConfig::default(), 1e-6)
    }

    #[test]
    fn worst_is_largest_error() {
        let mut e = engine();
        for eps in [1.0, 3.0, 2.0] {
            e.push(rec(0.0, eps));
        }
        assert_eq!(e.select_worst().unwrap().eps, 3.0);
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn ties_go_to_earliest() {
        let mut e = engine();
        for q in [1.0, 2.0, 3.0] {
            e.push(rec(q, 5.0));
        }
        assert_eq!(e.select_worst().unwrap().q, 1.0);
        assert_eq!(e.select_worst().unwrap().q, 2.0);
    }

    #[test]
    fn drop_rules() {
        let s = &StencilSet::shared().fixed;
        let cfg = EngineConfig::default();
        assert!(should_drop(&rec(1.0, 0.0), s, &cfg));
        let mut r = rec(1.0, 1e-3);
        assert!(!should_drop(&r, s, &cfg));
        r.a = 1.0;
        r.b = 1.0 + 2.0 * f64::EPSILON;
        assert!(should_drop(&r, s, &cfg));
    }

    #[test]
    fn rounding_floor_uses_condition_number() {
        let mut s = StencilSet::shared().fixed.clone();
        s.cond = 100.0;
        assert!(!should_drop(&rec(1.0, 1e-3), &s, &EngineConfig::default()));
        assert!(should_drop(&rec(1.0, 1e-15), &s, &EngineConfig::default()));
    }

    #[test]
    fn excess_accumulates() {
        let mut e = engine();
        e.accumulate_excess(rec(0.5, 1e-18));
        e.accumulate_excess(rec(0.5, 1e-18));
        assert_eq!(e.excess.q, 1.0);
        e.push(rec(0.25, 0.0));
        let r = e.finish(10, false);
        assert_eq!(r.q, 1.25);
        assert_eq!(r.status, Status::Converged);
    }

    #[test]
    fn empty_heap_status_follows_excess() {
        let mut e = engine();
        e.accumulate_excess(rec(1.0, 1.0));
        assert!(!e.should_continue(0));
        assert_eq!(e.finish(0, false).status, Status::ToleranceNotMet);
    }

    #[test]
    fn cap_evicts_smallest() {
        let mut e = Engine::new(
            EngineConfig {
                heap_cap: 2,
                ..EngineConfig::default()
            },
            1e-6,
        );
        for (q, eps) in [(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)] {
            e.push(rec(q, eps));
        }
        let before = e.finish(0, false).q;
        e.enforce_heap_cap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.excess.eps, 1.0);
        assert_eq!(e.finish(0, false).q, before);
        assert_eq!(e.select_worst().unwrap().eps, 3.0);
    }

    #[test]
    fn divergence_counting() {
        let cfg = EngineConfig::default();
        assert_eq!(divergence_update(0.0, 0.0, 3, 5, &cfg).nr_div, 4);
        assert_eq!(divergence_update(-2.0, 1.0, 0, 1, &cfg).nr_div, 1);
        assert_eq!(divergence_update(0.4, 1.0, 0, 1, &cfg).nr_div, 0);
        assert!(!divergence_update(1.0, 1.0, 19, 21, &cfg).divergent);
        assert!(divergence_update(1.0, 1.0, 20, 21, &cfg).divergent);
        assert!(!divergence_update(1.0, 1.0, 20, 42, &cfg).divergent);
    }

    #[test]
    fn budget_stops_the_loop() {
        let mut e = Engine::new(
            EngineConfig {
                max_neval: Some(100),
                ..EngineConfig::default()
            },
            1e-6,
        );
        e.push(rec(1.0, 1.0));
        assert!(e.should_continue(99));
        assert!(!e.should_continue(100));
    }
}
