//! Degree-dependent apparatus for interpolating over Chebyshev nodes in the
//! orthonormal Legendre basis.
//!
//! Everything in here is computed once and is immutable afterwards: the
//! recurrence coefficients, the node stencils with their Vandermonde-like
//! matrices, the integration weights, the coefficients of the nodal (Newton)
//! polynomial and the bisection transforms.

use nalgebra::DMatrix;
use std::f64::consts::{PI, SQRT_2};

use crate::error::BasisError;

/// Largest admissible residual `‖P·P⁻¹ − I‖∞` when a stencil is built.
pub const INVERSE_RESIDUAL_TOL: f64 = 1e-10;

/// Coefficients of the three-term recurrence
/// `α_k p_{k+1}(x) = (x + β_k) p_k(x) − γ_k p_{k−1}(x)`
/// generating the Legendre polynomials normalized to unit L2 norm on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreRecurrence {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub max_degree: usize,
}

/// Builds the recurrence for degrees `0..=max_degree`.
///
/// # Panics
///
/// If `max_degree` is zero.
pub fn build_recurrence(max_degree: usize) -> LegendreRecurrence {
    assert!(max_degree >= 1, "recurrence needs max_degree >= 1");
    let alpha = (0..=max_degree)
        .map(|k| {
            let k = k as f64;
            (k + 1.0) / ((2.0 * k + 1.0) * (2.0 * k + 3.0)).sqrt()
        })
        .collect();
    let gamma = (0..=max_degree)
        .map(|k| {
            let k = k as f64;
            if k == 0.0 {
                0.0
            } else {
                k / ((2.0 * k - 1.0) * (2.0 * k + 1.0)).sqrt()
            }
        })
        .collect();
    LegendreRecurrence {
        alpha,
        beta: vec![0.0; max_degree + 1],
        gamma,
        max_degree,
    }
}

impl LegendreRecurrence {
    /// Value of the constant polynomial `p_0`.
    pub const P0: f64 = std::f64::consts::FRAC_1_SQRT_2;

    /// Writes `p_0(x) .. p_{out.len()-1}(x)` into `out`.
    pub fn eval_all(&self, x: f64, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        assert!(out.len() <= self.max_degree + 2, "degree beyond recurrence");
        out[0] = Self::P0;
        if out.len() > 1 {
            out[1] = (x + self.beta[0]) * out[0] / self.alpha[0];
        }
        for k in 1..out.len().saturating_sub(1) {
            out[k + 1] = ((x + self.beta[k]) * out[k] - self.gamma[k] * out[k - 1]) / self.alpha[k];
        }
    }

    /// Evaluates the expansion `Σ c_k p_k(x)`.
    pub fn eval_series(&self, coeffs: &[f64], x: f64) -> f64 {
        let mut prev = 0.0;
        let mut cur = Self::P0;
        let mut sum = 0.0;
        for (k, &c) in coeffs.iter().enumerate() {
            sum += c * cur;
            if k + 1 < coeffs.len() {
                let next = ((x + self.beta[k]) * cur - self.gamma[k] * prev) / self.alpha[k];
                prev = cur;
                cur = next;
            }
        }
        sum
    }

    /// Coefficients of `x · q(x)` where `q` has coefficients `coeffs`.
    /// The output is one entry longer than the input.
    pub fn mul_x(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; coeffs.len() + 1];
        for (k, &v) in coeffs.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            // x p_k = α_k p_{k+1} − β_k p_k + γ_k p_{k−1}
            out[k + 1] += self.alpha[k] * v;
            out[k] -= self.beta[k] * v;
            if k > 0 {
                out[k - 1] += self.gamma[k] * v;
            }
        }
        out
    }
}

/// Which half of a bisected interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];
}

/// Precomputed interpolation stencil of degree `n` over the `n + 1`
/// Chebyshev extrema `x_i = cos(πi/n)`, stored in descending order.
#[derive(Debug, Clone)]
pub struct RuleStencil {
    pub n: usize,
    pub nodes: Vec<f64>,
    /// `P[(i, j)] = p_j(x_i)`, square of size `n + 1`.
    pub p: DMatrix<f64>,
    pub p_inv: DMatrix<f64>,
    /// `p_j(x_i)` for `j = 0..=n+1`; the extra column evaluates Newton vectors.
    pub p_ext: DMatrix<f64>,
    /// `κ∞(P)`.
    pub cond: f64,
    pub omega: Vec<f64>,
    /// Legendre coefficients of `π_n(x) = Π (x − x_i)`, length `n + 2`.
    pub b: Vec<f64>,
    /// Bisection transforms of size `n + 2`, upper triangular. The leading
    /// `(n+1)×(n+1)` block acts on interpolation coefficients, the full
    /// matrix on Newton vectors.
    pub t_left: DMatrix<f64>,
    pub t_right: DMatrix<f64>,
    rec: LegendreRecurrence,
}

/// Chebyshev extrema `cos(πi/n)` in descending order. Computed through the
/// sine so that the set is exactly antisymmetric and the middle node (even
/// `n`) is exactly zero; node `2i` of degree `2n` is bitwise node `i` of
/// degree `n`.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| {
            let k = n as f64 - 2.0 * i as f64;
            (PI * k / (2 * n) as f64).sin()
        })
        .collect()
}

fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix with column `j` holding the coefficients of `p_j((x + shift)/2)`.
fn bisection_transform(rec: &LegendreRecurrence, size: usize, shift: f64) -> DMatrix<f64> {
    // y·q = (x·q + shift·q) / 2
    let mul_y = |q: &[f64]| -> Vec<f64> {
        let mut out = rec.mul_x(q);
        for (o, &v) in out.iter_mut().zip(q) {
            *o += shift * v;
        }
        out.iter_mut().for_each(|o| *o *= 0.5);
        out
    };
    let mut t = DMatrix::zeros(size, size);
    let mut prev: Vec<f64> = Vec::new();
    let mut cur = vec![1.0];
    for j in 0..size {
        for (i, &v) in cur.iter().enumerate() {
            t[(i, j)] = v;
        }
        if j + 1 == size {
            break;
        }
        let mut next = mul_y(&cur);
        for (k, v) in next.iter_mut().enumerate() {
            if k < cur.len() {
                *v += rec.beta[j] * cur[k];
            }
            if k < prev.len() {
                *v -= rec.gamma[j] * prev[k];
            }
            *v /= rec.alpha[j];
        }
        prev = std::mem::replace(&mut cur, next);
    }
    t
}

/// The nodes reordered so that each one maximizes the product of distances
/// to those before it. Multiplying out `Π (x − x_i)` in this order keeps the
/// intermediate coefficients well scaled.
fn leja_order(nodes: &[f64]) -> Vec<f64> {
    let mut rest = nodes.to_vec();
    let mut out = Vec::with_capacity(rest.len());
    out.push(rest.remove(0));
    while !rest.is_empty() {
        let k = rest
            .iter()
            .enumerate()
            .map(|(k, &x)| (k, out.iter().map(|&y| (x - y).abs().ln()).sum::<f64>()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(k, _)| k)
            .expect("rest is non-empty");
        out.push(rest.remove(k));
    }
    out
}

/// Builds the stencil of degree `n`.
pub fn build_stencil(n: usize, rec: &LegendreRecurrence) -> Result<RuleStencil, BasisError> {
    if n < 1 || n + 1 > rec.max_degree {
        return Err(BasisError::DegreeOutOfRange {
            n,
            max_degree: rec.max_degree,
        });
    }
    let nodes = chebyshev_nodes(n);
    let mut p_ext = DMatrix::zeros(n + 1, n + 2);
    let mut row = vec![0.0; n + 2];
    for (i, &x) in nodes.iter().enumerate() {
        rec.eval_all(x, &mut row);
        for (j, &v) in row.iter().enumerate() {
            p_ext[(i, j)] = v;
        }
    }
    let p = p_ext.columns(0, n + 1).into_owned();
    let p_inv = p.clone().try_inverse().ok_or(BasisError::Singular { n })?;
    let residual = inf_norm(&(&p * &p_inv - DMatrix::identity(n + 1, n + 1)));
    if residual > INVERSE_RESIDUAL_TOL {
        return Err(BasisError::InverseResidual { n, residual });
    }
    let cond = inf_norm(&p) * inf_norm(&p_inv);

    let mut omega = vec![0.0; n + 1];
    omega[0] = SQRT_2;

    let mut b = vec![SQRT_2];
    for x in leja_order(&nodes) {
        let mut next = rec.mul_x(&b);
        for (o, &v) in next.iter_mut().zip(&b) {
            *o -= x * v;
        }
        b = next;
    }

    Ok(RuleStencil {
        n,
        t_left: bisection_transform(rec, n + 2, -1.0),
        t_right: bisection_transform(rec, n + 2, 1.0),
        nodes,
        p,
        p_inv,
        p_ext,
        cond,
        omega,
        b,
        rec: rec.clone(),
    })
}

/// Solves the upper-triangular system that divides the nodal polynomial with
/// coefficients `newton` by `(x − xj)`.
///
/// `newton` has degree `top` (entries beyond `top` must be zero). The result
/// has the same length with degree `top − 1`.
pub fn downdate_newton(rec: &LegendreRecurrence, newton: &[f64], top: usize, xj: f64) -> Vec<f64> {
    assert!(top >= 1 && top < newton.len());
    let mut v = vec![0.0; newton.len()];
    let deg = top - 1;
    v[deg] = newton[top] / rec.alpha[deg];
    for i in (0..deg).rev() {
        let mut rhs = newton[i + 1] + (xj + rec.beta[i + 1]) * v[i + 1];
        if i + 2 <= deg {
            rhs -= rec.gamma[i + 2] * v[i + 2];
        }
        v[i] = rhs / rec.alpha[i];
    }
    v
}

impl RuleStencil {
    pub fn recurrence(&self) -> &LegendreRecurrence {
        &self.rec
    }

    /// Newton vector of the stencil with node `j` removed.
    pub fn downdate_matrix(&self, j: usize) -> Vec<f64> {
        assert!(j <= self.n, "node index out of range");
        downdate_newton(&self.rec, &self.b, self.n + 1, self.nodes[j])
    }

    pub fn transform(&self, side: Side) -> &DMatrix<f64> {
        match side {
            Side::Left => &self.t_left,
            Side::Right => &self.t_right,
        }
    }

    /// Applies the bisection transform to a vector of length `n + 1` or `n + 2`.
    pub fn transfer(&self, side: Side, v: &[f64]) -> Vec<f64> {
        let t = self.transform(side);
        let len = v.len();
        assert!(len <= self.n + 2);
        (0..len)
            .map(|i| (i..len).map(|j| t[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Evaluates an expansion of length at most `n + 2` at every node.
    pub fn eval_at_nodes(&self, v: &[f64]) -> Vec<f64> {
        assert!(v.len() <= self.n + 2);
        (0..=self.n)
            .map(|i| v.iter().enumerate().map(|(j, &c)| self.p_ext[(i, j)] * c).sum())
            .collect()
    }

    /// `P⁻¹ f`.
    pub fn solve(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.n + 1);
        (0..=self.n)
            .map(|i| f.iter().enumerate().map(|(j, &v)| self.p_inv[(i, j)] * v).sum())
            .collect()
    }
}

/// All stencils used by the two integrators, built once.
#[derive(Debug, Clone)]
pub struct StencilSet {
    /// Degrees 4, 8, 16, 32 for the degree-doubling integrator.
    pub nested: Vec<RuleStencil>,
    /// Degree 10 for the fixed-degree integrator.
    pub fixed: RuleStencil,
}

/// Highest stencil degree this crate builds.
pub const MAX_STENCIL_DEGREE: usize = 32;

impl StencilSet {
    pub fn build() -> Result<Self, BasisError> {
        let rec = build_recurrence(MAX_STENCIL_DEGREE + 1);
        let nested = [4, 8, 16, 32]
            .into_iter()
            .map(|n| build_stencil(n, &rec))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            nested,
            fixed: build_stencil(10, &rec)?,
        })
    }

    /// The process-wide shared set.
    pub fn shared() -> &'static StencilSet {
        static SET: std::sync::OnceLock<StencilSet> = std::sync::OnceLock::new();
        SET.get_or_init(|| StencilSet::build().expect("stencil construction failed"))
    }

    /// Stencil of arbitrary degree `n ≤ 32`, reusing the shared ones when possible.
    pub fn degree(&self, n: usize) -> Option<&RuleStencil> {
        self.nested
            .iter()
            .chain(std::iter::once(&self.fixed))
            .find(|s| s.n == n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec() -> LegendreRecurrence {
        build_recurrence(34)
    }

    #[test]
    fn low_degree_polynomials() {
        let r = rec();
        let mut v = [0.0; 2];
        r.eval_all(0.3, &mut v);
        assert!((v[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((v[1] - (1.5f64).sqrt() * 0.3).abs() < 1e-15);
        assert!(r.alpha.iter().all(|&a| a > 0.0));
        assert!(r.beta.iter().all(|&b| b == 0.0));
    }

    #[test]
    fn degree_one_stencil() {
        let s = build_stencil(1, &rec()).unwrap();
        assert_eq!(s.nodes, vec![1.0, -1.0]);
        assert!((s.p[(0, 0)] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((s.p[(0, 1)] - (1.5f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn nodes_nest_under_doubling() {
        let coarse = chebyshev_nodes(8);
        let fine = chebyshev_nodes(16);
        for (i, &x) in coarse.iter().enumerate() {
            assert_eq!(x.to_bits(), fine[2 * i].to_bits());
        }
        assert_eq!(chebyshev_nodes(10)[5], 0.0);
        assert!(coarse.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn stencils_are_well_conditioned() {
        let set = StencilSet::build().unwrap();
        for s in set.nested.iter().chain(std::iter::once(&set.fixed)) {
            assert!(s.cond < 1000.0, "n={} cond={}", s.n, s.cond);
            assert_eq!(s.omega[0], SQRT_2);
            assert!(s.omega[1..].iter().all(|&w| w == 0.0));
            for i in 0..s.n + 2 {
                for j in 0..i {
                    assert_eq!(s.t_left[(i, j)], 0.0);
                    assert_eq!(s.t_right[(i, j)], 0.0);
                }
            }
        }
        assert!(set.degree(10).unwrap().cond < 1000.0);
    }

    #[test]
    fn integrates_x4_exactly() {
        let s = build_stencil(4, &rec()).unwrap();
        let f: Vec<f64> = s.nodes.iter().map(|x| x.powi(4)).collect();
        let c = s.solve(&f);
        let q: f64 = s.omega.iter().zip(&c).map(|(w, c)| w * c).sum();
        assert!((q - 0.4).abs() < 1e-14);
    }

    #[test]
    fn newton_vector_vanishes_at_nodes() {
        let s = build_stencil(10, &rec()).unwrap();
        for v in s.eval_at_nodes(&s.b) {
            assert!(v.abs() < 1e-14);
        }
    }

    #[test]
    fn downdate_degree_one_by_hand() {
        // π_1 = x² − 1; dividing by (x − 1) leaves x + 1.
        let r = rec();
        let s = build_stencil(1, &r).unwrap();
        let v = s.downdate_matrix(0);
        for x in [-0.7, 0.0, 0.4, 1.0] {
            assert!((r.eval_series(&v, x) - (x + 1.0)).abs() < 1e-14);
        }
        assert_eq!(v[2], 0.0);
    }

    #[test]
    fn out_of_range_degree_is_rejected() {
        assert!(matches!(
            build_stencil(34, &rec()),
            Err(BasisError::DegreeOutOfRange { .. })
        ));
    }
}
