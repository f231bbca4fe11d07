//! Sampling, fitting and querying Legendre interpolants, including removal of
//! nodes where the integrand was non-numeric.

use crate::basis::{RuleStencil, Side};
use crate::error::InterpError;
use crate::integrand::{is_non_numeric, CountingIntegrand, Integrand};

/// Legendre coefficients of an interpolant on the reference interval.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    pub c: Vec<f64>,
    pub eff_degree: usize,
    /// Degree of the stencil that produced the vector.
    pub stencil_id: usize,
}

impl CoeffVector {
    pub fn zeros(n: usize) -> Self {
        Self {
            c: vec![0.0; n + 1],
            eff_degree: n,
            stencil_id: n,
        }
    }

    pub fn from_coeffs(c: Vec<f64>) -> Self {
        let n = c.len() - 1;
        Self {
            c,
            eff_degree: n,
            stencil_id: n,
        }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }
}

/// Function values at the nodes of a stencil; non-numeric entries are stored
/// as zero and their indices kept in ascending order in `nan_mask`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleVector {
    pub f: Vec<f64>,
    pub nan_mask: Vec<usize>,
}

impl SampleVector {
    pub fn from_raw(raw: &[f64]) -> Self {
        let mut f = raw.to_vec();
        let mut nan_mask = Vec::new();
        for (i, v) in f.iter_mut().enumerate() {
            if is_non_numeric(*v) {
                *v = 0.0;
                nan_mask.push(i);
            }
        }
        Self { f, nan_mask }
    }

    /// Value as returned by the integrand, with masked entries reported as NaN.
    pub fn raw(&self, i: usize) -> f64 {
        if self.is_masked(i) {
            f64::NAN
        } else {
            self.f[i]
        }
    }

    pub fn is_masked(&self, i: usize) -> bool {
        self.nan_mask.binary_search(&i).is_ok()
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    /// Every `stride`-th sample, as needed for a nested lower-degree stencil.
    pub fn subsample(&self, stride: usize) -> SampleVector {
        let raw: Vec<f64> = (0..self.f.len()).step_by(stride).map(|i| self.raw(i)).collect();
        SampleVector::from_raw(&raw)
    }
}

/// Maps reference node `x` to `[a, b]`; the endpoints and midpoint are exact.
#[inline]
pub fn map_node(x: f64, a: f64, b: f64) -> f64 {
    if x == 1.0 {
        b
    } else if x == -1.0 {
        a
    } else {
        let m = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        m + h * x
    }
}

/// Samples the integrand at the stencil nodes mapped to `[a, b]`. Entries of
/// `reuse` that are `Some` are taken as already known and not re-evaluated.
pub fn sample<F: Integrand + ?Sized>(
    integrand: &mut CountingIntegrand<'_, F>,
    a: f64,
    b: f64,
    stencil: &RuleStencil,
    reuse: &[Option<f64>],
) -> SampleVector {
    let raw: Vec<f64> = stencil
        .nodes
        .iter()
        .enumerate()
        .map(|(i, &x)| match reuse.get(i).copied().flatten() {
            Some(v) => v,
            None => integrand.eval(map_node(x, a, b)),
        })
        .collect();
    SampleVector::from_raw(&raw)
}

/// Interpolant coefficients together with the (possibly downdated) Newton
/// vector over the nodes actually interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant {
    pub coeffs: CoeffVector,
    pub newton: Vec<f64>,
}

/// Fits the interpolant and downdates it for every masked node, in ascending
/// node order.
pub fn fit_with_newton(
    samples: &SampleVector,
    stencil: &RuleStencil,
) -> Result<Interpolant, InterpError> {
    let n = stencil.n;
    if samples.degree() != n {
        return Err(InterpError::StencilMismatch {
            samples: samples.degree(),
            stencil: n,
        });
    }
    if samples.nan_mask.len() >= n {
        return Err(InterpError::TooManyNonNumeric {
            count: samples.nan_mask.len(),
            nodes: n + 1,
        });
    }
    let mut c = stencil.solve(&samples.f);
    let mut newton = stencil.b.clone();
    let mut top = n;
    for &j in &samples.nan_mask {
        newton = crate::basis::downdate_newton(stencil.recurrence(), &newton, top + 1, stencil.nodes[j]);
        let scale = c[top] / newton[top];
        for (ci, &bi) in c.iter_mut().zip(&newton) {
            *ci -= scale * bi;
        }
        c[top] = 0.0;
        top -= 1;
    }
    Ok(Interpolant {
        coeffs: CoeffVector {
            c,
            eff_degree: top,
            stencil_id: n,
        },
        newton,
    })
}

pub fn fit(samples: &SampleVector, stencil: &RuleStencil) -> Result<CoeffVector, InterpError> {
    fit_with_newton(samples, stencil).map(|i| i.coeffs)
}

/// Integral over `[a, b]` of the interpolant with coefficients `c`.
pub fn integral(c: &CoeffVector, a: f64, b: f64) -> f64 {
    // ω = (√2, 0, …, 0)
    0.5 * (b - a) * std::f64::consts::SQRT_2 * c.c[0]
}

/// L2 norm of the interpolant on the reference interval.
pub fn l2_norm(c: &CoeffVector) -> f64 {
    norm(&c.c)
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `‖u − v‖₂`, the shorter vector zero-padded.
pub(crate) fn diff_norm(u: &[f64], v: &[f64]) -> f64 {
    let len = u.len().max(v.len());
    (0..len)
        .map(|i| {
            let d = u.get(i).copied().unwrap_or(0.0) - v.get(i).copied().unwrap_or(0.0);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Coefficients of the same polynomial restricted to one half of the interval.
pub fn transfer_to_child(c: &CoeffVector, side: Side, stencil: &RuleStencil) -> CoeffVector {
    CoeffVector {
        c: stencil.transfer(side, &c.c),
        eff_degree: c.eff_degree,
        stencil_id: c.stencil_id,
    }
}
