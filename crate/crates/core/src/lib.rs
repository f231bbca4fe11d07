//! Adaptive quadrature built on explicit Legendre interpolants.
//!
//! The integrand is represented on each interval by the coefficients of its
//! polynomial interpolant at Chebyshev nodes in an orthonormal Legendre
//! basis. Error estimates compare interpolants in coefficient space, nodes
//! returning NaN or infinity are removed from the interpolant, and integrals
//! that keep growing under bisection are flagged as divergent.
//!
//! ```
//! use legquad::{int_refined, RefinedConfig, Status};
//!
//! let r = int_refined(&f64::exp, 0.0, 1.0, 1e-10, &RefinedConfig::default()).unwrap();
//! assert_eq!(r.status, Status::Converged);
//! assert!((r.q - (std::f64::consts::E - 1.0)).abs() < 1e-10);
//! ```

pub mod algorithms;
pub mod basis;
pub mod batch;
pub mod engine;
pub mod errest;
pub mod error;
pub mod integrand;
pub mod interp;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod testlib;

pub use algorithms::{
    divergence_ratio_probe, int_naive, int_refined, int_simpson_baseline, NaiveConfig, ProbeRatios, RefinedConfig,
    SimpsonConfig,
};
pub use basis::{RuleStencil, Side, StencilSet};
pub use engine::{EngineConfig, QuadResult, Status};
pub use error::{BasisError, InterpError, QuadError};
pub use integrand::Integrand;
pub use interp::CoeffVector;
