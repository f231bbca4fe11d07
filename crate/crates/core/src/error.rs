use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BasisError {
    #[error("stencil degree {n} outside 1..={max_degree} - 1")]
    DegreeOutOfRange { n: usize, max_degree: usize },
    #[error("Vandermonde-like matrix of degree {n} is singular")]
    Singular { n: usize },
    #[error("inverse of degree-{n} matrix has residual {residual:e}")]
    InverseResidual { n: usize, residual: f64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpError {
    #[error("{count} of {nodes} nodes are non-numeric; interpolation is meaningless")]
    TooManyNonNumeric { count: usize, nodes: usize },
    #[error("samples were taken for degree {samples}, stencil has degree {stencil}")]
    StencilMismatch { samples: usize, stencil: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Basis(#[from] BasisError),
}
