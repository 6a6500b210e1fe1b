use thiserror::Error;

/// Errors raised by mesh construction, the dense kernels and the
/// constructive right-inverses.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex index {index} out of range (mesh has {len} vertices)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("triangle {0} is degenerate (area below threshold)")]
    DegenerateTriangle(usize),
    #[error("duplicate triangle {0}")]
    DuplicateTriangle(usize),
    #[error("edge ({0}, {1}) is shared by more than two triangles")]
    NonManifoldEdge(usize, usize),
    #[error("vertex {vertex} hangs on edge ({a}, {b})")]
    HangingVertex { vertex: usize, a: usize, b: usize },
    #[error("vertex {0} is not interior")]
    NotInterior(usize),
    #[error("patch around vertex {0} is not a closed fan")]
    OpenFan(usize),
    #[error("infeasible patch request: m = {m}, min angle = {min_angle} rad")]
    InfeasiblePatch { m: usize, min_angle: f64 },
    #[error("unsupported polynomial degree {p}: {reason}")]
    UnsupportedDegree { p: usize, reason: &'static str },
    #[error("quadrature degree {0} outside supported range 1..=20")]
    QuadratureDegree(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite matrix entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("SVD did not converge within {0} sweeps")]
    SvdNoConvergence(usize),
    #[error("eigensolver did not converge")]
    EigenNoConvergence,
    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),
    #[error("all eigenvalues deflated")]
    AllDeflated,
    #[error("functionals do not vanish: |Lambda(g)| = {lambda_norm:.3e} exceeds {bound:.3e}")]
    LambdaNotZero { lambda_norm: f64, bound: f64 },
    #[error("right-hand side has nonzero mean {0:.3e}")]
    NonzeroMean(f64),
    #[error("residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    Residual { residual: f64, tolerance: f64 },
    #[error("triangles do not share an edge")]
    NotAdjacent,
    #[error("velocity space too large: {dofs} dofs exceeds the {limit} limit")]
    TooLarge { dofs: usize, limit: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
