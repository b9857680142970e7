use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point is not on the boundary (|rho| = {residual:.3e})")]
    PointNotOnBoundary { residual: f64 },
    #[error("defining function has a degenerate gradient (|grad| = {norm:.3e})")]
    DegenerateGradient { norm: f64 },
    #[error("boundary is not smooth at the requested point")]
    NonSmoothBoundary,
    #[error("vector is not complex tangent (|<d rho, u>| = {residual:.3e})")]
    NotComplexTangent { residual: f64 },
    #[error("domain model {0} is not supported by this operation")]
    UnsupportedDomain(&'static str),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("origin is not inside the slice")]
    OriginOutside,
    #[error("component of the origin reaches the grid window edge")]
    Truncated,
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("could not bracket the boundary along the projection direction")]
    ProjectionFailure,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("check is inapplicable: {0}")]
    Inapplicable(String),
    #[error("sampling too coarse: {0}")]
    SamplingTooCoarse(String),
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("ball inclusion violated: {0}")]
    InclusionViolated(String),
    #[error("quadrature underflow: t = {t:.3e} is below 1e-8")]
    QuadratureUnderflow { t: f64 },
    #[error("map sends the boundary point off the boundary (|rho| = {residual:.3e})")]
    MapsOffBoundary { residual: f64 },
    #[error("zero point has no gauge radius or projective class")]
    ZeroPoint,
    #[error("fibers coincide")]
    FibersCoincide,
    #[error("stereographic pole lies on a circle")]
    ProjectionPoleOnCircle,
    #[error("phase jump {jump:.3} rad between consecutive samples; increase sampling")]
    PhaseJumpTooLarge { jump: f64 },
    #[error("Blaschke product needs at least one zero")]
    MinZeros,
    #[error("spanning count exceeded the budget of {budget}")]
    BudgetExceeded { budget: usize },
}
