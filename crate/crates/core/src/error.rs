use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("function `{name}` takes {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("domain error in `{subexpr}`: {reason}")]
    Domain { subexpr: String, reason: String },
    #[error("expected {expected} input value(s), got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("tensor is singular (det = {det:e})")]
    SingularTensor { det: f64 },
    #[error("tensor is not skew-symmetric (defect {defect:e})")]
    NotSkew { defect: f64 },
    #[error("tensor is not symmetric (defect {defect:e})")]
    NotSymmetric { defect: f64 },
    #[error("tensor is not positive definite (smallest eigenvalue {eigenvalue:e})")]
    NotSpd { eigenvalue: f64 },
    #[error("determinant must be positive, got {det:e}")]
    NonPositiveDeterminant { det: f64 },
    #[error("tensor is not a rotation (orthogonality defect {defect:e}, det {det})")]
    NotARotation { defect: f64, det: f64 },
    #[error("rotation angle {angle:e} too small for a well-defined axis")]
    AxisUndefined { angle: f64 },
    #[error("vector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("matrix is not orthogonal (defect {defect:e})")]
    NotOrthogonal { defect: f64 },
    #[error("fourth-rank tensor lacks minor symmetry (defect {defect:e})")]
    MissingMinorSymmetry { defect: f64 },

    #[error("curve is irregular at t = {t}")]
    IrregularCurve { t: f64 },
    #[error("principal normal undefined at t = {t} (zero curvature)")]
    UndefinedNormal { t: f64 },
    #[error("osculating sphere undefined at t = {t} (zero torsion)")]
    UndefinedOsculatingSphere { t: f64 },
    #[error("curve is not planar (out-of-plane component {value:e} at t = {t})")]
    NonPlanar { t: f64, value: f64 },
    #[error("initial frame is not orthonormal (defect {defect:e})")]
    NonOrthonormalSeed { defect: f64 },

    #[error("coordinate Jacobian is degenerate at {point:?} (det = {det:e})")]
    DegenerateJacobian { point: Vec<f64>, det: f64 },
    #[error("grid resolution {given} below the minimum of {required}")]
    InsufficientResolution { given: usize, required: usize },
    #[error("point {point:?} lies on a coordinate singularity")]
    CoordinateSingularity { point: Vec<f64> },

    #[error("surface is irregular at (u, v) = ({u}, {v})")]
    IrregularPoint { u: f64, v: f64 },
    #[error("revolution profile radius {radius} is not positive at u = {u}")]
    NonPositiveRadius { u: f64, radius: f64 },
    #[error("ruling director vanishes at u = {u}")]
    DegenerateDirector { u: f64 },
    #[error("point (u, v) = ({u}, {v}) is planar")]
    PlanarPoint { u: f64, v: f64 },
    #[error("geodesic left the parameter domain at s = {s} (u = {u}, v = {v})")]
    LeftDomain {
        s: f64,
        u: f64,
        v: f64,
        du: f64,
        dv: f64,
    },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors caused by malformed or out-of-contract input, as
    /// opposed to a numerical failure at some evaluation point.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownIdentifier { .. }
                | Error::Arity { .. }
                | Error::Dimension { .. }
                | Error::NotSkew { .. }
                | Error::NotSymmetric { .. }
                | Error::NotUnit { .. }
                | Error::NotOrthogonal { .. }
                | Error::MissingMinorSymmetry { .. }
                | Error::NonOrthonormalSeed { .. }
                | Error::InsufficientResolution { .. }
                | Error::Invalid(_)
        )
    }

    /// Evaluation point the failure refers to, when there is one.
    pub fn point(&self) -> Option<Vec<f64>> {
        match self {
            Error::IrregularCurve { t }
            | Error::UndefinedNormal { t }
            | Error::UndefinedOsculatingSphere { t }
            | Error::NonPlanar { t, .. } => Some(vec![*t]),
            Error::DegenerateJacobian { point, .. } | Error::CoordinateSingularity { point } => Some(point.clone()),
            Error::IrregularPoint { u, v } | Error::PlanarPoint { u, v } | Error::LeftDomain { u, v, .. } => {
                Some(vec![*u, *v])
            }
            Error::NonPositiveRadius { u, .. } | Error::DegenerateDirector { u } => Some(vec![*u]),
            _ => None,
        }
    }
}
