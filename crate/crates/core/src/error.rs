use thiserror::Error;

/// Errors raised by the workbench. Each variant maps to a stable `kind` string
/// used in machine-readable reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero expression")]
    DivisionByZero,
    #[error("value is not rational: {0}")]
    IrrationalValue(String),
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("objects live on different charts")]
    ChartMismatch,
    #[error("degree error: {0}")]
    DegreeError(String),
    #[error("homotopy operator pole: form degree {degree} + monomial degree {monomial_degree} = 0")]
    HomotopyPole { degree: usize, monomial_degree: String },
    #[error("coefficient is not a Laurent polynomial: {0}")]
    NotLaurent(String),
    #[error("volume form is singular")]
    SingularVolume,
    #[error("form is not closed")]
    NotClosed,
    #[error("square root of the scale is not in the expression ring: {0}")]
    IrrationalScale(String),
    #[error("form has the wrong linear type: {0}")]
    WrongType(String),
    #[error("endomorphism does not square to -I")]
    NotAlmostComplex,
    #[error("frame is linearly dependent")]
    DependentFrame,
    #[error("form is degenerate")]
    Degenerate,
    #[error("no Hamiltonian vector field: -dH is outside the image of the contraction map")]
    NotHamiltonian,
    #[error("structure constants violate {0}")]
    JacobiViolation(String),
    #[error("action is not a Lie algebra homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("action does not preserve the form")]
    NotSymmetryAction,
    #[error("potential is not invariant under the action")]
    NotInvariantPotential,
    #[error("eta is not a potential: d(eta) != omega")]
    NotPotential,
    #[error("points are not pairwise distinct")]
    DuplicatePoints,
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error("map component is not polynomial: {0}")]
    NonPolynomial(String),
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::IrrationalValue(_) => "IrrationalValue",
            Error::DomainViolation(_) => "DomainViolation",
            Error::ChartMismatch => "ChartMismatch",
            Error::DegreeError(_) => "DegreeError",
            Error::HomotopyPole { .. } => "HomotopyPole",
            Error::NotLaurent(_) => "NotLaurent",
            Error::SingularVolume => "SingularVolume",
            Error::NotClosed => "NotClosed",
            Error::IrrationalScale(_) => "IrrationalScale",
            Error::WrongType(_) => "WrongType",
            Error::NotAlmostComplex => "NotAlmostComplex",
            Error::DependentFrame => "DependentFrame",
            Error::Degenerate => "Degenerate",
            Error::NotHamiltonian => "NotHamiltonian",
            Error::JacobiViolation(_) => "JacobiViolation",
            Error::NotHomomorphism(_) => "NotHomomorphism",
            Error::NotSymmetryAction => "NotSymmetryAction",
            Error::NotInvariantPotential => "NotInvariantPotential",
            Error::NotPotential => "NotPotential",
            Error::DuplicatePoints => "DuplicatePoints",
            Error::ShapeError(_) => "ShapeError",
            Error::NonPolynomial(_) => "NonPolynomial",
            Error::Parse { .. } => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
