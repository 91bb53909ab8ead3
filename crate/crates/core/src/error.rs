use thiserror::Error;

/// Errors raised by the difference-algebra toolkit.
///
/// Variants split into two families: malformed input (`InvalidInput`,
/// `Mismatch`, ...) and domain limits of the supported model
/// (`UnsupportedConstantClass`, `OutsideDiagonalizableScope`, ...). The CLI
/// maps the latter to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PvError {
    #[error("zero input")]
    ZeroInput,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("element/ring mismatch: {0}")]
    Mismatch(String),
    #[error("unsupported extension: {0}")]
    UnsupportedExtension(String),
    #[error("unsupported ambient ring: {0}")]
    UnsupportedAmbientRing(String),
    #[error("unsupported base: {0}")]
    UnsupportedBase(String),
    #[error("unsupported constant class: {0}")]
    UnsupportedConstantClass(String),
    #[error("q must not be a root of unity")]
    QRootOfUnity,
    #[error("zero divisor: {0}")]
    ZeroDivisor(String),
    #[error("ring is not certified simple: {0}")]
    NotCertifiedSimple(String),
    #[error("not in category: {0}")]
    NotInCategory(String),
    #[error("inconsistent group element: {0}")]
    InconsistentGroupElement(String),
    #[error("no isomorphism found: {0}")]
    NoIsomorphism(String),
    #[error("unsupported: non-normal extension {0}")]
    NonNormal(String),
    #[error("outside diagonalizable scope: {0}")]
    OutsideDiagonalizableScope(String),
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
}

impl PvError {
    /// True for errors that reflect a limit of the mathematical model rather
    /// than malformed input.
    pub fn is_domain_error(&self) -> bool {
        !matches!(self, PvError::InvalidInput(_) | PvError::Mismatch(_))
    }
}

pub type Result<T, E = PvError> = std::result::Result<T, E>;
