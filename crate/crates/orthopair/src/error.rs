use thiserror::Error;

/// Errors carry the stable code used by the command-line tools in their
/// display form, so `MIXED_RINGS: ...` can be matched by scripts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("MIXED_RINGS: {0}")]
    MixedRings(String),

    #[error("SHAPE_ERROR: {0}")]
    Shape(String),

    #[error("NO_SOLUTION: {0}")]
    NoSolution(String),

    /// The submodule is not a direct summand, so no complement exists.
    /// Over the integers this means a non-unit invariant factor.
    #[error("NOT_A_SUMMAND: {0}")]
    NotASummand(String),

    #[error("NO_FACTORIZATION: {0}")]
    NoFactorization(String),

    #[error("NOT_SURJECTIVE: {0}")]
    NotSurjective(String),

    #[error("NOT_INJECTIVE: {0}")]
    NotInjective(String),

    #[error("BAD_COVER: {0}")]
    BadCover(String),

    #[error("NOT_ORTHOSYMMETRIC: {0}")]
    NotOrthosymmetric(String),

    #[error("NOT_A_DECOMPOSITION: {0}")]
    NotADecomposition(String),

    #[error("DEGENERATE_GRAM: {0}")]
    DegenerateGram(String),

    #[error("ISOTROPIC_INPUT: {0}")]
    IsotropicInput(String),

    #[error("NOT_ISOTROPIC: {0}")]
    NotIsotropic(String),

    #[error("DEGENERATE_FORM: {0}")]
    DegenerateForm(String),

    #[error("NO_UNIT_PARTNER: {0}")]
    NoUnitPartner(String),

    /// Input files or argument strings that cannot be parsed.
    #[error("PARSE_ERROR: {0}")]
    Parse(String),

    /// A structural validation failed where an operation required it to hold.
    #[error("INVALID_INPUT: {0}")]
    Invalid(String),

    /// Unknown operation names or malformed argument lists. Kept separate
    /// from the mathematical errors because tools report it as misuse
    /// (exit 2) rather than as a failed computation (exit 1).
    #[error("USAGE_ERROR: {0}")]
    Usage(String),
}

impl Error {
    /// The stable machine-readable code, the display prefix before the colon.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MixedRings(_) => "MIXED_RINGS",
            Error::Shape(_) => "SHAPE_ERROR",
            Error::NoSolution(_) => "NO_SOLUTION",
            Error::NotASummand(_) => "NOT_A_SUMMAND",
            Error::NoFactorization(_) => "NO_FACTORIZATION",
            Error::NotSurjective(_) => "NOT_SURJECTIVE",
            Error::NotInjective(_) => "NOT_INJECTIVE",
            Error::BadCover(_) => "BAD_COVER",
            Error::NotOrthosymmetric(_) => "NOT_ORTHOSYMMETRIC",
            Error::NotADecomposition(_) => "NOT_A_DECOMPOSITION",
            Error::DegenerateGram(_) => "DEGENERATE_GRAM",
            Error::IsotropicInput(_) => "ISOTROPIC_INPUT",
            Error::NotIsotropic(_) => "NOT_ISOTROPIC",
            Error::DegenerateForm(_) => "DEGENERATE_FORM",
            Error::NoUnitPartner(_) => "NO_UNIT_PARTNER",
            Error::Parse(_) => "PARSE_ERROR",
            Error::Invalid(_) => "INVALID_INPUT",
            Error::Usage(_) => "USAGE_ERROR",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
