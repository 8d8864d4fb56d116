use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is outside the supported range (p < 2^31, q < 2^32)")]
    FieldTooLarge(u64),
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("constant polynomial")]
    ConstantPolynomial,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("model is singular: defining polynomial is not squarefree")]
    SingularModel,
    #[error("defining polynomial must have odd degree 2g+1, got degree {0}")]
    EvenDegree(usize),
    #[error("defining polynomial must be monic")]
    NonMonicModel,
    #[error("hyperelliptic models in characteristic 2 are not supported")]
    CharTwoUnsupported,
    #[error("unsupported divisor: {0}")]
    UnsupportedDivisor(String),
    #[error("function has a pole outside the support of E")]
    PoleOutsideE,
    #[error("interval is not short: pole order {pole_order} at {place} does not exceed {mult}")]
    NotShort {
        place: String,
        pole_order: u32,
        mult: u32,
    },
    #[error("constant function: pole degree k = 0")]
    ConstantFunction,
    #[error("zero element")]
    ZeroElement,
    #[error("place is not split")]
    NotSplit,
    #[error("internal parity error: inert prime with odd norm valuation {0}")]
    InternalParityError(u32),
    #[error("expected {expected} coordinates, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("budget exceeded: {needed} elements requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("place table of degree {table} is too small for pole degree {needed}")]
    TableTooSmall { table: u32, needed: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    /// Short stable identifier used in machine-readable error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::FieldTooLarge(_) => "FieldTooLarge",
            Error::BadModulus(_) => "BadModulus",
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch => "FieldMismatch",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::ConstantPolynomial => "ConstantPolynomial",
            Error::NotIrreducible => "NotIrreducible",
            Error::SingularModel => "SingularModel",
            Error::EvenDegree(_) => "EvenDegree",
            Error::NonMonicModel => "NonMonicModel",
            Error::CharTwoUnsupported => "CharTwoUnsupported",
            Error::UnsupportedDivisor(_) => "UnsupportedDivisor",
            Error::PoleOutsideE => "PoleOutsideE",
            Error::NotShort { .. } => "NotShort",
            Error::ConstantFunction => "ConstantFunction",
            Error::ZeroElement => "ZeroElement",
            Error::NotSplit => "NotSplit",
            Error::InternalParityError(_) => "InternalParityError",
            Error::WrongArity { .. } => "WrongArity",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::TableTooSmall { .. } => "TableTooSmall",
            Error::Parse(_) => "Parse",
            Error::InvalidSpec(_) => "InvalidSpec",
        }
    }
}
