use alloc::string::String;
use core::fmt;

/// Every failure the kernel can report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    NotASubfield { from: u64, to: u64 },
    ZeroElement,
    NotSquarefree(u64),
    ZeroInput,
    ZeroPolynomial,
    Syntax { pos: usize, msg: String },
    InvalidLowerBound { product: String, at: i64 },
    NonUnitDivisor,
    RelationSearchExhausted,
    PeriodCapExceeded,
    ShiftCoprimalityViolated,
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax { pos, msg: msg.into() }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NotASubfield { from, to } => {
                write!(f, "Q(zeta_{from}) is not a subfield of Q(zeta_{to})")
            }
            Error::ZeroElement => write!(f, "zero element where a unit was required"),
            Error::NotSquarefree(d) => write!(f, "{d} is not a squarefree integer >= 2"),
            Error::ZeroInput => write!(f, "zero input"),
            Error::ZeroPolynomial => write!(f, "zero polynomial"),
            Error::Syntax { pos, msg } => write!(f, "syntax error at {pos}: {msg}"),
            Error::InvalidLowerBound { product, at } => write!(
                f,
                "invalid lower bound in {product}: multiplicand vanishes or has a pole at {at}"
            ),
            Error::NonUnitDivisor => write!(f, "division by a non-monomial tower element"),
            Error::RelationSearchExhausted => {
                write!(f, "multiplicative relation search exhausted without stabilizing")
            }
            Error::PeriodCapExceeded => write!(f, "period iteration cap exceeded"),
            Error::ShiftCoprimalityViolated => write!(f, "chain bases are not shift-coprime"),
        }
    }
}
