use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("invalid element name `{0}`")]
    InvalidElementName(String),

    #[error("universe must be non-empty")]
    EmptyUniverse,

    #[error("`{symbol}` has arity {expected} but was used with {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown relation symbol `{0}`")]
    UnknownSymbol(String),

    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),

    #[error("variable `{0}` is not declared")]
    UnknownVariable(String),

    #[error("variable `{0}` is declared twice")]
    DuplicateVariable(String),

    #[error("variable `{0}` is both free and bound")]
    FreeAndBound(String),

    #[error("variable name `{0}` is reserved (names starting with `_` are generated)")]
    ReservedName(String),

    #[error("free variables differ: {left:?} vs {right:?}")]
    FreeVariableMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },

    #[error("assignment does not cover exactly the free variables {expected:?}")]
    DomainMismatch { expected: Vec<String> },

    #[error("sort violation: {0}")]
    SortViolation(String),

    #[error("operation and relation live on different universes")]
    UniverseMismatch,

    #[error("equivalence relations live on carriers of different size")]
    CarrierMismatch,

    #[error("empty family")]
    EmptyFamily,

    #[error("element `{element}` is not a {k}-component product name")]
    NotProductElement { element: String, k: usize },

    #[error("operation `{0}` is not total or leaves the universe")]
    InvalidOperation(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("pentagon axiom {0} fails")]
    PentagonAxiom(u8),

    #[error("invalid package:\n  - {}", .0.join("\n  - "))]
    InvalidPackage(Vec<String>),

    #[error("unbound lattice variable `{0}`")]
    UnboundVariable(String),

    #[error("{0}")]
    Invalid(String),
}
