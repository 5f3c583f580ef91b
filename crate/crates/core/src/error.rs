use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Tables of the wrong shape, out-of-range entries, cyclic orders.
    #[error("malformed structure: {0}")]
    Structure(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A monoid that is well-shaped but breaks a stabilisation monoid axiom.
    #[error("not a stabilisation monoid: {0}")]
    Axioms(String),

    #[error("{what} has {size} elements, above the limit of {limit}")]
    CapExceeded { what: String, size: usize, limit: usize },

    #[error("word of length {len} exceeds the oracle limit {limit}")]
    OracleScope { len: usize, limit: usize },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("word is not J-smooth: {0}")]
    NotSmooth(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("formula has free variables: {}", .0.join(", "))]
    FreeVariables(Vec<String>),

    #[error("not a characteristic recogniser: {0}")]
    NotCharacteristic(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Compilation of a subformula failed; carries the subformula text.
    #[error("while compiling `{formula}`: {source}")]
    Compile {
        formula: String,
        #[source]
        source: Box<Error>,
    },
}
