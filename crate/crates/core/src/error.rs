use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {position} in `{input}`: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },

    /// A multiplication, addition or action table failed validation.
    #[error("invalid table: {0}")]
    Table(String),

    #[error("element index {index} out of range for structure of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("unknown element name `{0}`")]
    UnknownElement(String),

    #[error("operands live over different rings")]
    RingMismatch,

    #[error("operands live in different modules")]
    ModuleMismatch,

    #[error("empty generator list")]
    EmptyGenerators,

    #[error("ideal is not two-sided: {0}")]
    NotTwoSided(String),

    #[error("not a submodule: {0}")]
    NotSubmodule(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The ambient module is not torsion-free, so relative closures are undefined.
    #[error("module `{0}` is not torsion-free for this torsion notion")]
    NotInClass(String),

    #[error("left ideal is not a member of the torsion notion")]
    NotMember,

    #[error("not a Δ-axiom over a quasivariety generating R-Mod: row {row}, {coefficient} = {value} ≠ 0")]
    NotReducible {
        row: usize,
        coefficient: String,
        value: usize,
    },

    /// An internal consistency assertion failed. For valid inputs this would
    /// be a counterexample to the classification theory, so it is never
    /// swallowed.
    #[error("consistency fault: {0}")]
    Fault(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
