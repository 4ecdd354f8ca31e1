use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown proposition `{0}`")]
    UnknownProp(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("malformed normal form: {0}")]
    InvalidNormalForm(String),

    #[error("formula outside the supported fragment: {0}")]
    NotInFragment(String),

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("not a constructed example: {0}")]
    NotAnExample(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
