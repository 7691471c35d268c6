use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index of {0} does not fit the 64-bit enumeration range")]
    IndexOverflow(String),
    #[error("unknown ideal `{0}`")]
    UnknownIdeal(String),
    #[error("ideal `{0}` is not tall")]
    NotTall(String),
    #[error("ideal `{0}` has no non-p+ witness")]
    NoWitness(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("membership of {0} is not decided")]
    Undecided(String),
    #[error("points {0} cannot be separated within the equality budget")]
    Inseparable(String),
    #[error("basic open set is empty: {0}")]
    EmptyOpen(String),
    #[error("unknown lemma `{0}`")]
    UnknownLemma(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("certificate schema mismatch: {0}")]
    Schema(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
