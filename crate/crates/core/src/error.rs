use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid net: {0}")]
    InvalidNet(String),

    #[error("invalid marking: {0}")]
    InvalidMarking(String),

    #[error("transition `{0}` is not enabled")]
    NotEnabled(String),

    #[error("state space exceeded the cap of {cap} markings")]
    ExplorationOverflow { cap: usize },

    #[error("net is unbounded: place `{place}` exceeded {bound} tokens")]
    Unbounded { place: String, bound: u32 },

    #[error("undecided: {0}")]
    Undecided(String),

    #[error("no final marking is reachable")]
    NoAlignment,

    #[error("more than {cap} optimal alignments")]
    EnumerationOverflow { cap: usize },

    #[error("measure precondition violated: {0}")]
    Precondition(String),

    #[error("unknown corpus entry `{0}`")]
    UnknownCorpusEntry(String),

    #[error("corpus entry `{name}` is a {actual}, not a {expected}")]
    CorpusKind {
        name: String,
        expected: &'static str,
        actual: &'static str,
    },

    #[error("alphabet must not be empty")]
    EmptyAlphabet,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
