use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("out of bounds: {0}")]
    Bounds(String),
    #[error("decoration overflow: {0}")]
    Overflow(String),
    #[error("mixed grades in a homogeneous computation")]
    MixedGrade,
    #[error("input rejected: {0}")]
    Invalid(String),
    #[error("rank deficiency at grade {grade}: {msg}")]
    RankDeficiency { grade: usize, msg: String },
    #[error("grade {0} exceeds the available depth")]
    MissingGrade(usize),
    #[error("letter {0} is not registered")]
    UnregisteredLetter(String),
    #[error("side mismatch: {0}")]
    SideMismatch(String),
}

pub type Result<T> = core::result::Result<T, Error>;
