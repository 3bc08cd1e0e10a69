use crate::deck::HandClass;
use crate::ranking::Ranking;

/// Errors surfaced by the counting, enumeration and ranking engines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("rank count {0} is below the minimum of 5")]
    InvalidRankCount(u32),

    #[error("rank count {0} is too large for bitmask enumeration (max {max})", max = crate::deck::MAX_RANKS)]
    TooManyRanks(u32),

    #[error("invalid card: {0}")]
    InvalidCard(String),

    #[error("invalid hand: {0}")]
    InvalidHand(String),

    #[error("invalid ranking: {0}")]
    InvalidRanking(String),

    #[error("negative k in binomial coefficient: C({n}, {k})")]
    NegativeBinomial { n: i64, k: i64 },

    #[error(
        "closed form for {class} is only valid for r >= {min_valid_r} (got r = {r}); use enumeration"
    )]
    OutsideValidity {
        class: HandClass,
        r: u32,
        min_valid_r: u32,
    },

    #[error("enumeration of r = {r} exceeds the routine ceiling of {ceiling}; enable long runs to proceed")]
    CeilingExceeded { r: u32, ceiling: u32 },

    #[error("certification requires from_r >= {min} (got {got})")]
    CertificationRange { got: u32, min: u32 },

    #[error("no fixpoint or two-cycle after {} showdown iterations", .trajectory.len() - 1)]
    IterationExhausted { trajectory: Vec<Ranking> },

    #[error("showdown iteration entered a cycle of length {length}")]
    LongCycle {
        length: usize,
        trajectory: Vec<Ranking>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
