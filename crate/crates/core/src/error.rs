use std::fmt;

use thiserror::Error;

/// One of the standing assumptions on `(p, p', q, w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Assumption {
    /// `p = 2p' + 1`
    OddSplit,
    /// `1 < q <= p'`
    HoleCountRange,
    /// `gcd(q, p) = 1`
    Coprime,
    PrimePeriod,
    /// `|w| = p`
    WordLength,
    /// `w_0` is a letter
    FirstLetter,
    /// `w_{p-1}` is a letter
    LastLetter,
    /// `__` is not a factor of `w`
    AdjacentHoles,
    /// `|w|_hole = q`
    HoleCount,
    /// `w^Z` has least lazy period `p`
    LazyPeriod,
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Assumption::OddSplit => "p = 2p' + 1",
            Assumption::HoleCountRange => "1 < q <= p'",
            Assumption::Coprime => "gcd(q, p) = 1",
            Assumption::PrimePeriod => "p prime",
            Assumption::WordLength => "|w| = p",
            Assumption::FirstLetter => "w_0 is not a hole",
            Assumption::LastLetter => "w_{p-1} is not a hole",
            Assumption::AdjacentHoles => "w has no two adjacent holes",
            Assumption::HoleCount => "w has exactly q holes",
            Assumption::LazyPeriod => "w^Z has least lazy period p",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("standing assumptions violated: {}", join(.0))]
    AssumptionViolated(Vec<Assumption>),
    #[error("parse error: {0}")]
    Parse(String),

    #[error("window has no hole at a nonnegative index")]
    NoAnchor,
    #[error("fill sequence does not cover index {0}")]
    InsufficientFill(i64),
    #[error("window of {cells} cells exceeds the budget of {budget}")]
    RangeTooLarge { cells: u64, budget: u64 },
    #[error("cell {index} still undetermined after {cap} substitution steps")]
    DepthCapExceeded { index: i64, cap: u32 },
    #[error("the point has no holes at this depth")]
    NoHoles,
    #[error("factor enumeration for length {0} did not stabilize within the budget")]
    Unstable(usize),
    #[error("window is not aligned with w^Z at phase 0 (cell {0})")]
    PhaseMismatch(i64),

    #[error("window too short to determine its phase; need length {required}")]
    WindowTooShort { required: usize },
    #[error("window is not consistent with any phase; it is not a factor of the subshift")]
    NotInLanguage,
    #[error("no detection constant up to {cap} for period {period}")]
    NotVerified { period: u64, cap: u64 },
    #[error("induced phase shifts disagree ({0} vs {1}); the rule is not an endomorphism")]
    Inconsistent(u64, u64),

    #[error("word {0} is missing from the rule table")]
    UnknownWord(String),
    #[error("image of {word} is {image}, which is not a factor")]
    ClosureFailure { word: String, image: String },
    #[error("no word of length <= {0} witnesses the bit flip leaving the language")]
    NotFound(usize),
    #[error("radius {0} too small for window arithmetic")]
    WindowArithmetic(usize),
    #[error("lift round trip failed: {0}")]
    RoundTripFailure(String),
    #[error("request exceeds the radius budget: {0}")]
    BudgetExceeded(String),
    #[error("residual rule recurs without being a shift map; trace: {0}")]
    NotInGroup(String),
    #[error("decomposition did not terminate within {0} lifts")]
    IterationCap(usize),

    #[error("profile has no entry for length {0}")]
    MissingEntry(usize),
    #[error("{0} is not in the lifting group (denominator is not a power of q)")]
    NotMember(String),
}

fn join(items: &[Assumption]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
