//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised while lexing or parsing a term expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte offset {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the source text.
    pub position: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownCharacter,
    MalformedNumber,
    UnexpectedToken,
    UnbalancedParen,
    UnknownFunction,
    FactorialOfNonInteger,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ParseErrorKind::UnknownCharacter => "unknown character",
            ParseErrorKind::MalformedNumber => "malformed number",
            ParseErrorKind::UnexpectedToken => "unexpected token",
            ParseErrorKind::UnbalancedParen => "unbalanced parenthesis",
            ParseErrorKind::UnknownFunction => "unknown function",
            ParseErrorKind::FactorialOfNonInteger => {
                "factorial applied to a form not provably integer-valued"
            }
        };
        f.write_str(s)
    }
}

/// Errors raised while evaluating a term expression at a concrete index.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero while evaluating term at n = {n}")]
    DivisionByZero { n: u64 },
    #[error("intermediate magnitude exceeds the configured cap at n = {n}")]
    Overflow { n: u64 },
    #[error("domain error at n = {n}: {reason}")]
    Domain { n: u64, reason: &'static str },
    #[error("operation requires transcendental evaluation mode: {0}")]
    ExactUnsupported(&'static str),
}

/// Errors raised by series-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("non-positive term a_{n}; analysis requires a positive series")]
    NonPositiveTerm { n: u64 },
    #[error("non-positive parameter p_{n}; Kummer's test requires a positive parameter series")]
    NonPositiveParam { n: u64 },
    #[error("tail bound not applicable: series is known divergent")]
    TailNotApplicable,
    #[error("operation requires start index 1, series starts at {start}")]
    StartIndexUnsupported { start: u64 },
}

/// Errors raised by witness construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("series has no certified tail provider (attach a catalog tail bound)")]
    TailNotCertified,
    #[error("no index below the search horizon satisfies the tail inequality")]
    SearchExhausted,
    #[error("index subsequence does not cover the requested horizon")]
    InsufficientXi,
    #[error("horizon reached before block sum exceeded {block} (block search exhausted)")]
    BlockSearchExhausted { block: u64 },
    #[error("series is not certified divergent; construction requires a divergent series")]
    NotDivergent,
    #[error("series is not certified convergent; construction requires a convergent series")]
    NotConvergent,
    #[error("p_{n} is not positive; the weighted total was underestimated")]
    NonPositiveP { n: u64 },
    #[error("exact weighted total for the series is not available")]
    TotalNotAvailable,
    #[error("B_{n} is zero; reindex to the support subsequence before construction")]
    ZeroB { n: u64 },
    #[error("Kummer margin violated at n = {n}: statistic below the requested c")]
    MarginViolated { n: u64 },
}
