//! Exact hand-type frequencies and rankings for poker played with seven-card
//! hands from a deck of `r` ranks and four suits.
//!
//! - [`deck`]: cards, hands, hand classes and the inclusive containment test
//! - [`exact`]: big-integer binomials, rational polynomials, sign certificates
//! - [`closed_form`]: per-class frequency formulas as polynomials in `r`
//! - [`enumerate`]: exhaustive multi-threaded sweep over all hands
//! - [`ranking`]: frequency/showdown rankings, breakpoints and stability

pub mod closed_form;
pub mod deck;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod ranking;

pub use closed_form::{freq_closed, freq_poly, FormulaEntry};
pub use deck::{best_class, classify, Card, ContainmentProfile, HandClass, HandSet};
pub use enumerate::{CountMode, CountTable, Enumerator, ProfileHistogram};
pub use error::{Error, Result};
pub use exact::{binom, binom_poly, certify_sign_permanence, Count, RationalPolynomial};
pub use ranking::{
    certify_pair, certify_stability, BreakpointReport, IterationKind, IterationOutcome, Ranking,
    RankingEngine,
};
