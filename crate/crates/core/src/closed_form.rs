//! Closed-form inclusive frequencies as exact polynomials in `r`.
//!
//! Each class's count is a sum of terms of the form
//! `coefficient * C(a1*r + b1, k1) * C(a2*r + b2, k2) * ...`. Terms are kept
//! separate, each tagged with whether it contributes to the leading
//! asymptotic term, so every addend can be audited on its own.
//!
//! The straight-flush and straight formulas are only valid from `r = 6` and
//! `r = 8` respectively; the rest hold from `r = 5`. Below those thresholds
//! the enumerator is authoritative. Hands with nothing but a high card have
//! no closed form here; see [`crate::enumerate::Enumerator::nothing_count`].

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::deck::{HandClass, MIN_RANKS};
use crate::error::{Error, Result};
use crate::exact::{binom, binom_poly, rational_to_count, Count, RationalPolynomial};

/// `C(a*r + b, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinomFactor {
    pub a: i64,
    pub b: i64,
    pub k: u32,
}

/// One addend of a closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coefficient: BigRational,
    pub factors: Vec<BinomFactor>,
    /// Contributes to the leading asymptotic term.
    pub leading_relevant: bool,
}

impl Term {
    pub fn polynomial(&self) -> RationalPolynomial {
        self.factors.iter().fold(
            RationalPolynomial::constant(self.coefficient.clone()),
            |acc, f| acc * binom_poly(f.a, f.b, f.k),
        )
    }

    /// Evaluates the term with integer binomials at `r`.
    pub fn eval_direct(&self, r: u32) -> BigRational {
        let r = i64::from(r);
        self.factors
            .iter()
            .fold(self.coefficient.clone(), |acc, f| {
                let c = binom(f.a * r + f.b, i64::from(f.k)).expect("k is non-negative");
                acc * BigRational::from_integer(BigInt::from(c))
            })
    }
}

/// The closed form of one hand class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaEntry {
    pub hand_class: HandClass,
    pub terms: Vec<Term>,
    pub polynomial: RationalPolynomial,
    pub min_valid_r: u32,
    /// `(coefficient, degree)` of the expanded polynomial's leading term.
    pub leading: (BigRational, usize),
}

impl FormulaEntry {
    fn new(hand_class: HandClass, min_valid_r: u32, terms: Vec<Term>) -> FormulaEntry {
        let polynomial = terms
            .iter()
            .fold(RationalPolynomial::zero(), |acc, t| acc + t.polynomial());
        let leading = polynomial.leading().expect("closed forms are nonzero");
        FormulaEntry {
            hand_class,
            terms,
            polynomial,
            min_valid_r,
            leading,
        }
    }

    /// Polynomial made of the leading-relevant terms only.
    pub fn leading_relevant_polynomial(&self) -> RationalPolynomial {
        self.terms
            .iter()
            .filter(|t| t.leading_relevant)
            .fold(RationalPolynomial::zero(), |acc, t| acc + t.polynomial())
    }

    pub fn is_valid_at(&self, r: u32) -> bool {
        r >= self.min_valid_r
    }

    /// Exact value at `r`, without the validity check.
    pub fn eval(&self, r: u32) -> Count {
        let v = self.polynomial.eval_int(&BigInt::from(r));
        rational_to_count(&v).unwrap_or_else(|| {
            panic!(
                "{} closed form is not a non-negative integer at r = {r}: {v}",
                self.hand_class
            )
        })
    }
}

struct TermBuilder {
    coefficient: BigRational,
    factors: Vec<BinomFactor>,
    leading_relevant: bool,
}

fn term(coefficient: i64) -> TermBuilder {
    TermBuilder {
        coefficient: BigRational::from_integer(coefficient.into()),
        factors: Vec::new(),
        leading_relevant: false,
    }
}

fn half() -> TermBuilder {
    TermBuilder {
        coefficient: BigRational::new(BigInt::one(), BigInt::from(2)),
        ..term(1)
    }
}

impl TermBuilder {
    /// `C(a*r + b, k)`
    fn c(mut self, a: i64, b: i64, k: u32) -> Self {
        self.factors.push(BinomFactor { a, b, k });
        self
    }

    /// constant `C(n, k)`
    fn cn(self, n: i64, k: u32) -> Self {
        self.c(0, n, k)
    }

    fn times(mut self, m: i64) -> Self {
        self.coefficient *= BigRational::from_integer(m.into());
        self
    }

    fn bold(mut self) -> Self {
        self.leading_relevant = true;
        self
    }

    fn done(self) -> Term {
        Term {
            coefficient: self.coefficient,
            factors: self.factors,
            leading_relevant: self.leading_relevant,
        }
    }
}

fn pow4(e: u32) -> i64 {
    4i64.pow(e)
}

fn build(class: HandClass) -> FormulaEntry {
    use HandClass::*;
    let t = |b: TermBuilder| b.done();
    match class {
        HighCard => FormulaEntry::new(HighCard, MIN_RANKS, vec![t(term(1).c(4, 0, 7).bold())]),
        StraightFlush => FormulaEntry::new(
            StraightFlush,
            6,
            vec![
                t(term(1).cn(4, 1).cn(2, 1).c(4, -6, 2)),
                t(term(1).cn(4, 1).c(1, -5, 1).c(4, -7, 2).bold()),
                t(term(1).cn(4, 1).cn(2, 1).c(4, -7, 1)),
                t(term(1).cn(4, 1).c(1, -6, 1).c(4, -8, 1)),
                t(term(1).cn(4, 1).c(1, -5, 1)),
            ],
        ),
        Straight => FormulaEntry::new(
            Straight,
            8,
            vec![
                t(term(pow4(5)).c(1, -5, 1).c(4, -28, 2).bold()),
                t(term(pow4(5)).cn(2, 1).c(4, -24, 2)),
                t(term(pow4(4)).c(1, -5, 1).cn(5, 1).cn(4, 2).c(4, -28, 1)),
                t(term(pow4(4)).cn(2, 1).cn(5, 1).cn(4, 2).c(4, -24, 1)),
                t(term(pow4(3)).c(1, -5, 1).cn(5, 2).cn(4, 2).cn(4, 2)),
                t(term(pow4(3)).cn(2, 1).cn(5, 2).cn(4, 2).cn(4, 2)),
                t(term(pow4(4)).c(1, -3, 1).cn(5, 1).cn(4, 3)),
                t(term(pow4(6)).c(1, -6, 1).c(4, -32, 1)),
                t(term(pow4(6)).cn(2, 1).c(4, -28, 1)),
                t(term(pow4(5)).c(1, -6, 1).cn(6, 1).cn(4, 2)),
                t(term(pow4(5)).cn(2, 1).cn(6, 1).cn(4, 2)),
                t(term(pow4(7)).c(1, -7, 1)),
                t(term(pow4(7)).cn(2, 1)),
            ],
        ),
        FourOfAKind => FormulaEntry::new(
            FourOfAKind,
            MIN_RANKS,
            vec![t(term(1).c(1, 0, 1).c(4, -4, 3).bold())],
        ),
        FullHouse => FormulaEntry::new(
            FullHouse,
            MIN_RANKS,
            vec![
                t(term(1).c(1, 0, 1).c(1, -1, 1).cn(4, 2).c(1, -2, 1).cn(4, 1)),
                t(half()
                    .c(1, 0, 1)
                    .cn(4, 3)
                    .c(1, -1, 1)
                    .cn(4, 3)
                    .c(1, -2, 1)
                    .cn(4, 1)),
                t(half()
                    .c(1, 0, 1)
                    .cn(4, 3)
                    .c(1, -1, 1)
                    .cn(4, 2)
                    .c(1, -2, 1)
                    .cn(4, 2)),
                t(half()
                    .c(1, 0, 1)
                    .cn(4, 3)
                    .c(1, -1, 1)
                    .cn(4, 2)
                    .c(1, -2, 1)
                    .cn(4, 1)
                    .c(1, -3, 1)
                    .cn(4, 1)
                    .bold()),
                t(term(1).c(1, 0, 1).c(1, -1, 1).cn(4, 3)),
            ],
        ),
        ThreeOfAKind => FormulaEntry::new(ThreeOfAKind, MIN_RANKS, {
            let mut terms = shared_trips_and_pairs();
            terms.insert(4, t(term(pow4(5)).c(1, 0, 5).cn(5, 1).bold()));
            terms
        }),
        TwoPair => FormulaEntry::new(TwoPair, MIN_RANKS, {
            let mut terms = shared_trips_and_pairs();
            terms.push(t(term(1)
                .c(1, 0, 4)
                .cn(4, 1)
                .cn(4, 2)
                .cn(4, 2)
                .cn(4, 2)
                .cn(4, 1)));
            terms.push(t(term(1)
                .c(1, 0, 5)
                .cn(5, 2)
                .cn(4, 2)
                .cn(4, 2)
                .cn(4, 1)
                .cn(4, 1)
                .cn(4, 1)
                .bold()));
            terms
        }),
        OnePair => FormulaEntry::new(
            OnePair,
            MIN_RANKS,
            vec![
                t(term(1).c(4, 0, 7).bold()),
                t(term(-pow4(7)).c(1, 0, 7).bold()),
            ],
        ),
        Flush => FormulaEntry::new(
            Flush,
            MIN_RANKS,
            vec![
                t(term(1).cn(4, 1).c(1, 0, 5).c(3, 0, 2).bold()),
                t(term(1).cn(4, 1).c(1, 0, 6).c(3, 0, 1).bold()),
                t(term(1).cn(4, 1).c(1, 0, 7).bold()),
            ],
        ),
    }
}

/// Terms common to the three-of-a-kind and two-pair forms: every 7-card
/// rank pattern holding a trip or quad alongside another repeated rank, plus
/// quads with singletons.
fn shared_trips_and_pairs() -> Vec<Term> {
    vec![
        term(2).c(1, 0, 2).cn(4, 3).done(),
        term(1)
            .c(1, 0, 3)
            .cn(3, 1)
            .cn(4, 3)
            .cn(4, 3)
            .cn(4, 1)
            .done(),
        term(1)
            .c(1, 0, 4)
            .cn(4, 2)
            .cn(2, 1)
            .cn(4, 3)
            .cn(4, 2)
            .cn(4, 1)
            .cn(4, 1)
            .done(),
        term(1)
            .c(1, 0, 3)
            .cn(3, 1)
            .cn(4, 3)
            .cn(4, 2)
            .cn(4, 2)
            .done(),
        term(1).times(6).c(1, 0, 3).cn(4, 2).cn(4, 1).done(),
        term(pow4(3)).c(1, 0, 4).cn(4, 1).done(),
    ]
}

fn table() -> &'static [FormulaEntry; 9] {
    static TABLE: OnceLock<[FormulaEntry; 9]> = OnceLock::new();
    TABLE.get_or_init(|| HandClass::ALL.map(build))
}

/// The closed form for `class`, fully expanded.
pub fn freq_poly(class: HandClass) -> &'static FormulaEntry {
    &table()[class.index()]
}

/// Exact inclusive count of hands containing `class` in a deck of `r` ranks.
///
/// Errors below the formula's validity threshold instead of returning a
/// number that would be wrong there.
pub fn freq_closed(class: HandClass, r: u32) -> Result<Count> {
    if r < MIN_RANKS {
        return Err(Error::InvalidRankCount(r));
    }
    let entry = freq_poly(class);
    if !entry.is_valid_at(r) {
        return Err(Error::OutsideValidity {
            class,
            r,
            min_valid_r: entry.min_valid_r,
        });
    }
    Ok(entry.eval(r))
}

/// Inclusive counts of all nine classes via closed forms.
pub fn freq_closed_all(r: u32) -> Result<[Count; 9]> {
    let mut out: [Count; 9] = Default::default();
    for h in HandClass::ALL {
        out[h.index()] = freq_closed(h, r)?;
    }
    Ok(out)
}

/// Largest validity threshold over all classes.
pub fn max_min_valid_r() -> u32 {
    table()
        .iter()
        .map(|e| e.min_valid_r)
        .max()
        .unwrap_or(MIN_RANKS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use HandClass::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn count(n: u64) -> Count {
        Count::from(n)
    }

    #[test]
    fn standard_deck_values() {
        assert_eq!(freq_closed(FourOfAKind, 13).unwrap(), count(224_848));
        assert_eq!(freq_closed(StraightFlush, 13).unwrap(), count(41_584));
        assert_eq!(freq_closed(Flush, 13).unwrap(), count(4_047_644 + 41_584));
        assert_eq!(freq_closed(HighCard, 13).unwrap(), count(133_784_560));
    }

    #[test]
    fn one_pair_is_total_minus_distinct_ranks() {
        // every 7-card hand with 7 distinct ranks: C(13,7) rank sets, 4^7 suitings
        let oracle = 133_784_560u64 - 4u64.pow(7) * 1716;
        assert_eq!(oracle, 105_669_616);
        assert_eq!(freq_closed(OnePair, 13).unwrap(), count(oracle));
    }

    #[test]
    fn full_house_cross_check() {
        // showdown FH plus hands with both a full house and quads
        // (quads + trips, quads + pair + single); FH never meets SF
        let c48_3 = 17_296u64;
        let quads_only = 220 * 64; // C(12,3) singleton ranks, 4 suits each
        let both = 13 * (c48_3 - quads_only);
        assert_eq!(freq_closed(FullHouse, 13).unwrap(), count(3_473_184 + both));
        assert_eq!(freq_closed(FullHouse, 13).unwrap(), count(3_514_992));
    }

    #[test]
    fn leading_terms() {
        let expected = [
            (StraightFlush, q(32, 1), 3),
            (Straight, q(8192, 1), 3),
            (FourOfAKind, q(32, 3), 4),
            (FullHouse, q(192, 1), 4),
            (ThreeOfAKind, q(128, 3), 5),
            (TwoPair, q(192, 1), 5),
            (OnePair, q(256, 5), 6),
            (Flush, q(211, 1260), 7),
        ];
        for (h, c, d) in expected {
            assert_eq!(freq_poly(h).leading, (c, d), "{h}");
        }
    }

    #[test]
    fn leading_relevant_terms_carry_the_leading_term() {
        for h in HandClass::ALL {
            let e = freq_poly(h);
            let bold = e.leading_relevant_polynomial();
            assert_eq!(bold.leading(), Some(e.leading.clone()), "{h}");
        }
    }

    #[test]
    fn one_pair_cancels_degree_seven() {
        let p = &freq_poly(OnePair).polynomial;
        assert!(p.coeff(7).is_zero());
        assert_eq!(p.degree(), Some(6));
    }

    #[test]
    fn polynomial_matches_termwise_evaluation() {
        for h in HandClass::ALL {
            let e = freq_poly(h);
            for r in e.min_valid_r..e.min_valid_r + 60 {
                let direct: BigRational = e.terms.iter().map(|t| t.eval_direct(r)).sum();
                assert_eq!(
                    e.polynomial.eval_int(&BigInt::from(r)),
                    direct,
                    "{h} at r = {r}"
                );
            }
        }
    }

    #[test]
    fn integer_valued_on_validity_range() {
        for h in HandClass::ALL {
            let e = freq_poly(h);
            for r in e.min_valid_r..=e.min_valid_r + 100 {
                let v = e.polynomial.eval_int(&BigInt::from(r));
                assert!(v.is_integer(), "{h} at r = {r} gives {v}");
            }
        }
    }

    #[test]
    fn containment_monotone() {
        for r in 8..=100 {
            let f = freq_closed_all(r).unwrap();
            let g = |h: HandClass| &f[h.index()];
            assert!(g(TwoPair) <= g(OnePair));
            assert!(g(ThreeOfAKind) <= g(OnePair));
            assert!(g(FullHouse) <= g(ThreeOfAKind));
            assert!(g(FourOfAKind) <= g(ThreeOfAKind).min(g(TwoPair)));
            assert!(g(StraightFlush) <= g(Straight).min(g(Flush)));
        }
    }

    #[test]
    fn validity_errors() {
        assert!(matches!(
            freq_closed(Straight, 7),
            Err(Error::OutsideValidity { min_valid_r: 8, .. })
        ));
        assert!(matches!(
            freq_closed(StraightFlush, 5),
            Err(Error::OutsideValidity { min_valid_r: 6, .. })
        ));
        assert!(freq_closed(StraightFlush, 6).is_ok());
        assert!(matches!(
            freq_closed(Flush, 4),
            Err(Error::InvalidRankCount(4))
        ));
        assert_eq!(max_min_valid_r(), 8);
    }
}
