//! Cards, 7-card hands over a deck of `4r` cards, the nine hand classes and
//! the inclusive containment test.
//!
//! A 7-card hand *contains* a class when some 5-card subset of it forms a
//! hand of that class. Containment is inclusive: a hand holding a straight
//! flush also contains a straight and a flush, and four of a kind counts as
//! containing two pair.
//!
//! Ranks are 0-indexed. The top rank `r - 1` also plays low, so a deck with
//! `r` ranks has `r - 3` distinct straight windows (the extra one being the
//! wheel `{r-1, 0, 1, 2, 3}`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ranking::Ranking;

/// Smallest supported rank count; below it some classes cannot occur.
pub const MIN_RANKS: u32 = 5;

/// Largest rank count the bitmask evaluator supports.
pub const MAX_RANKS: u32 = 32;

pub const SUITS: u8 = 4;
pub const HAND_SIZE: usize = 7;

/// The nine hand classes, in canonical declaration order.
///
/// The declaration order is used for serialization and tie-breaking only. It
/// says nothing about how rare a class is for a given deck.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HandClass {
    HighCard,
    OnePair,
    TwoPair,
    ThreeOfAKind,
    Straight,
    Flush,
    FullHouse,
    FourOfAKind,
    StraightFlush,
}

impl HandClass {
    pub const ALL: [HandClass; 9] = [
        HandClass::HighCard,
        HandClass::OnePair,
        HandClass::TwoPair,
        HandClass::ThreeOfAKind,
        HandClass::Straight,
        HandClass::Flush,
        HandClass::FullHouse,
        HandClass::FourOfAKind,
        HandClass::StraightFlush,
    ];

    pub const COUNT: usize = 9;

    #[inline]
    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<HandClass> {
        Self::ALL.get(index).copied()
    }

    pub const fn abbrev(self) -> &'static str {
        match self {
            HandClass::HighCard => "HC",
            HandClass::OnePair => "1P",
            HandClass::TwoPair => "2P",
            HandClass::ThreeOfAKind => "3X",
            HandClass::Straight => "ST",
            HandClass::Flush => "FL",
            HandClass::FullHouse => "FH",
            HandClass::FourOfAKind => "4X",
            HandClass::StraightFlush => "SF",
        }
    }
}

impl fmt::Display for HandClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.abbrev())
    }
}

impl FromStr for HandClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        HandClass::ALL
            .iter()
            .copied()
            .find(|h| h.abbrev().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidRanking(format!("unknown hand class `{s}`")))
    }
}

/// A single card. `rank` is in `[0, r)` and `suit` in `[0, 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Card {
    pub rank: u8,
    pub suit: u8,
}

impl Card {
    pub fn new(rank: u8, suit: u8, ranks: u32) -> Result<Card> {
        check_rank_count(ranks)?;
        if u32::from(rank) >= ranks {
            return Err(Error::InvalidCard(format!(
                "rank {rank} outside [0, {ranks})"
            )));
        }
        if suit >= SUITS {
            return Err(Error::InvalidCard(format!("suit {suit} outside [0, 4)")));
        }
        Ok(Card { rank, suit })
    }

    /// Dense index in `[0, 4r)`; suit varies fastest.
    #[inline]
    pub fn index(self) -> u32 {
        u32::from(self.rank) * u32::from(SUITS) + u32::from(self.suit)
    }

    #[inline]
    pub fn from_index(index: u32) -> Card {
        Card {
            rank: (index / u32::from(SUITS)) as u8,
            suit: (index % u32::from(SUITS)) as u8,
        }
    }
}

pub(crate) fn check_rank_count(ranks: u32) -> Result<()> {
    if ranks < MIN_RANKS {
        return Err(Error::InvalidRankCount(ranks));
    }
    if ranks > MAX_RANKS {
        return Err(Error::TooManyRanks(ranks));
    }
    Ok(())
}

/// An unordered hand of seven distinct cards.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HandSet {
    cards: [Card; HAND_SIZE],
    ranks: u32,
}

impl HandSet {
    pub fn new(cards: &[Card], ranks: u32) -> Result<HandSet> {
        check_rank_count(ranks)?;
        let cards: [Card; HAND_SIZE] = cards.try_into().map_err(|_| {
            Error::InvalidHand(format!("expected {HAND_SIZE} cards, got {}", cards.len()))
        })?;
        for c in &cards {
            Card::new(c.rank, c.suit, ranks)?;
        }
        let mut sorted = cards;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidHand("duplicate card".into()));
        }
        Ok(HandSet {
            cards: sorted,
            ranks,
        })
    }

    /// Builds a hand from `(rank, suit)` pairs.
    pub fn from_pairs(pairs: &[(u8, u8)], ranks: u32) -> Result<HandSet> {
        let cards: Vec<Card> = pairs
            .iter()
            .map(|&(rank, suit)| Card { rank, suit })
            .collect();
        HandSet::new(&cards, ranks)
    }

    pub fn cards(&self) -> &[Card; HAND_SIZE] {
        &self.cards
    }

    pub fn ranks(&self) -> u32 {
        self.ranks
    }

    /// One rank bitmask per suit.
    pub fn suit_masks(&self) -> [u32; 4] {
        let mut masks = [0u32; 4];
        for c in &self.cards {
            masks[usize::from(c.suit)] |= 1 << c.rank;
        }
        masks
    }
}

/// The set of hand classes present in a 7-card hand.
///
/// Stored as a 9-bit set indexed by [`HandClass::index`]. A well-formed
/// profile always contains `HC` and respects the containment closure
/// (see [`ContainmentProfile::is_closed`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ContainmentProfile(u16);

impl ContainmentProfile {
    /// Number of distinct bit patterns a profile can take.
    pub const SPACE: usize = 1 << HandClass::COUNT;

    pub const fn from_bits(bits: u16) -> ContainmentProfile {
        ContainmentProfile(bits & (Self::SPACE as u16 - 1))
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    pub fn from_classes(classes: &[HandClass]) -> ContainmentProfile {
        let mut p = ContainmentProfile::default();
        for &h in classes {
            p.insert(h);
        }
        p
    }

    #[inline]
    pub fn contains(self, class: HandClass) -> bool {
        self.0 & (1 << class.index()) != 0
    }

    #[inline]
    pub fn insert(&mut self, class: HandClass) {
        self.0 |= 1 << class.index();
    }

    pub fn iter(self) -> impl Iterator<Item = HandClass> {
        HandClass::ALL
            .into_iter()
            .filter(move |&h| self.contains(h))
    }

    /// Checks the structural implications every real hand satisfies.
    pub fn is_closed(self) -> bool {
        use HandClass::*;
        let implies = |a: HandClass, b: HandClass| !self.contains(a) || self.contains(b);
        self.contains(HighCard)
            && implies(StraightFlush, Straight)
            && implies(StraightFlush, Flush)
            && implies(FourOfAKind, ThreeOfAKind)
            && implies(FourOfAKind, TwoPair)
            && implies(FullHouse, ThreeOfAKind)
            && implies(FullHouse, TwoPair)
            && implies(ThreeOfAKind, OnePair)
            && implies(TwoPair, OnePair)
    }
}

impl fmt::Display for ContainmentProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, h) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{h}")?;
        }
        f.write_str("}")
    }
}

/// True iff the five distinct `ranks` form a straight in a deck of `r`
/// ranks, counting the wheel `{r-1, 0, 1, 2, 3}`.
pub fn is_straight_ranks(ranks: &[u32], r: u32) -> Result<bool> {
    check_rank_count(r)?;
    if ranks.len() != 5 {
        return Err(Error::InvalidHand(format!(
            "straight test needs 5 ranks, got {}",
            ranks.len()
        )));
    }
    let mut mask = 0u32;
    for &x in ranks {
        if x >= r {
            return Err(Error::InvalidCard(format!("rank {x} outside [0, {r})")));
        }
        if mask & (1 << x) != 0 {
            return Err(Error::InvalidHand(format!("rank {x} repeated")));
        }
        mask |= 1 << x;
    }
    Ok(has_straight(mask, r))
}

/// Whether a rank bitmask holds five consecutive ranks (wheel included).
#[inline]
pub fn has_straight(mask: u32, r: u32) -> bool {
    let run = mask & (mask >> 1) & (mask >> 2) & (mask >> 3) & (mask >> 4);
    let wheel = (1u32 << (r - 1)) | 0b1111;
    run != 0 || mask & wheel == wheel
}

/// Classifies a hand given as one rank bitmask per suit.
///
/// This is the hot path of the enumerator: rank multiplicities come from a
/// bit-sliced count over the four masks, flushes from per-suit popcounts and
/// straights from a window scan.
#[inline]
pub fn classify_masks(m: [u32; 4], r: u32) -> ContainmentProfile {
    let counts = m.map(|s| s.count_ones() as u8);
    classify_masks_counted(m, counts, r)
}

/// [`classify_masks`] with the per-suit card counts supplied by the caller.
#[inline(always)]
pub fn classify_masks_counted(m: [u32; 4], suit_counts: [u8; 4], r: u32) -> ContainmentProfile {
    let [a, b, c, d] = m;
    let union = a | b | c | d;
    let ge2 = (a & b) | (a & c) | (a & d) | (b & c) | (b & d) | (c & d);
    let ge3 = (a & b & c) | (a & b & d) | (a & c & d) | (b & c & d);
    let ge4 = a & b & c & d;
    // two or more ranks held at least twice
    let two_ranks = ge2 & ge2.wrapping_sub(1) != 0;

    let mut bits = 1u16 << HandClass::HighCard.index();
    if ge2 != 0 {
        bits |= 1 << HandClass::OnePair.index();
    }
    if two_ranks || ge4 != 0 {
        bits |= 1 << HandClass::TwoPair.index();
    }
    if ge3 != 0 {
        bits |= 1 << HandClass::ThreeOfAKind.index();
        if two_ranks {
            bits |= 1 << HandClass::FullHouse.index();
        }
    }
    if ge4 != 0 {
        bits |= 1 << HandClass::FourOfAKind.index();
    }
    if has_straight(union, r) {
        bits |= 1 << HandClass::Straight.index();
    }
    // at most one suit can hold five or more of seven cards
    for (s, &n) in m.iter().zip(suit_counts.iter()) {
        if n >= 5 {
            bits |= 1 << HandClass::Flush.index();
            if has_straight(*s, r) {
                bits |= 1 << HandClass::StraightFlush.index();
            }
            break;
        }
    }
    ContainmentProfile(bits)
}

/// The set of classes contained in `hand`.
pub fn classify(hand: &HandSet) -> ContainmentProfile {
    classify_masks(hand.suit_masks(), hand.ranks())
}

/// Reference classifier: classifies every 5-card subset on its own and takes
/// the union. Slow, but independent of the bitmask evaluator.
pub fn classify_by_subsets(hand: &HandSet) -> ContainmentProfile {
    let cards = hand.cards();
    let mut profile = ContainmentProfile::default();
    for skip_a in 0..HAND_SIZE {
        for skip_b in skip_a + 1..HAND_SIZE {
            let five: Vec<Card> = (0..HAND_SIZE)
                .filter(|&i| i != skip_a && i != skip_b)
                .map(|i| cards[i])
                .collect();
            profile.0 |= classify_five(&five, hand.ranks()).0;
        }
    }
    profile
}

fn classify_five(five: &[Card], r: u32) -> ContainmentProfile {
    use HandClass::*;
    let mut counts: Vec<usize> = Vec::new();
    let mut ranks: Vec<u32> = five.iter().map(|c| u32::from(c.rank)).collect();
    ranks.sort_unstable();
    let mut i = 0;
    while i < ranks.len() {
        let run = ranks[i..].iter().take_while(|&&x| x == ranks[i]).count();
        counts.push(run);
        i += run;
    }
    counts.sort_unstable_by(|x, y| y.cmp(x));

    let mut p = ContainmentProfile::from_classes(&[HighCard]);
    let pairs = counts.iter().filter(|&&n| n >= 2).count();
    if counts[0] >= 2 {
        p.insert(OnePair);
    }
    if pairs >= 2 || counts[0] == 4 {
        p.insert(TwoPair);
    }
    if counts[0] >= 3 {
        p.insert(ThreeOfAKind);
    }
    if counts == [3, 2] {
        p.insert(FullHouse);
    }
    if counts[0] == 4 {
        p.insert(FourOfAKind);
    }
    let straight = counts.len() == 5 && is_straight_ranks(&ranks, r).unwrap_or(false);
    let flush = five.iter().all(|c| c.suit == five[0].suit);
    if straight {
        p.insert(Straight);
    }
    if flush {
        p.insert(Flush);
    }
    if straight && flush {
        p.insert(StraightFlush);
    }
    p
}

/// Result of [`best_class`]: the declared class and whether it had to be
/// picked among classes tied in the ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Declared {
    pub class: HandClass,
    pub tied: bool,
}

/// The class a player declares: the highest-ranked class present in
/// `profile`. Ties in the ranking go to the class later in declaration order.
pub fn best_class(profile: ContainmentProfile, ranking: &Ranking) -> Declared {
    let mut best: Option<(usize, HandClass)> = None;
    let mut tied = false;
    for h in profile.iter() {
        let level = ranking.level(h);
        match best {
            None => best = Some((level, h)),
            Some((l, _)) if level > l => {
                best = Some((level, h));
                tied = false;
            }
            Some((l, _)) if level == l => {
                // iteration is in declaration order, so the later class wins
                best = Some((level, h));
                tied = true;
            }
            _ => {}
        }
    }
    let (_, class) = best.unwrap_or((0, HandClass::HighCard));
    Declared { class, tied }
}

#[cfg(test)]
mod tests {
    use super::HandClass::*;
    use super::*;

    fn profile(classes: &[HandClass]) -> ContainmentProfile {
        ContainmentProfile::from_classes(classes)
    }

    #[test]
    fn straight_windows() {
        assert!(is_straight_ranks(&[8, 9, 10, 11, 12], 13).unwrap());
        assert!(is_straight_ranks(&[12, 0, 1, 2, 3], 13).unwrap());
        assert!(!is_straight_ranks(&[0, 1, 2, 3, 5], 13).unwrap());
        // the wheel uses the deck's own top rank
        assert!(is_straight_ranks(&[8, 0, 1, 2, 3], 9).unwrap());
        assert!(!is_straight_ranks(&[12, 0, 1, 2, 3], 14).unwrap());
    }

    #[test]
    fn straight_window_count_is_r_minus_3() {
        for r in 6..=16u32 {
            let mut windows = 0;
            for mask in 0u32..(1 << r) {
                if mask.count_ones() == 5 && has_straight(mask, r) {
                    windows += 1;
                }
            }
            assert_eq!(windows, r - 3, "r = {r}");
        }
        // at r = 5 the wheel and the only run coincide
        assert!(has_straight(0b11111, 5));
    }

    #[test]
    fn straight_rejects_bad_input() {
        assert!(is_straight_ranks(&[0, 1, 2, 3], 13).is_err());
        assert!(is_straight_ranks(&[0, 1, 2, 3, 13], 13).is_err());
        assert!(is_straight_ranks(&[0, 1, 2, 3, 3], 13).is_err());
        assert!(is_straight_ranks(&[0, 1, 2, 3, 4], 4).is_err());
    }

    #[test]
    fn hand_validation() {
        assert!(HandSet::from_pairs(&[(0, 0); 7], 13).is_err());
        assert!(HandSet::from_pairs(&[(0, 0), (1, 0)], 13).is_err());
        assert!(HandSet::from_pairs(
            &[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (13, 0)],
            13
        )
        .is_err());
        assert!(HandSet::from_pairs(
            &[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (6, 4)],
            13
        )
        .is_err());
        assert!(Card::new(0, 0, 4).is_err());
    }

    #[test]
    fn quads_contain_two_pair() {
        // 2s 2h 2d 2c 5s 7h 9d with rank 0 = deuce
        let hand = HandSet::from_pairs(
            &[(0, 0), (0, 1), (0, 2), (0, 3), (3, 0), (5, 1), (7, 2)],
            13,
        )
        .unwrap();
        let expected = profile(&[HighCard, OnePair, TwoPair, ThreeOfAKind, FourOfAKind]);
        assert_eq!(classify(&hand), expected);
        assert_eq!(classify_by_subsets(&hand), expected);
    }

    #[test]
    fn suited_run_is_straight_flush() {
        // 3s 4s 5s 6s 7s 9h Jd
        let hand = HandSet::from_pairs(
            &[(1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (7, 1), (9, 2)],
            13,
        )
        .unwrap();
        let expected = profile(&[HighCard, Straight, Flush, StraightFlush]);
        assert_eq!(classify(&hand), expected);
        assert_eq!(classify_by_subsets(&hand), expected);
    }

    #[test]
    fn every_five_rank_flush_is_straight_flush_at_r5() {
        let hand =
            HandSet::from_pairs(&[(0, 2), (1, 2), (2, 2), (3, 2), (4, 2), (0, 1), (3, 3)], 5)
                .unwrap();
        let p = classify(&hand);
        assert!(p.contains(Flush) && p.contains(StraightFlush));
        assert_eq!(p, classify_by_subsets(&hand));
    }

    #[test]
    fn wheel_straight_flush() {
        let hand = HandSet::from_pairs(
            &[(12, 1), (0, 1), (1, 1), (2, 1), (3, 1), (7, 0), (9, 2)],
            13,
        )
        .unwrap();
        assert!(classify(&hand).contains(StraightFlush));
    }

    #[test]
    fn full_house_from_two_trips() {
        let hand = HandSet::from_pairs(
            &[(4, 0), (4, 1), (4, 2), (6, 0), (6, 1), (6, 2), (9, 3)],
            13,
        )
        .unwrap();
        let p = classify(&hand);
        assert!(p.contains(FullHouse) && !p.contains(FourOfAKind));
        assert_eq!(p, classify_by_subsets(&hand));
    }

    #[test]
    fn best_class_examples() {
        let r13: Ranking = "HC\n1P\n2P\n3X\nST\nFL\nFH\n4X\nSF".parse().unwrap();
        let r9: Ranking = "HC\n1P\n2P\n3X\nST\nFH\nFL\n4X\nSF".parse().unwrap();
        let d = best_class(profile(&[HighCard, OnePair, TwoPair]), &r13);
        assert_eq!(
            d,
            Declared {
                class: TwoPair,
                tied: false
            }
        );
        assert_eq!(best_class(profile(&[HighCard]), &r9).class, HighCard);
        let fh = profile(&[HighCard, OnePair, ThreeOfAKind, FullHouse]);
        assert_eq!(best_class(fh, &r9).class, FullHouse);
    }

    #[test]
    fn best_class_tie_prefers_later_declaration() {
        let tied: Ranking = "HC\n1P\n2P\n3X\nFH\nST\n4X\nFL = SF".parse().unwrap();
        let d = best_class(profile(&[HighCard, Straight, Flush, StraightFlush]), &tied);
        assert_eq!(
            d,
            Declared {
                class: StraightFlush,
                tied: true
            }
        );
    }

    #[test]
    fn class_abbreviations_round_trip() {
        for h in HandClass::ALL {
            assert_eq!(h.abbrev().parse::<HandClass>().unwrap(), h);
            assert_eq!(HandClass::from_index(h.index()), Some(h));
        }
        assert!("NO".parse::<HandClass>().is_err());
    }
}
