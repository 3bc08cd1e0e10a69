//! Rankings of hand classes and the analyses built on them: frequency
//! rankings, breakpoints in `r`, stability certificates, showdown rankings
//! and their iteration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, Sign};

use crate::closed_form::{freq_closed_all, freq_poly, max_min_valid_r};
use crate::deck::{HandClass, MIN_RANKS};
use crate::enumerate::{CountTable, Enumerator, ProfileHistogram};
use crate::error::{Error, Result};
use crate::exact::{
    certify_sign_permanence, Count, RationalPolynomial, SignCertificate, SignFailure,
};

/// A total preorder on the nine classes, lowest rank first.
///
/// Classes with equal frequency share a tie group. Within a group classes
/// are kept in declaration order, so two rankings compare equal exactly when
/// they induce the same strict comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    groups: Vec<Vec<HandClass>>,
    levels: [usize; 9],
}

impl Ranking {
    pub fn new(groups: Vec<Vec<HandClass>>) -> Result<Ranking> {
        let mut levels = [usize::MAX; 9];
        let mut groups = groups;
        for (level, group) in groups.iter_mut().enumerate() {
            if group.is_empty() {
                return Err(Error::InvalidRanking("empty tie group".into()));
            }
            group.sort_unstable();
            for &h in group.iter() {
                if levels[h.index()] != usize::MAX {
                    return Err(Error::InvalidRanking(format!("{h} listed twice")));
                }
                levels[h.index()] = level;
            }
        }
        if let Some(missing) = HandClass::ALL
            .iter()
            .find(|h| levels[h.index()] == usize::MAX)
        {
            return Err(Error::InvalidRanking(format!("{missing} is missing")));
        }
        Ok(Ranking { groups, levels })
    }

    /// Strict order from a list, lowest first.
    pub fn from_order(order: &[HandClass]) -> Result<Ranking> {
        Ranking::new(order.iter().map(|&h| vec![h]).collect())
    }

    /// Canonical declaration order, HC lowest.
    pub fn canonical() -> Ranking {
        Ranking::from_order(&HandClass::ALL).expect("all classes once")
    }

    /// Rarer classes rank higher; equal counts tie.
    pub fn from_counts(counts: &[Count; 9]) -> Ranking {
        let mut classes = HandClass::ALL.to_vec();
        classes.sort_by(|a, b| counts[b.index()].cmp(&counts[a.index()]).then(a.cmp(b)));
        let mut groups: Vec<Vec<HandClass>> = Vec::new();
        for h in classes {
            match groups.last_mut() {
                Some(g) if counts[g[0].index()] == counts[h.index()] => g.push(h),
                _ => groups.push(vec![h]),
            }
        }
        Ranking::new(groups).expect("all classes once")
    }

    pub fn groups(&self) -> &[Vec<HandClass>] {
        &self.groups
    }

    /// Tie-group index of `class`; higher is better.
    #[inline]
    pub fn level(&self, class: HandClass) -> usize {
        self.levels[class.index()]
    }

    /// All classes, lowest first.
    pub fn order(&self) -> Vec<HandClass> {
        self.groups.iter().flatten().copied().collect()
    }

    pub fn ties(&self) -> Vec<&[HandClass]> {
        self.groups
            .iter()
            .filter(|g| g.len() > 1)
            .map(Vec::as_slice)
            .collect()
    }

    pub fn is_tie_free(&self) -> bool {
        self.groups.len() == HandClass::COUNT
    }

    pub fn top(&self) -> &[HandClass] {
        self.groups.last().expect("nonempty")
    }

    pub fn bottom(&self) -> &[HandClass] {
        &self.groups[0]
    }

    /// Class pairs `(a, b)`, `a` before `b` in declaration order, whose
    /// relative order differs between the two rankings. Classes in `ignore`
    /// are left out.
    pub fn discrepancies(
        &self,
        other: &Ranking,
        ignore: &[HandClass],
    ) -> Vec<(HandClass, HandClass)> {
        let kept: Vec<HandClass> = HandClass::ALL
            .into_iter()
            .filter(|h| !ignore.contains(h))
            .collect();
        let mut out = Vec::new();
        for (i, &a) in kept.iter().enumerate() {
            for &b in &kept[i + 1..] {
                let mine = self.level(a).cmp(&self.level(b));
                let theirs = other.level(a).cmp(&other.level(b));
                if mine != theirs {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn agrees_ignoring(&self, other: &Ranking, ignore: &[HandClass]) -> bool {
        self.discrepancies(other, ignore).is_empty()
    }

    /// One line per tie group, lowest first; ties joined by `=`.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        for g in &self.groups {
            s.push_str(&join_group(g));
            s.push('\n');
        }
        s
    }

    /// Tie groups rendered as `"HC"`, `"FL=SF"`, lowest first.
    pub fn group_labels(&self) -> Vec<String> {
        self.groups.iter().map(|g| join_group(g)).collect()
    }
}

fn join_group(g: &[HandClass]) -> String {
    g.iter().map(|h| h.abbrev()).collect::<Vec<_>>().join("=")
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                f.write_str(" < ")?;
            }
            f.write_str(&g.iter().map(|h| h.abbrev()).collect::<Vec<_>>().join(" = "))?;
        }
        Ok(())
    }
}

impl FromStr for Ranking {
    type Err = Error;

    /// Parses the ranking file format: one tie group per line, lowest first,
    /// classes within a group joined by `=`. Blank lines and `#` comments are
    /// skipped.
    fn from_str(s: &str) -> Result<Ranking> {
        let mut groups = Vec::new();
        for line in s.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let group = line
                .split('=')
                .map(str::parse)
                .collect::<Result<Vec<HandClass>>>()?;
            groups.push(group);
        }
        Ranking::new(groups)
    }
}

/// A maximal run of consecutive `r` sharing one frequency ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub r_low: u32,
    pub r_high: u32,
    pub ranking: Ranking,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakpointReport {
    pub segments: Vec<Segment>,
}

impl BreakpointReport {
    pub fn starts(&self) -> Vec<u32> {
        self.segments.iter().map(|s| s.r_low).collect()
    }
}

/// Certification of one class pair: `freq(first) - freq(second)` keeps its
/// sign from `from_r` on.
#[derive(Debug, Clone)]
pub struct PairOutcome {
    pub first: HandClass,
    pub second: HandClass,
    pub difference: RationalPolynomial,
    pub result: std::result::Result<SignCertificate, SignFailure>,
}

impl PairOutcome {
    pub fn is_certified(&self) -> bool {
        self.result.is_ok()
    }
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub from_r: u32,
    pub ranking: Ranking,
    /// HC is strictly the most common class at `from_r` and beyond.
    pub high_card_is_bottom: bool,
    /// Adjacent pairs `(lower, higher)` above HC, lowest first.
    pub pairs: Vec<PairOutcome>,
}

impl StabilityReport {
    pub fn is_certified(&self) -> bool {
        self.high_card_is_bottom
            && self
                .pairs
                .iter()
                .all(|p| matches!(&p.result, Ok(c) if c.sign == Sign::Plus))
    }

    pub fn first_failure(&self) -> Option<&PairOutcome> {
        self.pairs
            .iter()
            .find(|p| !matches!(&p.result, Ok(c) if c.sign == Sign::Plus))
    }
}

/// Certifies that `freq(first) - freq(second)` never changes sign for
/// `r >= from_r`.
pub fn certify_pair(first: HandClass, second: HandClass, from_r: u32) -> Result<PairOutcome> {
    let min = max_min_valid_r();
    if from_r < min {
        return Err(Error::CertificationRange { got: from_r, min });
    }
    let difference = &freq_poly(first).polynomial - &freq_poly(second).polynomial;
    let result = certify_sign_permanence(&difference, &BigInt::from(from_r));
    Ok(PairOutcome {
        first,
        second,
        difference,
        result,
    })
}

/// Certifies that the frequency ranking at `from_r` holds for every larger
/// `r`, one adjacent pair at a time. HC is checked to be the strict bottom
/// but not certified pairwise.
pub fn certify_stability(from_r: u32) -> Result<StabilityReport> {
    let min = max_min_valid_r();
    if from_r < min {
        return Err(Error::CertificationRange { got: from_r, min });
    }
    let counts = freq_closed_all(from_r)?;
    let ranking = Ranking::from_counts(&counts);
    let high_card_is_bottom = ranking.bottom() == [HandClass::HighCard];

    let order: Vec<HandClass> = ranking
        .order()
        .into_iter()
        .filter(|&h| h != HandClass::HighCard)
        .collect();
    let pairs = order
        .windows(2)
        .map(|w| certify_pair(w[0], w[1], from_r))
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityReport {
        from_r,
        ranking,
        high_card_is_bottom,
        pairs,
    })
}

/// Result of iterating showdown rankings from a base ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IterationKind {
    Fixpoint(Ranking),
    TwoCycle([Ranking; 2]),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationOutcome {
    pub r: u32,
    /// `trajectory[0]` is the base; each next entry is the showdown ranking
    /// of the previous one.
    pub trajectory: Vec<Ranking>,
    pub kind: IterationKind,
}

/// Frequency vs showdown comparison at one `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementRow {
    pub r: u32,
    pub frequency: Ranking,
    pub showdown: Ranking,
    pub discrepancies: Vec<(HandClass, HandClass)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementReport {
    pub include_hc: bool,
    pub r_max: u32,
    pub found: Option<u32>,
    pub rows: Vec<AgreementRow>,
}

/// Default cap on showdown iterations.
pub const DEFAULT_MAX_ITER: usize = 32;

/// Ranking analyses over a shared enumerator, caching one profile histogram
/// per deck size.
#[derive(Debug, Default)]
pub struct RankingEngine {
    enumerator: Enumerator,
    cache: Mutex<BTreeMap<u32, Arc<ProfileHistogram>>>,
}

impl RankingEngine {
    pub fn new(enumerator: Enumerator) -> Self {
        RankingEngine {
            enumerator,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn enumerator(&self) -> &Enumerator {
        &self.enumerator
    }

    pub fn histogram(&self, r: u32) -> Result<Arc<ProfileHistogram>> {
        if let Some(h) = self.cache.lock().expect("cache poisoned").get(&r) {
            return Ok(Arc::clone(h));
        }
        let h = Arc::new(self.enumerator.profile_histogram(r)?);
        self.cache
            .lock()
            .expect("cache poisoned")
            .insert(r, Arc::clone(&h));
        Ok(h)
    }

    /// Inclusive counts: closed forms where all of them are valid, the
    /// enumerator below that.
    pub fn inclusive_counts(&self, r: u32) -> Result<[Count; 9]> {
        if r < MIN_RANKS {
            return Err(Error::InvalidRankCount(r));
        }
        if r >= max_min_valid_r() {
            freq_closed_all(r)
        } else {
            Ok(self.histogram(r)?.inclusive().counts)
        }
    }

    pub fn frequency_ranking(&self, r: u32) -> Result<Ranking> {
        Ok(Ranking::from_counts(&self.inclusive_counts(r)?))
    }

    /// Segments `[r_min, r_max]` into maximal runs with equal rankings.
    pub fn scan_breakpoints(&self, r_min: u32, r_max: u32) -> Result<BreakpointReport> {
        if r_min < MIN_RANKS {
            return Err(Error::InvalidRankCount(r_min));
        }
        let mut segments: Vec<Segment> = Vec::new();
        for r in r_min..=r_max {
            let ranking = self.frequency_ranking(r)?;
            match segments.last_mut() {
                Some(seg) if seg.ranking == ranking => seg.r_high = r,
                _ => segments.push(Segment {
                    r_low: r,
                    r_high: r,
                    ranking,
                }),
            }
        }
        Ok(BreakpointReport { segments })
    }

    pub fn showdown_counts(&self, r: u32, base: &Ranking) -> Result<CountTable> {
        Ok(self.histogram(r)?.showdown(base))
    }

    /// Ranks classes by how rarely they are declared under `base`.
    pub fn showdown_ranking(&self, r: u32, base: &Ranking) -> Result<Ranking> {
        Ok(Ranking::from_counts(&self.showdown_counts(r, base)?.counts))
    }

    /// Applies [`Self::showdown_ranking`] repeatedly until it reaches a
    /// fixpoint or alternates between two rankings.
    pub fn iterate_showdown(
        &self,
        r: u32,
        base: &Ranking,
        max_iter: usize,
    ) -> Result<IterationOutcome> {
        let hist = self.histogram(r)?;
        let mut trajectory = vec![base.clone()];
        for _ in 0..max_iter.max(2) {
            let prev = trajectory.last().expect("nonempty");
            let next = Ranking::from_counts(&hist.showdown(prev).counts);
            trajectory.push(next);
            let k = trajectory.len() - 1;
            if trajectory[k] == trajectory[k - 1] {
                let fix = trajectory[k].clone();
                return Ok(IterationOutcome {
                    r,
                    trajectory,
                    kind: IterationKind::Fixpoint(fix),
                });
            }
            if k >= 2 && trajectory[k] == trajectory[k - 2] {
                let pair = [trajectory[k - 1].clone(), trajectory[k].clone()];
                return Ok(IterationOutcome {
                    r,
                    trajectory,
                    kind: IterationKind::TwoCycle(pair),
                });
            }
            if let Some(j) = trajectory[..k.saturating_sub(2)]
                .iter()
                .position(|t| *t == trajectory[k])
            {
                return Err(Error::LongCycle {
                    length: k - j,
                    trajectory,
                });
            }
        }
        Err(Error::IterationExhausted { trajectory })
    }

    /// Smallest `r <= r_max` whose showdown ranking (under the frequency
    /// ranking) equals the frequency ranking, optionally ignoring HC.
    pub fn find_min_agreement(&self, include_hc: bool, r_max: u32) -> Result<AgreementReport> {
        let ignore: &[HandClass] = if include_hc {
            &[]
        } else {
            &[HandClass::HighCard]
        };
        let mut rows = Vec::new();
        let mut found = None;
        for r in MIN_RANKS..=r_max {
            let frequency = self.frequency_ranking(r)?;
            let showdown = self.showdown_ranking(r, &frequency)?;
            let discrepancies = frequency.discrepancies(&showdown, ignore);
            let agree = discrepancies.is_empty();
            rows.push(AgreementRow {
                r,
                frequency,
                showdown,
                discrepancies,
            });
            if agree {
                found = Some(r);
                break;
            }
        }
        Ok(AgreementReport {
            include_hc,
            r_max,
            found,
            rows,
        })
    }
}
