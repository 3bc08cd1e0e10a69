//! Exhaustive sweep over all `C(4r, 7)` seven-card hands.
//!
//! The sweep produces a [`ProfileHistogram`]: for each of the 512 possible
//! containment profiles, the number of hands with exactly that profile.
//! Inclusive counts, showdown counts under any ranking and the count of
//! "nothing" hands are all exact functions of the histogram, so one sweep per
//! deck size serves every ranking.
//!
//! Work is split into contiguous ranges of the colexicographic order of
//! 7-subsets, one range per worker. Workers keep private accumulators that
//! are summed after the join, so results do not depend on the thread count.
//!
//! The optional suit-canonical path visits one hand per orbit of the suit
//! permutation group and weights it by the orbit size. It agrees exactly with
//! the plain sweep and does about 1/24 of the work.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use crate::deck::{
    best_class, check_rank_count, classify_masks_counted, ContainmentProfile, HandClass,
};
use crate::error::{Error, Result};
use crate::exact::{binom, Count};
use crate::ranking::Ranking;

/// Default largest `r` enumerated without the long-run opt-in.
pub const DEFAULT_CEILING: u32 = 16;

const HAND: usize = 7;
const PROFILES: usize = ContainmentProfile::SPACE;
const PROGRESS_BATCH: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    Inclusive,
    Showdown,
}

impl CountMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CountMode::Inclusive => "inclusive",
            CountMode::Showdown => "showdown",
        }
    }
}

/// Exact per-class counts for one deck size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub r: u32,
    pub mode: CountMode,
    pub ranking_used: Option<Ranking>,
    pub counts: [Count; 9],
    pub total: Count,
}

impl CountTable {
    pub fn get(&self, class: HandClass) -> &Count {
        &self.counts[class.index()]
    }

    pub fn sum(&self) -> Count {
        self.counts.iter().sum()
    }

    /// Classes ordered by increasing count, declaration order breaking ties.
    pub fn ascending(&self) -> Vec<(HandClass, &Count)> {
        let mut rows: Vec<_> = HandClass::ALL.iter().map(|&h| (h, self.get(h))).collect();
        rows.sort_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)));
        rows
    }
}

/// Number of hands per exact containment profile.
#[derive(Clone, PartialEq, Eq)]
pub struct ProfileHistogram {
    r: u32,
    counts: Box<[u64; PROFILES]>,
}

impl std::fmt::Debug for ProfileHistogram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProfileHistogram")
            .field("r", &self.r)
            .field("profiles", &self.profiles().collect::<Vec<_>>())
            .finish()
    }
}

impl ProfileHistogram {
    fn empty(r: u32) -> Self {
        ProfileHistogram {
            r,
            counts: Box::new([0; PROFILES]),
        }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Nonzero `(profile, hands)` pairs in profile-bit order.
    pub fn profiles(&self) -> impl Iterator<Item = (ContainmentProfile, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &n)| n != 0)
            .map(|(bits, &n)| (ContainmentProfile::from_bits(bits as u16), n))
    }

    pub fn total(&self) -> Count {
        self.counts.iter().map(|&n| Count::from(n)).sum()
    }

    pub fn inclusive(&self) -> CountTable {
        let mut counts: [Count; 9] = Default::default();
        for (profile, n) in self.profiles() {
            for h in profile.iter() {
                counts[h.index()] += n;
            }
        }
        CountTable {
            r: self.r,
            mode: CountMode::Inclusive,
            ranking_used: None,
            counts,
            total: self.total(),
        }
    }

    /// Counts by declared class under `ranking`.
    pub fn showdown(&self, ranking: &Ranking) -> CountTable {
        let mut counts: [Count; 9] = Default::default();
        for (profile, n) in self.profiles() {
            counts[best_class(profile, ranking).class.index()] += n;
        }
        CountTable {
            r: self.r,
            mode: CountMode::Showdown,
            ranking_used: Some(ranking.clone()),
            counts,
            total: self.total(),
        }
    }

    /// Hands whose only class is a high card.
    pub fn nothing(&self) -> Count {
        Count::from(self.counts[1 << HandClass::HighCard.index()])
    }

    fn merge(&mut self, other: &[u64; PROFILES]) {
        for (a, b) in self.counts.iter_mut().zip(other.iter()) {
            *a += b;
        }
    }
}

/// Configuration and entry point for exhaustive sweeps.
#[derive(Debug, Clone)]
pub struct Enumerator {
    threads: usize,
    ceiling: u32,
    long_run: bool,
    suit_canonical: bool,
    progress: Option<Duration>,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator {
            threads: thread::available_parallelism().map_or(1, |n| n.get()),
            ceiling: DEFAULT_CEILING,
            long_run: false,
            suit_canonical: false,
            progress: None,
        }
    }
}

impl Enumerator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn ceiling(mut self, ceiling: u32) -> Self {
        self.ceiling = ceiling;
        self
    }

    pub fn long_run(mut self, allow: bool) -> Self {
        self.long_run = allow;
        self
    }

    pub fn suit_canonical(mut self, enable: bool) -> Self {
        self.suit_canonical = enable;
        self
    }

    /// Report progress to standard error every `interval`.
    pub fn progress(mut self, interval: Option<Duration>) -> Self {
        self.progress = interval;
        self
    }

    pub fn thread_count(&self) -> usize {
        self.threads
    }

    pub fn uses_suit_canonical(&self) -> bool {
        self.suit_canonical
    }

    fn check(&self, r: u32) -> Result<()> {
        check_rank_count(r)?;
        if r > self.ceiling {
            if !self.long_run {
                return Err(Error::CeilingExceeded {
                    r,
                    ceiling: self.ceiling,
                });
            }
            log::warn!(
                "enumerating r = {r} ({} hands) past the routine ceiling of {}",
                binom(4 * i64::from(r), 7).unwrap_or_default(),
                self.ceiling
            );
        }
        Ok(())
    }

    /// Sweeps every hand for `r` ranks and tallies containment profiles.
    pub fn profile_histogram(&self, r: u32) -> Result<ProfileHistogram> {
        self.check(r)?;
        let total = binom(4 * i64::from(r), 7)?;
        let total = u64::try_from(total).expect("C(128, 7) fits in u64");
        let done = AtomicU64::new(0);
        let hist = if self.suit_canonical {
            self.run(r, total, &done, |w, n| canonical_sweep(r, w, n, &done))
        } else {
            self.run(r, total, &done, |w, n| plain_sweep(r, total, w, n, &done))
        };
        debug_assert_eq!(hist.total(), Count::from(total));
        Ok(hist)
    }

    fn run<F>(&self, r: u32, total: u64, done: &AtomicU64, work: F) -> ProfileHistogram
    where
        F: Fn(usize, usize) -> Box<[u64; PROFILES]> + Sync,
    {
        let workers = self.threads.max(1);
        let finished = AtomicBool::new(false);
        let mut hist = ProfileHistogram::empty(r);
        thread::scope(|s| {
            let reporter = self.progress.map(|every| {
                let finished = &finished;
                s.spawn(move || report_progress(r, total, every, done, finished))
            });
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let work = &work;
                    s.spawn(move || work(w, workers))
                })
                .collect();
            // merge in worker order
            for h in handles {
                hist.merge(&h.join().expect("enumeration worker panicked"));
            }
            finished.store(true, Ordering::Release);
            if let Some(rep) = reporter {
                rep.thread().unpark();
                rep.join().expect("progress reporter panicked");
            }
        });
        hist
    }

    /// Exact inclusive counts for all nine classes.
    pub fn enumerate_inclusive(&self, r: u32) -> Result<CountTable> {
        Ok(self.profile_histogram(r)?.inclusive())
    }

    /// Exact showdown counts under `ranking`.
    pub fn enumerate_showdown(&self, r: u32, ranking: &Ranking) -> Result<CountTable> {
        Ok(self.profile_histogram(r)?.showdown(ranking))
    }

    /// Number of hands containing no class other than a high card.
    pub fn nothing_count(&self, r: u32) -> Result<Count> {
        Ok(self.profile_histogram(r)?.nothing())
    }
}

fn report_progress(r: u32, total: u64, every: Duration, done: &AtomicU64, finished: &AtomicBool) {
    let start = Instant::now();
    let mut next = every;
    loop {
        let elapsed = start.elapsed();
        if elapsed < next {
            thread::park_timeout(next - elapsed);
        }
        if finished.load(Ordering::Acquire) {
            return;
        }
        if start.elapsed() >= next {
            let n = done.load(Ordering::Relaxed);
            eprintln!(
                "r = {r}: {n} / {total} hands ({:.1}%) after {:.0?}",
                100.0 * n as f64 / total as f64,
                start.elapsed()
            );
            next += every;
        }
    }
}

/// Binomial table `C(n, k)` for `n <= 4 * MAX_RANKS`, `k <= 7`.
struct Binomials {
    table: Vec<[u64; HAND + 1]>,
}

impl Binomials {
    fn new(n_max: usize) -> Self {
        let mut table = vec![[0u64; HAND + 1]; n_max + 1];
        for n in 0..=n_max {
            table[n][0] = 1;
            for k in 1..=HAND {
                table[n][k] = if n == 0 {
                    0
                } else {
                    table[n - 1][k - 1] + table[n - 1][k]
                };
            }
        }
        Binomials { table }
    }

    #[inline]
    fn get(&self, n: usize, k: usize) -> u64 {
        self.table[n][k]
    }
}

/// Colex rank of a 7-subset: `sum C(c_i, i + 1)`.
pub fn colex_rank(combo: &[u32; HAND]) -> u64 {
    let b = Binomials::new(combo[HAND - 1] as usize);
    combo
        .iter()
        .enumerate()
        .map(|(i, &c)| b.get(c as usize, i + 1))
        .sum()
}

/// The 7-subset of `[0, n)` with colex rank `index`.
pub fn colex_unrank(mut index: u64, n: u32) -> [u32; HAND] {
    let b = Binomials::new(n as usize);
    let mut combo = [0u32; HAND];
    let mut hi = n as usize;
    for i in (0..HAND).rev() {
        // largest c < hi with C(c, i + 1) <= index
        let mut c = hi - 1;
        while b.get(c, i + 1) > index {
            c -= 1;
        }
        combo[i] = c as u32;
        index -= b.get(c, i + 1);
        hi = c;
    }
    combo
}

fn plain_sweep(
    r: u32,
    total: u64,
    worker: usize,
    workers: usize,
    done: &AtomicU64,
) -> Box<[u64; PROFILES]> {
    let mut hist = Box::new([0u64; PROFILES]);
    let (w, ws) = (worker as u64, workers as u64);
    let start = total * w / ws;
    let end = total * (w + 1) / ws;
    if start == end {
        return hist;
    }
    let n = 4 * r;
    let mut c = colex_unrank(start, n);
    let upper_masks = |c: &[u32; HAND]| {
        let mut m = [0u32; 4];
        let mut n = [0u8; 4];
        for &card in &c[1..] {
            m[(card & 3) as usize] |= 1 << (card >> 2);
            n[(card & 3) as usize] += 1;
        }
        (m, n)
    };
    let (mut upper, mut upper_counts) = upper_masks(&c);
    let mut remaining = end - start;
    let mut unreported = 0u64;
    loop {
        let stop = c[1].min(c[0].saturating_add(remaining.min(u64::from(u32::MAX)) as u32));
        for c0 in c[0]..stop {
            let (mut m, mut n) = (upper, upper_counts);
            m[(c0 & 3) as usize] |= 1 << (c0 >> 2);
            n[(c0 & 3) as usize] += 1;
            hist[classify_masks_counted(m, n, r).bits() as usize & (PROFILES - 1)] += 1;
        }
        let did = u64::from(stop - c[0]);
        remaining -= did;
        unreported += did;
        if unreported >= PROGRESS_BATCH {
            done.fetch_add(unreported, Ordering::Relaxed);
            unreported = 0;
        }
        if remaining == 0 {
            break;
        }
        // lowest element exhausted: bump the first element that can move
        let mut i = 1;
        while i + 1 < HAND && c[i] + 1 == c[i + 1] {
            i += 1;
        }
        c[i] += 1;
        for (j, cj) in c.iter_mut().enumerate().take(i) {
            *cj = j as u32;
        }
        (upper, upper_counts) = upper_masks(&c);
    }
    done.fetch_add(unreported, Ordering::Relaxed);
    hist
}

/// Suit-count compositions of 7 into four non-increasing parts.
const COMPOSITIONS: [[u32; 4]; 11] = [
    [7, 0, 0, 0],
    [6, 1, 0, 0],
    [5, 2, 0, 0],
    [5, 1, 1, 0],
    [4, 3, 0, 0],
    [4, 2, 1, 0],
    [4, 1, 1, 1],
    [3, 3, 1, 0],
    [3, 2, 2, 0],
    [3, 2, 1, 1],
    [2, 2, 2, 1],
];

/// All `r`-bit masks with `k` bits set, ascending.
fn masks_with_popcount(r: u32, k: u32) -> Vec<u32> {
    if k == 0 {
        return vec![0];
    }
    if k > r {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut v: u64 = (1u64 << k) - 1;
    let limit = 1u64 << r;
    while v < limit {
        out.push(v as u32);
        // Gosper's hack
        let t = v | (v - 1);
        v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

/// Number of distinct arrangements of four masks over the suits.
fn orbit_weight(m: &[u32; 4]) -> u64 {
    let mut sorted = *m;
    sorted.sort_unstable();
    let mut weight = 24;
    let mut i = 0;
    while i < 4 {
        let run = sorted[i..].iter().take_while(|&&x| x == sorted[i]).count();
        weight /= [1, 1, 2, 6, 24][run];
        i += run;
    }
    weight
}

fn canonical_sweep(
    r: u32,
    worker: usize,
    workers: usize,
    done: &AtomicU64,
) -> Box<[u64; PROFILES]> {
    let lists: Vec<Vec<u32>> = (0..=HAND as u32)
        .map(|k| masks_with_popcount(r, k))
        .collect();
    // work items: (composition, index of the first mask)
    let items: Vec<(usize, usize)> = COMPOSITIONS
        .iter()
        .enumerate()
        .flat_map(|(ci, comp)| (0..lists[comp[0] as usize].len()).map(move |i| (ci, i)))
        .collect();
    let n = items.len();
    let (start, end) = (n * worker / workers, n * (worker + 1) / workers);

    let mut hist = Box::new([0u64; PROFILES]);
    let mut unreported = 0u64;
    for &(ci, i0) in &items[start..end] {
        let [p0, p1, p2, p3] = COMPOSITIONS[ci];
        let m0 = lists[p0 as usize][i0];
        // equal popcounts require non-increasing masks
        for &m1 in &lists[p1 as usize] {
            if p1 == p0 && m1 > m0 {
                break;
            }
            for &m2 in &lists[p2 as usize] {
                if p2 == p1 && m2 > m1 {
                    break;
                }
                for &m3 in &lists[p3 as usize] {
                    if p3 == p2 && m3 > m2 {
                        break;
                    }
                    let m = [m0, m1, m2, m3];
                    let w = orbit_weight(&m);
                    let n = [p0 as u8, p1 as u8, p2 as u8, p3 as u8];
                    hist[classify_masks_counted(m, n, r).bits() as usize & (PROFILES - 1)] += w;
                    unreported += w;
                }
            }
        }
        if unreported >= PROGRESS_BATCH {
            done.fetch_add(unreported, Ordering::Relaxed);
            unreported = 0;
        }
    }
    done.fetch_add(unreported, Ordering::Relaxed);
    hist
}

impl CountTable {
    /// Checks the structural invariants of the table.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let expected_total = binom(4 * i64::from(self.r), 7).map_err(|e| e.to_string())?;
        if self.total != expected_total {
            return Err(format!(
                "total {} != C(4r, 7) = {expected_total}",
                self.total
            ));
        }
        match self.mode {
            CountMode::Inclusive => {
                if self.get(HandClass::HighCard) != &self.total {
                    return Err("inclusive HC must equal the total".into());
                }
                if self.sum() < self.total {
                    return Err("inclusive counts must sum to at least the total".into());
                }
            }
            CountMode::Showdown => {
                if self.sum() != self.total {
                    return Err(format!(
                        "showdown counts sum to {} instead of {}",
                        self.sum(),
                        self.total
                    ));
                }
            }
        }
        Ok(())
    }
}
