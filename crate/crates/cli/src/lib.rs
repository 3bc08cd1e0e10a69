//! Command-line front end for `rankforge-core`.
//!
//! [`execute`] runs one parsed command and returns what to print together
//! with the process exit status, so the binary stays a thin wrapper and the
//! commands can be tested in-process.

pub mod args;
pub mod report;

use std::fs;
use std::path::Path;
use std::time::Duration;

use rankforge_core::ranking::IterationKind;
use rankforge_core::{
    certify_pair, certify_stability, freq_closed, freq_poly, Enumerator, Error as CoreError,
    HandClass, Ranking, RankingEngine,
};
use thiserror::Error;

use args::{Cli, Command, GlobalArgs, Method, Target};
use report::{
    AgreementView, BreakpointView, CertifyView, CountTableView, IterationView, RankingView, View,
};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Runtime = 1,
    Validation = 2,
    Mismatch = 3,
    CertificationFailed = 4,
    NoResult = 5,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("cannot read ranking file {path}: {source}")]
    RankingFile {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid ranking file {path}: {source}")]
    RankingParse { path: String, source: CoreError },
    #[error("--threads must be at least 1")]
    ZeroThreads,
    #[error("closed forms are not valid for every class at r = {r}; {hint}")]
    ClosedBelowValidity { r: u32, hint: String },
}

impl CliError {
    /// Which flag would get past this error, if any.
    pub fn hint(&self) -> Option<&'static str> {
        match self {
            CliError::Core(CoreError::CeilingExceeded { .. }) => {
                Some("pass --long-run to allow it")
            }
            CliError::Core(CoreError::OutsideValidity { .. }) => Some("use --method enum"),
            _ => None,
        }
    }

    pub fn status(&self) -> Status {
        match self {
            CliError::Core(e) => match e {
                CoreError::NegativeBinomial { .. } => Status::Runtime,
                CoreError::IterationExhausted { .. } | CoreError::LongCycle { .. } => {
                    Status::NoResult
                }
                _ => Status::Validation,
            },
            CliError::RankingFile { .. } => Status::Runtime,
            CliError::RankingParse { .. }
            | CliError::ZeroThreads
            | CliError::ClosedBelowValidity { .. } => Status::Validation,
        }
    }
}

/// A rendered result and the status to exit with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub view: View,
    pub status: Status,
    /// One-line explanation printed to stderr for a nonzero status.
    pub note: Option<String>,
}

impl Outcome {
    fn ok(view: View) -> Self {
        Outcome {
            view,
            status: Status::Success,
            note: None,
        }
    }
}

pub fn build_engine(global: &GlobalArgs) -> Result<RankingEngine, CliError> {
    let mut enumerator = Enumerator::new()
        .long_run(global.long_run)
        .suit_canonical(global.suit_canonical)
        .progress((global.progress > 0).then(|| Duration::from_secs(global.progress)));
    if let Some(n) = global.threads {
        if n == 0 {
            return Err(CliError::ZeroThreads);
        }
        enumerator = enumerator.threads(n);
    }
    Ok(RankingEngine::new(enumerator))
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let engine = build_engine(&cli.global)?;
    log::debug!("{} worker thread(s)", engine.enumerator().thread_count());
    match &cli.command {
        Command::Freq { ranks, method } => freq(&engine, *ranks, *method),
        Command::Showdown { ranks, ranking } => {
            let base = base_ranking(&engine, *ranks, ranking.as_deref())?;
            let table = engine.showdown_counts(*ranks, &base)?;
            Ok(Outcome::ok(View::Counts(CountTableView::new(
                &table, "enum",
            ))))
        }
        Command::Rank { target } => rank(&engine, target),
        Command::Certify { from, pair } => certify(*from, *pair),
        Command::Iterate {
            target,
            ranking,
            max_iter,
        } => iterate(&engine, target, ranking.as_deref(), *max_iter),
        Command::Agree { max, include_hc } => {
            let report = engine.find_min_agreement(*include_hc, *max)?;
            let view = AgreementView::new(&report);
            let found = report.found.is_some();
            Ok(Outcome {
                view: View::Agreement(view),
                status: if found {
                    Status::Success
                } else {
                    Status::NoResult
                },
                note: (!found).then(|| format!("no agreement found up to r = {max}")),
            })
        }
    }
}

fn freq(engine: &RankingEngine, r: u32, method: Method) -> Result<Outcome, CliError> {
    let invalid: Vec<HandClass> = HandClass::ALL
        .into_iter()
        .filter(|&h| !freq_poly(h).is_valid_at(r))
        .collect();
    match method {
        Method::Closed => {
            if !invalid.is_empty() {
                let names: Vec<&str> = invalid.iter().map(|h| h.abbrev()).collect();
                return Err(CliError::ClosedBelowValidity {
                    r,
                    hint: format!("{} need --method enum", names.join(", ")),
                });
            }
            let table = closed_table(r)?;
            Ok(Outcome::ok(View::Counts(CountTableView::new(
                &table, "closed",
            ))))
        }
        Method::Enum => {
            let table = engine.histogram(r)?.inclusive();
            Ok(Outcome::ok(View::Counts(CountTableView::new(
                &table, "enum",
            ))))
        }
        Method::Both => {
            let table = engine.histogram(r)?.inclusive();
            let mut checked = Vec::new();
            let mut mismatched = Vec::new();
            for h in HandClass::ALL {
                if invalid.contains(&h) {
                    continue;
                }
                let closed = freq_closed(h, r)?;
                if &closed == table.get(h) {
                    checked.push(h.abbrev().to_string());
                } else {
                    mismatched.push(format!("{h}: closed {closed}, enumerated {}", table.get(h)));
                }
            }
            let mut view = CountTableView::new(&table, "both");
            view.cross_checked = checked;
            if mismatched.is_empty() {
                Ok(Outcome::ok(View::Counts(view)))
            } else {
                Ok(Outcome {
                    view: View::Counts(view),
                    status: Status::Mismatch,
                    note: Some(format!("engines disagree: {}", mismatched.join("; "))),
                })
            }
        }
    }
}

fn closed_table(r: u32) -> Result<rankforge_core::CountTable, CliError> {
    let counts = rankforge_core::closed_form::freq_closed_all(r)?;
    Ok(rankforge_core::CountTable {
        r,
        mode: rankforge_core::CountMode::Inclusive,
        ranking_used: None,
        total: rankforge_core::binom(4 * i64::from(r), 7)?,
        counts,
    })
}

fn base_ranking(engine: &RankingEngine, r: u32, file: Option<&Path>) -> Result<Ranking, CliError> {
    match file {
        None => Ok(engine.frequency_ranking(r)?),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::RankingFile {
                path: path.display().to_string(),
                source,
            })?;
            text.parse().map_err(|source| CliError::RankingParse {
                path: path.display().to_string(),
                source,
            })
        }
    }
}

fn rank(engine: &RankingEngine, target: &Target) -> Result<Outcome, CliError> {
    if let Some(range) = &target.scan {
        let report = engine.scan_breakpoints(*range.start(), *range.end())?;
        return Ok(Outcome::ok(View::Breakpoints(BreakpointView::new(&report))));
    }
    let r = target.ranks.expect("clap requires --ranks or --scan");
    let ranking = engine.frequency_ranking(r)?;
    Ok(Outcome::ok(View::Ranking(RankingView {
        r,
        ranking: ranking.group_labels(),
    })))
}

fn certify(from: u32, pair: Option<(HandClass, HandClass)>) -> Result<Outcome, CliError> {
    let view = match pair {
        Some((a, b)) => CertifyView::pair(from, &certify_pair(a, b, from)?),
        None => CertifyView::stability(&certify_stability(from)?),
    };
    if view.certified {
        return Ok(Outcome::ok(View::Certify(view)));
    }
    let note = view
        .pairs
        .iter()
        .find(|p| !p.certified || p.sign.as_deref() == Some("-"))
        .map(|p| {
            let why = p.detail.clone().unwrap_or_else(|| "order reversed".into());
            format!("{} vs {}: {why}", p.first, p.second)
        })
        .unwrap_or_else(|| "HC is not strictly the most common class".into());
    Ok(Outcome {
        view: View::Certify(view),
        status: Status::CertificationFailed,
        note: Some(note),
    })
}

fn iterate(
    engine: &RankingEngine,
    target: &Target,
    file: Option<&Path>,
    max_iter: usize,
) -> Result<Outcome, CliError> {
    let rs: Vec<u32> = match (&target.scan, target.ranks) {
        (Some(range), _) => range.clone().collect(),
        (None, Some(r)) => vec![r],
        (None, None) => unreachable!("clap requires --ranks or --scan"),
    };
    let mut rows = Vec::new();
    let mut anomalies = Vec::new();
    for r in rs {
        let base = base_ranking(engine, r, file)?;
        let row = match engine.iterate_showdown(r, &base, max_iter) {
            Ok(outcome) => {
                debug_assert!(matches!(
                    outcome.kind,
                    IterationKind::Fixpoint(_) | IterationKind::TwoCycle(_)
                ));
                IterationView::new(&outcome)
            }
            Err(CoreError::LongCycle { length, trajectory }) => {
                anomalies.push(format!("r = {r}: cycle of length {length}"));
                IterationView::from_trajectory(r, "long-cycle", &trajectory)
            }
            Err(CoreError::IterationExhausted { trajectory }) => {
                anomalies.push(format!(
                    "r = {r}: no fixpoint or cycle within {max_iter} steps"
                ));
                IterationView::from_trajectory(r, "exhausted", &trajectory)
            }
            Err(e) => return Err(e.into()),
        };
        rows.push(row);
    }
    let status = if anomalies.is_empty() {
        Status::Success
    } else {
        Status::NoResult
    };
    Ok(Outcome {
        view: View::Iterations(rows),
        status,
        note: (!anomalies.is_empty()).then(|| anomalies.join("; ")),
    })
}
