//! Serializable views of engine results and their table/CSV/JSON rendering.
//!
//! Counts are always carried as decimal strings so that no format loses
//! precision for large decks.

use std::fmt::Write as _;

use num_bigint::Sign;
use rankforge_core::exact::{group_digits, Criterion, SignFailure};
use rankforge_core::ranking::{
    AgreementReport, IterationKind, IterationOutcome, PairOutcome, StabilityReport,
};
use rankforge_core::{BreakpointReport, CountMode, CountTable, HandClass, Ranking};
use serde::{Deserialize, Serialize};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub class: String,
    pub count: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTableView {
    pub r: u32,
    pub mode: String,
    pub method: String,
    /// Ranking the showdown counts were taken under, lowest group first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<String>>,
    pub total: String,
    pub counts: Vec<ClassCount>,
    /// Classes whose closed form was checked against enumeration.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cross_checked: Vec<String>,
}

impl CountTableView {
    /// Inclusive tables list classes in declaration order, showdown tables in
    /// ascending count.
    pub fn new(table: &CountTable, method: &str) -> Self {
        let rows: Vec<(HandClass, String)> = match table.mode {
            CountMode::Inclusive => HandClass::ALL
                .iter()
                .map(|&h| (h, table.get(h).to_string()))
                .collect(),
            CountMode::Showdown => table
                .ascending()
                .into_iter()
                .map(|(h, c)| (h, c.to_string()))
                .collect(),
        };
        CountTableView {
            r: table.r,
            mode: table.mode.as_str().to_string(),
            method: method.to_string(),
            ranking: table.ranking_used.as_ref().map(Ranking::group_labels),
            total: table.total.to_string(),
            counts: rows
                .into_iter()
                .map(|(h, count)| ClassCount {
                    class: h.abbrev().to_string(),
                    count,
                })
                .collect(),
            cross_checked: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankingView {
    pub r: u32,
    /// Tie groups, lowest first, e.g. `"FL=SF"`.
    pub ranking: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentView {
    pub r_low: u32,
    pub r_high: u32,
    pub ranking: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakpointView {
    pub r_min: u32,
    pub r_max: u32,
    pub starts: Vec<u32>,
    pub segments: Vec<SegmentView>,
}

impl BreakpointView {
    pub fn new(report: &BreakpointReport) -> Self {
        BreakpointView {
            r_min: report.segments.first().map_or(0, |s| s.r_low),
            r_max: report.segments.last().map_or(0, |s| s.r_high),
            starts: report.starts(),
            segments: report
                .segments
                .iter()
                .map(|s| SegmentView {
                    r_low: s.r_low,
                    r_high: s.r_high,
                    ranking: s.ranking.group_labels(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairView {
    pub first: String,
    pub second: String,
    pub difference: String,
    pub certified: bool,
    /// `"+"` or `"-"`: sign of `freq(first) - freq(second)` when certified.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl PairView {
    pub fn new(p: &PairOutcome) -> Self {
        let mut view = PairView {
            first: p.first.abbrev().to_string(),
            second: p.second.abbrev().to_string(),
            difference: p.difference.to_string(),
            certified: p.is_certified(),
            sign: None,
            criterion: None,
            witness: None,
            detail: None,
        };
        match &p.result {
            Ok(c) => {
                view.sign = Some(if c.sign == Sign::Minus { "-" } else { "+" }.to_string());
                view.criterion = Some(match &c.criterion {
                    Criterion::ShiftedCoefficients => {
                        format!("shifted coefficients at r = {}", c.x0)
                    }
                    Criterion::IntegerSweep { bound } => {
                        format!("integer sweep over [{}, {bound}] past the root bound", c.x0)
                    }
                });
            }
            Err(e) => {
                if let SignFailure::SignChange { witness, .. } = e {
                    view.witness = Some(witness.to_string());
                }
                view.detail = Some(e.to_string());
            }
        }
        view
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyView {
    pub from: u32,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub high_card_is_bottom: Option<bool>,
    pub pairs: Vec<PairView>,
}

impl CertifyView {
    pub fn stability(report: &StabilityReport) -> Self {
        CertifyView {
            from: report.from_r,
            certified: report.is_certified(),
            ranking: Some(report.ranking.group_labels()),
            high_card_is_bottom: Some(report.high_card_is_bottom),
            pairs: report.pairs.iter().map(PairView::new).collect(),
        }
    }

    pub fn pair(from: u32, outcome: &PairOutcome) -> Self {
        CertifyView {
            from,
            certified: outcome.is_certified(),
            ranking: None,
            high_card_is_bottom: None,
            pairs: vec![PairView::new(outcome)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationView {
    pub r: u32,
    /// `fixpoint`, `two-cycle`, `long-cycle` or `exhausted`.
    pub kind: String,
    pub trajectory: Vec<Vec<String>>,
    /// Pairs whose order the first showdown step reverses or (un)ties.
    pub first_step_changes: Vec<[String; 2]>,
    pub first_step_only_hc: bool,
}

impl IterationView {
    pub fn new(outcome: &IterationOutcome) -> Self {
        let kind = match outcome.kind {
            IterationKind::Fixpoint(_) => "fixpoint",
            IterationKind::TwoCycle(_) => "two-cycle",
        };
        Self::from_trajectory(outcome.r, kind, &outcome.trajectory)
    }

    pub fn from_trajectory(r: u32, kind: &str, trajectory: &[Ranking]) -> Self {
        let changes = match trajectory {
            [base, next, ..] => base.discrepancies(next, &[]),
            _ => Vec::new(),
        };
        IterationView {
            r,
            kind: kind.to_string(),
            trajectory: trajectory.iter().map(Ranking::group_labels).collect(),
            first_step_only_hc: !changes.is_empty()
                && changes
                    .iter()
                    .all(|&(a, b)| a == HandClass::HighCard || b == HandClass::HighCard),
            first_step_changes: changes
                .iter()
                .map(|(a, b)| [a.abbrev().to_string(), b.abbrev().to_string()])
                .collect(),
        }
    }

    pub fn is_anomaly(&self) -> bool {
        !matches!(self.kind.as_str(), "fixpoint" | "two-cycle")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementRowView {
    pub r: u32,
    pub frequency: Vec<String>,
    pub showdown: Vec<String>,
    pub discrepancies: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementView {
    pub include_hc: bool,
    pub r_max: u32,
    pub found: Option<u32>,
    pub rows: Vec<AgreementRowView>,
}

impl AgreementView {
    pub fn new(report: &AgreementReport) -> Self {
        AgreementView {
            include_hc: report.include_hc,
            r_max: report.r_max,
            found: report.found,
            rows: report
                .rows
                .iter()
                .map(|row| AgreementRowView {
                    r: row.r,
                    frequency: row.frequency.group_labels(),
                    showdown: row.showdown.group_labels(),
                    discrepancies: row
                        .discrepancies
                        .iter()
                        .map(|(a, b)| [a.abbrev().to_string(), b.abbrev().to_string()])
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Anything a subcommand prints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum View {
    Counts(CountTableView),
    Ranking(RankingView),
    Breakpoints(BreakpointView),
    Certify(CertifyView),
    Iterations(Vec<IterationView>),
    Agreement(AgreementView),
}

impl View {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("views serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Table => self.table(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut put = |rec: &[&str]| w.write_record(rec).expect("in-memory csv");
        match self {
            View::Counts(t) => {
                put(&["class", "count"]);
                for c in &t.counts {
                    put(&[&c.class, &c.count]);
                }
            }
            View::Ranking(v) => {
                put(&["level", "classes"]);
                for (i, g) in v.ranking.iter().enumerate() {
                    put(&[&i.to_string(), g]);
                }
            }
            View::Breakpoints(b) => {
                put(&["r_low", "r_high", "ranking"]);
                for s in &b.segments {
                    put(&[
                        &s.r_low.to_string(),
                        &s.r_high.to_string(),
                        &s.ranking.join(" "),
                    ]);
                }
            }
            View::Certify(c) => {
                put(&["first", "second", "certified", "sign", "witness"]);
                for p in &c.pairs {
                    put(&[
                        &p.first,
                        &p.second,
                        &p.certified.to_string(),
                        p.sign.as_deref().unwrap_or(""),
                        p.witness.as_deref().unwrap_or(""),
                    ]);
                }
            }
            View::Iterations(rows) => {
                put(&["r", "kind", "steps", "first_step_only_hc"]);
                for it in rows {
                    put(&[
                        &it.r.to_string(),
                        &it.kind,
                        &(it.trajectory.len() - 1).to_string(),
                        &it.first_step_only_hc.to_string(),
                    ]);
                }
            }
            View::Agreement(a) => {
                put(&["r", "agrees", "discrepancies"]);
                for row in &a.rows {
                    let d: Vec<String> = row
                        .discrepancies
                        .iter()
                        .map(|[x, y]| format!("{x}/{y}"))
                        .collect();
                    put(&[&row.r.to_string(), &d.is_empty().to_string(), &d.join(" ")]);
                }
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    fn table(&self) -> String {
        let mut s = String::new();
        match self {
            View::Counts(t) => {
                let _ = writeln!(s, "r = {}, {} counts ({})", t.r, t.mode, t.method);
                if let Some(r) = &t.ranking {
                    let _ = writeln!(s, "ranking: {}", r.join(" < "));
                }
                let rows: Vec<(String, String)> = t
                    .counts
                    .iter()
                    .map(|c| (c.class.clone(), grouped(&c.count)))
                    .collect();
                let width = rows
                    .iter()
                    .map(|r| r.1.len())
                    .max()
                    .unwrap_or(0)
                    .max(grouped(&t.total).len());
                for (class, count) in &rows {
                    let _ = writeln!(s, "{class:<6}{count:>width$}");
                }
                let _ = writeln!(s, "{:<6}{:>width$}", "total", grouped(&t.total));
                if !t.cross_checked.is_empty() {
                    let _ = writeln!(
                        s,
                        "closed form agrees with enumeration for {}",
                        t.cross_checked.join(", ")
                    );
                }
            }
            View::Ranking(v) => {
                let _ = writeln!(s, "# frequency ranking for r = {}, lowest first", v.r);
                for g in v.ranking.iter().filter(|g| g.contains('=')) {
                    let _ = writeln!(s, "# tie: {}", g.replace('=', " = "));
                }
                for g in &v.ranking {
                    let _ = writeln!(s, "{g}");
                }
            }
            View::Breakpoints(b) => {
                let _ = writeln!(
                    s,
                    "{} segments over r = {}..{}",
                    b.segments.len(),
                    b.r_min,
                    b.r_max
                );
                for seg in &b.segments {
                    let span = if seg.r_low == seg.r_high {
                        seg.r_low.to_string()
                    } else {
                        format!("{}-{}", seg.r_low, seg.r_high)
                    };
                    let _ = writeln!(s, "{span:>9}  {}", seg.ranking.join(" < "));
                }
            }
            View::Certify(c) => {
                let verdict = if c.certified {
                    "certified"
                } else {
                    "NOT certified"
                };
                match &c.ranking {
                    Some(r) => {
                        let _ = writeln!(s, "ranking at r = {}: {}", c.from, r.join(" < "));
                        let _ = writeln!(s, "stable for all r >= {}: {verdict}", c.from);
                        if c.high_card_is_bottom == Some(false) {
                            let _ = writeln!(s, "HC is not strictly the most common class");
                        }
                    }
                    None => {
                        let _ = writeln!(s, "sign permanence for r >= {}: {verdict}", c.from);
                    }
                }
                for p in &c.pairs {
                    let _ = write!(s, "  {} - {}: ", p.first, p.second);
                    match (&p.sign, &p.criterion) {
                        (Some(sign), Some(crit)) => {
                            let _ = writeln!(s, "sign {sign} by {crit}");
                        }
                        _ => {
                            let _ = writeln!(s, "{}", p.detail.as_deref().unwrap_or("failed"));
                        }
                    }
                }
            }
            View::Iterations(rows) => {
                for it in rows {
                    let _ = writeln!(
                        s,
                        "r = {}: {} after {} step(s)",
                        it.r,
                        it.kind,
                        it.trajectory.len() - 1
                    );
                    for (i, t) in it.trajectory.iter().enumerate() {
                        let _ = writeln!(s, "  [{i}] {}", t.join(" < "));
                    }
                    if it.first_step_changes.is_empty() {
                        let _ = writeln!(s, "  first step changes nothing");
                    } else {
                        let pairs: Vec<String> = it
                            .first_step_changes
                            .iter()
                            .map(|[a, b]| format!("{a}/{b}"))
                            .collect();
                        let only = if it.first_step_only_hc {
                            " (HC only)"
                        } else {
                            ""
                        };
                        let _ = writeln!(s, "  first step changes{only}: {}", pairs.join(", "));
                    }
                }
            }
            View::Agreement(a) => {
                let scope = if a.include_hc {
                    "all classes"
                } else {
                    "ignoring HC"
                };
                for row in &a.rows {
                    if row.discrepancies.is_empty() {
                        let _ = writeln!(s, "r = {:>2}: agrees", row.r);
                    } else {
                        let d: Vec<String> = row
                            .discrepancies
                            .iter()
                            .map(|[x, y]| format!("{x}/{y}"))
                            .collect();
                        let _ = writeln!(s, "r = {:>2}: {}", row.r, d.join(", "));
                    }
                }
                match a.found {
                    Some(r) => {
                        let _ = writeln!(s, "smallest agreeing r ({scope}): {r}");
                    }
                    None => {
                        let _ = writeln!(s, "no agreeing r <= {} ({scope})", a.r_max);
                    }
                }
            }
        }
        s
    }
}

fn grouped(decimal: &str) -> String {
    decimal
        .parse()
        .map(|n| group_digits(&n))
        .unwrap_or_else(|_| decimal.to_string())
}
