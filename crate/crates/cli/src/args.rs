use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rankforge_core::HandClass;

#[derive(Debug, Parser)]
#[command(
    name = "rankforge",
    version,
    about = "Exact poker hand frequencies and rankings for decks with r ranks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Worker threads for enumeration
    #[arg(long, global = true, env = "RANKFORGE_THREADS")]
    pub threads: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Allow enumeration past the routine ceiling of r = 16
    #[arg(long, global = true)]
    pub long_run: bool,

    /// Enumerate one hand per suit-permutation orbit, weighted by orbit size
    #[arg(long, global = true)]
    pub suit_canonical: bool,

    /// Seconds between progress reports on stderr (0 disables)
    #[arg(long, global = true, default_value_t = 10)]
    pub progress: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Enum,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inclusive frequency of every hand class
    Freq {
        #[arg(long, value_parser = parse_ranks)]
        ranks: u32,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
    },
    /// Showdown frequencies under the frequency ranking or a ranking file
    Showdown {
        #[arg(long, value_parser = parse_ranks)]
        ranks: u32,
        /// Ranking file: one class per line, lowest first, ties joined by `=`
        #[arg(long)]
        ranking: Option<PathBuf>,
    },
    /// Frequency ranking for one deck, or breakpoints over a range
    Rank {
        #[command(flatten)]
        target: Target,
    },
    /// Certify that the frequency ranking never changes again
    Certify {
        #[arg(long, value_parser = parse_ranks)]
        from: u32,
        /// Certify a single pair `X,Y`: freq(X) - freq(Y) keeps its sign
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(HandClass, HandClass)>,
    },
    /// Iterate showdown rankings to a fixpoint or two-cycle
    Iterate {
        #[command(flatten)]
        target: Target,
        /// Base ranking file (defaults to the frequency ranking)
        #[arg(long)]
        ranking: Option<PathBuf>,
        #[arg(long, default_value_t = rankforge_core::ranking::DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Smallest deck whose showdown ranking equals its frequency ranking
    Agree {
        #[arg(long, value_parser = parse_ranks)]
        max: u32,
        /// Compare all nine classes instead of ignoring HC
        #[arg(long)]
        include_hc: bool,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Target {
    #[arg(long, value_parser = parse_ranks)]
    pub ranks: Option<u32>,
    /// Inclusive range `A..B`
    #[arg(long, value_parser = parse_scan)]
    pub scan: Option<RangeInclusive<u32>>,
}

fn parse_ranks(s: &str) -> Result<u32, String> {
    let r: u32 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if r < rankforge_core::deck::MIN_RANKS {
        return Err(format!(
            "r = {r} is not supported; decks need at least {} ranks",
            rankforge_core::deck::MIN_RANKS
        ));
    }
    Ok(r)
}

pub fn parse_scan(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got `{s}`"))?;
    let (a, b) = (parse_ranks(a)?, parse_ranks(b.trim_start_matches('='))?);
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

pub fn parse_pair(s: &str) -> Result<(HandClass, HandClass), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected X,Y, got `{s}`"))?;
    let a: HandClass = a.parse().map_err(|e| format!("{e}"))?;
    let b: HandClass = b.parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_ranges() {
        assert_eq!(parse_scan("5..1000").unwrap(), 5..=1000);
        assert_eq!(parse_scan("13..=14").unwrap(), 13..=14);
        assert!(parse_scan("4..10").is_err());
        assert!(parse_scan("10..5").is_err());
        assert!(parse_scan("10").is_err());
    }

    #[test]
    fn pairs() {
        assert_eq!(
            parse_pair("FL,1P").unwrap(),
            (HandClass::Flush, HandClass::OnePair)
        );
        assert!(parse_pair("FL").is_err());
        assert!(parse_pair("FL,NO").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
