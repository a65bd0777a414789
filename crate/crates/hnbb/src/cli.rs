//! Argument parsing and command dispatch.

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hnbb_core::{
    build_table, classify, enumerate_fixed_components, enumerate_strata, invariant_range, validate,
    CaseFamily, ClassifierInput, Genus, HNType, Invariant, InvariantRange, Rank, Rational,
};

use crate::formats::{
    bb_index_text, component_record, incidence_dot, outcome_record, stratum_record, table_records,
    to_csv, to_table, Document, Query, Record,
};
use crate::verify::{run_all, SweepConfig};

/// Strata, fixed points and limits of the `C*`-flow on rank 2 and 3 Higgs
/// bundle moduli.
#[derive(Debug, Parser)]
#[command(name = "hnbb", version)]
pub struct Cli {
    /// What to compute.
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the admissible Shatz strata.
    Strata(Space),
    /// List the fixed-point components.
    Fixed(Space),
    /// Classify the limit of one Higgs bundle.
    Limit(LimitArgs),
    /// Shatz x Bialynicki-Birula incidence table.
    Incidence(Space),
    /// Run every acceptance check over a grid of genera and degrees.
    Verify(VerifyArgs),
}

/// Output options.
#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Aligned columns.
    Table,
    /// JSON document.
    Json,
    /// Comma-separated values.
    Csv,
    /// Graphviz (incidence only).
    Dot,
}

/// A moduli space `M(rank, degree)` over a curve of genus `g`.
#[derive(Debug, Clone, Args)]
pub struct Space {
    /// Genus of the curve, at least 2.
    #[arg(long, value_parser = parse_genus)]
    pub genus: Genus,
    /// Rank, 2 or 3.
    #[arg(long, value_parser = parse_rank)]
    pub rank: Rank,
    /// Degree.
    #[arg(long, allow_negative_numbers = true)]
    pub degree: i64,
    #[command(flatten)]
    #[allow(missing_docs)]
    pub out: OutputArgs,
}

/// Arguments of `limit`.
#[derive(Debug, Clone, Args)]
pub struct LimitArgs {
    /// Genus of the curve, at least 2.
    #[arg(long, value_parser = parse_genus)]
    pub genus: Genus,
    /// HN type, e.g. "1:1,2:0".
    #[arg(long, allow_hyphen_values = true)]
    pub hn: HNType,
    /// Rank; must agree with the HN type if given.
    #[arg(long, value_parser = parse_rank)]
    pub rank: Option<Rank>,
    /// Degree; must agree with the HN type if given.
    #[arg(long, allow_negative_numbers = true)]
    pub degree: Option<i64>,
    /// Degree of I or N, or the alignment flag (true/false,
    /// aligned/misaligned).
    #[arg(long = "inv", allow_negative_numbers = true)]
    pub inv: Option<InvArg>,
    #[command(flatten)]
    #[allow(missing_docs)]
    pub out: OutputArgs,
}

/// Arguments of `verify`.
#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Smallest genus swept.
    #[arg(long, default_value_t = 2)]
    pub min_genus: i64,
    /// Largest genus swept.
    #[arg(long, default_value_t = 5)]
    pub max_genus: i64,
    /// Smallest degree swept.
    #[arg(long, default_value_t = -6, allow_negative_numbers = true)]
    pub min_degree: i64,
    /// Largest degree swept.
    #[arg(long, default_value_t = 6, allow_negative_numbers = true)]
    pub max_degree: i64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Value of `--inv`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvArg {
    /// Degree of the line bundle `I` or `N`.
    Degree(i64),
    /// `N = E_1`.
    Flag(bool),
}

impl FromStr for InvArg {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        match text {
            "true" | "aligned" => Ok(InvArg::Flag(true)),
            "false" | "misaligned" => Ok(InvArg::Flag(false)),
            _ => text.parse().map(InvArg::Degree).map_err(|_| {
                format!("expected an integer degree or true/false/aligned/misaligned, got {text:?}")
            }),
        }
    }
}

fn parse_genus(text: &str) -> Result<Genus, String> {
    let g: i64 = text
        .parse()
        .map_err(|_| format!("{text:?} is not an integer"))?;
    Genus::new(g).map_err(|e| e.to_string())
}

fn parse_rank(text: &str) -> Result<Rank, String> {
    let r: u32 = text
        .parse()
        .map_err(|_| format!("{text:?} is not a rank"))?;
    Rank::try_from(r).map_err(|r| format!("rank must be 2 or 3, got {r}"))
}

/// Rendered output and whether the command succeeded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    /// Text to print or write.
    pub text: String,
    /// Exit status 0 when true.
    pub success: bool,
    /// Destination file.
    pub output: Option<PathBuf>,
}

fn render(query: Query, records: Vec<Record>, format: Format) -> Result<String> {
    match format {
        Format::Table => Ok(to_table(&records)),
        Format::Json => Document::new(query, records).to_json(),
        Format::Csv => to_csv(&records),
        Format::Dot => bail!("--format dot is only available for `incidence`"),
    }
}

fn space_query(command: &str, space: &Space) -> Query {
    Query {
        command: command.into(),
        genus: space.genus.get(),
        rank: space.rank.get(),
        degree: space.degree,
        hn: None,
        invariant: None,
    }
}

fn range_of(stratum: &hnbb_core::AdmissibleStratum) -> InvariantRange {
    invariant_range(stratum).unwrap_or_else(|_| InvariantRange::not_applicable())
}

fn to_invariant(inv: Option<InvArg>, range: &InvariantRange, hn: &HNType) -> Result<Invariant> {
    Ok(match (inv, range.family) {
        (None, CaseFamily::None) => Invariant::NotApplicable,
        (None, family) => bail!(
            "--inv is required: stratum {hn} needs the {} datum",
            family.as_str()
        ),
        (Some(InvArg::Degree(v)), CaseFamily::SlopeOfN) => {
            Invariant::SlopeN(Rational::from_integer(v))
        }
        (Some(InvArg::Degree(v)), _) => Invariant::SlopeI(Rational::from_integer(v)),
        (Some(InvArg::Flag(b)), _) => Invariant::Aligned(b),
    })
}

fn limit(args: &LimitArgs) -> Result<String> {
    let hn = &args.hn;
    if let Some(rank) = args.rank {
        if rank.get() != hn.total_rank() {
            bail!(
                "--rank {rank} does not match the rank {} of --hn {hn}",
                hn.total_rank()
            );
        }
    }
    if let Some(degree) = args.degree {
        if degree != hn.total_degree() {
            bail!(
                "--degree {degree} does not match the degree {} of --hn {hn}",
                hn.total_degree()
            );
        }
    }
    let stratum = validate(hn, args.genus).with_context(|| format!("--hn {hn}"))?;
    let range = range_of(&stratum);
    let invariant = to_invariant(args.inv, &range, hn)?;
    let outcome = classify(&ClassifierInput::new(stratum.clone(), invariant))?;
    let query = Query {
        command: "limit".into(),
        genus: args.genus.get(),
        rank: hn.total_rank(),
        degree: hn.total_degree(),
        hn: Some(hn.to_string()),
        invariant: Some(invariant.to_string()),
    };
    let record = Record::Outcome(outcome_record(&stratum, &invariant, &outcome, &range));
    render(query, vec![record], args.out.format)
}

fn incidence(space: &Space) -> Result<String> {
    let table = build_table(space.rank, space.degree, space.genus);
    let records = table_records(&table);
    match space.out.format {
        Format::Dot => Ok(incidence_dot(&table)),
        Format::Json => {
            let mut doc = Document::new(space_query("incidence", space), records);
            doc.meta.bb_index = Some(bb_index_text(&table));
            doc.to_json()
        }
        other => render(space_query("incidence", space), records, other),
    }
}

fn verify(args: &VerifyArgs) -> Result<(String, bool)> {
    let config = SweepConfig {
        genera: args.min_genus..=args.max_genus,
        degrees: args.min_degree..=args.max_degree,
    };
    let reports = run_all(&config).map_err(anyhow::Error::msg)?;
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_string());
        text.push('\n');
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    text.push_str(&format!("{passed}/{} criteria passed\n", reports.len()));
    Ok((text, passed == reports.len()))
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<RunOutput> {
    let (text, success, output) = match &cli.command {
        Command::Strata(space) => {
            let records = enumerate_strata(space.rank, space.degree, space.genus)
                .iter()
                .map(|s| Record::Stratum(stratum_record(s, &range_of(s))))
                .collect();
            let text = render(space_query("strata", space), records, space.out.format)?;
            (text, true, space.out.output.clone())
        }
        Command::Fixed(space) => {
            let records = enumerate_fixed_components(space.rank, space.degree, space.genus)
                .iter()
                .map(|c| Record::Component(component_record(c, space.genus)))
                .collect();
            let text = render(space_query("fixed", space), records, space.out.format)?;
            (text, true, space.out.output.clone())
        }
        Command::Limit(args) => (limit(args)?, true, args.out.output.clone()),
        Command::Incidence(space) => (incidence(space)?, true, space.out.output.clone()),
        Command::Verify(args) => {
            let (text, ok) = verify(args)?;
            (text, ok, args.output.clone())
        }
    };
    Ok(RunOutput {
        text,
        success,
        output,
    })
}
