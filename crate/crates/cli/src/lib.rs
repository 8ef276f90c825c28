//! The `tensorcert` command line.
//!
//! Exit codes: 0 when the requested claim is certified, 1 when the checks
//! ran but some hypothesis failed, 2 for invalid input or arguments and 3
//! when an input file does not parse. Errors are reported on one line of
//! stderr as `error[<kind>]: <reason>`.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use tensorcert::certify::{
    bound_cactus_rank, certify_ee4, certify_exact_rank, check_non_redundant, obstruct_alt_decompositions,
    pin_projections, verify_prop_bb,
};
use tensorcert::construct::{augment_decomposition, survey, DEFAULT_BOX};
use tensorcert::instance::{Decomposition, InstanceFile};
use tensorcert::kruskal::{compare_criteria, kruskal_certificate};
use tensorcert::report::{emit, Format, TextReport};
use tensorcert::shape::parse_families;
use tensorcert::symmetric::comon_certify;
use tensorcert::{Error, FactorPartition, MultiShape};

/// Environment variable supplying the default `--seed`.
pub const SEED_ENV: &str = "TENSORCERT_SEED";

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_NOT_CERTIFIED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tensorcert", version, about = "Exact certificates for tensor rank and identifiability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON instance file.
    #[arg(long)]
    input: PathBuf,
    /// Output format: text or json.
    #[arg(long, default_value = "text", value_parser = parse_format)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Non-redundancy, flattening lower bound and exact rank.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Single bipartition such as 1,2/3; all are tried when absent.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Minimality and identifiability for small rank.
    Identifiability {
        #[command(flatten)]
        common: Common,
    },
    /// Kruskal ranks and the k-way Kruskal condition.
    Kruskal {
        #[command(flatten)]
        common: Common,
    },
    /// Every criterion side by side.
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Extend the decomposition by one point, keeping it non-redundant.
    Augment {
        #[command(flatten)]
        common: Common,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        /// Bound on sampled integer coordinates.
        #[arg(long = "box", default_value_t = DEFAULT_BOX)]
        sample_box: i64,
    },
    /// Rule out alternative decompositions with at most x points and
    /// different coordinates.
    Obstruct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: usize,
    },
    /// Pin the factor projections of alternative decompositions.
    Pin {
        #[command(flatten)]
        common: Common,
        /// One factor list per factor, colon separated, e.g. 1,2:1,2:3.
        #[arg(long)]
        families: String,
        /// Accept quasi-generality of every family projection.
        #[arg(long)]
        assert_quasi_general: bool,
    },
    /// Rank = symmetric rank certificate for the `symmetric` stanza.
    Comon {
        #[command(flatten)]
        common: Common,
    },
    /// Check the span intersection identity for two point sets.
    BbCheck {
        #[command(flatten)]
        common: Common,
        /// Second instance file; its points form the set B.
        #[arg(long)]
        against: PathBuf,
    },
    /// Tally every criterion over random decompositions.
    Survey {
        /// Tensor types, e.g. 3x4x6,2x2x2.
        #[arg(long)]
        shapes: String,
        /// Ranks, e.g. 1-6 or 2,4.
        #[arg(long)]
        ranks: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long = "box", default_value_t = DEFAULT_BOX)]
        sample_box: i64,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "text", value_parser = parse_format)]
        format: Format,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a run printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn report(certified: bool, stdout: String) -> Self {
        Outcome {
            code: if certified { EXIT_CERTIFIED } else { EXIT_NOT_CERTIFIED },
            stdout,
            stderr: String::new(),
        }
    }

    fn failure(code: i32, kind: &str, reason: &str) -> Self {
        let reason = reason.replace('\n', " ");
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error[{kind}]: {reason}\n"),
        }
    }

    fn from_error(e: &Error) -> Self {
        match e {
            Error::Parse(_) => Self::failure(EXIT_PARSE, "parse", &e.to_string()),
            Error::RetryExhausted(_) => Self::failure(EXIT_NOT_CERTIFIED, "not-certified", &e.to_string()),
            _ => Self::failure(EXIT_INVALID, "invalid", &e.to_string()),
        }
    }
}

fn read_instance(path: &Path) -> Result<InstanceFile, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    InstanceFile::parse(&text)
}

fn load(path: &Path) -> Result<Decomposition, Error> {
    read_instance(path)?.decomposition()
}

fn parse_ranks(s: &str) -> Result<Vec<usize>, Error> {
    let bad = || Error::Parse(format!("invalid rank list {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: usize = lo.trim().parse().map_err(|_| bad())?;
                let hi: usize = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn execute(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Certify { common, partition } => {
            let d = load(&common.input)?;
            let partition = partition
                .map(|p| FactorPartition::parse(&p, d.set.shape().k()))
                .transpose()?;
            let non_redundant = check_non_redundant(&d.tensor, &d.set)?;
            let bound = bound_cactus_rank(&d.set, partition.as_ref())?;
            let exact = certify_exact_rank(&d.tensor, &d.set, partition.as_ref())?;
            let out = match common.format {
                Format::Json => serde_json::to_string_pretty(&json!({
                    "non_redundant": non_redundant,
                    "lower_bound": bound,
                    "exact_rank": exact,
                }))
                .expect("reports serialize"),
                Format::Text => format!(
                    "== non-redundancy ==\n{}== lower bound ==\n{}== exact rank ==\n{}",
                    non_redundant.to_text(),
                    bound.to_text(),
                    exact.to_text()
                ),
            };
            Ok(Outcome::report(exact.is_certified(), out))
        }
        Command::Identifiability { common } => {
            let d = load(&common.input)?;
            let cert = certify_ee4(&d.tensor, &d.set)?;
            Ok(Outcome::report(cert.is_certified(), emit(&cert, common.format)))
        }
        Command::Kruskal { common } => {
            let d = load(&common.input)?;
            let report = kruskal_certificate(&d.set)?;
            Ok(Outcome::report(report.applies, emit(&report, common.format)))
        }
        Command::Compare { common } => {
            let d = load(&common.input)?;
            let cmp = compare_criteria(&d.tensor, &d.set)?;
            let any = cmp.exact_rank.is_some() || cmp.small_rank.is_some() || cmp.kruskal_applies;
            Ok(Outcome::report(any, emit(&cmp, common.format)))
        }
        Command::Augment {
            common,
            seed,
            sample_box,
        } => {
            let d = load(&common.input)?;
            let aug = augment_decomposition(&d.tensor, &d.set, &d.weights, sample_box, seed)?;
            let file = InstanceFile::from_decomposition(&aug.set, &aug.weights, Some(&d.tensor));
            let out = match common.format {
                Format::Json => serde_json::to_string_pretty(&json!({
                    "augmentation": aug,
                    "instance": file,
                }))
                .expect("reports serialize"),
                Format::Text => format!("{}instance:\n{}\n", aug.to_text(), file.to_json()),
            };
            Ok(Outcome::report(aug.certificate.is_certified(), out))
        }
        Command::Obstruct { common, x } => {
            let d = load(&common.input)?;
            let non_redundant = check_non_redundant(&d.tensor, &d.set)?;
            let cert = obstruct_alt_decompositions(&d.set, x)?;
            let out = match common.format {
                Format::Json => serde_json::to_string_pretty(&json!({
                    "non_redundant": non_redundant,
                    "obstruction": cert,
                }))
                .expect("reports serialize"),
                Format::Text => format!(
                    "== non-redundancy ==\n{}== obstruction ==\n{}",
                    non_redundant.to_text(),
                    cert.to_text()
                ),
            };
            Ok(Outcome::report(non_redundant.is_certified() && cert.is_certified(), out))
        }
        Command::Pin {
            common,
            families,
            assert_quasi_general,
        } => {
            let d = load(&common.input)?;
            let k = d.set.shape().k();
            let families = parse_families(&families, k)?;
            let flags = vec![assert_quasi_general; k];
            let report = pin_projections(&d.tensor, &d.set, &families, &flags)?;
            Ok(Outcome::report(report.overall.is_certified(), emit(&report, common.format)))
        }
        Command::Comon { common } => {
            let inst = read_instance(&common.input)?.symmetric_instance()?;
            let cert = comon_certify(&inst.tensor, &inst.points)?;
            Ok(Outcome::report(cert.is_certified(), emit(&cert, common.format)))
        }
        Command::BbCheck { common, against } => {
            let a = read_instance(&common.input)?.point_set()?;
            let b = read_instance(&against)?.point_set()?;
            let cert = verify_prop_bb(&a, &b)?;
            Ok(Outcome::report(cert.is_certified(), emit(&cert, common.format)))
        }
        Command::Survey {
            shapes,
            ranks,
            trials,
            sample_box,
            seed,
            format,
        } => {
            let shapes = shapes
                .split(',')
                .map(|s| s.trim().parse::<MultiShape>())
                .collect::<Result<Vec<_>, _>>()?;
            let ranks = parse_ranks(&ranks)?;
            let report = survey(&shapes, &ranks, trials, sample_box, seed)?;
            Ok(Outcome::report(true, emit(&report, format)))
        }
    }
}

/// Runs the command line given by `args`, program name first.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_CERTIFIED,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => {
                    let first = e.to_string();
                    let line = first.lines().next().unwrap_or("invalid arguments");
                    let line = line.strip_prefix("error: ").unwrap_or(line);
                    Outcome::failure(EXIT_INVALID, "usage", line)
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(outcome) => outcome,
        Err(e) => Outcome::from_error(&e),
    }
}
