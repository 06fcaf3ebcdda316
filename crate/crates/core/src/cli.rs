//! Command-line front end. [`run`] captures output and the exit code so the
//! binary stays a thin wrapper.
//!
//! Exit codes: 0 success, 1 domain error (non-member, dimension, failed
//! verification), 2 usage error (bad flags, unreadable or malformed input).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::evasive::{EvasiveSet, Message};
use crate::field::{FieldCtx, FieldElement};
use crate::intersect::{intersect_with, SolverKind};
use crate::linalg::SubspaceFile;
use crate::listdec::{simulate, Rational, SimConfig};
use crate::params::{gen_params, EvasiveParams};
use crate::verify::{verify, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "evasive", version, about = "Subspace-evasive sets over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a parameter file (JSON on stdout, or to --out).
    GenParams {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map a message to a member of the set.
    Encode {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, required_unless_present = "message_file", conflicts_with = "message_file")]
        message: Option<String>,
        #[arg(long)]
        message_file: Option<PathBuf>,
    },
    /// Recover the message of a member; exits 1 for non-members.
    Decode {
        #[command(flatten)]
        params: ParamsArg,
        #[command(flatten)]
        point: PointArg,
    },
    /// Print true or false.
    Member {
        #[command(flatten)]
        params: ParamsArg,
        #[command(flatten)]
        point: PointArg,
    },
    /// List the members of an affine subspace.
    Intersect {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long)]
        subspace: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverArg::Exhaustive)]
        solver: SolverArg,
    },
    /// Run the brute-force oracle suite.
    Verify {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Simulate subspace filtering after an outer list decoder.
    Simulate {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rate of the outer code as a fraction, e.g. 1/2.
        #[arg(long, default_value = "1/2")]
        rate: String,
    },
}

#[derive(Debug, Args)]
struct ParamsArg {
    #[arg(long = "params")]
    path: PathBuf,
}

#[derive(Debug, Args)]
struct PointArg {
    /// Comma-separated coordinates.
    #[arg(long, required_unless_present = "point_file", conflicts_with = "point_file")]
    point: Option<String>,
    #[arg(long)]
    point_file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolverArg {
    Exhaustive,
    Univariate,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(cli.command) {
        Ok((code, stdout)) => Output {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Output {
            code: if e.is_usage() { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Parses `a,b,c` into field elements; every value must be below `p`.
pub fn parse_csv(ctx: FieldCtx, text: &str) -> Result<Vec<FieldElement>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            let v: u64 = s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not a non-negative integer: {s:?}")))?;
            ctx.try_elem(v)
        })
        .collect()
}

pub fn format_point(x: &[FieldElement]) -> String {
    x.iter()
        .map(|v| v.value().to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_set(arg: &ParamsArg) -> Result<EvasiveSet> {
    let json = read_text(&arg.path)?;
    EvasiveSet::new(EvasiveParams::from_json(&json)?)
}

fn vector(ctx: FieldCtx, inline: &Option<String>, file: &Option<PathBuf>) -> Result<Vec<FieldElement>> {
    match (inline, file) {
        (Some(s), _) => parse_csv(ctx, s),
        (None, Some(path)) => parse_csv(ctx, &read_text(path)?),
        (None, None) => Err(Error::Parse("no vector given".into())),
    }
}

fn parse_rate(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("rate must be a fraction like 1/2, got {text:?}"));
    let (a, b) = text.split_once('/').unwrap_or((text, "1"));
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if b == 0 {
        return Err(bad());
    }
    Ok(Rational::new(a, b))
}

fn lines(points: &[Vec<FieldElement>]) -> String {
    let mut out = String::new();
    for x in points {
        writeln!(out, "{}", format_point(x)).unwrap();
    }
    out
}

fn execute(cmd: Command) -> Result<(u8, String)> {
    match cmd {
        Command::GenParams { k, m, n, out } => {
            let json = gen_params(k, m, n)?.to_json();
            match out {
                Some(path) => {
                    std::fs::write(&path, &json)?;
                    Ok((0, String::new()))
                }
                None => Ok((0, json)),
            }
        }
        Command::Encode {
            params,
            message,
            message_file,
        } => {
            let s = load_set(&params)?;
            let msg = Message(vector(s.ctx(), &message, &message_file)?);
            Ok((0, format!("{}\n", format_point(&s.encode(&msg)?))))
        }
        Command::Decode { params, point } => {
            let s = load_set(&params)?;
            let x = vector(s.ctx(), &point.point, &point.point_file)?;
            Ok((0, format!("{}\n", format_point(s.decode(&x)?.as_slice()))))
        }
        Command::Member { params, point } => {
            let s = load_set(&params)?;
            let x = vector(s.ctx(), &point.point, &point.point_file)?;
            Ok((0, format!("{}\n", s.member_set(&x)?)))
        }
        Command::Intersect {
            params,
            subspace,
            solver,
        } => {
            let s = load_set(&params)?;
            let file: SubspaceFile = serde_json::from_str(&read_text(&subspace)?)?;
            let h = file.to_subspace()?;
            let solver = match solver {
                SolverArg::Exhaustive => SolverKind::Exhaustive,
                SolverArg::Univariate => SolverKind::Univariate,
            };
            Ok((0, lines(&intersect_with(&s, &h, &solver)?.points)))
        }
        Command::Verify {
            params,
            trials,
            seed,
        } => {
            let s = load_set(&params)?;
            let report = verify(&s, VerifyConfig { trials, seed })?;
            let code = if report.all_passed() { 0 } else { 1 };
            Ok((code, report.render()))
        }
        Command::Simulate {
            params,
            trials,
            seed,
            rate,
        } => {
            let set = load_set(&params)?;
            let cfg = SimConfig {
                set,
                trials,
                seed,
                base_rate: parse_rate(&rate)?,
            };
            let report = simulate(&cfg)?;
            let code = if report.all_contained() { 0 } else { 1 };
            Ok((code, report.render()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_parsing() {
        let c = FieldCtx::new(7).unwrap();
        assert_eq!(parse_csv(c, "6, 1,0,0\n").unwrap(), c.elems(&[6, 1, 0, 0]));
        assert!(parse_csv(c, "").unwrap().is_empty());
        assert!(matches!(parse_csv(c, "7"), Err(Error::Parse(_))));
        assert!(matches!(parse_csv(c, "-1"), Err(Error::Parse(_))));
        assert!(matches!(parse_csv(c, "1,,2"), Err(Error::Parse(_))));
        assert_eq!(format_point(&c.elems(&[6, 1, 0])), "6,1,0");
    }

    #[test]
    fn rates() {
        assert_eq!(parse_rate("1/2").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_rate("3/6").unwrap(), Rational::new(1, 2));
        assert!(parse_rate("1/0").is_err());
        assert!(parse_rate("half").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["evasive", "gen-params", "--k", "2"]).code, 2);
        assert_eq!(run(["evasive", "frobnicate"]).code, 2);
        assert_eq!(run(["evasive", "member", "--params", "/nonexistent", "--point", "1"]).code, 2);
        assert_eq!(run(["evasive", "gen-params", "--k", "2", "--m", "3", "--n", "8"]).code, 2);
    }

    #[test]
    fn gen_params_example() {
        let out = run(["evasive", "gen-params", "--k", "2", "--m", "4", "--n", "8"]);
        assert_eq!(out.code, 0);
        let p = EvasiveParams::from_json(&out.stdout).unwrap();
        assert_eq!(p.p(), 17);
        assert_eq!(p.degrees(), &[5, 4, 3, 2]);
    }
}
