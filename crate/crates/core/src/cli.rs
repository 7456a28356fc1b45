//! Command-line front end. Exit codes: 0 all checks pass, 1 some check
//! failed, 2 usage or configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::clifford::{classify, existence_obstruction, BaseQuery, CliffordSignature, ObstructionQuery, TotalKind};
use crate::error::{Error, Result};
use crate::submersion::{SubmersionKind, SubmersionModel};
use crate::verify::{self, registry, render_text, CheckSpec, Requirement, VerificationReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pseudohopf", version, about = "Verify submersions of pseudo-hyperbolic spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification checks and emit a report.
    Verify(VerifyArgs),
    /// Print the real Clifford algebra of signature (p, q).
    Classify {
        #[arg(long, value_parser = parse_count)]
        p: usize,
        #[arg(long, value_parser = parse_count)]
        q: usize,
    },
    /// Decide whether a (fibre, base) combination can occur.
    Obstruction {
        #[arg(long, value_parser = parse_count)]
        s: usize,
        #[arg(long, value_parser = parse_count)]
        n: usize,
        #[arg(long, value_enum)]
        base: BaseArg,
        #[arg(long, value_enum, default_value = "real")]
        total: TotalArg,
    },
    /// List the registered checks and the models they apply to.
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Theta,
    ComplexHopf,
    QuaternionicHopf,
    OctonionicHopf,
    ComplexToQuaternionic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    Complex,
    Quaternionic,
    RealHyperbolic,
    Cayley,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TotalArg {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Quaternionic/complex dimension parameter.
    #[arg(long, value_parser = parse_count)]
    pub k: Option<usize>,
    /// Complex dimension of the theta base.
    #[arg(long, value_parser = parse_count)]
    pub m: Option<usize>,
    /// Complex index of the theta base.
    #[arg(long, value_parser = parse_count)]
    pub s: Option<usize>,
    #[arg(long, default_value = "200", value_parser = parse_count)]
    pub samples: usize,
    #[arg(long, default_value = "1e-8")]
    pub tol: f64,
    #[arg(long, default_value = "42", value_parser = parse_seed)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Also write the report here; relative paths resolve under REPORT_DIR when set.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Check names, repeatable or comma separated.
    #[arg(long, value_delimiter = ',')]
    pub check: Vec<String>,
    /// Every check on every default model.
    #[arg(long)]
    pub all: bool,
}

fn parse_float_integer(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if !v.is_finite() || v < 0.0 || v.fract() != 0.0 {
        return Err(format!("expected a non-negative integer, got {s}"));
    }
    Ok(v)
}

/// Accepts `200` as well as `2e2`.
fn parse_count(s: &str) -> std::result::Result<usize, String> {
    if let Ok(v) = s.parse::<usize>() {
        return Ok(v);
    }
    let v = parse_float_integer(s)?;
    if v > usize::MAX as f64 {
        return Err(format!("out of range: {s}"));
    }
    Ok(v as usize)
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v = parse_float_integer(s)?;
    if v >= 2f64.powi(53) {
        return Err(format!("seed in scientific notation must be below 2^53: {s}"));
    }
    Ok(v as u64)
}

impl VerifyArgs {
    fn model(&self) -> Result<Option<SubmersionModel>> {
        let k = self.k.unwrap_or(2);
        let kind = match self.model {
            None => return Ok(None),
            Some(ModelArg::Theta) => {
                let s = self.s.unwrap_or(0);
                SubmersionKind::ThetaCircle { m: self.m.unwrap_or(s.max(2)), s }
            }
            Some(ModelArg::ComplexHopf) => SubmersionKind::ComplexHopf { k },
            Some(ModelArg::QuaternionicHopf) => SubmersionKind::QuaternionicHopf { k },
            Some(ModelArg::OctonionicHopf) => SubmersionKind::OctonionicHopf,
            Some(ModelArg::ComplexToQuaternionic) => SubmersionKind::ComplexToQuaternionic { k },
        };
        SubmersionModel::new(kind).map(Some)
    }

    /// The suite to run, validated before any computation.
    fn specs(&self) -> Result<(String, Vec<CheckSpec>)> {
        CheckSpec::new("axioms", None, self.samples, self.tol, self.seed)?;
        let model = self.model()?;
        if self.all {
            return Ok(("default".into(), verify::default_suite(self.samples, self.tol, self.seed)?));
        }
        if self.check.is_empty() {
            let Some(m) = model else {
                return Err(Error::Config("specify --model, --check or --all".into()));
            };
            let specs = verify::suite_for(&[m], self.samples, self.tol, self.seed)?
                .into_iter()
                .filter(|s| s.model.is_some())
                .collect();
            return Ok((m.kind().to_string(), specs));
        }
        let mut specs = Vec::new();
        for name in &self.check {
            let info = verify::lookup(name)?;
            verify::supports(info, model.as_ref())?;
            specs.push(CheckSpec::new(name, model, self.samples, self.tol, self.seed)?);
        }
        Ok(("custom".into(), specs))
    }
}

fn output_path(arg: &Option<PathBuf>, format: Format) -> Option<PathBuf> {
    let dir = std::env::var_os("REPORT_DIR").map(PathBuf::from);
    match (arg, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => Some(d.join(match format {
            Format::Json => "report.json",
            Format::Text => "report.txt",
        })),
        (None, None) => None,
    }
}

fn render(report: &VerificationReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(report.to_json()? + "\n"),
        Format::Text => Ok(render_text(report)),
    }
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let (suite, specs) = args.specs()?;
    let start = Instant::now();
    let report = verify::run_named_suite(&suite, args.seed, &specs);
    let mut body = render(&report, args.format)?;
    if args.format == Format::Text {
        body.push_str(&format!("wall time {:.2} s\n", start.elapsed().as_secs_f64()));
    }
    if let Some(path) = output_path(&args.output, args.format) {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(|e| Error::Config(format!("{}: {e}", parent.display())))?;
        }
        std::fs::write(&path, &body).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    }
    out.write_all(body.as_bytes()).map_err(|e| Error::Config(format!("writing output: {e}")))?;
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_list(out: &mut dyn Write) -> Result<i32> {
    for info in registry() {
        let applies = match info.requirement {
            Requirement::NoModel => "no model",
            Requirement::AnyModel => "all models",
            Requirement::RealTotal => "real total space",
            Requirement::RiemannianBase => "Riemannian base",
            Requirement::CentralVolume => "odd fibre >= 3, Riemannian base",
            Requirement::FibreAction => "circle and quaternionic fibres",
        };
        writeln!(out, "{:<22} {:<32} {}", info.name, applies, info.anchor)
            .map_err(|e| Error::Config(format!("writing output: {e}")))?;
    }
    Ok(EXIT_PASS)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Config(format!("writing output: {e}"));
    match &cli.command {
        Command::Verify(args) => cmd_verify(args, out),
        Command::Classify { p, q } => {
            let class = classify(CliffordSignature::new(*p, *q)?)?;
            writeln!(out, "{class}").map_err(io)?;
            Ok(EXIT_PASS)
        }
        Command::Obstruction { s, n, base, total } => {
            let base = match base {
                BaseArg::Complex => BaseQuery::Complex,
                BaseArg::Quaternionic => BaseQuery::Quaternionic,
                BaseArg::RealHyperbolic => BaseQuery::RealHyperbolic,
                BaseArg::Cayley => BaseQuery::Cayley,
                BaseArg::Any => BaseQuery::Any,
            };
            let total = match total {
                TotalArg::Real => TotalKind::Real,
                TotalArg::Complex => TotalKind::Complex,
            };
            let verdict = existence_obstruction(ObstructionQuery { total, s: *s, n: *n, base })?;
            writeln!(out, "{verdict}").map_err(io)?;
            Ok(EXIT_PASS)
        }
        Command::List => cmd_list(out),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accept_scientific_notation() {
        assert_eq!(parse_count("2e2"), Ok(200));
        assert_eq!(parse_count("17"), Ok(17));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
        assert_eq!(parse_seed("4.2e1"), Ok(42));
    }

    #[test]
    fn theta_defaults_keep_m_at_least_s() {
        let cli = Cli::try_parse_from(["pseudohopf", "verify", "--model", "theta", "--s", "3"]).unwrap();
        let Command::Verify(args) = cli.command else { panic!() };
        assert_eq!(args.model().unwrap().unwrap().kind(), SubmersionKind::ThetaCircle { m: 3, s: 3 });
    }
}
