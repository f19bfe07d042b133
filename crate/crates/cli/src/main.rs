//! `conclusive`: run, sweep, sample and verify the teleportation and secret
//! sharing protocols.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conclusive_core::analysis::{
    binomial_bound, bit_report, enumerate_protocol, monte_carlo, shot_rng, success_probability,
    within_binomial_bound,
};
use conclusive_core::protocols::Sampled;
use conclusive_core::{verify, ChannelSpec, Error, InputQubit, ProtocolId, RunTrace, SampleStats};
use num_complex::Complex64;
use serde::Serialize;

const DEFAULT_BETAS: &str = "0.1,0.2,0.3,0.4,0.5,0.6,0.7071067811865476";

#[derive(Parser)]
#[command(
    name = "conclusive",
    version,
    about = "Conclusive teleportation and secret sharing simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one seeded run and print its trace.
    Run(RunArgs),
    /// Exact success probability and bit cost over a β grid.
    Sweep(SweepArgs),
    /// Monte Carlo estimate checked against the exact value.
    Sample(SampleArgs),
    /// Run the acceptance checks.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Protocol: standard, mh, qact1, qact2, hbb, css1_mh, css1_qact1, css2, css3.
    #[arg(long)]
    protocol: String,
    /// Smaller Schmidt coefficient; α = √(1-β²). Defaults to the maximal channel.
    #[arg(long)]
    beta: Option<f64>,
    /// Larger Schmidt coefficient; β = √(1-α²) when --beta is absent.
    #[arg(long)]
    alpha: Option<f64>,
    /// Input amplitude of |0>, as `re` or `re,im`.
    #[arg(long, requires = "b", allow_hyphen_values = true)]
    a: Option<String>,
    /// Input amplitude of |1>, as `re` or `re,im`.
    #[arg(long, requires = "a", allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, env = "CONCLUSIVE_FORMAT", default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated protocols, or `all`.
    #[arg(long, default_value = "all")]
    protocols: String,
    /// Comma-separated β values in (0, 1/√2].
    #[arg(long, default_value = DEFAULT_BETAS, allow_hyphen_values = true)]
    betas: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Print the report as JSON instead of text lines.
    #[arg(long)]
    json: bool,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BadSpec(_)
            | Error::BadInput(_)
            | Error::UnknownProtocol(_)
            | Error::InvalidArgument(_) => 2,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self {
            code: 1,
            message: e.to_string(),
        }
    }
}

type CmdResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_complex(s: &str) -> CmdResult<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| {
        p.parse::<f64>()
            .map_err(|_| Failure::config(format!("cannot parse amplitude `{s}`")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Failure::config(format!(
            "amplitude `{s}` is not `re` or `re,im`"
        ))),
    }
}

fn channel(beta: Option<f64>, alpha: Option<f64>) -> CmdResult<ChannelSpec> {
    Ok(match (alpha, beta) {
        (None, None) => ChannelSpec::maximal(),
        (None, Some(b)) => ChannelSpec::from_beta(b)?,
        (Some(a), None) => ChannelSpec::from_alpha(a)?,
        (Some(a), Some(b)) => ChannelSpec::new(a, b)?,
    })
}

impl Common {
    fn resolve(&self) -> CmdResult<(ProtocolId, ChannelSpec, InputQubit)> {
        let id: ProtocolId = self.protocol.parse()?;
        let c = channel(self.beta, self.alpha)?;
        let q = match (&self.a, &self.b) {
            (Some(a), Some(b)) => InputQubit::new(parse_complex(a)?, parse_complex(b)?)?,
            _ => InputQubit::reference(),
        };
        Ok((id, c, q))
    }
}

fn sink(out: &Option<PathBuf>) -> CmdResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> CmdResult<()> {
    let mut w = sink(out)?;
    serde_json::to_writer(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

fn write_csv<T: Serialize>(out: &Option<PathBuf>, rows: &[T]) -> CmdResult<()> {
    let mut w = csv::Writer::from_writer(sink(out)?);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Exact values are printed rounded to 12 decimals so `2β²` reads as such.
fn tidy(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Serialize)]
struct RunRow {
    protocol: String,
    alpha: f64,
    beta: f64,
    seed: u64,
    success: bool,
    fidelity: f64,
    path: String,
    path_probability: f64,
    bits: String,
    total_bits: u32,
}

fn cmd_run(args: RunArgs) -> CmdResult<ExitCode> {
    let (id, c, q) = args.common.resolve()?;
    let mut rng = shot_rng(args.common.seed, 0);
    let trace: RunTrace = id.execute(&q, &c, &mut Sampled(&mut rng))?;
    match args.output.format {
        Format::Json => write_json(&args.output.out, &trace)?,
        Format::Csv => {
            let t = trace.base();
            let bits: Vec<String> = t.bits.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write_csv(
                &args.output.out,
                &[RunRow {
                    protocol: id.to_string(),
                    alpha: c.alpha(),
                    beta: c.beta(),
                    seed: args.common.seed,
                    success: t.success,
                    fidelity: t.fidelity,
                    path: t.path.join("/"),
                    path_probability: t.path_probability,
                    bits: bits.join(";"),
                    total_bits: t.total_bits(),
                }],
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SweepRow {
    protocol: String,
    beta: f64,
    p_success: f64,
    expected_bits: f64,
    fidelity_given_success: Option<f64>,
}

fn parse_protocols(s: &str) -> CmdResult<Vec<ProtocolId>> {
    if s.trim() == "all" {
        return Ok(ProtocolId::ALL.to_vec());
    }
    s.split(',')
        .map(|p| Ok(p.trim().parse::<ProtocolId>()?))
        .collect()
}

fn parse_betas(s: &str) -> CmdResult<Vec<f64>> {
    let limit = std::f64::consts::FRAC_1_SQRT_2;
    s.split(',')
        .map(|t| {
            let b: f64 = t
                .trim()
                .parse()
                .map_err(|_| Failure::config(format!("cannot parse β `{t}`")))?;
            if !(b > 0.0 && b <= limit + 1e-9) {
                return Err(Failure::config(format!("β = {b} is outside (0, 1/√2]")));
            }
            Ok(b)
        })
        .collect()
}

fn cmd_sweep(args: SweepArgs) -> CmdResult<ExitCode> {
    let ids = parse_protocols(&args.protocols)?;
    let betas = parse_betas(&args.betas)?;
    let q = InputQubit::reference();
    let mut rows = Vec::with_capacity(ids.len() * betas.len());
    for &id in &ids {
        for &beta in &betas {
            let c = ChannelSpec::from_beta(beta)?;
            let p = success_probability(id, &c)?;
            let d = enumerate_protocol(id, &q, &c)?;
            let bits = bit_report(&d);
            let ok: Vec<_> = d.branches.iter().filter(|b| b.success).collect();
            let weight: f64 = ok.iter().map(|b| b.probability).sum();
            let fidelity = (weight > 0.0)
                .then(|| tidy(ok.iter().map(|b| b.probability * b.fidelity).sum::<f64>() / weight));
            rows.push(SweepRow {
                protocol: id.to_string(),
                beta: c.beta(),
                p_success: tidy(p),
                expected_bits: tidy(bits.expected_total),
                fidelity_given_success: fidelity,
            });
        }
    }
    match args.output.format {
        Format::Json => write_json(&args.output.out, &rows)?,
        Format::Csv => write_csv(&args.output.out, &rows)?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SampleReport {
    #[serde(flatten)]
    stats: SampleStats,
    alpha: f64,
    beta: f64,
    exact_probability: f64,
    bound: f64,
    verdict: &'static str,
}

#[derive(Serialize)]
struct SampleRow {
    protocol: String,
    alpha: f64,
    beta: f64,
    shots: u64,
    seed: u64,
    successes: u64,
    success_frequency: f64,
    exact_probability: f64,
    bound: f64,
    verdict: &'static str,
    mean_fidelity: f64,
}

fn cmd_sample(args: SampleArgs) -> CmdResult<ExitCode> {
    let (id, c, q) = args.common.resolve()?;
    if args.shots == 0 {
        return Err(Failure::config("--shots must be at least 1"));
    }
    let exact = tidy(enumerate_protocol(id, &q, &c)?.success_probability());
    let stats = monte_carlo(id, &q, &c, args.shots, args.common.seed)?;
    let verdict = if within_binomial_bound(stats.success_frequency, exact, args.shots) {
        "PASS"
    } else {
        "FAIL"
    };
    let bound = binomial_bound(exact, args.shots);
    match args.output.format {
        Format::Json => write_json(
            &args.output.out,
            &SampleReport {
                stats,
                alpha: c.alpha(),
                beta: c.beta(),
                exact_probability: exact,
                bound,
                verdict,
            },
        )?,
        Format::Csv => write_csv(
            &args.output.out,
            &[SampleRow {
                protocol: id.to_string(),
                alpha: c.alpha(),
                beta: c.beta(),
                shots: stats.shots,
                seed: stats.seed,
                successes: stats.successes,
                success_frequency: stats.success_frequency,
                exact_probability: exact,
                bound,
                verdict,
                mean_fidelity: stats.mean_fidelity,
            }],
        )?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> CmdResult<ExitCode> {
    let report = if args.json {
        let r = verify::run_all();
        write_json(&None, &r)?;
        r
    } else {
        let r = verify::run_with(|c| println!("{c}"));
        let n = r.criteria.iter().filter(|c| c.passed).count();
        println!("{n}/{} criteria passed", r.criteria.len());
        r
    };
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
