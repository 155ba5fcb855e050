//! The `erdos` command line.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns the
//! captured output with an exit code: 0 on success, 1 when a cross-check
//! fails, 2 on invalid input and 3 when precision runs out. `ERDOS_THREADS`
//! caps the worker pool.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use erdos_lseries::dedekind::{
    dedekind_sum_numeric, reciprocity_lhs, reciprocity_rhs, s_qk_polynomial, sign_convention, DedekindSpec,
};
use erdos_lseries::density::{
    count_vanishing_with, density_table_with, write_density_csv, DensityMode, ScanConfig,
};
use erdos_lseries::erdos::{enumerate_erdos, enumerate_parity, ErdosFunction, Parity};
use erdos_lseries::lseries::{certify_nonzero, l_value, LMethod, NonzeroCertificate};
use erdos_lseries::moments::{
    empirical_cdf, limiting_moment_report, moment_enumeration, moment_literal_formula,
    moment_partition_formula, monte_carlo_moments, MomentMethod, MomentReport,
};
use erdos_lseries::numeric::{CertifiedReal, PrecisionContext, Rational};
use erdos_lseries::Error;

/// Largest moment order accepted.
pub const MAX_ORDER: u32 = 64;

/// Partition-formula moments are cross-checked against enumeration up to
/// this modulus (2^20 odd functions).
pub const CROSS_CHECK_MAX_Q: u32 = 41;

/// Outcome of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
    /// File written by the command, if any.
    pub payload_path: Option<PathBuf>,
    /// The metadata block also embedded in JSON output.
    pub metadata: Option<Value>,
}

#[derive(Parser, Debug)]
#[command(name = "erdos", version, about = "L-series of Erdős functions")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = PrecisionContext::DEFAULT_BITS)]
    precision_bits: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the Erdős functions mod q.
    Enumerate(EnumerateArgs),
    /// Evaluate L(k, f) for one function.
    Lvalue(LvalueArgs),
    /// A generalized Dedekind cotangent sum, optionally with its reciprocity check.
    Dedekind(DedekindArgs),
    /// Exact coefficients of S_{q,k}^{(u)} as a polynomial in q.
    Spoly(SpolyArgs),
    /// Moments of L(k, f).
    Moments(MomentsArgs),
    /// Distribution table of L(k, f) written as CSV.
    Distribution(DistributionArgs),
    /// Density ratio of possible zeros.
    Density(DensityArgs),
    /// Certify L(1, f) != 0 for every f mod q, for odd q up to a bound.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ParityArg {
    Odd,
    Even,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    #[arg(long)]
    count_only: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LMethodArg {
    Direct,
    Digamma,
    Closed,
}

#[derive(Args, Debug)]
struct LvalueArgs {
    #[arg(long)]
    q: u32,
    /// Sign string such as `+-0`.
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum, default_value_t = LMethodArg::Direct)]
    method: LMethodArg,
}

#[derive(Args, Debug)]
struct DedekindArgs {
    /// Moduli a_0,..,a_d.
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u64>,
    /// Derivative orders m_0,..,m_d.
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<u32>,
    /// Distinguished index.
    #[arg(long, default_value_t = 0)]
    i: usize,
    #[arg(long)]
    check_reciprocity: bool,
}

#[derive(Args, Debug)]
struct SpolyArgs {
    #[arg(long)]
    u: u32,
    #[arg(long)]
    k: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MomentMethodArg {
    Enumeration,
    Partition,
    Literal,
    Montecarlo,
}

#[derive(Args, Debug)]
struct MomentsArgs {
    #[arg(long, conflicts_with = "limit", required_unless_present = "limit")]
    q: Option<u32>,
    /// The q -> infinity limit.
    #[arg(long)]
    limit: bool,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    order: u32,
    #[arg(long, value_enum)]
    method: Option<MomentMethodArg>,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct DistributionArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    k: u32,
    /// Write a histogram with this many bins instead of the step CDF.
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DensityModeArg {
    Exact,
    Bound,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[arg(long)]
    max_q: u32,
    #[arg(long, value_enum, default_value_t = DensityModeArg::Bound)]
    mode: DensityModeArg,
    /// Largest enumerated modulus.
    #[arg(long, default_value_t = ScanConfig::default().guard)]
    guard: u32,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    max_q: u32,
    #[arg(long, default_value_t = ScanConfig::default().guard)]
    guard: u32,
    /// Precision cap for escalation.
    #[arg(long, default_value_t = ScanConfig::default().max_bits)]
    max_bits: u32,
}

struct Output {
    exit_code: i32,
    stdout: String,
    stderr: String,
    payload_path: Option<PathBuf>,
    seed: Option<u64>,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { exit_code: 0, stdout, stderr: String::new(), payload_path: None, seed: None }
    }
}

enum Failure {
    Invalid(String),
    Precision(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PrecisionExhausted { .. } | Error::ReconstructionFailure(_) => {
                Failure::Precision(e.to_string())
            }
            other => Failure::Invalid(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<Output, Failure>;

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    finished(0, text, String::new())
                }
                _ => finished(2, String::new(), text),
            };
        }
    };
    let ctx = match PrecisionContext::new(cli.precision_bits) {
        Ok(ctx) => ctx,
        Err(e) => return finished(2, String::new(), format!("error: {e}\n")),
    };
    let pool = match thread_pool() {
        Ok(pool) => pool,
        Err(msg) => return finished(2, String::new(), format!("error: {msg}\n")),
    };
    let outcome = match &pool {
        Some(pool) => pool.install(|| dispatch(&cli, &ctx)),
        None => dispatch(&cli, &ctx),
    };
    match outcome {
        Ok(out) => CommandResult {
            exit_code: out.exit_code,
            stdout: out.stdout,
            stderr: out.stderr,
            payload_path: out.payload_path,
            metadata: Some(metadata(&ctx, out.seed)),
        },
        Err(Failure::Invalid(msg)) => finished(2, String::new(), format!("error: {msg}\n")),
        Err(Failure::Precision(msg)) => finished(3, String::new(), format!("error: {msg}\n")),
    }
}

fn finished(exit_code: i32, stdout: String, stderr: String) -> CommandResult {
    CommandResult { exit_code, stdout, stderr, payload_path: None, metadata: None }
}

fn thread_pool() -> std::result::Result<Option<rayon::ThreadPool>, String> {
    let Ok(raw) = std::env::var("ERDOS_THREADS") else {
        return Ok(None);
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("ERDOS_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map(Some).map_err(|e| e.to_string())
}

fn metadata(ctx: &PrecisionContext, seed: Option<u64>) -> Value {
    let conv = sign_convention();
    json!({
        "tool": "erdos",
        "version": env!("CARGO_PKG_VERSION"),
        "precision_bits": ctx.precision_bits(),
        "seed": seed,
        "sign_convention": { "global": conv.global, "correction": conv.correction },
    })
}

fn document(ctx: &PrecisionContext, seed: Option<u64>, result: Value) -> String {
    let doc = json!({ "metadata": metadata(ctx, seed), "result": result });
    let mut text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    text.push('\n');
    text
}

fn certified_json(c: &CertifiedReal) -> Value {
    json!({
        "midpoint": c.midpoint_hex(),
        "radius": c.radius_hex(),
        "approx": c.midpoint_decimal(20),
    })
}

fn rational_json(r: &Rational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

fn json_only(format: Format, command: &str) -> std::result::Result<(), Failure> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(Failure::Invalid(format!("{command} has no CSV output"))),
    }
}

fn dispatch(cli: &Cli, ctx: &PrecisionContext) -> Outcome {
    match &cli.command {
        Command::Enumerate(a) => enumerate(a, cli.format, ctx),
        Command::Lvalue(a) => json_only(cli.format, "lvalue").and_then(|_| lvalue(a, ctx)),
        Command::Dedekind(a) => json_only(cli.format, "dedekind").and_then(|_| dedekind(a, ctx)),
        Command::Spoly(a) => json_only(cli.format, "spoly").and_then(|_| spoly(a, ctx)),
        Command::Moments(a) => json_only(cli.format, "moments").and_then(|_| moments(a, ctx)),
        Command::Distribution(a) => json_only(cli.format, "distribution").and_then(|_| distribution(a, ctx)),
        Command::Density(a) => density(a, cli.format, ctx),
        Command::Verify(a) => verify(a, cli.format, ctx),
    }
}

fn csv_text<F>(write: F) -> std::result::Result<String, Failure>
where
    F: FnOnce(&mut Vec<u8>) -> csv::Result<()>,
{
    let mut buf = Vec::new();
    write(&mut buf).map_err(|e| Failure::Invalid(e.to_string()))?;
    String::from_utf8(buf).map_err(|e| Failure::Invalid(e.to_string()))
}

fn enumerate(a: &EnumerateArgs, format: Format, ctx: &PrecisionContext) -> Outcome {
    let population = match a.parity {
        None => enumerate_erdos(a.q)?,
        Some(ParityArg::Odd) => enumerate_parity(a.q, Parity::Odd)?,
        Some(ParityArg::Even) => enumerate_parity(a.q, Parity::Even)?,
    };
    if a.count_only {
        return Ok(Output::ok(format!("{}\n", population.len())));
    }
    let parity = match a.parity {
        None => "all",
        Some(ParityArg::Odd) => "odd",
        Some(ParityArg::Even) => "even",
    };
    match format {
        Format::Json => {
            let functions: Vec<String> = population.iter().map(|f| f.to_sign_string()).collect();
            Ok(Output::ok(document(
                ctx,
                None,
                json!({ "q": a.q, "parity": parity, "count": population.len(), "functions": functions }),
            )))
        }
        Format::Csv => {
            let text = csv_text(|buf| {
                let mut w = csv::Writer::from_writer(buf);
                w.write_record(["rank", "function"])?;
                for (rank, f) in population.iter().enumerate() {
                    w.write_record([rank.to_string(), f.to_sign_string()])?;
                }
                w.flush()?;
                Ok(())
            })?;
            Ok(Output::ok(text))
        }
    }
}

fn lvalue(a: &LvalueArgs, ctx: &PrecisionContext) -> Outcome {
    let f: ErdosFunction = a.f.parse()?;
    if f.modulus() != a.q {
        return Err(Failure::Invalid(format!("function has {} values, expected q = {}", f.modulus(), a.q)));
    }
    let method = match a.method {
        LMethodArg::Direct => LMethod::DirectSum,
        LMethodArg::Digamma => LMethod::Digamma,
        LMethodArg::Closed => LMethod::ClosedForm,
    };
    let v = l_value(&f, a.k, method, ctx)?;
    let sign = match certify_nonzero(&v.value) {
        NonzeroCertificate::CertifiedNonzero(std::cmp::Ordering::Less) => "negative",
        NonzeroCertificate::CertifiedNonzero(_) => "positive",
        NonzeroCertificate::Undecided => "undecided",
    };
    let mut result = certified_json(&v.value);
    result["q"] = json!(a.q);
    result["k"] = json!(a.k);
    result["f"] = json!(f.to_sign_string());
    result["method"] = json!(format!("{:?}", v.method));
    result["sign"] = json!(sign);
    Ok(Output::ok(document(ctx, None, result)))
}

fn dedekind(a: &DedekindArgs, ctx: &PrecisionContext) -> Outcome {
    let spec = DedekindSpec::new(a.a.clone(), a.m.clone(), a.i)?;
    let value = dedekind_sum_numeric(&spec, ctx)?;
    let mut result = json!({ "spec": spec.to_string(), "value": certified_json(&value) });
    let mut exit_code = 0;
    let mut stderr = String::new();
    if a.check_reciprocity {
        let lhs = reciprocity_lhs(spec.moduli(), spec.orders(), ctx)?;
        let rhs = reciprocity_rhs(spec.moduli(), spec.orders())?;
        let residual = &lhs - &CertifiedReal::from_rational(&rhs, ctx);
        let holds = residual.contains_zero();
        if !holds {
            exit_code = 1;
            stderr = "reciprocity residual excludes zero\n".into();
        }
        result["reciprocity"] = json!({
            "lhs": certified_json(&lhs),
            "rhs": rational_json(&rhs),
            "residual": certified_json(&residual),
            "holds": holds,
        });
    }
    Ok(Output { exit_code, stderr, ..Output::ok(document(ctx, None, result)) })
}

fn spoly(a: &SpolyArgs, ctx: &PrecisionContext) -> Outcome {
    let p = s_qk_polynomial(a.u, a.k)?;
    let coefficients: Vec<Value> = p.coefficients().iter().map(rational_json).collect();
    Ok(Output::ok(document(
        ctx,
        None,
        json!({
            "u": a.u,
            "k": a.k,
            "degree": p.degree(),
            "polynomial": p.to_string(),
            "coefficients": coefficients,
        }),
    )))
}

fn moment_label(method: MomentMethod) -> &'static str {
    match method {
        MomentMethod::Enumeration => "enumeration",
        MomentMethod::PartitionFormula => "partition",
        MomentMethod::LiteralFormula => "literal",
        MomentMethod::MonteCarlo => "montecarlo",
    }
}

fn comparison(reference: &MomentReport) -> Value {
    let c = reference.certified().expect("reference moments are certified");
    let mut v = certified_json(c);
    v["method"] = json!(moment_label(reference.method));
    v
}

fn moments(a: &MomentsArgs, ctx: &PrecisionContext) -> Outcome {
    if a.order == 0 || a.order > MAX_ORDER {
        return Err(Failure::Invalid(format!(
            "order overflow: order must lie in 1..={MAX_ORDER}, got {}",
            a.order
        )));
    }
    let mut exit_code = 0;
    let mut stderr = String::new();
    let mut seed = None;
    let (report, extra) = match (a.q, a.method) {
        (None, method) => {
            let method = match method.unwrap_or(MomentMethodArg::Partition) {
                MomentMethodArg::Partition => MomentMethod::PartitionFormula,
                MomentMethodArg::Literal => MomentMethod::LiteralFormula,
                other => {
                    return Err(Failure::Invalid(format!(
                        "--limit needs --method partition or literal, got {}",
                        other.to_possible_value().expect("no skipped variants").get_name()
                    )))
                }
            };
            let report = limiting_moment_report(a.order, a.k, method, ctx)?;
            let extra = if method == MomentMethod::LiteralFormula {
                let reference = limiting_moment_report(a.order, a.k, MomentMethod::PartitionFormula, ctx)?;
                Some(("reference", reference))
            } else {
                None
            };
            (report, extra)
        }
        (Some(q), method) => match method.unwrap_or(MomentMethodArg::Enumeration) {
            MomentMethodArg::Enumeration => (moment_enumeration(q, a.k, a.order, ctx)?, None),
            MomentMethodArg::Partition => {
                let report = moment_partition_formula(q as u64, a.k, a.order, ctx)?;
                if q <= CROSS_CHECK_MAX_Q {
                    (report, Some(("cross_check", moment_enumeration(q, a.k, a.order, ctx)?)))
                } else {
                    (report, None)
                }
            }
            MomentMethodArg::Literal => {
                let report = moment_literal_formula(q as u64, a.k, a.order, ctx)?;
                let reference = if q <= CROSS_CHECK_MAX_Q {
                    Some(("reference", moment_enumeration(q, a.k, a.order, ctx)?))
                } else {
                    None
                };
                (report, reference)
            }
            MomentMethodArg::Montecarlo => {
                seed = Some(a.seed);
                (monte_carlo_moments(q, a.k, a.order, a.samples, a.seed, ctx)?, None)
            }
        },
    };
    let mut result = report.to_json();
    result["method"] = json!(moment_label(report.method));
    if let Some((field, other)) = &extra {
        let overlap = report.certified().zip(other.certified()).is_some_and(|(x, y)| x.overlaps(y));
        let mut entry = comparison(other);
        entry["overlap"] = json!(overlap);
        result[*field] = entry;
        if *field == "cross_check" && !overlap {
            exit_code = 1;
            stderr = "partition formula and enumeration do not overlap\n".into();
        }
    }
    Ok(Output { exit_code, stderr, seed, ..Output::ok(document(ctx, seed, result)) })
}

fn distribution(a: &DistributionArgs, ctx: &PrecisionContext) -> Outcome {
    let table = empirical_cdf(a.q, a.k, ctx)?;
    let file = File::create(&a.out)
        .map_err(|e| Failure::Invalid(format!("cannot create {}: {e}", a.out.display())))?;
    let writer = BufWriter::new(file);
    let (kind, rows) = match a.bins {
        Some(bins) => {
            table.write_histogram_csv(bins, writer).map_err(|e| Failure::Invalid(e.to_string()))?;
            ("histogram", bins.max(1))
        }
        None => {
            table.write_csv(writer).map_err(|e| Failure::Invalid(e.to_string()))?;
            ("cdf", table.len())
        }
    };
    let result = json!({
        "q": a.q,
        "k": a.k,
        "population": table.len(),
        "kind": kind,
        "rows": rows,
        "out": a.out.display().to_string(),
    });
    Ok(Output { payload_path: Some(a.out.clone()), ..Output::ok(document(ctx, None, result)) })
}

fn density(a: &DensityArgs, format: Format, ctx: &PrecisionContext) -> Outcome {
    let mode = match a.mode {
        DensityModeArg::Exact => DensityMode::ExactSmallQ,
        DensityModeArg::Bound => DensityMode::Bound,
    };
    let config = ScanConfig { guard: a.guard, ..ScanConfig::default() };
    let table = density_table_with(a.max_q, mode, ctx, &config)?;
    match format {
        Format::Csv => Ok(Output::ok(csv_text(|buf| write_density_csv(&table, buf))?)),
        Format::Json => {
            let rows: Vec<Value> = table.iter().map(|r| r.to_json()).collect();
            Ok(Output::ok(document(ctx, None, json!({ "mode": mode.name(), "rows": rows }))))
        }
    }
}

fn verify(a: &VerifyArgs, format: Format, ctx: &PrecisionContext) -> Outcome {
    if a.max_q < 3 {
        return Err(Failure::Invalid(format!("--max-q must be at least 3, got {}", a.max_q)));
    }
    let config = ScanConfig { guard: a.guard, max_bits: a.max_bits };
    let records = (3..=a.max_q)
        .step_by(2)
        .map(|q| count_vanishing_with(q, ctx, &config))
        .collect::<erdos_lseries::Result<Vec<_>>>()?;
    match format {
        Format::Json => {
            let rows: Vec<Value> = records.iter().map(|r| r.to_json()).collect();
            Ok(Output::ok(document(ctx, None, json!({ "records": rows }))))
        }
        Format::Csv => Ok(Output::ok(csv_text(|buf| {
            let mut w = csv::Writer::from_writer(buf);
            w.write_record([
                "q",
                "population",
                "min_abs",
                "certified_zero_count",
                "undecided_count",
                "final_bits",
            ])?;
            for r in &records {
                w.write_record([
                    r.q.to_string(),
                    r.population.to_string(),
                    r.min_abs.midpoint_decimal(20),
                    r.certified_zero_count.to_string(),
                    r.undecided_count.to_string(),
                    r.final_bits.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        })?)),
    }
}
