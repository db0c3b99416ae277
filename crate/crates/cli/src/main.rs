mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qhecke::analysis::{fejer_squared_test_function, fejer_test_function, nonvanishing_constants, optimize_test_function, TestFunction};
use qhecke::density::{family_count_check, run_density, secondary_main_term_check, DensityReport, PrimeSumStatistic};
use qhecke::gauss::gauss_g;
use qhecke::primes::primary_primes_upto;
use qhecke::symbols::residue_symbol;
use qhecke::verify::{self, SuiteResult, VerifyConfig};
use qhecke::{field_params, Elt, Error, FieldParams, SUPPORTED_D};

use config::{validate_ladder, ExperimentConfig};

const THREADS_ENV: &str = "QHECKE_THREADS";

#[derive(Parser)]
#[command(name = "qhecke", version, about = "Quadratic Hecke characters of class-number-one imaginary quadratic fields")]
struct Cli {
    /// TOML experiment config; flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (overrides QHECKE_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall-clock runtime in reports. Off by default so reruns are byte-identical.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// A_K for every field and the nonvanishing constants.
    Constants,
    /// Primary primes up to a norm bound, as CSV.
    Primes {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        max_norm: u64,
    },
    /// The quadratic residue symbol (a/n).
    Symbol {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        n: String,
    },
    /// The Gauss sum g_K(k, n) and |g|²/N(n).
    Gauss {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        n: String,
    },
    /// Invariant suites; exits 1 if any fails.
    Verify(VerifyArgs),
    /// Family size against its asymptotic.
    Count(ExperimentArgs),
    /// Family-averaged one-level density against the symplectic prediction.
    Density(DensityArgs),
    /// The secondary main term for 1 < sigma < 2.
    SecondaryTerm(ExperimentArgs),
    /// Minimize ∫φ W_USp over the cosine family.
    OptimizePhi {
        #[arg(long, default_value_t = 6)]
        dim: usize,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Run every suite (the default; kept for explicitness).
    #[arg(long)]
    all: bool,
    /// Restrict to the named suites.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<SuiteName>,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    d: Vec<i64>,
    /// Norm bound for the Gauss-sum, prime-power and primary-law suites.
    #[arg(long)]
    max_norm: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the summary here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SuiteName {
    Reciprocity,
    Gauss,
    PrimePower,
    PrimaryLaws,
    Kronecker,
    Poisson,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    d: Vec<i64>,
    /// One X or a ladder.
    #[arg(long = "X", value_delimiter = ',')]
    x: Vec<u64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, value_enum)]
    phi: Option<Phi>,
    /// Report path; `.csv` selects CSV, anything else JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    exp: ExperimentArgs,
    /// Per-c statistics as CSV.
    #[arg(long)]
    dump_family: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Phi {
    Fejer,
    Fejer2,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnsupportedField(_) | Error::Parse(_) | Error::BadSupport(_) | Error::XTooSmall(_) => 2,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

fn runtime(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p).map_err(usage)?,
        None => ExperimentConfig::default(),
    };
    init_threads(cli.threads.or(cfg.threads))?;
    match cli.cmd {
        Command::Constants => constants(),
        Command::Primes { d, max_norm } => primes(d, max_norm),
        Command::Symbol { d, a, n } => symbol(d, &a, &n),
        Command::Gauss { d, k, n } => gauss(d, &k, &n),
        Command::Verify(a) => verify_cmd(&cfg, a),
        Command::Count(a) => count(&cfg, a),
        Command::Density(a) => density(&cfg, a, cli.timing),
        Command::SecondaryTerm(a) => secondary(&cfg, a),
        Command::OptimizePhi { dim } => {
            let r = optimize_test_function(dim)?;
            print_json(&r)?;
            Ok(true)
        }
    }
}

fn init_threads(flag: Option<usize>) -> Result<(), Failure> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(s) => Some(s.trim().parse().map_err(|_| usage(format!("{THREADS_ENV}={s:?} is not a thread count")))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| runtime(e.to_string()))?;
    }
    Ok(())
}

fn field(d: i64) -> Result<FieldParams, Failure> {
    Ok(field_params(d)?)
}

fn elt(s: &str) -> Result<Elt<i64>, Failure> {
    Ok(s.parse::<Elt<i64>>()?)
}

fn print_json<T: Serialize>(v: &T) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(v).map_err(|e| runtime(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| runtime(e.to_string()))?;
    s.push('\n');
    std::fs::write(path, s).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>, Failure> {
    csv::Writer::from_path(path).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn csv_err(e: impl std::fmt::Display) -> Failure {
    runtime(e.to_string())
}

#[derive(Serialize)]
struct AreaRow {
    d: i64,
    a_k: String,
}

#[derive(Serialize)]
struct ConstantsOut {
    a_k: Vec<AreaRow>,
    inf_density: String,
    nonvanishing_lower: String,
    relation_holds: bool,
}

fn constants() -> Outcome {
    let c = nonvanishing_constants();
    let a_k = SUPPORTED_D
        .iter()
        .map(|&d| AreaRow { d, a_k: format!("{:.12}", field_params(d).expect("supported").a_k()) })
        .collect();
    print_json(&ConstantsOut {
        a_k,
        inf_density: format!("{:.12}", c.inf_density),
        nonvanishing_lower: format!("{:.12}", c.nonvanishing_lower),
        relation_holds: c.relation_holds,
    })?;
    Ok(c.relation_holds)
}

fn primes(d: i64, max_norm: u64) -> Outcome {
    let f = field(d)?;
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    w.write_record(["gen", "p", "norm", "kind"]).map_err(csv_err)?;
    for q in primary_primes_upto(&f, max_norm) {
        let kind = format!("{:?}", q.kind).to_lowercase();
        w.write_record([q.gen.to_string(), q.p.to_string(), q.norm.to_string(), kind]).map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)?;
    Ok(true)
}

fn symbol(d: i64, a: &str, n: &str) -> Outcome {
    let f = field(d)?;
    let v = residue_symbol(&f, &elt(a)?, &elt(n)?)?;
    println!("{v}");
    Ok(true)
}

#[derive(Serialize)]
struct GaussOut {
    re: f64,
    im: f64,
    abs_sq_over_norm: f64,
}

fn gauss(d: i64, k: &str, n: &str) -> Outcome {
    let f = field(d)?;
    let g = gauss_g(&f, &elt(k)?, &elt(n)?)?;
    print_json(&GaussOut {
        re: g.value.re,
        im: g.value.im,
        abs_sq_over_norm: g.value.norm_sqr() / g.modulus_norm as f64,
    })?;
    Ok(true)
}

fn fields(flag: &[i64], cfg: &ExperimentConfig) -> Result<Vec<FieldParams>, Failure> {
    let ds: &[i64] = if !flag.is_empty() {
        flag
    } else if !cfg.d.is_empty() {
        &cfg.d
    } else {
        &SUPPORTED_D
    };
    ds.iter().map(|&d| field(d)).collect()
}

#[derive(Serialize)]
struct VerifySummary {
    passed: bool,
    suites: Vec<SuiteResult>,
}

fn verify_cmd(cfg: &ExperimentConfig, a: VerifyArgs) -> Outcome {
    let mut vc = VerifyConfig::default();
    let caps = &cfg.verify;
    if let Some(n) = a.max_norm.or(caps.max_norm) {
        vc.max_norm = n;
        vc.prime_power_norm = vc.prime_power_norm.min(n);
    }
    if let Some(n) = caps.prime_power_norm {
        vc.prime_power_norm = n;
    }
    vc.reciprocity_norm = caps.reciprocity_norm.unwrap_or(vc.reciprocity_norm);
    vc.random_pairs = caps.random_pairs.unwrap_or(vc.random_pairs);
    vc.kronecker_norm = caps.kronecker_norm.unwrap_or(vc.kronecker_norm);
    vc.poisson_norm = caps.poisson_norm.unwrap_or(vc.poisson_norm);
    vc.seed = a.seed.or(cfg.seed).unwrap_or(vc.seed);
    let wanted = |s: SuiteName| a.all || a.suite.is_empty() || a.suite.contains(&s);

    let mut suites = Vec::new();
    for f in fields(&a.d, cfg)? {
        if wanted(SuiteName::Reciprocity) {
            suites.extend(verify::reciprocity_suites(&f, &vc)?);
        }
        if wanted(SuiteName::Gauss) {
            suites.push(verify::gauss_suite(&f, vc.max_norm)?);
        }
        if wanted(SuiteName::PrimePower) {
            suites.push(verify::prime_power_suite(&f, &vc)?);
        }
        if wanted(SuiteName::PrimaryLaws) {
            suites.push(verify::primary_law_suite(&f, vc.max_norm));
        }
        if wanted(SuiteName::Kronecker) {
            suites.push(verify::kronecker_suite(&f, &vc)?);
        }
        if wanted(SuiteName::Poisson) {
            suites.extend(verify::poisson_suites(&f, &vc)?);
        }
    }
    let summary = VerifySummary { passed: suites.iter().all(|s| s.passed), suites };
    if let Some(p) = a.out.as_ref().or(cfg.out.as_ref()) {
        write_json(p, &summary)?;
    }
    print_json(&summary)?;
    Ok(summary.passed)
}

struct Plan {
    fields: Vec<FieldParams>,
    xs: Vec<u64>,
    tf: TestFunction,
    out: Option<PathBuf>,
}

fn plan(cfg: &ExperimentConfig, a: &ExperimentArgs, default_sigma: f64) -> Result<Plan, Failure> {
    let xs = if !a.x.is_empty() { a.x.clone() } else { cfg.x.clone() };
    if xs.is_empty() {
        return Err(usage("no X given (use --X or the config's `X`)"));
    }
    validate_ladder(&xs).map_err(usage)?;
    let sigma = a.sigma.or(cfg.sigma).unwrap_or(default_sigma);
    let phi = match (a.phi, cfg.phi.as_deref()) {
        (Some(p), _) => p,
        (None, Some("fejer2")) => Phi::Fejer2,
        _ => Phi::Fejer,
    };
    let tf = match phi {
        Phi::Fejer => fejer_test_function(sigma)?,
        Phi::Fejer2 => fejer_squared_test_function(sigma)?,
    };
    let out = a.out.clone().or_else(|| cfg.out.clone());
    Ok(Plan { fields: fields(&a.d, cfg)?, xs, tf, out })
}

/// One object for a single run, an array for a ladder or several fields.
fn emit<T: Serialize>(rows: &[T], out: Option<&Path>, csv_rows: impl Fn(&mut csv::Writer<std::fs::File>) -> Result<(), Failure>) -> Result<(), Failure> {
    let value = if rows.len() == 1 {
        serde_json::to_value(&rows[0])
    } else {
        serde_json::to_value(rows)
    }
    .map_err(|e| runtime(e.to_string()))?;
    match out {
        Some(p) if p.extension().is_some_and(|e| e == "csv") => {
            let mut w = csv_writer(p)?;
            csv_rows(&mut w)?;
            w.flush().map_err(csv_err)?;
        }
        Some(p) => write_json(p, &value)?,
        None => {}
    }
    print_json(&value)
}

fn count(cfg: &ExperimentConfig, a: ExperimentArgs) -> Outcome {
    let p = plan(cfg, &a, 1.0)?;
    let mut rows = Vec::new();
    for f in &p.fields {
        for &x in &p.xs {
            rows.push(family_count_check(f, x)?);
        }
    }
    emit(&rows, p.out.as_deref(), |w| {
        for r in &rows {
            w.serialize(r).map_err(csv_err)?;
        }
        Ok(())
    })?;
    Ok(true)
}

#[derive(Serialize)]
struct ReportRow {
    d: i64,
    #[serde(rename = "X")]
    x: u64,
    phi: &'static str,
    sigma: f64,
    family_size: usize,
    family_ideals: usize,
    weighted_family_mass: f64,
    prime_count: usize,
    avg_s: f64,
    density_estimate: f64,
    usp_reference: f64,
    secondary_main_term_lhs: f64,
    secondary_main_term_rhs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime: Option<f64>,
}

impl From<&DensityReport> for ReportRow {
    fn from(r: &DensityReport) -> Self {
        ReportRow {
            d: r.d,
            x: r.x,
            phi: r.tf.name(),
            sigma: r.tf.sigma,
            family_size: r.family_size,
            family_ideals: r.family_ideals,
            weighted_family_mass: r.weighted_family_mass,
            prime_count: r.prime_count,
            avg_s: r.avg_s,
            density_estimate: r.density_estimate,
            usp_reference: r.usp_reference,
            secondary_main_term_lhs: r.secondary_main_term_lhs,
            secondary_main_term_rhs: r.secondary_main_term_rhs,
            runtime: r.runtime,
        }
    }
}

#[derive(Serialize)]
struct FamilyRow {
    d: i64,
    #[serde(rename = "X")]
    x: u64,
    c: String,
    norm: u64,
    weight: f64,
    value: f64,
}

fn density(cfg: &ExperimentConfig, a: DensityArgs, timing: bool) -> Outcome {
    let p = plan(cfg, &a.exp, 0.8)?;
    let mut reports = Vec::new();
    let mut dump = match &a.dump_family {
        Some(path) => Some(csv_writer(path)?),
        None => None,
    };
    for f in &p.fields {
        for &x in &p.xs {
            let run = run_density(f, x, &p.tf)?;
            let mut r = run.report;
            if !timing {
                r.runtime = None;
            }
            if let Some(w) = dump.as_mut() {
                dump_family(w, &r, &run.per_c)?;
            }
            reports.push(r);
        }
    }
    if let Some(mut w) = dump {
        w.flush().map_err(csv_err)?;
    }
    emit(&reports, p.out.as_deref(), |w| {
        for r in &reports {
            w.serialize(ReportRow::from(r)).map_err(csv_err)?;
        }
        Ok(())
    })?;
    Ok(true)
}

fn dump_family<W: Write>(w: &mut csv::Writer<W>, r: &DensityReport, per_c: &[PrimeSumStatistic]) -> Result<(), Failure> {
    for s in per_c {
        w.serialize(FamilyRow { d: r.d, x: r.x, c: s.c.to_string(), norm: s.norm, weight: s.weight, value: s.value })
            .map_err(csv_err)?;
    }
    Ok(())
}

fn secondary(cfg: &ExperimentConfig, a: ExperimentArgs) -> Outcome {
    let p = plan(cfg, &a, 1.3)?;
    let mut rows = Vec::new();
    for f in &p.fields {
        for &x in &p.xs {
            rows.push(secondary_main_term_check(f, x, &p.tf)?);
        }
    }
    emit(&rows, p.out.as_deref(), |w| {
        for r in &rows {
            w.serialize(r).map_err(csv_err)?;
        }
        Ok(())
    })?;
    Ok(true)
}
