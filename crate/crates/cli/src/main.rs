//! `hhlattice`: evolve lattices, iterate reduced sequences and run the
//! property suites from the command line.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 singular
//! evolution (zero denominator), 3 failed assertion in a verify suite.

mod error;
mod seed;
mod verify;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hhlattice::lattice::{EquationSpec, GridSnapshot, InitialFrame, LatticeGrid, Sublattice};
use hhlattice::par::Schedule;
use hhlattice::reduction::{
    constant_recurrence_finder, dana_scott, heideman_hogan, iterate_generalized_hh, reduced_frieze_iterate,
    ConstantRecurrence, ExactParts, ReductionSpec, Sequence, SequenceJson,
};
use hhlattice::scalar::Scalar;
use hhlattice::RationalFunction;
use serde::Serialize;

use error::{CliError, EXIT_FAILED, EXIT_USAGE};
use seed::SeedMode;
use verify::{Suite, VerifyConfig};

#[derive(Parser)]
#[command(name = "hhlattice", version, about = "Exact computations on linearizable lattice equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a lattice law from an initial frame.
    Evolve(EvolveArgs),
    /// Run a property suite; exit 3 if any assertion fails.
    Verify(VerifyArgs),
    /// Iterate a one-dimensional recurrence.
    Seq(SeqArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Common {
    /// ones | symbolic | random[:N] | comma-separated values
    #[arg(long, default_value = "ones")]
    seed: SeedMode,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
}

impl Common {
    fn schedule(&self) -> Schedule {
        if self.sequential {
            Schedule::Sequential
        } else {
            Schedule::Parallel
        }
    }
}

#[derive(Args)]
struct EvolveArgs {
    /// hh2d | frieze | det1 | det2 (or det1:K, det2:K)
    #[arg(long, default_value = "hh2d")]
    law: String,
    /// Determinant size parameter of det1/det2.
    #[arg(long)]
    k: Option<u32>,
    /// L:NxT, S:NxT[:even|odd] or stripD:NxT[:even|odd]
    #[arg(long)]
    frame: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Use symbolic initial values.
    #[arg(long)]
    symbolic: bool,
    #[arg(long)]
    frame: Option<String>,
    /// Law for det-general (det1:K or det2:K).
    #[arg(long)]
    law: Option<String>,
    #[arg(long)]
    k: Option<u32>,
    /// Reduction parameter K.
    #[arg(long = "K", default_value_t = 1)]
    big_k: i64,
    /// Reduction parameter M.
    #[arg(long = "M", default_value_t = 1)]
    m: i64,
    /// Sequence length or number of sites on a ray.
    #[arg(long)]
    len: Option<usize>,
    /// Specialization rounds for coprimeness.
    #[arg(long, default_value_t = hhlattice::algebra::MIN_TRIALS)]
    trials: usize,
    /// Generator seed for coprimeness specializations.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Row of the n-direction ray (entropy).
    #[arg(long, default_value_t = 2)]
    t: i64,
    /// Column of the t-direction ray (entropy).
    #[arg(long, default_value_t = 4)]
    n: i64,
    /// Also write the degree CSV of the entropy suite here.
    #[arg(long)]
    degrees_csv: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeqName {
    /// a[n+2k+1] a[n] = a[n+2k] a[n+1] + a[n+k] + a[n+k+1]
    Hh,
    /// a[j+2K+M] a[j] = a[j+M] a[j+2K] + a[j+M+K] + a[j+K]
    Ghh,
    /// a[n+1] a[n-3] = a[n] a[n-2] + a[n-1]
    DanaScott,
    /// Reduced frieze map on four values, starting at a[1]
    Frieze24,
}

#[derive(Args)]
struct SeqArgs {
    #[arg(value_enum)]
    name: SeqName,
    #[arg(long, default_value_t = 1)]
    k: i64,
    #[arg(long = "K", default_value_t = 1)]
    big_k: i64,
    #[arg(long = "M", default_value_t = 1)]
    m: i64,
    #[arg(long, default_value_t = 20)]
    len: usize,
    /// Search for a constant-coefficient recurrence up to this order.
    #[arg(long)]
    find_recurrence: Option<usize>,
    #[command(flatten)]
    common: Common,
}

fn parse_law(law: &str, k: Option<u32>) -> Result<EquationSpec, CliError> {
    let full = match (law, k) {
        ("det1" | "det2", Some(k)) => format!("{law}:{k}"),
        ("det1" | "det2", None) => return Err(CliError::Usage(format!("--law {law} needs --k"))),
        _ => law.to_string(),
    };
    full.parse().map_err(|e: hhlattice::lattice::LatticeError| CliError::Usage(e.to_string()))
}

fn parse_frame(frame: &str) -> Result<InitialFrame, CliError> {
    frame.parse().map_err(|e: hhlattice::lattice::LatticeError| CliError::Usage(e.to_string()))
}

fn default_frame(spec: EquationSpec) -> InitialFrame {
    match spec {
        EquationSpec::Hh2d => InitialFrame::l_frame(8, 4),
        EquationSpec::TwoFrieze => InitialFrame::staircase(12, 12, Sublattice::Even),
        EquationSpec::DetShift1 { k } | EquationSpec::DetShift2 { k } => {
            let reach = 4 * k as i64 + 6;
            InitialFrame::staircase(reach, reach, Sublattice::Even)
        }
    }
}

fn emit(common: &Common, body: &str) -> Result<(), CliError> {
    match &common.out {
        Some(p) => fs::write(p, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("output serializes") + "\n"
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
struct EvolveOutput {
    schema_version: u32,
    seed: String,
    grid: GridSnapshot,
}

fn evolve(args: &EvolveArgs) -> Result<(), CliError> {
    let spec = parse_law(&args.law, args.k)?;
    let frame = match &args.frame {
        Some(f) => parse_frame(f)?,
        None => default_frame(spec),
    };
    let seed = &args.common.seed;
    let snapshot = match seed.lattice() {
        None => grid_output(LatticeGrid::<RationalFunction>::seed_symbolic(frame, spec)?, &args.common)?,
        Some(values) => grid_output(LatticeGrid::seed_with(frame, spec, &values)?, &args.common)?,
    };
    let body = match args.common.format {
        Format::Json => to_json(&EvolveOutput {
            schema_version: hhlattice::SCHEMA_VERSION,
            seed: seed.to_string(),
            grid: snapshot.0,
        }),
        Format::Csv => snapshot.1,
        Format::Text => snapshot.2,
    };
    emit(&args.common, &body)
}

fn grid_output<V: Scalar>(
    mut g: LatticeGrid<V>,
    common: &Common,
) -> Result<(GridSnapshot, String, String), CliError> {
    g.evolve_all(common.schedule())?;
    let mut csv = String::from("n,t,value\n");
    for (s, v) in g.values() {
        csv.push_str(&format!("{},{},{}\n", s.n, s.t, csv_field(&v.to_string())));
    }
    Ok((g.snapshot(), csv, g.to_text()))
}

fn run_verify(args: &VerifyArgs) -> Result<bool, CliError> {
    let law = match &args.law {
        Some(l) => Some(parse_law(l, args.k)?),
        None => args.k.map(|k| EquationSpec::DetShift1 { k }),
    };
    let cfg = VerifyConfig {
        suite: args.suite,
        symbolic: args.symbolic,
        frame: args.frame.as_deref().map(parse_frame).transpose()?,
        seed: args.common.seed.clone(),
        law,
        big_k: args.big_k,
        m: args.m,
        len: args.len,
        trials: args.trials,
        rng_seed: args.rng_seed,
        t: args.t,
        n: args.n,
        schedule: args.common.schedule(),
    };
    let report = verify::run(&cfg)?;
    if let (Some(path), Some(csv)) = (&args.degrees_csv, verify::degrees_csv(&report)) {
        fs::write(path, csv)?;
    }
    let body = match args.common.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("name,inputs,holds,detail\n");
            for a in &report.assertions {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    csv_field(&a.name),
                    csv_field(&a.inputs.to_string()),
                    a.holds,
                    csv_field(a.detail.as_deref().unwrap_or(""))
                ));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for a in &report.assertions {
                let status = if a.holds { "ok" } else { "FAILED" };
                out.push_str(&format!("{status} {} {}\n", a.name, a.inputs));
            }
            for n in &report.notes {
                out.push_str(&format!("note: {n}\n"));
            }
            out.push_str(&format!("{}: {}\n", args_suite_name(args.suite), if report.passed { "passed" } else { "failed" }));
            out
        }
    };
    emit(&args.common, &body)?;
    Ok(report.passed)
}

fn args_suite_name(s: Suite) -> String {
    s.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

#[derive(Serialize)]
#[serde(bound(serialize = "ConstantRecurrence<V>: Serialize"))]
struct SeqOutput<'a, V: std::fmt::Display> {
    schema_version: u32,
    recurrence: String,
    seed: String,
    all_integers: bool,
    sequence: SequenceJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant_recurrence: Option<&'a ConstantRecurrence<V>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    recurrence_search_order: Option<usize>,
}

fn seq(args: &SeqArgs) -> Result<(), CliError> {
    let seed = &args.common.seed;
    if seed.is_symbolic() {
        let init = |start, count| Ok::<_, std::convert::Infallible>(Sequence::<RationalFunction>::generators(start, count).terms);
        let s = iterate_named(args, init)?;
        seq_output(args, &s)
    } else {
        let init = |_, count| seed.sequence_init(count);
        let s = iterate_named(args, init)?;
        seq_output(args, &s)
    }
}

fn iterate_named<V: Scalar, I, E>(args: &SeqArgs, init: I) -> Result<Sequence<V>, CliError>
where
    I: Fn(i64, usize) -> Result<Vec<V>, E>,
    E: Into<InitError>,
{
    let get = |start, count| init(start, count).map_err(|e| CliError::Usage(e.into().0));
    Ok(match args.name {
        SeqName::Hh => heideman_hogan(args.k, &get(0, 2 * args.k.max(0) as usize + 1)?, args.len)?,
        SeqName::Ghh => {
            let spec = ReductionSpec::new(args.big_k, args.m)?;
            iterate_generalized_hh(spec, &get(0, spec.order())?, args.len)?
        }
        SeqName::DanaScott => dana_scott(&get(0, 4)?, args.len)?,
        SeqName::Frieze24 => reduced_frieze_iterate(&get(1, 4)?, args.len)?,
    })
}

/// Error text from building initial values.
struct InitError(String);

impl From<String> for InitError {
    fn from(s: String) -> Self {
        InitError(s)
    }
}

impl From<std::convert::Infallible> for InitError {
    fn from(e: std::convert::Infallible) -> Self {
        match e {}
    }
}

fn seq_output<V: Scalar + ExactParts>(args: &SeqArgs, s: &Sequence<V>) -> Result<(), CliError> {
    let found = args.find_recurrence.and_then(|max| constant_recurrence_finder(s, max));
    let body = match args.common.format {
        Format::Csv => s.to_csv(),
        Format::Json | Format::Text => {
            let records = s.to_records();
            let out = SeqOutput {
                schema_version: hhlattice::SCHEMA_VERSION,
                recurrence: match args.name {
                    SeqName::Hh => format!("hh k={}", args.k),
                    SeqName::Ghh => format!("ghh K={} M={}", args.big_k, args.m),
                    SeqName::DanaScott => "dana-scott".into(),
                    SeqName::Frieze24 => "frieze24".into(),
                },
                seed: args.common.seed.to_string(),
                all_integers: records.terms.iter().all(|t| t.is_integer),
                sequence: records,
                constant_recurrence: found.as_ref(),
                recurrence_search_order: args.find_recurrence,
            };
            if let Format::Text = args.common.format {
                let values: Vec<String> = out.sequence.terms.iter().map(|t| t.value.clone()).collect();
                format!("{}\n", values.join(","))
            } else {
                to_json(&out)
            }
        }
    };
    emit(&args.common, &body)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Evolve(a) => evolve(a).map(|()| true),
        Command::Verify(a) => run_verify(a),
        Command::Seq(a) => seq(a).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&e.payload()).expect("payload serializes"));
            ExitCode::from(e.exit_code())
        }
    }
}
