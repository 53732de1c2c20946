use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cayley_ldpc::cyclic::{
    self, bch_code, bch_r_for_a, CodeParams, CyclicCode, DistanceMode, EXACT_DISTANCE_MAX_DIM,
};
use cayley_ldpc::lsv::Variant;
use cayley_ldpc::pipeline::{
    self, BuildOptions, Checks, DistanceChoice, GraphOptions, PipelineError, Report,
    DEFAULT_DISTANCE_TRIALS, DEFAULT_INVARIANCE_ROWS,
};
use cayley_ldpc::spectrum::SpectrumMode;

/// Ramanujan Cayley graphs on PSL2/PGL2 and the symmetric LDPC codes on
/// their edges.
///
/// Exit status: 0 when every check passes, 1 when a mathematical check
/// fails, 2 on usage or I/O errors.
#[derive(Parser)]
#[command(name = "cayley-ldpc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Narrow-sense binary BCH code of length 2^m - 1.
    Bch(BchArgs),
    /// Double an odd-length cyclic code to length 2n with the same rate.
    Double(DoubleArgs),
    /// Build a Cayley graph, certify its spectrum and edge transitivity.
    Graph(GraphArgs),
    /// Build the edge code for an inner cyclic code and check it.
    Build(BuildArgs),
    /// Re-check an instance directory written by `build`.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct BchArgs {
    #[arg(long)]
    m: u32,
    /// Designed distance minus one.
    #[arg(long, conflicts_with = "a", required_unless_present = "a")]
    r: Option<usize>,
    /// Choose r = floor(n (a - 2) / (m a)).
    #[arg(long)]
    a: Option<u64>,
    /// Where to write the code file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DoubleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Dense,
    Iterative,
}

impl ModeArg {
    fn mode(self) -> Option<SpectrumMode> {
        match self {
            ModeArg::Auto => None,
            ModeArg::Dense => Some(SpectrumMode::Dense),
            ModeArg::Iterative => Some(SpectrumMode::Iterative),
        }
    }
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Odd prime (required except with `build --paper-instance`).
    #[arg(long)]
    q: Option<u64>,
    /// Extension degree of the field F_(q^e).
    #[arg(long, default_value_t = 1)]
    e: usize,
    #[arg(long, value_parser = parse_variant, default_value = "psl")]
    variant: Variant,
    /// Nonsquare of F_q, or "auto" for the smallest.
    #[arg(long, default_value = "auto")]
    delta: AutoInt,
    /// Index of y-bar in F_(q^e), or "auto" for the first admissible one.
    #[arg(long, default_value = "auto")]
    ybar: AutoInt,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GroupArgs {
    fn options(&self) -> Result<GraphOptions, Failure> {
        let q = self
            .q
            .ok_or_else(|| Failure::Usage("--q is required".into()))?;
        Ok(GraphOptions {
            q,
            e: self.e,
            variant: self.variant,
            delta: self.delta.0,
            ybar: self.ybar.0.map(u128::from),
            mode: self.mode.mode(),
            seed: self.seed,
        })
    }
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Edge list output.
    #[arg(long)]
    edges: Option<PathBuf>,
    /// JSON report output; printed to stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistanceArg {
    None,
    Exact,
    Sampled,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Inner cyclic code file of length q + 1.
    #[arg(long, required_unless_present = "paper_instance")]
    inner: Option<PathBuf>,
    /// Directory for graph.edges, code.alist, inner.code and report.json.
    #[arg(long, required_unless_present = "paper_instance")]
    out_dir: Option<PathBuf>,
    /// Rows sampled for the invariance check.
    #[arg(long, default_value_t = DEFAULT_INVARIANCE_ROWS)]
    trials: usize,
    #[arg(long, value_enum, default_value = "none")]
    distance: DistanceArg,
    /// Information-set trials for `--distance sampled`.
    #[arg(long, default_value_t = DEFAULT_DISTANCE_TRIALS)]
    distance_trials: u64,
    /// Only the inner-code checks and bound values for q = 4093, m = 11,
    /// a = 8; the group is not instantiated.
    #[arg(long)]
    paper_instance: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance directory.
    dir: PathBuf,
    /// Print the check details as JSON.
    #[arg(long)]
    json: bool,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

/// An integer, or `auto` for `None`.
#[derive(Clone, Copy, Debug)]
struct AutoInt(Option<u64>);

impl std::str::FromStr for AutoInt {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(AutoInt(None));
        }
        s.parse()
            .map(|x| AutoInt(Some(x)))
            .map_err(|_| format!("expected \"auto\" or an integer, got {s:?}"))
    }
}

enum Failure {
    Usage(String),
    Checks,
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<cyclic::CodeError> for Failure {
    fn from(e: cyclic::CodeError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bch(args) => cmd_bch(&args),
        Command::Double(args) => cmd_double(&args),
        Command::Graph(args) => cmd_graph(&args),
        Command::Build(args) => cmd_build(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Parameters with the exact distance when the dimension allows it.
fn code_params(code: &CyclicCode, designed: usize) -> Result<CodeParams, Failure> {
    let exact = (code.dim() <= EXACT_DISTANCE_MAX_DIM)
        .then(|| code.min_distance(DistanceMode::Exact))
        .transpose()?;
    Ok(code.params(designed, exact.as_ref()))
}

fn write_code(code: &CyclicCode, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => pipeline::write_with(path, |w| code.write_text(w)).map_err(Failure::from),
        None => Ok(()),
    }
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn cmd_bch(args: &BchArgs) -> Result<(), Failure> {
    let r = match (args.r, args.a) {
        (Some(r), _) => r,
        (None, Some(a)) => bch_r_for_a(args.m, a)?,
        (None, None) => return Err(Failure::Usage("one of --r or --a is required".into())),
    };
    let code = bch_code(args.m, r)?;
    write_code(&code, args.out.as_deref())?;
    print_json(&json!({ "m": args.m, "r": r, "params": code_params(&code, r + 1)? }));
    Ok(())
}

fn cmd_double(args: &DoubleArgs) -> Result<(), Failure> {
    let code = pipeline::read_inner_code(&args.input)?;
    let doubled = code.double_length()?;
    write_code(&doubled, args.out.as_deref())?;
    // the doubled code has the distance of the original, so the original's
    // exact distance (when known) is a valid designed value
    let base = code_params(&code, 1)?;
    let d = base.d_exact.unwrap_or(base.d_lower);
    print_json(&json!({ "input": base, "doubled": code_params(&doubled, d)? }));
    Ok(())
}

fn emit_report(report: &Report, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, report.to_json())
            .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        None => print!("{}", report.to_json()),
    }
    Ok(())
}

fn summarize(checks: &Checks) -> Result<(), Failure> {
    for (name, ok) in &checks.results {
        eprintln!("{} {name}", if *ok { "pass" } else { "FAIL" });
    }
    if checks.pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_graph(args: &GraphArgs) -> Result<(), Failure> {
    let run = pipeline::run_graph(&args.group.options()?)?;
    if let Some(path) = &args.edges {
        pipeline::write_with(path, |w| run.adjacency().write_edges(w))?;
    }
    let report = run.report();
    emit_report(&report, args.report.as_deref())?;
    summarize(&report.checks)
}

fn cmd_build(args: &BuildArgs) -> Result<(), Failure> {
    if args.paper_instance {
        let report = pipeline::paper_instance()?;
        emit_report(&report, None)?;
        return summarize(&report.checks);
    }
    let (Some(inner_path), Some(out_dir)) = (&args.inner, &args.out_dir) else {
        return Err(Failure::Usage("--inner and --out-dir are required".into()));
    };
    let graph = args.group.options()?;
    graph.validate()?;
    let options = BuildOptions {
        graph,
        inner: pipeline::read_inner_code(inner_path)?,
        invariance_rows: args.trials,
        distance: match args.distance {
            DistanceArg::None => DistanceChoice::None,
            DistanceArg::Exact => DistanceChoice::Exact,
            DistanceArg::Sampled => DistanceChoice::Sampled {
                trials: args.distance_trials,
            },
        },
    };
    let run = pipeline::run_build(&options)?;
    pipeline::write_instance(out_dir, &run)?;
    summarize(&run.report.checks)
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let checks = pipeline::verify_instance(&args.dir)?;
    if args.json {
        print_json(&json!(checks));
    }
    for (name, ok) in &checks.results {
        println!("{} {name}", if *ok { "pass" } else { "FAIL" });
    }
    let failed = checks.failed();
    println!("{} checks, {} failed", checks.results.len(), failed.len());
    if checks.pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}
