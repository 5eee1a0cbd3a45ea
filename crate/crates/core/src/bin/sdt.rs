use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sorted_delaunay::hull::{hull_of_sorted, CollinearPolicy};
use sorted_delaunay::io::{self, BenchConfig, InputError};
use sorted_delaunay::verify::audit_counts;
use sorted_delaunay::{
    convex_hull, sort_points, verify_triangulation, Error, Point2, Triangulator,
};

const EXIT_INPUT: u8 = 1;
const EXIT_DEGENERATE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

/// Delaunay triangulation and convex hull by sorted incremental insertion.
#[derive(Parser, Debug)]
#[command(name = "sdt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convex hull vertices, counterclockwise from the smallest point.
    Hull(RunArgs),
    /// Delaunay triangulation.
    Tri(RunArgs),
    /// Triangulate and check every property; exits 3 on any failure.
    Verify(SourceArgs),
    /// Time sorting and construction over a range of sizes.
    Bench(BenchArgs),
    /// Write seeded uniform points.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// Point file, one `x,y` or `x y` per line.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    input: Option<PathBuf>,
    /// Generate this many uniform points instead of reading a file.
    #[arg(long, value_name = "N")]
    gen: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print operation counters to stderr.
    #[arg(long)]
    counters: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [10_000, 20_000, 40_000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run sizes on separate threads.
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_name = "N")]
    gen: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Edges,
    Triangles,
    Off,
    Svg,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Degenerate(String),
    Verification,
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_degenerate_input() {
            Failure::Degenerate(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn load(source: &SourceArgs) -> Result<Vec<Point2>, Failure> {
    match (&source.input, source.gen) {
        (Some(path), _) => Ok(io::ingest(path)?),
        (None, Some(n)) => Ok(io::generate_uniform(n, source.seed)),
        (None, None) => Err(Failure::Input("no input source".into())),
    }
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn seed_label(source: &SourceArgs) -> String {
    match source.gen {
        Some(n) => format!("gen={n} seed={}", source.seed),
        None => "seed=none".into(),
    }
}

fn run_hull(args: &RunArgs) -> Result<(), Failure> {
    if matches!(args.format, Some(f) if f != Format::Svg) {
        return Err(Failure::Input("hull supports only --format svg".into()));
    }
    let hull = convex_hull(&load(&args.source)?)?;
    let text = match args.format {
        Some(Format::Svg) => io::emit_svg(&hull.points, &Default::default(), &hull.chain),
        _ => io::emit_hull(&hull),
    };
    write_out(&args.out, &text)?;
    if args.counters {
        eprintln!("{} {}", seed_label(&args.source), hull.counters);
    }
    if hull.chain.is_degenerate() {
        return Err(Failure::Degenerate(format!(
            "{} distinct points, all collinear or fewer than 3",
            hull.points.len()
        )));
    }
    Ok(())
}

fn run_tri(args: &RunArgs) -> Result<(), Failure> {
    let ps = sort_points(&load(&args.source)?)?;
    let t = Triangulator::new(ps)?.run()?;
    let text = match args.format.unwrap_or(Format::Triangles) {
        Format::Triangles => io::emit_triangles(&t.points, &t.map),
        Format::Edges => io::emit_edges(&t.points, &t.map),
        Format::Off => io::emit_off(&t),
        Format::Svg => io::emit_svg(&t.points, &t.map, &t.hull),
    };
    write_out(&args.out, &text)?;
    if args.counters {
        eprintln!("{} {}", seed_label(&args.source), t.counters);
    }
    Ok(())
}

fn run_verify(source: &SourceArgs) -> Result<(), Failure> {
    let ps = sort_points(&load(source)?)?;
    let n = ps.len();
    let (_, hull_counters) = hull_of_sorted(&ps, CollinearPolicy::Drop)?;
    let t = Triangulator::new(ps)?.check_opposite_sides(true).run()?;
    let mut reports = verify_triangulation(&t, source.seed);
    let mut audit = audit_counts(&hull_counters, n);
    audit.seed = source.seed;
    reports.push(audit);
    for r in &reports {
        println!("{r}");
    }
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run_bench(args: &BenchArgs) -> Result<(), Failure> {
    let report = io::bench(&BenchConfig {
        sizes: args.sizes.clone(),
        reps: args.reps,
        seed: args.seed,
        parallel: args.parallel,
    })?;
    write_out(&args.out, &report.to_csv())
}

fn run_gen(args: &GenArgs) -> Result<(), Failure> {
    let points = io::generate_uniform(args.gen, args.seed);
    let text = format!(
        "# uniform n={} seed={}\n{}",
        args.gen,
        args.seed,
        io::format_points(&points)
    );
    write_out(&args.out, &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Hull(args) => run_hull(args),
        Command::Tri(args) => run_tri(args),
        Command::Verify(source) => run_verify(source),
        Command::Bench(args) => run_bench(args),
        Command::Gen(args) => run_gen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Degenerate(msg)) => {
            eprintln!("degenerate input: {msg}");
            ExitCode::from(EXIT_DEGENERATE)
        }
        Err(Failure::Verification) => ExitCode::from(EXIT_VERIFY),
    }
}
