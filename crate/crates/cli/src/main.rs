//! `penny`: build, audit, discharge, certify, generate and plot.
//!
//! Exit status: 0 when every check passes, 2 when a report contains a
//! violation (or a certificate does not pass), 1 on usage or input errors.

mod pointset;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use penny_core::audit::audit;
use penny_core::certificates::{certify_clover, certify_clover_auto, certify_kifli, emit_angle_plot, Verdict};
use penny_core::discharge::{discharge_report, Variant};
use penny_core::error::Error;
use penny_core::format::{rational_json, scalar_json};
use penny_core::generators::{
    densify_search, generate, load_fixture, parse_rational, InstanceSpec, ANNEAL_T0, ANNEAL_T1, ANNEAL_TOURNAMENT,
};
use penny_core::graph::enumerate_faces;

use pointset::PointSetFile;

#[derive(Parser)]
#[command(name = "penny", version, about = "Exact penny graphs, audits, discharging and interval certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Point-set file; `-` or absent reads stdin.
    input: Option<PathBuf>,
    /// Output file (written atomically); stdout when absent.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Out {
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Weak,
    Main,
}

#[derive(Subcommand)]
enum Command {
    /// Build the penny graph and write a summary.
    Build(Io),
    /// Run every structural check.
    Audit(Io),
    /// Run discharging and verify the density bound.
    Discharge {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value = "main")]
        variant: VariantArg,
        /// Threshold charge as p/q (defaults: weak 1/5, main 2/9).
        #[arg(long)]
        q: Option<String>,
    },
    /// Interval certificates.
    #[command(subcommand)]
    Certify(Certify),
    /// Write a point-set file.
    #[command(subcommand)]
    Gen(Gen),
    /// Write a CSV table.
    #[command(subcommand)]
    Plot(Plot),
}

#[derive(Subcommand)]
enum Certify {
    Kifli {
        /// Boxes per axis before refinement.
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Without --eps/--delta the parameters are tuned automatically.
    Clover {
        #[arg(long, requires = "delta")]
        eps: Option<f64>,
        #[arg(long, requires = "eps")]
        delta: Option<f64>,
        /// Grid points on the middle segment.
        #[arg(long, default_value_t = 2000)]
        grid: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Hexagonal lattice piece with k rings.
    Hex {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Lattice piece with rational perturbations of size below magnitude.
    Perturbed {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1/1000")]
        magnitude: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Random unit-step growth in general position.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Uniformly scattered points in general position.
    Uniform {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Simulated annealing for many unit distances.
    #[command(long_about = format!(
        "Simulated annealing for many unit distances. Each step removes the lowest-degree vertex \
         of {ANNEAL_TOURNAMENT} random picks and re-inserts a unit-step point; a move changing the \
         edge count by d is accepted with probability min(1, exp(d/T)), T decaying geometrically \
         from {ANNEAL_T0} to {ANNEAL_T1}."
    ))]
    Densify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        iterations: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Named declared-mode configuration.
    Fixture {
        name: String,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum Plot {
    /// The clover angle on [π/3, 2π/3] as x,angle rows.
    CloverAngle {
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        #[command(flatten)]
        out: Out,
    },
}

enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<PointSetFile, Failure> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("malformed JSON: {e}")))?;
    Ok(PointSetFile::from_json(&v)?)
}

/// Writes next to the target and renames, so readers never see a partial file.
fn write_atomic(path: &Path, data: &[u8]) -> io::Result<()> {
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, data)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json(out: &Option<PathBuf>, v: &Value) -> Result<(), Failure> {
    emit(out, serde_json::to_string_pretty(v).expect("json") + "\n")
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Build(io) => build(io),
        Command::Audit(io) => {
            let g = read_input(&io.input)?.graph()?;
            let report = audit(&g);
            emit_json(&io.out, &serde_json::to_value(&report).expect("report"))?;
            Ok(report.all_passed())
        }
        Command::Discharge { io, variant, q } => {
            let variant = match variant {
                VariantArg::Weak => Variant::Weak,
                VariantArg::Main => Variant::Main,
            };
            let q = match q {
                Some(s) => parse_rational(&s)?,
                None => variant.default_q(),
            };
            let g = read_input(&io.input)?.graph()?;
            let (ledger, verdict) = discharge_report(&g, variant, &q);
            let ok = verdict.passed();
            emit_json(&io.out, &json!({ "verdict": verdict, "ledger": ledger }))?;
            Ok(ok)
        }
        Command::Certify(Certify::Kifli { grid, out }) => {
            let c = certify_kifli(grid)?;
            emit_json(&out.out, &serde_json::to_value(&c).expect("certificate"))?;
            Ok(c.verdict == Verdict::Pass)
        }
        Command::Certify(Certify::Clover { eps, delta, grid, out }) => {
            let c = match (eps, delta) {
                (Some(e), Some(d)) => certify_clover(e, d, grid)?,
                _ => certify_clover_auto()?,
            };
            emit_json(&out.out, &serde_json::to_value(&c).expect("certificate"))?;
            Ok(c.verdict == Verdict::Pass)
        }
        Command::Gen(g) => gen(g),
        Command::Plot(Plot::CloverAngle { samples, out }) => {
            let rows = emit_angle_plot(samples)?;
            let mut csv = String::from("x,angle\n");
            for (x, a) in rows {
                csv.push_str(&format!("{x:?},{a:?}\n"));
            }
            emit(&out.out, csv)?;
            Ok(true)
        }
    }
}

fn build(io: Io) -> Outcome {
    let file = read_input(&io.input)?;
    let g = file.graph()?;
    let gp = g.general_position();
    let faces = enumerate_faces(&g);
    let summary = json!({
        "mode": g.mode(),
        "vertices": g.n(),
        "edges": g.e(),
        "density": rational_json(&num_ratio(g.e(), g.n())),
        "d_min_sq": scalar_json(g.d_min_sq()),
        "max_degree": g.max_degree(),
        "components": g.n_components(),
        "euler_holds": g.euler_holds(),
        "general_position": {
            "holds": gp.holds(),
            "collinear_triples": gp.collinear_triples.len(),
            "first_triples": gp.collinear_triples.iter().take(10).collect::<Vec<_>>(),
        },
        "edge_list": g.edges(),
        "rotation": (0..g.n()).map(|v| g.rotation(v)).collect::<Vec<_>>(),
        "faces": faces,
        "spec": file.spec,
    });
    emit_json(&io.out, &summary)?;
    Ok(true)
}

fn num_ratio(a: usize, b: usize) -> num_rational::BigRational {
    num_rational::BigRational::new((a as i64).into(), (b.max(1) as i64).into())
}

fn gen(cmd: Gen) -> Outcome {
    let (file, out) = match cmd {
        Gen::Hex { k, out } => (exact(InstanceSpec::hex(k))?, out),
        Gen::Perturbed { k, magnitude, seed, out } => {
            let m = parse_rational(&magnitude)?;
            (exact(InstanceSpec::perturbed(k, &m, seed))?, out)
        }
        Gen::Random { n, seed, out } => (exact(InstanceSpec::random(n, seed))?, out),
        Gen::Uniform { n, seed, out } => (exact(InstanceSpec::uniform(n, seed))?, out),
        Gen::Densify { n, iterations, seed, out } => {
            let r = densify_search(n, iterations, seed)?;
            let mut f = PointSetFile::exact(r.points.clone(), Some(InstanceSpec::densified(n, iterations, seed)));
            f.extra.insert("search".into(), serde_json::to_value(&r).expect("summary"));
            (f, out)
        }
        Gen::Fixture { name, out } => {
            let fx = load_fixture(&name)?;
            (PointSetFile::declared(fx.coords, fx.edges, Some(InstanceSpec::fixture(&name))), out)
        }
    };
    emit_json(&out.out, &file.to_json())?;
    Ok(true)
}

fn exact(spec: InstanceSpec) -> Result<PointSetFile, Failure> {
    let pts = generate(&spec)?;
    Ok(PointSetFile::exact(pts, Some(spec)))
}
