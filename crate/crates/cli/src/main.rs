//! `watermelon`: command-line front end of the watermelon laboratory.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 on
//! usage or input errors.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use watermelon::discrete_walk::{WatermelonPath, WatermelonSampler};
use watermelon::exact_count::{count_stars, count_watermelons, StarQuery};
use watermelon::moments::{
    moment_nowall_p2, moment_wall_p2, normalized_moment, reference_table, sym_nowall_expectation,
    sym_wall_expectation,
};
use watermelon::rng::DEFAULT_SEED;
use watermelon::sde_sim::{simulate, simulate_batch, SdeConfig};
use watermelon::spectral_laws::{density, DensityParams};
use watermelon::suite::{run_suite, verify_paths, SuitePlan, STANDARD_TIMES};

use render::{render_svg, RenderSpec};

#[derive(Parser)]
#[command(name = "watermelon", version, about = "Exact counts, samplers and limit laws of watermelon path ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct SeedArg {
    /// Base seed (defaults to $WATERMELON_SEED, then a built-in value)
    #[arg(long, env = "WATERMELON_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Exact number of watermelons (--n) or stars (--m and --e)
    Count {
        #[arg(long)]
        p: usize,
        /// Half-length: count watermelons of length 2n
        #[arg(long, conflicts_with_all = ["m", "e"])]
        n: Option<u64>,
        /// Star length
        #[arg(long, requires = "e")]
        m: Option<u64>,
        /// Star endpoint heights, increasing (comma-separated or repeated)
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, num_args = 1..)]
        e: Vec<i64>,
        #[arg(long)]
        wall: bool,
    },
    /// Uniformly random watermelon(s) as path CSV
    Sample {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        wall: bool,
        #[command(flatten)]
        seed: SeedArg,
        /// Number of paths; written as a directory of CSV files plus manifest.json
        #[arg(long)]
        batch: Option<usize>,
        /// Output file (single path) or directory (batch); stdout if omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Euler–Maruyama trajectory of the limit SDE
    Simulate {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        wall: bool,
        #[arg(long, default_value_t = 0.02)]
        t0: f64,
        #[arg(long, default_value_t = 1e-4)]
        dt: f64,
        #[arg(long, default_value_t = 1e-3)]
        gap_floor: f64,
        #[arg(long, default_value_t = 40)]
        max_halvings: u32,
        #[command(flatten)]
        seed: SeedArg,
        /// Simulate this many replicas and print their summary JSON instead of a trajectory
        #[arg(long)]
        batch: Option<usize>,
        /// Trajectory CSV file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary JSON file
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Limit marginal density at time t
    Density {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        t: f64,
        /// Point coordinates (comma-separated or repeated)
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, num_args = 1.., required = true)]
        x: Vec<f64>,
        #[arg(long)]
        wall: bool,
    },
    /// Moment table and closed-form values as JSON
    Moments {
        #[arg(long)]
        wall: bool,
        /// Branch (1 or 2) of the p = 2 moment formula
        #[arg(long, requires_all = ["order", "t"])]
        branch: Option<usize>,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long)]
        t: Option<f64>,
        /// p of the symmetric-polynomial formula (with --k and --t)
        #[arg(long, requires_all = ["k", "t"])]
        p: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run the verification suite
    Verify {
        /// Run the default plan (the default when no other source is given)
        #[arg(long, conflicts_with_all = ["plan", "from_file"])]
        default: bool,
        /// Plan file: JSON list of {check, params, tolerance}
        #[arg(long, conflicts_with = "from_file")]
        plan: Option<PathBuf>,
        /// Path CSV or batch directory written by `sample`
        #[arg(long)]
        from_file: Option<PathBuf>,
        /// Wall setting of a single path CSV given with --from-file
        #[arg(long)]
        wall: bool,
        /// Worker threads (0 = all cores)
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Report file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a path CSV as SVG
    Render {
        #[arg(long)]
        input: PathBuf,
        /// Validate against the wall and draw the axis
        #[arg(long)]
        wall: bool,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 800.0)]
        width: f64,
        #[arg(long, default_value_t = 400.0)]
        height: f64,
        #[arg(long, default_value_t = 20.0)]
        margin: f64,
        #[arg(long, default_value_t = 1.5)]
        stroke_width: f64,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    ChecksFailed,
}

impl From<watermelon::Error> for Failure {
    fn from(e: watermelon::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

/// Written next to batch CSV files so the batch can be read back.
#[derive(Serialize, Deserialize)]
struct Manifest {
    p: usize,
    n: u64,
    wall: bool,
    seed: u64,
    count: usize,
}

fn emit(text: &str, out: Option<&Path>) -> CliResult {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_count(p: usize, n: Option<u64>, m: Option<u64>, e: Vec<i64>, wall: bool) -> CliResult {
    let count = match (n, m) {
        (Some(n), None) => count_watermelons(p, n, wall)?,
        (None, Some(m)) => count_stars(&StarQuery::new(p, m, e, wall)?),
        _ => return Err(Failure::Usage("give either --n, or --m with --e".into())),
    };
    println!("{count}");
    Ok(())
}

fn cmd_sample(p: usize, n: u64, wall: bool, seed: u64, batch: Option<usize>, out: Option<PathBuf>) -> CliResult {
    let sampler = WatermelonSampler::new(p, n, wall)?;
    match batch {
        None => emit(&sampler.sample(seed).to_csv(), out.as_deref()),
        Some(count) => {
            let dir = out.ok_or_else(|| Failure::Usage("--batch needs --out DIR".into()))?;
            fs::create_dir_all(&dir)?;
            let width = count.saturating_sub(1).to_string().len().max(4);
            for (i, path) in sampler.sample_map(seed, count, |path| path).into_iter().enumerate() {
                fs::write(dir.join(format!("path_{i:0width$}.csv")), path.to_csv())?;
            }
            fs::write(dir.join("manifest.json"), to_json(&Manifest { p, n, wall, seed, count }))?;
            Ok(())
        }
    }
}

fn cmd_simulate(
    config: SdeConfig<f64>,
    batch: Option<usize>,
    out: Option<PathBuf>,
    summary: Option<PathBuf>,
) -> CliResult {
    if let Some(count) = batch {
        let outcome = simulate_batch(&config, count, &STANDARD_TIMES)?;
        return emit(&to_json(&outcome.summary()?), summary.as_deref());
    }
    let traj = simulate(&config)?;
    let info = json!({
        "p": config.p,
        "wall": config.wall,
        "seed": config.seed,
        "t0": config.t0,
        "dt": config.dt,
        "gap_floor": config.gap_floor,
        "points": traj.len(),
        "halvings": traj.halvings,
        "violations": traj.violations(config.chamber()),
        "endpoint": "pinned to 0 at t = 1",
    });
    let has_out = out.is_some();
    emit(&traj.to_csv(), out.as_deref())?;
    if summary.is_some() || has_out {
        emit(&to_json(&info), summary.as_deref())?;
    }
    Ok(())
}

fn cmd_density(p: usize, t: f64, x: Vec<f64>, wall: bool) -> CliResult {
    let params = DensityParams::new(p, t, wall)?;
    println!("{}", density(&params, &x)?);
    Ok(())
}

fn cmd_moments(
    wall: bool,
    branch: Option<usize>,
    order: Option<u32>,
    t: Option<f64>,
    p: Option<usize>,
    k: Option<usize>,
) -> CliResult {
    let table = reference_table()
        .into_iter()
        .map(|e| {
            let closed = normalized_moment(e.wall, e.branch, e.order)?;
            Ok(json!({
                "wall": e.wall,
                "branch": e.branch,
                "order": e.order,
                "expression": e.expression,
                "table_value": e.value,
                "closed_form": closed,
            }))
        })
        .collect::<Result<Vec<_>, watermelon::Error>>()?;
    let mut doc = json!({ "normalization": "2πE/s^(k/2) without wall, 3πE/s^(k/2) with wall, s = t(1-t)", "table": table });
    if let (Some(b), Some(order), Some(t)) = (branch, order, t) {
        let value = if wall { moment_wall_p2(b, order, t)? } else { moment_nowall_p2(b, order, t)? };
        doc["moment"] = json!({ "wall": wall, "branch": b, "order": order, "t": t, "value": value });
    }
    if let (Some(p), Some(k), Some(t)) = (p, k, t) {
        let value = if wall { sym_wall_expectation(p, k, t)? } else { sym_nowall_expectation(p, k, t)? };
        doc["symmetric"] = json!({ "wall": wall, "p": p, "k": k, "t": t, "value": value });
    }
    emit(&to_json(&doc), None)
}

fn read_paths(source: &Path, wall: bool) -> Result<Vec<WatermelonPath>, Failure> {
    if source.is_dir() {
        let manifest: Manifest = serde_json::from_str(&fs::read_to_string(source.join("manifest.json"))?)
            .map_err(|e| Failure::Usage(format!("bad manifest: {e}")))?;
        let mut files: Vec<PathBuf> = fs::read_dir(source)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .collect();
        files.sort();
        files
            .iter()
            .map(|f| Ok(WatermelonPath::from_csv(&fs::read_to_string(f)?, manifest.wall)?))
            .collect()
    } else {
        Ok(vec![WatermelonPath::from_csv(&fs::read_to_string(source)?, wall)?])
    }
}

fn cmd_verify(
    plan: Option<PathBuf>,
    from_file: Option<PathBuf>,
    wall: bool,
    workers: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> CliResult {
    let report = if let Some(source) = from_file {
        verify_paths(&read_paths(&source, wall)?, seed)?
    } else {
        let plan = match plan {
            Some(file) => SuitePlan::from_json(&fs::read_to_string(file)?)?,
            None => SuitePlan::default_plan(),
        };
        run_suite(&plan, seed, workers)?
    };
    let mut text = report.to_json();
    text.push('\n');
    emit(&text, out.as_deref())?;
    for c in report.failures() {
        eprintln!("FAIL {}: {} > {}", c.name, c.statistic, c.threshold);
    }
    if report.verdict {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_render(
    input: PathBuf,
    wall: bool,
    output: Option<PathBuf>,
    width: f64,
    height: f64,
    margin: f64,
    stroke_width: f64,
) -> CliResult {
    let path = WatermelonPath::from_csv(&fs::read_to_string(input)?, wall)?;
    let spec = RenderSpec { width, height, margin, stroke_width, wall_axis: wall, ..RenderSpec::default() };
    let svg = render_svg(&path, &spec).map_err(Failure::Usage)?;
    emit(&svg, output.as_deref())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Count { p, n, m, e, wall } => cmd_count(p, n, m, e, wall),
        Command::Sample { p, n, wall, seed, batch, out } => cmd_sample(p, n, wall, seed.seed, batch, out),
        Command::Simulate { p, wall, t0, dt, gap_floor, max_halvings, seed, batch, out, summary } => {
            let config = SdeConfig { p, wall, t0, dt, gap_floor, max_halvings, seed: seed.seed };
            config.validate()?;
            cmd_simulate(config, batch, out, summary)
        }
        Command::Density { p, t, x, wall } => cmd_density(p, t, x, wall),
        Command::Moments { wall, branch, order, t, p, k } => cmd_moments(wall, branch, order, t, p, k),
        Command::Verify { default: _, plan, from_file, wall, workers, seed, out } => {
            cmd_verify(plan, from_file, wall, workers, seed.seed, out)
        }
        Command::Render { input, wall, output, width, height, margin, stroke_width } => {
            cmd_render(input, wall, output, width, height, margin, stroke_width)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
