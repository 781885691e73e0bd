use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kinetic_hourglass::curves::Domain;
use kinetic_hourglass::hourglass::{Hourglass, HourglassError};
use kinetic_hourglass::io::{
    self, DiagramJson, EmbeddedGraphJson, IoError, KineticGraphJson, VineyardDump,
    WeightedGraphJson,
};
use kinetic_hourglass::kinetic_pq::Flavor;
use kinetic_hourglass::matching::{diagram_reduction, static_bottleneck, MatchingError};
use kinetic_hourglass::pht::{
    compute_vines, direction_distance, distance_between, sampled_oracle, EmbeddedGraph, PhtError,
    CLOSURE_TOL,
};

#[derive(Parser, Debug)]
#[command(name = "hourglass", version, about = "Kinetic bottleneck matching and PHT distances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Kinetic priority queue behind the hourglass.
    #[arg(long, value_enum, default_value_t = FlavorArg::Heap, global = true)]
    flavor: FlavorArg,
    /// Seed for the hanger's coin flips; required with --flavor hanger.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of sampled directions for compare-oracle.
    #[arg(long, default_value_t = 10_000, global = true)]
    samples: usize,
    /// End time of a kinetic run; defaults to the end of the plan domain.
    #[arg(long, global = true)]
    until: Option<f64>,
    /// Event trace CSV.
    #[arg(long, global = true)]
    out_trace: Option<PathBuf>,
    /// Trajectory CSV (kinetic: one row per piece; pht-distance: sampled d(θ)).
    #[arg(long, global = true)]
    out_traj: Option<PathBuf>,
    /// Exact trajectory pieces as JSON.
    #[arg(long, global = true)]
    out_pieces: Option<PathBuf>,
    /// Vineyard dump JSON (pht-distance only), one object per input graph.
    #[arg(long, global = true)]
    out_vines: Option<PathBuf>,
    /// Relative gap accepted by compare-oracle.
    #[arg(long, default_value_t = 1e-3, global = true)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Static bottleneck of one weighted graph, or distance of two diagrams.
    StaticBottleneck {
        /// One graph JSON, or two diagram JSON files.
        #[arg(required = true, num_args = 1..=2)]
        inputs: Vec<PathBuf>,
    },
    /// Runs the kinetic hourglass on a graph with flight-plan weights.
    Kinetic { graph: PathBuf },
    /// Exact integrated bottleneck distance between two embedded graphs.
    PhtDistance { first: PathBuf, second: PathBuf },
    /// Exact distance next to the sampled Riemann sum.
    CompareOracle { first: PathBuf, second: PathBuf },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FlavorArg {
    Heap,
    Hanger,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Infeasible(String),
    Geometry(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Infeasible(_) => 2,
            Failure::Geometry(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Infeasible(m) | Failure::Geometry(m) => m,
        }
    }
}

impl From<MatchingError> for Failure {
    fn from(e: MatchingError) -> Self {
        match e {
            MatchingError::NoPerfectMatching { .. } => Failure::Infeasible(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<HourglassError> for Failure {
    fn from(e: HourglassError) -> Self {
        match e {
            HourglassError::Matching(m) => m.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<PhtError> for Failure {
    fn from(e: PhtError) -> Self {
        match e {
            PhtError::Disconnected
            | PhtError::NotGeneric { .. }
            | PhtError::NotStarShaped { .. }
            | PhtError::Monodromy { .. } => Failure::Geometry(e.to_string()),
            PhtError::Matching(m) => m.into(),
            PhtError::Hourglass(h) => h.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Matching(m) => m.into(),
            IoError::Pht(p) => p.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn csv_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Failure> {
    serde_json::to_writer_pretty(create(path)?, value).map_err(|e| csv_failure(path, e))
}

fn flavor(cli: &Cli) -> Result<Flavor, Failure> {
    match (cli.flavor, cli.seed) {
        (FlavorArg::Heap, _) => Ok(Flavor::Heap),
        (FlavorArg::Hanger, Some(seed)) => Ok(Flavor::Hanger { seed }),
        (FlavorArg::Hanger, None) => Err(Failure::Input("--flavor hanger needs --seed".into())),
    }
}

fn read_embedded(path: &Path) -> Result<EmbeddedGraph<f64>, Failure> {
    Ok(io::read_json::<EmbeddedGraphJson>(path)?.to_graph()?)
}

fn cmd_static(inputs: &[PathBuf]) -> Result<(), Failure> {
    if let [x, y] = inputs {
        let x = io::read_json::<DiagramJson>(x)?.to_points();
        let y = io::read_json::<DiagramJson>(y)?.to_points();
        let g = diagram_reduction(&x, &y)?;
        let sol = static_bottleneck(&g)?;
        println!("bottleneck: {}", sol.value);
        let name = |side: &str, i: usize, n: usize| {
            if i < n {
                format!("{side}[{i}]")
            } else {
                "diagonal".to_string()
            }
        };
        println!("matching:");
        for e in sol.matching.edges() {
            let edge = g.edge(e);
            let (l, r) = (name("X", edge.left, x.len()), name("Y", edge.right, y.len()));
            if l != r {
                println!("  {l} -> {r} ({})", edge.weight);
            }
        }
        match sol.bottleneck_edge {
            Some(e) => {
                let edge = g.edge(e);
                println!(
                    "bottleneck edge: {} -> {}",
                    name("X", edge.left, x.len()),
                    name("Y", edge.right, y.len())
                );
            }
            None => println!("bottleneck edge: none"),
        }
    } else {
        let g = io::read_json::<WeightedGraphJson>(&inputs[0])?.to_graph()?;
        let sol = static_bottleneck(&g)?;
        println!("bottleneck: {}", sol.value);
        println!("matching:");
        for e in sol.matching.edges() {
            let edge = g.edge(e);
            println!("  {} -> {} ({})", edge.left, edge.right, edge.weight);
        }
        match sol.bottleneck_edge {
            Some(e) => println!("bottleneck edge: {e}"),
            None => println!("bottleneck edge: none"),
        }
    }
    Ok(())
}

fn cmd_kinetic(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let g = io::read_json::<KineticGraphJson>(path)?.to_graph()?;
    let end = match g.edges().first().map(|e| e.weight.domain()) {
        Some(Domain::Interval { end }) => end,
        Some(Domain::Circle) => std::f64::consts::TAU,
        None => 0.0,
    };
    let until = cli.until.unwrap_or(end);
    let mut hg = Hourglass::new(g, 0.0, flavor(cli)?)?;
    let traj = hg.run(until).clone();
    println!("integral: {}", traj.integral());
    println!("events: {}", hg.events().len());
    println!("final bottleneck: {}", hg.bottleneck_value());
    if let Some(p) = &cli.out_trace {
        hg.write_trace_csv(create(p)?).map_err(|e| csv_failure(p, e))?;
    }
    if let Some(p) = &cli.out_traj {
        traj.write_csv(create(p)?).map_err(|e| csv_failure(p, e))?;
    }
    if let Some(p) = &cli.out_pieces {
        write_json(p, &io::trajectory_json(&traj))?;
    }
    Ok(())
}

fn cmd_pht(cli: &Cli, first: &Path, second: &Path) -> Result<(), Failure> {
    let (k1, k2) = (read_embedded(first)?, read_embedded(second)?);
    let (a, b) = (compute_vines(&k1)?, compute_vines(&k2)?);
    let d = distance_between(&a, &b, flavor(cli)?)?;
    println!("distance: {}", d.value);
    println!("vines: {} {}", d.vines.0, d.vines.1);
    println!("closure gap: {:e}", d.closure_gap);
    if d.closure_gap > CLOSURE_TOL {
        log::warn!("closure gap {:e} above {:e}", d.closure_gap, CLOSURE_TOL);
    }
    if let Some(p) = &cli.out_traj {
        io::write_curve_csv(&d.pieces, 32, create(p)?).map_err(|e| csv_failure(p, e))?;
    }
    if let Some(p) = &cli.out_pieces {
        write_json(p, &io::pieces_json(&d.pieces))?;
    }
    if let Some(p) = &cli.out_vines {
        write_json(p, &[VineyardDump::new(&a), VineyardDump::new(&b)])?;
    }
    if let Some(p) = &cli.out_trace {
        let g = kinetic_hourglass::pht::pht_bipartite_graph(&a, &b)?;
        let mut hg = Hourglass::new(g, 0.0, flavor(cli)?)?;
        hg.run(std::f64::consts::TAU);
        hg.write_trace_csv(create(p)?).map_err(|e| csv_failure(p, e))?;
    }
    Ok(())
}

fn cmd_compare(cli: &Cli, first: &Path, second: &Path) -> Result<(), Failure> {
    let (k1, k2) = (read_embedded(first)?, read_embedded(second)?);
    let (a, b) = (compute_vines(&k1)?, compute_vines(&k2)?);
    let d = distance_between(&a, &b, flavor(cli)?)?;
    let sampled = sampled_oracle(&k1, &k2, cli.samples)?;
    let step = std::f64::consts::TAU / cli.samples as f64;
    let mut deviation = 0.0f64;
    for i in 0..cli.samples {
        let theta = (i as f64 + 0.5) * step;
        deviation = deviation.max((d.value_at(theta) - direction_distance(&k1, &k2, theta)?).abs());
    }
    let gap = (d.value - sampled).abs();
    let rel = gap / d.value.max(1e-12);
    println!("exact: {}", d.value);
    println!("sampled: {sampled}");
    println!("absolute gap: {gap:e}");
    println!("relative gap: {rel:e}");
    println!("max direction deviation: {deviation:e}");
    println!("within tolerance: {}", if rel <= cli.tol { "yes" } else { "no" });
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::StaticBottleneck { inputs } => cmd_static(inputs),
        Command::Kinetic { graph } => cmd_kinetic(cli, graph),
        Command::PhtDistance { first, second } => cmd_pht(cli, first, second),
        Command::CompareOracle { first, second } => cmd_compare(cli, first, second),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("HOURGLASS_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
