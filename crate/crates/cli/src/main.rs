mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use edgewalk::asymptotics::{default_grid, grid, run_experiment};
use edgewalk::lattice::InequalitySystem;
use edgewalk::{
    birth_terms, game_outcome, make_h_junction, parse_edge_list, simulate_with_basis, z0_labels, Basis, Engine, Error,
    ExperimentKind, GameOutcome, HTimes, MetricTree, TimeSpec, DEFAULT_EPSILON,
};
use serde::Serialize;

use report::*;

const REFERENCE_TIMES: &str = "1,sqrt(2),sqrt(3),sqrt(5),sqrt(7)";

#[derive(Parser)]
#[command(name = "edgewalk", version, about = "Point-splitting dynamics on metric trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Relative guard for deciding that two real times or bounds coincide.
    #[arg(long, env = "EDGEWALK_EPSILON", global = true)]
    epsilon: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the event simulation and report births per vertex.
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        horizon: f64,
    },
    /// Print the lattice-point expansion of births at the start vertex.
    Formula {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        horizons: HorizonArgs,
    },
    /// Win/loss labels of the descend-the-tree game.
    Game {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Count non-negative (or positive, with --strict) integer solutions of
    /// `sum c_i n_i <= bound`.
    Count {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        coeffs: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        bound: f64,
        #[arg(long)]
        strict: bool,
    },
    /// Fit a growth coefficient on the H-junction and compare with its
    /// closed form.
    Experiment {
        #[arg(value_enum)]
        kind: Kind,
        /// Five edge times.
        #[arg(long, default_value = REFERENCE_TIMES)]
        times: String,
        /// Horizons as start:step:stop; defaults depend on the engine.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, value_enum, default_value_t = EngineArg::Formula)]
        engine: EngineArg,
        /// Relative tolerance for the verdict; defaults depend on the kind.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file, or `h-junction` for the built-in five-edge tree.
    #[arg(long)]
    graph: String,
    /// Edge times of the built-in H-junction.
    #[arg(long)]
    times: Option<String>,
    /// Start (root) vertex label.
    #[arg(long, default_value = "A")]
    start: String,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct HorizonArgs {
    #[arg(long)]
    horizon: Option<f64>,
    /// Horizons as start:step:stop.
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Razn,
    Symraz,
    Leading,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Formula,
    Simulator,
}

enum Failure {
    Invalid(String),
    Collision(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BasisCollision { .. } => Failure::Collision(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

fn parse_times(text: &str) -> Outcome<Vec<TimeSpec>> {
    text.split(',').map(|s| s.trim().parse::<TimeSpec>().map_err(Failure::from)).collect()
}

fn parse_grid(text: &str) -> Outcome<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, step, stop] = parts.as_slice() else {
        return Err(Failure::Invalid(format!("grid `{text}` is not start:step:stop")));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Failure::Invalid(format!("bad number `{s}` in grid")));
    Ok(grid(num(start)?, num(step)?, num(stop)?)?)
}

fn load_graph(args: &GraphArgs) -> Outcome<MetricTree> {
    if args.graph == "h-junction" {
        let specs = parse_times(args.times.as_deref().unwrap_or(REFERENCE_TIMES))?;
        let five: [TimeSpec; 5] = specs
            .try_into()
            .map_err(|v: Vec<TimeSpec>| Failure::Invalid(format!("h-junction needs 5 times, got {}", v.len())))?;
        return Ok(make_h_junction(five)?);
    }
    if args.times.is_some() {
        return Err(Failure::Invalid("--times applies only to --graph h-junction".into()));
    }
    let path = PathBuf::from(&args.graph);
    let text =
        std::fs::read_to_string(&path).map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_edge_list(&text)?)
}

fn emit_json<T: Serialize>(out: &mut impl Write, command: &'static str, body: T) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, &Envelope { schema: SCHEMA, command, body })
        .map_err(|e| Failure::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

fn simulate_cmd(graph: &GraphArgs, horizon: f64, eps: f64, format: Format, out: &mut impl Write) -> Outcome {
    let tree = load_graph(graph)?;
    let start = tree.vertex(&graph.start)?;
    let basis = Basis::from_tree(&tree).with_epsilon(eps)?;
    let r = simulate_with_basis(&tree, start, horizon, &basis)?;
    let vertices: Vec<VertexBirths> = (0..tree.vertex_count())
        .map(|v| VertexBirths {
            vertex: tree.label(v).to_string(),
            births: r.births[v],
            returns: r.return_times[v].len(),
        })
        .collect();
    match format {
        Format::Json => emit_json(
            out,
            "simulate",
            SimulateReport {
                start: graph.start.clone(),
                horizon,
                initial_departures: r.initial_departures,
                total_points: r.total_points,
                event_count: r.event_count,
                vertices,
            },
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in &vertices {
                w.serialize(row)?;
            }
            w.flush()?;
            eprintln!("total_points={} events={}", r.total_points, r.event_count);
            Ok(())
        }
    }
}

fn formula_cmd(graph: &GraphArgs, horizons: &HorizonArgs, eps: f64, format: Format, out: &mut impl Write) -> Outcome {
    let tree = load_graph(graph)?;
    let root = tree.vertex(&graph.start)?;
    let basis = Basis::from_tree(&tree).with_epsilon(eps)?;
    let terms = birth_terms(&tree, root)?;
    let grid = match (&horizons.horizon, &horizons.grid) {
        (Some(h), _) => vec![*h],
        (None, Some(g)) => parse_grid(g)?,
        (None, None) => unreachable!("clap requires one of --horizon and --grid"),
    };
    let counts = grid
        .iter()
        .map(|&horizon| Ok(FormulaCount { horizon, births: terms.evaluate(&basis, horizon)? }))
        .collect::<Outcome<Vec<_>>>()?;
    match format {
        Format::Json => emit_json(
            out,
            "formula",
            FormulaReport {
                root: graph.start.clone(),
                terms: terms
                    .terms
                    .iter()
                    .map(|t| TermRow { edges: t.subset.to_string(), coefficient: t.coefficient })
                    .collect(),
                leading_coefficient: real(terms.leading_coefficient(&basis)),
                counts,
            },
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in &counts {
                w.serialize(row)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn game_cmd(graph: &GraphArgs, format: Format, out: &mut impl Write) -> Outcome {
    let tree = load_graph(graph)?;
    let root = tree.vertex(&graph.start)?;
    let labels: Vec<GameLabel> = z0_labels(&tree, root)?
        .into_iter()
        .enumerate()
        .map(|(v, z0)| GameLabel { vertex: tree.label(v).to_string(), z0 })
        .collect();
    let outcome = match game_outcome(&tree, root)? {
        GameOutcome::FirstPlayerWins => "first-player-wins",
        GameOutcome::SecondPlayerWins => "second-player-wins",
    };
    match format {
        Format::Json => emit_json(out, "game", GameReport { root: graph.start.clone(), labels, outcome }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in &labels {
                w.serialize(row)?;
            }
            w.flush()?;
            eprintln!("outcome={outcome}");
            Ok(())
        }
    }
}

fn count_cmd(coeffs: &[f64], bound: f64, strict: bool, eps: f64, format: Format, out: &mut impl Write) -> Outcome {
    let system = if strict {
        InequalitySystem::strict(coeffs.to_vec(), bound)
    } else {
        InequalitySystem::weak(coeffs.to_vec(), bound)
    };
    let solutions = system.count(eps)?;
    match format {
        Format::Json => emit_json(
            out,
            "count",
            CountReport {
                coefficients: coeffs.iter().map(|&c| real(c)).collect(),
                bound: real(bound),
                strict,
                solutions,
            },
        ),
        Format::Csv => {
            writeln!(out, "solutions\n{solutions}")?;
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn experiment_cmd(
    kind: Kind,
    times: &str,
    grid_spec: Option<&str>,
    engine: EngineArg,
    tolerance: Option<f64>,
    eps: f64,
    format: Format,
    out: &mut impl Write,
) -> Outcome {
    let specs = parse_times(times)?;
    if specs.len() != 5 {
        return Err(Failure::Invalid(format!("experiments need 5 times, got {}", specs.len())));
    }
    let values: Vec<f64> = specs.iter().map(TimeSpec::value).collect();
    let t = HTimes::new(values.try_into().expect("length checked"))?;
    let (kind, kind_name) = match kind {
        Kind::Razn => (ExperimentKind::Razn, "razn"),
        Kind::Symraz => (ExperimentKind::Symraz, "symraz"),
        Kind::Leading => (ExperimentKind::Leading, "leading"),
    };
    let (engine, engine_name) = match engine {
        EngineArg::Formula => (Engine::Formula, "formula"),
        EngineArg::Simulator => (Engine::Simulator, "simulator"),
    };
    let grid = match grid_spec {
        Some(g) => parse_grid(g)?,
        None => default_grid(engine),
    };
    let tolerance = tolerance.unwrap_or(kind.default_tolerance());
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Failure::Invalid(format!("tolerance must be positive, got {tolerance}")));
    }
    let o = run_experiment(kind, &t, grid, engine, tolerance, eps)?;
    let verdict = if o.pass { "PASS" } else { "FAIL" };
    let series: Vec<SeriesPoint> =
        o.series.grid.iter().zip(&o.series.values).map(|(&horizon, &value)| SeriesPoint { horizon, value }).collect();
    match format {
        Format::Json => emit_json(
            out,
            "experiment",
            ExperimentReport {
                kind: kind_name,
                engine: engine_name,
                times: specs.iter().map(ToString::to_string).collect(),
                series,
                fit: FitReport {
                    degree: o.fit.degree,
                    coefficients: o.fit.coefficients.iter().map(|&c| real(c)).collect(),
                    residual_rms: real(o.fit.residual_rms),
                    grid: o.fit.grid.clone(),
                },
                checked_power: kind.checked_power(),
                predicted: real(o.predicted),
                fitted: real(o.fitted),
                relative_error: real(o.relative_error),
                tolerance: real(o.tolerance),
                cubic_bound: o.cubic_bound.map(real),
                verdict,
            },
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in &series {
                w.serialize(row)?;
            }
            w.flush()?;
            eprintln!(
                "{kind_name}: fitted T^{} coefficient {} vs predicted {} (relative error {}, tolerance {}): {verdict}",
                kind.checked_power(),
                real(o.fitted),
                real(o.predicted),
                real(o.relative_error),
                real(o.tolerance),
            );
            Ok(())
        }
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> Outcome {
    let eps = cli.epsilon.unwrap_or(DEFAULT_EPSILON);
    if !(eps > 0.0 && eps < 1e-3) {
        return Err(Failure::Invalid(format!("epsilon must lie in (0, 1e-3), got {eps}")));
    }
    match &cli.command {
        Command::Simulate { graph, horizon } => simulate_cmd(graph, *horizon, eps, cli.format, out),
        Command::Formula { graph, horizons } => formula_cmd(graph, horizons, eps, cli.format, out),
        Command::Game { graph } => game_cmd(graph, cli.format, out),
        Command::Count { coeffs, bound, strict } => count_cmd(coeffs, *bound, *strict, eps, cli.format, out),
        Command::Experiment { kind, times, grid, engine, tolerance } => {
            experiment_cmd(*kind, times, grid.as_deref(), *engine, *tolerance, eps, cli.format, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Collision(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
