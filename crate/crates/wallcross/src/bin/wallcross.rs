//! Thin command-line front end over the `wallcross` library.
//!
//! Exit codes: 0 success, 1 input validation failure, 2 non-generic
//! linearization, 3 internal assertion.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use wallcross::error::Error;
use wallcross::gkz::build_fan;
use wallcross::kmut::factorization_plan;
use wallcross::render::{render_ascii, render_svg};
use wallcross::report::{
    parse_input, run_analyze, AnalysisRequest, Report, RequestParams, Task,
};

/// Environment variable holding the default corpus seed.
const SEED_ENV: &str = "WALLCROSS_SEED";

#[derive(Parser)]
#[command(name = "wallcross", version, about = "Exact wall-crossing analysis for rank-2 torus actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct IoArgs {
    /// Input weight-matrix file (JSON or TOML).
    #[arg(long)]
    input: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Verification {
    /// Twist equals the composite of two mutations.
    #[value(name = "311")]
    DoubleMutation,
    /// Twist factors through a splitting of its source.
    #[value(name = "412")]
    Factorization,
    /// Braid relation for adjacent mutations.
    Braid,
}

#[derive(Subcommand)]
enum Command {
    /// Run a set of analysis tasks and emit one report.
    Analyze {
        #[command(flatten)]
        io: IoArgs,
        /// Comma-separated subset of fan,strata,walls,horn,expected,kmut.
        #[arg(long, value_delimiter = ',')]
        tasks: Option<Vec<String>>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        corpus: Option<usize>,
    },
    /// Ray groups, walls, and chambers of the GKZ fan.
    Fan {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Kirwan-Ness stratification for a chamber or near a wall.
    Strata {
        #[command(flatten)]
        io: IoArgs,
        /// Chamber index (0-based, counterclockwise from the x-axis).
        #[arg(long, conflicts_with_all = ["near_wall", "character"])]
        chamber: Option<usize>,
        /// Analyze both sides of this wall index.
        #[arg(long, conflicts_with = "character")]
        near_wall: Option<usize>,
        /// Explicit character "a,b".
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        character: Option<(i64, i64)>,
    },
    /// Balanced-crossing and discriminant data for one wall.
    Wall {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        index: usize,
    },
    /// Factored discriminant pullback of a monomial.
    Horn {
        #[command(flatten)]
        io: IoArgs,
        /// Cocharacter exponent "a,b".
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        lambda: (i64, i64),
    },
    /// Expected autoequivalence counts for a wall.
    Expected {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        wall: usize,
    },
    /// Seeded verification suites for the K-theory calculus.
    Kmut {
        /// Which identity to verify.
        #[arg(long, value_enum)]
        verify: Verification,
        #[arg(long, default_value_t = 200)]
        corpus: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also emit a symbolic factorization plan with this many blocks.
        #[arg(long)]
        blocks: Option<usize>,
        /// Window width for the plan.
        #[arg(long, default_value_t = 1)]
        eta: i64,
        /// Window position for the plan.
        #[arg(long, default_value_t = 0)]
        weight: i64,
    },
    /// Draw the fan.
    Render {
        /// Input weight-matrix file (JSON or TOML).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
        format: RenderFormat,
    },
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected two comma-separated integers".into());
    }
    let x = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let y = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok((x, y))
}

fn env_seed() -> Option<u64> {
    std::env::var(SEED_ENV).ok().and_then(|s| s.parse().ok())
}

fn main() -> ExitCode {
    // usage errors are input failures (exit 1); help and version exit 0
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Builds the complete output first, then writes it in one piece.
fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| Error::Internal(format!("stdout: {e}")))
        }
    }
}

fn load(io: &IoArgs) -> Result<wallcross::WeightMatrix, Error> {
    let text = std::fs::read_to_string(&io.input)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", io.input.display())))?;
    parse_input(&text)
}

fn report_text(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => textify(report),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Analyze { io, tasks, seed, corpus } => {
            let weights = load(&io)?;
            let tasks: BTreeSet<Task> = match tasks {
                Some(names) => names
                    .iter()
                    .map(|n| Task::parse(n.trim()))
                    .collect::<Result<_, _>>()?,
                None => Task::ALL.into_iter().collect(),
            };
            let params = RequestParams {
                seed: seed.or_else(env_seed),
                corpus,
                ..RequestParams::default()
            };
            let report = run_analyze(&AnalysisRequest { weights, tasks, params })?;
            emit(&io.output, &report_text(&report, io.format))
        }
        Command::Fan { io } => {
            let weights = load(&io)?;
            let report = run_analyze(&AnalysisRequest {
                weights,
                tasks: [Task::Fan].into_iter().collect(),
                params: RequestParams::default(),
            })?;
            emit(&io.output, &report_text(&report, io.format))
        }
        Command::Strata { io, chamber, near_wall, character } => {
            let weights = load(&io)?;
            if let Some(wall) = near_wall {
                let report = run_analyze(&AnalysisRequest {
                    weights,
                    tasks: [Task::Walls].into_iter().collect(),
                    params: RequestParams { wall: Some(wall), ..RequestParams::default() },
                })?;
                return emit(&io.output, &report_text(&report, io.format));
            }
            let params = RequestParams { chamber, character, ..RequestParams::default() };
            let report = run_analyze(&AnalysisRequest {
                weights,
                tasks: [Task::Strata].into_iter().collect(),
                params,
            })?;
            emit(&io.output, &report_text(&report, io.format))
        }
        Command::Wall { io, index } => {
            let weights = load(&io)?;
            let report = run_analyze(&AnalysisRequest {
                weights,
                tasks: [Task::Walls, Task::Expected].into_iter().collect(),
                params: RequestParams { wall: Some(index), ..RequestParams::default() },
            })?;
            emit(&io.output, &report_text(&report, io.format))
        }
        Command::Horn { io, lambda } => {
            let weights = load(&io)?;
            let report = run_analyze(&AnalysisRequest {
                weights,
                tasks: [Task::Horn].into_iter().collect(),
                params: RequestParams { lambda: Some(lambda), ..RequestParams::default() },
            })?;
            emit(&io.output, &report_text(&report, io.format))
        }
        Command::Expected { io, wall } => {
            let weights = load(&io)?;
            let report = run_analyze(&AnalysisRequest {
                weights,
                tasks: [Task::Expected].into_iter().collect(),
                params: RequestParams { wall: Some(wall), ..RequestParams::default() },
            })?;
            emit(&io.output, &report_text(&report, io.format))
        }
        Command::Kmut { verify, corpus, seed, output, blocks, eta, weight } => {
            let seed = seed.or_else(env_seed).unwrap_or(wallcross::corpus::DEFAULT_SEED);
            let suite = match verify {
                Verification::DoubleMutation => {
                    wallcross::corpus::run_double_mutation_suite(seed, corpus)
                }
                Verification::Factorization => {
                    wallcross::corpus::run_factorization_suite(seed, corpus)
                }
                Verification::Braid => wallcross::corpus::run_mutation_suite(seed, corpus),
            };
            let mut doc = serde_json::json!({
                "schema": wallcross::report::SCHEMA_VERSION,
                "suite": suite,
            });
            if let Some(b) = blocks {
                let plan = factorization_plan(b, eta, weight)?;
                doc["plan"] = serde_json::to_value(&plan)
                    .map_err(|e| Error::Internal(format!("plan serialization: {e}")))?;
            }
            let mut text = serde_json::to_string_pretty(&doc)
                .map_err(|e| Error::Internal(format!("serialization: {e}")))?;
            text.push('\n');
            emit(&output, &text)?;
            if suite.passed {
                Ok(())
            } else {
                Err(Error::Internal(format!("suite '{}' failed", suite.name)))
            }
        }
        Command::Render { input, output, format } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", input.display())))?;
            let weights = parse_input(&text)?;
            let fan = build_fan(&weights)?;
            let rendered = match format {
                RenderFormat::Ascii => render_ascii(&fan),
                RenderFormat::Svg => render_svg(&fan),
            };
            emit(&output, &rendered)
        }
    }
}

/// Compact human-readable rendering of a report.
fn textify(report: &Report) -> String {
    let mut out = String::new();
    let echo = &report.input;
    out.push_str(&format!(
        "weights ({} columns): {:?} / {:?}\n",
        echo.weights[0].len(),
        echo.weights[0],
        echo.weights[1]
    ));
    if let Some(fan) = &report.fan {
        out.push_str("rays:\n");
        for g in &fan.ray_groups {
            out.push_str(&format!(
                "  chi=({},{}) multipliers={:?} total={}\n",
                g.chi[0], g.chi[1], g.multipliers, g.total
            ));
        }
        out.push_str("walls:\n");
        for w in &fan.walls {
            out.push_str(&format!("  W{}: ray=({},{})\n", w.index + 1, w.ray[0], w.ray[1]));
        }
        out.push_str("chambers:\n");
        for c in &fan.chambers {
            out.push_str(&format!(
                "  {}: cone(({},{}),({},{}))\n",
                c.label,
                c.generators[0][0],
                c.generators[0][1],
                c.generators[1][0],
                c.generators[1][1]
            ));
        }
    }
    if let Some(strata) = &report.strata {
        for s in strata {
            out.push_str(&format!(
                "stratification at chi=({},{}) (chamber {}):\n",
                s.character[0],
                s.character[1],
                s.chamber
            ));
            out.push_str(&format!(
                "  lambda_max=({},{})  S_max={}\n",
                s.lambda_max[0], s.lambda_max[1], s.s_max.notation
            ));
            for st in &s.strata {
                out.push_str(&format!(
                    "  lambda=({},{})  Z={}  S={}  eta={}\n",
                    st.lambda[0], st.lambda[1], st.z.notation, st.s.notation, st.eta_plus
                ));
            }
        }
    }
    if let Some(walls) = &report.walls {
        for w in walls {
            out.push_str(&format!(
                "wall W{} ray=({},{}): balanced={} eta={} shared_Z={} residual_weights={:?}\n",
                w.index + 1,
                w.ray[0],
                w.ray[1],
                w.balanced,
                w.eta,
                w.shared_z.notation,
                w.residual_weights
            ));
            out.push_str(&format!(
                "  intersection: applicable={} total={} d={}\n",
                w.intersection.applicable, w.intersection.total, w.intersection.d_formula
            ));
        }
    }
    if let Some(horn) = &report.horn {
        for h in horn {
            out.push_str(&format!(
                "pullback at lambda=({},{}): {}\n",
                h.lambda[0], h.lambda[1], h.normalized
            ));
        }
    }
    if let Some(expected) = &report.expected {
        for e in expected {
            out.push_str(&format!(
                "expected W{}: discriminant={} collection={:?} agree={:?} {}\n",
                e.wall + 1,
                e.discriminant_length,
                e.collection_length,
                e.agree,
                e.note
            ));
        }
    }
    if let Some(k) = &report.kmut {
        for s in &k.suites {
            out.push_str(&format!(
                "suite {}: instances={} checks={} passed={}\n",
                s.name, s.instances, s.checks, s.passed
            ));
        }
    }
    for w in &report.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}
