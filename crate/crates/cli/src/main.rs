//! `smdim` command-line front end.
//!
//! Exit codes: 0 success, 1 resource budget exceeded, 2 usage or input
//! error, 3 a verification run found a counterexample.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use smdim::adversaries::{find_sqrt_witness, ShatteringAdversary};
use smdim::dimensions::{
    ldim_k, msdim, seqfat, DimensionEngine, GammaValue, SetValuedProblem, DEFAULT_MEMO_CAP,
};
use smdim::instances::{make_builtin, parse_instance, parse_stream_for};
use smdim::learners::{
    AgnosticLearner, Ftl, Learner, Mrsoa, MrsoaCore, RandomMixture, Uniform, DEFAULT_POOL_BUDGET,
};
use smdim::rational::{self, Rational};
use smdim::simulation::{
    exact_expectation_over_signs, expected_abs_sign_sum, run_game, run_stream, Mode, RegretReport,
    ReportMode, Source,
};
use smdim::verify::{self, Proposition};
use smdim::{Error, Execution, Task};

#[derive(Parser)]
#[command(name = "smdim", version, about = "Sequential Minimax dimension and online learning games")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Instance file (JSON).
    #[arg(long, global = true, conflicts_with = "builtin")]
    instance: Option<PathBuf>,
    /// Built-in family, e.g. multiclass:binary-constants or list:2.
    #[arg(long, global = true)]
    builtin: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a dimension of the hypothesis class.
    Dim {
        #[arg(long, value_enum, default_value_t = Dimension::Smdim)]
        dimension: Dimension,
        /// Scales as rational literals, comma separated.
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<String>,
        /// Branching parameter for ldimk (k+1 labels per node).
        #[arg(long)]
        k: Option<usize>,
        /// Stop the SMdim search at this depth.
        #[arg(long)]
        depth_cap: Option<usize>,
    },
    /// Run a learner on a stream file.
    Learn {
        #[arg(long, value_enum)]
        learner: LearnerKind,
        #[arg(long)]
        stream: PathBuf,
        #[arg(long)]
        gamma: Option<String>,
        /// Threshold grid step for the agnostic learner.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also sample predictions this many times.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Play a learner against the shattering adversary.
    Adversary {
        #[arg(long, value_enum)]
        learner: LearnerKind,
        #[arg(long)]
        gamma: String,
        /// Rounds; defaults to the dimension, the adversary's depth.
        #[arg(short = 'T')]
        rounds: Option<usize>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a dimension equivalence on seeded random instances.
    Verify {
        #[arg(long)]
        prop: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Run cases on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Exact expected regret against random signs at a two-point witness.
    SqrtLower {
        #[arg(short = 'T')]
        rounds: usize,
        #[arg(long, value_enum, default_value_t = LearnerKind::Agnostic)]
        learner: LearnerKind,
        #[arg(long, default_value = "1/4")]
        gamma: String,
        #[arg(long)]
        alpha: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dimension {
    Smdim,
    Ldim,
    Ldimk,
    Seqfat,
    Msdim,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LearnerKind {
    Mrsoa,
    Agnostic,
    Ftl,
    Uniform,
    Random,
}

enum Failure {
    Usage(String),
    Resource(String),
    Counterexample(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e.root() {
            Error::MemoCap { .. } | Error::PoolBudget { .. } | Error::EnumerationCap { .. } => {
                Failure::Resource(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn memo_cap() -> Outcome<usize> {
    match std::env::var("SMDIM_MEMO_CAP") {
        Ok(v) => v
            .parse()
            .map_err(|_| Failure::Usage(format!("SMDIM_MEMO_CAP={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_MEMO_CAP),
    }
}

fn load_task(global: &Global) -> Outcome<Task> {
    match (&global.instance, &global.builtin) {
        (Some(path), None) => Ok(parse_instance(&read(path)?)?),
        (None, Some(spec)) => Ok(make_builtin(spec)?),
        _ => Err(Failure::Usage("exactly one of --instance or --builtin is required".into())),
    }
}

fn read(path: &Path) -> Outcome<Vec<u8>> {
    fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn gamma(text: &str) -> Outcome<GammaValue> {
    Ok(GammaValue::parse(text)?)
}

fn rational_opt(text: &Option<String>) -> Outcome<Option<Rational>> {
    text.as_deref().map(rational::parse).transpose().map_err(Failure::from)
}

fn engine(task: &Task, g: GammaValue) -> Outcome<DimensionEngine> {
    Ok(DimensionEngine::new(task.clone(), g).with_memo_cap(memo_cap()?))
}

fn core(task: &Task, g: GammaValue) -> Outcome<Arc<MrsoaCore>> {
    Ok(MrsoaCore::with_engine(engine(task, g)?)?)
}

fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
        + "\r\n"
}

fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

fn dim(
    task: &Task,
    format: Format,
    dimension: Dimension,
    gammas: &[String],
    k: Option<usize>,
    depth_cap: Option<usize>,
) -> Outcome<String> {
    let full = task.full_space();
    let name = match dimension {
        Dimension::Smdim => "smdim",
        Dimension::Ldim => "ldim",
        Dimension::Ldimk => "ldimk",
        Dimension::Seqfat => "seqfat",
        Dimension::Msdim => "msdim",
    };
    let scale_free = matches!(dimension, Dimension::Ldim | Dimension::Ldimk);
    let mut rows: Vec<(Option<String>, usize, Option<Value>)> = Vec::new();
    if scale_free {
        let k = match dimension {
            Dimension::Ldimk => k.ok_or_else(|| Failure::Usage("ldimk needs --k".into()))?,
            _ => 1,
        };
        rows.push((None, ldim_k(task, &full, k)?, None));
    } else {
        if gammas.is_empty() {
            return Err(Failure::Usage(format!("{name} needs --gamma")));
        }
        for text in gammas {
            let g = gamma(text)?;
            let label = Some(rational::format(g.value()));
            match dimension {
                Dimension::Smdim => {
                    let e = engine(task, g)?.with_depth_cap(depth_cap);
                    let d = e.dimension(&full)?;
                    let cert = if format == Format::Json {
                        let doc = e.certificate(&full)?.to_json();
                        Some(serde_json::from_str(&doc).expect("certificate JSON parses"))
                    } else {
                        None
                    };
                    rows.push((label, d, cert));
                }
                Dimension::Seqfat => rows.push((label, seqfat(task, &full, g.value())?, None)),
                Dimension::Msdim => {
                    let svp = SetValuedProblem::from_problem(&task.problem)?;
                    rows.push((label, msdim(&svp, &task.class, &full, &g)?, None));
                }
                Dimension::Ldim | Dimension::Ldimk => unreachable!("handled above"),
            }
        }
    }
    Ok(match format {
        Format::Text if rows.len() == 1 => format!("{}\n", rows[0].1),
        Format::Text => rows
            .iter()
            .map(|(g, d, _)| format!("{}\t{d}\n", g.clone().unwrap_or_default()))
            .collect(),
        Format::Csv => {
            let mut s = csv_line(&["gamma".into(), name.into()]);
            for (g, d, _) in &rows {
                s += &csv_line(&[g.clone().unwrap_or_default(), d.to_string()]);
            }
            s
        }
        Format::Json => {
            let results: Vec<Value> = rows
                .into_iter()
                .map(|(g, d, cert)| {
                    let mut v = json!({ "gamma": g, "value": d });
                    if let Some(c) = cert {
                        v["certificate"] = c;
                    }
                    v
                })
                .collect();
            let mut doc = json!({ "dimension": name, "results": results });
            if let Some(k) = k.filter(|_| dimension == Dimension::Ldimk) {
                doc["k"] = json!(k);
            }
            render_json(&doc)
        }
    })
}

fn make_learner(
    task: &Task,
    kind: LearnerKind,
    g: Option<&str>,
    horizon: usize,
    alpha: Option<Rational>,
    seed: u64,
) -> Outcome<Box<dyn Learner>> {
    let need = |g: Option<&str>| -> Outcome<GammaValue> {
        gamma(g.ok_or_else(|| Failure::Usage("this learner needs --gamma".into()))?)
    };
    Ok(match kind {
        LearnerKind::Mrsoa => Box::new(Mrsoa::new(core(task, need(g)?)?)),
        LearnerKind::Agnostic => Box::new(AgnosticLearner::new(
            core(task, need(g)?)?,
            horizon,
            alpha,
            DEFAULT_POOL_BUDGET,
        )?),
        LearnerKind::Ftl => Box::new(Ftl::new(task.clone())),
        LearnerKind::Uniform => Box::new(Uniform::new(task)),
        LearnerKind::Random => Box::new(RandomMixture::new(task, seed)),
    })
}

fn report(r: &RegretReport, format: Format) -> Outcome<String> {
    Ok(match format {
        Format::Csv => r.to_csv()?,
        Format::Json => r.to_json(),
        Format::Text => {
            let mut s = String::new();
            for (t, round) in r.rounds.iter().enumerate() {
                s += &format!(
                    "round {}: x={} y={} mixture=({}) expected_loss={}\n",
                    t + 1,
                    round.instance,
                    round.label,
                    round.mixture,
                    rational::format(&round.expected_loss)
                );
            }
            s += &format!("cumulative loss {}\n", rational::format(&r.cumulative));
            s += &format!(
                "best hypothesis {} with loss {}\n",
                r.hindsight,
                rational::format(&r.hindsight_loss)
            );
            s += &format!("regret {}\n", rational::format(&r.regret));
            if let ReportMode::MonteCarlo { trials, mean, std_err, .. } = &r.mode {
                s += &format!("sampled regret {mean:.6} +- {std_err:.6} over {trials} trials\n");
            }
            s
        }
    })
}

fn verify_cmd(prop: &str, seed: u64, cases: usize, sequential: bool, format: Format) -> Outcome<(String, bool)> {
    let prop = Proposition::parse(prop)?;
    let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
    let r = verify::verify(prop, seed, cases, exec)?;
    let text = match format {
        Format::Json => render_json(&json!({
            "prop": prop.label(),
            "seed": seed,
            "cases": r.cases,
            "checks": r.checks,
            "counterexamples": r.counterexamples,
            "notes": r.notes,
        })),
        Format::Csv => {
            let mut s = csv_line(&["prop".into(), "seed".into(), "cases".into(), "checks".into(), "counterexamples".into()]);
            s += &csv_line(&[
                prop.label().into(),
                seed.to_string(),
                r.cases.to_string(),
                r.checks.to_string(),
                r.counterexamples.len().to_string(),
            ]);
            s
        }
        Format::Text => {
            let mut s = format!(
                "{}: {} cases, {} checks, {} counterexamples\n",
                prop.label(),
                r.cases,
                r.checks,
                r.counterexamples.len()
            );
            for c in &r.counterexamples {
                s += &format!("counterexample {c}\n");
            }
            for n in &r.notes {
                s += &format!("note {n}\n");
            }
            s
        }
    };
    Ok((text, r.passed()))
}

fn sqrt_lower(task: &Task, rounds: usize, kind: LearnerKind, g: &str, alpha: Option<Rational>, format: Format) -> Outcome<String> {
    let witness = find_sqrt_witness(task)
        .ok_or_else(|| Failure::Usage("no two-point witness exists for this instance".into()))?;
    let needs_core = matches!(kind, LearnerKind::Mrsoa | LearnerKind::Agnostic);
    let shared = if needs_core { Some(core(task, gamma(g)?)?) } else { None };
    let factory = || -> smdim::Result<Box<dyn Learner + Send>> {
        Ok(match kind {
            LearnerKind::Mrsoa => Box::new(Mrsoa::new(shared.clone().expect("core built"))),
            LearnerKind::Agnostic => Box::new(AgnosticLearner::new(
                shared.clone().expect("core built"),
                rounds,
                alpha.clone(),
                DEFAULT_POOL_BUDGET,
            )?),
            LearnerKind::Ftl => Box::new(Ftl::new(task.clone())),
            LearnerKind::Uniform => Box::new(Uniform::new(task)),
            LearnerKind::Random => Box::new(RandomMixture::new(task, 0)),
        })
    };
    let value = exact_expectation_over_signs(task, &witness, factory, rounds, Execution::Parallel)?;
    let half_sum = &witness.eta * expected_abs_sign_sum(rounds) / rational::int(2);
    let sqrt_bound = rational::to_f64(&witness.eta) * (rounds as f64 / 8.0).sqrt();
    Ok(match format {
        Format::Json => render_json(&json!({
            "witness": {
                "instance": witness.instance,
                "minus": witness.minus,
                "plus": witness.plus,
                "y_minus": witness.y_minus,
                "y_plus": witness.y_plus,
                "eta": rational::format(&witness.eta),
            },
            "T": rounds,
            "expected_regret": rational::format(&value),
            "half_abs_sign_sum": rational::format(&half_sum),
            "sqrt_bound": sqrt_bound,
        })),
        Format::Csv => {
            csv_line(&["T".into(), "eta".into(), "expected_regret".into(), "half_abs_sign_sum".into(), "sqrt_bound".into()])
                + &csv_line(&[
                    rounds.to_string(),
                    rational::format(&witness.eta),
                    rational::format(&value),
                    rational::format(&half_sum),
                    format!("{sqrt_bound}"),
                ])
        }
        Format::Text => format!(
            "witness x={} h-={} h+={} y-={} y+={} eta={}\nexpected regret {} (~{:.6})\neta/2 * E|sum| = {}\neta*sqrt(T/8) = {sqrt_bound:.6}\n",
            witness.instance,
            witness.minus,
            witness.plus,
            witness.y_minus,
            witness.y_plus,
            rational::format(&witness.eta),
            rational::format(&value),
            rational::to_f64(&value),
            rational::format(&half_sum),
        ),
    })
}

fn run(cli: Cli) -> Outcome<String> {
    let g = &cli.global;
    match cli.command {
        Command::Verify { prop, seed, cases, sequential } => {
            let (text, passed) = verify_cmd(&prop, seed, cases, sequential, g.format)?;
            if passed {
                Ok(text)
            } else {
                Err(Failure::Counterexample(text))
            }
        }
        Command::Dim { dimension, gamma, k, depth_cap } => {
            dim(&load_task(g)?, g.format, dimension, &gamma, k, depth_cap)
        }
        Command::Learn { learner, stream, gamma, alpha, seed, trials } => {
            let task = load_task(g)?;
            let stream = parse_stream_for(&read(&stream)?, &task)?;
            let mut l = make_learner(&task, learner, gamma.as_deref(), stream.len(), rational_opt(&alpha)?, seed)?;
            let mode = match trials {
                Some(trials) => Mode::MonteCarlo { seed, trials },
                None => Mode::Exact,
            };
            report(&run_stream(&task, &mut l, &stream, mode)?, g.format)
        }
        Command::Adversary { learner, gamma: gtext, rounds, alpha, seed } => {
            let task = load_task(g)?;
            let e = engine(&task, gamma(&gtext)?)?;
            let full = task.full_space();
            let d = e.dimension(&full)?;
            let rounds = rounds.unwrap_or(d);
            if rounds > d {
                eprintln!("warning: the adversary is exhausted after {d} rounds; playing {d}");
            }
            let rounds = rounds.min(d);
            let cert = Arc::new(e.certificate(&full)?);
            let mut l = make_learner(&task, learner, Some(&gtext), rounds, rational_opt(&alpha)?, seed)?;
            let mut adversary = ShatteringAdversary::new(task.clone(), cert);
            report(
                &run_game(&task, &mut l, Source::Adversary(&mut adversary), rounds, Mode::Exact)?,
                g.format,
            )
        }
        Command::SqrtLower { rounds, learner, gamma, alpha } => {
            let task = load_task(g)?;
            sqrt_lower(&task, rounds, learner, &gamma, rational_opt(&alpha)?, g.format)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.global.out.clone();
    let (text, code) = match run(cli) {
        Ok(text) => (text, 0),
        Err(Failure::Counterexample(text)) => (text, 3),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    if let Err(msg) = emit(&out, &text) {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
