//! `sfl`: instance generators, dimension queries, games and verification suites.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sfl::adversaries::AdversarySpec;
use sfl::dims::{helly_number, Dimension, DimsEngine};
use sfl::harness::suites::{run_suite, SuiteOptions, SUITES};
use sfl::harness::{monte_carlo, run_game, write_csv, GameConfig, MinimaxLimits, Mode};
use sfl::learners::{AgnosticMode, Inconsistency, LearnerSpec};
use sfl::model::{
    example3, gen_cosingleton_instance, gen_hamming_instance, gen_interval_instance,
    gen_ranking_instance, gen_singleton_instance, load_instance, load_stream, HypothesisSpec,
};
use sfl::scalar::{format_rational, parse_rational};
use sfl::{ProblemInstance, Rational};

#[derive(Parser, Debug)]
#[command(
    name = "sfl",
    version,
    about = "Online learning with set-valued feedback over finite label spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit an instance document for a built-in family.
    Gen(GenArgs),
    /// Print dimensions and the Helly number of an instance.
    Dims(DimsArgs),
    /// Play one game and write its CSV transcript.
    Play(PlayArgs),
    /// Repeat a game over independent seeds and print mean regret with its standard error.
    Bench(BenchArgs),
    /// Run verification suites; exits 1 if any check fails.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Ranking,
    Interval,
    Hamming,
    Singleton,
    Cosingleton,
    Example3,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    /// Number of items (ranking) or bits (hamming).
    #[arg(long = "K")]
    k: Option<usize>,
    /// Hamming radius.
    #[arg(long)]
    q: Option<usize>,
    /// Interval grid size.
    #[arg(long = "G")]
    g: Option<usize>,
    /// Label count (singleton, cosingleton).
    #[arg(long = "M")]
    m: Option<usize>,
    /// Instance count for the constant hypotheses.
    #[arg(long, default_value_t = 1)]
    instances: usize,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DimsArgs {
    /// Instance document (JSON).
    #[arg(long)]
    instance: PathBuf,
    /// Print the Littlestone dimension.
    #[arg(long)]
    ldim: bool,
    /// Print the Set Littlestone dimension.
    #[arg(long)]
    sl: bool,
    /// Print the p-Set Littlestone dimension; repeatable.
    #[arg(long = "p")]
    p: Vec<usize>,
    /// Print the Measure Shattering dimension at scale `a/b`; repeatable.
    #[arg(long)]
    gamma: Vec<String>,
    /// Print the Helly number.
    #[arg(long)]
    helly: bool,
    /// Include shattered-tree witnesses for SL and SL_p.
    #[arg(long)]
    witness: bool,
    /// Emit JSON records instead of text lines.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LearnerKind {
    Soa,
    Rsoa,
    Msol,
    Agnostic,
    Uniform,
    Constant,
    Example3,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AdversaryKind {
    Tree,
    Ms,
    Khinchine,
    Separation,
    Scripted,
    Iid,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Sample,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    Strict,
    Restart,
}

#[derive(Args, Debug)]
struct GameArgs {
    /// Instance document (JSON).
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "soa")]
    learner: LearnerKind,
    /// Accuracy of rsoa and agnostic, as `a/b`.
    #[arg(long)]
    epsilon: Option<String>,
    /// Number of scales of msol.
    #[arg(long)]
    scales: Option<usize>,
    /// Label predicted by the constant learner.
    #[arg(long)]
    label: Option<usize>,
    #[arg(long, value_enum, default_value = "tree")]
    adversary: AdversaryKind,
    /// Scale of the ms adversary, as `a/b`; defaults to --epsilon.
    #[arg(long)]
    gamma: Option<String>,
    /// Stream document for the scripted adversary.
    #[arg(long)]
    stream: Option<PathBuf>,
    /// Number of rounds; defaults to the stream length for scripted play, else 10.
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// What a learner does when the feedback contradicts every hypothesis.
    #[arg(long, value_enum, default_value = "restart")]
    policy: PolicyArg,
    #[arg(long, env = "SFL_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct PlayArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Output path for the transcript; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Output path for the JSON summary; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MaxSize {
    Tiny,
    Small,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(default_value = "all", value_parser = suite_name)]
    suite: String,
    /// Size limits for the exhaustive minimax oracle.
    #[arg(long, value_enum, default_value = "tiny")]
    max_size: MaxSize,
    #[arg(long, env = "SFL_SEED", default_value_t = 0)]
    seed: u64,
    /// Random instances in the structural suite.
    #[arg(long, default_value_t = 100)]
    instances: usize,
    /// Random streams per instance in the potential suite.
    #[arg(long, default_value_t = 1000)]
    streams: usize,
    /// Trials per learner in the khinchine suite.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Emit JSON reports instead of text.
    #[arg(long)]
    json: bool,
    /// Also write the report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn suite_name(s: &str) -> Result<String, String> {
    if s == "all" || SUITES.contains(&s) {
        Ok(s.to_string())
    } else {
        Err(format!("expected one of {}, all", SUITES.join(", ")))
    }
}

/// Failures that map to exit code 1 rather than 2.
#[derive(Debug)]
struct CheckFailed(String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Dims(a) => dims(a),
        Command::Play(a) => play(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<CheckFailed>() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn required(value: Option<usize>, flag: &str, family: &str) -> anyhow::Result<usize> {
    value.with_context(|| format!("{family} requires {flag}"))
}

fn gen(a: GenArgs) -> anyhow::Result<()> {
    let hyp = HypothesisSpec::Constants {
        instances: a.instances,
    };
    let given = |flags: &[(&str, bool)], allowed: &[&str]| -> anyhow::Result<()> {
        for (flag, set) in flags {
            if *set && !allowed.contains(flag) {
                bail!("{flag} does not apply to this family");
            }
        }
        Ok(())
    };
    let flags = [
        ("--K", a.k.is_some()),
        ("--q", a.q.is_some()),
        ("--G", a.g.is_some()),
        ("--M", a.m.is_some()),
    ];
    let inst = match a.family {
        Family::Ranking => {
            given(&flags, &["--K"])?;
            gen_ranking_instance(required(a.k, "--K", "ranking")?, &hyp)?
        }
        Family::Interval => {
            given(&flags, &["--G"])?;
            gen_interval_instance(required(a.g, "--G", "interval")?, &hyp)?
        }
        Family::Hamming => {
            given(&flags, &["--K", "--q"])?;
            gen_hamming_instance(
                required(a.k, "--K", "hamming")?,
                required(a.q, "--q", "hamming")?,
                &hyp,
            )?
        }
        Family::Singleton => {
            given(&flags, &["--M"])?;
            gen_singleton_instance(required(a.m, "--M", "singleton")?, &hyp)?
        }
        Family::Cosingleton => {
            given(&flags, &["--M"])?;
            gen_cosingleton_instance(required(a.m, "--M", "cosingleton")?)?
        }
        Family::Example3 => {
            given(&flags, &[])?;
            example3()
        }
    };
    emit(a.out.as_deref(), &(inst.to_json() + "\n"))
}

fn read_instance(path: &Path) -> anyhow::Result<ProblemInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn rational_arg(flag: &str, text: &str) -> anyhow::Result<Rational> {
    parse_rational(text).with_context(|| format!("{flag} expects a rational a/b, got {text:?}"))
}

fn dims(a: DimsArgs) -> anyhow::Result<()> {
    let inst = read_instance(&a.instance)?;
    let gammas = a
        .gamma
        .iter()
        .map(|g| rational_arg("--gamma", g))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let selected = a.ldim || a.sl || a.helly || !a.p.is_empty();
    let (ldim, sl, helly) = if selected {
        (a.ldim, a.sl, a.helly)
    } else {
        (true, true, true)
    };
    let ps = if selected { a.p.clone() } else { vec![2, 3] };

    let mut engine = DimsEngine::from_instance(&inst);
    let v = engine.full();
    let mut records: Vec<Value> = Vec::new();
    if ldim {
        records.push(json!({"dimension": "Ldim", "value": engine.ldim(&v)}));
    }
    if sl {
        let mut r = json!({"dimension": "SL", "value": engine.sldim(&v)});
        if a.witness {
            r["witness"] = serde_json::to_value(engine.sldim_witness(&v)?)?;
        }
        records.push(r);
    }
    for &p in &ps {
        let kind = Dimension::PSetLittlestone(p);
        kind.validate()?;
        let mut r = json!({"dimension": format!("SL_{p}"), "p": p, "value": engine.psldim(&v, p)?});
        if a.witness {
            r["witness"] = serde_json::to_value(engine.psldim_witness(&v, p)?)?;
        }
        records.push(r);
    }
    for g in &gammas {
        let text = format_rational(g);
        records.push(json!({
            "dimension": format!("MS_{{{text}}}"),
            "gamma": text,
            "value": engine.msdim(&v, g)?,
        }));
    }
    if helly {
        let h = helly_number(inst.sets());
        records.push(json!({"dimension": "Helly", "value": h.value, "vacuous": h.vacuous}));
    }

    let mut out = String::new();
    if a.json {
        out = serde_json::to_string_pretty(&records)? + "\n";
    } else {
        for r in &records {
            out.push_str(&format!(
                "{}={}",
                r["dimension"].as_str().unwrap_or(""),
                r["value"]
            ));
            if r["vacuous"] == json!(true) {
                out.push_str(" (vacuous)");
            }
            out.push('\n');
            if let Some(w) = r.get("witness") {
                out.push_str(&serde_json::to_string(w)?);
                out.push('\n');
            }
        }
    }
    emit(None, &out)
}

struct Game {
    config: GameConfig,
    seed: u64,
}

fn game(a: &GameArgs) -> anyhow::Result<Game> {
    let instance = Arc::new(read_instance(&a.instance)?);
    let epsilon = a
        .epsilon
        .as_deref()
        .map(|e| rational_arg("--epsilon", e))
        .transpose()?;
    let uses_epsilon = matches!(a.learner, LearnerKind::Rsoa | LearnerKind::Agnostic);
    if epsilon.is_some() && !uses_epsilon && !matches!(a.adversary, AdversaryKind::Ms) {
        bail!("--epsilon applies only to rsoa, agnostic or the ms adversary");
    }
    if a.scales.is_some() && !matches!(a.learner, LearnerKind::Msol) {
        bail!("--scales applies only to msol");
    }
    if a.label.is_some() && !matches!(a.learner, LearnerKind::Constant) {
        bail!("--label applies only to the constant learner");
    }
    if a.stream.is_some() != matches!(a.adversary, AdversaryKind::Scripted) {
        bail!("--stream is required by, and only accepted with, --adversary scripted");
    }
    if a.gamma.is_some() && !matches!(a.adversary, AdversaryKind::Ms) {
        bail!("--gamma applies only to the ms adversary");
    }

    let adversary = match a.adversary {
        AdversaryKind::Tree => AdversarySpec::Tree,
        AdversaryKind::Ms => {
            let gamma = match (&a.gamma, &epsilon) {
                (Some(g), _) => rational_arg("--gamma", g)?,
                (None, Some(e)) => e.clone(),
                (None, None) => bail!("the ms adversary requires --gamma or --epsilon"),
            };
            AdversarySpec::Ms { gamma }
        }
        AdversaryKind::Khinchine => AdversarySpec::Khinchine {
            k: a.rounds.unwrap_or(25),
        },
        AdversaryKind::Separation => AdversarySpec::Separation,
        AdversaryKind::Scripted => {
            let path = a.stream.as_ref().expect("checked above");
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            AdversarySpec::Scripted(
                load_stream(&text, &instance)
                    .with_context(|| format!("parsing {}", path.display()))?,
            )
        }
        AdversaryKind::Iid => AdversarySpec::Iid,
    };
    let rounds = match (&adversary, a.rounds) {
        (_, Some(t)) => t,
        (AdversarySpec::Scripted(s), None) => s.len(),
        (AdversarySpec::Khinchine { k }, None) => *k,
        _ => 10,
    };

    let need_epsilon = || {
        epsilon
            .clone()
            .context("this learner requires --epsilon a/b")
    };
    let learner = match a.learner {
        LearnerKind::Soa => LearnerSpec::Soa,
        LearnerKind::Rsoa => LearnerSpec::Rsoa {
            epsilon: need_epsilon()?,
        },
        LearnerKind::Msol => LearnerSpec::Msol {
            scales: a.scales.context("msol requires --scales N")?,
        },
        LearnerKind::Agnostic => LearnerSpec::Agnostic {
            epsilon: need_epsilon()?,
            horizon: rounds,
            mode: match a.mode {
                ModeArg::Exact => AgnosticMode::Exact,
                ModeArg::Sample => AgnosticMode::Sample,
            },
            seed: a.seed,
        },
        LearnerKind::Uniform => LearnerSpec::Uniform,
        LearnerKind::Constant => {
            LearnerSpec::Constant(a.label.context("constant requires --label y")?)
        }
        LearnerKind::Example3 => LearnerSpec::Example3,
    };
    let mode = match a.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Sample => Mode::Sample,
    };
    let policy = match a.policy {
        PolicyArg::Strict => Inconsistency::Strict,
        PolicyArg::Restart => Inconsistency::Restart,
    };
    Ok(Game {
        config: GameConfig {
            instance,
            learner,
            adversary,
            rounds,
            mode,
            policy,
        },
        seed: a.seed,
    })
}

fn play(a: PlayArgs) -> anyhow::Result<()> {
    let Game { config, seed } = game(&a.game)?;
    let instance = &config.instance;
    let mut learner = config.learner.build(Arc::clone(instance), config.policy)?;
    let mut adversary = config.adversary.build(Arc::clone(instance), seed)?;
    let transcript = run_game(
        instance,
        learner.as_mut(),
        adversary.as_mut(),
        config.rounds,
        config.mode,
        seed,
    )?;
    let mut buf = Vec::new();
    write_csv(&transcript, &mut buf)?;
    emit(a.out.as_deref(), std::str::from_utf8(&buf)?)?;
    eprintln!(
        "rounds {}, expected loss {}, comparator loss {}, regret {}",
        transcript.len(),
        format_rational(&transcript.cumulative_expected()),
        transcript.comparator_loss(),
        format_rational(&transcript.regret()),
    );
    Ok(())
}

fn bench(a: BenchArgs) -> anyhow::Result<()> {
    if a.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let Game { config, seed } = game(&a.game)?;
    let summary = monte_carlo(&config, a.trials, seed)?;
    emit(
        a.out.as_deref(),
        &(serde_json::to_string_pretty(&summary)? + "\n"),
    )
}

fn verify(a: VerifyArgs) -> anyhow::Result<()> {
    let options = SuiteOptions {
        seed: a.seed,
        instances: a.instances,
        streams: a.streams,
        trials: a.trials.max(1),
        limits: match a.max_size {
            MaxSize::Tiny => MinimaxLimits::TINY,
            MaxSize::Small => MinimaxLimits::SMALL,
        },
    };
    let reports = run_suite(&a.suite, &options)?;
    let text = if a.json {
        serde_json::to_string_pretty(&reports)? + "\n"
    } else {
        reports.iter().map(|r| r.to_string()).collect()
    };
    emit(None, &text)?;
    if let Some(path) = &a.out {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    let failures: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.failures().map(move |c| {
                format!(
                    "{}/{}: expected {}, actual {}",
                    r.suite, c.name, c.expected, c.actual
                )
            })
        })
        .collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CheckFailed(format!(
            "{} check(s) failed; {}",
            failures.len(),
            failures.join("; ")
        ))
        .into())
    }
}
