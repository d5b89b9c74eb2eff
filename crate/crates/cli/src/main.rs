use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use star_coxeter::batch::{map_ordered, Execution};
use star_coxeter::coxeter::{self, parse_word, DEFAULT_MAX_STEPS};
use star_coxeter::functionals::{build_functionals, InvariantFunctional};
use star_coxeter::graph::{
    decompose, special_character, Character, GeneralizedCharacter, StarGraph, WeightedPair,
};
use star_coxeter::matrix_reps::{
    self, centralizer_dim, joint_commutant_dim, verify_tuple, OperatorTuple,
};
use star_coxeter::spectral::{self, classify_analytic};
use star_coxeter::wire::{
    self, CharacterJson, FunctionalJson, OrbitStepJson, PairJson, PeriodicityJson, ReductionJson,
    RootJson, TupleReportJson,
};
use star_coxeter::{rational, Rational, Terminal};

#[derive(Parser)]
#[command(
    name = "star-coxeter",
    version,
    about = "Star graphs, Coxeter functors and invariant functionals"
)]
struct Cli {
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dynkin / extended Dynkin / hyperbolic classification with roots.
    Classify(GraphArgs),
    /// Roots of the spectral equation on s >= 1.
    Roots(RootsArgs),
    /// Invariant functionals of a graph.
    Functional(GraphArgs),
    /// Values of the invariant functionals on a character.
    Omega(OmegaArgs),
    /// Apply a word in S and T to a pair (rightmost letter first).
    Apply(WordArgs),
    /// Every intermediate pair of a word applied to a pair.
    Orbit(WordArgs),
    /// Run the reduction engine on an extended Dynkin graph.
    Reduce(ReduceArgs),
    /// Check the (ST)^{m k} periodicity identity.
    VerifyPeriodicity(PeriodicityArgs),
    /// Check TS-invariance of the functionals on a character.
    VerifyInvariance(OmegaArgs),
    /// Rigidity index of a verified operator tuple.
    Rigidity(TupleArgs),
    /// Joint commutant and per-matrix centralizer dimensions.
    Commutant(TupleArgs),
    /// Check hermiticity, the sum condition and the spectra of a tuple.
    VerifyTuple(TupleArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Branch lengths, e.g. '[2,2,2]'.
    #[arg(long)]
    graph: String,
    #[arg(long, default_value_t = spectral::DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct RootsArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Also report f(s) and f'(s) exactly at this rational point.
    #[arg(long)]
    at: Option<String>,
}

#[derive(Args)]
struct CharacterArgs {
    /// Character as inline JSON or a path to a JSON file.
    #[arg(
        long,
        required_unless_present = "character_dir",
        conflicts_with = "character_dir"
    )]
    character: Option<String>,
    /// Directory of character files (*.json), processed as a batch.
    #[arg(long)]
    character_dir: Option<PathBuf>,
}

#[derive(Args)]
struct OmegaArgs {
    #[arg(long)]
    graph: String,
    #[command(flatten)]
    input: CharacterArgs,
    /// Use this coefficient table instead of the invariant functionals.
    #[arg(long)]
    coefficients: Option<String>,
    /// With `omega` on an extended Dynkin graph: also split the character
    /// against the special character at this λ.
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long, default_value_t = spectral::DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct WordArgs {
    /// Optional graph the character must fit.
    #[arg(long)]
    graph: Option<String>,
    #[command(flatten)]
    input: CharacterArgs,
    #[arg(long)]
    lambda: String,
    /// Word over {S, T}, e.g. 'STST'.
    #[arg(long)]
    word: String,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    steps: usize,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    graph: String,
    #[command(flatten)]
    input: CharacterArgs,
    #[arg(long)]
    lambda: String,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    steps: usize,
}

#[derive(Args)]
struct PeriodicityArgs {
    #[arg(long)]
    graph: String,
    #[command(flatten)]
    input: CharacterArgs,
    #[arg(long)]
    lambda: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
}

#[derive(Args)]
struct TupleArgs {
    /// Operator tuple as a JSON file (or inline JSON).
    #[arg(long)]
    tuple: String,
    #[arg(long, default_value_t = matrix_reps::DEFAULT_TOL)]
    tol: f64,
}

#[derive(Debug)]
enum CliError {
    Input(String),
}

impl From<star_coxeter::Error> for CliError {
    fn from(e: star_coxeter::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A JSON result and whether the operation it reports succeeded.
struct Outcome {
    value: Value,
    ok: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, ok: true }
    }

    fn check(value: Value, ok: bool) -> Self {
        Outcome { value, ok }
    }
}

fn to_value<T: serde::Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("wire types serialize")
}

/// Inline JSON is recognized by its first character; anything else is a path.
fn read_payload(arg: &str) -> CliResult<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).map_err(|e| CliError::Input(format!("cannot read {arg}: {e}")))
}

fn graph(arg: &str) -> CliResult<StarGraph> {
    Ok(wire::parse_graph(&read_payload(arg)?)?)
}

fn lambda(arg: &str) -> CliResult<Rational> {
    Ok(rational::parse(arg)?)
}

fn generalized(text: &str, g: Option<&StarGraph>) -> CliResult<GeneralizedCharacter> {
    let chi = wire::parse_generalized_character(text)?;
    if let Some(g) = g {
        chi.check_shape(g)?;
    }
    Ok(chi)
}

fn json_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = fs::read_dir(dir)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Input(format!(
            "no *.json files in {}",
            dir.display()
        )));
    }
    Ok(files)
}

/// Runs `f` on the single character or on every file of the batch directory.
/// A batch reports one entry per file in file-name order.
fn for_characters<F>(input: &CharacterArgs, f: F) -> CliResult<Outcome>
where
    F: Fn(&str) -> CliResult<Outcome> + Sync + Send,
{
    let Some(dir) = &input.character_dir else {
        let arg = input
            .character
            .as_deref()
            .expect("clap requires one of the two");
        return f(&read_payload(arg)?);
    };
    let files = json_files(dir)?;
    let results = map_ordered(&files, Execution::Parallel, |path| {
        fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
            .and_then(|text| f(&text))
    });
    let mut ok = true;
    let mut errors = Vec::new();
    let entries: Vec<Value> = files
        .iter()
        .zip(results)
        .map(|(path, result)| {
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            match result {
                Ok(out) => {
                    ok &= out.ok;
                    json!({"input": name, "ok": out.ok, "result": out.value})
                }
                Err(CliError::Input(msg)) => {
                    errors.push(format!("{name}: {msg}"));
                    json!({"input": name, "error": msg})
                }
            }
        })
        .collect();
    if !errors.is_empty() {
        return Err(CliError::Input(errors.join("\n")));
    }
    Ok(Outcome::check(Value::Array(entries), ok))
}

fn functionals_for(
    g: &StarGraph,
    coefficients: Option<&str>,
    tol: f64,
) -> CliResult<Vec<InvariantFunctional>> {
    match coefficients {
        Some(arg) => {
            let coeffs = wire::parse_generalized_character(&read_payload(arg)?)?;
            Ok(vec![InvariantFunctional::with_coefficients(
                g,
                coeffs.into_branches(),
            )?])
        }
        None => Ok(build_functionals(g, tol)),
    }
}

fn run(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Classify(a) => {
            let g = graph(&a.graph)?;
            Ok(Outcome::ok(to_value(wire::spectral_json(
                &g,
                &classify_analytic(&g, a.tol),
            ))))
        }
        Command::Roots(a) => {
            let g = graph(&a.graph.graph)?;
            let result = classify_analytic(&g, a.graph.tol);
            let roots: Vec<RootJson> = result.roots.iter().map(RootJson::from).collect();
            let mut value = json!({"class": result.kind.as_str(), "roots": roots});
            if let Some(at) = &a.at {
                let s = rational::parse(at)?;
                value["at"] = json!({
                    "s": rational::format(&s),
                    "f": rational::format(&spectral::eval_f(&g, &s)?),
                    "f_prime": rational::format(&spectral::eval_f_prime(&g, &s)?),
                });
            }
            Ok(Outcome::ok(value))
        }
        Command::Functional(a) => {
            let g = graph(&a.graph)?;
            let fs: Vec<FunctionalJson> = build_functionals(&g, a.tol)
                .iter()
                .map(FunctionalJson::from)
                .collect();
            Ok(Outcome::ok(to_value(fs)))
        }
        Command::Omega(a) => {
            let g = graph(&a.graph)?;
            let fs = functionals_for(&g, a.coefficients.as_deref(), a.tol)?;
            let lambda = a.lambda.as_deref().map(lambda).transpose()?;
            for_characters(&a.input, |text| {
                let chi = generalized(text, Some(&g))?;
                let values: Vec<Value> = fs
                    .iter()
                    .map(|f| {
                        let value = f.evaluate(&chi)?;
                        Ok(json!({"s": FunctionalJson::from(f).s, "value": wire::functional_value_json(&value)}))
                    })
                    .collect::<CliResult<_>>()?;
                let Some(lambda) = &lambda else {
                    return Ok(Outcome::ok(Value::Array(values)));
                };
                let chi = Character::try_from(chi)?;
                let d = decompose(&g, &chi, lambda)?;
                Ok(Outcome::ok(json!({
                    "values": values,
                    "decomposition": {
                        "scale": rational::format(&d.scale),
                        "residual": CharacterJson::from(&d.residual),
                        "gamma": rational::format(&d.gamma),
                        "special_character": CharacterJson::from(special_character(&g)?.as_generalized()),
                    },
                })))
            })
        }
        Command::VerifyInvariance(a) => {
            let g = graph(&a.graph)?;
            let fs = functionals_for(&g, a.coefficients.as_deref(), a.tol)?;
            if fs.is_empty() {
                return Err(CliError::Input(format!(
                    "{g} has no invariant functional on s >= 1"
                )));
            }
            for_characters(&a.input, |text| {
                let chi = generalized(text, Some(&g))?;
                let mut holds = true;
                let checks = fs
                    .iter()
                    .map(|f| {
                        let check = f.verify_invariance(&chi, a.tol)?;
                        holds &= check.holds;
                        Ok(to_value(wire::invariance_json(f, &check)))
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(Outcome::check(Value::Array(checks), holds))
            })
        }
        Command::Apply(a) => word_command(a, false),
        Command::Orbit(a) => word_command(a, true),
        Command::Reduce(a) => {
            let g = graph(&a.graph)?;
            let lambda = lambda(&a.lambda)?;
            for_characters(&a.input, |text| {
                let chi = wire::parse_character(text)?;
                let out = coxeter::reduce(&g, &chi, &lambda, a.steps)?;
                let ok = out.terminal != Terminal::StepLimit;
                Ok(Outcome::check(to_value(ReductionJson::from(&out)), ok))
            })
        }
        Command::VerifyPeriodicity(a) => {
            let g = graph(&a.graph)?;
            let lambda = lambda(&a.lambda)?;
            for_characters(&a.input, |text| {
                let chi = generalized(text, Some(&g))?;
                let check = coxeter::verify_periodicity(&g, &chi, &lambda, a.k)?;
                Ok(Outcome::check(
                    to_value(PeriodicityJson::from(&check)),
                    check.holds,
                ))
            })
        }
        Command::Rigidity(a) => {
            let t = tuple(&a.tuple)?;
            let report = verify_tuple(&t, a.tol);
            if !report.passed() {
                let value =
                    json!({"verified": false, "verification": TupleReportJson::from(&report)});
                return Ok(Outcome::check(value, false));
            }
            let r = matrix_reps::rigidity_index(&t, a.tol)?;
            Ok(Outcome::ok(to_value(wire::rigidity_json(&t, &r))))
        }
        Command::Commutant(a) => {
            let t = tuple(&a.tuple)?;
            let commutant = joint_commutant_dim(&t, a.tol)?;
            let centralizers = t
                .matrices()
                .iter()
                .map(|m| centralizer_dim(m, a.tol))
                .collect::<star_coxeter::Result<Vec<_>>>()?;
            Ok(Outcome::ok(json!({
                "commutant_dim": commutant,
                "irreducible": commutant == 1,
                "centralizer_dims": centralizers,
            })))
        }
        Command::VerifyTuple(a) => {
            let t = tuple(&a.tuple)?;
            let report = verify_tuple(&t, a.tol);
            Ok(Outcome::check(
                to_value(TupleReportJson::from(&report)),
                report.passed(),
            ))
        }
    }
}

fn word_command(a: WordArgs, record: bool) -> CliResult<Outcome> {
    let g = a.graph.as_deref().map(graph).transpose()?;
    let lambda = lambda(&a.lambda)?;
    let word = parse_word(&a.word)?;
    for_characters(&a.input, |text| {
        let pair = WeightedPair::new(generalized(text, g.as_ref())?, lambda.clone());
        let orbit = coxeter::orbit(&pair, &word, a.steps);
        let value = if record {
            to_value(
                orbit
                    .steps
                    .iter()
                    .map(OrbitStepJson::from)
                    .collect::<Vec<_>>(),
            )
        } else {
            to_value(PairJson::from(orbit.last()))
        };
        Ok(Outcome::check(value, !orbit.step_limit_hit))
    })
}

fn tuple(arg: &str) -> CliResult<OperatorTuple> {
    Ok(wire::parse_tuple(&read_payload(arg)?)?)
}

fn print_json(value: &Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    println!("{}", text.expect("JSON values serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print_json(&out.value, cli.pretty);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
