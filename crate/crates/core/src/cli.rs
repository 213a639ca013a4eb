//! The `stitkit` command line.
//!
//! Every command prints JSON (or a rendered formula) to stdout. Exit codes:
//! 0 when the property holds, 1 when it fails (the witness is printed),
//! 2 on usage, parse or validation errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::bridge::check_translation_equiv;
use crate::btac::{eval_cstit, extension_at, validate_btac, BtacModel};
use crate::error::{Error, Result};
use crate::logic::{
    atom_names, generate_frame, parse_schema_list, random_valuation, rng_for, soundness_fuzz, validity_search,
    FrameClass, FrameParams, FrameStyle, FuzzConfig, SearchBounds, SearchOutcome,
};
use crate::mc;
use crate::morphism::{check_modal_equivalence, image_model, is_bounded_core_morphism, is_surjective, CoreMorphism};
use crate::nbhd::NbhdModel;
use crate::report::{CheckReport, Witness};
use crate::syntax::{parse, translate_tr};

pub const SEED_ENV: &str = "STITKIT_SEED";

#[derive(Debug, Parser)]
#[command(name = "stitkit", version, about = "Strategic STIT logic toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a formula and print it in canonical form.
    Parse(ParseArgs),
    /// Evaluate a formula on a neighbourhood or BT+AC model.
    Check(CheckArgs),
    /// Check frame conditions, validate a BT+AC model, or generate a frame.
    Frame(FrameArgs),
    /// Bounded validity search over class-C models.
    Validity(ValidityArgs),
    /// Print the classical translation of a strategic formula.
    Translate(ParseArgs),
    /// Compare a formula on the moment union with its translation on a BT+AC model.
    TranslateCheck(TranslateCheckArgs),
    /// Check a bounded core morphism and modal equivalence along it.
    Morphism(MorphismArgs),
    /// Fuzz the axiom schemas on random models.
    Fuzz(FuzzArgs),
}

#[derive(Debug, Args)]
struct ParseArgs {
    #[arg(long)]
    formula: String,
    /// Print structural information as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, conflicts_with = "bt_model", required_unless_present = "bt_model")]
    model: Option<PathBuf>,
    #[arg(long)]
    bt_model: Option<PathBuf>,
    #[arg(long)]
    formula: String,
    /// State name, or `m/h` index for BT+AC models. Without it the extension is printed.
    #[arg(long)]
    state: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FrameCheck {
    #[value(name = "C")]
    C,
    #[value(name = "P")]
    P,
    Ind,
    Nec,
    Un,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StyleArg {
    Grid,
    Perturbed,
}

#[derive(Debug, Args)]
struct FrameArgs {
    #[arg(long, conflicts_with_all = ["bt_model", "generate"])]
    model: Option<PathBuf>,
    #[arg(long, conflicts_with = "generate")]
    bt_model: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "C")]
    class: FrameCheck,
    /// Print a random class-C model instead of checking one.
    #[arg(long)]
    generate: bool,
    #[arg(long, default_value_t = 4)]
    max_states: usize,
    #[arg(long, default_value_t = 2)]
    agents: usize,
    #[arg(long, default_value_t = 0)]
    atoms: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "grid")]
    style: StyleArg,
    /// Grid cells per agent, comma separated.
    #[arg(long, value_delimiter = ',')]
    cells: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
struct ValidityArgs {
    #[arg(long)]
    formula: String,
    #[arg(long, default_value_t = 3)]
    max_states: usize,
    #[arg(long, default_value_t = 2)]
    agents: usize,
    #[arg(long, default_value_t = 3)]
    atoms: usize,
    /// Give up after this many seconds.
    #[arg(long, default_value_t = 120.0)]
    timeout: f64,
    /// Include timing in the report.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct TranslateCheckArgs {
    #[arg(long)]
    bt_model: PathBuf,
    #[arg(long)]
    formula: String,
}

#[derive(Debug, Args)]
struct MorphismArgs {
    /// Source model, then target model.
    #[arg(long, num_args = 1, required = true)]
    model: Vec<PathBuf>,
    /// JSON object mapping source states to target states.
    #[arg(long)]
    map: PathBuf,
    /// Modal depth for the equivalence check.
    #[arg(long, default_value_t = 2)]
    depth: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClassArg {
    #[value(name = "C")]
    C,
    Monotone,
}

#[derive(Debug, Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 500)]
    models: usize,
    #[arg(long, default_value_t = 5)]
    max_states: usize,
    #[arg(long, default_value_t = 3)]
    agents: usize,
    #[arg(long, default_value_t = 3)]
    atoms: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "all")]
    schemas: String,
    #[arg(long, value_enum, default_value = "C")]
    class: ClassArg,
    /// Modal depth of the random subformulas.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long, default_value_t = 4)]
    instances: usize,
    /// Include timing in the report.
    #[arg(long)]
    json: bool,
}

enum Verdict {
    Holds,
    Fails,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(Verdict::Holds) => 0,
        Ok(Verdict::Fails) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<Verdict> {
    match command {
        Command::Parse(a) => cmd_parse(a, out),
        Command::Check(a) => cmd_check(a, out),
        Command::Frame(a) => cmd_frame(a, out),
        Command::Validity(a) => cmd_validity(a, out),
        Command::Translate(a) => cmd_translate(a, out),
        Command::TranslateCheck(a) => cmd_translate_check(a, out),
        Command::Morphism(a) => cmd_morphism(a, out),
        Command::Fuzz(a) => cmd_fuzz(a, out),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<NbhdModel> {
    NbhdModel::from_json_str(&read(path)?)
}

fn load_bt(path: &Path) -> Result<BtacModel> {
    BtacModel::from_json_str(&read(path)?)
}

fn emit(out: &mut dyn Write, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    writeln!(out, "{text}").map_err(|e| Error::Format(e.to_string()))
}

fn emit_text(out: &mut dyn Write, text: &str) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| Error::Format(e.to_string()))
}

fn emit_report(out: &mut dyn Write, report: &CheckReport) -> Result<Verdict> {
    emit(out, &serde_json::to_value(report)?)?;
    Ok(if report.holds { Verdict::Holds } else { Verdict::Fails })
}

/// `--seed`, else `STITKIT_SEED`, else 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(0),
    }
}

fn cmd_parse(a: ParseArgs, out: &mut dyn Write) -> Result<Verdict> {
    let f = parse(&a.formula)?;
    if a.json {
        emit(
            out,
            &json!({
                "formula": f.to_string(),
                "normalized": f.normalize().to_string(),
                "modalDepth": f.modal_depth(),
                "size": f.size(),
                "vars": f.vars(),
                "agents": f.agents(),
            }),
        )?;
    } else {
        emit_text(out, &f.to_string())?;
    }
    Ok(Verdict::Holds)
}

fn cmd_translate(a: ParseArgs, out: &mut dyn Write) -> Result<Verdict> {
    let f = parse(&a.formula)?;
    let t = translate_tr(&f)?;
    if a.json {
        emit(out, &json!({ "formula": f.to_string(), "translation": t.to_string() }))?;
    } else {
        emit_text(out, &t.to_string())?;
    }
    Ok(Verdict::Holds)
}

fn cmd_check(a: CheckArgs, out: &mut dyn Write) -> Result<Verdict> {
    let f = parse(&a.formula)?;
    let value = match (&a.model, &a.bt_model) {
        (Some(path), _) => {
            let model = load_model(path)?;
            match &a.state {
                Some(s) => json!({ "value": mc::eval(&model, s, &f)? }),
                None => json!({ "extension": model.frame.states().names_of(mc::extension(&model, &f)?) }),
            }
        }
        (None, Some(path)) => {
            let model = load_bt(path)?;
            match &a.state {
                Some(s) => json!({ "value": eval_cstit(&model, model.parse_index(s)?, &f)? }),
                None => {
                    let mut names = Vec::new();
                    for m in 0..model.frame().len() {
                        for h in extension_at(&model, m, &f)?.iter() {
                            names.push(model.index_name(crate::btac::Index { moment: m, history: h }));
                        }
                    }
                    json!({ "extension": names })
                }
            }
        }
        (None, None) => return Err(Error::Format("one of --model or --bt-model is required".into())),
    };
    emit(out, &value)?;
    Ok(Verdict::Holds)
}

fn cmd_frame(a: FrameArgs, out: &mut dyn Write) -> Result<Verdict> {
    if a.generate {
        let seed = resolve_seed(a.seed)?;
        let frame = generate_frame(&FrameParams {
            states: a.max_states,
            agents: a.agents,
            seed,
            style: match a.style {
                StyleArg::Grid => FrameStyle::Grid,
                StyleArg::Perturbed => FrameStyle::Perturbed,
            },
            cells: a.cells,
        })?;
        let mut rng = rng_for(seed, u64::MAX);
        let valuation = random_valuation(&mut rng, frame.len(), &atom_names(a.atoms));
        let model = NbhdModel::new(frame, valuation)?;
        emit(out, &serde_json::to_value(model.to_file())?)?;
        return Ok(Verdict::Holds);
    }
    if let Some(path) = &a.bt_model {
        return emit_report(out, &validate_btac(&load_bt(path)?));
    }
    let path = a
        .model
        .as_ref()
        .ok_or_else(|| Error::Format("one of --model, --bt-model or --generate is required".into()))?;
    let frame = load_model(path)?.frame;
    let report = match a.class {
        FrameCheck::C => frame.is_class_c(),
        FrameCheck::P => frame.is_class_p(),
        FrameCheck::Ind => frame.check_ind(),
        FrameCheck::Nec => frame.check_nec(),
        FrameCheck::Un => frame.check_un(),
    };
    emit_report(out, &report)
}

fn search_report(verdict: &str, witness: Option<Value>, fields: Vec<(&str, Value)>, elapsed: Option<Instant>) -> Value {
    let mut obj = Map::new();
    obj.insert("verdict".into(), verdict.into());
    if let Some(w) = witness {
        obj.insert("witness".into(), w);
    }
    for (k, v) in fields {
        obj.insert(k.into(), v);
    }
    if let Some(start) = elapsed {
        obj.insert("elapsedMs".into(), (start.elapsed().as_millis() as u64).into());
    }
    Value::Object(obj)
}

fn cmd_validity(a: ValidityArgs, out: &mut dyn Write) -> Result<Verdict> {
    let start = Instant::now();
    let f = parse(&a.formula)?;
    let bounds = SearchBounds {
        max_states: a.max_states,
        agent_count: a.agents,
        atom_count: a.atoms,
        max_seconds: a.timeout,
    };
    let timing = a.json.then_some(start);
    let report = match validity_search(&f, &bounds) {
        Ok(r) => r,
        Err(Error::Timeout { explored }) => {
            let value = search_report("timeout", None, vec![("modelsExplored", explored.into())], timing);
            emit(out, &value)?;
            return Err(Error::Timeout { explored });
        }
        Err(e) => return Err(e),
    };
    let counts = vec![
        ("statesExplored", report.states_explored.into()),
        ("modelsExplored", report.models_explored.into()),
    ];
    let (value, verdict) = match &report.outcome {
        SearchOutcome::ValidUpToBound => (search_report("valid-up-to-bound", None, counts, timing), Verdict::Holds),
        SearchOutcome::Countermodel(c) => (
            search_report("countermodel", Some(c.to_json()), counts, timing),
            Verdict::Fails,
        ),
    };
    emit(out, &value)?;
    Ok(verdict)
}

fn cmd_translate_check(a: TranslateCheckArgs, out: &mut dyn Write) -> Result<Verdict> {
    let model = load_bt(&a.bt_model)?;
    let f = parse(&a.formula)?;
    emit_report(out, &check_translation_equiv(&model, &f)?)
}

fn cmd_morphism(a: MorphismArgs, out: &mut dyn Write) -> Result<Verdict> {
    let [src_path, tgt_path] = a.model.as_slice() else {
        return Err(Error::Format("morphism takes exactly two --model files (source, target)".into()));
    };
    let src = load_model(src_path)?;
    let tgt = load_model(tgt_path)?;
    let map: BTreeMap<String, String> = serde_json::from_str(&read(&a.map)?)?;
    let m = CoreMorphism::from_names(src.frame.clone(), tgt.frame.clone(), &map)?;
    let bounded = is_bounded_core_morphism(&m);
    if !bounded.holds {
        return emit_report(out, &CheckReport::all("morphism", [bounded]));
    }
    let surjective = if is_surjective(&m) {
        CheckReport::pass("surjective")
    } else {
        let missed = tgt.frame.full().difference(m.image(src.frame.full()));
        CheckReport::fail(
            "surjective",
            Witness {
                states: tgt.frame.states().names_of(missed),
                ..Witness::default()
            },
        )
    };
    if !surjective.holds {
        return emit_report(out, &CheckReport::all("morphism", [bounded, surjective]));
    }
    let image = image_model(&m, &src)?;
    if !tgt.valuation.is_empty() && tgt.valuation != image.valuation {
        return Err(Error::Precondition(
            "target valuation is not the image of the source valuation".into(),
        ));
    }
    let equivalence = check_modal_equivalence(&m, &src, a.depth)?;
    emit_report(out, &CheckReport::all("morphism", [bounded, surjective, equivalence]))
}

fn cmd_fuzz(a: FuzzArgs, out: &mut dyn Write) -> Result<Verdict> {
    let start = Instant::now();
    let config = FuzzConfig {
        models: a.models,
        max_states: a.max_states,
        max_agents: a.agents,
        max_atoms: a.atoms,
        schemas: parse_schema_list(&a.schemas)?,
        seed: resolve_seed(a.seed)?,
        instances_per_schema: a.instances,
        formula_depth: a.depth,
        frame_class: match a.class {
            ClassArg::C => FrameClass::ClassC,
            ClassArg::Monotone => FrameClass::Monotone,
        },
    };
    let outcome = soundness_fuzz(&config)?;
    let counts = vec![
        ("statesExplored", outcome.stats.states_explored.into()),
        ("models", outcome.stats.models.into()),
        ("instances", outcome.stats.instances.into()),
    ];
    let timing = a.json.then_some(start);
    let (value, verdict) = match &outcome.counterexample {
        None => (search_report("no-counterexample", None, counts, timing), Verdict::Holds),
        Some(c) => (search_report("counterexample", Some(c.to_json()), counts, timing), Verdict::Fails),
    };
    emit(out, &value)?;
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("stitkit").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parse_prints_canonical_form() {
        let (code, out, _) = run_args(&["parse", "--formula", "[a]p&q->box   q"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "[a] p & q -> box q");
    }

    #[test]
    fn parse_error_exits_2() {
        let (code, out, err) = run_args(&["parse", "--formula", "[a] (p &"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.contains("syntax error"));
    }

    #[test]
    fn unknown_flag_exits_2() {
        assert_eq!(run_args(&["parse", "--nope"]).0, 2);
        assert_eq!(run_args(&[]).0, 2);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("translate-check"));
    }

    #[test]
    fn translate_prints_classical_formula() {
        let (code, out, _) = run_args(&["translate", "--formula", "[a] p"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "dia [stit:a] p");
        assert_eq!(run_args(&["translate", "--formula", "[E:a] p"]).0, 2);
    }

    #[test]
    fn validity_countermodel_exits_1() {
        let (code, out, _) = run_args(&["validity", "--formula", "[a]p -> p", "--max-states", "3", "--agents", "1"]);
        assert_eq!(code, 1);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], "countermodel");
        assert_eq!(v["witness"]["states"].as_array().unwrap().len(), 2);
        assert!(v.get("elapsedMs").is_none());
    }

    #[test]
    fn validity_json_includes_timing() {
        let (code, out, _) = run_args(&["validity", "--formula", "[a] true", "--max-states", "2", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], "valid-up-to-bound");
        assert!(v["elapsedMs"].is_u64());
        assert!(v["statesExplored"].as_u64().unwrap() > 0);
    }
}
