//! Command-line frontend. Exit status is 0 on success (including a found
//! counterexample), 1 on domain errors, and 2 on usage, parse, or I/O errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::automata::{CascadeSpec, Dfa};
use crate::brasp::{rewrite_leftmost_to_rightmost, BraspProgram, Restriction};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::ltl::{Convention, Fragment, LtlFormula};
use crate::oracle::{self, EquivResult, Mode, Recognizer};
use crate::text::read_file;
use crate::translate;
use crate::uhat::UhatModel;

const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "uhax", version, about = "Formulas, programs, automata, and hard-attention transformers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an LTL formula on a string.
    EvalLtl {
        #[arg(short = 'f', long)]
        formula: PathBuf,
        #[arg(short = 'w', long, allow_hyphen_values = true)]
        word: String,
        /// Value at one position in 0..=T+1.
        #[arg(long, conflicts_with = "lang")]
        pos: Option<usize>,
        /// Language acceptance.
        #[arg(long)]
        lang: bool,
        #[arg(long, value_enum, default_value_t = ConventionArg::End, requires = "lang")]
        convention: ConventionArg,
        #[command(flatten)]
        common: Common,
    },
    /// Run a B-RASP program on a string.
    RunBrasp {
        #[arg(short = 'p', long)]
        program: PathBuf,
        #[arg(short = 'w', long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run a transformer model on a string.
    RunUhat {
        #[arg(short = 'm', long)]
        model: PathBuf,
        #[arg(short = 'w', long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Translate between formalisms.
    Translate {
        #[arg(value_enum)]
        kind: TranslateKind,
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// brasp-to-ltl: emit the acceptance formula instead of the output vector's.
        #[arg(long)]
        acceptance: bool,
        /// Apply the Boolean simplifier to emitted formulas.
        #[arg(long)]
        simplify: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Classify the language of an automaton.
    Classify {
        #[arg(short = 'a', long)]
        automaton: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compare two recognizers on all strings up to a length.
    Equiv {
        /// ltl:F, ltl-start:F, brasp:P, dfa:A, or uhat:M
        #[arg(short = 'a')]
        a: String,
        #[arg(short = 'b')]
        b: String,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long)]
        positionwise: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Render an automaton in Graphviz format.
    Dot {
        #[arg(short = 'a', long)]
        automaton: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Generate a random object from a seed.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        alphabet_size: usize,
        /// formula: operator nesting depth.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// formula: P-only, F-only, PF, or Full.
        #[arg(long, default_value = "P-only", value_parser = parse_fragment)]
        fragment: Fragment,
        /// brasp: maximum number of non-atomic vectors.
        #[arg(long, default_value_t = 4)]
        max_vectors: usize,
        /// brasp: FL, FR, PL, PR, or any.
        #[arg(long, default_value = "FL")]
        restriction: Restriction,
        /// brasp: allow scores and values that read the query position.
        #[arg(long)]
        binary: bool,
        /// dfa: maximum number of states.
        #[arg(long, default_value_t = 4)]
        max_states: usize,
        /// uhat: maximum number of layers.
        #[arg(long, default_value_t = 2)]
        max_layers: usize,
        /// uhat: maximum score rules per layer.
        #[arg(long, default_value_t = 3)]
        max_rules: usize,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    End,
    Start,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TranslateKind {
    LtlToBrasp,
    BraspToLtl,
    CascadeToBrasp,
    UhatToLtl,
    UhatToPofa,
    MirrorLtl,
    MirrorBrasp,
    LeftToRight,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenKind {
    Formula,
    Brasp,
    Dfa,
    Uhat,
}

fn parse_fragment(s: &str) -> std::result::Result<Fragment, String> {
    match s.to_ascii_lowercase().as_str() {
        "p-only" | "p" => Ok(Fragment::POnly),
        "f-only" | "f" => Ok(Fragment::FOnly),
        "pf" => Ok(Fragment::PF),
        "full" => Ok(Fragment::Full),
        _ => Err(format!("unknown fragment `{s}`")),
    }
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// What a command produced: text for standard output, or text for a file.
struct Output {
    stdout: String,
    file: Option<(PathBuf, String)>,
}

impl Output {
    fn text(s: String) -> Self {
        Output { stdout: s, file: None }
    }

    /// Writes `body` to `path` if given, otherwise prints it; `json` replaces
    /// the printed text.
    fn to(path: Option<PathBuf>, body: String, json: Option<Value>) -> Self {
        match (path, json) {
            (Some(p), Some(j)) => Output { stdout: pretty(j), file: Some((p, body)) },
            (Some(p), None) => Output { stdout: String::new(), file: Some((p, body)) },
            (None, Some(j)) => Output::text(pretty(j)),
            (None, None) => Output::text(body),
        }
    }
}

fn load_recognizer(spec: &str) -> Result<Recognizer> {
    let (kind, path) = spec
        .split_once(':')
        .ok_or_else(|| Error::Io(format!("recognizer `{spec}` must look like KIND:PATH")))?;
    let src = read_file(Path::new(path))?;
    Ok(match kind {
        "ltl" => Recognizer::ltl(LtlFormula::parse(&src)?, Convention::End),
        "ltl-start" => Recognizer::ltl(LtlFormula::parse(&src)?, Convention::Start),
        "brasp" => Recognizer::Brasp(BraspProgram::parse(&src)?),
        "dfa" => Recognizer::Dfa(Dfa::parse(&src)?),
        "uhat" => Recognizer::Uhat(UhatModel::parse(&src)?),
        _ => return Err(Error::Io(format!("unknown recognizer kind `{kind}`"))),
    })
}

fn execute(cmd: Command, caps: &Caps) -> Result<Output> {
    match cmd {
        Command::EvalLtl { formula, word, pos, lang, convention, common } => {
            let f = LtlFormula::parse(&read_file(&formula)?)?;
            let w = f.alphabet().parse_word(&word)?;
            let shown = f.alphabet().format_word(&w);
            if let Some(k) = pos {
                let v = f.eval(&w, k)?;
                let j = json!({"schema": SCHEMA, "word": shown, "position": k, "value": v});
                Ok(Output::text(if common.json { pretty(j) } else { format!("{v}\n") }))
            } else if lang {
                let conv = match convention {
                    ConventionArg::End => Convention::End,
                    ConventionArg::Start => Convention::Start,
                };
                let v = f.accepts(&w, conv)?;
                let j = json!({"schema": SCHEMA, "word": shown, "convention": conv, "accepted": v});
                Ok(Output::text(if common.json { pretty(j) } else { format!("{v}\n") }))
            } else {
                let vals = f.eval_all(&w)?;
                let j = json!({"schema": SCHEMA, "word": shown, "values": vals});
                Ok(Output::text(if common.json { pretty(j) } else { format!("{}\n", bits(&vals)) }))
            }
        }
        Command::RunBrasp { program, word, trace, common } => {
            let p = BraspProgram::parse(&read_file(&program)?)?;
            let w = p.alphabet().parse_word(&word)?;
            let t = p.run(&w)?;
            let accepted = p.accepts(&w)?;
            let shown = p.alphabet().format_word(&w);
            if common.json {
                let mut j = json!({"schema": SCHEMA, "word": shown, "accepted": accepted});
                if trace {
                    let rows: Vec<Value> = p
                        .vectors()
                        .iter()
                        .enumerate()
                        .map(|(i, v)| {
                            json!({"name": v.name, "values": t.values[i], "attended": t.attended[i]})
                        })
                        .collect();
                    j["trace"] = Value::Array(rows);
                }
                return Ok(Output::text(pretty(j)));
            }
            let mut s = String::new();
            if trace {
                let width = p.vectors().iter().map(|v| v.name.len()).max().unwrap_or(0);
                for (i, v) in p.vectors().iter().enumerate() {
                    s += &format!("{:width$}  {}", v.name, bits(&t.values[i]));
                    if let Some(att) = &t.attended[i] {
                        let a: Vec<String> =
                            att.iter().map(|x| x.map_or("-".into(), |p| p.to_string())).collect();
                        s += &format!("  t* = {}", a.join(" "));
                    }
                    s.push('\n');
                }
            }
            s += &format!("{accepted}\n");
            Ok(Output::text(s))
        }
        Command::RunUhat { model, word, trace, common } => {
            let m = UhatModel::parse(&read_file(&model)?)?;
            let w = m.alphabet().parse_word(&word)?;
            let t = m.run(&w)?;
            let accepted = m.accept().contains(t.eos_rep());
            let a = m.alphabet();
            let eos = t.eos_rep().display(a).to_string();
            let reps = |l: usize| -> Vec<String> {
                t.reps[l].iter().map(|r| r.display(a).to_string()).collect()
            };
            if common.json {
                let mut j = json!({"schema": SCHEMA, "word": a.format_word(&w), "eos": eos, "accepted": accepted});
                if trace {
                    let layers: Vec<Value> = (0..t.reps.len())
                        .map(|l| {
                            let att = if l == 0 { Value::Null } else { json!(t.attended[l - 1]) };
                            json!({"level": l, "reps": reps(l), "attended": att})
                        })
                        .collect();
                    j["trace"] = Value::Array(layers);
                }
                return Ok(Output::text(pretty(j)));
            }
            let mut s = String::new();
            if trace {
                for l in 0..t.reps.len() {
                    s += &format!("level {l}: {}", reps(l).join(" "));
                    if l > 0 {
                        let att: Vec<String> = t.attended[l - 1]
                            .iter()
                            .map(|x| x.map_or("-".into(), |p| p.to_string()))
                            .collect();
                        s += &format!("  t* = {}", att.join(" "));
                    }
                    s.push('\n');
                }
            }
            s += &format!("{eos}\n{accepted}\n");
            Ok(Output::text(s))
        }
        Command::Translate { kind, input, output, acceptance, simplify, common } => {
            let src = read_file(&input)?;
            let simp = |f: LtlFormula| if simplify { f.simplify() } else { f };
            let (body, stats) = match kind {
                TranslateKind::LtlToBrasp => {
                    let p = translate::ltl_to_brasp(&LtlFormula::parse(&src)?)?;
                    (p.to_file_string(), json!({"vectors": p.vectors().len()}))
                }
                TranslateKind::BraspToLtl => {
                    let out = translate::brasp_to_ltl(&BraspProgram::parse(&src)?)?;
                    let f = simp(if acceptance { out.acceptance } else { out.vectors[out.output].clone() });
                    (f.to_file_string(), json!({"fragment": f.fragment(), "dag_size": f.dag_size()}))
                }
                TranslateKind::CascadeToBrasp => {
                    let p = translate::cascade_to_brasp(&CascadeSpec::parse(&src)?)?;
                    (p.to_file_string(), json!({"vectors": p.vectors().len()}))
                }
                TranslateKind::UhatToLtl => {
                    let f = simp(translate::uhat_to_ltl(&UhatModel::parse(&src)?, caps)?);
                    (f.to_file_string(), json!({"fragment": f.fragment(), "dag_size": f.dag_size()}))
                }
                TranslateKind::UhatToPofa => {
                    let d = translate::uhat_to_pofa(&UhatModel::parse(&src)?, caps)?;
                    (d.to_file_string(), json!({"states": d.len()}))
                }
                TranslateKind::MirrorLtl => {
                    let f = simp(LtlFormula::parse(&src)?.mirror());
                    (f.to_file_string(), json!({"fragment": f.fragment()}))
                }
                TranslateKind::MirrorBrasp => {
                    let p = BraspProgram::parse(&src)?.mirror();
                    (p.to_file_string(), json!({"vectors": p.vectors().len()}))
                }
                TranslateKind::LeftToRight => {
                    let p = rewrite_leftmost_to_rightmost(&BraspProgram::parse(&src)?)?;
                    (p.to_file_string(), json!({"vectors": p.vectors().len()}))
                }
            };
            let name = kind.to_possible_value().expect("no skipped variants").get_name().to_string();
            let j = common.json.then(|| {
                let mut j = json!({"schema": SCHEMA, "translation": name, "stats": stats});
                if output.is_none() {
                    j["text"] = Value::String(body.clone());
                }
                j
            });
            Ok(Output::to(output, body, j))
        }
        Command::Classify { automaton, .. } => {
            let d = Dfa::parse(&read_file(&automaton)?)?;
            let c = d.classify(caps)?;
            let mut j = serde_json::to_value(c).expect("plain struct");
            j["schema"] = json!(SCHEMA);
            Ok(Output::text(pretty(j)))
        }
        Command::Equiv { a, b, max_len, positionwise, jobs, common } => {
            let (ra, rb) = (load_recognizer(&a)?, load_recognizer(&b)?);
            let mode = if positionwise { Mode::Positionwise } else { Mode::Language };
            let r = oracle::check_equiv(&ra, &rb, max_len, mode, jobs.max(1))?;
            let alpha = ra.alphabet();
            if !common.json {
                return Ok(Output::text(format!("{}\n", r.display(alpha))));
            }
            let j = match &r {
                EquivResult::Equal { max_len } => {
                    json!({"schema": SCHEMA, "mode": mode, "result": "equal", "max_len": max_len})
                }
                EquivResult::Counterexample { word, a, b, position } => json!({
                    "schema": SCHEMA,
                    "mode": mode,
                    "result": "counterexample",
                    "word": alpha.format_word(word),
                    "a": a,
                    "b": b,
                    "position": position,
                }),
            };
            Ok(Output::text(pretty(j)))
        }
        Command::Dot { automaton, output, common } => {
            let d = Dfa::parse(&read_file(&automaton)?)?;
            let dot = d.to_dot();
            let j = common.json.then(|| {
                let mut j = json!({"schema": SCHEMA, "states": d.len()});
                if output.is_none() {
                    j["dot"] = Value::String(dot.clone());
                }
                j
            });
            Ok(Output::to(output, dot, j))
        }
        Command::Gen {
            kind,
            seed,
            alphabet_size,
            depth,
            fragment,
            max_vectors,
            restriction,
            binary,
            max_states,
            max_layers,
            max_rules,
            output,
            common,
        } => {
            if !(1..=26).contains(&alphabet_size) {
                return Err(Error::InvalidAlphabet("--alphabet-size must be in 1..=26".into()));
            }
            let body = match kind {
                GenKind::Formula => oracle::random_formula(
                    seed,
                    oracle::FormulaParams { alphabet_size, depth, fragment },
                )
                .to_file_string(),
                GenKind::Brasp => oracle::random_brasp(
                    seed,
                    oracle::BraspParams { alphabet_size, max_vectors, restriction, unary: !binary },
                )
                .to_file_string(),
                GenKind::Dfa => {
                    oracle::random_dfa(seed, oracle::DfaParams { alphabet_size, max_states })
                        .to_file_string()
                }
                GenKind::Uhat => oracle::random_uhat(
                    seed,
                    oracle::UhatParams { alphabet_size, max_layers, max_rules },
                )?
                .to_file_string(),
            };
            let name = kind.to_possible_value().expect("no skipped variants").get_name().to_string();
            let j = common.json.then(|| {
                let mut j = json!({"schema": SCHEMA, "kind": name, "seed": seed});
                if output.is_none() {
                    j["text"] = Value::String(body.clone());
                }
                j
            });
            Ok(Output::to(output, body, j))
        }
    }
}

/// Runs one invocation, writing to the given streams; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = Caps::from_env().and_then(|caps| execute(cli.command, &caps)).and_then(|o| {
        if let Some((path, body)) = &o.file {
            std::fs::write(path, body)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        }
        Ok(o.stdout)
    });
    match result {
        Ok(s) => match out.write_all(s.as_bytes()) {
            Ok(()) => 0,
            Err(_) => 2,
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
