//! The `bns` command line.
//!
//! Exit codes: 0 computed (and true, for predicates), 1 computed and false,
//! 2 usage or input error, 3 budget exceeded or inconclusive.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use bns_core::cayley::{self, CayleyError, VerdictTag};
use bns_core::characters::{Character, IntegerCharacterMatrix};
use bns_core::complex;
use bns_core::graph::SimplicialGraph;
use bns_core::sigma;
use bns_core::words::{RewritingSystem, Word};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "bns", version, about = "BNS invariants of graph groups")]
struct Cli {
    /// Output format; defaults to text for normal-form and cayley dot, json otherwise.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summary of a graph.
    Info(GraphArg),
    /// Normal form of a word.
    NormalForm(WordArgs),
    /// Whether two words are equal in the group.
    WordEq {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        other: String,
    },
    /// Membership in Σ¹.
    Sigma1 {
        #[command(subcommand)]
        action: Sigma1Action,
    },
    /// Finite generation of kernels.
    KernelFg {
        #[command(subcommand)]
        action: KernelAction,
    },
    /// Which higher invariants are known to agree with Σ¹.
    Stability(GraphArg),
    /// Brute-force Cayley graph checks.
    Cayley {
        #[command(subcommand)]
        action: CayleyAction,
    },
    /// Cell counts and vertex links of the cube complex.
    Complex {
        #[command(subcommand)]
        action: ComplexAction,
    },
}

#[derive(Subcommand, Debug)]
enum Sigma1Action {
    /// Every open simplex of the character sphere and whether it is a member.
    Enumerate(GraphArg),
    /// Whether one character is a member.
    Contains(CharArgs),
}

#[derive(Subcommand, Debug)]
enum KernelAction {
    /// Kernel of a single character.
    Rational(CharArgs),
    /// Kernel of a map onto Z^n given by an integer matrix.
    Zn {
        #[command(flatten)]
        graph: GraphArg,
        /// Matrix JSON: {"vertex": [c1, c2, ...], ...}; omitted vertices are zero rows.
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum CayleyAction {
    /// Connectivity of the nonnegative part of a Cayley ball.
    Check {
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, default_value_t = cayley::DEFAULT_PADDING)]
        padding: usize,
        #[arg(long, default_value_t = cayley::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// A path to a group element staying where the character is nonnegative.
    Path {
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long)]
        word: String,
    },
    /// DOT rendering of the nonnegative part of a ball.
    Dot {
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = cayley::DEFAULT_BUDGET)]
        budget: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ComplexAction {
    Counts(GraphArg),
    Link(GraphArg),
    Flag(GraphArg),
}

#[derive(Args, Debug)]
struct GraphArg {
    /// Graph JSON: {"vertices": [...], "edges": [[a, b], ...]}.
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args, Debug)]
struct CharArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Character JSON: {"vertex": value, ...}; omitted vertices are 0.
    #[arg(long = "char")]
    chi: PathBuf,
}

#[derive(Args, Debug)]
struct WordArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Space-separated letters such as "x y^-1".
    #[arg(long)]
    word: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    field: &'static str,
    message: String,
}

impl Failure {
    fn input(field: &'static str, message: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT,
            field,
            message: message.to_string(),
        }
    }

    fn undecided(field: &'static str, message: impl ToString) -> Self {
        Failure {
            code: EXIT_UNDECIDED,
            field,
            message: message.to_string(),
        }
    }
}

struct Outcome {
    value: Value,
    /// Replaces the generic rendering under `--format text`.
    text: Option<String>,
    default_format: Format,
    code: i32,
}

impl Outcome {
    fn json(value: Value, code: i32) -> Self {
        Outcome {
            value,
            text: None,
            default_format: Format::Json,
            code,
        }
    }

    fn predicate(value: Value, holds: bool) -> Self {
        Outcome::json(value, if holds { EXIT_TRUE } else { EXIT_FALSE })
    }

    fn with_text(mut self, text: String, default_format: Format) -> Self {
        self.text = Some(text);
        self.default_format = default_format;
        self
    }
}

/// Parses `args` (program name first), writes the result to `out` and any
/// diagnostic to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_TRUE };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(outcome) => {
            let format = cli.format.unwrap_or(outcome.default_format);
            let rendered = match (format, &outcome.text) {
                (Format::Json, _) => to_spaced_json(&outcome.value),
                (Format::Text, Some(text)) => text.clone(),
                (Format::Text, None) => render_text(&outcome.value),
            };
            if writeln!(out, "{}", rendered.trim_end_matches('\n')).is_err() {
                return EXIT_INPUT;
            }
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}: {}", f.field, f.message);
            f.code
        }
    }
}

fn read(path: &Path, field: &'static str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(field, format!("cannot read {}: {e}", path.display())))
}

fn load_graph(arg: &GraphArg) -> Result<SimplicialGraph, Failure> {
    SimplicialGraph::from_json(&read(&arg.graph, "--graph")?).map_err(|e| Failure::input("--graph", e))
}

fn load_char(args: &CharArgs) -> Result<(SimplicialGraph, Character), Failure> {
    let g = load_graph(&args.graph)?;
    let chi = Character::from_json(&g, &read(&args.chi, "--char")?).map_err(|e| Failure::input("--char", e))?;
    Ok((g, chi))
}

fn parse_word(g: &SimplicialGraph, text: &str, field: &'static str) -> Result<Word, Failure> {
    Word::parse(text, g).map_err(|e| Failure::input(field, e))
}

fn cayley_failure(e: CayleyError) -> Failure {
    match e {
        CayleyError::BudgetExceeded { .. } => Failure::undecided("--budget", e),
        CayleyError::ZeroRadius => Failure::input("--radius", e),
        CayleyError::Precondition(_) => Failure::input("--char", e),
        CayleyError::Overflow | CayleyError::VertexCountMismatch { .. } => Failure::input("--char", e),
        CayleyError::ConstructionFailed(_) => Failure::undecided("--word", e),
    }
}

fn word_text(g: &SimplicialGraph, w: &Word) -> String {
    w.to_text(g)
}

fn dispatch(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Info(arg) => {
            let g = load_graph(arg)?;
            let cliques = g.maximal_cliques();
            Ok(Outcome::json(
                json!({
                    "vertices": g.vertices(),
                    "edges": g.edges().iter().map(|&(a, b)| [g.name(a), g.name(b)]).collect::<Vec<_>>(),
                    "vertex_count": g.vertex_count(),
                    "edge_count": g.edge_count(),
                    "connected": g.is_connected(),
                    "complete": g.is_complete(),
                    "chordal": g.is_chordal(),
                    "clique_number": cliques.iter().map(|c| c.len()).max().unwrap_or(0),
                    "maximal_cliques": cliques.iter().map(|&c| g.names_of(c)).collect::<Vec<_>>(),
                }),
                EXIT_TRUE,
            ))
        }
        Command::NormalForm(args) => {
            let g = load_graph(&args.graph)?;
            let w = parse_word(&g, &args.word, "--word")?;
            let rs = RewritingSystem::new(&g);
            let (blocks, steps) = rs.reduce(bns_core::words::lift(&w));
            let nf = blocks.to_word();
            let text = word_text(&g, &nf);
            let value = json!({
                "normal_form": text,
                "blocks": blocks.blocks().iter().map(|b| b.letters().map(|l| l.to_text(&g)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "length": nf.len(),
                "steps": steps,
            });
            Ok(Outcome::json(value, EXIT_TRUE).with_text(text, Format::Text))
        }
        Command::WordEq { word, other } => {
            let g = load_graph(&word.graph)?;
            let a = parse_word(&g, &word.word, "--word")?;
            let b = parse_word(&g, other, "--other")?;
            let rs = RewritingSystem::new(&g);
            let (na, nb) = (rs.normal_form(&a), rs.normal_form(&b));
            let equal = na == nb;
            Ok(Outcome::predicate(
                json!({
                    "equal": equal,
                    "normal_forms": [word_text(&g, &na), word_text(&g, &nb)],
                }),
                equal,
            ))
        }
        Command::Sigma1 { action } => match action {
            Sigma1Action::Enumerate(arg) => {
                let g = load_graph(arg)?;
                let report = sigma::sigma1_enumerate(&g);
                Ok(Outcome::json(
                    json!({
                        "total_simplices": report.total_simplices,
                        "member_count": report.member_simplices.len(),
                        "empty": report.is_empty,
                        "closure_is_sphere": report.closure_is_sphere,
                        "members": report.member_simplices.iter().map(|s| s.describe(&g)).collect::<Vec<_>>(),
                        "excluded_supports": report.excluded_supports(&g).into_iter().map(|s| g.names_of(s)).collect::<Vec<_>>(),
                    }),
                    EXIT_TRUE,
                ))
            }
            Sigma1Action::Contains(args) => {
                let (g, chi) = load_char(args)?;
                let member = sigma::sigma1_contains_character(&g, &chi).map_err(|e| Failure::input("--char", e))?;
                Ok(Outcome::predicate(
                    json!({"member": member, "living_subgraph": g.names_of(chi.support())}),
                    member,
                ))
            }
        },
        Command::KernelFg { action } => match action {
            KernelAction::Rational(args) => {
                let (g, chi) = load_char(args)?;
                let fg = sigma::kernel_fg_rational(&g, &chi).map_err(|e| Failure::input("--char", e))?;
                Ok(Outcome::predicate(
                    json!({"finitely_generated": fg, "living_subgraph": g.names_of(chi.support())}),
                    fg,
                ))
            }
            KernelAction::Zn { graph, matrix } => {
                let g = load_graph(graph)?;
                let m = IntegerCharacterMatrix::from_json(&g, &read(matrix, "--matrix")?)
                    .map_err(|e| Failure::input("--matrix", e))?;
                let report = sigma::kernel_fg_zn_report(&g, &m).map_err(|e| Failure::input("--matrix", e))?;
                let fg = report.finitely_generated;
                Ok(Outcome::predicate(to_value(&report), fg))
            }
        },
        Command::Stability(arg) => {
            let g = load_graph(arg)?;
            let class = sigma::stability_class(&g);
            Ok(Outcome::json(
                json!({"class": class.tag, "witness": class.describe(&g)}),
                EXIT_TRUE,
            ))
        }
        Command::Cayley { action } => match action {
            CayleyAction::Check {
                chi,
                radius,
                padding,
                budget,
            } => {
                let (g, chi) = load_char(chi)?;
                let verdict = cayley::connectivity_verdict_with_budget(&g, &chi, *radius, *padding, *budget)
                    .map_err(cayley_failure)?;
                let code = match verdict.tag {
                    VerdictTag::ConsistentConnected => EXIT_TRUE,
                    VerdictTag::WitnessDisconnected => EXIT_FALSE,
                    VerdictTag::Inconclusive => EXIT_UNDECIDED,
                };
                Ok(Outcome::json(to_value(&verdict.report(&g)), code))
            }
            CayleyAction::Path { chi, word } => {
                let (g, chi) = load_char(chi)?;
                let target = parse_word(&g, word, "--word")?;
                let path = cayley::positive_path(&g, &chi, &target).map_err(cayley_failure)?;
                let text = word_text(&g, &path);
                Ok(Outcome::json(
                    json!({"target": word_text(&g, &target), "path": text, "length": path.len()}),
                    EXIT_TRUE,
                ))
            }
            CayleyAction::Dot { chi, radius, budget } => {
                let (g, chi) = load_char(chi)?;
                let ball = cayley::build_ball_with_budget(&g, *radius, *budget).map_err(cayley_failure)?;
                let dot = cayley::emit_dot(&cayley::positive_slice(&ball, &chi));
                Ok(Outcome::json(json!({"dot": dot}), EXIT_TRUE).with_text(dot, Format::Text))
            }
        },
        Command::Complex { action } => match action {
            ComplexAction::Counts(arg) => {
                let g = load_graph(arg)?;
                Ok(Outcome::json(
                    json!({
                        "counts": complex::cell_counts(&g).counts,
                        "euler_characteristic": complex::euler_characteristic(&g),
                    }),
                    EXIT_TRUE,
                ))
            }
            ComplexAction::Link(arg) => {
                let g = load_graph(arg)?;
                Ok(Outcome::json(to_value(&complex::vertex_link(&g).report()), EXIT_TRUE))
            }
            ComplexAction::Flag(arg) => {
                let g = load_graph(arg)?;
                let flag = complex::is_flag(&complex::vertex_link(&g));
                Ok(Outcome::predicate(json!({"flag": flag}), flag))
            }
        },
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

/// JSON with `": "` and `", "` between object members and compact arrays,
/// e.g. `{"member": true, "living_subgraph": ["x","y"]}`.
pub fn to_spaced_json(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SpacedFormatter);
    value.serialize(&mut ser).expect("in-memory write");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

struct SpacedFormatter;

impl serde_json::ser::Formatter for SpacedFormatter {
    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            writer.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        writer.write_all(b": ")
    }
}

fn render_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            items.iter().map(render_scalar).collect::<Vec<_>>().join(" ")
        }
        other => serde_json::to_string(other).expect("value"),
    }
}

/// One `key: value` line per top-level field; arrays of records become
/// indented rows.
fn render_text(value: &Value) -> String {
    let Value::Object(map) = value else {
        return render_scalar(value);
    };
    let width = map.keys().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for (key, v) in map {
        match v {
            Value::Array(items) if items.iter().any(|i| i.is_array() || i.is_object()) => {
                out.push_str(&format!("{key}:\n"));
                for item in items {
                    let row = match item {
                        Value::Object(fields) => fields
                            .iter()
                            .map(|(k, x)| format!("{k}={}", render_scalar(x)))
                            .collect::<Vec<_>>()
                            .join("  "),
                        Value::Array(parts) => format!(
                            "{{{}}}",
                            parts.iter().map(render_scalar).collect::<Vec<_>>().join(", ")
                        ),
                        other => render_scalar(other),
                    };
                    out.push_str(&format!("  {row}\n"));
                }
            }
            other => out.push_str(&format!("{key:width$}  {}\n", render_scalar(other))),
        }
    }
    out
}
