//! The `lambek` command line. [`run`] does all the work and returns the exit
//! code and both output streams, so tests can drive it without a process.
//!
//! Exit codes: 0 for an affirmative answer (proved, benign, pass), 1 for a
//! negative one (not found, capturing, ill-formed, unknown, counterexample,
//! ambiguous), 2 for usage and input errors.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use lambek_core::analyzer::{classify_input, infer_typings, Classification, InjectionContext, Reshaping};
use lambek_core::grammar::{enumerate_words, parse_grammar_file, validate, Grammar, Symbol, Word};
use lambek_core::parser::{check_unambiguous, Ambiguity};
use lambek_core::proof::{proof_to_json, render_text};
use lambek_core::prover::{prove_with_axioms, SearchConfig, SearchResult};
use lambek_core::semantics::{SemBound, Soundness};
use lambek_core::types::{parse_sequent, Sequent};
use lambek_core::{bundled, semantics};
use serde_json::{json, Value};

/// Directory searched for relative grammar paths that do not exist.
pub const GRAMMAR_DIR_VAR: &str = "LAMBEK_GRAMMAR_DIR";

#[derive(Debug, Parser)]
#[command(name = "lambek", version, about = "Lambek calculus over context-free grammars")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a proof of a sequent; print PROVED or NOT FOUND.
    Check(ProveArgs),
    /// Like check, and always print the proof.
    Prove(ProveArgs),
    /// List the types of a word up to a connective depth.
    Infer(InferArgs),
    /// Classify an input spliced into a context with a hole.
    Analyze(AnalyzeArgs),
    /// Enumerate the words of a symbol.
    Enum(EnumArgs),
    /// Look for a counterexample to a sequent in the bounded semantics.
    Oracle(OracleArgs),
    /// Check that a symbol has no ambiguous word up to a length.
    Ambig(AmbigArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Grammar file; `bool.g` and `eng.g` resolve to the bundled grammars.
    #[arg(long, value_name = "FILE")]
    grammar: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 40)]
    max_depth: usize,
    #[arg(long, default_value_t = 2)]
    insert_budget: usize,
    /// Also try cuts on types of connective depth 1.
    #[arg(long)]
    general_cut: bool,
    /// Extra axiom, as a sequent; repeatable.
    #[arg(long = "axiom", value_name = "SEQUENT")]
    axioms: Vec<String>,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            max_depth: self.max_depth,
            insert_budget: self.insert_budget,
            enable_general_cut: self.general_cut,
            ..SearchConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct ProveArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    search: SearchArgs,
    /// Print the proof.
    #[arg(long)]
    tree: bool,
    /// `t1 , t2 , … |- t`; `-` reads it from stdin.
    sequent: Option<String>,
}

#[derive(Debug, Args)]
struct InferArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    search: SearchArgs,
    /// Connective depth of the candidate types.
    #[arg(long, default_value_t = 1)]
    depth: usize,
    /// Atoms of the candidate types; defaults to every nonterminal.
    #[arg(long, value_name = "NAMES")]
    atoms: Option<String>,
    #[arg(long)]
    tree: bool,
    word: Option<String>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, default_value = "")]
    prefix: String,
    #[arg(long, default_value = "")]
    suffix: String,
    #[arg(long)]
    goal: String,
    #[arg(long)]
    expect: String,
    /// `-` reads it from stdin.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, default_value_t = 4)]
    max_len: usize,
    #[arg(long)]
    tree: bool,
}

#[derive(Debug, Args)]
struct EnumArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 5)]
    max_len: usize,
    /// Defaults to the start symbol.
    symbol: Option<String>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    /// Longest test word.
    #[arg(long, default_value_t = 4)]
    max_len: usize,
    /// Longest antecedent word; defaults to --max-len.
    #[arg(long)]
    out_len: Option<usize>,
    sequent: Option<String>,
}

#[derive(Debug, Args)]
struct AmbigArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    symbol: Option<String>,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type Run = Result<(i32, String), Usage>;

/// Runs one invocation. `args` excludes the program name.
pub fn run(args: &[String], stdin: &str, env: &HashMap<String, String>) -> Outcome {
    let argv = std::iter::once("lambek".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut stderr = String::new();
    let result = dispatch(cli.command, stdin, env, &mut stderr);
    match result {
        Ok((code, stdout)) => Outcome { code, stdout, stderr },
        Err(Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            Outcome {
                code: 2,
                stdout: String::new(),
                stderr,
            }
        }
    }
}

fn dispatch(cmd: Command, stdin: &str, env: &HashMap<String, String>, stderr: &mut String) -> Run {
    match cmd {
        Command::Check(a) => {
            let g = load_grammar(&a.common.grammar, env, stderr)?;
            cmd_prove(&g, &a, stdin, a.tree)
        }
        Command::Prove(a) => {
            let g = load_grammar(&a.common.grammar, env, stderr)?;
            cmd_prove(&g, &a, stdin, true)
        }
        Command::Infer(a) => {
            let g = load_grammar(&a.common.grammar, env, stderr)?;
            cmd_infer(&g, &a, stdin)
        }
        Command::Analyze(a) => {
            let g = load_grammar(&a.common.grammar, env, stderr)?;
            cmd_analyze(&g, &a, stdin)
        }
        Command::Enum(a) => {
            let g = load_grammar(&a.common.grammar, env, stderr)?;
            cmd_enum(&g, &a)
        }
        Command::Oracle(a) => {
            let g = load_grammar(&a.common.grammar, env, stderr)?;
            cmd_oracle(&g, &a, stdin)
        }
        Command::Ambig(a) => {
            let g = load_grammar(&a.common.grammar, env, stderr)?;
            cmd_ambig(&g, &a)
        }
    }
}

fn load_grammar(path: &Path, env: &HashMap<String, String>, stderr: &mut String) -> Result<Grammar, Usage> {
    let mut candidates = vec![path.to_path_buf()];
    if path.is_relative() {
        if let Some(dir) = env.get(GRAMMAR_DIR_VAR) {
            candidates.push(Path::new(dir).join(path));
        }
    }
    let text = match candidates.iter().find_map(|p| std::fs::read_to_string(p).ok()) {
        Some(t) => t,
        None => {
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            match bundled::source(name) {
                Some(src) if path.components().count() == 1 => src.to_string(),
                _ => return Err(Usage(format!("cannot read grammar file `{}`", path.display()))),
            }
        }
    };
    let g = parse_grammar_file(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let (g, diagnostics) = validate(&g).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    for d in diagnostics {
        let _ = writeln!(stderr, "warning: {d}");
    }
    Ok(g)
}

fn positional_or_stdin(arg: &Option<String>, stdin: &str, what: &str) -> Result<String, Usage> {
    match arg.as_deref() {
        Some("-") if !stdin.trim().is_empty() => Ok(stdin.trim().to_string()),
        Some("-") => Err(Usage(format!("empty {what} on stdin"))),
        Some(s) => Ok(s.to_string()),
        None => Err(Usage(format!("missing {what}"))),
    }
}

fn parse_axioms(g: &Grammar, texts: &[String]) -> Result<Vec<Sequent>, Usage> {
    texts
        .iter()
        .map(|t| parse_sequent(t, g).map_err(|e| Usage(format!("axiom `{t}`: {e}"))))
        .collect()
}

fn json_out(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn words_json(w: &Word) -> Value {
    json!(w.tokens().iter().map(|t| t.name().to_string()).collect::<Vec<_>>())
}

fn cmd_prove(g: &Grammar, a: &ProveArgs, stdin: &str, show_tree: bool) -> Run {
    let text = positional_or_stdin(&a.sequent, stdin, "sequent")?;
    let s = parse_sequent(&text, g).map_err(|e| Usage(format!("sequent: {e}")))?;
    let axioms = parse_axioms(g, &a.search.axioms)?;
    let result = prove_with_axioms(g, &s, &axioms, &a.search.config());
    let (code, verdict) = match &result {
        SearchResult::Proved(_) => (0, "Proved"),
        SearchResult::NotFoundWithinBounds => (1, "NotFoundWithinBounds"),
        SearchResult::RefutedByOracle(_) => (1, "RefutedByOracle"),
    };
    if a.common.json {
        let mut v = json!({ "sequent": s.to_string(), "result": verdict });
        if let Some(t) = result.proof() {
            v["proof"] = proof_to_json(t);
        }
        return Ok((code, json_out(&v)));
    }
    let mut out = String::new();
    match &result {
        SearchResult::Proved(t) => {
            out.push_str("PROVED\n");
            if show_tree {
                out.push_str(&render_text(g, t));
            }
        }
        SearchResult::NotFoundWithinBounds => out.push_str("NOT FOUND WITHIN BOUNDS\n"),
        SearchResult::RefutedByOracle(w) => {
            let _ = writeln!(out, "REFUTED {w}");
        }
    }
    Ok((code, out))
}

fn parse_atoms(g: &Grammar, names: &Option<String>) -> Result<Vec<Symbol>, Usage> {
    match names {
        None => Ok(g.nonterminals().to_vec()),
        Some(text) => text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|n| g.lookup(n).ok_or_else(|| Usage(format!("unknown atom `{n}`"))))
            .collect(),
    }
}

fn cmd_infer(g: &Grammar, a: &InferArgs, stdin: &str) -> Run {
    let text = positional_or_stdin(&a.word, stdin, "word")?;
    let w = g.word(&text)?;
    let atoms = parse_atoms(g, &a.atoms)?;
    let typings = infer_typings(g, &w, &atoms, a.depth, &a.search.config())?;
    let code = if typings.is_empty() { 1 } else { 0 };
    if a.common.json {
        let v = json!({
            "word": words_json(&w),
            "typings": typings
                .iter()
                .map(|(t, p)| json!({ "type": t.to_string(), "proof": proof_to_json(p) }))
                .collect::<Vec<_>>(),
        });
        return Ok((code, json_out(&v)));
    }
    let mut out = String::new();
    for (t, p) in &typings {
        let _ = writeln!(out, "{t}");
        if a.tree {
            out.push_str(&render_text(g, p));
        }
    }
    Ok((code, out))
}

fn nonterminal(g: &Grammar, name: &str) -> Result<Symbol, Usage> {
    g.lookup(name)
        .filter(Symbol::is_nonterminal)
        .ok_or_else(|| Usage(format!("`{name}` is not a nonterminal of the grammar")))
}

fn cmd_analyze(g: &Grammar, a: &AnalyzeArgs, stdin: &str) -> Run {
    let input = positional_or_stdin(&a.input, stdin, "--input")?;
    let ctx = InjectionContext::new(
        g,
        g.word(&a.prefix)?,
        g.word(&a.suffix)?,
        nonterminal(g, &a.goal)?,
        nonterminal(g, &a.expect)?,
    )?;
    let w = g.word(&input)?;
    let bound = SemBound::new(g, a.max_len);
    let report = classify_input(g, &ctx, &w, &a.search.config(), &bound)?;
    let code = if report.classification == Classification::Benign {
        0
    } else {
        1
    };
    if a.common.json {
        return Ok((code, json_out(&report.to_json())));
    }
    let mut out = String::new();
    let _ = writeln!(out, "{}", report.classification.as_str().to_uppercase());
    if let Some(p) = &report.benign_proof {
        let _ = writeln!(out, "typing: {}", p.conclusion);
        if a.tree {
            out.push_str(&render_text(g, p));
        }
    }
    for c in &report.captures {
        let _ = writeln!(out, "capture ({:?}): {}", c.direction, c.full_type);
        if a.tree {
            out.push_str(&render_text(g, &c.proof));
        }
    }
    let _ = writeln!(out, "reshaping: {}", report.reshaping.verdict());
    if a.tree {
        match &report.reshaping {
            Reshaping::ConservativeExtension(t) => out.push_str(&t.render_text()),
            Reshaping::Reshaped {
                context_tree,
                combined_tree,
            } => {
                out.push_str("context:\n");
                out.push_str(&context_tree.render_text());
                out.push_str("combined:\n");
                out.push_str(&combined_tree.render_text());
            }
            Reshaping::Unparseable => {}
        }
    }
    Ok((code, out))
}

fn cmd_enum(g: &Grammar, a: &EnumArgs) -> Run {
    let sym = match &a.symbol {
        Some(n) => g.lookup(n).ok_or_else(|| Usage(format!("unknown symbol `{n}`")))?,
        None => g.start().clone(),
    };
    let mut words: Vec<Word> = enumerate_words(g, &sym, a.max_len).into_iter().collect();
    g.sort_words(&mut words);
    if a.common.json {
        let v = json!({
            "symbol": sym.name(),
            "max_len": a.max_len,
            "words": words.iter().map(words_json).collect::<Vec<_>>(),
        });
        return Ok((0, json_out(&v)));
    }
    let mut out = String::new();
    for w in &words {
        let _ = writeln!(out, "{w}");
    }
    Ok((0, out))
}

fn cmd_oracle(g: &Grammar, a: &OracleArgs, stdin: &str) -> Run {
    let text = positional_or_stdin(&a.sequent, stdin, "sequent")?;
    let s = parse_sequent(&text, g).map_err(|e| Usage(format!("sequent: {e}")))?;
    let bound = SemBound::new(g, a.max_len);
    let out_len = a.out_len.unwrap_or(a.max_len);
    let result = semantics::soundness_check(g, &s, &bound, out_len);
    let code = if result.is_pass() { 0 } else { 1 };
    if a.common.json {
        let mut v = json!({ "sequent": s.to_string(), "max_len": a.max_len, "out_len": out_len });
        match &result {
            Soundness::Pass => v["result"] = json!("Pass"),
            Soundness::Counterexample(w) => {
                v["result"] = json!("Counterexample");
                v["counterexample"] = words_json(w);
            }
        }
        return Ok((code, json_out(&v)));
    }
    Ok(match result {
        Soundness::Pass => (0, "PASS\n".to_string()),
        Soundness::Counterexample(w) => (1, format!("COUNTEREXAMPLE {w}\n")),
    })
}

fn cmd_ambig(g: &Grammar, a: &AmbigArgs) -> Run {
    let sym = match &a.symbol {
        Some(n) => nonterminal(g, n)?,
        None => g.start().clone(),
    };
    let result = check_unambiguous(g, &sym, a.max_len);
    if a.common.json {
        let v = match &result {
            Ambiguity::Pass => json!({ "symbol": sym.name(), "max_len": a.max_len, "result": "Pass" }),
            Ambiguity::Witness(w, t1, t2) => json!({
                "symbol": sym.name(),
                "max_len": a.max_len,
                "result": "Witness",
                "word": words_json(w),
                "trees": [t1.to_json(), t2.to_json()],
            }),
        };
        let code = if matches!(result, Ambiguity::Pass) { 0 } else { 1 };
        return Ok((code, json_out(&v)));
    }
    Ok(match result {
        Ambiguity::Pass => (0, "UNAMBIGUOUS\n".to_string()),
        Ambiguity::Witness(w, t1, t2) => (
            1,
            format!("AMBIGUOUS {w}\n{}--\n{}", t1.render_text(), t2.render_text()),
        ),
    })
}
