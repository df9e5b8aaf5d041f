//! Injection analysis: an input spliced into `prefix □ suffix` is benign when
//! it has the type the hole expects, and capturing when instead it only has
//! a type-raised form of it that consumes the surrounding context.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::AnalysisError;
use crate::grammar::{enumerate_words, Grammar, Symbol, Word};
use crate::parser::{derives_form, extend_with_hole, parse_tree, recognize, ParseOutcome, ParseTree};
use crate::proof::{proof_to_json, ProofTree};
use crate::prover::{prove, SearchConfig};
use crate::semantics::SemBound;
use crate::tactics::Side;
use crate::types::{type_universe, LambekType, Sequent, TypeContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectionContext {
    pub prefix: Word,
    pub suffix: Word,
    pub goal: Symbol,
    pub expected: Symbol,
}

impl InjectionContext {
    /// Checks that both symbols are nonterminals and that
    /// `prefix expected suffix` derives from `goal`.
    pub fn new(g: &Grammar, prefix: Word, suffix: Word, goal: Symbol, expected: Symbol) -> Result<Self, AnalysisError> {
        for s in [&goal, &expected] {
            if !s.is_nonterminal() || !g.contains(s) {
                return Err(AnalysisError::NotANonterminal(s.name().to_string()));
            }
        }
        let mut form = prefix.tokens().to_vec();
        form.push(expected.clone());
        form.extend_from_slice(suffix.tokens());
        if !derives_form(g, &goal, &form) {
            return Err(AnalysisError::InvalidContext {
                goal: goal.name().to_string(),
                expected: expected.name().to_string(),
            });
        }
        Ok(InjectionContext {
            prefix,
            suffix,
            goal,
            expected,
        })
    }

    pub fn fill(&self, w: &Word) -> Word {
        self.prefix.concat(w).concat(&self.suffix)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaptureTyping {
    pub direction: Side,
    /// `(ψ/expected)\π` on the left, `π/(expected\ψ)` on the right.
    pub full_type: LambekType,
    pub proof: ProofTree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Benign,
    Capturing,
    IllFormed,
    Unknown,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Benign => "Benign",
            Classification::Capturing => "Capturing",
            Classification::IllFormed => "IllFormed",
            Classification::Unknown => "Unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reshaping {
    /// The combined tree is the context tree with a subtree in the hole.
    ConservativeExtension(ParseTree),
    Reshaped {
        context_tree: ParseTree,
        combined_tree: ParseTree,
    },
    Unparseable,
}

impl Reshaping {
    pub fn verdict(&self) -> &'static str {
        match self {
            Reshaping::ConservativeExtension(_) => "ConservativeExtension",
            Reshaping::Reshaped { .. } => "Reshaped",
            Reshaping::Unparseable => "Unparseable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectionReport {
    pub classification: Classification,
    pub input: Word,
    pub context: InjectionContext,
    pub benign_proof: Option<ProofTree>,
    pub captures: Vec<CaptureTyping>,
    pub combined_parses: bool,
    pub reshaping: Reshaping,
    pub config: SearchConfig,
    pub bound: SemBound,
}

fn tokens_json(w: &Word) -> Value {
    json!(w.tokens().iter().map(|t| t.name().to_string()).collect::<Vec<_>>())
}

impl InjectionReport {
    pub fn to_json(&self) -> Value {
        let mut reshaping = json!({ "verdict": self.reshaping.verdict() });
        match &self.reshaping {
            Reshaping::ConservativeExtension(t) => {
                reshaping["combined_tree"] = t.to_json();
            }
            Reshaping::Reshaped {
                context_tree,
                combined_tree,
            } => {
                reshaping["context_tree"] = context_tree.to_json();
                reshaping["combined_tree"] = combined_tree.to_json();
            }
            Reshaping::Unparseable => {}
        }
        let mut out = json!({
            "classification": self.classification.as_str(),
            "input": tokens_json(&self.input),
            "context": {
                "prefix": tokens_json(&self.context.prefix),
                "suffix": tokens_json(&self.context.suffix),
                "goal": self.context.goal.name(),
                "expected": self.context.expected.name(),
            },
        });
        if let Some(p) = &self.benign_proof {
            out["benign_proof"] = proof_to_json(p);
        }
        out["captures"] = json!(self
            .captures
            .iter()
            .map(|c| json!({
                "direction": match c.direction { Side::Left => "Left", Side::Right => "Right" },
                "type": c.full_type.to_string(),
                "proof": proof_to_json(&c.proof),
            }))
            .collect::<Vec<_>>());
        out["combined_parses"] = json!(self.combined_parses);
        out["reshaping"] = reshaping;
        out["bounds"] = json!({
            "max_depth": self.config.max_depth,
            "insert_budget": self.config.insert_budget,
            "enable_general_cut": self.config.enable_general_cut,
            "cut_formula_depth": self.config.cut_formula_depth,
            "max_len": self.bound.max_len,
        });
        out
    }
}

/// Words of length at most `out_len` that complete the context to a word of
/// the goal category.
pub fn hole_language(g: &Grammar, ctx: &InjectionContext, out_len: usize) -> BTreeSet<Word> {
    let (u, s) = (ctx.prefix.tokens(), ctx.suffix.tokens());
    enumerate_words(g, &ctx.goal, u.len() + s.len() + out_len)
        .into_iter()
        .filter_map(|x| {
            let t = x.tokens();
            let fits = t.len() >= u.len() + s.len() && t.starts_with(u) && t.ends_with(s);
            fits.then(|| Word(t[u.len()..t.len() - s.len()].to_vec()))
        })
        .filter(|w| w.len() <= out_len)
        .collect()
}

/// Every type of the universe over `atoms` that the word provably has, in
/// universe order.
pub fn infer_typings(
    g: &Grammar,
    w: &Word,
    atoms: &[Symbol],
    depth: usize,
    cfg: &SearchConfig,
) -> Result<Vec<(LambekType, ProofTree)>, crate::error::SyntaxError> {
    let universe = type_universe(g, atoms, depth)?;
    let ctx = TypeContext::from_word(w);
    Ok(universe
        .into_par_iter()
        .filter_map(|t| {
            let s = Sequent::new(ctx.clone(), t.clone());
            prove(g, &s, cfg).into_proof().map(|p| (t, p))
        })
        .collect())
}

pub fn classify_input(
    g: &Grammar,
    ctx: &InjectionContext,
    w: &Word,
    cfg: &SearchConfig,
    b: &SemBound,
) -> Result<InjectionReport, AnalysisError> {
    classify_input_with_depth(g, ctx, w, cfg, b, 0)
}

/// [`classify_input`] with the ψ and π of the capture shapes drawn from the
/// type universe over the nonterminals at `capture_depth` (0: nonterminals
/// only).
pub fn classify_input_with_depth(
    g: &Grammar,
    ctx: &InjectionContext,
    w: &Word,
    cfg: &SearchConfig,
    b: &SemBound,
    capture_depth: usize,
) -> Result<InjectionReport, AnalysisError> {
    let input = TypeContext::from_word(w);
    let expected = LambekType::Atom(ctx.expected.clone());
    let benign_proof = prove(g, &Sequent::new(input.clone(), expected), cfg).into_proof();
    let captures = if benign_proof.is_some() {
        Vec::new()
    } else {
        find_captures(g, ctx, &input, cfg, capture_depth)
    };
    let combined_parses = recognize(g, &ctx.goal, &ctx.fill(w));
    let reshaping = reshaping_check(g, ctx, w)?;
    let classification = if benign_proof.is_some() {
        Classification::Benign
    } else if !captures.is_empty() {
        Classification::Capturing
    } else if !combined_parses {
        Classification::IllFormed
    } else {
        Classification::Unknown
    };
    Ok(InjectionReport {
        classification,
        input: w.clone(),
        context: ctx.clone(),
        benign_proof,
        captures,
        combined_parses,
        reshaping,
        config: cfg.clone(),
        bound: b.clone(),
    })
}

// A capture only counts if the context can actually be consumed: on the
// left the prefix must be a ψ missing its expected word and the suffix must
// extend a π to the goal; on the right symmetrically.
fn find_captures(
    g: &Grammar,
    ctx: &InjectionContext,
    input: &TypeContext,
    cfg: &SearchConfig,
    capture_depth: usize,
) -> Vec<CaptureTyping> {
    let universe: Vec<LambekType> = type_universe(g, g.nonterminals(), capture_depth)
        .unwrap_or_default()
        .into_iter()
        .filter(|t| *t != LambekType::Unit)
        .collect();
    let expected = LambekType::Atom(ctx.expected.clone());
    let goal = LambekType::Atom(ctx.goal.clone());
    let prefix = TypeContext::from_word(&ctx.prefix);
    let suffix = TypeContext::from_word(&ctx.suffix);

    let mut candidates = Vec::new();
    for side in [Side::Left, Side::Right] {
        for psi in &universe {
            for pi in &universe {
                candidates.push((side, psi.clone(), pi.clone()));
            }
        }
    }
    let proves = |s: Sequent| prove(g, &s, cfg).is_proved();
    candidates
        .into_par_iter()
        .filter_map(|(side, psi, pi)| {
            let (full, context_ok) = match side {
                Side::Left => {
                    let hungry = LambekType::over(psi.clone(), expected.clone());
                    let full = LambekType::under(hungry.clone(), pi.clone());
                    let ok = || {
                        proves(Sequent::new(prefix.clone(), hungry.clone()))
                            && proves(Sequent::new(
                                suffix.splice(0, 0, std::slice::from_ref(&pi)),
                                goal.clone(),
                            ))
                    };
                    (full, ok())
                }
                Side::Right => {
                    let hungry = LambekType::under(expected.clone(), psi.clone());
                    let full = LambekType::over(pi.clone(), hungry.clone());
                    let n = prefix.len();
                    let ok = || {
                        proves(Sequent::new(suffix.clone(), hungry.clone()))
                            && proves(Sequent::new(
                                prefix.splice(n, n, std::slice::from_ref(&pi)),
                                goal.clone(),
                            ))
                    };
                    (full, ok())
                }
            };
            if !context_ok {
                return None;
            }
            let proof = prove(g, &Sequent::new(input.clone(), full.clone()), cfg).into_proof()?;
            Some(CaptureTyping {
                direction: side,
                full_type: full,
                proof,
            })
        })
        .collect()
}

/// Compares the parse of `prefix w suffix` against the parse of the context
/// with a hole token in place of `w`.
pub fn reshaping_check(g: &Grammar, ctx: &InjectionContext, w: &Word) -> Result<Reshaping, AnalysisError> {
    let combined = ctx.fill(w);
    let full = match parse_tree(g, &ctx.goal, &combined) {
        ParseOutcome::Unique(t) => t,
        ParseOutcome::Ambiguous(..) => return Err(AnalysisError::Ambiguous(combined.to_string())),
        ParseOutcome::Reject => return Ok(Reshaping::Unparseable),
    };
    let (gx, mark) = extend_with_hole(g, &ctx.expected).map_err(|e| AnalysisError::Internal(e.to_string()))?;
    let holed = ctx.fill(&Word(vec![mark.fresh_token.clone()]));
    let context_tree = match parse_tree(&gx, &ctx.goal, &holed) {
        ParseOutcome::Unique(t) => t,
        ParseOutcome::Ambiguous(..) => return Err(AnalysisError::Ambiguous(holed.to_string())),
        ParseOutcome::Reject => {
            return Err(AnalysisError::InvalidContext {
                goal: ctx.goal.name().to_string(),
                expected: ctx.expected.name().to_string(),
            })
        }
    };
    let hole = ParseTree::node(&gx, mark.production, vec![ParseTree::Leaf(mark.fresh_token.clone())]);
    let (from, to) = (ctx.prefix.len(), ctx.prefix.len() + w.len());
    let fits = full.nodes_with_spans().into_iter().any(|(path, node, i, j)| {
        matches!(node, ParseTree::Node { .. })
            && node.symbol() == Some(&ctx.expected)
            && (i, j) == (from, to)
            && full.replace_at(&path, &hole).isomorphic(&context_tree)
    });
    Ok(if fits {
        Reshaping::ConservativeExtension(full)
    } else {
        Reshaping::Reshaped {
            context_tree,
            combined_tree: full,
        }
    })
}
