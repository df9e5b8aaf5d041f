//! Lambek calculus over context-free grammars.
//!
//! A grammar's productions become axioms of the calculus, so that a word
//! can be typed not just by the nonterminals that derive it but by the ways
//! it combines with its neighbours. [`prover::prove`] searches for proofs,
//! [`semantics`] refutes sequents by bounded enumeration of languages, and
//! [`analyzer`] uses both to classify inputs spliced into a context.

pub mod analyzer;
pub mod bundled;
pub mod error;
pub mod grammar;
pub mod parser;
pub mod proof;
pub mod prover;
pub mod semantics;
pub mod tactics;
pub mod types;

pub use analyzer::{
    classify_input, classify_input_with_depth, hole_language, infer_typings, reshaping_check, CaptureTyping,
    Classification, InjectionContext, InjectionReport, Reshaping,
};
pub use error::{AnalysisError, GrammarError, ProofFormatError, SyntaxError, TacticError};
pub use grammar::{
    enumerate_words, longest_word, nullable_set, parse_grammar_file, validate, Grammar, Production, Symbol, SymbolKind,
    Word,
};
pub use parser::{check_unambiguous, extend_with_hole, parse_tree, recognize, Ambiguity, ParseOutcome, ParseTree};
pub use proof::{
    check_proof, check_proof_with_axioms, render_proof, CheckResult, Detail, ProofFormat, ProofTree, RuleName,
};
pub use prover::{prove, prove_with_axioms, SearchConfig, SearchResult};
pub use semantics::{
    context_denotation_bounded, denotation_bounded, member_bounded, soundness_check, Oracle, SemBound, Soundness,
};
pub use tactics::{dni, elim_over, elim_under, Side};
pub use types::{parse_sequent, parse_type, subtype_as_sequent, type_universe, LambekType, Sequent, TypeContext};
