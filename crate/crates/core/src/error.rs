use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate `start` directive")]
    DuplicateStart { line: usize },
    #[error("missing `start` directive")]
    MissingStart,
    #[error("undeclared symbol `{0}`")]
    Undeclared(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` is used both as a terminal and as a nonterminal")]
    KindClash(String),
    #[error("duplicate production `{0}`")]
    DuplicateProduction(String),
    #[error("start symbol `{0}` derives no word")]
    UselessStart(String),
}

/// Errors from the type and sequent syntax.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("at column {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
}

impl SyntaxError {
    pub(crate) fn at(pos: usize, message: impl Into<String>) -> Self {
        SyntaxError::Parse {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TacticError {
    #[error("type mismatch: expected {expected}, found {found}")]
    Mismatch { expected: String, found: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("`{0}` is not a nonterminal of the grammar")]
    NotANonterminal(String),
    #[error("the context does not parse as {goal} with a {expected} in the hole")]
    InvalidContext { goal: String, expected: String },
    #[error("ambiguous parse of `{0}`")]
    Ambiguous(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofFormatError {
    #[error("malformed proof JSON: {0}")]
    Malformed(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}
