//! Grammars shipped with the crate.

use crate::grammar::{parse_grammar_file, Grammar};

pub const BOOL_SRC: &str = include_str!("../grammars/bool.g");
pub const ENG_SRC: &str = include_str!("../grammars/eng.g");

/// Boolean expressions: `E ::= C F`, `F ::= OR C F | ε`, `C ::= T D`,
/// `D ::= AND T D | ε`, `T ::= V = V`, `V ::= a | b | 1`.
pub fn boolean() -> Grammar {
    parse_grammar_file(BOOL_SRC).expect("bundled bool.g parses")
}

/// Subject-verb-object sentences over Alice, Bob, he and him.
pub fn english() -> Grammar {
    parse_grammar_file(ENG_SRC).expect("bundled eng.g parses")
}

/// Source of a bundled grammar by file name (`bool.g`, `eng.g`).
pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "bool.g" => Some(BOOL_SRC),
        "eng.g" => Some(ENG_SRC),
        _ => None,
    }
}
