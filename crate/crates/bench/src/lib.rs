//! Shared fixtures for the benchmarks.

use lambek_core::{bundled, parse_sequent, Grammar, InjectionContext, Sequent, Symbol};

pub fn boolean() -> Grammar {
    bundled::boolean()
}

/// Sequents of increasing search effort over the boolean grammar.
pub fn sequents(g: &Grammar) -> Vec<(&'static str, Sequent)> {
    [
        ("test", "a , = , b |- T"),
        ("attack", "b , OR , 1 , = , 1 |- (T/V)\\E"),
        ("reversed", "1 , = , 1 , OR , b |- E/(V\\T)"),
        ("conjunction", "a , = , b , AND , b , = , 1 , OR , a , = , a |- E"),
        ("refuted", "b , OR , 1 , = , 1 |- V"),
    ]
    .into_iter()
    .map(|(name, s)| (name, parse_sequent(s, g).expect("fixture parses")))
    .collect()
}

/// The `a = □` context with an expected value.
pub fn login_context(g: &Grammar) -> InjectionContext {
    InjectionContext::new(
        g,
        g.word("a =").expect("fixture word"),
        g.word("").expect("fixture word"),
        Symbol::nonterminal("E"),
        Symbol::nonterminal("V"),
    )
    .expect("fixture context")
}
