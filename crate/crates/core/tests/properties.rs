use proptest::prelude::*;

use lambek_core::bundled;
use lambek_core::{
    check_proof, parse_sequent, parse_type, prove, type_universe, Grammar, LambekType, SearchConfig, Sequent, Symbol,
    TypeContext,
};

fn atom() -> impl Strategy<Value = LambekType> {
    prop_oneof![
        Just(LambekType::Atom(Symbol::nonterminal("T"))),
        Just(LambekType::Atom(Symbol::nonterminal("V"))),
        Just(LambekType::Atom(Symbol::nonterminal("E"))),
        Just(LambekType::Atom(Symbol::terminal("1"))),
        Just(LambekType::Atom(Symbol::terminal("OR"))),
        Just(LambekType::Unit),
    ]
}

fn lambek_type() -> impl Strategy<Value = LambekType> {
    atom().prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LambekType::under(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LambekType::over(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| LambekType::prod(a, b)),
        ]
    })
}

fn small_sequent() -> impl Strategy<Value = Sequent> {
    (prop::collection::vec(atom(), 0..3), lambek_type()).prop_map(|(ant, t)| Sequent::new(TypeContext::new(ant), t))
}

fn grammar() -> Grammar {
    bundled::boolean()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rendered_types_parse_back(t in lambek_type()) {
        let g = grammar();
        prop_assert_eq!(parse_type(&t.to_string(), &g).unwrap(), t);
    }

    #[test]
    fn mirror_is_an_involution(t in lambek_type()) {
        prop_assert_eq!(t.mirror().mirror(), t.clone());
        prop_assert_eq!(t.mirror().size(), t.size());
        prop_assert_eq!(t.mirror().depth(), t.depth());
    }

    #[test]
    fn rendered_sequents_parse_back(s in small_sequent()) {
        let g = grammar();
        prop_assert_eq!(parse_sequent(&s.to_string(), &g).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn found_proofs_check(s in small_sequent()) {
        let g = grammar();
        let cfg = SearchConfig { max_depth: 12, ..SearchConfig::default() };
        if let Some(p) = prove(&g, &s, &cfg).into_proof() {
            prop_assert_eq!(&p.conclusion, &s);
            prop_assert!(check_proof(&g, &p).is_accept());
        }
    }
}

#[test]
fn universes_grow_with_depth() {
    let g = grammar();
    let atoms: Vec<Symbol> = ["T", "V"].iter().map(Symbol::nonterminal).collect();
    let d0 = type_universe(&g, &atoms, 0).unwrap();
    let d1 = type_universe(&g, &atoms, 1).unwrap();
    let d2 = type_universe(&g, &atoms, 2).unwrap();
    assert_eq!(d0.len(), 3);
    assert_eq!(d1.len(), 15);
    assert!(d0.iter().all(|t| d1.contains(t)));
    assert!(d1.iter().all(|t| d2.contains(t)));
    assert!(d2.iter().all(|t| t.depth() <= 2));
    for t in &d2 {
        assert_eq!(parse_type(&t.to_string(), &g).unwrap(), *t);
    }
}
