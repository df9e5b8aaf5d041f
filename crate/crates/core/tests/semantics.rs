use std::collections::BTreeSet;

use lambek_core::bundled;
use lambek_core::semantics::all_words;
use lambek_core::{
    context_denotation_bounded, denotation_bounded, enumerate_words, member_bounded, parse_sequent, parse_type, prove,
    type_universe, LambekType, Oracle, SearchConfig, SemBound, Soundness, Symbol, TypeContext, Word,
};

#[test]
fn atoms_agree_with_the_grammar() {
    let g = bundled::boolean();
    let b = SemBound::new(&g, 4);
    for x in g.nonterminals() {
        let t = LambekType::Atom(x.clone());
        assert_eq!(denotation_bounded(&g, &t, &b, 4), enumerate_words(&g, x, 4), "{x}");
    }
}

#[test]
fn contexts() {
    let g = bundled::boolean();
    let b = SemBound::new(&g, 4);
    let ws = |xs: &[&str]| xs.iter().map(|w| g.word(w).unwrap()).collect::<BTreeSet<Word>>();
    let ctx = TypeContext::new(vec![
        LambekType::Atom(Symbol::terminal("a")),
        LambekType::Atom(Symbol::terminal("=")),
        parse_type("V", &g).unwrap(),
    ]);
    assert_eq!(
        context_denotation_bounded(&g, &ctx, &b, 5),
        ws(&["a = 1", "a = a", "a = b"])
    );
    assert_eq!(
        context_denotation_bounded(&g, &TypeContext::empty(), &b, 5),
        BTreeSet::from([Word::empty()])
    );
    let unit_v = TypeContext::new(vec![LambekType::Unit, parse_type("V", &g).unwrap()]);
    assert_eq!(context_denotation_bounded(&g, &unit_v, &b, 5), ws(&["1", "a", "b"]));
}

#[test]
fn unit_laws() {
    let g = bundled::boolean();
    let b = SemBound::new(&g, 4);
    for s in ["T", "V\\T", "T/V"] {
        let t = parse_type(s, &g).unwrap();
        let d = denotation_bounded(&g, &t, &b, 4);
        for u in [
            LambekType::prod(LambekType::Unit, t.clone()),
            LambekType::prod(t.clone(), LambekType::Unit),
        ] {
            assert_eq!(denotation_bounded(&g, &u, &b, 4), d, "{u}");
        }
    }
    assert_eq!(
        denotation_bounded(&g, &LambekType::Unit, &b, 3),
        BTreeSet::from([Word::empty()])
    );
}

#[test]
fn implications_are_antitone_in_their_argument() {
    let g = bundled::boolean();
    let b = SemBound::new(&g, 4);
    // L(T) is contained in L(C), so C\E is contained in T\E.
    let narrow = denotation_bounded(&g, &parse_type("C\\E", &g).unwrap(), &b, 4);
    let wide = denotation_bounded(&g, &parse_type("T\\E", &g).unwrap(), &b, 4);
    assert!(narrow.is_subset(&wide));
    let narrow = denotation_bounded(&g, &parse_type("E/C", &g).unwrap(), &b, 4);
    let wide = denotation_bounded(&g, &parse_type("E/T", &g).unwrap(), &b, 4);
    assert!(narrow.is_subset(&wide));
}

#[test]
fn memberships() {
    let g = bundled::boolean();
    let b = SemBound::new(&g, 6);
    let w = |s: &str| g.word(s).unwrap();
    let t = |s: &str| parse_type(s, &g).unwrap();
    assert!(member_bounded(&g, &w("b"), &t("V"), &b));
    assert!(!member_bounded(&g, &w("b OR 1 = 1"), &t("V"), &b));
    assert!(member_bounded(&g, &w("b OR 1 = 1"), &t("(T/V)\\E"), &b));
    assert!(member_bounded(&g, &w("1 = 1 OR b"), &t("E/(V\\T)"), &b));
    // With T ::= V = V only, a disjunction never yields a T.
    assert!(!member_bounded(&g, &w("OR 1 = 1"), &t("T\\T"), &b));
}

#[test]
fn negative_answers_survive_larger_bounds() {
    let g = bundled::boolean();
    let atoms: Vec<Symbol> = ["T", "V", "C"].iter().map(Symbol::nonterminal).collect();
    let universe = type_universe(&g, &atoms, 1).unwrap();
    let words = all_words(g.terminals(), 2);
    let (small, large) = (SemBound::new(&g, 3), SemBound::new(&g, 5));
    let (mut o3, mut o5) = (Oracle::new(&g, small), Oracle::new(&g, large));
    for t in &universe {
        for w in &words {
            if !o3.member(w, t) {
                assert!(!o5.member(w, t), "{w} in {t}");
            }
        }
    }
}

#[test]
fn proved_sequents_have_no_counterexample() {
    let g = bundled::boolean();
    let mut oracle = Oracle::new(&g, SemBound::new(&g, 6));
    let atoms: Vec<Symbol> = ["T", "V", "C", "E"].iter().map(Symbol::nonterminal).collect();
    let universe = type_universe(&g, &atoms, 1).unwrap();
    let cfg = SearchConfig::default();
    let mut checked = 0;
    for w in ["a = b", "AND a = b", "b OR 1 = 1", "a = b AND b = 1", "= 1"] {
        let ctx = TypeContext::from_word(&g.word(w).unwrap());
        for t in &universe {
            let s = lambek_core::Sequent::new(ctx.clone(), t.clone());
            if prove(&g, &s, &cfg).is_proved() {
                checked += 1;
                assert_eq!(oracle.soundness(&s, 6), Soundness::Pass, "{s}");
            }
        }
    }
    assert!(checked >= 10, "{checked}");
    let bad = parse_sequent("b , OR , 1 , = , 1 |- V", &g).unwrap();
    assert_eq!(
        oracle.soundness(&bad, 5),
        Soundness::Counterexample(g.word("b OR 1 = 1").unwrap())
    );
}
