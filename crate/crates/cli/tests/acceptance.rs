//! Acceptance suite: one PASS or FAIL line per criterion. Exits non-zero if
//! any criterion fails.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use lambek_cli::{run, Outcome};
use lambek_core::analyzer::{hole_language, InjectionContext};
use lambek_core::bundled;
use lambek_core::grammar::{enumerate_words, parse_grammar_file, Grammar, Symbol, Word};
use lambek_core::parser::{check_unambiguous, recognize, Ambiguity};
use lambek_core::proof::{check_proof, check_proof_with_axioms, ProofTree};
use lambek_core::prover::{prove, prove_with_axioms, SearchConfig};
use lambek_core::semantics::{all_words, denotation_bounded, member_bounded, Oracle, SemBound, Soundness};
use lambek_core::tactics::{dni, elim_over, elim_under, Side};
use lambek_core::types::{parse_sequent, parse_type, type_universe, LambekType, Sequent, TypeContext};
use serde_json::Value;

const BOOL: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/grammars/bool.g");
const ENG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/grammars/eng.g");

#[derive(Clone, Copy, PartialEq, Eq)]
enum Which {
    Bool,
    Eng,
}

/// Proved sequents gathered for the soundness sweep.
#[derive(Default)]
struct Proved(Vec<(Which, Sequent)>);

impl Proved {
    fn add(&mut self, which: Which, s: Sequent) {
        self.0.push((which, s));
    }
}

fn cli(args: &[&str]) -> Outcome {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    run(&args, "", &HashMap::new())
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or(Value::Null)
}

type Verdict = (bool, String);

fn criterion_1(proved: &mut Proved) -> Verdict {
    let g = bundled::boolean();
    let items = [
        "OR |- (T\\T)/T",
        "OR , 1 , = , 1 |- T\\T",
        "a , = |- T/V",
        "a , = , b |- T",
        "b , OR , 1 , = , 1 |- (T/V)\\E",
        "a , = , b , OR , 1 , = , 1 |- E",
        "1 , = , 1 , OR , b |- E/(V\\T)",
        "|- 1",
    ];
    let mut missing = Vec::new();
    for item in items {
        let out = cli(&["check", "--grammar", BOOL, "--json", item]);
        let v = json(&out);
        let s = parse_sequent(item, &g).expect("criterion sequent parses");
        if out.code == 0 && v["result"] == "Proved" {
            proved.add(Which::Bool, s);
        } else {
            let oracle = cli(&["oracle", "--grammar", BOOL, "--max-len", "5", item]);
            missing.push(format!("{item} (exit {}; oracle: {})", out.code, oracle.stdout.trim()));
        }
    }
    let detail = format!("{}/{} proved", items.len() - missing.len(), items.len());
    if missing.is_empty() {
        (true, detail)
    } else {
        (false, format!("{detail}; not derivable: {}", missing.join(", ")))
    }
}

fn criterion_2() -> Verdict {
    let g = bundled::boolean();
    let item = "b , OR , 1 , = , 1 |- V";
    let check = cli(&["check", "--grammar", BOOL, "--json", item]);
    let oracle = cli(&["oracle", "--grammar", BOOL, "--max-len", "5", "--json", item]);
    let ov = json(&oracle);
    let word = g.word("b OR 1 = 1").unwrap();
    let member = member_bounded(&g, &word, &parse_type("V", &g).unwrap(), &SemBound::new(&g, 5));
    let refuted = oracle.code == 1 && ov["result"] == "Counterexample";
    let cex: Vec<String> = ov["counterexample"]
        .as_array()
        .map(|a| a.iter().filter_map(|x| x.as_str().map(String::from)).collect())
        .unwrap_or_default();
    let ok = check.code == 1 && json(&check)["result"] == "NotFoundWithinBounds" && refuted && !member;
    (
        ok,
        format!(
            "check exit {}, oracle counterexample `{}`, member of V: {member}",
            check.code,
            cex.join(" ")
        ),
    )
}

fn has_shape(tree: &Value) -> bool {
    // E node with a child built by the OR production that dominates a T node.
    fn dominates_t(v: &Value) -> bool {
        v["sym"] == "T" || v["children"].as_array().is_some_and(|cs| cs.iter().any(dominates_t))
    }
    let g = bundled::boolean();
    let or_prod = g
        .productions()
        .iter()
        .position(|p| p.rhs.first().map(Symbol::name) == Some("OR"));
    tree["sym"] == "E"
        && tree["children"].as_array().is_some_and(|cs| {
            cs.iter()
                .any(|c| c["prod_index"].as_u64().map(|i| i as usize) == or_prod && dominates_t(c))
        })
}

fn captures(v: &Value) -> Vec<(String, String)> {
    v["captures"]
        .as_array()
        .map(|a| {
            a.iter()
                .map(|c| {
                    (
                        c["direction"].as_str().unwrap_or_default().to_string(),
                        c["type"].as_str().unwrap_or_default().to_string(),
                    )
                })
                .collect()
        })
        .unwrap_or_default()
}

fn analyze(prefix: &str, suffix: &str, input: &str) -> (i32, Value) {
    let out = cli(&[
        "analyze",
        "--grammar",
        BOOL,
        "--prefix",
        prefix,
        "--suffix",
        suffix,
        "--goal",
        "E",
        "--expect",
        "V",
        "--input",
        input,
        "--json",
    ]);
    let v = json(&out);
    (out.code, v)
}

fn record_captures(v: &Value, input: &str, proved: &mut Proved) {
    let g = bundled::boolean();
    for (_, ty) in captures(v) {
        let s = parse_sequent(&format!("{input} |- {ty}"), &g).unwrap();
        proved.add(Which::Bool, s);
    }
}

fn criterion_3(proved: &mut Proved) -> Verdict {
    let (c1, benign) = analyze("a =", "", "b");
    let (c2, attack) = analyze("a =", "", "b OR 1 = 1");
    record_captures(&attack, "b OR 1 = 1", proved);
    let caps = captures(&attack);
    let ok = c1 == 0
        && benign["classification"] == "Benign"
        && c2 == 1
        && attack["classification"] == "Capturing"
        && caps.iter().any(|(d, t)| d == "Left" && t == "(T/V)\\E")
        && attack["reshaping"]["verdict"] == "Reshaped"
        && has_shape(&attack["reshaping"]["combined_tree"]);
    let types: Vec<&str> = caps.iter().map(|(_, t)| t.as_str()).collect();
    (
        ok,
        format!(
            "b: {}; b OR 1 = 1: {} {:?}, reshaping {}",
            benign["classification"], attack["classification"], types, attack["reshaping"]["verdict"]
        ),
    )
}

fn criterion_4(proved: &mut Proved) -> Verdict {
    let (c1, ill) = analyze("", "= a", "b OR 1 = 1");
    let (c2, cap) = analyze("", "= a", "1 = 1 OR b");
    record_captures(&cap, "1 = 1 OR b", proved);
    let caps = captures(&cap);
    let ok = c1 == 1
        && ill["classification"] == "IllFormed"
        && c2 == 1
        && cap["classification"] == "Capturing"
        && caps.iter().any(|(d, t)| d == "Right" && t == "E/(V\\T)");
    let types: Vec<&str> = caps.iter().map(|(_, t)| t.as_str()).collect();
    (
        ok,
        format!(
            "b OR 1 = 1: {}; 1 = 1 OR b: {} {:?}",
            ill["classification"], cap["classification"], types
        ),
    )
}

fn criterion_5(proved: &mut Proved) -> Verdict {
    let g = bundled::english();
    let he = "he |- Sent/(Noun\\Sent)";
    let him = "him |- (Sent/Noun)\\Sent";
    let axioms = [parse_sequent(he, &g).unwrap(), parse_sequent(him, &g).unwrap()];
    let with_axioms = |s: &str| cli(&["check", "--grammar", ENG, "--axiom", he, "--axiom", him, s]);
    let mut notes = Vec::new();
    let mut ok = true;
    for s in [
        "Alice , knows , Bob |- Sent",
        "he , knows , Alice |- Sent",
        "Alice , knows , him |- Sent",
    ] {
        let out = with_axioms(s);
        ok &= out.code == 0;
        notes.push(format!("{s}: exit {}", out.code));
        proved.add(Which::Eng, parse_sequent(s, &g).unwrap());
    }
    for ax in &axioms {
        proved.add(Which::Eng, ax.clone());
    }

    // The pronoun typings do the work when composed explicitly.
    let cfg = SearchConfig::default();
    let hyp = |i: usize| lambek_core::proof::ProofTree {
        conclusion: axioms[i].clone(),
        rule: lambek_core::proof::RuleName::Hyp,
        detail: lambek_core::proof::Detail {
            axiom: Some(i),
            ..Default::default()
        },
        premises: vec![],
    };
    let vp = prove(&g, &parse_sequent("knows , Alice |- Noun\\Sent", &g).unwrap(), &cfg).into_proof();
    let sv = prove(&g, &parse_sequent("Alice , knows |- Sent/Noun", &g).unwrap(), &cfg).into_proof();
    let via = match (vp, sv) {
        (Some(vp), Some(sv)) => {
            let a = elim_over(&hyp(0), &vp).ok();
            let b = elim_under(&sv, &hyp(1)).ok();
            let accepted = |t: &Option<ProofTree>, want: &str| {
                t.as_ref().is_some_and(|t| {
                    t.conclusion == parse_sequent(want, &g).unwrap()
                        && check_proof_with_axioms(&g, &axioms, t).is_accept()
                })
            };
            accepted(&a, "he , knows , Alice |- Sent") && accepted(&b, "Alice , knows , him |- Sent")
        }
        _ => false,
    };
    ok &= via;
    notes.push(format!("via pronoun typings: {via}"));

    let bad = "him , knows , Alice |- Sent";
    let out = with_axioms(bad);
    let oracle = cli(&["oracle", "--grammar", ENG, "--max-len", "4", bad]);
    let search = prove_with_axioms(&g, &parse_sequent(bad, &g).unwrap(), &axioms, &cfg);
    ok &= out.code == 1 && !search.is_proved() && oracle.code == 1;
    notes.push(format!("{bad}: exit {}, oracle {}", out.code, oracle.stdout.trim()));
    (ok, notes.join("; "))
}

fn corpus(g: &Grammar) -> Vec<ProofTree> {
    let cfg = SearchConfig::default();
    let atoms: Vec<Symbol> = ["T", "V", "E", "C", "D", "F"].iter().map(Symbol::nonterminal).collect();
    let universe = type_universe(g, &atoms, 1).unwrap();
    let words = [
        "a",
        "b",
        "1",
        "a =",
        "= b",
        "a = b",
        "1 = a",
        "OR 1 = 1",
        "AND 1 = 1",
        "AND a = b AND b = 1",
        "b OR 1 = 1",
        "1 = 1 OR b",
        "a = b AND b = 1",
        "a = b OR b = 1",
        "OR",
        "AND",
        "=",
        "a = b OR",
        "a = b AND",
    ];
    let mut sequents: Vec<Sequent> = Vec::new();
    for w in words {
        let ctx = TypeContext::from_word(&g.word(w).unwrap());
        sequents.extend(universe.iter().map(|t| Sequent::new(ctx.clone(), t.clone())));
    }
    let pure = [
        "T/V , V |- T",
        "V , V\\T |- T",
        "C |- E",
        "T |- C",
        "T , D |- C",
        "C , F |- E",
        "T |- (C/T)\\C",
        "V |- T/(V\\T)",
        "T/V , V/V |- T/V",
        "V\\T , T\\C |- V\\C",
        "T * D |- C",
        "C , C\\E |- E",
        "1 , T |- T",
        "T |- T * 1",
    ];
    sequents.extend(pure.iter().map(|s| parse_sequent(s, g).unwrap()));
    sequents.iter().filter_map(|s| prove(g, s, &cfg).into_proof()).collect()
}

fn criterion_6(proved: &mut Proved) -> Verdict {
    let g = bundled::boolean();
    let cfg = SearchConfig::default();
    let corpus = corpus(&g);
    let psis: Vec<LambekType> = ["T", "V", "E"].iter().map(|n| parse_type(n, &g).unwrap()).collect();
    let e = parse_type("E", &g).unwrap();
    let (mut built, mut rejected, mut unproved) = (0, 0, 0);
    let mut accept = |t: &ProofTree, proved: &mut Proved| {
        built += 1;
        if check_proof(&g, t).is_accept() {
            proved.add(Which::Bool, t.conclusion.clone());
        } else {
            rejected += 1;
        }
    };
    for p in &corpus {
        proved.add(Which::Bool, p.conclusion.clone());
        let phi = p.conclusion.succedent.clone();
        let under = ProofTree::ax(LambekType::under(phi.clone(), e.clone()));
        let over = ProofTree::ax(LambekType::over(e.clone(), phi.clone()));
        accept(&elim_under(p, &under).unwrap(), proved);
        accept(&elim_over(&over, p).unwrap(), proved);
        for psi in &psis {
            for side in [Side::Left, Side::Right] {
                let t = dni(p, psi, side);
                accept(&t, proved);
                if !prove(&g, &t.conclusion, &cfg).is_proved() {
                    unproved += 1;
                }
            }
        }
    }
    // Eliminations between corpus members whose types fit together.
    let mut pairs = 0;
    for l in &corpus {
        for r in &corpus {
            if pairs >= 100 {
                break;
            }
            if let Ok(t) = elim_over(l, r).or_else(|_| elim_under(l, r)) {
                pairs += 1;
                accept(&t, proved);
            }
        }
    }
    let ok = corpus.len() >= 50 && rejected == 0 && unproved == 0 && pairs > 0;
    (
        ok,
        format!(
            "{} corpus sequents, {built} tactic proofs ({pairs} from corpus pairs), {rejected} rejected, {unproved} raised sequents not re-proved",
            corpus.len()
        ),
    )
}

fn criterion_7(proved: &mut Proved) -> Verdict {
    let g = bundled::boolean();
    let cfg = SearchConfig::default();
    let atoms: Vec<Symbol> = ["T", "V", "E"].iter().map(Symbol::nonterminal).collect();
    let universe = type_universe(&g, &atoms, 1).unwrap();
    let n = universe.len();
    let total = n * n * n;
    // Deterministic sample: every 53rd triple in universe order.
    let stride = 53;
    let (mut cases, mut agree, mut derivable) = (0, 0, 0);
    let mut first_disagreement = None;
    for idx in (0..total).step_by(stride) {
        let (phi, psi, pi) = (&universe[idx / (n * n)], &universe[(idx / n) % n], &universe[idx % n]);
        let seqs = [
            Sequent::new(vec![LambekType::prod(phi.clone(), psi.clone())], pi.clone()),
            Sequent::new(vec![psi.clone()], LambekType::under(phi.clone(), pi.clone())),
            Sequent::new(vec![phi.clone()], LambekType::over(pi.clone(), psi.clone())),
        ];
        let results: Vec<bool> = seqs.iter().map(|s| prove(&g, s, &cfg).is_proved()).collect();
        cases += 1;
        if results.iter().all(|&r| r == results[0]) {
            agree += 1;
            if results[0] {
                derivable += 1;
                for s in seqs {
                    proved.add(Which::Bool, s);
                }
            }
        } else if first_disagreement.is_none() {
            first_disagreement = Some(format!("{phi} ; {psi} ; {pi}"));
        }
    }
    let ok = cases >= 500 && agree == cases;
    let mut detail = format!("{n} types, {total} triples, {cases} sampled, {agree} agree, {derivable} derivable");
    if let Some(d) = first_disagreement {
        detail.push_str(&format!(", first disagreement at {d}"));
    }
    (ok, detail)
}

fn criterion_8(proved: &Proved) -> Verdict {
    let (bool_g, eng_g) = (bundled::boolean(), bundled::english());
    let mut bool_oracle = Oracle::new(&bool_g, SemBound::new(&bool_g, 6));
    let mut eng_oracle = Oracle::new(&eng_g, SemBound::new(&eng_g, 6));
    let mut seen = BTreeSet::new();
    let mut failures = Vec::new();
    for (which, s) in &proved.0 {
        if !seen.insert((*which == Which::Bool, s.clone())) {
            continue;
        }
        // Antecedent words up to the length of the longest literal word, and
        // at least 4 tokens.
        let out_len = s.antecedent.len().max(4);
        let verdict = match which {
            Which::Bool => bool_oracle.soundness(s, out_len),
            Which::Eng => eng_oracle.soundness(s, out_len),
        };
        if let Soundness::Counterexample(w) = verdict {
            failures.push(format!("{s} (counterexample `{w}`)"));
        }
    }
    let ok = failures.is_empty() && !seen.is_empty();
    let mut detail = format!("{} distinct proved sequents checked at max-len 6", seen.len());
    if !failures.is_empty() {
        detail.push_str(&format!(", {} counterexamples, first: {}", failures.len(), failures[0]));
    }
    (ok, detail)
}

fn criterion_9() -> Verdict {
    let g = bundled::boolean();
    let t = Symbol::nonterminal("T");
    let den = denotation_bounded(&g, &LambekType::Atom(t.clone()), &SemBound::new(&g, 3), 3);
    let en = enumerate_words(&g, &t, 3);
    let first = den == en && den.len() == 9;

    let ctx = InjectionContext::new(
        &g,
        g.word("a =").unwrap(),
        Word::empty(),
        Symbol::nonterminal("E"),
        Symbol::nonterminal("V"),
    )
    .unwrap();
    let hole = hole_language(&g, &ctx, 5);
    let prefix = g.word("a =").unwrap();
    let candidates = all_words(g.terminals(), 5);
    let brute: BTreeSet<Word> = candidates
        .iter()
        .filter(|w| recognize(&g, &Symbol::nonterminal("E"), &prefix.concat(w)))
        .cloned()
        .collect();
    let second = hole == brute;
    (
        first && second,
        format!(
            "|den(T,3)| = {}, equals enumeration: {}; hole language {} words, brute force over {} strings: {} words, equal: {second}",
            den.len(),
            den == en,
            hole.len(),
            candidates.len(),
            brute.len()
        ),
    )
}

fn criterion_10() -> Verdict {
    let (b, e) = (bundled::boolean(), bundled::english());
    let bool_pass = check_unambiguous(&b, &Symbol::nonterminal("E"), 8) == Ambiguity::Pass;
    let eng_pass = check_unambiguous(&e, &Symbol::nonterminal("Sent"), 5) == Ambiguity::Pass;
    let fixture = parse_grammar_file("start S\nS ::= S S | \"x\" ;\n").unwrap();
    let witness = match check_unambiguous(&fixture, &Symbol::nonterminal("S"), 5) {
        Ambiguity::Witness(w, t1, t2) => Some((w.len(), t1 != t2)),
        Ambiguity::Pass => None,
    };
    let ok = bool_pass && eng_pass && witness == Some((3, true));
    (
        ok,
        format!(
            "bool.g E/8 pass: {bool_pass}, eng.g Sent/5 pass: {eng_pass}, fixture witness length: {:?}",
            witness.map(|w| w.0)
        ),
    )
}

fn main() {
    let mut proved = Proved::default();
    let mut failed = 0;
    let mut report = |n: usize, title: &str, start: Instant, (ok, detail): Verdict| {
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} criterion {n:>2} {title}: {detail} [{secs:.1}s]",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            failed += 1;
        }
    };
    let t = Instant::now();
    report(1, "target judgments derivable", t, criterion_1(&mut proved));
    let t = Instant::now();
    report(2, "non-judgment refuted", t, criterion_2());
    let t = Instant::now();
    report(3, "tautology attack classified", t, criterion_3(&mut proved));
    let t = Instant::now();
    report(4, "order sensitivity", t, criterion_4(&mut proved));
    let t = Instant::now();
    report(5, "English fragment", t, criterion_5(&mut proved));
    let t = Instant::now();
    report(6, "derived-rule tactics", t, criterion_6(&mut proved));
    let t = Instant::now();
    report(7, "residuation agreement", t, criterion_7(&mut proved));
    let t = Instant::now();
    report(8, "soundness oracle sweep", t, criterion_8(&proved));
    let t = Instant::now();
    report(9, "bounded semantics exactness", t, criterion_9());
    let t = Instant::now();
    report(10, "unambiguity", t, criterion_10());
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
