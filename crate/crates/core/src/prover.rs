//! Backward proof search.
//!
//! Right implications, left products and left units are decomposed eagerly.
//! A sequent whose antecedent is all atoms and whose succedent is a
//! nonterminal is decided by parsing the antecedent as a sentential form;
//! the parse tree is then replayed as a chain of CONTRACT steps. Everything
//! else is found by trying left rules over every position and split, left to
//! right. Caller-supplied axioms enter through cuts, and only then is CONTRACT
//! tried on mixed antecedents.

use std::collections::{HashMap, HashSet};

use crate::grammar::{Grammar, Symbol, Word};
use crate::parser::{form_tree, ParseTree};
use crate::proof::{Detail, ProofTree, RuleName};
use crate::semantics::{soundness_check, SemBound, Soundness};
use crate::types::{type_universe, LambekType, Sequent, TypeContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum proof height.
    pub max_depth: usize,
    /// Nullable nonterminals that may be inserted backwards on one branch.
    /// Only consulted when extra axioms are present; see [`prove_with_axioms`].
    pub insert_budget: usize,
    pub enable_general_cut: bool,
    pub cut_formula_depth: usize,
    /// Run the bounded oracle first and report its counterexample.
    pub prescreen: Option<Prescreen>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prescreen {
    pub bound: SemBound,
    pub out_len: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_depth: 40,
            insert_budget: 2,
            enable_general_cut: false,
            cut_formula_depth: 1,
            prescreen: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    Proved(ProofTree),
    NotFoundWithinBounds,
    RefutedByOracle(Word),
}

impl SearchResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchResult::Proved(_))
    }

    pub fn proof(&self) -> Option<&ProofTree> {
        match self {
            SearchResult::Proved(t) => Some(t),
            _ => None,
        }
    }

    pub fn into_proof(self) -> Option<ProofTree> {
        match self {
            SearchResult::Proved(t) => Some(t),
            _ => None,
        }
    }
}

pub fn prove(g: &Grammar, s: &Sequent, cfg: &SearchConfig) -> SearchResult {
    prove_with_axioms(g, s, &[], cfg)
}

/// Search with extra axioms, such as lexical typings of words the grammar
/// does not type the way the caller wants. Axioms are used through CUT, and
/// the proof cites them by index in HYP leaves.
pub fn prove_with_axioms(g: &Grammar, s: &Sequent, axioms: &[Sequent], cfg: &SearchConfig) -> SearchResult {
    if let (Some(p), true) = (&cfg.prescreen, axioms.is_empty()) {
        if let Soundness::Counterexample(w) = soundness_check(g, s, &p.bound, p.out_len) {
            return SearchResult::RefutedByOracle(w);
        }
    }
    let mut searcher = Searcher::new(g, axioms, cfg);
    match searcher.search(s, cfg.insert_budget, cfg.max_depth).proof {
        Some(t) => SearchResult::Proved(t),
        None => SearchResult::NotFoundWithinBounds,
    }
}

struct Found {
    proof: Option<ProofTree>,
    /// The search met a sequent already open on its branch, so a failure is
    /// not final.
    tainted: bool,
}

impl Found {
    fn yes(t: ProofTree) -> Self {
        Found {
            proof: Some(t),
            tainted: false,
        }
    }

    fn no(tainted: bool) -> Self {
        Found { proof: None, tainted }
    }
}

type Key = (Sequent, usize);

struct Searcher<'a> {
    g: &'a Grammar,
    axioms: &'a [Sequent],
    cfg: &'a SearchConfig,
    cut_formulas: Vec<LambekType>,
    eps_productions: Vec<usize>,
    proved: HashMap<Key, (ProofTree, usize)>,
    failed: HashMap<Key, usize>,
    open: HashSet<Key>,
}

impl<'a> Searcher<'a> {
    fn new(g: &'a Grammar, axioms: &'a [Sequent], cfg: &'a SearchConfig) -> Self {
        let cut_formulas = if cfg.enable_general_cut {
            type_universe(g, g.nonterminals(), cfg.cut_formula_depth).unwrap_or_default()
        } else {
            Vec::new()
        };
        let eps_productions = (0..g.productions().len())
            .filter(|&r| g.productions()[r].is_epsilon())
            .collect();
        Searcher {
            g,
            axioms,
            cfg,
            cut_formulas,
            eps_productions,
            proved: HashMap::new(),
            failed: HashMap::new(),
            open: HashSet::new(),
        }
    }

    fn search(&mut self, seq: &Sequent, budget: usize, depth: usize) -> Found {
        if depth == 0 {
            return Found::no(false);
        }
        let key = (seq.clone(), budget);
        if let Some((t, h)) = self.proved.get(&key) {
            if *h <= depth {
                return Found::yes(t.clone());
            }
        }
        if let Some(&d) = self.failed.get(&key) {
            if depth <= d {
                return Found::no(false);
            }
        }
        if self.open.contains(&key) {
            return Found::no(true);
        }
        self.open.insert(key.clone());
        let found = self.expand(seq, budget, depth);
        self.open.remove(&key);
        match &found.proof {
            Some(t) => {
                let h = t.height();
                let better = self.proved.get(&key).is_none_or(|(_, old)| h < *old);
                if better {
                    self.proved.insert(key, (t.clone(), h));
                }
            }
            None if !found.tainted => {
                let d = self.failed.entry(key).or_insert(0);
                *d = (*d).max(depth);
            }
            None => {}
        }
        found
    }

    fn expand(&mut self, seq: &Sequent, budget: usize, depth: usize) -> Found {
        let g = self.g;
        let ant = &seq.antecedent;
        let suc = &seq.succedent;
        let n = ant.len();
        let below = depth - 1;

        if n == 1 && ant[0] == *suc {
            return Found::yes(ProofTree::leaf(seq.clone(), RuleName::Ax, Detail::none()));
        }
        if let Some(r) = self.gram_leaf(seq) {
            return Found::yes(ProofTree::leaf(
                seq.clone(),
                RuleName::Gram,
                Detail {
                    production: Some(r),
                    ..Detail::none()
                },
            ));
        }
        if let Some(i) = self.axioms.iter().position(|a| a == seq) {
            return Found::yes(hyp_leaf(seq.clone(), i));
        }
        if n == 0 && *suc == LambekType::Unit {
            return Found::yes(ProofTree::leaf(seq.clone(), RuleName::EpsR, Detail::none()));
        }

        match suc {
            LambekType::Under(a, b) => {
                let premise = Sequent::new(ant.splice(0, 0, &[(**a).clone()]), (**b).clone());
                return self.unary(seq, RuleName::UnderR, Detail::none(), &premise, budget, below);
            }
            LambekType::Over(b, a) => {
                let premise = Sequent::new(ant.splice(n, n, &[(**a).clone()]), (**b).clone());
                return self.unary(seq, RuleName::OverR, Detail::none(), &premise, budget, below);
            }
            _ => {}
        }
        if let Some(k) = ant.iter().position(|t| matches!(t, LambekType::Prod(..))) {
            let LambekType::Prod(a, b) = &ant[k] else {
                unreachable!()
            };
            let premise = Sequent::new(ant.splice(k, k + 1, &[(**a).clone(), (**b).clone()]), suc.clone());
            let detail = Detail {
                position: Some(k),
                ..Detail::none()
            };
            return self.unary(seq, RuleName::ProdL, detail, &premise, budget, below);
        }
        if let Some(k) = ant.iter().position(|t| *t == LambekType::Unit) {
            let premise = Sequent::new(ant.splice(k, k + 1, &[]), suc.clone());
            let detail = Detail {
                position: Some(k),
                ..Detail::none()
            };
            return self.unary(seq, RuleName::EpsL, detail, &premise, budget, below);
        }

        let all_atoms = ant.iter().all(LambekType::is_atom);
        if all_atoms {
            if let LambekType::Atom(a) = suc {
                if a.is_nonterminal() {
                    let form: Vec<Symbol> = ant.iter().map(|t| t.as_atom().unwrap().clone()).collect();
                    if let Some(tree) = form_tree(g, a, &form) {
                        let t = contract_chain(g, &tree, seq);
                        if t.height() <= depth {
                            return Found::yes(t);
                        }
                    }
                }
            }
            let extra = !self.axioms.is_empty() || self.cfg.enable_general_cut;
            if !extra && !matches!(suc, LambekType::Prod(..)) {
                return Found::no(false);
            }
        }

        let mut tainted = false;

        if let LambekType::Prod(a, b) = suc {
            for j in 0..=n {
                let left = Sequent::new(ant.slice(0, j), (**a).clone());
                let right = Sequent::new(ant.slice(j, n), (**b).clone());
                let detail = Detail {
                    split: Some(j),
                    ..Detail::none()
                };
                let f = self.binary(seq, RuleName::ProdR, detail, &left, &right, budget, below);
                if f.proof.is_some() {
                    return f;
                }
                tainted |= f.tainted;
            }
        }

        for k in 0..n {
            match &ant[k] {
                LambekType::Under(a, b) => {
                    for j in 0..=k {
                        let arg = Sequent::new(ant.slice(j, k), (**a).clone());
                        let main = Sequent::new(ant.splice(j, k + 1, &[(**b).clone()]), suc.clone());
                        let detail = Detail {
                            position: Some(k),
                            split: Some(j),
                            ..Detail::none()
                        };
                        let f = self.binary(seq, RuleName::UnderL, detail, &arg, &main, budget, below);
                        if f.proof.is_some() {
                            return f;
                        }
                        tainted |= f.tainted;
                    }
                }
                LambekType::Over(b, a) => {
                    for j in k + 1..=n {
                        let arg = Sequent::new(ant.slice(k + 1, j), (**a).clone());
                        let main = Sequent::new(ant.splice(k, j, &[(**b).clone()]), suc.clone());
                        let detail = Detail {
                            position: Some(k),
                            split: Some(j),
                            ..Detail::none()
                        };
                        let f = self.binary(seq, RuleName::OverL, detail, &arg, &main, budget, below);
                        if f.proof.is_some() {
                            return f;
                        }
                        tainted |= f.tainted;
                    }
                }
                _ => {}
            }
        }

        if !self.axioms.is_empty() {
            let f = self.with_axioms(seq, budget, below);
            if f.proof.is_some() {
                return f;
            }
            tainted |= f.tainted;
        }

        if self.cfg.enable_general_cut {
            let formulas = self.cut_formulas.clone();
            for p in 0..=n {
                for q in p..=n {
                    for chi in &formulas {
                        if q == p + 1 && ant[p] == *chi {
                            continue;
                        }
                        let left = Sequent::new(ant.slice(p, q), chi.clone());
                        let right = Sequent::new(ant.splice(p, q, std::slice::from_ref(chi)), suc.clone());
                        if right == *seq {
                            continue;
                        }
                        let detail = Detail {
                            position: Some(p),
                            split: Some(q),
                            ..Detail::none()
                        };
                        let f = self.binary(seq, RuleName::Cut, detail, &left, &right, budget, below);
                        if f.proof.is_some() {
                            return f;
                        }
                        tainted |= f.tainted;
                    }
                }
            }
        }

        Found::no(tainted)
    }

    /// Cuts against the extra axioms, then CONTRACT anywhere in the
    /// antecedent, then backward insertion of ε-productions.
    fn with_axioms(&mut self, seq: &Sequent, budget: usize, below: usize) -> Found {
        let g = self.g;
        let ant = &seq.antecedent;
        let suc = &seq.succedent;
        let n = ant.len();
        let mut tainted = false;

        for (i, ax) in self.axioms.iter().enumerate() {
            let m = ax.antecedent.len();
            if m == 0 && budget == 0 {
                continue;
            }
            let next_budget = if m == 0 { budget - 1 } else { budget };
            for p in 0..=n.saturating_sub(m) {
                if p + m > n || ant[p..p + m] != ax.antecedent[..] {
                    continue;
                }
                let main = Sequent::new(ant.splice(p, p + m, std::slice::from_ref(&ax.succedent)), suc.clone());
                if main == *seq {
                    continue;
                }
                let f = self.search(&main, next_budget, below);
                tainted |= f.tainted;
                if let Some(t) = f.proof {
                    return Found::yes(ProofTree {
                        conclusion: seq.clone(),
                        rule: RuleName::Cut,
                        detail: Detail {
                            position: Some(p),
                            split: Some(p + m),
                            ..Detail::none()
                        },
                        premises: vec![hyp_leaf(ax.clone(), i), t],
                    });
                }
            }
        }

        for (r, prod) in g.productions().iter().enumerate() {
            let m = prod.rhs.len();
            if m == 0 || m > n {
                continue;
            }
            for p in 0..=n - m {
                let matches = prod.rhs.iter().zip(&ant[p..p + m]).all(|(s, t)| t.as_atom() == Some(s));
                if !matches {
                    continue;
                }
                let main = Sequent::new(ant.splice(p, p + m, &[LambekType::Atom(prod.lhs.clone())]), suc.clone());
                let f = self.contract(seq, r, p, &main, budget, below);
                if f.proof.is_some() {
                    return f;
                }
                tainted |= f.tainted;
            }
        }

        if budget > 0 {
            for r in self.eps_productions.clone() {
                let lhs = LambekType::Atom(g.productions()[r].lhs.clone());
                for p in 0..=n {
                    let main = Sequent::new(ant.splice(p, p, std::slice::from_ref(&lhs)), suc.clone());
                    let f = self.contract(seq, r, p, &main, budget - 1, below);
                    if f.proof.is_some() {
                        return f;
                    }
                    tainted |= f.tainted;
                }
            }
        }
        Found::no(tainted)
    }

    fn contract(&mut self, seq: &Sequent, r: usize, p: usize, main: &Sequent, budget: usize, below: usize) -> Found {
        let detail = Detail {
            production: Some(r),
            position: Some(p),
            ..Detail::none()
        };
        self.unary(seq, RuleName::Contract, detail, main, budget, below)
    }

    fn gram_leaf(&self, seq: &Sequent) -> Option<usize> {
        let LambekType::Atom(a) = &seq.succedent else {
            return None;
        };
        if !a.is_nonterminal() {
            return None;
        }
        self.g.productions_for(a).iter().copied().find(|&r| {
            let rhs = &self.g.productions()[r].rhs;
            rhs.len() == seq.antecedent.len()
                && rhs
                    .iter()
                    .zip(seq.antecedent.iter())
                    .all(|(s, t)| t.as_atom() == Some(s))
        })
    }

    fn unary(
        &mut self,
        seq: &Sequent,
        rule: RuleName,
        detail: Detail,
        premise: &Sequent,
        budget: usize,
        below: usize,
    ) -> Found {
        let f = self.search(premise, budget, below);
        match f.proof {
            Some(t) => Found::yes(ProofTree {
                conclusion: seq.clone(),
                rule,
                detail,
                premises: vec![t],
            }),
            None => f,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn binary(
        &mut self,
        seq: &Sequent,
        rule: RuleName,
        detail: Detail,
        first: &Sequent,
        second: &Sequent,
        budget: usize,
        below: usize,
    ) -> Found {
        let f1 = self.search(first, budget, below);
        let Some(t1) = f1.proof else {
            return f1;
        };
        let f2 = self.search(second, budget, below);
        let Some(t2) = f2.proof else {
            return f2;
        };
        Found::yes(ProofTree {
            conclusion: seq.clone(),
            rule,
            detail,
            premises: vec![t1, t2],
        })
    }
}

fn hyp_leaf(s: Sequent, i: usize) -> ProofTree {
    ProofTree::leaf(
        s,
        RuleName::Hyp,
        Detail {
            axiom: Some(i),
            ..Detail::none()
        },
    )
}

/// Replays a derivation tree of the antecedent as CONTRACT steps, innermost
/// and leftmost first, closed by the GRAM axiom of the root production.
fn contract_chain(g: &Grammar, tree: &ParseTree, goal: &Sequent) -> ProofTree {
    fn collect(t: &ParseTree, offset: usize, steps: &mut Vec<(usize, usize)>) {
        let mut cur = offset;
        for c in t.children() {
            match c {
                ParseTree::Leaf(_) => cur += 1,
                ParseTree::Epsilon => {}
                ParseTree::Node { production, .. } => {
                    collect(c, cur, steps);
                    steps.push((*production, cur));
                    cur += 1;
                }
            }
        }
    }
    let root = tree.production().expect("derivation tree has a root production");
    let mut steps = Vec::new();
    collect(tree, 0, &mut steps);

    let mut forms: Vec<TypeContext> = vec![goal.antecedent.clone()];
    for &(r, p) in &steps {
        let prod = &g.productions()[r];
        let last = forms.last().unwrap();
        forms.push(last.splice(p, p + prod.rhs.len(), &[LambekType::Atom(prod.lhs.clone())]));
    }
    let mut t = ProofTree::leaf(
        Sequent::new(forms.pop().unwrap(), goal.succedent.clone()),
        RuleName::Gram,
        Detail {
            production: Some(root),
            ..Detail::none()
        },
    );
    for (&(r, p), form) in steps.iter().zip(forms).rev() {
        t = ProofTree {
            conclusion: Sequent::new(form, goal.succedent.clone()),
            rule: RuleName::Contract,
            detail: Detail {
                production: Some(r),
                position: Some(p),
                ..Detail::none()
            },
            premises: vec![t],
        };
    }
    t
}
