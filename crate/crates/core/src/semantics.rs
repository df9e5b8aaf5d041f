//! Bounded language semantics of types.
//!
//! An atom denotes the language of its symbol. `φ\ψ` holds of `w` when `v·w`
//! is a `ψ` for every `φ`-word `v`; here `v` only ranges over words of
//! length at most `max_len`, so membership is over-approximated and a
//! negative answer is exact. Concatenations that exceed the bound are still
//! recognised exactly. Soundness checks only draw antecedent words that are
//! members for certain, so a reported counterexample is genuine.

use std::collections::{BTreeSet, HashMap};

use crate::grammar::{enumerate_words, longest_word, Grammar, Symbol, Word};
use crate::parser::recognize;
use crate::types::{LambekType, Sequent, TypeContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemBound {
    /// Longest test word for the implication quantifiers.
    pub max_len: usize,
    /// Test words and denotations are drawn from this alphabet.
    pub alphabet: Vec<Symbol>,
}

impl SemBound {
    /// Bound over all terminals of `g`, in grammar order.
    pub fn new(g: &Grammar, max_len: usize) -> Self {
        SemBound {
            max_len,
            alphabet: g.terminals().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Soundness {
    Pass,
    Counterexample(Word),
}

impl Soundness {
    pub fn is_pass(&self) -> bool {
        matches!(self, Soundness::Pass)
    }
}

/// Caches membership and denotations for one grammar and bound; reuse it
/// across queries.
///
/// Two polarities are tracked. The possible side (`member`, `denotation`)
/// over-approximates: it tests implications only against certain argument
/// words. The certain side under-approximates: an implication is certain
/// only when its argument has a finite language that can be tested in full.
pub struct Oracle<'g> {
    g: &'g Grammar,
    bound: SemBound,
    members: HashMap<(LambekType, Word, bool), bool>,
    denotations: HashMap<(LambekType, usize, bool), BTreeSet<Word>>,
    languages: HashMap<LambekType, Option<BTreeSet<Word>>>,
    recognized: HashMap<(Symbol, Word), bool>,
}

const POSSIBLE: bool = false;
const CERTAIN: bool = true;

impl<'g> Oracle<'g> {
    pub fn new(g: &'g Grammar, bound: SemBound) -> Self {
        Oracle {
            g,
            bound,
            members: HashMap::new(),
            denotations: HashMap::new(),
            languages: HashMap::new(),
            recognized: HashMap::new(),
        }
    }

    pub fn bound(&self) -> &SemBound {
        &self.bound
    }

    fn over_alphabet(&self, w: &Word) -> bool {
        w.tokens().iter().all(|t| self.bound.alphabet.contains(t))
    }

    fn recognizes(&mut self, x: &Symbol, w: &Word) -> bool {
        if x.is_terminal() {
            return w.len() == 1 && w.tokens()[0] == *x;
        }
        let key = (x.clone(), w.clone());
        if let Some(&r) = self.recognized.get(&key) {
            return r;
        }
        let r = recognize(self.g, x, w);
        self.recognized.insert(key, r);
        r
    }

    /// Bounded membership. `false` is exact; `true` may be spurious when a
    /// test word longer than `max_len` would have failed.
    pub fn member(&mut self, w: &Word, t: &LambekType) -> bool {
        self.member_in(w, t, POSSIBLE)
    }

    /// Membership that holds for certain. `false` may be spurious.
    pub fn member_certain(&mut self, w: &Word, t: &LambekType) -> bool {
        self.member_in(w, t, CERTAIN)
    }

    fn member_in(&mut self, w: &Word, t: &LambekType, certain: bool) -> bool {
        let key = (t.clone(), w.clone(), certain);
        if let Some(&r) = self.members.get(&key) {
            return r;
        }
        let r = match t {
            LambekType::Atom(x) => self.recognizes(x, w),
            LambekType::Unit => w.is_empty(),
            LambekType::Prod(a, b) => (0..=w.len()).any(|i| {
                let (l, r) = (Word(w.tokens()[..i].to_vec()), Word(w.tokens()[i..].to_vec()));
                self.member_in(&l, a, certain) && self.member_in(&r, b, certain)
            }),
            LambekType::Under(a, b) | LambekType::Over(b, a) => {
                let left = matches!(t, LambekType::Under(..));
                let tests = if certain {
                    match self.language(a) {
                        Some(l) => l,
                        None => {
                            self.members.insert(key, false);
                            return false;
                        }
                    }
                } else {
                    self.denotation_in(a, self.bound.max_len, CERTAIN)
                };
                tests.iter().all(|v| {
                    let joined = if left { v.concat(w) } else { w.concat(v) };
                    self.member_in(&joined, b, certain)
                })
            }
        };
        self.members.insert(key, r);
        r
    }

    /// The whole language of `t` when it is finite and known: terminals,
    /// nonterminals with finite languages, the unit and their products.
    fn language(&mut self, t: &LambekType) -> Option<BTreeSet<Word>> {
        if let Some(l) = self.languages.get(t) {
            return l.clone();
        }
        let l = match t {
            LambekType::Atom(x) if x.is_terminal() => Some(BTreeSet::from([Word(vec![x.clone()])])),
            LambekType::Atom(x) => longest_word(self.g, x).map(|n| enumerate_words(self.g, x, n).into_iter().collect()),
            LambekType::Unit => Some(BTreeSet::from([Word::empty()])),
            LambekType::Prod(a, b) => match (self.language(a), self.language(b)) {
                (Some(la), Some(lb)) => Some(la.iter().flat_map(|u| lb.iter().map(|v| u.concat(v))).collect()),
                _ => None,
            },
            LambekType::Under(..) | LambekType::Over(..) => None,
        };
        self.languages.insert(t.clone(), l.clone());
        l
    }

    /// Possible members of `t` of length at most `out_len`, over the
    /// alphabet. A superset of the true denotation at that length.
    pub fn denotation(&mut self, t: &LambekType, out_len: usize) -> BTreeSet<Word> {
        self.denotation_in(t, out_len, POSSIBLE)
    }

    /// Certain members of `t` of length at most `out_len`.
    pub fn denotation_certain(&mut self, t: &LambekType, out_len: usize) -> BTreeSet<Word> {
        self.denotation_in(t, out_len, CERTAIN)
    }

    fn denotation_in(&mut self, t: &LambekType, out_len: usize, certain: bool) -> BTreeSet<Word> {
        let key = (t.clone(), out_len, certain);
        if let Some(d) = self.denotations.get(&key) {
            return d.clone();
        }
        let d = match t {
            LambekType::Atom(x) if x.is_terminal() => {
                let w = Word(vec![x.clone()]);
                if out_len >= 1 && self.over_alphabet(&w) {
                    BTreeSet::from([w])
                } else {
                    BTreeSet::new()
                }
            }
            LambekType::Atom(x) => enumerate_words(self.g, x, out_len)
                .into_iter()
                .filter(|w| self.over_alphabet(w))
                .collect(),
            LambekType::Unit => BTreeSet::from([Word::empty()]),
            LambekType::Prod(a, b) => {
                let da = self.denotation_in(a, out_len, certain);
                let db = self.denotation_in(b, out_len, certain);
                let mut out = BTreeSet::new();
                for u in &da {
                    for v in db.iter().filter(|v| u.len() + v.len() <= out_len) {
                        out.insert(u.concat(v));
                    }
                }
                out
            }
            LambekType::Under(a, b) | LambekType::Over(b, a) => {
                if certain && self.language(a).is_none() {
                    BTreeSet::new()
                } else {
                    let left = matches!(t, LambekType::Under(..));
                    let candidates = self.implication_candidates(a, b, left, out_len);
                    candidates
                        .into_iter()
                        .filter(|w| self.member_in(w, t, certain))
                        .collect()
                }
            }
        };
        self.denotations.insert(key, d.clone());
        d
    }

    // Any member w must in particular pass the test with the first certain
    // argument word v0, so v0·w (or w·v0) is a possible member of the result.
    fn implication_candidates(
        &mut self,
        arg: &LambekType,
        result: &LambekType,
        left: bool,
        out_len: usize,
    ) -> Vec<Word> {
        let tests = self.denotation_in(arg, self.bound.max_len, CERTAIN);
        let mut sorted: Vec<Word> = tests.into_iter().collect();
        self.g.sort_words(&mut sorted);
        let Some(v0) = sorted.into_iter().next() else {
            return all_words(&self.bound.alphabet, out_len);
        };
        let k = v0.len();
        self.denotation_in(result, k + out_len, POSSIBLE)
            .into_iter()
            .filter_map(|x| {
                if x.len() < k {
                    return None;
                }
                let toks = x.tokens();
                if left && toks[..k] == v0.tokens()[..] {
                    Some(Word(toks[k..].to_vec()))
                } else if !left && toks[toks.len() - k..] == v0.tokens()[..] {
                    Some(Word(toks[..toks.len() - k].to_vec()))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Possible words of a context up to `out_len`.
    pub fn context_denotation(&mut self, ctx: &TypeContext, out_len: usize) -> BTreeSet<Word> {
        self.context_in(ctx, out_len, POSSIBLE)
    }

    fn context_in(&mut self, ctx: &TypeContext, out_len: usize, certain: bool) -> BTreeSet<Word> {
        let mut acc = BTreeSet::from([Word::empty()]);
        for t in ctx.iter() {
            let d = self.denotation_in(t, out_len, certain);
            let mut next = BTreeSet::new();
            for u in &acc {
                for v in d.iter().filter(|v| u.len() + v.len() <= out_len) {
                    next.insert(u.concat(v));
                }
            }
            acc = next;
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    /// The first certain antecedent word, in length-lexicographic order,
    /// that is not even a possible member of the succedent. Any
    /// counterexample reported is a real one.
    pub fn soundness(&mut self, s: &Sequent, out_len: usize) -> Soundness {
        let mut words: Vec<Word> = self.context_in(&s.antecedent, out_len, CERTAIN).into_iter().collect();
        self.g.sort_words(&mut words);
        for w in words {
            if !self.member(&w, &s.succedent) {
                return Soundness::Counterexample(w);
            }
        }
        Soundness::Pass
    }
}

/// Every word over `alphabet` of length at most `max_len`, shortest first.
pub fn all_words(alphabet: &[Symbol], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for a in alphabet {
                let mut t = w.tokens().to_vec();
                t.push(a.clone());
                next.push(Word(t));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn member_bounded(g: &Grammar, w: &Word, t: &LambekType, b: &SemBound) -> bool {
    Oracle::new(g, b.clone()).member(w, t)
}

pub fn denotation_bounded(g: &Grammar, t: &LambekType, b: &SemBound, out_len: usize) -> BTreeSet<Word> {
    Oracle::new(g, b.clone()).denotation(t, out_len)
}

pub fn context_denotation_bounded(g: &Grammar, ctx: &TypeContext, b: &SemBound, out_len: usize) -> BTreeSet<Word> {
    Oracle::new(g, b.clone()).context_denotation(ctx, out_len)
}

pub fn soundness_check(g: &Grammar, s: &Sequent, b: &SemBound, out_len: usize) -> Soundness {
    Oracle::new(g, b.clone()).soundness(s, out_len)
}
