//! Earley recognition, parse-tree extraction, bounded ambiguity checking and
//! hole-extended grammars.
//!
//! The chart works over sentential forms: an input symbol may be a
//! nonterminal, in which case it is matched as a leaf. Plain words are the
//! special case where every input symbol is a terminal. ε-productions are
//! handled with the Aycock–Horspool nullable shortcut, so no grammar
//! preprocessing is needed.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::GrammarError;
use crate::grammar::{Grammar, LanguageTable, Symbol, Word};

const NO_SYMBOL: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Item {
    prod: usize,
    dot: usize,
    origin: usize,
}

pub(crate) struct Chart<'g> {
    g: &'g Grammar,
    root: usize,
    input: Vec<usize>,
    // (nonterminal, i, j): nonterminal derives input[i..j] in at least one step
    completed: HashSet<(usize, usize, usize)>,
}

impl<'g> Chart<'g> {
    pub(crate) fn build(g: &'g Grammar, root: &Symbol, input: &[Symbol]) -> Option<Self> {
        let root = g.id(root).filter(|&id| g.is_nonterminal_id(id))?;
        let input: Vec<usize> = input.iter().map(|s| g.id(s).unwrap_or(NO_SYMBOL)).collect();
        let n = input.len();
        let prods = g.compiled();
        let mut sets: Vec<Vec<Item>> = vec![Vec::new(); n + 1];
        let mut seen: Vec<HashSet<Item>> = vec![HashSet::new(); n + 1];
        let mut completed = HashSet::new();

        fn add(sets: &mut [Vec<Item>], seen: &mut [HashSet<Item>], j: usize, it: Item) {
            if seen[j].insert(it) {
                sets[j].push(it);
            }
        }

        for &p in g.by_lhs_id(root) {
            add(
                &mut sets,
                &mut seen,
                0,
                Item {
                    prod: p,
                    dot: 0,
                    origin: 0,
                },
            );
        }
        for j in 0..=n {
            let mut k = 0;
            while k < sets[j].len() {
                let it = sets[j][k];
                k += 1;
                let rhs = &prods[it.prod].rhs;
                if it.dot < rhs.len() {
                    let next = rhs[it.dot];
                    if j < n && input[j] == next {
                        add(&mut sets, &mut seen, j + 1, Item { dot: it.dot + 1, ..it });
                    }
                    if g.is_nonterminal_id(next) {
                        for &q in g.by_lhs_id(next) {
                            add(
                                &mut sets,
                                &mut seen,
                                j,
                                Item {
                                    prod: q,
                                    dot: 0,
                                    origin: j,
                                },
                            );
                        }
                        if g.nullable_id(next) {
                            add(&mut sets, &mut seen, j, Item { dot: it.dot + 1, ..it });
                        }
                    }
                } else {
                    let lhs = prods[it.prod].lhs;
                    completed.insert((lhs, it.origin, j));
                    let waiting: Vec<Item> = sets[it.origin]
                        .iter()
                        .filter(|w| prods[w.prod].rhs.get(w.dot) == Some(&lhs))
                        .copied()
                        .collect();
                    for w in waiting {
                        add(&mut sets, &mut seen, j, Item { dot: w.dot + 1, ..w });
                    }
                }
            }
        }
        Some(Chart {
            g,
            root,
            input,
            completed,
        })
    }

    pub(crate) fn accepts(&self) -> bool {
        let n = self.input.len();
        self.completed.contains(&(self.root, 0, n)) || (n == 1 && self.input[0] == self.root)
    }

    fn derives(&self, sym: usize, i: usize, j: usize) -> bool {
        (j == i + 1 && self.input[i] == sym) || self.completed.contains(&(sym, i, j))
    }

    /// Up to `cap` distinct trees for the whole input.
    pub(crate) fn trees(&self, cap: usize) -> Vec<ParseTree> {
        if !self.accepts() {
            return Vec::new();
        }
        let mut ex = Extractor {
            chart: self,
            cap,
            max_frames: if cap > 1 { 2 } else { 1 },
            memo: HashMap::new(),
            seq_memo: HashMap::new(),
            frames: HashMap::new(),
            blocked: 0,
        };
        ex.trees(self.root, 0, self.input.len())
    }
}

struct Extractor<'c, 'g> {
    chart: &'c Chart<'g>,
    cap: usize,
    max_frames: u8,
    memo: HashMap<(usize, usize, usize), Vec<ParseTree>>,
    seq_memo: HashMap<(usize, usize, usize, usize), Vec<Vec<ParseTree>>>,
    frames: HashMap<(usize, usize, usize), u8>,
    // bumped whenever a cyclic re-entry is cut; results computed while it
    // changed are not memoized
    blocked: usize,
}

impl Extractor<'_, '_> {
    fn trees(&mut self, sym: usize, i: usize, j: usize) -> Vec<ParseTree> {
        let key = (sym, i, j);
        if let Some(t) = self.memo.get(&key) {
            return t.clone();
        }
        let frames = self.frames.entry(key).or_insert(0);
        if *frames >= self.max_frames {
            self.blocked += 1;
            return Vec::new();
        }
        *frames += 1;
        let blocked_before = self.blocked;

        let g = self.chart.g;
        let mut out = Vec::new();
        if j == i + 1 && self.chart.input[i] == sym {
            out.push(ParseTree::Leaf(g.symbol(sym).clone()));
        }
        if g.is_nonterminal_id(sym) && self.chart.completed.contains(&key) {
            for &p in g.by_lhs_id(sym) {
                if out.len() >= self.cap {
                    break;
                }
                for children in self.seqs(p, 0, i, j) {
                    if out.len() >= self.cap {
                        break;
                    }
                    out.push(ParseTree::node(g, p, children));
                }
            }
        }

        *self.frames.get_mut(&key).unwrap() -= 1;
        if self.blocked == blocked_before {
            self.memo.insert(key, out.clone());
        }
        out
    }

    fn seqs(&mut self, p: usize, k: usize, i: usize, j: usize) -> Vec<Vec<ParseTree>> {
        let rhs_len = self.chart.g.compiled()[p].rhs.len();
        if k == rhs_len {
            return if i == j { vec![Vec::new()] } else { Vec::new() };
        }
        if rhs_len == 0 {
            return Vec::new();
        }
        let key = (p, k, i, j);
        if let Some(s) = self.seq_memo.get(&key) {
            return s.clone();
        }
        let blocked_before = self.blocked;
        let sym = self.chart.g.compiled()[p].rhs[k];
        let mut out = Vec::new();
        'split: for m in i..=j {
            if !self.chart.derives(sym, i, m) && !(i == m && self.chart.g.nullable_id(sym)) {
                continue;
            }
            let rests = self.seqs(p, k + 1, m, j);
            if rests.is_empty() {
                continue;
            }
            let heads = if i == m && self.chart.g.nullable_id(sym) && !self.chart.derives(sym, i, m) {
                self.empty_trees(sym)
            } else {
                self.trees(sym, i, m)
            };
            for h in &heads {
                for r in &rests {
                    if out.len() >= self.cap {
                        break 'split;
                    }
                    let mut v = Vec::with_capacity(rhs_len - k);
                    v.push(h.clone());
                    v.extend(r.iter().cloned());
                    out.push(v);
                }
            }
        }
        if self.blocked == blocked_before {
            self.seq_memo.insert(key, out.clone());
        }
        out
    }

    // ε-derivations of a nullable symbol at a position the chart recorded
    // only through the nullable shortcut.
    fn empty_trees(&mut self, sym: usize) -> Vec<ParseTree> {
        let g = self.chart.g;
        let mut out = Vec::new();
        for &p in g.by_lhs_id(sym) {
            let rhs = &g.compiled()[p].rhs;
            if rhs.is_empty() {
                out.push(ParseTree::node(g, p, Vec::new()));
            } else if rhs.iter().all(|&s| g.nullable_id(s)) {
                let kids: Option<Vec<ParseTree>> =
                    rhs.iter().map(|&s| self.empty_trees(s).into_iter().next()).collect();
                if let Some(kids) = kids {
                    out.push(ParseTree::node(g, p, kids));
                }
            }
            if out.len() >= self.cap {
                break;
            }
        }
        out
    }
}

/// A derivation tree. ε-production nodes carry a single [`ParseTree::Epsilon`]
/// child.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseTree {
    Leaf(Symbol),
    Epsilon,
    Node {
        symbol: Symbol,
        production: usize,
        children: Vec<ParseTree>,
        yield_: Word,
    },
}

impl ParseTree {
    pub(crate) fn node(g: &Grammar, production: usize, children: Vec<ParseTree>) -> Self {
        let symbol = g.productions()[production].lhs.clone();
        let children = if children.is_empty() {
            vec![ParseTree::Epsilon]
        } else {
            children
        };
        let mut y = Vec::new();
        for c in &children {
            y.extend(c.yield_word().0);
        }
        ParseTree::Node {
            symbol,
            production,
            children,
            yield_: Word(y),
        }
    }

    /// The node label; `None` for the ε-leaf.
    pub fn symbol(&self) -> Option<&Symbol> {
        match self {
            ParseTree::Leaf(s) => Some(s),
            ParseTree::Epsilon => None,
            ParseTree::Node { symbol, .. } => Some(symbol),
        }
    }

    pub fn production(&self) -> Option<usize> {
        match self {
            ParseTree::Node { production, .. } => Some(*production),
            _ => None,
        }
    }

    pub fn children(&self) -> &[ParseTree] {
        match self {
            ParseTree::Node { children, .. } => children,
            _ => &[],
        }
    }

    pub fn yield_word(&self) -> Word {
        match self {
            ParseTree::Leaf(s) => Word(vec![s.clone()]),
            ParseTree::Epsilon => Word::empty(),
            ParseTree::Node { yield_, .. } => yield_.clone(),
        }
    }

    fn width(&self) -> usize {
        match self {
            ParseTree::Leaf(_) => 1,
            ParseTree::Epsilon => 0,
            ParseTree::Node { yield_, .. } => yield_.len(),
        }
    }

    /// Same labels and shape; cached yields are not compared.
    pub fn isomorphic(&self, other: &ParseTree) -> bool {
        match (self, other) {
            (ParseTree::Leaf(a), ParseTree::Leaf(b)) => a == b,
            (ParseTree::Epsilon, ParseTree::Epsilon) => true,
            (
                ParseTree::Node {
                    symbol: a,
                    children: ca,
                    ..
                },
                ParseTree::Node {
                    symbol: b,
                    children: cb,
                    ..
                },
            ) => a == b && ca.len() == cb.len() && ca.iter().zip(cb).all(|(x, y)| x.isomorphic(y)),
            _ => false,
        }
    }

    /// Visits every node with its token span.
    pub fn walk_spans<'a>(&'a self, start: usize, f: &mut impl FnMut(&'a ParseTree, usize, usize)) {
        f(self, start, start + self.width());
        let mut pos = start;
        for c in self.children() {
            c.walk_spans(pos, f);
            pos += c.width();
        }
    }

    /// Copy of the tree with the node reached by `path` (child indices from
    /// the root) replaced by `with`.
    pub fn replace_at(&self, path: &[usize], with: &ParseTree) -> ParseTree {
        let Some((&first, rest)) = path.split_first() else {
            return with.clone();
        };
        match self {
            ParseTree::Node {
                symbol,
                production,
                children,
                ..
            } => {
                let mut kids = children.clone();
                kids[first] = kids[first].replace_at(rest, with);
                let mut y = Vec::new();
                for c in &kids {
                    y.extend(c.yield_word().0);
                }
                ParseTree::Node {
                    symbol: symbol.clone(),
                    production: *production,
                    children: kids,
                    yield_: Word(y),
                }
            }
            _ => self.clone(),
        }
    }

    /// Paths (child indices) and spans of all nodes, preorder.
    pub fn nodes_with_spans(&self) -> Vec<(Vec<usize>, &ParseTree, usize, usize)> {
        fn go<'a>(
            t: &'a ParseTree,
            path: &mut Vec<usize>,
            start: usize,
            out: &mut Vec<(Vec<usize>, &'a ParseTree, usize, usize)>,
        ) {
            out.push((path.clone(), t, start, start + t.width()));
            let mut pos = start;
            for (i, c) in t.children().iter().enumerate() {
                path.push(i);
                go(c, path, pos, out);
                path.pop();
                pos += c.width();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), 0, &mut out);
        out
    }

    /// One node per line, two spaces of indent per level, ε-leaves as `·eps`.
    pub fn render_text(&self) -> String {
        fn go(t: &ParseTree, depth: usize, out: &mut String) {
            for _ in 0..depth {
                out.push_str("  ");
            }
            match t.symbol() {
                Some(s) => {
                    let _ = writeln!(out, "{s}");
                }
                None => out.push_str("·eps\n"),
            }
            for c in t.children() {
                go(c, depth + 1, out);
            }
        }
        let mut out = String::new();
        go(self, 0, &mut out);
        out
    }

    /// `{sym, prod_index, children}`; the ε-leaf has `sym: null`.
    pub fn to_json(&self) -> Value {
        json!({
            "sym": self.symbol().map(|s| s.name().to_string()),
            "prod_index": self.production(),
            "children": self.children().iter().map(ParseTree::to_json).collect::<Vec<_>>(),
        })
    }

    /// Checks that every internal node instantiates its production.
    pub fn is_consistent(&self, g: &Grammar) -> bool {
        match self {
            ParseTree::Leaf(_) | ParseTree::Epsilon => true,
            ParseTree::Node {
                symbol,
                production,
                children,
                yield_,
            } => {
                let Some(p) = g.production(*production) else {
                    return false;
                };
                let labels_ok = if p.rhs.is_empty() {
                    children.len() == 1 && children[0] == ParseTree::Epsilon
                } else {
                    children.len() == p.rhs.len() && children.iter().zip(&p.rhs).all(|(c, s)| c.symbol() == Some(s))
                };
                let y: Vec<Symbol> = children.iter().flat_map(|c| c.yield_word().0).collect();
                &p.lhs == symbol && labels_ok && y == yield_.0 && children.iter().all(|c| c.is_consistent(g))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseOutcome {
    Unique(ParseTree),
    Ambiguous(ParseTree, ParseTree),
    Reject,
}

pub fn recognize(g: &Grammar, a: &Symbol, w: &Word) -> bool {
    Chart::build(g, a, w.tokens()).is_some_and(|c| c.accepts())
}

/// Whether `a ⇒* form` for a sentential form (zero steps included).
pub fn derives_form(g: &Grammar, a: &Symbol, form: &[Symbol]) -> bool {
    Chart::build(g, a, form).is_some_and(|c| c.accepts())
}

/// One derivation tree of `form` from `a`, if any. Leaves may be
/// nonterminals of the form.
pub(crate) fn form_tree(g: &Grammar, a: &Symbol, form: &[Symbol]) -> Option<ParseTree> {
    Chart::build(g, a, form)?.trees(1).into_iter().next()
}

pub fn parse_tree(g: &Grammar, a: &Symbol, w: &Word) -> ParseOutcome {
    let Some(chart) = Chart::build(g, a, w.tokens()) else {
        return ParseOutcome::Reject;
    };
    let mut trees = chart.trees(2).into_iter();
    match (trees.next(), trees.next()) {
        (Some(t1), Some(t2)) => ParseOutcome::Ambiguous(t1, t2),
        (Some(t), None) => ParseOutcome::Unique(t),
        _ => ParseOutcome::Reject,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ambiguity {
    Pass,
    Witness(Word, ParseTree, ParseTree),
}

/// Bounded ambiguity check: every word of length `<= max_len` derived from
/// `a` is parsed, shortest first.
pub fn check_unambiguous(g: &Grammar, a: &Symbol, max_len: usize) -> Ambiguity {
    let Some(id) = g.id(a) else {
        return Ambiguity::Pass;
    };
    let table = LanguageTable::build(g, max_len);
    let mut words: Vec<Word> = table
        .words_ids(id, max_len)
        .map(|w| crate::grammar::ids_to_word(g, w))
        .collect();
    g.sort_words(&mut words);
    for w in words {
        if let ParseOutcome::Ambiguous(t1, t2) = parse_tree(g, a, &w) {
            return Ambiguity::Witness(w, t1, t2);
        }
    }
    Ambiguity::Pass
}

/// A hole of category `hole_type`, realised as the production
/// `hole_type ::= fresh_token`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleMark {
    pub hole_type: Symbol,
    pub fresh_token: Symbol,
    pub production: usize,
}

/// Adds `hole_type ::= fresh_token` where the token is the first of
/// `__HOLE`, `__HOLE1`, `__HOLE2`, … unused in `g`.
pub fn extend_with_hole(g: &Grammar, hole_type: &Symbol) -> Result<(Grammar, HoleMark), GrammarError> {
    if !hole_type.is_nonterminal() || !g.contains(hole_type) {
        return Err(GrammarError::Undeclared(hole_type.name().to_string()));
    }
    let fresh = (0..)
        .map(|i| {
            if i == 0 {
                "__HOLE".to_string()
            } else {
                format!("__HOLE{i}")
            }
        })
        .find(|name| g.lookup(name).is_none())
        .expect("unbounded candidates");
    let fresh_token = Symbol::terminal(&fresh);
    let extended = g.with_production(hole_type.clone(), vec![fresh_token.clone()])?;
    let production = extended.productions().len() - 1;
    Ok((
        extended,
        HoleMark {
            hole_type: hole_type.clone(),
            fresh_token,
            production,
        },
    ))
}
