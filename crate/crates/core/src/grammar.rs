//! Context-free grammars: symbols, productions, the grammar file format,
//! usefulness analysis, nullability and bounded word enumeration.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::GrammarError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Terminal,
    Nonterminal,
}

/// A grammar symbol. Names are compared exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    kind: SymbolKind,
    name: Arc<str>,
}

impl Symbol {
    pub fn terminal(name: impl AsRef<str>) -> Self {
        Symbol {
            kind: SymbolKind::Terminal,
            name: Arc::from(name.as_ref()),
        }
    }

    pub fn nonterminal(name: impl AsRef<str>) -> Self {
        Symbol {
            kind: SymbolKind::Nonterminal,
            name: Arc::from(name.as_ref()),
        }
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_terminal(&self) -> bool {
        self.kind == SymbolKind::Terminal
    }

    pub fn is_nonterminal(&self) -> bool {
        self.kind == SymbolKind::Nonterminal
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// `lhs ::= rhs`; an empty rhs is an ε-production.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: Symbol,
    pub rhs: Vec<Symbol>,
}

impl Production {
    pub fn new(lhs: Symbol, rhs: Vec<Symbol>) -> Self {
        Production { lhs, rhs }
    }

    pub fn is_epsilon(&self) -> bool {
        self.rhs.is_empty()
    }
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ::=", self.lhs)?;
        if self.rhs.is_empty() {
            return f.write_str(" ε");
        }
        for s in &self.rhs {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

/// A sequence of terminal tokens. The empty word is ε.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Splits on whitespace; every token becomes a terminal symbol.
    pub fn parse(text: &str) -> Self {
        Word(text.split_whitespace().map(Symbol::terminal).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tokens(&self) -> &[Symbol] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Removal reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub symbol: Symbol,
    pub reason: UselessReason,
    pub removed_productions: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UselessReason {
    /// Derives no word.
    Unproductive,
    /// Not reachable from the start symbol.
    Unreachable,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let why = match self.reason {
            UselessReason::Unproductive => "derives no word",
            UselessReason::Unreachable => "is unreachable from the start symbol",
        };
        write!(
            f,
            "removed nonterminal `{}` ({} production{}): it {}",
            self.symbol,
            self.removed_productions,
            if self.removed_productions == 1 { "" } else { "s" },
            why
        )
    }
}

/// A context-free grammar `(T, N, P, S)`.
///
/// Symbols are numbered internally: nonterminals first, then terminals, both
/// in order of first occurrence. The numbering drives the Earley parser and
/// the word order used for counterexamples.
#[derive(Clone, Debug)]
pub struct Grammar {
    terminals: Vec<Symbol>,
    nonterminals: Vec<Symbol>,
    productions: Vec<Production>,
    start: Symbol,
    ids: HashMap<Symbol, usize>,
    compiled: Vec<CompiledProduction>,
    by_lhs: Vec<Vec<usize>>,
    nullable: Vec<bool>,
}

#[derive(Clone, Debug)]
pub(crate) struct CompiledProduction {
    pub lhs: usize,
    pub rhs: Vec<usize>,
}

impl Grammar {
    /// Builds a well-formed grammar. Does not remove useless symbols; see
    /// [`validate`].
    pub fn new(
        terminals: Vec<Symbol>,
        nonterminals: Vec<Symbol>,
        productions: Vec<Production>,
        start: Symbol,
    ) -> Result<Self, GrammarError> {
        let mut ids = HashMap::new();
        for nt in &nonterminals {
            if !nt.is_nonterminal() {
                return Err(GrammarError::KindClash(nt.name().to_string()));
            }
            if ids.insert(nt.clone(), ids.len()).is_some() {
                return Err(GrammarError::DuplicateSymbol(nt.name().to_string()));
            }
        }
        let nt_names: HashSet<&str> = nonterminals.iter().map(Symbol::name).collect();
        for t in &terminals {
            if !t.is_terminal() || nt_names.contains(t.name()) {
                return Err(GrammarError::KindClash(t.name().to_string()));
            }
            if ids.insert(t.clone(), ids.len()).is_some() {
                return Err(GrammarError::DuplicateSymbol(t.name().to_string()));
            }
        }
        if !ids.contains_key(&start) || !start.is_nonterminal() {
            return Err(GrammarError::Undeclared(start.name().to_string()));
        }

        let mut seen = HashSet::new();
        let mut compiled = Vec::with_capacity(productions.len());
        let mut by_lhs = vec![Vec::new(); nonterminals.len()];
        for (i, p) in productions.iter().enumerate() {
            if !seen.insert(p) {
                return Err(GrammarError::DuplicateProduction(p.to_string()));
            }
            let lhs = match ids.get(&p.lhs) {
                Some(&id) if p.lhs.is_nonterminal() => id,
                _ => return Err(GrammarError::Undeclared(p.lhs.name().to_string())),
            };
            let rhs = p
                .rhs
                .iter()
                .map(|s| {
                    ids.get(s)
                        .copied()
                        .ok_or_else(|| GrammarError::Undeclared(s.name().to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            by_lhs[lhs].push(i);
            compiled.push(CompiledProduction { lhs, rhs });
        }

        let mut g = Grammar {
            terminals,
            nonterminals,
            productions,
            start,
            ids,
            compiled,
            by_lhs,
            nullable: Vec::new(),
        };
        g.nullable = g.compute_nullable();
        Ok(g)
    }

    pub fn terminals(&self) -> &[Symbol] {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &[Symbol] {
        &self.nonterminals
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn start(&self) -> &Symbol {
        &self.start
    }

    pub fn production(&self, index: usize) -> Option<&Production> {
        self.productions.get(index)
    }

    /// Indices of the productions for `lhs`, in file order.
    pub fn productions_for(&self, lhs: &Symbol) -> &[usize] {
        match self.ids.get(lhs) {
            Some(&id) if id < self.nonterminals.len() => &self.by_lhs[id],
            _ => &[],
        }
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.ids.contains_key(s)
    }

    /// Looks a name up in either name space.
    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        let nt = Symbol::nonterminal(name);
        if self.ids.contains_key(&nt) {
            return Some(nt);
        }
        let t = Symbol::terminal(name);
        self.ids.contains_key(&t).then_some(t)
    }

    pub fn is_nullable(&self, s: &Symbol) -> bool {
        match self.ids.get(s) {
            Some(&id) => self.nullable_id(id),
            None => false,
        }
    }

    /// Tokenizes `text` and checks every token is a terminal of this grammar.
    pub fn word(&self, text: &str) -> Result<Word, GrammarError> {
        let w = Word::parse(text);
        for t in w.tokens() {
            if !self.contains(t) {
                return Err(GrammarError::Undeclared(t.name().to_string()));
            }
        }
        Ok(w)
    }

    /// Length-lexicographic order, with tokens ranked by declaration order.
    /// Tokens unknown to the grammar sort last, by name.
    pub fn word_cmp(&self, a: &Word, b: &Word) -> std::cmp::Ordering {
        let rank = |s: &Symbol| (self.ids.get(s).copied().unwrap_or(usize::MAX), s.clone());
        a.len()
            .cmp(&b.len())
            .then_with(|| a.tokens().iter().map(rank).cmp(b.tokens().iter().map(rank)))
    }

    pub fn sort_words(&self, words: &mut [Word]) {
        words.sort_by(|a, b| self.word_cmp(a, b));
    }

    pub(crate) fn num_nonterminals(&self) -> usize {
        self.nonterminals.len()
    }

    pub(crate) fn num_symbols(&self) -> usize {
        self.nonterminals.len() + self.terminals.len()
    }

    pub(crate) fn id(&self, s: &Symbol) -> Option<usize> {
        self.ids.get(s).copied()
    }

    pub(crate) fn symbol(&self, id: usize) -> &Symbol {
        if id < self.nonterminals.len() {
            &self.nonterminals[id]
        } else {
            &self.terminals[id - self.nonterminals.len()]
        }
    }

    pub(crate) fn is_nonterminal_id(&self, id: usize) -> bool {
        id < self.nonterminals.len()
    }

    pub(crate) fn nullable_id(&self, id: usize) -> bool {
        id < self.nonterminals.len() && self.nullable[id]
    }

    pub(crate) fn compiled(&self) -> &[CompiledProduction] {
        &self.compiled
    }

    pub(crate) fn by_lhs_id(&self, id: usize) -> &[usize] {
        &self.by_lhs[id]
    }

    fn compute_nullable(&self) -> Vec<bool> {
        let mut nullable = vec![false; self.nonterminals.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for p in &self.compiled {
                if !nullable[p.lhs] && p.rhs.iter().all(|&s| self.is_nonterminal_id(s) && nullable[s]) {
                    nullable[p.lhs] = true;
                    changed = true;
                }
            }
        }
        nullable
    }

    /// Grammar with one extra production `lhs ::= rhs`, declaring any new
    /// terminals in `rhs`.
    pub(crate) fn with_production(&self, lhs: Symbol, rhs: Vec<Symbol>) -> Result<Grammar, GrammarError> {
        let mut terminals = self.terminals.clone();
        for s in &rhs {
            if s.is_terminal() && !self.contains(s) {
                terminals.push(s.clone());
            }
        }
        let mut productions = self.productions.clone();
        productions.push(Production::new(lhs, rhs));
        Grammar::new(terminals, self.nonterminals.clone(), productions, self.start.clone())
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start {}", self.start)?;
        for nt in &self.nonterminals {
            let alts = self.productions_for(nt);
            if alts.is_empty() {
                continue;
            }
            write!(f, "{nt} ::=")?;
            for (k, &i) in alts.iter().enumerate() {
                if k > 0 {
                    f.write_str(" |")?;
                }
                for s in &self.productions[i].rhs {
                    if s.is_terminal() && self.lookup(s.name()).is_some_and(|x| x.is_nonterminal()) {
                        write!(f, " \"{s}\"")?;
                    } else {
                        write!(f, " {s}")?;
                    }
                }
            }
            writeln!(f, " ;")?;
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq)]
enum Tok {
    Name(String),
    Quoted(String),
    Define,
    Bar,
    Semi,
}

fn tokenize_line(line: &str, lineno: usize) -> Result<Vec<Tok>, GrammarError> {
    let mut toks = Vec::new();
    let mut chars = line.chars().peekable();
    let mut cur = String::new();
    let flush = |cur: &mut String, toks: &mut Vec<Tok>| {
        if !cur.is_empty() {
            let s = std::mem::take(cur);
            toks.push(if s == "::=" { Tok::Define } else { Tok::Name(s) });
        }
    };
    while let Some(c) = chars.next() {
        match c {
            '#' => break,
            '|' => {
                flush(&mut cur, &mut toks);
                toks.push(Tok::Bar);
            }
            ';' => {
                flush(&mut cur, &mut toks);
                toks.push(Tok::Semi);
            }
            '"' => {
                if !cur.is_empty() {
                    return Err(GrammarError::Syntax {
                        line: lineno,
                        message: format!("quote inside token `{cur}`"),
                    });
                }
                let mut q = String::new();
                let mut closed = false;
                for c in chars.by_ref() {
                    if c == '"' {
                        closed = true;
                        break;
                    }
                    q.push(c);
                }
                if !closed {
                    return Err(GrammarError::Syntax {
                        line: lineno,
                        message: "unterminated quoted terminal".into(),
                    });
                }
                if q.is_empty() || q.chars().any(char::is_whitespace) {
                    return Err(GrammarError::Syntax {
                        line: lineno,
                        message: format!("invalid quoted terminal \"{q}\""),
                    });
                }
                toks.push(Tok::Quoted(q));
                if chars
                    .peek()
                    .is_some_and(|c| !c.is_whitespace() && !matches!(c, '|' | ';' | '#'))
                {
                    return Err(GrammarError::Syntax {
                        line: lineno,
                        message: "quoted terminal must be followed by whitespace".into(),
                    });
                }
            }
            c if c.is_whitespace() => flush(&mut cur, &mut toks),
            c => cur.push(c),
        }
    }
    flush(&mut cur, &mut toks);
    Ok(toks)
}

/// Parses the textual grammar format. Production order is preserved; the
/// result is well-formed but not yet [`validate`]d.
///
/// ```text
/// start E            # first non-comment line
/// E ::= C F ;
/// F ::= OR C F | ;   # empty alternative is ε
/// ```
///
/// A token is a nonterminal iff it appears on some left-hand side. Quoted
/// tokens are always terminals.
pub fn parse_grammar_file(text: &str) -> Result<Grammar, GrammarError> {
    struct RawRule {
        line: usize,
        lhs: String,
        alts: Vec<Vec<(String, bool)>>,
    }

    let mut start: Option<(String, usize)> = None;
    let mut rules: Vec<RawRule> = Vec::new();
    let mut open: Option<RawRule> = None;

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let toks = tokenize_line(line, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let mut it = toks.into_iter().peekable();
        if open.is_none() {
            if let Some(Tok::Name(first)) = it.peek() {
                if first == "start" {
                    it.next();
                    let name = match it.next() {
                        Some(Tok::Name(n)) => n,
                        _ => {
                            return Err(GrammarError::Syntax {
                                line: lineno,
                                message: "expected a symbol after `start`".into(),
                            })
                        }
                    };
                    if it.next().is_some() {
                        return Err(GrammarError::Syntax {
                            line: lineno,
                            message: "trailing tokens after start directive".into(),
                        });
                    }
                    if start.is_some() {
                        return Err(GrammarError::DuplicateStart { line: lineno });
                    }
                    if !rules.is_empty() {
                        return Err(GrammarError::Syntax {
                            line: lineno,
                            message: "`start` must be the first directive".into(),
                        });
                    }
                    start = Some((name, lineno));
                    continue;
                }
            }
            if start.is_none() {
                return Err(GrammarError::Syntax {
                    line: lineno,
                    message: "expected `start <Name>` before the first rule".into(),
                });
            }
        }
        while it.peek().is_some() {
            let rule = match open.as_mut() {
                Some(r) => r,
                None => {
                    let lhs = match it.next() {
                        Some(Tok::Name(n)) => n,
                        _ => {
                            return Err(GrammarError::Syntax {
                                line: lineno,
                                message: "expected a nonterminal at the start of a rule".into(),
                            })
                        }
                    };
                    if it.next() != Some(Tok::Define) {
                        return Err(GrammarError::Syntax {
                            line: lineno,
                            message: format!("expected `::=` after `{lhs}`"),
                        });
                    }
                    open.insert(RawRule {
                        line: lineno,
                        lhs,
                        alts: vec![Vec::new()],
                    })
                }
            };
            match it.next() {
                Some(Tok::Name(n)) => rule.alts.last_mut().unwrap().push((n, false)),
                Some(Tok::Quoted(n)) => rule.alts.last_mut().unwrap().push((n, true)),
                Some(Tok::Bar) => rule.alts.push(Vec::new()),
                Some(Tok::Semi) => rules.push(open.take().unwrap()),
                Some(Tok::Define) => {
                    return Err(GrammarError::Syntax {
                        line: lineno,
                        message: "unexpected `::=` (missing `;` on the previous rule?)".into(),
                    })
                }
                None => unreachable!(),
            }
        }
    }
    if let Some(r) = open {
        return Err(GrammarError::Syntax {
            line: r.line,
            message: format!("rule for `{}` is not terminated by `;`", r.lhs),
        });
    }
    let (start, _) = start.ok_or(GrammarError::MissingStart)?;

    let mut nonterminals: Vec<Symbol> = Vec::new();
    let mut nt_names = HashSet::new();
    for r in &rules {
        if nt_names.insert(r.lhs.clone()) {
            nonterminals.push(Symbol::nonterminal(&r.lhs));
        }
    }
    let mut terminals: Vec<Symbol> = Vec::new();
    let mut t_names = HashSet::new();
    let mut productions = Vec::new();
    for r in &rules {
        for alt in &r.alts {
            let mut rhs = Vec::with_capacity(alt.len());
            for (name, quoted) in alt {
                if nt_names.contains(name) {
                    if *quoted {
                        return Err(GrammarError::KindClash(name.clone()));
                    }
                    rhs.push(Symbol::nonterminal(name));
                } else {
                    if t_names.insert(name.clone()) {
                        terminals.push(Symbol::terminal(name));
                    }
                    rhs.push(Symbol::terminal(name));
                }
            }
            productions.push(Production::new(Symbol::nonterminal(&r.lhs), rhs));
        }
    }
    if !nt_names.contains(&start) {
        return Err(GrammarError::Undeclared(start));
    }
    Grammar::new(terminals, nonterminals, productions, Symbol::nonterminal(&start))
}

/// Removes unproductive and then unreachable nonterminals together with
/// their productions. Terminals no longer used are dropped as well.
pub fn validate(g: &Grammar) -> Result<(Grammar, Vec<Diagnostic>), GrammarError> {
    let nn = g.num_nonterminals();
    let mut productive = vec![false; nn];
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.compiled() {
            if !productive[p.lhs] && p.rhs.iter().all(|&s| !g.is_nonterminal_id(s) || productive[s]) {
                productive[p.lhs] = true;
                changed = true;
            }
        }
    }
    let start = g.id(g.start()).expect("start declared");
    if !productive[start] {
        return Err(GrammarError::UselessStart(g.start().name().to_string()));
    }
    let keep_prod =
        |p: &CompiledProduction| productive[p.lhs] && p.rhs.iter().all(|&s| !g.is_nonterminal_id(s) || productive[s]);

    let mut reachable = vec![false; nn];
    reachable[start] = true;
    let mut stack = vec![start];
    while let Some(a) = stack.pop() {
        for &pi in g.by_lhs_id(a) {
            let p = &g.compiled()[pi];
            if !keep_prod(p) {
                continue;
            }
            for &s in &p.rhs {
                if g.is_nonterminal_id(s) && !reachable[s] {
                    reachable[s] = true;
                    stack.push(s);
                }
            }
        }
    }

    let mut diagnostics = Vec::new();
    for (id, nt) in g.nonterminals().iter().enumerate() {
        let reason = if !productive[id] {
            UselessReason::Unproductive
        } else if !reachable[id] {
            UselessReason::Unreachable
        } else {
            continue;
        };
        diagnostics.push(Diagnostic {
            symbol: nt.clone(),
            reason,
            removed_productions: g.by_lhs_id(id).len(),
        });
    }
    if diagnostics.is_empty() {
        return Ok((g.clone(), diagnostics));
    }

    let keep_nt = |id: usize| productive[id] && reachable[id];
    let productions: Vec<Production> = g
        .compiled()
        .iter()
        .zip(g.productions())
        .filter(|(c, _)| keep_nt(c.lhs) && keep_prod(c))
        .map(|(_, p)| p.clone())
        .collect();
    let used: HashSet<&Symbol> = productions.iter().flat_map(|p| p.rhs.iter()).collect();
    let terminals = g.terminals().iter().filter(|t| used.contains(t)).cloned().collect();
    let nonterminals = g
        .nonterminals()
        .iter()
        .enumerate()
        .filter(|(id, _)| keep_nt(*id))
        .map(|(_, s)| s.clone())
        .collect();
    let cleaned = Grammar::new(terminals, nonterminals, productions, g.start().clone())?;
    Ok((cleaned, diagnostics))
}

/// The nonterminals that derive ε.
pub fn nullable_set(g: &Grammar) -> BTreeSet<Symbol> {
    g.nonterminals()
        .iter()
        .enumerate()
        .filter(|(id, _)| g.nullable_id(*id))
        .map(|(_, s)| s.clone())
        .collect()
}

/// Length of the longest word derived from `x`, or `None` when its language
/// is infinite. Also `None` for undeclared or unproductive symbols.
///
/// The language is infinite exactly when some nonterminal reachable from
/// `x` derives itself with a non-empty word beside it.
pub fn longest_word(g: &Grammar, x: &Symbol) -> Option<usize> {
    let root = g.id(x)?;
    if !g.is_nonterminal_id(root) {
        return Some(1);
    }
    let n = g.num_nonterminals();
    let term = |s: usize| !g.is_nonterminal_id(s);

    let mut productive = vec![false; n];
    let mut solid = vec![false; n]; // derives some non-empty word
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.compiled() {
            if !productive[p.lhs] && p.rhs.iter().all(|&s| term(s) || productive[s]) {
                productive[p.lhs] = true;
                changed = true;
            }
            let usable = p.rhs.iter().all(|&s| term(s) || productive[s]);
            if usable && !solid[p.lhs] && p.rhs.iter().any(|&s| term(s) || solid[s]) {
                solid[p.lhs] = true;
                changed = true;
            }
        }
    }
    if !productive[root] {
        return None;
    }
    let usable: Vec<&CompiledProduction> = g
        .compiled()
        .iter()
        .filter(|p| p.rhs.iter().all(|&s| term(s) || productive[s]))
        .collect();

    // edges[a] = (b, grows): b occurs in a production of a, and grows when
    // the rest of that production can contribute tokens.
    let mut edges: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for p in &usable {
        for (i, &b) in p.rhs.iter().enumerate() {
            if term(b) {
                continue;
            }
            let grows = p.rhs.iter().enumerate().any(|(j, &s)| j != i && (term(s) || solid[s]));
            edges[p.lhs].push((b, grows));
        }
    }
    let reach_from = |start: usize| {
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(a) = stack.pop() {
            for &(b, _) in &edges[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen
    };
    let reachable = reach_from(root);
    for a in (0..n).filter(|&a| reachable[a]) {
        for &(b, grows) in &edges[a] {
            if grows && reach_from(b)[a] {
                return None;
            }
        }
    }

    // Finite: longest yields by fixpoint; values only grow and are bounded.
    let mut longest = vec![0usize; n];
    let mut changed = true;
    while changed {
        changed = false;
        for p in usable.iter().filter(|p| reachable[p.lhs]) {
            let len: usize = p.rhs.iter().map(|&s| if term(s) { 1 } else { longest[s] }).sum();
            if len > longest[p.lhs] {
                longest[p.lhs] = len;
                changed = true;
            }
        }
    }
    Some(longest[root])
}

/// All words of length at most `max_len` for every symbol of a grammar,
/// computed once and shared.
#[derive(Clone, Debug)]
pub struct LanguageTable {
    max_len: usize,
    // by_symbol[id][n] holds the words of length exactly n
    by_symbol: Vec<Vec<HashSet<Vec<usize>>>>,
}

impl LanguageTable {
    /// Least fixpoint of the productions, restricted to lengths `<= max_len`.
    /// Each round re-derives every production's yields from the current
    /// approximation until nothing new appears.
    pub fn build(g: &Grammar, max_len: usize) -> Self {
        let n_sym = g.num_symbols();
        let mut by_symbol: Vec<Vec<HashSet<Vec<usize>>>> = vec![vec![HashSet::new(); max_len + 1]; n_sym];
        if max_len >= 1 {
            for (id, layers) in by_symbol.iter_mut().enumerate().skip(g.num_nonterminals()) {
                layers[1].insert(vec![id]);
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for p in g.compiled() {
                // acc[n] = words of length n derived from the processed rhs prefix
                let mut acc: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); max_len + 1];
                acc[0].insert(Vec::new());
                for &s in &p.rhs {
                    let mut next: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); max_len + 1];
                    for (a, prefixes) in acc.iter().enumerate() {
                        if prefixes.is_empty() {
                            continue;
                        }
                        for (b, suffixes) in by_symbol[s].iter().enumerate().take(max_len - a + 1) {
                            for u in prefixes {
                                for v in suffixes {
                                    let mut w = u.clone();
                                    w.extend_from_slice(v);
                                    next[a + b].insert(w);
                                }
                            }
                        }
                    }
                    acc = next;
                }
                for (n, words) in acc.into_iter().enumerate() {
                    for w in words {
                        if by_symbol[p.lhs][n].insert(w) {
                            changed = true;
                        }
                    }
                }
            }
        }
        LanguageTable { max_len, by_symbol }
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub(crate) fn words_ids(&self, sym: usize, max_len: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.by_symbol[sym]
            .iter()
            .take(max_len.min(self.max_len) + 1)
            .flat_map(|s| s.iter())
    }
}

pub(crate) fn ids_to_word(g: &Grammar, ids: &[usize]) -> Word {
    Word(ids.iter().map(|&i| g.symbol(i).clone()).collect())
}

/// `{ w : x ⇒* w, |w| <= max_len }`.
pub fn enumerate_words(g: &Grammar, x: &Symbol, max_len: usize) -> BTreeSet<Word> {
    let Some(id) = g.id(x) else {
        return BTreeSet::new();
    };
    let table = LanguageTable::build(g, max_len);
    table.words_ids(id, max_len).map(|w| ids_to_word(g, w)).collect()
}
