//! Lambek types, contexts and sequents, with their concrete syntax.
//!
//! Syntax: `x\y` takes an `x` on its left and yields a `y`; `y/x` takes an
//! `x` on its right; `x*y` is the product and `1` the empty-string type.
//! `*` binds tighter than the slashes, and a slash type nested directly
//! inside another slash must be parenthesised. Atoms that clash with the
//! syntax (such as a terminal named `1`) are written in double quotes.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use crate::error::SyntaxError;
use crate::grammar::{Grammar, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LambekType {
    Atom(Symbol),
    /// `arg\result`: needs an `arg` on the left.
    Under(Box<LambekType>, Box<LambekType>),
    /// `result/arg`: needs an `arg` on the right.
    Over(Box<LambekType>, Box<LambekType>),
    Prod(Box<LambekType>, Box<LambekType>),
    Unit,
}

impl LambekType {
    pub fn atom(s: Symbol) -> Self {
        LambekType::Atom(s)
    }

    pub fn under(arg: LambekType, result: LambekType) -> Self {
        LambekType::Under(Box::new(arg), Box::new(result))
    }

    pub fn over(result: LambekType, arg: LambekType) -> Self {
        LambekType::Over(Box::new(result), Box::new(arg))
    }

    pub fn prod(left: LambekType, right: LambekType) -> Self {
        LambekType::Prod(Box::new(left), Box::new(right))
    }

    pub fn as_atom(&self) -> Option<&Symbol> {
        match self {
            LambekType::Atom(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, LambekType::Atom(_))
    }

    pub fn is_implication(&self) -> bool {
        matches!(self, LambekType::Under(..) | LambekType::Over(..))
    }

    /// Connective nesting depth; atoms and the unit have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            LambekType::Atom(_) | LambekType::Unit => 0,
            LambekType::Under(a, b) | LambekType::Over(a, b) | LambekType::Prod(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            LambekType::Atom(_) | LambekType::Unit => 1,
            LambekType::Under(a, b) | LambekType::Over(a, b) | LambekType::Prod(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<Symbol> {
        fn go(t: &LambekType, out: &mut BTreeSet<Symbol>) {
            match t {
                LambekType::Atom(s) => {
                    out.insert(s.clone());
                }
                LambekType::Unit => {}
                LambekType::Under(a, b) | LambekType::Over(a, b) | LambekType::Prod(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Left-right mirror image: slashes swap and products reverse.
    pub fn mirror(&self) -> LambekType {
        match self {
            LambekType::Atom(_) | LambekType::Unit => self.clone(),
            LambekType::Under(a, r) => LambekType::over(r.mirror(), a.mirror()),
            LambekType::Over(r, a) => LambekType::under(a.mirror(), r.mirror()),
            LambekType::Prod(l, r) => LambekType::prod(r.mirror(), l.mirror()),
        }
    }
}

fn needs_quotes(name: &str) -> bool {
    name == "1"
        || name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '\\' | '/' | '*' | '(' | ')' | ',' | '"' | '|'))
}

fn write_atom(f: &mut fmt::Formatter<'_>, s: &Symbol) -> fmt::Result {
    if needs_quotes(s.name()) {
        write!(f, "\"{}\"", s.name())
    } else {
        f.write_str(s.name())
    }
}

struct Operand<'a>(&'a LambekType, bool);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for LambekType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambekType::Atom(s) => write_atom(f, s),
            LambekType::Unit => f.write_str("1"),
            LambekType::Under(a, r) => write!(
                f,
                "{}\\{}",
                Operand(a, a.is_implication()),
                Operand(r, r.is_implication())
            ),
            LambekType::Over(r, a) => write!(
                f,
                "{}/{}",
                Operand(r, r.is_implication()),
                Operand(a, a.is_implication())
            ),
            LambekType::Prod(l, r) => write!(
                f,
                "{}*{}",
                Operand(l, l.is_implication()),
                Operand(r, !r.is_atom() && !matches!(**r, LambekType::Unit))
            ),
        }
    }
}

/// An ordered sequence of types. Nothing ever reorders it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeContext(Vec<LambekType>);

impl TypeContext {
    pub fn new(items: Vec<LambekType>) -> Self {
        TypeContext(items)
    }

    pub fn empty() -> Self {
        TypeContext(Vec::new())
    }

    /// One atom per token of the word.
    pub fn from_word(w: &crate::grammar::Word) -> Self {
        TypeContext(w.tokens().iter().cloned().map(LambekType::Atom).collect())
    }

    pub fn items(&self) -> &[LambekType] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<LambekType> {
        self.0
    }

    /// `self[..from] ++ middle ++ self[to..]`
    pub fn splice(&self, from: usize, to: usize, middle: &[LambekType]) -> TypeContext {
        let mut v = Vec::with_capacity(self.0.len() - (to - from) + middle.len());
        v.extend_from_slice(&self.0[..from]);
        v.extend_from_slice(middle);
        v.extend_from_slice(&self.0[to..]);
        TypeContext(v)
    }

    pub fn concat(&self, other: &TypeContext) -> TypeContext {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        TypeContext(v)
    }

    pub fn slice(&self, from: usize, to: usize) -> TypeContext {
        TypeContext(self.0[from..to].to_vec())
    }
}

impl Deref for TypeContext {
    type Target = [LambekType];

    fn deref(&self) -> &[LambekType] {
        &self.0
    }
}

impl From<Vec<LambekType>> for TypeContext {
    fn from(v: Vec<LambekType>) -> Self {
        TypeContext(v)
    }
}

/// `antecedent ⊢ succedent`; the antecedent may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub antecedent: TypeContext,
    pub succedent: LambekType,
}

impl Sequent {
    pub fn new(antecedent: impl Into<TypeContext>, succedent: LambekType) -> Self {
        Sequent {
            antecedent: antecedent.into(),
            succedent,
        }
    }

    /// Reversed antecedent, every type mirrored.
    pub fn mirror(&self) -> Sequent {
        let items = self.antecedent.iter().rev().map(LambekType::mirror).collect::<Vec<_>>();
        Sequent::new(items, self.succedent.mirror())
    }

    pub fn atoms(&self) -> BTreeSet<Symbol> {
        let mut out = self.succedent.atoms();
        for t in self.antecedent.iter() {
            out.extend(t.atoms());
        }
        out
    }
}

/// Antecedent items are comma separated; a unit item is written `(1)` so it
/// cannot be confused with a terminal named `1`.
impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(" , ")?;
            }
            if *t == LambekType::Unit {
                f.write_str("(1)")?;
            } else {
                write!(f, "{t}")?;
            }
        }
        if self.antecedent.is_empty() {
            f.write_str("|- ")?;
        } else {
            f.write_str(" |- ")?;
        }
        write!(f, "{}", self.succedent)
    }
}

/// φ ⊴ ψ read as the sequent φ ⊢ ψ.
pub fn subtype_as_sequent(sub: &LambekType, sup: &LambekType) -> Sequent {
    Sequent::new(vec![sub.clone()], sup.clone())
}

#[derive(Clone, Debug, PartialEq)]
enum Lex {
    Open,
    Close,
    Under,
    Over,
    Star,
    Name(String),
    Quoted(String),
}

fn lex(text: &str, offset: usize) -> Result<Vec<(usize, Lex)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let col = offset + pos + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((col, Lex::Open));
                i += 1;
            }
            ')' => {
                out.push((col, Lex::Close));
                i += 1;
            }
            '\\' => {
                out.push((col, Lex::Under));
                i += 1;
            }
            '/' => {
                out.push((col, Lex::Over));
                i += 1;
            }
            '*' => {
                out.push((col, Lex::Star));
                i += 1;
            }
            '"' => {
                let mut j = i + 1;
                let mut name = String::new();
                while j < chars.len() && chars[j].1 != '"' {
                    name.push(chars[j].1);
                    j += 1;
                }
                if j == chars.len() {
                    return Err(SyntaxError::at(col, "unterminated quoted atom"));
                }
                if name.is_empty() {
                    return Err(SyntaxError::at(col, "empty quoted atom"));
                }
                out.push((col, Lex::Quoted(name)));
                i = j + 1;
            }
            ',' | '|' => return Err(SyntaxError::at(col, format!("unexpected `{c}`"))),
            _ => {
                let mut name = String::new();
                while i < chars.len() {
                    let c = chars[i].1;
                    if c.is_whitespace() || matches!(c, '(' | ')' | '\\' | '/' | '*' | '"' | ',' | '|') {
                        break;
                    }
                    name.push(c);
                    i += 1;
                }
                out.push((col, Lex::Name(name)));
            }
        }
    }
    Ok(out)
}

struct TypeParser<'a> {
    toks: Vec<(usize, Lex)>,
    pos: usize,
    end_col: usize,
    g: &'a Grammar,
}

impl TypeParser<'_> {
    fn peek(&self) -> Option<&Lex> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn implication(&mut self) -> Result<LambekType, SyntaxError> {
        let left = self.product()?;
        let t = match self.peek() {
            Some(Lex::Under) => {
                self.pos += 1;
                LambekType::under(left, self.product()?)
            }
            Some(Lex::Over) => {
                self.pos += 1;
                LambekType::over(left, self.product()?)
            }
            _ => return Ok(left),
        };
        if matches!(self.peek(), Some(Lex::Under | Lex::Over)) {
            return Err(SyntaxError::at(
                self.col(),
                "nested implications need explicit parentheses",
            ));
        }
        Ok(t)
    }

    fn product(&mut self) -> Result<LambekType, SyntaxError> {
        let mut t = self.primary()?;
        while self.peek() == Some(&Lex::Star) {
            self.pos += 1;
            t = LambekType::prod(t, self.primary()?);
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<LambekType, SyntaxError> {
        let col = self.col();
        match self.toks.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Lex::Open) => {
                self.pos += 1;
                let t = self.implication()?;
                if self.peek() != Some(&Lex::Close) {
                    return Err(SyntaxError::at(self.col(), "expected `)`"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(Lex::Name(n)) if n == "1" => {
                self.pos += 1;
                Ok(LambekType::Unit)
            }
            Some(Lex::Name(n)) | Some(Lex::Quoted(n)) => {
                self.pos += 1;
                self.g
                    .lookup(&n)
                    .map(LambekType::Atom)
                    .ok_or(SyntaxError::UnknownAtom(n))
            }
            Some(_) => Err(SyntaxError::at(col, "expected a type")),
            None => Err(SyntaxError::at(col, "unexpected end of input")),
        }
    }
}

fn parse_type_at(text: &str, offset: usize, g: &Grammar) -> Result<LambekType, SyntaxError> {
    let toks = lex(text, offset)?;
    let mut p = TypeParser {
        toks,
        pos: 0,
        end_col: offset + text.len() + 1,
        g,
    };
    let t = p.implication()?;
    if p.pos != p.toks.len() {
        return Err(SyntaxError::at(p.col(), "unexpected trailing input"));
    }
    Ok(t)
}

/// Parses a type; every atom must be a symbol of `g`.
pub fn parse_type(text: &str, g: &Grammar) -> Result<LambekType, SyntaxError> {
    parse_type_at(text, 0, g)
}

fn is_bare_token(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '\\' | '/' | '*' | '"' | ',' | '|'))
}

/// Parses `t1 , t2 , … |- t`.
///
/// An antecedent item that is a bare token naming a grammar symbol is that
/// symbol's atom, even when it is spelled `1`. An item made of several such
/// tokens separated by spaces stands for one atom per token. Anything else
/// is parsed as a type.
pub fn parse_sequent(text: &str, g: &Grammar) -> Result<Sequent, SyntaxError> {
    let turnstile = find_turnstile(text)?;
    let (left, right) = (&text[..turnstile], &text[turnstile + 2..]);
    let succedent = parse_type_at(right, turnstile + 2, g)?;
    let mut antecedent = Vec::new();
    if !left.trim().is_empty() {
        let mut start = 0;
        for piece in split_top_level(left) {
            let item = &left[start..start + piece];
            let item_col = start;
            start += piece + 1;
            let trimmed = item.trim();
            if trimmed.is_empty() {
                return Err(SyntaxError::at(item_col + 1, "empty antecedent item"));
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            if tokens.iter().all(|t| is_bare_token(t) && g.lookup(t).is_some()) {
                antecedent.extend(tokens.iter().map(|t| LambekType::Atom(g.lookup(t).unwrap())));
            } else {
                antecedent.push(parse_type_at(item, item_col, g)?);
            }
        }
    }
    Ok(Sequent::new(antecedent, succedent))
}

fn find_turnstile(text: &str) -> Result<usize, SyntaxError> {
    let mut in_quote = false;
    let mut found = None;
    let bytes = text.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'"' => in_quote = !in_quote,
            b'|' if !in_quote && bytes.get(i + 1) == Some(&b'-') => {
                if found.is_some() {
                    return Err(SyntaxError::at(i + 1, "more than one `|-`"));
                }
                found = Some(i);
            }
            _ => {}
        }
    }
    found.ok_or_else(|| SyntaxError::at(text.len() + 1, "missing `|-`"))
}

// Byte lengths of the comma-separated pieces, ignoring commas in quotes.
fn split_top_level(text: &str) -> Vec<usize> {
    let mut out = Vec::new();
    let mut in_quote = false;
    let mut last = 0;
    for (i, c) in text.char_indices() {
        match c {
            '"' => in_quote = !in_quote,
            ',' if !in_quote => {
                out.push(i - last);
                last = i + 1;
            }
            _ => {}
        }
    }
    out.push(text.len() - last);
    out
}

/// All types over `atoms` with connective depth at most `depth`, ordered by
/// size and then by rendering. The unit appears only at the top level;
/// operands of connectives range over the atoms and smaller compound types.
pub fn type_universe(g: &Grammar, atoms: &[Symbol], depth: usize) -> Result<Vec<LambekType>, SyntaxError> {
    let mut base: BTreeSet<LambekType> = BTreeSet::new();
    for a in atoms {
        if !g.contains(a) {
            return Err(SyntaxError::UnknownAtom(a.name().to_string()));
        }
        base.insert(LambekType::Atom(a.clone()));
    }
    let mut all: BTreeSet<LambekType> = base.clone();
    for _ in 0..depth {
        let operands: Vec<LambekType> = all.iter().cloned().collect();
        for a in &operands {
            for b in &operands {
                all.insert(LambekType::under(a.clone(), b.clone()));
                all.insert(LambekType::over(a.clone(), b.clone()));
                all.insert(LambekType::prod(a.clone(), b.clone()));
            }
        }
    }
    all.insert(LambekType::Unit);
    let mut keyed: Vec<(usize, String, LambekType)> = all.into_iter().map(|t| (t.size(), t.to_string(), t)).collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(keyed.into_iter().map(|(_, _, t)| t).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn nt(s: &str) -> LambekType {
        LambekType::Atom(Symbol::nonterminal(s))
    }

    fn t(s: &str) -> LambekType {
        LambekType::Atom(Symbol::terminal(s))
    }

    #[test]
    fn parses_operator_types() {
        let g = bundled::boolean();
        assert_eq!(
            parse_type("(T\\T)/T", &g).unwrap(),
            LambekType::over(LambekType::under(nt("T"), nt("T")), nt("T"))
        );
        assert_eq!(parse_type("1", &g).unwrap(), LambekType::Unit);
        assert_eq!(parse_type("\"1\"", &g).unwrap(), t("1"));
        assert_eq!(
            parse_type("(T/V)\\E", &g).unwrap(),
            LambekType::under(LambekType::over(nt("T"), nt("V")), nt("E"))
        );
        assert_eq!(
            parse_type("T*V*E", &g).unwrap(),
            LambekType::prod(LambekType::prod(nt("T"), nt("V")), nt("E"))
        );
        assert_eq!(
            parse_type("T*V\\E", &g).unwrap(),
            LambekType::under(LambekType::prod(nt("T"), nt("V")), nt("E"))
        );
    }

    #[test]
    fn parse_errors() {
        let g = bundled::boolean();
        assert!(matches!(
            parse_type("T\\T/T", &g),
            Err(SyntaxError::Parse { pos: 4, .. })
        ));
        assert_eq!(parse_type("Q", &g), Err(SyntaxError::UnknownAtom("Q".into())));
        assert!(matches!(parse_type("(T", &g), Err(SyntaxError::Parse { .. })));
        assert!(matches!(parse_type("", &g), Err(SyntaxError::Parse { .. })));
        assert!(matches!(parse_type("T T", &g), Err(SyntaxError::Parse { pos: 3, .. })));
    }

    #[test]
    fn renders_canonically() {
        let g = bundled::boolean();
        for s in [
            "(T\\T)/T", "(T/V)\\E", "E/(V\\T)", "T*V*E", "T*(V*E)", "(T/V)*E", "1", "\"1\"", "T*1",
        ] {
            assert_eq!(parse_type(s, &g).unwrap().to_string(), s);
        }
        assert_eq!(parse_type("((T))", &g).unwrap().to_string(), "T");
        assert_eq!(parse_type("(T*V)\\E", &g).unwrap().to_string(), "T*V\\E");
    }

    #[test]
    fn sequents() {
        let g = bundled::boolean();
        let s = parse_sequent("b , OR , 1 , = , 1 |- (T/V)\\E", &g).unwrap();
        assert_eq!(s.antecedent.len(), 5);
        assert_eq!(s.antecedent[2], t("1"));
        assert_eq!(s.to_string(), "b , OR , \"1\" , = , \"1\" |- (T/V)\\E");
        assert_eq!(parse_sequent(&s.to_string(), &g).unwrap(), s);
        let e = parse_sequent("|- 1", &g).unwrap();
        assert!(e.antecedent.is_empty());
        assert_eq!(e.succedent, LambekType::Unit);
        assert_eq!(e.to_string(), "|- 1");
        let words = parse_sequent("a = b |- T", &g).unwrap();
        assert_eq!(words.antecedent.len(), 3);
        let unit = parse_sequent("(1) , T |- T", &g).unwrap();
        assert_eq!(unit.antecedent[0], LambekType::Unit);
        assert_eq!(parse_sequent(&unit.to_string(), &g).unwrap(), unit);
        assert!(parse_sequent("T |- T |- T", &g).is_err());
        assert!(parse_sequent("T T", &g).is_err());
        assert!(parse_sequent("T , , T |- T", &g).is_err());
    }

    #[test]
    fn universe_counts() {
        let g = bundled::boolean();
        let tv = [Symbol::nonterminal("T"), Symbol::nonterminal("V")];
        let u0 = type_universe(&g, &tv, 0).unwrap();
        let shown: Vec<String> = u0.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["1", "T", "V"]);
        let u1 = type_universe(&g, &tv, 1).unwrap();
        assert_eq!(u1.len(), 15);
        assert_eq!(u1.iter().filter(|t| matches!(t, LambekType::Under(..))).count(), 4);
        assert_eq!(u1.iter().filter(|t| matches!(t, LambekType::Over(..))).count(), 4);
        assert_eq!(u1.iter().filter(|t| matches!(t, LambekType::Prod(..))).count(), 4);
        let tve = [
            Symbol::nonterminal("T"),
            Symbol::nonterminal("V"),
            Symbol::nonterminal("E"),
        ];
        let u2 = type_universe(&g, &tve, 2).unwrap();
        assert!(u2.contains(&parse_type("(T/V)\\E", &g).unwrap()));
        assert!(u2.contains(&parse_type("E/(V\\T)", &g).unwrap()));
        assert_eq!(type_universe(&g, &tve, 1).unwrap().len(), 31);
    }

    #[test]
    fn mirror_swaps_directions() {
        let g = bundled::boolean();
        let left = parse_type("(T/V)\\E", &g).unwrap();
        assert_eq!(left.mirror().to_string(), "E/(V\\T)");
        assert_eq!(left.mirror().mirror(), left);
    }
}
