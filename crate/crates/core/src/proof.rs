//! Proof trees for the sequent calculus, an independent checker, and text and
//! JSON renderings.

use std::fmt::{self, Write as _};

use serde_json::{json, Map, Value};

use crate::error::ProofFormatError;
use crate::grammar::Grammar;
use crate::types::{parse_type, LambekType, Sequent, TypeContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleName {
    Ax,
    Cut,
    UnderL,
    UnderR,
    OverL,
    OverR,
    ProdL,
    ProdR,
    Gram,
    EpsL,
    EpsR,
    /// CUT whose left premise is a GRAM axiom, kept as one step.
    Contract,
    /// A caller-supplied axiom.
    Hyp,
}

impl RuleName {
    pub const ALL: [RuleName; 13] = [
        RuleName::Ax,
        RuleName::Cut,
        RuleName::UnderL,
        RuleName::UnderR,
        RuleName::OverL,
        RuleName::OverR,
        RuleName::ProdL,
        RuleName::ProdR,
        RuleName::Gram,
        RuleName::EpsL,
        RuleName::EpsR,
        RuleName::Contract,
        RuleName::Hyp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleName::Ax => "AX",
            RuleName::Cut => "CUT",
            RuleName::UnderL => "UNDER_L",
            RuleName::UnderR => "UNDER_R",
            RuleName::OverL => "OVER_L",
            RuleName::OverR => "OVER_R",
            RuleName::ProdL => "PROD_L",
            RuleName::ProdR => "PROD_R",
            RuleName::Gram => "GRAM",
            RuleName::EpsL => "EPS_L",
            RuleName::EpsR => "EPS_R",
            RuleName::Contract => "CONTRACT",
            RuleName::Hyp => "HYP",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleName> {
        RuleName::ALL.into_iter().find(|r| r.as_str() == s)
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Rule-specific data. Which fields a rule uses:
///
/// | rule | fields |
/// |------|--------|
/// | GRAM | `production` |
/// | CONTRACT | `production`, `position` (start of the rhs occurrence) |
/// | EPS_L, PROD_L | `position` of the principal formula |
/// | PROD_R | `split`: antecedent length of the left premise |
/// | UNDER_L | `position` of `φ\ψ`, `split`: start of the argument context |
/// | OVER_L | `position` of `ψ/φ`, `split`: end of the argument context |
/// | CUT | `position` and `split`: bounds of the context proving the cut formula |
/// | HYP | `axiom` index |
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Detail {
    pub production: Option<usize>,
    pub position: Option<usize>,
    pub split: Option<usize>,
    pub axiom: Option<usize>,
}

impl Detail {
    pub fn none() -> Self {
        Detail::default()
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        let fields = [
            ("production", self.production),
            ("position", self.position),
            ("split", self.split),
            ("axiom", self.axiom),
        ];
        for (k, v) in fields {
            if let Some(v) = v {
                m.insert(k.to_string(), json!(v));
            }
        }
        Value::Object(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofTree {
    pub conclusion: Sequent,
    pub rule: RuleName,
    pub detail: Detail,
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    pub fn leaf(conclusion: Sequent, rule: RuleName, detail: Detail) -> Self {
        ProofTree {
            conclusion,
            rule,
            detail,
            premises: Vec::new(),
        }
    }

    pub fn ax(t: LambekType) -> Self {
        ProofTree::leaf(Sequent::new(vec![t.clone()], t), RuleName::Ax, Detail::none())
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::height).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::size).sum::<usize>()
    }

    /// Number of nodes using `rule`.
    pub fn count_rule(&self, rule: RuleName) -> usize {
        usize::from(self.rule == rule) + self.premises.iter().map(|p| p.count_rule(rule)).sum::<usize>()
    }

    /// Replaces every CONTRACT node by the CUT and GRAM pair it abbreviates.
    pub fn expand_contract(&self, g: &Grammar) -> ProofTree {
        let premises: Vec<ProofTree> = self.premises.iter().map(|p| p.expand_contract(g)).collect();
        if self.rule != RuleName::Contract {
            return ProofTree {
                premises,
                ..self.clone()
            };
        }
        let (Some(r), Some(pos)) = (self.detail.production, self.detail.position) else {
            return ProofTree {
                premises,
                ..self.clone()
            };
        };
        let Some(p) = g.production(r) else {
            return ProofTree {
                premises,
                ..self.clone()
            };
        };
        let gram = ProofTree::leaf(
            Sequent::new(
                p.rhs.iter().cloned().map(LambekType::Atom).collect::<Vec<_>>(),
                LambekType::Atom(p.lhs.clone()),
            ),
            RuleName::Gram,
            Detail {
                production: Some(r),
                ..Detail::none()
            },
        );
        let mut all = vec![gram];
        all.extend(premises);
        ProofTree {
            conclusion: self.conclusion.clone(),
            rule: RuleName::Cut,
            detail: Detail {
                position: Some(pos),
                split: Some(pos + p.rhs.len()),
                ..Detail::none()
            },
            premises: all,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckResult {
    Accept,
    /// Path of premise indices from the root to the offending node.
    Reject {
        path: Vec<usize>,
        reason: String,
    },
}

impl CheckResult {
    pub fn is_accept(&self) -> bool {
        matches!(self, CheckResult::Accept)
    }
}

pub fn check_proof(g: &Grammar, t: &ProofTree) -> CheckResult {
    check_proof_with_axioms(g, &[], t)
}

/// Like [`check_proof`], with HYP leaves resolved against `axioms`.
pub fn check_proof_with_axioms(g: &Grammar, axioms: &[Sequent], t: &ProofTree) -> CheckResult {
    let mut path = Vec::new();
    match check_node(g, axioms, t, &mut path) {
        Ok(()) => CheckResult::Accept,
        Err(reason) => CheckResult::Reject { path, reason },
    }
}

fn check_node(g: &Grammar, axioms: &[Sequent], t: &ProofTree, path: &mut Vec<usize>) -> Result<(), String> {
    check_schema(g, axioms, t)?;
    for (i, p) in t.premises.iter().enumerate() {
        path.push(i);
        check_node(g, axioms, p, path)?;
        path.pop();
    }
    Ok(())
}

fn premise_count(t: &ProofTree, n: usize) -> Result<(), String> {
    if t.premises.len() == n {
        Ok(())
    } else {
        Err(format!("{} expects {n} premises, found {}", t.rule, t.premises.len()))
    }
}

fn expect_eq<T: PartialEq + fmt::Display>(what: &str, want: &T, got: &T) -> Result<(), String> {
    if want == got {
        Ok(())
    } else {
        Err(format!("{what}: expected {want}, found {got}"))
    }
}

fn expect_seq(what: &str, want: &Sequent, got: &Sequent) -> Result<(), String> {
    expect_eq(what, want, got)
}

fn field(v: Option<usize>, name: &str) -> Result<usize, String> {
    v.ok_or_else(|| format!("missing detail field `{name}`"))
}

fn check_schema(g: &Grammar, axioms: &[Sequent], t: &ProofTree) -> Result<(), String> {
    let ant = &t.conclusion.antecedent;
    let suc = &t.conclusion.succedent;
    let n = ant.len();
    match t.rule {
        RuleName::Ax => {
            premise_count(t, 0)?;
            if n != 1 || ant[0] != *suc {
                return Err("AX needs a conclusion of the form φ ⊢ φ".into());
            }
        }
        RuleName::Gram => {
            premise_count(t, 0)?;
            let r = field(t.detail.production, "production")?;
            let p = g.production(r).ok_or_else(|| format!("no production {r}"))?;
            let want = Sequent::new(
                p.rhs.iter().cloned().map(LambekType::Atom).collect::<Vec<_>>(),
                LambekType::Atom(p.lhs.clone()),
            );
            expect_seq("GRAM conclusion", &want, &t.conclusion)?;
        }
        RuleName::Hyp => {
            premise_count(t, 0)?;
            let i = field(t.detail.axiom, "axiom")?;
            let ax = axioms.get(i).ok_or_else(|| format!("no axiom {i}"))?;
            expect_seq("HYP conclusion", ax, &t.conclusion)?;
        }
        RuleName::EpsR => {
            premise_count(t, 0)?;
            if n != 0 || *suc != LambekType::Unit {
                return Err("EPS_R needs the conclusion ⊢ 1".into());
            }
        }
        RuleName::EpsL => {
            premise_count(t, 1)?;
            let k = field(t.detail.position, "position")?;
            if k >= n || ant[k] != LambekType::Unit {
                return Err(format!("EPS_L: no unit at position {k}"));
            }
            let want = Sequent::new(ant.splice(k, k + 1, &[]), suc.clone());
            expect_seq("EPS_L premise", &want, &t.premises[0].conclusion)?;
        }
        RuleName::ProdL => {
            premise_count(t, 1)?;
            let k = field(t.detail.position, "position")?;
            let Some(LambekType::Prod(a, b)) = ant.get(k) else {
                return Err(format!("PROD_L: no product at position {k}"));
            };
            let want = Sequent::new(ant.splice(k, k + 1, &[(**a).clone(), (**b).clone()]), suc.clone());
            expect_seq("PROD_L premise", &want, &t.premises[0].conclusion)?;
        }
        RuleName::ProdR => {
            premise_count(t, 2)?;
            let j = field(t.detail.split, "split")?;
            let LambekType::Prod(a, b) = suc else {
                return Err("PROD_R needs a product succedent".into());
            };
            if j > n {
                return Err(format!("PROD_R: split {j} out of range"));
            }
            expect_seq(
                "PROD_R left premise",
                &Sequent::new(ant.slice(0, j), (**a).clone()),
                &t.premises[0].conclusion,
            )?;
            expect_seq(
                "PROD_R right premise",
                &Sequent::new(ant.slice(j, n), (**b).clone()),
                &t.premises[1].conclusion,
            )?;
        }
        RuleName::UnderR => {
            premise_count(t, 1)?;
            let LambekType::Under(a, b) = suc else {
                return Err("UNDER_R needs a succedent φ\\ψ".into());
            };
            let want = Sequent::new(ant.splice(0, 0, &[(**a).clone()]), (**b).clone());
            expect_seq("UNDER_R premise", &want, &t.premises[0].conclusion)?;
        }
        RuleName::OverR => {
            premise_count(t, 1)?;
            let LambekType::Over(b, a) = suc else {
                return Err("OVER_R needs a succedent ψ/φ".into());
            };
            let want = Sequent::new(ant.splice(n, n, &[(**a).clone()]), (**b).clone());
            expect_seq("OVER_R premise", &want, &t.premises[0].conclusion)?;
        }
        RuleName::UnderL => {
            premise_count(t, 2)?;
            let k = field(t.detail.position, "position")?;
            let j = field(t.detail.split, "split")?;
            let Some(LambekType::Under(a, b)) = ant.get(k) else {
                return Err(format!("UNDER_L: no φ\\ψ at position {k}"));
            };
            if j > k {
                return Err(format!("UNDER_L: split {j} after position {k}"));
            }
            expect_seq(
                "UNDER_L argument premise",
                &Sequent::new(ant.slice(j, k), (**a).clone()),
                &t.premises[0].conclusion,
            )?;
            let main = Sequent::new(ant.splice(j, k + 1, &[(**b).clone()]), suc.clone());
            expect_seq("UNDER_L main premise", &main, &t.premises[1].conclusion)?;
        }
        RuleName::OverL => {
            premise_count(t, 2)?;
            let k = field(t.detail.position, "position")?;
            let j = field(t.detail.split, "split")?;
            let Some(LambekType::Over(b, a)) = ant.get(k) else {
                return Err(format!("OVER_L: no ψ/φ at position {k}"));
            };
            if j <= k || j > n {
                return Err(format!("OVER_L: split {j} out of range"));
            }
            expect_seq(
                "OVER_L argument premise",
                &Sequent::new(ant.slice(k + 1, j), (**a).clone()),
                &t.premises[0].conclusion,
            )?;
            let main = Sequent::new(ant.splice(k, j, &[(**b).clone()]), suc.clone());
            expect_seq("OVER_L main premise", &main, &t.premises[1].conclusion)?;
        }
        RuleName::Cut => {
            premise_count(t, 2)?;
            let p = field(t.detail.position, "position")?;
            let q = field(t.detail.split, "split")?;
            if p > q || q > n {
                return Err(format!("CUT: bounds {p}..{q} out of range"));
            }
            let chi = t.premises[0].conclusion.succedent.clone();
            expect_eq(
                "CUT left antecedent",
                &ant.slice(p, q),
                &t.premises[0].conclusion.antecedent,
            )?;
            let main = Sequent::new(ant.splice(p, q, &[chi]), suc.clone());
            expect_seq("CUT right premise", &main, &t.premises[1].conclusion)?;
        }
        RuleName::Contract => {
            premise_count(t, 1)?;
            let r = field(t.detail.production, "production")?;
            let pos = field(t.detail.position, "position")?;
            let prod = g.production(r).ok_or_else(|| format!("no production {r}"))?;
            let rhs: Vec<LambekType> = prod.rhs.iter().cloned().map(LambekType::Atom).collect();
            if pos + rhs.len() > n || ant[pos..pos + rhs.len()] != rhs[..] {
                return Err(format!("CONTRACT: `{prod}` does not occur at position {pos}"));
            }
            let main = Sequent::new(
                ant.splice(pos, pos + rhs.len(), &[LambekType::Atom(prod.lhs.clone())]),
                suc.clone(),
            );
            expect_seq("CONTRACT premise", &main, &t.premises[0].conclusion)?;
        }
    }
    Ok(())
}

impl fmt::Display for TypeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", items.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofFormat {
    Text,
    Json,
}

pub fn render_proof(g: &Grammar, t: &ProofTree, format: ProofFormat) -> String {
    match format {
        ProofFormat::Text => render_text(g, t),
        ProofFormat::Json => serde_json::to_string_pretty(&proof_to_json(t)).expect("serializable"),
    }
}

/// One sequent per line with its rule; premises indented two spaces.
pub fn render_text(g: &Grammar, t: &ProofTree) -> String {
    fn go(g: &Grammar, t: &ProofTree, depth: usize, out: &mut String) {
        for _ in 0..depth {
            out.push_str("  ");
        }
        let _ = write!(out, "{}   [{}", t.conclusion, t.rule);
        if let Some(p) = t.detail.production.and_then(|r| g.production(r)) {
            let _ = write!(out, " {p}");
        }
        if let Some(i) = t.detail.axiom {
            let _ = write!(out, " #{i}");
        }
        out.push_str("]\n");
        for p in &t.premises {
            go(g, p, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(g, t, 0, &mut out);
    out
}

pub fn sequent_to_json(s: &Sequent) -> Value {
    json!({
        "antecedent": s.antecedent.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "succedent": s.succedent.to_string(),
    })
}

pub fn proof_to_json(t: &ProofTree) -> Value {
    json!({
        "conclusion": sequent_to_json(&t.conclusion),
        "rule": t.rule.as_str(),
        "detail": t.detail.to_json(),
        "premises": t.premises.iter().map(proof_to_json).collect::<Vec<_>>(),
    })
}

fn malformed(msg: impl Into<String>) -> ProofFormatError {
    ProofFormatError::Malformed(msg.into())
}

pub fn sequent_from_json(g: &Grammar, v: &Value) -> Result<Sequent, ProofFormatError> {
    let ant = v
        .get("antecedent")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("conclusion.antecedent must be an array"))?;
    let items = ant
        .iter()
        .map(|x| {
            let s = x
                .as_str()
                .ok_or_else(|| malformed("antecedent items must be strings"))?;
            Ok(parse_type(s, g)?)
        })
        .collect::<Result<Vec<_>, ProofFormatError>>()?;
    let suc = v
        .get("succedent")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed("conclusion.succedent must be a string"))?;
    Ok(Sequent::new(items, parse_type(suc, g)?))
}

/// Inverse of [`proof_to_json`]. The result is not checked.
pub fn proof_from_json(g: &Grammar, v: &Value) -> Result<ProofTree, ProofFormatError> {
    let conclusion = sequent_from_json(g, v.get("conclusion").ok_or_else(|| malformed("missing conclusion"))?)?;
    let rule_name = v
        .get("rule")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed("missing rule"))?;
    let rule = RuleName::from_name(rule_name).ok_or_else(|| malformed(format!("unknown rule `{rule_name}`")))?;
    let d = v.get("detail").cloned().unwrap_or_else(|| json!({}));
    let get = |k: &str| -> Result<Option<usize>, ProofFormatError> {
        match d.get(k) {
            None | Some(Value::Null) => Ok(None),
            Some(x) => x
                .as_u64()
                .map(|n| Some(n as usize))
                .ok_or_else(|| malformed(format!("detail.{k} must be a natural number"))),
        }
    };
    let detail = Detail {
        production: get("production")?,
        position: get("position")?,
        split: get("split")?,
        axiom: get("axiom")?,
    };
    let premises = match v.get("premises") {
        None => Vec::new(),
        Some(Value::Array(ps)) => ps.iter().map(|p| proof_from_json(g, p)).collect::<Result<_, _>>()?,
        Some(_) => return Err(malformed("premises must be an array")),
    };
    Ok(ProofTree {
        conclusion,
        rule,
        detail,
        premises,
    })
}
