//! Derived rules built from primitive ones: elimination of the implications
//! and type raising (double negation introduction) on either side.

use crate::error::TacticError;
use crate::proof::{Detail, ProofTree, RuleName};
use crate::types::{LambekType, Sequent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

fn mismatch(expected: impl ToString, found: impl ToString) -> TacticError {
    TacticError::Mismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn node(
    conclusion: Sequent,
    rule: RuleName,
    position: Option<usize>,
    split: Option<usize>,
    premises: Vec<ProofTree>,
) -> ProofTree {
    ProofTree {
        conclusion,
        rule,
        detail: Detail {
            position,
            split,
            ..Detail::none()
        },
        premises,
    }
}

/// From `Φ ⊢ φ` and `Ψ ⊢ φ\ψ`, a proof of `Φ, Ψ ⊢ ψ`.
pub fn elim_under(left: &ProofTree, right: &ProofTree) -> Result<ProofTree, TacticError> {
    let phi = &left.conclusion.succedent;
    let LambekType::Under(arg, psi) = &right.conclusion.succedent else {
        return Err(mismatch(format!("{phi}\\…"), &right.conclusion.succedent));
    };
    if **arg != *phi {
        return Err(mismatch(phi, arg));
    }
    let ant_l = &left.conclusion.antecedent;
    let ant_r = &right.conclusion.antecedent;
    let n = ant_l.len();
    let fun = right.conclusion.succedent.clone();

    // Φ, φ\ψ ⊢ ψ by UNDER_L against AX ψ ⊢ ψ.
    let applied = node(
        Sequent::new(ant_l.splice(n, n, &[fun]), (**psi).clone()),
        RuleName::UnderL,
        Some(n),
        Some(0),
        vec![left.clone(), ProofTree::ax((**psi).clone())],
    );
    Ok(node(
        Sequent::new(ant_l.concat(ant_r), (**psi).clone()),
        RuleName::Cut,
        Some(n),
        Some(n + ant_r.len()),
        vec![right.clone(), applied],
    ))
}

/// From `Φ ⊢ ψ/φ` and `Ψ ⊢ φ`, a proof of `Φ, Ψ ⊢ ψ`.
pub fn elim_over(left: &ProofTree, right: &ProofTree) -> Result<ProofTree, TacticError> {
    let phi = &right.conclusion.succedent;
    let LambekType::Over(psi, arg) = &left.conclusion.succedent else {
        return Err(mismatch(format!("…/{phi}"), &left.conclusion.succedent));
    };
    if **arg != *phi {
        return Err(mismatch(phi, arg));
    }
    let ant_l = &left.conclusion.antecedent;
    let ant_r = &right.conclusion.antecedent;
    let fun = left.conclusion.succedent.clone();

    // ψ/φ, Ψ ⊢ ψ by OVER_L against AX ψ ⊢ ψ.
    let mut ctx = vec![fun];
    ctx.extend(ant_r.iter().cloned());
    let applied = node(
        Sequent::new(ctx, (**psi).clone()),
        RuleName::OverL,
        Some(0),
        Some(1 + ant_r.len()),
        vec![right.clone(), ProofTree::ax((**psi).clone())],
    );
    Ok(node(
        Sequent::new(ant_l.concat(ant_r), (**psi).clone()),
        RuleName::Cut,
        Some(0),
        Some(ant_l.len()),
        vec![left.clone(), applied],
    ))
}

/// Type raising. From `Φ ⊢ φ`: `Φ ⊢ (ψ/φ)\ψ` for [`Side::Left`] and
/// `Φ ⊢ ψ/(φ\ψ)` for [`Side::Right`].
pub fn dni(t: &ProofTree, psi: &LambekType, side: Side) -> ProofTree {
    let ant = &t.conclusion.antecedent;
    let phi = t.conclusion.succedent.clone();
    let n = ant.len();
    match side {
        Side::Left => {
            let k = LambekType::over(psi.clone(), phi.clone());
            let applied = node(
                Sequent::new(ant.splice(0, 0, std::slice::from_ref(&k)), psi.clone()),
                RuleName::OverL,
                Some(0),
                Some(n + 1),
                vec![t.clone(), ProofTree::ax(psi.clone())],
            );
            node(
                Sequent::new(ant.clone(), LambekType::under(k, psi.clone())),
                RuleName::UnderR,
                None,
                None,
                vec![applied],
            )
        }
        Side::Right => {
            let k = LambekType::under(phi.clone(), psi.clone());
            let applied = node(
                Sequent::new(ant.splice(n, n, std::slice::from_ref(&k)), psi.clone()),
                RuleName::UnderL,
                Some(n),
                Some(0),
                vec![t.clone(), ProofTree::ax(psi.clone())],
            );
            node(
                Sequent::new(ant.clone(), LambekType::over(psi.clone(), k)),
                RuleName::OverR,
                None,
                None,
                vec![applied],
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::proof::check_proof;
    use crate::prover::{prove, SearchConfig};
    use crate::types::{parse_sequent, parse_type};

    fn proof(s: &str) -> ProofTree {
        let g = bundled::boolean();
        prove(&g, &parse_sequent(s, &g).unwrap(), &SearchConfig::default())
            .into_proof()
            .unwrap()
    }

    #[test]
    fn eliminations_compose_attack_examples() {
        let g = bundled::boolean();
        let test = proof("a , = |- T/V");
        let value = proof("b |- V");
        let t = elim_over(&test, &value).unwrap();
        assert_eq!(t.conclusion, parse_sequent("a , = , b |- T", &g).unwrap());
        assert!(check_proof(&g, &t).is_accept());

        let attack = proof("b , OR , 1 , = , 1 |- (T/V)\\E");
        let t = elim_under(&test, &attack).unwrap();
        assert_eq!(
            t.conclusion,
            parse_sequent("a , = , b , OR , 1 , = , 1 |- E", &g).unwrap()
        );
        assert!(check_proof(&g, &t).is_accept());
    }

    #[test]
    fn elimination_mismatch() {
        let g = bundled::boolean();
        let l = ProofTree::ax(parse_type("V", &g).unwrap());
        let r = ProofTree::ax(parse_type("T\\E", &g).unwrap());
        assert!(matches!(elim_under(&l, &r), Err(TacticError::Mismatch { .. })));
    }

    #[test]
    fn raising() {
        let g = bundled::boolean();
        let t = proof("b |- V");
        let psi = parse_type("T", &g).unwrap();
        let l = dni(&t, &psi, Side::Left);
        assert_eq!(l.conclusion, parse_sequent("b |- (T/V)\\T", &g).unwrap());
        assert!(check_proof(&g, &l).is_accept());
        let ax = ProofTree::ax(parse_type("V", &g).unwrap());
        let r = dni(&ax, &psi, Side::Right);
        assert_eq!(r.conclusion, parse_sequent("V |- T/(V\\T)", &g).unwrap());
        assert!(check_proof(&g, &r).is_accept());
        let twice = dni(&l, &psi, Side::Right);
        assert!(check_proof(&g, &twice).is_accept());
    }
}
