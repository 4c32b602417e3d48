use crate::formula::Formula;

/// Negation normal form.
///
/// Implications and biconditionals are expanded, double negations removed
/// and negations pushed through connectives (De Morgan) and through both
/// kinds of quantifier (`~all x. f` becomes `ex x. ~f`). Constants are folded.
pub fn to_nnf(f: &Formula) -> Formula {
    signed(f, true)
}

fn signed(f: &Formula, positive: bool) -> Formula {
    let neg = |g: &Formula| signed(g, !positive);
    let pos = |g: &Formula| signed(g, positive);
    match f {
        Formula::Const(b) => Formula::Const(*b == positive),
        Formula::Pred { .. } | Formula::Equal(..) => {
            if positive {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(g) => neg(g),
        Formula::And(a, b) => connect(!positive, pos(a), pos(b)),
        Formula::Or(a, b) => connect(positive, pos(a), pos(b)),
        Formula::Implies(a, b) => connect(positive, neg(a), pos(b)),
        Formula::Iff(a, b) => {
            if positive {
                connect(
                    false,
                    connect(true, signed(a, false), signed(b, true)),
                    connect(true, signed(b, false), signed(a, true)),
                )
            } else {
                connect(
                    true,
                    connect(false, signed(a, true), signed(b, false)),
                    connect(false, signed(a, false), signed(b, true)),
                )
            }
        }
        Formula::ForallInd(v, g) | Formula::ExistsInd(v, g) => {
            let universal = matches!(f, Formula::ForallInd(..)) == positive;
            let body = pos(g);
            match body {
                Formula::Const(_) => body,
                body if universal => Formula::forall(v.clone(), body),
                body => Formula::exists(v.clone(), body),
            }
        }
        Formula::ForallPred(v, g) | Formula::ExistsPred(v, g) => {
            let universal = matches!(f, Formula::ForallPred(..)) == positive;
            let body = pos(g);
            match body {
                Formula::Const(_) => body,
                body if universal => Formula::forall_pred(v.clone(), body),
                body => Formula::exists_pred(v.clone(), body),
            }
        }
    }
}

/// `a | b` when `disjunction`, else `a & b`, folding constants.
fn connect(disjunction: bool, a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::Const(x), other) | (other, Formula::Const(x)) => {
            if x == disjunction {
                Formula::Const(x)
            } else {
                other
            }
        }
        (a, b) if disjunction => Formula::or(a, b),
        (a, b) => Formula::and(a, b),
    }
}

/// Whether negation is applied only to atoms and no `->`/`<->` remain.
pub fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::Not(g) => matches!(**g, Formula::Pred { .. } | Formula::Equal(..)),
        Formula::Implies(..) | Formula::Iff(..) => false,
        _ => f.children().into_iter().all(is_nnf),
    }
}
