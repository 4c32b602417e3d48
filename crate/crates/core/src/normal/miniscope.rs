use crate::formula::Formula;

/// Scope normalization for individual quantifiers on an NNF formula.
///
/// - `all x` over a conjunction keeps only the conjuncts that mention `x`;
///   the rest move outside (and dually `ex x` over a disjunction).
/// - `all x` over a disjunction moves quantified disjuncts not mentioning
///   `x` outside, while ones built from letters alone stay inside.
/// - Sibling `all` quantifiers of a conjunction merge into one
///   (`(all x. F(x)) & (all y. G(y))` becomes `all x. (F(x) & G(x))`), and
///   sibling `ex` quantifiers of a disjunction likewise.
/// - Siblings built from propositional letters alone join a neighbouring
///   quantifier of the other kind: `(all x. F(x)) | p` becomes
///   `all x. (F(x) | p)`.
///
/// Predicate quantifiers are left where they are.
pub fn miniscope(f: &Formula) -> Formula {
    match f {
        Formula::And(..) | Formula::Or(..) => {
            let conj = matches!(f, Formula::And(..));
            let mut ops = Vec::new();
            flatten(f, conj, &mut ops);
            let ops: Vec<Formula> = ops.iter().map(|g| miniscope(g)).collect();
            let mut flat = Vec::new();
            for g in &ops {
                flatten(g, conj, &mut flat);
            }
            combine(conj, flat)
        }
        Formula::ForallInd(v, body) | Formula::ExistsInd(v, body) => {
            let universal = matches!(f, Formula::ForallInd(..));
            scope(universal, v, miniscope(body))
        }
        Formula::Not(g) => Formula::not(miniscope(g)),
        Formula::ForallPred(v, body) => Formula::forall_pred(v.clone(), miniscope(body)),
        Formula::ExistsPred(v, body) => Formula::exists_pred(v.clone(), miniscope(body)),
        Formula::Implies(a, b) => Formula::implies(miniscope(a), miniscope(b)),
        Formula::Iff(a, b) => Formula::iff(miniscope(a), miniscope(b)),
        _ => f.clone(),
    }
}

/// Quantifier-free and free of individual names.
fn letters_only(f: &Formula) -> bool {
    let mut ok = true;
    f.walk(&mut |g| {
        ok &= !matches!(
            g,
            Formula::Pred { arg: Some(_), .. }
                | Formula::Equal(..)
                | Formula::ForallInd(..)
                | Formula::ExistsInd(..)
                | Formula::ForallPred(..)
                | Formula::ExistsPred(..)
        )
    });
    ok
}

fn flatten(f: &Formula, conj: bool, out: &mut Vec<Formula>) {
    match f {
        Formula::And(a, b) if conj => {
            flatten(a, conj, out);
            flatten(b, conj, out);
        }
        Formula::Or(a, b) if !conj => {
            flatten(a, conj, out);
            flatten(b, conj, out);
        }
        other => out.push(other.clone()),
    }
}

fn rebuild(conj: bool, ops: Vec<Formula>) -> Formula {
    if conj {
        Formula::and_all(ops)
    } else {
        Formula::or_all(ops)
    }
}

fn quantified(universal: bool, v: &str, body: Formula) -> Formula {
    if universal {
        Formula::forall(v, body)
    } else {
        Formula::exists(v, body)
    }
}

/// Places `body` under a quantifier, extracting what the rules allow.
fn scope(universal: bool, v: &str, body: Formula) -> Formula {
    if !body.occurs_free(v) {
        return body;
    }
    // `all` distributes over `&`, `ex` over `|`.
    let splits = matches!(body, Formula::And(..)) == universal;
    let mut ops = Vec::new();
    flatten(&body, matches!(body, Formula::And(..)), &mut ops);
    if ops.len() < 2 {
        return quantified(universal, v, body);
    }
    let is_and = matches!(body, Formula::And(..));
    let (inside, outside): (Vec<Formula>, Vec<Formula>) = ops
        .into_iter()
        .partition(|g| g.occurs_free(v) || (!splits && letters_only(g)));
    if outside.is_empty() {
        return quantified(universal, v, rebuild(is_and, inside));
    }
    let mut parts = vec![quantified(universal, v, rebuild(is_and, inside))];
    parts.extend(outside);
    rebuild(is_and, parts)
}

fn combine(conj: bool, ops: Vec<Formula>) -> Formula {
    // Quantifiers of the kind that merges over this connective.
    let merges = |g: &Formula| {
        if conj {
            matches!(g, Formula::ForallInd(..))
        } else {
            matches!(g, Formula::ExistsInd(..))
        }
    };
    let mut merged: Option<(String, Vec<Formula>)> = None;
    let mut rest = Vec::new();
    for g in ops {
        let taken = match (&mut merged, &g) {
            (_, _) if !merges(&g) => false,
            (None, Formula::ForallInd(v, b) | Formula::ExistsInd(v, b)) => {
                merged = Some((v.clone(), vec![(**b).clone()]));
                true
            }
            (Some((v, bodies)), Formula::ForallInd(w, b) | Formula::ExistsInd(w, b)) => {
                match b.substitute(w, v) {
                    Ok(renamed) => {
                        bodies.push(renamed);
                        true
                    }
                    Err(_) => false,
                }
            }
            _ => false,
        };
        if !taken {
            rest.push(g);
        }
    }
    let mut ops = Vec::new();
    if let Some((v, bodies)) = merged {
        let body = rebuild(conj, bodies);
        ops.push(scope(conj, &v, body));
    }
    ops.extend(rest);

    // Quantifier-free siblings move into the first quantifier of the other kind.
    let joins = |g: &Formula| {
        if conj {
            matches!(g, Formula::ExistsInd(..))
        } else {
            matches!(g, Formula::ForallInd(..))
        }
    };
    if let Some(pos) = ops.iter().position(joins) {
        let v = match &ops[pos] {
            Formula::ForallInd(v, _) | Formula::ExistsInd(v, _) => v.clone(),
            _ => unreachable!(),
        };
        if ops.iter().enumerate().any(|(i, g)| i != pos && letters_only(g)) {
            let (movable, stay): (Vec<(usize, Formula)>, Vec<(usize, Formula)>) = ops
                .into_iter()
                .enumerate()
                .partition(|(i, g)| *i != pos && letters_only(g));
            let mut out = Vec::new();
            for (i, g) in stay {
                if i == pos {
                    let body = match g {
                        Formula::ForallInd(_, b) | Formula::ExistsInd(_, b) => *b,
                        _ => unreachable!(),
                    };
                    let mut parts = Vec::new();
                    flatten(&body, conj, &mut parts);
                    parts.extend(movable.iter().map(|(_, m)| m.clone()));
                    out.push(quantified(!conj, &v, rebuild(conj, parts)));
                } else {
                    out.push(g);
                }
            }
            return rebuild(conj, out);
        }
    }
    rebuild(conj, ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn m(s: &str) -> String {
        miniscope(&parse(s).unwrap()).to_string()
    }

    #[test]
    fn merges_universal_conjuncts() {
        assert_eq!(m("(all x. F(x)) & (all x. G(x))"), "all x. (F(x) & G(x))");
        assert_eq!(m("(all x. F(x)) & (all y. G(y))"), "all x. (F(x) & G(x))");
        assert_eq!(m("(ex x. F(x)) | (ex y. G(y))"), "ex x. (F(x) | G(x))");
    }

    #[test]
    fn joins_constant_disjunct() {
        assert_eq!(m("(all x. F(x)) | p"), "all x. (F(x) | p)");
        assert_eq!(m("(ex x. F(x)) & p"), "ex x. (F(x) & p)");
    }

    #[test]
    fn extracts_constant_conjunct() {
        assert_eq!(m("all x. (F(x) & p)"), "(all x. F(x)) & p");
        assert_eq!(m("ex x. (F(x) | p)"), "(ex x. F(x)) | p");
    }

    #[test]
    fn extracts_quantified_disjunct() {
        assert_eq!(
            m("all x. (F(x) | (ex y. G(y)))"),
            "(all x. F(x)) | (ex y. G(y))"
        );
        assert_eq!(m("all x. ex y. (F(x) & G(y))"), "(all x. F(x)) & (ex y. G(y))");
    }

    #[test]
    fn drops_vacuous_quantifier() {
        assert_eq!(m("all x. p"), "p");
    }
}
