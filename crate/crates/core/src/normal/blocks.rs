use std::fmt;

use super::nnf::to_nnf;
use crate::error::{Error, Result};
use crate::formula::{classify, Formula, FormulaClass};
use crate::limits::Limits;

/// A propositional combination of building blocks.
///
/// Each block is `all x. (L1 | ... | Ln)` or `ex x. (L1 & ... & Ln)` where the
/// `Li` are literals over unary predicates applied to `x`. Propositional
/// letters may appear between blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockForm(Formula);

impl BlockForm {
    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }

    /// The blocks, left to right.
    pub fn blocks(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        collect_blocks(&self.0, &mut out);
        out
    }
}

impl fmt::Display for BlockForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn collect_blocks<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::ForallInd(..) | Formula::ExistsInd(..) => out.push(f),
        _ => {
            for c in f.children() {
                collect_blocks(c, out);
            }
        }
    }
}

fn literal_on(f: &Formula, var: &str) -> bool {
    match f {
        Formula::Pred { arg: Some(a), .. } => a == var,
        Formula::Not(g) => literal_on(g, var),
        _ => false,
    }
}

/// Checks the block-form shape.
pub fn is_block_form(f: &Formula) -> bool {
    fn lits(f: &Formula, conj: bool, var: &str) -> bool {
        match f {
            Formula::And(a, b) if conj => lits(a, conj, var) && lits(b, conj, var),
            Formula::Or(a, b) if !conj => lits(a, conj, var) && lits(b, conj, var),
            g => literal_on(g, var),
        }
    }
    match f {
        Formula::ForallInd(v, body) => lits(body, false, v),
        Formula::ExistsInd(v, body) => lits(body, true, v),
        Formula::Const(_) | Formula::Pred { arg: None, .. } => true,
        Formula::Not(g) => matches!(**g, Formula::Pred { arg: None, .. }),
        Formula::And(a, b) | Formula::Or(a, b) => is_block_form(a) && is_block_form(b),
        _ => false,
    }
}

/// A literal or opaque subformula with a sign.
pub(crate) type Signed = (Formula, bool);

fn leaf(f: &Formula) -> Signed {
    match f {
        Formula::Not(g) => ((**g).clone(), false),
        g => (g.clone(), true),
    }
}

pub(crate) fn signed_formula((f, positive): &Signed) -> Formula {
    if *positive {
        f.clone()
    } else {
        Formula::not(f.clone())
    }
}

/// Clauses (`conj == false`) or cubes (`conj == true`) of `f`, treating
/// every non-connective node as opaque.
pub(crate) fn normal_terms(f: &Formula, cubes: bool, limits: &Limits) -> Result<Vec<Vec<Signed>>> {
    let outer_is_and = !cubes;
    Ok(match f {
        Formula::Const(b) => {
            // A cube list for `true` is one empty cube; for clauses, `false`
            // is one empty clause.
            if *b == cubes {
                vec![vec![]]
            } else {
                vec![]
            }
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let is_and = matches!(f, Formula::And(..));
            let l = normal_terms(a, cubes, limits)?;
            let r = normal_terms(b, cubes, limits)?;
            if is_and == outer_is_and {
                let mut out = l;
                out.extend(r);
                out
            } else {
                let mut out = Vec::with_capacity(l.len() * r.len());
                for x in &l {
                    for y in &r {
                        let mut t = x.clone();
                        for s in y {
                            if !t.contains(s) {
                                t.push(s.clone());
                            }
                        }
                        out.push(t);
                    }
                }
                limits.check_terms(out.len(), "block form distribution")?;
                out
            }
        }
        g => vec![vec![leaf(g)]],
    })
}

/// Rewrites an identity-free first-order formula into block form.
///
/// Bottom-up: under `ex x` the body is put in disjunctive form and each cube
/// becomes `rest & ex x. (x-literals)`; under `all x` the body is put in
/// conjunctive form and each clause becomes `rest | all x. (x-literals)`.
pub fn to_block_form(f: &Formula, limits: &Limits) -> Result<BlockForm> {
    match classify(f) {
        FormulaClass::Propositional | FormulaClass::DomainA => {}
        other => {
            return Err(Error::OutOfScope(format!(
                "block form needs an identity-free first-order formula, got {other}"
            )))
        }
    }
    if !f.signature().individuals.is_empty() {
        return Err(Error::OutOfScope(
            "block form needs a formula without free individual names".into(),
        ));
    }
    let out = blocks(&to_nnf(f), limits)?;
    debug_assert!(is_block_form(&out), "not a block form: {out}");
    Ok(BlockForm(out))
}

fn blocks(f: &Formula, limits: &Limits) -> Result<Formula> {
    Ok(match f {
        Formula::And(a, b) => and2(blocks(a, limits)?, blocks(b, limits)?),
        Formula::Or(a, b) => or2(blocks(a, limits)?, blocks(b, limits)?),
        Formula::ExistsInd(v, body) | Formula::ForallInd(v, body) => {
            let existential = matches!(f, Formula::ExistsInd(..));
            let inner = blocks(body, limits)?;
            let terms = normal_terms(&inner, existential, limits)?;
            let mut parts = Vec::new();
            for term in terms {
                let (mine, rest): (Vec<Signed>, Vec<Signed>) = term
                    .into_iter()
                    .partition(|s| literal_on(&signed_formula(s), v));
                let rest = rest.iter().map(signed_formula);
                let block = if mine.is_empty() {
                    // The domain is non-empty, so the quantifier is vacuous.
                    Formula::Const(existential)
                } else if existential {
                    Formula::exists(v.clone(), Formula::and_all(mine.iter().map(signed_formula)))
                } else {
                    Formula::forall(v.clone(), Formula::or_all(mine.iter().map(signed_formula)))
                };
                parts.push(if existential {
                    rest.fold(block, and2)
                } else {
                    rest.fold(block, or2)
                });
            }
            if existential {
                parts.into_iter().reduce(or2).unwrap_or(Formula::Const(false))
            } else {
                parts.into_iter().reduce(and2).unwrap_or(Formula::Const(true))
            }
        }
        other => other.clone(),
    })
}

fn and2(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::Const(true), x) | (x, Formula::Const(true)) => x,
        (Formula::Const(false), _) | (_, Formula::Const(false)) => Formula::Const(false),
        (a, b) => Formula::and(a, b),
    }
}

fn or2(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::Const(false), x) | (x, Formula::Const(false)) => x,
        (Formula::Const(true), _) | (_, Formula::Const(true)) => Formula::Const(true),
        (a, b) => Formula::or(a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn b(s: &str) -> BlockForm {
        to_block_form(&parse(s).unwrap(), &Limits::default()).unwrap()
    }

    #[test]
    fn single_block_is_unchanged() {
        assert_eq!(b("all x. (F(x) | G(x))").to_string(), "all x. (F(x) | G(x))");
    }

    #[test]
    fn existential_distributes_into_two_blocks() {
        let out = b("ex x. (F(x) & (G(x) | H(x)))");
        assert_eq!(
            out.to_string(),
            "(ex x. (F(x) & G(x))) | (ex x. (F(x) & H(x)))"
        );
        assert_eq!(out.blocks().len(), 2);
    }

    #[test]
    fn two_variable_prefix_splits_into_one_variable_blocks() {
        let out = b("all x. ex y. ((F(x) | G(y)) & (H(x) | K(y)))");
        assert!(is_block_form(out.formula()));
        for blk in out.blocks() {
            assert_eq!(blk.signature().individuals.len(), 0);
        }
    }

    #[test]
    fn rejects_identity_and_free_names() {
        let l = Limits::default();
        assert!(matches!(
            to_block_form(&parse("ex x. x = x").unwrap(), &l),
            Err(Error::OutOfScope(_))
        ));
        assert!(matches!(
            to_block_form(&parse("F(a)").unwrap(), &l),
            Err(Error::OutOfScope(_))
        ));
    }
}
