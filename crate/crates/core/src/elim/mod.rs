//! Second-order quantifier elimination.
//!
//! The general path translates a sentence into a counting formula from the
//! innermost quantifier outward; each predicate quantifier met on the way is
//! removed by [`eliminate_counting`]. The single-class special cases
//! [`eliminate_barbara`] and [`eliminate_main_form`] are kept alongside.

mod counting;
mod main_form;

use std::collections::BTreeSet;

pub use counting::eliminate_counting;
pub(crate) use counting::eliminate_counting_in;
pub use main_form::{eliminate_barbara, eliminate_main_form, MainEliminationForm, Region};

use crate::error::{Error, Result};
use crate::formula::{classify, Formula, FormulaClass};
use crate::limits::Limits;
use crate::normal::{miniscope, normal_terms, signed_formula, to_nnf, CountingFormula, Step, Translator};

const DISTRIBUTION_CAP: usize = 256;

/// Pushes predicate quantifiers through the connective they distribute over.
///
/// `ex X` is split over the disjunctive form of its body, and within each
/// cube the conjuncts not mentioning `X` move outside; dually for `all X`.
/// A body whose normal form would have more than 256 terms is left alone.
pub fn distribute_so(f: &Formula, limits: &Limits) -> Formula {
    match f {
        Formula::ExistsPred(v, body) | Formula::ForallPred(v, body) => {
            let existential = matches!(f, Formula::ExistsPred(..));
            let body = distribute_so(body, limits);
            let quantify = |g: Formula| {
                if existential {
                    Formula::exists_pred(v.clone(), g)
                } else {
                    Formula::forall_pred(v.clone(), g)
                }
            };
            let small = Limits {
                max_terms: limits.max_terms.min(DISTRIBUTION_CAP),
                ..limits.clone()
            };
            let Ok(terms) = normal_terms(&body, existential, &small) else {
                return quantify(body);
            };
            let mut parts = Vec::new();
            for term in terms {
                let (mine, rest): (Vec<_>, Vec<_>) = term
                    .iter()
                    .map(signed_formula)
                    .partition(|g| mentions_predicate(g, v));
                let inner = if existential {
                    Formula::and_all(mine)
                } else {
                    Formula::or_all(mine)
                };
                let scoped = match inner {
                    Formula::Const(_) => inner,
                    g => quantify(g),
                };
                parts.push(if existential {
                    Formula::and_all(std::iter::once(scoped).chain(rest))
                } else {
                    Formula::or_all(std::iter::once(scoped).chain(rest))
                });
            }
            let out = if existential {
                Formula::or_all(parts)
            } else {
                Formula::and_all(parts)
            };
            to_nnf(&out)
        }
        Formula::And(a, b) => Formula::and(distribute_so(a, limits), distribute_so(b, limits)),
        Formula::Or(a, b) => Formula::or(distribute_so(a, limits), distribute_so(b, limits)),
        Formula::ForallInd(v, body) => Formula::forall(v.clone(), distribute_so(body, limits)),
        Formula::ExistsInd(v, body) => Formula::exists(v.clone(), distribute_so(body, limits)),
        other => other.clone(),
    }
}

fn mentions_predicate(f: &Formula, pred: &str) -> bool {
    let mut found = false;
    f.walk(&mut |g| {
        if let Formula::Pred { name, .. } = g {
            found |= name == pred;
        }
    });
    found
}

/// Everything [`eliminate_all`] computed on the way.
#[derive(Debug, Clone)]
pub struct Elimination {
    pub nnf: Formula,
    /// The formula after scope normalization and distribution.
    pub prepared: Formula,
    pub result: CountingFormula,
    pub trace: Vec<Step>,
    pub max_atoms: usize,
    /// Predicate variables removed, innermost first.
    pub eliminated: Vec<String>,
}

/// All quantifiers of `f` removed; the result speaks only about the free
/// symbols of `f`.
pub fn eliminate_all(f: &Formula, limits: &Limits) -> Result<CountingFormula> {
    Ok(eliminate_traced(f, limits)?.result)
}

/// [`eliminate_all`] with its intermediate forms and step trace.
pub fn eliminate_traced(f: &Formula, limits: &Limits) -> Result<Elimination> {
    if let FormulaClass::OutOfScope(why) = classify(f) {
        return Err(Error::OutOfScope(why));
    }
    let mut trace = Vec::new();
    let nnf = to_nnf(f);
    trace.push(Step {
        rule: "nnf".into(),
        result: nnf.to_string(),
    });
    let scoped = miniscope(&nnf);
    if scoped != nnf {
        trace.push(Step {
            rule: "miniscope".into(),
            result: scoped.to_string(),
        });
    }
    let prepared = distribute_so(&scoped, limits);
    if prepared != scoped {
        trace.push(Step {
            rule: "distribute".into(),
            result: prepared.to_string(),
        });
    }
    let ctx: BTreeSet<String> = prepared.signature().unary;
    let mut t = Translator::new(limits, true);
    let result = t.translate(&prepared, &ctx)?;
    trace.append(&mut t.trace);
    Ok(Elimination {
        nnf,
        prepared,
        result,
        trace,
        max_atoms: t.max_atoms,
        eliminated: t.eliminated,
    })
}
