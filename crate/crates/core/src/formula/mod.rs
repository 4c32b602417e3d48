//! The formula language: monadic second-order logic with identity.
//!
//! Names are split by capitalization. An uppercase-initial name is always a
//! predicate; a lowercase-initial name is an individual when it occurs as a
//! term or after a lowercase quantifier, and a propositional letter (nullary
//! predicate) when it stands alone as an atom.

mod classify;
mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub use classify::{classify, FormulaClass};
pub use parse::parse;

/// A formula of monadic second-order logic with identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Const(bool),
    /// `P(x)` when `arg` is present, the propositional letter `P` otherwise.
    Pred { name: String, arg: Option<String> },
    Equal(String, String),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForallInd(String, Box<Formula>),
    ExistsInd(String, Box<Formula>),
    ForallPred(String, Box<Formula>),
    ExistsPred(String, Box<Formula>),
}

/// Whether a name lives in the predicate namespace.
pub fn is_predicate_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn truth(b: bool) -> Self {
        Formula::Const(b)
    }

    pub fn app(pred: impl Into<String>, arg: impl Into<String>) -> Self {
        Formula::Pred {
            name: pred.into(),
            arg: Some(arg.into()),
        }
    }

    pub fn letter(name: impl Into<String>) -> Self {
        Formula::Pred {
            name: name.into(),
            arg: None,
        }
    }

    pub fn eq(a: impl Into<String>, b: impl Into<String>) -> Self {
        Formula::Equal(a.into(), b.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::ForallInd(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::ExistsInd(var.into(), Box::new(body))
    }

    pub fn forall_pred(var: impl Into<String>, body: Formula) -> Self {
        Formula::ForallPred(var.into(), Box::new(body))
    }

    pub fn exists_pred(var: impl Into<String>, body: Formula) -> Self {
        Formula::ExistsPred(var.into(), Box::new(body))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Const(true))
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Const(false))
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Const(_) | Formula::Pred { .. } | Formula::Equal(..) => vec![],
            Formula::Not(a)
            | Formula::ForallInd(_, a)
            | Formula::ExistsInd(_, a)
            | Formula::ForallPred(_, a)
            | Formula::ExistsPred(_, a) => vec![a],
            Formula::Or(a, b)
            | Formula::And(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => vec![a, b],
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::ForallInd(..)
            | Formula::ExistsInd(..)
            | Formula::ForallPred(..)
            | Formula::ExistsPred(..) => false,
            _ => self.children().into_iter().all(Formula::is_quantifier_free),
        }
    }

    pub fn has_predicate_quantifier(&self) -> bool {
        match self {
            Formula::ForallPred(..) | Formula::ExistsPred(..) => true,
            _ => self
                .children()
                .into_iter()
                .any(Formula::has_predicate_quantifier),
        }
    }

    /// Every name occurring anywhere, bound or free.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Pred { name, arg } => {
                out.insert(name.clone());
                if let Some(a) = arg {
                    out.insert(a.clone());
                }
            }
            Formula::Equal(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::ForallInd(v, body)
            | Formula::ExistsInd(v, body)
            | Formula::ForallPred(v, body)
            | Formula::ExistsPred(v, body) => {
                out.insert(v.clone());
                body.collect_names(out);
            }
            _ => {
                for c in self.children() {
                    c.collect_names(out);
                }
            }
        }
    }

    /// Free symbols split by arity.
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut sig);
        sig
    }

    fn collect_free(&self, bound: &mut Vec<String>, sig: &mut Signature) {
        let is_bound = |bound: &Vec<String>, n: &String| bound.iter().any(|b| b == n);
        match self {
            Formula::Const(_) => {}
            Formula::Pred { name, arg } => {
                if !is_bound(bound, name) {
                    if arg.is_some() {
                        sig.unary.insert(name.clone());
                    } else {
                        sig.nullary.insert(name.clone());
                    }
                }
                if let Some(a) = arg {
                    if !is_bound(bound, a) {
                        sig.individuals.insert(a.clone());
                    }
                }
            }
            Formula::Equal(a, b) => {
                for n in [a, b] {
                    if !is_bound(bound, n) {
                        sig.individuals.insert(n.clone());
                    }
                }
            }
            Formula::ForallInd(v, body)
            | Formula::ExistsInd(v, body)
            | Formula::ForallPred(v, body)
            | Formula::ExistsPred(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, sig);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, sig);
                }
            }
        }
    }

    /// Every unary predicate name occurring, bound or free.
    pub fn unary_predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Pred { name, arg: Some(_) } = f {
                out.insert(name.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        for c in self.children() {
            c.walk(visit);
        }
    }

    /// Whether `name` occurs free.
    pub fn occurs_free(&self, name: &str) -> bool {
        match self {
            Formula::Const(_) => false,
            Formula::Pred { name: p, arg } => p == name || arg.as_deref() == Some(name),
            Formula::Equal(a, b) => a == name || b == name,
            Formula::ForallInd(v, body)
            | Formula::ExistsInd(v, body)
            | Formula::ForallPred(v, body)
            | Formula::ExistsPred(v, body) => v != name && body.occurs_free(name),
            _ => self.children().into_iter().any(|c| c.occurs_free(name)),
        }
    }

    /// Renames every occurrence of `old`, bound or free, to `new`.
    ///
    /// `new` must not occur in the formula at all, which rules out capture.
    pub fn substitute(&self, old: &str, new: &str) -> Result<Formula> {
        if is_predicate_name(old) != is_predicate_name(new) {
            return Err(Error::Contract(format!(
                "cannot rename `{old}` to `{new}` across namespaces"
            )));
        }
        if old != new && self.names().contains(new) {
            return Err(Error::CaptureRisk { name: new.into() });
        }
        Ok(self.rename_unchecked(old, new))
    }

    pub(crate) fn rename_unchecked(&self, old: &str, new: &str) -> Formula {
        let r = |s: &String| if s == old { new.to_string() } else { s.clone() };
        let b = |f: &Formula| Box::new(f.rename_unchecked(old, new));
        match self {
            Formula::Const(v) => Formula::Const(*v),
            Formula::Pred { name, arg } => Formula::Pred {
                name: r(name),
                arg: arg.as_ref().map(r),
            },
            Formula::Equal(x, y) => Formula::Equal(r(x), r(y)),
            Formula::Not(a) => Formula::Not(b(a)),
            Formula::Or(x, y) => Formula::Or(b(x), b(y)),
            Formula::And(x, y) => Formula::And(b(x), b(y)),
            Formula::Implies(x, y) => Formula::Implies(b(x), b(y)),
            Formula::Iff(x, y) => Formula::Iff(b(x), b(y)),
            Formula::ForallInd(v, x) => Formula::ForallInd(r(v), b(x)),
            Formula::ExistsInd(v, x) => Formula::ExistsInd(r(v), b(x)),
            Formula::ForallPred(v, x) => Formula::ForallPred(r(v), b(x)),
            Formula::ExistsPred(v, x) => Formula::ExistsPred(r(v), b(x)),
        }
    }

    /// Whether `name` is used as a propositional letter somewhere below.
    pub(crate) fn uses_as_letter(&self, name: &str) -> bool {
        let mut found = false;
        self.walk(&mut |f| {
            if let Formula::Pred { name: n, arg: None } = f {
                found |= n == name;
            }
        });
        found
    }
}

/// Free predicate and individual names of `f`.
///
/// Bound names are excluded; predicates of either arity are reported together.
pub fn free_symbols(f: &Formula) -> (BTreeSet<String>, BTreeSet<String>) {
    let sig = f.signature();
    let preds = sig.unary.union(&sig.nullary).cloned().collect();
    (preds, sig.individuals)
}

/// Free symbols of a formula, by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub unary: BTreeSet<String>,
    pub nullary: BTreeSet<String>,
    pub individuals: BTreeSet<String>,
}

impl Signature {
    pub fn union(&self, other: &Signature) -> Signature {
        Signature {
            unary: self.unary.union(&other.unary).cloned().collect(),
            nullary: self.nullary.union(&other.nullary).cloned().collect(),
            individuals: self.individuals.union(&other.individuals).cloned().collect(),
        }
    }

    /// No free symbols at all.
    pub fn is_empty(&self) -> bool {
        self.unary.is_empty() && self.nullary.is_empty() && self.individuals.is_empty()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::render(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn free_symbols_of_closed_barbara() {
        let f = p("all P. all Q. all R. (~(all x.(~P(x)|Q(x))) | ~(all x.(~Q(x)|R(x))) | all x.(~P(x)|R(x)))");
        let (preds, inds) = free_symbols(&f);
        assert!(preds.is_empty());
        assert!(inds.is_empty());
    }

    #[test]
    fn free_symbols_basic() {
        let (preds, inds) = free_symbols(&p("A(a)"));
        assert_eq!(preds, ["A".to_string()].into());
        assert_eq!(inds, ["a".to_string()].into());

        let (preds, inds) = free_symbols(&p("ex X. (A(x) & X(x))"));
        assert_eq!(preds, ["A".to_string()].into());
        assert_eq!(inds, ["x".to_string()].into());
    }

    #[test]
    fn rename_bound_variable() {
        let f = p("all y. P(y)");
        assert_eq!(f.substitute("y", "z").unwrap(), p("all z. P(z)"));
    }

    #[test]
    fn rename_with_capture_risk_is_rejected() {
        let f = p("all y. (P(x) | P(y))");
        assert_eq!(
            f.substitute("x", "y"),
            Err(Error::CaptureRisk { name: "y".into() })
        );
    }

    #[test]
    fn rename_across_namespaces_is_rejected() {
        assert!(matches!(
            p("P(x)").substitute("x", "Y"),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn rename_free_symbol_changes_signature() {
        let f = p("P(a) & all x. Q(x)");
        let g = f.substitute("a", "b").unwrap();
        let (_, inds) = free_symbols(&g);
        assert_eq!(inds, ["b".to_string()].into());
        let g = f.substitute("x", "w").unwrap();
        assert_eq!(free_symbols(&g), free_symbols(&f));
    }
}
