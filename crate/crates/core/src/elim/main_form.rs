use std::fmt;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::limits::Limits;
use crate::normal::{to_nnf, CountingFormula};

/// A formula in one distinguished individual variable, read as a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub var: String,
    pub body: Formula,
}

impl Region {
    pub fn new(var: impl Into<String>, body: Formula) -> Self {
        Region {
            var: var.into(),
            body,
        }
    }

    /// The region containing everything.
    pub fn everything() -> Self {
        Region::new("y", Formula::Const(true))
    }

    /// The empty region.
    pub fn nothing() -> Self {
        Region::new("y", Formula::Const(false))
    }

    /// The body with its variable renamed to `v`.
    pub fn at(&self, v: &str) -> Result<Formula> {
        if v == self.var {
            Ok(self.body.clone())
        } else {
            self.body.substitute(&self.var, v)
        }
    }

    fn mentions(&self, pred: &str) -> bool {
        let mut found = false;
        self.body.walk(&mut |g| match g {
            Formula::Pred { name, .. } | Formula::ForallPred(name, _) | Formula::ExistsPred(name, _) => {
                found |= name == pred
            }
            _ => {}
        });
        found
    }

    fn has_predicate_quantifier(&self) -> bool {
        self.body.has_predicate_quantifier()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{} | {}}}", self.var, self.body)
    }
}

/// `ex X. (all y. (A(y) | X(y))) & (all y. (B(y) | ~X(y)))
///        & ex y. (G1(y) & X(y)) & ... & ex y. (D1(y) & ~X(y)) & ...`
///
/// Every element outside `lower` is in `X` and every element outside `upper`
/// is not. Each `positive` region meets `X`, each `negative` one meets its
/// complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainEliminationForm {
    pub pred: String,
    pub lower: Region,
    pub upper: Region,
    pub positive: Vec<Region>,
    pub negative: Vec<Region>,
}

impl MainEliminationForm {
    pub fn new(pred: impl Into<String>, lower: Region, upper: Region) -> Self {
        MainEliminationForm {
            pred: pred.into(),
            lower,
            upper,
            positive: Vec::new(),
            negative: Vec::new(),
        }
    }

    pub fn with_positive(mut self, r: Region) -> Self {
        self.positive.push(r);
        self
    }

    pub fn with_negative(mut self, r: Region) -> Self {
        self.negative.push(r);
        self
    }

    fn regions(&self) -> impl Iterator<Item = &Region> {
        [&self.lower, &self.upper]
            .into_iter()
            .chain(&self.positive)
            .chain(&self.negative)
    }

    fn check(&self) -> Result<()> {
        for r in self.regions() {
            if r.mentions(&self.pred) {
                return Err(Error::Contract(format!("region {r} mentions `{}`", self.pred)));
            }
            if r.has_predicate_quantifier() {
                return Err(Error::Contract(format!("region {r} quantifies over predicates")));
            }
        }
        Ok(())
    }

    /// The quantified sentence this form stands for.
    pub fn to_formula(&self) -> Result<Formula> {
        self.check()?;
        let x = &self.pred;
        let (lo, up) = (&self.lower.var, &self.upper.var);
        let mut parts = vec![
            Formula::forall(lo, Formula::or(self.lower.body.clone(), Formula::app(x, lo))),
            Formula::forall(
                up,
                Formula::or(self.upper.body.clone(), Formula::not(Formula::app(x, up))),
            ),
        ];
        for r in &self.positive {
            let v = &r.var;
            parts.push(Formula::exists(v, Formula::and(r.body.clone(), Formula::app(x, v))));
        }
        for r in &self.negative {
            let v = &r.var;
            parts.push(Formula::exists(
                v,
                Formula::and(r.body.clone(), Formula::not(Formula::app(x, v))),
            ));
        }
        Ok(Formula::exists_pred(x.clone(), Formula::and_all(parts)))
    }
}

impl fmt::Display for MainEliminationForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_formula() {
            Ok(g) => g.fmt(f),
            Err(e) => write!(f, "<{e}>"),
        }
    }
}

/// `ex X. (all y. (A(y) | X(y))) & (all y. (B(y) | ~X(y)))` is `all y. (A(y) | B(y))`.
///
/// Witness: `X` = the complement of `A`.
pub fn eliminate_barbara(x: &str, lower: &Region, upper: &Region) -> Result<Formula> {
    MainEliminationForm::new(x, lower.clone(), upper.clone()).check()?;
    let v = lower.var.as_str();
    Ok(to_nnf(&Formula::forall(v, Formula::or(lower.at(v)?, upper.at(v)?))))
}

/// The resultant of a main elimination form as a counting formula.
///
/// The witnesses in `positive` must find room in `X` and those in
/// `negative` outside it, so when `X` is squeezed a `u` and a `v` can
/// never be the same element; the counting translation accounts for this.
pub fn eliminate_main_form(m: &MainEliminationForm, limits: &Limits) -> Result<CountingFormula> {
    if m.positive.is_empty() && m.negative.is_empty() {
        let f = eliminate_barbara(&m.pred, &m.lower, &m.upper)?;
        return crate::normal::to_ccnf(&f, limits);
    }
    super::eliminate_all(&m.to_formula()?, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn region(s: &str) -> Region {
        Region::new("y", parse(s).unwrap())
    }

    #[test]
    fn barbara_base_case() {
        let out = eliminate_barbara("R", &region("~A(y)"), &region("B(y)")).unwrap();
        assert_eq!(out.to_string(), "all y. (~A(y) | B(y))");
    }

    #[test]
    fn whole_domain_forced_and_allowed() {
        let everything = eliminate_barbara("X", &Region::nothing(), &Region::everything()).unwrap();
        assert_eq!(everything, Formula::Const(true));
    }

    #[test]
    fn clause_problem() {
        let m = MainEliminationForm::new("X", Region::everything(), Region::everything())
            .with_positive(Region::everything())
            .with_negative(Region::everything());
        let out = eliminate_main_form(&m, &Limits::default()).unwrap();
        assert_eq!(out, CountingFormula::size_at_least(2));
    }

    #[test]
    fn rejects_regions_mentioning_the_variable() {
        assert!(matches!(
            eliminate_barbara("X", &region("X(y)"), &Region::everything()),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn form_renders_as_a_sentence() {
        let m = MainEliminationForm::new("X", region("~A(y)"), region("B(y)"));
        assert_eq!(
            m.to_string(),
            "ex X. ((all y. (~A(y) | X(y))) & (all y. (B(y) | ~X(y))))"
        );
    }
}
