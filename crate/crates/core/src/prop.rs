//! The two propositional decision methods: exhaustive substitution of truth
//! values, and the clause-form criterion (every clause of the conjunctive
//! normal form must contain a letter together with its negation).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{classify, Formula, FormulaClass};
use crate::limits::Limits;

/// Truth values for propositional letters.
pub type Assignment = BTreeMap<String, bool>;

/// Outcome of the truth-table method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableVerdict {
    Valid,
    /// Some row is false; the assignment is the first such row.
    Contingent(Assignment),
    /// Every row is false.
    Unsatisfiable,
}

impl TableVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, TableVerdict::Valid)
    }
}

/// Outcome of the clause-form criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseVerdict {
    Valid,
    NotValid,
}

/// A signed propositional letter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub letter: String,
    pub positive: bool,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        f.write_str(&self.letter)
    }
}

pub type Clause = BTreeSet<Literal>;

/// A conjunction of clauses.
///
/// `Clauses` with an empty set is the constant true; the constant false is
/// its own variant so no clause is ever empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClauseForm {
    False,
    Clauses(BTreeSet<Clause>),
}

impl ClauseForm {
    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        match self {
            ClauseForm::False => None,
            ClauseForm::Clauses(cs) => Some(cs.iter()),
        }
        .into_iter()
        .flatten()
    }

    /// Drops every clause that is a strict superset of another.
    pub fn remove_subsumed(&self) -> ClauseForm {
        match self {
            ClauseForm::False => ClauseForm::False,
            ClauseForm::Clauses(cs) => ClauseForm::Clauses(
                cs.iter()
                    .filter(|c| !cs.iter().any(|d| d != *c && d.is_subset(c)))
                    .cloned()
                    .collect(),
            ),
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            ClauseForm::False => Formula::Const(false),
            ClauseForm::Clauses(cs) => Formula::and_all(cs.iter().map(|c| {
                Formula::or_all(c.iter().map(|l| {
                    let a = Formula::letter(l.letter.clone());
                    if l.positive {
                        a
                    } else {
                        Formula::not(a)
                    }
                }))
            })),
        }
    }
}

impl fmt::Display for ClauseForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClauseForm::False => f.write_str("false"),
            ClauseForm::Clauses(cs) if cs.is_empty() => f.write_str("true"),
            ClauseForm::Clauses(cs) => {
                let parts: Vec<String> = cs
                    .iter()
                    .map(|c| {
                        let lits: Vec<String> = c.iter().map(|l| l.to_string()).collect();
                        format!("({})", lits.join(", "))
                    })
                    .collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

fn require_propositional(f: &Formula) -> Result<()> {
    match classify(f) {
        FormulaClass::Propositional => Ok(()),
        other => Err(Error::OutOfScope(format!(
            "propositional methods need a propositional formula, got {other}"
        ))),
    }
}

/// Letters of a propositional formula, sorted.
pub fn letters(f: &Formula) -> Vec<String> {
    f.signature().nullary.into_iter().collect()
}

/// Evaluates a propositional formula under a total assignment.
pub fn eval(f: &Formula, a: &Assignment) -> Result<bool> {
    Ok(match f {
        Formula::Const(b) => *b,
        Formula::Pred { name, arg: None } => *a
            .get(name)
            .ok_or_else(|| Error::MissingInterpretation(name.clone()))?,
        Formula::Not(g) => !eval(g, a)?,
        Formula::And(x, y) => eval(x, a)? && eval(y, a)?,
        Formula::Or(x, y) => eval(x, a)? || eval(y, a)?,
        Formula::Implies(x, y) => !eval(x, a)? || eval(y, a)?,
        Formula::Iff(x, y) => eval(x, a)? == eval(y, a)?,
        other => {
            return Err(Error::OutOfScope(format!(
                "`{other}` is not propositional"
            )))
        }
    })
}

/// Substitutes all `2^k` combinations of truth values for the `k` letters.
pub fn truth_table_decide(f: &Formula, limits: &Limits) -> Result<TableVerdict> {
    require_propositional(f)?;
    let names = letters(f);
    if names.len() > limits.max_letters {
        return Err(Error::ResourceLimit(format!(
            "{} letters exceeds the truth-table cap of {}",
            names.len(),
            limits.max_letters
        )));
    }
    let mut first_false = None;
    let mut any_true = false;
    for row in 0u64..(1u64 << names.len()) {
        // Row 0 assigns true everywhere, matching the usual table layout.
        let a: Assignment = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), row >> (names.len() - 1 - i) & 1 == 0))
            .collect();
        if eval(f, &a)? {
            any_true = true;
        } else if first_false.is_none() {
            first_false = Some(a);
        }
        if any_true && first_false.is_some() {
            break;
        }
    }
    Ok(match (first_false, any_true) {
        (None, _) => TableVerdict::Valid,
        (Some(_), false) => TableVerdict::Unsatisfiable,
        (Some(a), true) => TableVerdict::Contingent(a),
    })
}

/// Negation normal form over `~`, `|`, `&` with constants folded away.
#[derive(Debug, Clone)]
enum Nnf {
    Const(bool),
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn nnf(f: &Formula, positive: bool) -> Result<Nnf> {
    Ok(match f {
        Formula::Const(b) => Nnf::Const(*b == positive),
        Formula::Pred { name, arg: None } => Nnf::Lit(Literal {
            letter: name.clone(),
            positive,
        }),
        Formula::Not(g) => nnf(g, !positive)?,
        Formula::And(x, y) if positive => join(true, vec![nnf(x, true)?, nnf(y, true)?]),
        Formula::And(x, y) => join(false, vec![nnf(x, false)?, nnf(y, false)?]),
        Formula::Or(x, y) if positive => join(false, vec![nnf(x, true)?, nnf(y, true)?]),
        Formula::Or(x, y) => join(true, vec![nnf(x, false)?, nnf(y, false)?]),
        Formula::Implies(x, y) => nnf(&Formula::or(Formula::not((**x).clone()), (**y).clone()), positive)?,
        Formula::Iff(x, y) => {
            let expanded = Formula::and(
                Formula::or(Formula::not((**x).clone()), (**y).clone()),
                Formula::or(Formula::not((**y).clone()), (**x).clone()),
            );
            nnf(&expanded, positive)?
        }
        other => {
            return Err(Error::OutOfScope(format!(
                "`{other}` is not propositional"
            )))
        }
    })
}

fn join(conj: bool, parts: Vec<Nnf>) -> Nnf {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Nnf::Const(b) if b == conj => {}
            Nnf::Const(b) => return Nnf::Const(b),
            Nnf::And(xs) if conj => out.extend(xs),
            Nnf::Or(xs) if !conj => out.extend(xs),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Nnf::Const(conj),
        1 => out.pop().unwrap(),
        _ if conj => Nnf::And(out),
        _ => Nnf::Or(out),
    }
}

/// Clauses of an NNF term; `None` means the constant true.
fn clauses(n: &Nnf, limits: &Limits) -> Result<Option<Vec<Clause>>> {
    Ok(match n {
        Nnf::Const(true) => Some(vec![]),
        Nnf::Const(false) => Some(vec![Clause::new()]),
        Nnf::Lit(l) => Some(vec![[l.clone()].into()]),
        Nnf::And(xs) => {
            let mut out = BTreeSet::new();
            for x in xs {
                out.extend(clauses(x, limits)?.unwrap_or_default());
                limits.check_terms(out.len(), "clause form")?;
            }
            Some(out.into_iter().collect())
        }
        Nnf::Or(xs) => {
            // Distribution: the product of the operands' clause sets.
            let mut acc = vec![Clause::new()];
            for x in xs {
                let cs = clauses(x, limits)?.unwrap_or_default();
                let mut next = BTreeSet::new();
                for a in &acc {
                    for c in &cs {
                        next.insert(a.union(c).cloned().collect::<Clause>());
                        limits.check_terms(next.len(), "clause form")?;
                    }
                }
                acc = next.into_iter().collect();
            }
            Some(acc)
        }
    })
}

/// Conjunctive normal form by negation normal form and distribution.
///
/// Clauses containing a complementary pair are kept: the validity criterion
/// reads them.
pub fn to_clause_form(f: &Formula, limits: &Limits) -> Result<ClauseForm> {
    require_propositional(f)?;
    let n = nnf(f, true)?;
    let cs = clauses(&n, limits)?.unwrap_or_default();
    if cs.iter().any(|c| c.is_empty()) {
        return Ok(ClauseForm::False);
    }
    Ok(ClauseForm::Clauses(cs.into_iter().collect()))
}

/// Valid exactly when every clause contains some letter in both polarities.
pub fn clause_form_decide(cf: &ClauseForm) -> ClauseVerdict {
    let complementary = |c: &Clause| {
        c.iter().any(|l| {
            c.contains(&Literal {
                letter: l.letter.clone(),
                positive: !l.positive,
            })
        })
    };
    match cf {
        ClauseForm::False => ClauseVerdict::NotValid,
        ClauseForm::Clauses(cs) if cs.iter().all(complementary) => ClauseVerdict::Valid,
        ClauseForm::Clauses(_) => ClauseVerdict::NotValid,
    }
}
