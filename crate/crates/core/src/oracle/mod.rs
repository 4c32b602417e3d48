//! Finite-model semantics, independent of the rewriting engine.
//!
//! Predicate quantifiers range over all `2^n` subsets of an `n`-element
//! domain, so everything here is exponential and meant for small sizes.

mod compile;
mod generate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use generate::{random_formula, random_propositional, GeneratorParams};

use compile::{for_each_valuation, Compiled, CompiledCounting, Valuation, MAX_SIZE};

use crate::error::{Error, Result};
use crate::formula::{classify, Formula, Signature};
use crate::limits::{Limits, Meter};
use crate::normal::CountingFormula;

/// A domain `{0, ..., size - 1}` with interpretations for free symbols.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FiniteModel {
    pub size: u32,
    pub predicates: BTreeMap<String, BTreeSet<u32>>,
    pub letters: BTreeMap<String, bool>,
    pub individuals: BTreeMap<String, u32>,
}

impl FiniteModel {
    pub fn new(size: u32) -> Self {
        FiniteModel {
            size,
            ..Default::default()
        }
    }

    pub fn with_predicate(mut self, name: &str, elements: impl IntoIterator<Item = u32>) -> Self {
        self.predicates
            .insert(name.to_string(), elements.into_iter().collect());
        self
    }

    pub fn with_letter(mut self, name: &str, value: bool) -> Self {
        self.letters.insert(name.to_string(), value);
        self
    }

    pub fn with_individual(mut self, name: &str, element: u32) -> Self {
        self.individuals.insert(name.to_string(), element);
        self
    }

    fn valuation(&self, sig: &Signature) -> Result<Valuation> {
        if self.size == 0 || self.size > MAX_SIZE {
            return Err(Error::Contract(format!(
                "model size {} is outside 1..={MAX_SIZE}",
                self.size
            )));
        }
        let missing = |n: &String| Error::MissingInterpretation(n.clone());
        let mut preds = Vec::new();
        for p in &sig.unary {
            let set = self.predicates.get(p).ok_or_else(|| missing(p))?;
            let mut mask = 0u64;
            for &e in set {
                if e >= self.size {
                    return Err(Error::Contract(format!("{p} contains {e}, outside the domain")));
                }
                mask |= 1 << e;
            }
            preds.push(mask);
        }
        let mut letters = Vec::new();
        for p in &sig.nullary {
            letters.push(*self.letters.get(p).ok_or_else(|| missing(p))?);
        }
        let mut inds = Vec::new();
        for a in &sig.individuals {
            let e = *self.individuals.get(a).ok_or_else(|| missing(a))?;
            if e >= self.size {
                return Err(Error::Contract(format!("{a} = {e} is outside the domain")));
            }
            inds.push(e);
        }
        Ok(Valuation {
            size: self.size,
            preds,
            letters,
            inds,
        })
    }

    fn from_valuation(sig: &Signature, val: &Valuation) -> Self {
        let mut m = FiniteModel::new(val.size);
        for (p, mask) in sig.unary.iter().zip(&val.preds) {
            m.predicates
                .insert(p.clone(), (0..val.size).filter(|e| mask >> e & 1 == 1).collect());
        }
        for (p, b) in sig.nullary.iter().zip(&val.letters) {
            m.letters.insert(p.clone(), *b);
        }
        for (a, e) in sig.individuals.iter().zip(&val.inds) {
            m.individuals.insert(a.clone(), *e);
        }
        m
    }
}

impl fmt::Display for FiniteModel {
    /// `size=2; P={0}; Q={}; p=true; a=1`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "size={}", self.size)?;
        for (p, set) in &self.predicates {
            let items: Vec<String> = set.iter().map(u32::to_string).collect();
            write!(f, "; {p}={{{}}}", items.join(","))?;
        }
        for (p, b) in &self.letters {
            write!(f, "; {p}={b}")?;
        }
        for (a, e) in &self.individuals {
            write!(f, "; {a}={e}")?;
        }
        Ok(())
    }
}

fn check_size(max_size: u32) -> Result<()> {
    if max_size > MAX_SIZE {
        return Err(Error::ResourceLimit(format!(
            "domain size {max_size} exceeds the oracle's limit of {MAX_SIZE}"
        )));
    }
    Ok(())
}

/// The truth value of `f` in `m`.
pub fn evaluate(m: &FiniteModel, f: &Formula) -> Result<bool> {
    evaluate_with(m, f, &Limits::default())
}

pub fn evaluate_with(m: &FiniteModel, f: &Formula, limits: &Limits) -> Result<bool> {
    let sig = f.signature();
    let val = m.valuation(&sig)?;
    Compiled::new(f, &sig)?.eval(&val, &mut Meter::new(limits))
}

/// The truth value of a counting formula in `m`.
pub fn evaluate_counting(m: &FiniteModel, cf: &CountingFormula) -> Result<bool> {
    let sig = counting_signature(cf);
    let val = m.valuation(&sig)?;
    Ok(CompiledCounting::new(cf, &sig)?.eval(&val))
}

fn counting_signature(cf: &CountingFormula) -> Signature {
    Signature {
        unary: cf.predicates(),
        nullary: cf.letters(),
        individuals: cf.names(),
    }
}

/// The smallest model of size at most `max_size` falsifying `f`; free
/// symbols are enumerated as part of the model.
pub fn find_countermodel(f: &Formula, max_size: u32, limits: &Limits) -> Result<Option<FiniteModel>> {
    check_size(max_size)?;
    let sig = f.signature();
    let c = Compiled::new(f, &sig)?;
    let mut meter = Meter::new(limits);
    for n in 1..=max_size {
        let mut found = None;
        for_each_valuation(&sig, n, &mut meter, |val, meter| {
            if c.eval(val, meter)? {
                Ok(true)
            } else {
                found = Some(FiniteModel::from_valuation(&sig, val));
                Ok(false)
            }
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Number of predicate symbols of `f`, free or bound.
pub fn predicate_symbol_count(f: &Formula) -> usize {
    let mut names = BTreeSet::new();
    f.walk(&mut |g| match g {
        Formula::Pred { name, .. } | Formula::ForallPred(name, _) | Formula::ExistsPred(name, _) => {
            names.insert(name.clone());
        }
        _ => {}
    });
    names.len()
}

/// `2^k` for an identity-free `f` with `k` predicate symbols: if `f` has a
/// countermodel at all, it has one of at most this size.
pub fn small_model_bound(f: &Formula) -> Option<u32> {
    if !classify(f).is_identity_free() {
        return None;
    }
    let k = predicate_symbol_count(f) as u32;
    (k < 31).then(|| 1u32 << k)
}

/// Whether a search up to the small-model bound finds no countermodel.
///
/// `None` when `f` involves identity, since then no bound is available.
pub fn certifies_validity(f: &Formula, limits: &Limits) -> Result<Option<bool>> {
    let Some(bound) = small_model_bound(f) else {
        return Ok(None);
    };
    Ok(Some(find_countermodel(f, bound, limits)?.is_none()))
}

/// The truth value of a pure sentence at sizes `1..=max_size`.
pub fn spectrum_bruteforce(f: &Formula, max_size: u32, limits: &Limits) -> Result<Vec<bool>> {
    check_size(max_size)?;
    let sig = f.signature();
    if !sig.is_empty() {
        return Err(Error::Contract(format!("`{f}` has free symbols")));
    }
    let c = Compiled::new(f, &sig)?;
    let mut meter = Meter::new(limits);
    (1..=max_size)
        .map(|n| c.eval(&Valuation::first(&sig, n), &mut meter))
        .collect()
}

/// A model of size at most `max_size` on which `f` and `g` differ.
pub fn equiv_check(f: &Formula, g: &Formula, max_size: u32, limits: &Limits) -> Result<Option<FiniteModel>> {
    let sig = f.signature().union(&g.signature());
    let (cf, cg) = (Compiled::new(f, &sig)?, Compiled::new(g, &sig)?);
    search_difference(&sig, max_size, limits, |val, meter| {
        Ok(cf.eval(val, meter)? == cg.eval(val, meter)?)
    })
}

/// A model of size at most `max_size` on which `f` and the counting formula
/// `cf` differ.
pub fn equiv_check_counting(
    f: &Formula,
    cf: &CountingFormula,
    max_size: u32,
    limits: &Limits,
) -> Result<Option<FiniteModel>> {
    let sig = f.signature().union(&counting_signature(cf));
    let (c1, c2) = (Compiled::new(f, &sig)?, CompiledCounting::new(cf, &sig)?);
    search_difference(&sig, max_size, limits, |val, meter| {
        Ok(c1.eval(val, meter)? == c2.eval(val))
    })
}

/// A model on which two counting formulas differ.
pub fn equiv_check_counting_pair(
    a: &CountingFormula,
    b: &CountingFormula,
    max_size: u32,
    limits: &Limits,
) -> Result<Option<FiniteModel>> {
    let sig = counting_signature(a).union(&counting_signature(b));
    let (c1, c2) = (CompiledCounting::new(a, &sig)?, CompiledCounting::new(b, &sig)?);
    search_difference(&sig, max_size, limits, |val, _| Ok(c1.eval(val) == c2.eval(val)))
}

fn search_difference(
    sig: &Signature,
    max_size: u32,
    limits: &Limits,
    mut agree: impl FnMut(&Valuation, &mut Meter) -> Result<bool>,
) -> Result<Option<FiniteModel>> {
    check_size(max_size)?;
    let mut meter = Meter::new(limits);
    for n in 1..=max_size {
        let mut found = None;
        for_each_valuation(sig, n, &mut meter, |val, meter| {
            if agree(val, meter)? {
                Ok(true)
            } else {
                found = Some(FiniteModel::from_valuation(sig, val));
                Ok(false)
            }
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let m = FiniteModel::new(2).with_predicate("P", [0]);
        assert!(evaluate(&m, &p("ex x. P(x)")).unwrap());
        assert!(!evaluate(&FiniteModel::new(1), &p("all X. ex x. X(x)")).unwrap());
        assert!(matches!(
            evaluate(&FiniteModel::new(1), &p("P(a)")),
            Err(Error::MissingInterpretation(_))
        ));
    }

    #[test]
    fn countermodels() {
        let l = Limits::default();
        let m = find_countermodel(&p("all x. P(x)"), 2, &l).unwrap().unwrap();
        assert_eq!(m.to_string(), "size=1; P={}");
        let m = find_countermodel(&p("(all x. P(x)) | (all x. ~P(x))"), 2, &l)
            .unwrap()
            .unwrap();
        assert_eq!(m.to_string(), "size=2; P={0}");
    }

    #[test]
    fn equivalence_witness() {
        let w = equiv_check(&p("ex x. P(x)"), &p("all x. P(x)"), 4, &Limits::default())
            .unwrap()
            .unwrap();
        assert_eq!(w.to_string(), "size=2; P={0}");
    }

    #[test]
    fn pure_spectra() {
        let l = Limits::default();
        assert_eq!(
            spectrum_bruteforce(&p("ex x. ex y. x ~= y"), 3, &l).unwrap(),
            [false, true, true]
        );
        assert_eq!(
            spectrum_bruteforce(&p("all X. all y. (X(y) | ~X(y))"), 3, &l).unwrap(),
            [true, true, true]
        );
    }

    #[test]
    fn witness_format() {
        let m = FiniteModel::new(2)
            .with_predicate("P", [0])
            .with_predicate("Q", [])
            .with_letter("p", true)
            .with_individual("a", 1);
        assert_eq!(m.to_string(), "size=2; P={0}; Q={}; p=true; a=1");
    }

    #[test]
    fn bound_counts_all_predicates() {
        assert_eq!(small_model_bound(&p("all X. ex x. (X(x) | P(x))")), Some(4));
        assert_eq!(small_model_bound(&p("ex x. ex y. x ~= y")), None);
    }
}
