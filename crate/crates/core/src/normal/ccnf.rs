//! Translation of formulas into counting formulas.
//!
//! The translation works bottom-up, so the innermost quantifier is always
//! removed first and its body is already quantifier-free. Individual
//! quantifiers are removed here; predicate quantifiers are handed to the
//! second-order eliminator when the caller allows them.

use std::collections::BTreeSet;

use super::counting::{Constituent, CountingFormula, Cube, Leaf};
use crate::elim;
use crate::error::{Error, Result};
use crate::formula::{classify, Formula, FormulaClass};
use crate::limits::Limits;

/// One recorded elimination step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: String,
    pub result: String,
}

/// Bottom-up translator shared by [`to_ccnf`] and [`crate::elim::eliminate_all`].
#[derive(Debug)]
pub(crate) struct Translator<'a> {
    pub(crate) limits: &'a Limits,
    pub(crate) allow_predicate_quantifiers: bool,
    pub(crate) trace: Vec<Step>,
    pub(crate) max_atoms: usize,
    /// Predicates eliminated so far, innermost first.
    pub(crate) eliminated: Vec<String>,
    /// Predicate variables in scope, still to be eliminated.
    bound: BTreeSet<String>,
}

impl<'a> Translator<'a> {
    pub(crate) fn new(limits: &'a Limits, allow_predicate_quantifiers: bool) -> Self {
        Translator {
            limits,
            allow_predicate_quantifiers,
            trace: Vec::new(),
            max_atoms: 0,
            eliminated: Vec::new(),
            bound: BTreeSet::new(),
        }
    }

    fn record(&mut self, rule: String, result: &CountingFormula) {
        self.max_atoms = self.max_atoms.max(result.atom_count());
        self.trace.push(Step {
            rule,
            result: result.to_string(),
        });
    }

    /// Translates `f`; `ctx` lists the unary predicates in scope.
    pub(crate) fn translate(
        &mut self,
        f: &Formula,
        ctx: &BTreeSet<String>,
    ) -> Result<CountingFormula> {
        if ctx.len() > self.limits.max_signature {
            return Err(Error::ResourceLimit(format!(
                "{} predicates in scope exceeds the signature cap of {}",
                ctx.len(),
                self.limits.max_signature
            )));
        }
        Ok(match f {
            Formula::Const(b) => CountingFormula::Const(*b),
            Formula::Pred { name, arg: None } => CountingFormula::leaf(Leaf::Letter(name.clone())),
            Formula::Pred {
                name,
                arg: Some(a),
            } => CountingFormula::leaf(Leaf::In(Constituent::literal(name.clone(), true), a.clone())),
            Formula::Equal(a, b) => CountingFormula::leaf(Leaf::eq(a, b)),
            Formula::Not(g) => CountingFormula::not(self.translate(g, ctx)?),
            Formula::And(a, b) => {
                CountingFormula::and([self.translate(a, ctx)?, self.translate(b, ctx)?])
            }
            Formula::Or(a, b) => {
                CountingFormula::or([self.translate(a, ctx)?, self.translate(b, ctx)?])
            }
            Formula::Implies(a, b) => CountingFormula::or([
                CountingFormula::not(self.translate(a, ctx)?),
                self.translate(b, ctx)?,
            ]),
            Formula::Iff(a, b) => {
                let (x, y) = (self.translate(a, ctx)?, self.translate(b, ctx)?);
                CountingFormula::and([
                    CountingFormula::or([CountingFormula::not(x.clone()), y.clone()]),
                    CountingFormula::or([x, CountingFormula::not(y)]),
                ])
            }
            Formula::ExistsInd(v, body) | Formula::ForallInd(v, body) => {
                let universal = matches!(f, Formula::ForallInd(..));
                let inner = self.translate(body, ctx)?.propagate();
                let out = if universal {
                    CountingFormula::not(eliminate_exists(
                        v,
                        &CountingFormula::not(inner),
                        ctx,
                        &self.bound,
                        self.limits,
                    )?)
                } else {
                    eliminate_exists(v, &inner, ctx, &self.bound, self.limits)?
                };
                let kw = if universal { "all" } else { "ex" };
                self.record(format!("count: {kw} {v}"), &out);
                out
            }
            Formula::ExistsPred(v, body) | Formula::ForallPred(v, body) => {
                if !self.allow_predicate_quantifiers {
                    return Err(Error::OutOfScope(format!(
                        "predicate quantifier over `{v}` in a first-order context"
                    )));
                }
                let universal = matches!(f, Formula::ForallPred(..));
                let kw = if universal { "all" } else { "ex" };
                let out = if body.uses_as_letter(v) {
                    let inner = self.translate(body, ctx)?;
                    let (t, e) = (inner.assign_letter(v, true), inner.assign_letter(v, false));
                    if universal {
                        CountingFormula::and([t, e])
                    } else {
                        CountingFormula::or([t, e])
                    }
                } else {
                    let mut wider = ctx.clone();
                    wider.insert(v.clone());
                    let fresh = self.bound.insert(v.clone());
                    let inner = self.translate(body, &wider);
                    if fresh {
                        self.bound.remove(v);
                    }
                    let inner = inner?.propagate();
                    if universal {
                        CountingFormula::not(elim::eliminate_counting_in(
                            v,
                            &CountingFormula::not(inner),
                            ctx,
                            self.limits,
                        )?)
                    } else {
                        elim::eliminate_counting_in(v, &inner, ctx, self.limits)?
                    }
                };
                self.eliminated.push(v.clone());
                self.record(format!("eliminate: {kw} {v}"), &out);
                out
            }
        })
    }
}

/// All set partitions of `items`, each block in input order.
pub(crate) fn set_partitions<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    let mut out: Vec<Vec<Vec<T>>> = vec![vec![]];
    for item in items {
        let mut next = Vec::new();
        for p in &out {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].push(item.clone());
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![item.clone()]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// Partitions of `names` whose identities do not contradict `cube`.
pub(crate) fn consistent_partitions(names: &[String], cube: &Cube) -> Vec<Vec<Vec<String>>> {
    set_partitions(names)
        .into_iter()
        .filter(|blocks| {
            let block_of = |n: &str| blocks.iter().position(|b| b.iter().any(|m| m == n));
            cube.lits.iter().all(|l| match &l.leaf {
                Leaf::Eq(a, b) => match (block_of(a), block_of(b)) {
                    (Some(x), Some(y)) => (x == y) == l.positive,
                    _ => true,
                },
                _ => true,
            })
        })
        .collect()
}

/// Equalities inside blocks and disequalities between block representatives.
pub(crate) fn partition_literals(blocks: &[Vec<String>]) -> Vec<CountingFormula> {
    let mut out = Vec::new();
    for b in blocks {
        for other in &b[1..] {
            out.push(CountingFormula::leaf(Leaf::eq(&b[0], other)));
        }
    }
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            out.push(CountingFormula::not(CountingFormula::leaf(Leaf::eq(
                &a[0], &b[0],
            ))));
        }
    }
    out
}

/// Full constituents over `ctx` consistent with the region literals `lits`
/// asserted of one individual.
pub(crate) fn compatible_constituents(
    ctx: &BTreeSet<String>,
    lits: &[(Constituent, bool)],
) -> Vec<Constituent> {
    Constituent::all_over(ctx)
        .into_iter()
        .filter(|c| lits.iter().all(|(d, pos)| c.refines(d) == *pos))
        .collect()
}

/// `ex y. body` for a quantifier-free counting formula `body`.
///
/// Per cube of the disjunctive form: an equation `y = z` substitutes `z` for
/// `y`; otherwise the region literals on `y` select the constituents `c` it
/// may lie in, and with disequations `y ~= z1, ..., y ~= zk` the cube becomes
/// a case split over how the `zi` coincide and which of them lie in `c`, each
/// case demanding one more element of `c` than the named ones.
///
/// The constituents range over the predicates the cube says something about
/// for `y`. Once one of those is in `bound`, they range over all of `ctx`, so
/// that the later elimination of a bound predicate sees full constituents.
pub(crate) fn eliminate_exists(
    y: &str,
    body: &CountingFormula,
    ctx: &BTreeSet<String>,
    bound: &BTreeSet<String>,
    limits: &Limits,
) -> Result<CountingFormula> {
    let (opaque, terms) = body.dnf_relative(&|l: &Leaf| l.mentions_name(y), limits)?;
    let mut out = Vec::with_capacity(terms.len());
    let mut size = 0;
    for (cube, rest) in terms {
        let mut parts: Vec<CountingFormula> = rest.iter().map(|&i| opaque[i].clone()).collect();
        parts.push(eliminate_exists_cube(y, &cube, ctx, bound, limits)?);
        let part = CountingFormula::and(parts);
        size += part.atom_count();
        limits.check_atoms(size, "individual quantifier elimination")?;
        out.push(part);
    }
    Ok(CountingFormula::or(out))
}

fn eliminate_exists_cube(
    y: &str,
    cube: &Cube,
    ctx: &BTreeSet<String>,
    bound: &BTreeSet<String>,
    limits: &Limits,
) -> Result<CountingFormula> {
    // An equation with another name settles the witness.
    for l in &cube.lits {
        if let (Leaf::Eq(a, b), true) = (&l.leaf, l.positive) {
            let other = if a == y {
                b
            } else if b == y {
                a
            } else {
                continue;
            };
            return Ok(cube
                .rename(y, other)
                .map_or(CountingFormula::Const(false), |c| c.to_formula()));
        }
    }
    let mut regions = Vec::new();
    let mut distinct = BTreeSet::new();
    let mut residue = Vec::new();
    for l in &cube.lits {
        match &l.leaf {
            Leaf::In(c, n) if n == y => regions.push((c.clone(), l.positive)),
            Leaf::Eq(a, b) if a == y || b == y => {
                debug_assert!(!l.positive);
                distinct.insert(if a == y { b.clone() } else { a.clone() });
            }
            _ => residue.push(l.to_formula()),
        }
    }
    let names: Vec<String> = distinct.into_iter().collect();
    let about_y: BTreeSet<String> = regions.iter().flat_map(|(c, _)| c.signature()).collect();
    let over = if about_y.is_disjoint(bound) { &about_y } else { ctx };
    let mut cases = Vec::new();
    for c in compatible_constituents(over, &regions) {
        cases.push(witness_in(&c, &names, cube, limits)?);
    }
    residue.push(CountingFormula::or(cases));
    Ok(CountingFormula::and(residue))
}

/// `ex y. [c](y) & y ~= z1 & ... & y ~= zk`.
fn witness_in(
    c: &Constituent,
    names: &[String],
    cube: &Cube,
    limits: &Limits,
) -> Result<CountingFormula> {
    if names.is_empty() {
        return Ok(CountingFormula::count(c.clone(), 1));
    }
    let mut cases = Vec::new();
    for blocks in consistent_partitions(names, cube) {
        let k = blocks.len();
        let mut subcases = Vec::new();
        for mask in 0u32..(1 << k) {
            let inside = mask.count_ones();
            if inside + 1 > limits.max_bound {
                return Err(Error::ResourceLimit(format!(
                    "count bound {} exceeds cap {}",
                    inside + 1,
                    limits.max_bound
                )));
            }
            let mut parts: Vec<CountingFormula> = blocks
                .iter()
                .enumerate()
                .map(|(i, b)| CountingFormula::lit(Leaf::In(c.clone(), b[0].clone()), mask >> i & 1 == 1))
                .collect();
            parts.push(CountingFormula::count(c.clone(), inside + 1));
            subcases.push(CountingFormula::and(parts));
        }
        let mut parts = partition_literals(&blocks);
        parts.push(CountingFormula::or(subcases));
        cases.push(CountingFormula::and(parts));
    }
    Ok(CountingFormula::or(cases))
}

/// Counting normal form of a formula without predicate quantifiers.
///
/// For a closed sentence the result mentions only count atoms over full
/// constituents of the free predicates of `f`, and truth constants.
pub fn to_ccnf(f: &Formula, limits: &Limits) -> Result<CountingFormula> {
    match classify(f) {
        FormulaClass::Propositional | FormulaClass::DomainA | FormulaClass::DomainAStar => {}
        other => {
            return Err(Error::OutOfScope(format!(
                "counting normal form needs a formula without predicate quantifiers, got {other}"
            )))
        }
    }
    let ctx = f.signature().unary;
    let out = Translator::new(limits, false).translate(f, &ctx)?;
    out.refine_counts(&ctx, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn ccnf(s: &str) -> CountingFormula {
        to_ccnf(&parse(s).unwrap(), &Limits::default()).unwrap()
    }

    #[test]
    fn nonemptiness() {
        assert_eq!(
            ccnf("ex x. P(x)"),
            CountingFormula::count(Constituent::literal("P", true), 1)
        );
    }

    #[test]
    fn pure_size_statement() {
        assert_eq!(ccnf("ex x. ex y. x ~= y"), CountingFormula::size_at_least(2));
        assert_eq!(ccnf("ex x. ex y. ex z. (x ~= y & x ~= z & y ~= z)").to_string(), "#[] >= 3");
    }

    #[test]
    fn two_distinct_in_one_region() {
        let f = ccnf("ex x. ex y. (x ~= y & P(x) & P(y))");
        assert!(f.names().is_empty());
        assert_eq!(f, CountingFormula::count(Constituent::literal("P", true), 2));
    }

    #[test]
    fn free_names_survive_as_region_literals() {
        let f = ccnf("ex y. (y ~= a & P(y))");
        assert_eq!(f.to_string(), "~[+P](a) & #[+P] >= 1 | [+P](a) & #[+P] >= 2");
    }

    #[test]
    fn rejects_predicate_quantifiers() {
        assert!(matches!(
            to_ccnf(&parse("ex X. ex x. X(x)").unwrap(), &Limits::default()),
            Err(Error::OutOfScope(_))
        ));
    }

    #[test]
    fn partitions_are_bell_numbers() {
        let sizes: Vec<usize> = (0..5)
            .map(|n| set_partitions(&(0..n).collect::<Vec<_>>()).len())
            .collect();
        assert_eq!(sizes, [1, 1, 2, 5, 15]);
    }
}
