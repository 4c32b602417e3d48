//! Counting formulas: quantifier-free boolean combinations of statements
//! "this region of the domain contains at least n elements", together with
//! literals about free individual names.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Result;
use crate::limits::Limits;

/// A Venn region: an intersection of predicates and complemented predicates.
///
/// The map is the signature (sorted by name) with a sign per predicate. An
/// empty map is the whole domain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Constituent(BTreeMap<String, bool>);

impl Constituent {
    pub fn whole() -> Self {
        Constituent(BTreeMap::new())
    }

    pub fn new(signs: impl IntoIterator<Item = (String, bool)>) -> Self {
        Constituent(signs.into_iter().collect())
    }

    /// Single-predicate region `P` (or its complement).
    pub fn literal(pred: impl Into<String>, positive: bool) -> Self {
        Constituent([(pred.into(), positive)].into())
    }

    /// All `2^n` full constituents over `signature`, in lexicographic order
    /// with `+` before `-`.
    pub fn all_over(signature: &BTreeSet<String>) -> Vec<Constituent> {
        let names: Vec<&String> = signature.iter().collect();
        let n = names.len();
        (0..1usize << n)
            .map(|bits| {
                Constituent(
                    names
                        .iter()
                        .enumerate()
                        .map(|(i, p)| ((*p).clone(), bits >> (n - 1 - i) & 1 == 0))
                        .collect(),
                )
            })
            .collect()
    }

    pub fn signs(&self) -> &BTreeMap<String, bool> {
        &self.0
    }

    pub fn signature(&self) -> BTreeSet<String> {
        self.0.keys().cloned().collect()
    }

    pub fn sign(&self, pred: &str) -> Option<bool> {
        self.0.get(pred).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every element of `self` lies in `other` (`other`'s signs are a subset).
    pub fn refines(&self, other: &Constituent) -> bool {
        other.0.iter().all(|(p, s)| self.0.get(p) == Some(s))
    }

    /// The two regions can share an element.
    pub fn compatible(&self, other: &Constituent) -> bool {
        self.0
            .iter()
            .all(|(p, s)| other.0.get(p).is_none_or(|t| t == s))
    }

    /// The sign vector without `pred`.
    pub fn without(&self, pred: &str) -> Constituent {
        let mut m = self.0.clone();
        m.remove(pred);
        Constituent(m)
    }

    pub fn with(&self, pred: &str, sign: bool) -> Constituent {
        let mut m = self.0.clone();
        m.insert(pred.to_string(), sign);
        Constituent(m)
    }

    pub fn restrict(&self, signature: &BTreeSet<String>) -> Constituent {
        Constituent(
            self.0
                .iter()
                .filter(|(p, _)| signature.contains(*p))
                .map(|(p, s)| (p.clone(), *s))
                .collect(),
        )
    }
}

impl fmt::Display for Constituent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (p, s)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{p}", if *s { '+' } else { '-' })?;
        }
        f.write_str("]")
    }
}

/// "The region contains at least `bound` elements".
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountAtom {
    pub region: Constituent,
    pub bound: u32,
}

impl CountAtom {
    pub fn new(region: Constituent, bound: u32) -> Self {
        CountAtom { region, bound }
    }
}

impl fmt::Display for CountAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} >= {}", self.region, self.bound)
    }
}

/// Leaves of a counting formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Leaf {
    Count(CountAtom),
    /// The named individual lies in the region.
    In(Constituent, String),
    /// Identity of two names, stored with the smaller name first.
    Eq(String, String),
    /// A propositional letter.
    Letter(String),
}

impl Leaf {
    pub fn eq(a: &str, b: &str) -> Leaf {
        if a <= b {
            Leaf::Eq(a.into(), b.into())
        } else {
            Leaf::Eq(b.into(), a.into())
        }
    }

    pub fn mentions_name(&self, name: &str) -> bool {
        match self {
            Leaf::In(_, n) => n == name,
            Leaf::Eq(a, b) => a == name || b == name,
            _ => false,
        }
    }

    fn rename(&self, old: &str, new: &str) -> Leaf {
        match self {
            Leaf::In(c, n) if n == old => Leaf::In(c.clone(), new.into()),
            Leaf::Eq(a, b) if a == old || b == old => {
                let r = |s: &String| if s == old { new.to_string() } else { s.clone() };
                Leaf::eq(&r(a), &r(b))
            }
            other => other.clone(),
        }
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::Count(a) => write!(f, "{a}"),
            Leaf::In(c, n) => write!(f, "{c}({n})"),
            Leaf::Eq(a, b) => write!(f, "{a} = {b}"),
            Leaf::Letter(p) => f.write_str(p),
        }
    }
}

/// A quantifier-free boolean combination of [`Leaf`]s.
///
/// The smart constructors [`CountingFormula::and`], [`CountingFormula::or`]
/// and [`CountingFormula::not`] flatten, fold constants and drop duplicate
/// operands, so structurally equal inputs give structurally equal outputs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CountingFormula {
    Const(bool),
    Leaf(Leaf),
    Not(Box<CountingFormula>),
    And(Vec<CountingFormula>),
    Or(Vec<CountingFormula>),
}

impl CountingFormula {
    pub fn leaf(l: Leaf) -> Self {
        match l {
            Leaf::Count(CountAtom { bound: 0, .. }) => CountingFormula::Const(true),
            // Domains are never empty.
            Leaf::Count(CountAtom { bound: 1, ref region }) if region.is_empty() => {
                CountingFormula::Const(true)
            }
            Leaf::In(ref c, _) if c.is_empty() => CountingFormula::Const(true),
            Leaf::Eq(ref a, ref b) if a == b => CountingFormula::Const(true),
            l => CountingFormula::Leaf(l),
        }
    }

    pub fn count(region: Constituent, bound: u32) -> Self {
        Self::leaf(Leaf::Count(CountAtom::new(region, bound)))
    }

    /// "The domain has at least `n` elements".
    pub fn size_at_least(n: u32) -> Self {
        Self::count(Constituent::whole(), n)
    }

    pub fn lit(l: Leaf, positive: bool) -> Self {
        let f = Self::leaf(l);
        if positive {
            f
        } else {
            Self::not(f)
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: CountingFormula) -> Self {
        match f {
            CountingFormula::Const(b) => CountingFormula::Const(!b),
            CountingFormula::Not(g) => *g,
            g => CountingFormula::Not(Box::new(g)),
        }
    }

    pub fn and(parts: impl IntoIterator<Item = CountingFormula>) -> Self {
        Self::join(true, parts)
    }

    pub fn or(parts: impl IntoIterator<Item = CountingFormula>) -> Self {
        Self::join(false, parts)
    }

    fn join(conj: bool, parts: impl IntoIterator<Item = CountingFormula>) -> Self {
        let mut out: Vec<CountingFormula> = Vec::new();
        let mut seen = BTreeSet::new();
        for p in parts {
            let items = match p {
                CountingFormula::Const(b) if b == conj => continue,
                CountingFormula::Const(b) => return CountingFormula::Const(b),
                CountingFormula::And(xs) if conj => xs,
                CountingFormula::Or(xs) if !conj => xs,
                other => vec![other],
            };
            for x in items {
                if seen.insert(x.clone()) {
                    out.push(x);
                }
            }
        }
        for x in &out {
            if let CountingFormula::Not(inner) = x {
                if seen.contains(inner.as_ref()) {
                    return CountingFormula::Const(!conj);
                }
            }
        }
        match merge_counts(conj, out) {
            Ok(merged) => out = merged,
            Err(absorbing) => return CountingFormula::Const(absorbing),
        }
        match out.len() {
            0 => CountingFormula::Const(conj),
            1 => out.pop().unwrap(),
            _ if conj => CountingFormula::And(out),
            _ => CountingFormula::Or(out),
        }
    }

    pub fn leaves(&self) -> Vec<&Leaf> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Leaf>) {
        match self {
            CountingFormula::Const(_) => {}
            CountingFormula::Leaf(l) => out.push(l),
            CountingFormula::Not(g) => g.collect_leaves(out),
            CountingFormula::And(xs) | CountingFormula::Or(xs) => {
                for x in xs {
                    x.collect_leaves(out);
                }
            }
        }
    }

    /// Number of leaf occurrences.
    pub fn atom_count(&self) -> usize {
        self.leaves().len()
    }

    /// Free individual names.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for l in self.leaves() {
            match l {
                Leaf::In(_, n) => {
                    out.insert(n.clone());
                }
                Leaf::Eq(a, b) => {
                    out.insert(a.clone());
                    out.insert(b.clone());
                }
                _ => {}
            }
        }
        out
    }

    /// Unary predicates mentioned by any region.
    pub fn predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for l in self.leaves() {
            match l {
                Leaf::Count(a) => out.extend(a.region.signature()),
                Leaf::In(c, _) => out.extend(c.signature()),
                _ => {}
            }
        }
        out
    }

    pub fn letters(&self) -> BTreeSet<String> {
        self.leaves()
            .into_iter()
            .filter_map(|l| match l {
                Leaf::Letter(p) => Some(p.clone()),
                _ => None,
            })
            .collect()
    }

    /// Largest count bound, 0 when there is none.
    pub fn max_bound(&self) -> u32 {
        self.leaves()
            .into_iter()
            .filter_map(|l| match l {
                Leaf::Count(a) => Some(a.bound),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Only whole-domain count atoms and constants: a pure size statement.
    pub fn is_pure(&self) -> bool {
        self.leaves()
            .into_iter()
            .all(|l| matches!(l, Leaf::Count(a) if a.region.is_empty()))
    }

    /// Rebuilds bottom-up through the smart constructors, mapping leaves.
    pub fn map_leaves(&self, f: &mut impl FnMut(&Leaf) -> CountingFormula) -> CountingFormula {
        match self {
            CountingFormula::Const(b) => CountingFormula::Const(*b),
            CountingFormula::Leaf(l) => f(l),
            CountingFormula::Not(g) => CountingFormula::not(g.map_leaves(f)),
            CountingFormula::And(xs) => CountingFormula::and(xs.iter().map(|x| x.map_leaves(f))),
            CountingFormula::Or(xs) => CountingFormula::or(xs.iter().map(|x| x.map_leaves(f))),
        }
    }

    pub fn rename(&self, old: &str, new: &str) -> CountingFormula {
        self.map_leaves(&mut |l| CountingFormula::leaf(l.rename(old, new)))
    }

    /// Replaces a propositional letter by a constant.
    pub fn assign_letter(&self, name: &str, value: bool) -> CountingFormula {
        self.map_leaves(&mut |l| match l {
            Leaf::Letter(p) if p == name => CountingFormula::Const(value),
            other => CountingFormula::leaf(other.clone()),
        })
    }

    /// Evaluates a pure size statement at domain size `n`.
    pub fn eval_size(&self, n: u64) -> Option<bool> {
        Some(match self {
            CountingFormula::Const(b) => *b,
            CountingFormula::Leaf(Leaf::Count(a)) if a.region.is_empty() => n >= a.bound as u64,
            CountingFormula::Leaf(_) => return None,
            CountingFormula::Not(g) => !g.eval_size(n)?,
            CountingFormula::And(xs) => {
                let mut v = true;
                for x in xs {
                    v &= x.eval_size(n)?;
                }
                v
            }
            CountingFormula::Or(xs) => {
                let mut v = false;
                for x in xs {
                    v |= x.eval_size(n)?;
                }
                v
            }
        })
    }

    /// Disjunctive normal form with contradictory cubes removed and
    /// subsumed cubes dropped.
    pub fn dnf(&self, limits: &Limits) -> Result<Vec<Cube>> {
        self.dnf_signed(true, limits)
    }

    pub(crate) fn dnf_signed(&self, positive: bool, limits: &Limits) -> Result<Vec<Cube>> {
        let cubes = match self {
            CountingFormula::Const(b) => {
                if *b == positive {
                    vec![Cube::default()]
                } else {
                    vec![]
                }
            }
            CountingFormula::Leaf(l) => Cube::default()
                .with(Lit::new(l.clone(), positive))
                .into_iter()
                .collect(),
            CountingFormula::Not(g) => return g.dnf_signed(!positive, limits),
            CountingFormula::And(xs) | CountingFormula::Or(xs) => {
                let conj = matches!(self, CountingFormula::And(_)) == positive;
                if conj {
                    let mut acc = vec![Cube::default()];
                    for x in xs {
                        let part = x.dnf_signed(positive, limits)?;
                        let mut next = Vec::new();
                        for a in &acc {
                            for b in &part {
                                if let Some(c) = a.merge(b) {
                                    next.push(c);
                                }
                            }
                        }
                        limits.check_terms(next.len(), "disjunctive normal form")?;
                        acc = prune(next);
                        if acc.is_empty() {
                            break;
                        }
                    }
                    acc
                } else {
                    let mut acc = Vec::new();
                    for x in xs {
                        acc.extend(x.dnf_signed(positive, limits)?);
                        limits.check_terms(acc.len(), "disjunctive normal form")?;
                    }
                    acc
                }
            }
        };
        Ok(prune(cubes))
    }

    fn any_leaf(&self, test: &impl Fn(&Leaf) -> bool) -> bool {
        match self {
            CountingFormula::Const(_) => false,
            CountingFormula::Leaf(l) => test(l),
            CountingFormula::Not(g) => g.any_leaf(test),
            CountingFormula::And(xs) | CountingFormula::Or(xs) => xs.iter().any(|x| x.any_leaf(test)),
        }
    }

    /// Rewrites every count atom over a region `r` into count atoms over the
    /// full constituents of `signature` refining `r`: `#r >= n` holds iff
    /// the refinements hold bounds summing to `n`.
    pub(crate) fn refine_counts(&self, signature: &BTreeSet<String>, limits: &Limits) -> Result<CountingFormula> {
        Ok(match self {
            CountingFormula::Const(_) => self.clone(),
            CountingFormula::Leaf(Leaf::Count(a)) => {
                let rest: BTreeSet<String> = signature
                    .iter()
                    .filter(|p| a.region.sign(p).is_none())
                    .cloned()
                    .collect();
                if rest.is_empty() {
                    return Ok(self.clone());
                }
                let parts: Vec<Constituent> = Constituent::all_over(&rest)
                    .into_iter()
                    .map(|c| Constituent::new(c.signs().clone().into_iter().chain(a.region.signs().clone())))
                    .collect();
                let mut cases = Vec::new();
                let mut split = vec![0u32; parts.len()];
                compositions(a.bound, 0, &mut split, &mut |split| {
                    cases.push(CountingFormula::and(
                        parts.iter().zip(split).map(|(c, &n)| CountingFormula::count(c.clone(), n)),
                    ));
                    limits.check_terms(cases.len(), "count refinement")
                })?;
                CountingFormula::or(cases)
            }
            CountingFormula::Leaf(_) => self.clone(),
            CountingFormula::Not(g) => CountingFormula::not(g.refine_counts(signature, limits)?),
            CountingFormula::And(xs) => CountingFormula::and(
                xs.iter().map(|x| x.refine_counts(signature, limits)).collect::<Result<Vec<_>>>()?,
            ),
            CountingFormula::Or(xs) => CountingFormula::or(
                xs.iter().map(|x| x.refine_counts(signature, limits)).collect::<Result<Vec<_>>>()?,
            ),
        })
    }

    /// Simplifies each operand of a conjunction under the literal operands
    /// beside it, and dually for disjunctions.
    pub(crate) fn propagate(&self) -> CountingFormula {
        self.propagate_under(&BTreeMap::new())
    }

    fn propagate_under(&self, known: &BTreeMap<Leaf, bool>) -> CountingFormula {
        match self {
            CountingFormula::Const(_) => self.clone(),
            CountingFormula::Leaf(l) => match known.get(l) {
                Some(&b) => CountingFormula::Const(b),
                None => self.clone(),
            },
            CountingFormula::Not(g) => CountingFormula::not(g.propagate_under(known)),
            CountingFormula::And(xs) | CountingFormula::Or(xs) => {
                let conj = matches!(self, CountingFormula::And(_));
                let as_lit = |x: &CountingFormula| match x {
                    CountingFormula::Leaf(l) => Some((l.clone(), true)),
                    CountingFormula::Not(g) => match g.as_ref() {
                        CountingFormula::Leaf(l) => Some((l.clone(), false)),
                        _ => None,
                    },
                    _ => None,
                };
                let mut inner = known.clone();
                for x in xs {
                    if let Some((l, pos)) = as_lit(x) {
                        // A disjunct may assume the other literals false.
                        inner.entry(l).or_insert(pos == conj);
                    }
                }
                let parts = xs.iter().map(|x| {
                    if as_lit(x).is_some() {
                        x.propagate_under(known)
                    } else {
                        x.propagate_under(&inner)
                    }
                });
                if conj {
                    CountingFormula::and(parts.collect::<Vec<_>>())
                } else {
                    CountingFormula::or(parts.collect::<Vec<_>>())
                }
            }
        }
    }

    /// Disjunctive form relative to the leaves selected by `relevant`.
    ///
    /// Compound subformulas without relevant leaves are not distributed;
    /// they are collected once in the returned table and each term lists
    /// the entries it conjoins to its cube.
    pub(crate) fn dnf_relative(
        &self,
        relevant: &impl Fn(&Leaf) -> bool,
        limits: &Limits,
    ) -> Result<(Vec<CountingFormula>, Vec<(Cube, Vec<usize>)>)> {
        let mut opaque = Vec::new();
        let terms = self.relative_signed(true, relevant, &mut opaque, limits)?;
        Ok((opaque, terms))
    }

    fn relative_signed(
        &self,
        positive: bool,
        relevant: &impl Fn(&Leaf) -> bool,
        opaque: &mut Vec<CountingFormula>,
        limits: &Limits,
    ) -> Result<Vec<(Cube, Vec<usize>)>> {
        let compound = matches!(self, CountingFormula::And(_) | CountingFormula::Or(_));
        if compound && !self.any_leaf(relevant) {
            opaque.push(if positive {
                self.clone()
            } else {
                CountingFormula::not(self.clone())
            });
            return Ok(vec![(Cube::default(), vec![opaque.len() - 1])]);
        }
        Ok(match self {
            CountingFormula::Const(b) => {
                if *b == positive {
                    vec![(Cube::default(), vec![])]
                } else {
                    vec![]
                }
            }
            CountingFormula::Leaf(l) => Cube::default()
                .with(Lit::new(l.clone(), positive))
                .map(|c| (c, vec![]))
                .into_iter()
                .collect(),
            CountingFormula::Not(g) => return g.relative_signed(!positive, relevant, opaque, limits),
            CountingFormula::And(xs) | CountingFormula::Or(xs) => {
                let conj = matches!(self, CountingFormula::And(_)) == positive;
                let mut acc = if conj { vec![(Cube::default(), vec![])] } else { vec![] };
                for x in xs {
                    let part = x.relative_signed(positive, relevant, opaque, limits)?;
                    if conj {
                        let mut next = Vec::new();
                        for (a, ra) in &acc {
                            for (b, rb) in &part {
                                if let Some(c) = a.merge(b) {
                                    let mut r = ra.clone();
                                    r.extend(rb.iter().copied());
                                    next.push((c, r));
                                    limits.check_terms(next.len(), "disjunctive normal form")?;
                                }
                            }
                        }
                        acc = next;
                        if acc.is_empty() {
                            break;
                        }
                    } else {
                        acc.extend(part);
                        limits.check_terms(acc.len(), "disjunctive normal form")?;
                    }
                }
                acc
            }
        })
    }

    pub fn from_cubes(cubes: impl IntoIterator<Item = Cube>) -> CountingFormula {
        CountingFormula::or(cubes.into_iter().map(|c| c.to_formula()))
    }
}

/// Combines sibling count literals on the same region.
///
/// In a conjunction the strongest lower and upper bounds survive; in a
/// disjunction the weakest. `Err` carries the absorbing constant when the
/// literals clash (`false` for a conjunction, `true` for a disjunction).
fn merge_counts(conj: bool, ops: Vec<CountingFormula>) -> Result<Vec<CountingFormula>, bool> {
    let count_lit = |f: &CountingFormula| -> Option<(Constituent, u32, bool)> {
        match f {
            CountingFormula::Leaf(Leaf::Count(a)) => Some((a.region.clone(), a.bound, true)),
            CountingFormula::Not(g) => match g.as_ref() {
                CountingFormula::Leaf(Leaf::Count(a)) => Some((a.region.clone(), a.bound, false)),
                _ => None,
            },
            _ => None,
        }
    };
    if ops.iter().filter(|f| count_lit(f).is_some()).count() < 2 {
        return Ok(ops);
    }
    // region -> (lower bound, exclusive upper bound)
    let mut bounds: BTreeMap<Constituent, (Option<u32>, Option<u32>)> = BTreeMap::new();
    let mut rest = Vec::new();
    for f in ops {
        let Some((region, n, positive)) = count_lit(&f) else {
            rest.push(f);
            continue;
        };
        let e = bounds.entry(region).or_default();
        let slot = if positive { &mut e.0 } else { &mut e.1 };
        // Conjunction: larger lower bound, smaller upper bound; disjunction: the reverse.
        *slot = Some(match (*slot, positive == conj) {
            (None, _) => n,
            (Some(m), true) => m.max(n),
            (Some(m), false) => m.min(n),
        });
    }
    let mut out = Vec::new();
    for (region, (lo, hi)) in bounds {
        if let (Some(lo), Some(hi)) = (lo, hi) {
            // conj: at least lo and fewer than hi is empty when lo >= hi.
            // disj: at least lo or fewer than hi covers everything when lo <= hi.
            if conj && lo >= hi {
                return Err(false);
            }
            if !conj && lo <= hi {
                return Err(true);
            }
        }
        if let Some(lo) = lo {
            out.push(CountingFormula::count(region.clone(), lo));
        }
        if let Some(hi) = hi {
            out.push(CountingFormula::not(CountingFormula::count(region, hi)));
        }
    }
    out.extend(rest);
    Ok(out)
}

/// Sorts, deduplicates and removes cubes implied by a smaller one.
fn prune(mut cubes: Vec<Cube>) -> Vec<Cube> {
    cubes.sort();
    cubes.dedup();
    if cubes.iter().any(|c| c.lits.is_empty()) {
        return vec![Cube::default()];
    }
    if cubes.len() > 400 {
        return cubes;
    }
    cubes.sort_by_key(|c| c.lits.len());
    let mut kept: Vec<Cube> = Vec::new();
    for c in cubes {
        if !kept.iter().any(|k| k.lits.is_subset(&c.lits)) {
            kept.push(c);
        }
    }
    kept.sort();
    kept
}

/// A signed leaf.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub leaf: Leaf,
    pub positive: bool,
}

impl Lit {
    pub fn new(leaf: Leaf, positive: bool) -> Self {
        Lit { leaf, positive }
    }

    pub fn negated(&self) -> Lit {
        Lit::new(self.leaf.clone(), !self.positive)
    }

    pub fn to_formula(&self) -> CountingFormula {
        CountingFormula::lit(self.leaf.clone(), self.positive)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.leaf, self.positive) {
            (Leaf::Eq(a, b), false) => write!(f, "{a} ~= {b}"),
            (l, true) => write!(f, "{l}"),
            (l, false) => write!(f, "~{l}"),
        }
    }
}

/// A conjunction of literals kept in a canonical, locally consistent shape.
///
/// Count literals on the same region are merged: only the strongest lower
/// bound and the strongest upper bound survive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cube {
    pub lits: BTreeSet<Lit>,
}

impl Cube {
    /// Adds a literal; `None` when the cube becomes contradictory.
    pub fn with(mut self, lit: Lit) -> Option<Cube> {
        if self.insert(lit) {
            Some(self)
        } else {
            None
        }
    }

    /// Conjunction of two cubes.
    pub fn merge(&self, other: &Cube) -> Option<Cube> {
        let (mut small, big) = if self.lits.len() <= other.lits.len() {
            (other.clone(), self)
        } else {
            (self.clone(), other)
        };
        for l in &big.lits {
            if !small.insert(l.clone()) {
                return None;
            }
        }
        Some(small)
    }

    fn insert(&mut self, lit: Lit) -> bool {
        match &lit.leaf {
            Leaf::Count(a) if a.bound == 0 => return lit.positive,
            Leaf::In(c, _) if c.is_empty() => return lit.positive,
            Leaf::Eq(a, b) if a == b => return lit.positive,
            _ => {}
        }
        if self.lits.contains(&lit.negated()) {
            return false;
        }
        if let Leaf::Count(atom) = &lit.leaf {
            return self.insert_count(atom, lit.positive);
        }
        if let Leaf::In(c, name) = &lit.leaf {
            for other in &self.lits {
                if let Leaf::In(d, m) = &other.leaf {
                    if m != name {
                        continue;
                    }
                    match (lit.positive, other.positive) {
                        (true, true) if !c.compatible(d) => return false,
                        (true, false) if c.refines(d) => return false,
                        (false, true) if d.refines(c) => return false,
                        _ => {}
                    }
                }
            }
        }
        self.lits.insert(lit);
        true
    }

    fn insert_count(&mut self, atom: &CountAtom, positive: bool) -> bool {
        let (lo, hi) = self.count_bounds(&atom.region);
        let (lo, hi) = if positive {
            (lo.max(atom.bound), hi)
        } else {
            (lo, Some(hi.map_or(atom.bound, |h| h.min(atom.bound))))
        };
        // `hi` is an exclusive bound: at least `lo` and fewer than `hi`.
        if hi.is_some_and(|h| lo >= h) {
            return false;
        }
        self.lits
            .retain(|l| !matches!(&l.leaf, Leaf::Count(a) if a.region == atom.region));
        if lo > 0 {
            self.lits.insert(Lit::new(
                Leaf::Count(CountAtom::new(atom.region.clone(), lo)),
                true,
            ));
        }
        if let Some(h) = hi {
            self.lits.insert(Lit::new(
                Leaf::Count(CountAtom::new(atom.region.clone(), h)),
                false,
            ));
        }
        true
    }

    /// `(lower, exclusive upper)` bounds this cube places on the region.
    pub fn count_bounds(&self, region: &Constituent) -> (u32, Option<u32>) {
        let (mut lo, mut hi) = (0, None);
        for l in &self.lits {
            if let Leaf::Count(a) = &l.leaf {
                if &a.region == region {
                    if l.positive {
                        lo = a.bound;
                    } else {
                        hi = Some(a.bound);
                    }
                }
            }
        }
        (lo, hi)
    }

    pub fn to_formula(&self) -> CountingFormula {
        CountingFormula::and(self.lits.iter().map(Lit::to_formula))
    }

    pub fn rename(&self, old: &str, new: &str) -> Option<Cube> {
        let mut out = Cube::default();
        for l in &self.lits {
            if !out.insert(Lit::new(l.leaf.rename(old, new), l.positive)) {
                return None;
            }
        }
        Some(out)
    }
}

// Binding strength for rendering, loosest first.
fn render(f: &CountingFormula, out: &mut String, parent: u8) {
    match f {
        CountingFormula::Const(true) => out.push_str("true"),
        CountingFormula::Const(false) => out.push_str("false"),
        CountingFormula::Leaf(l) => out.push_str(&l.to_string()),
        CountingFormula::Not(g) => match g.as_ref() {
            CountingFormula::Leaf(Leaf::Eq(a, b)) => {
                out.push_str(a);
                out.push_str(" ~= ");
                out.push_str(b);
            }
            CountingFormula::Leaf(l) => {
                out.push('~');
                out.push_str(&l.to_string());
            }
            g => {
                out.push_str("~(");
                render(g, out, 0);
                out.push(')');
            }
        },
        CountingFormula::And(xs) | CountingFormula::Or(xs) => {
            let (lvl, op) = if matches!(f, CountingFormula::And(_)) {
                (2, " & ")
            } else {
                (1, " | ")
            };
            let wrap = parent >= lvl;
            if wrap {
                out.push('(');
            }
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(op);
                }
                render(x, out, lvl);
            }
            if wrap {
                out.push(')');
            }
        }
    }
}

impl fmt::Display for CountingFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        render(self, &mut s, 0);
        f.write_str(&s)
    }
}

/// Calls `visit` with every way of writing `n` as an ordered sum filling
/// `split[i..]`.
fn compositions(n: u32, i: usize, split: &mut [u32], visit: &mut impl FnMut(&[u32]) -> Result<()>) -> Result<()> {
    if i + 1 == split.len() {
        split[i] = n;
        return visit(split);
    }
    for k in 0..=n {
        split[i] = k;
        compositions(n - k, i + 1, split, visit)?;
    }
    Ok(())
}
