//! Formulas and counting formulas compiled against a fixed symbol layout,
//! evaluated with predicate extensions as bitmasks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formula::{Formula, Signature};
use crate::limits::Meter;
use crate::normal::{CountingFormula, Leaf};

/// Largest domain the bitmask representation supports.
pub(crate) const MAX_SIZE: u32 = 32;

/// Values for the free symbols of a signature, in its sorted order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Valuation {
    pub(crate) size: u32,
    pub(crate) preds: Vec<u64>,
    pub(crate) letters: Vec<bool>,
    pub(crate) inds: Vec<u32>,
}

impl Valuation {
    pub(crate) fn first(sig: &Signature, size: u32) -> Self {
        Valuation {
            size,
            preds: vec![0; sig.unary.len()],
            letters: vec![false; sig.nullary.len()],
            inds: vec![0; sig.individuals.len()],
        }
    }

    /// Steps to the next valuation; `false` after the last one.
    fn advance(&mut self) -> bool {
        let full = (1u64 << self.size) - 1;
        for v in self.inds.iter_mut().rev() {
            *v += 1;
            if *v < self.size {
                return true;
            }
            *v = 0;
        }
        for v in self.letters.iter_mut().rev() {
            if !*v {
                *v = true;
                return true;
            }
            *v = false;
        }
        for v in self.preds.iter_mut().rev() {
            if *v < full {
                *v += 1;
                return true;
            }
            *v = 0;
        }
        false
    }
}

/// Every valuation of `sig` over a domain of `size` elements.
pub(crate) fn for_each_valuation(
    sig: &Signature,
    size: u32,
    meter: &mut Meter,
    mut visit: impl FnMut(&Valuation, &mut Meter) -> Result<bool>,
) -> Result<bool> {
    debug_assert!((1..=MAX_SIZE).contains(&size));
    let mut val = Valuation::first(sig, size);
    loop {
        meter.tick(1)?;
        if !visit(&val, meter)? {
            return Ok(false);
        }
        if !val.advance() {
            return Ok(true);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Free(usize),
    Bound(usize),
}

#[derive(Debug, Clone)]
enum Node {
    Const(bool),
    Mem(Slot, Slot),
    Letter(Slot),
    Eq(Slot, Slot),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Ind { all: bool, slot: usize, body: Box<Node> },
    Pred { all: bool, slot: usize, body: Box<Node> },
    Prop { all: bool, slot: usize, body: Box<Node> },
}

/// A formula ready for repeated evaluation.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    root: Node,
    bound_inds: usize,
    bound_preds: usize,
    bound_letters: usize,
}

#[derive(Default)]
struct Scopes {
    inds: BTreeMap<String, usize>,
    preds: BTreeMap<String, usize>,
    letters: BTreeMap<String, usize>,
    counts: (usize, usize, usize),
}

fn position(set: &std::collections::BTreeSet<String>, name: &str) -> Option<usize> {
    set.iter().position(|n| n == name)
}

impl Compiled {
    pub(crate) fn new(f: &Formula, sig: &Signature) -> Result<Self> {
        let mut scopes = Scopes::default();
        let root = compile(f, sig, &mut scopes, 0, 0, 0)?;
        Ok(Compiled {
            root,
            bound_inds: scopes.counts.0,
            bound_preds: scopes.counts.1,
            bound_letters: scopes.counts.2,
        })
    }

    pub(crate) fn eval(&self, val: &Valuation, meter: &mut Meter) -> Result<bool> {
        let mut env = Env {
            val,
            full: (1u64 << val.size) - 1,
            inds: vec![0; self.bound_inds],
            preds: vec![0; self.bound_preds],
            letters: vec![false; self.bound_letters],
        };
        env.eval(&self.root, meter)
    }
}

fn compile(
    f: &Formula,
    sig: &Signature,
    sc: &mut Scopes,
    di: usize,
    dp: usize,
    dl: usize,
) -> Result<Node> {
    let ind = |sc: &Scopes, n: &str| -> Result<Slot> {
        if let Some(&s) = sc.inds.get(n) {
            Ok(Slot::Bound(s))
        } else {
            position(&sig.individuals, n)
                .map(Slot::Free)
                .ok_or_else(|| Error::MissingInterpretation(n.to_string()))
        }
    };
    let bin = |a: &Formula, b: &Formula, sc: &mut Scopes| -> Result<(Box<Node>, Box<Node>)> {
        Ok((
            Box::new(compile(a, sig, sc, di, dp, dl)?),
            Box::new(compile(b, sig, sc, di, dp, dl)?),
        ))
    };
    Ok(match f {
        Formula::Const(b) => Node::Const(*b),
        Formula::Pred { name, arg: Some(a) } => {
            let p = match sc.preds.get(name) {
                Some(&s) => Slot::Bound(s),
                None => position(&sig.unary, name)
                    .map(Slot::Free)
                    .ok_or_else(|| Error::MissingInterpretation(name.clone()))?,
            };
            Node::Mem(p, ind(sc, a)?)
        }
        Formula::Pred { name, arg: None } => Node::Letter(match sc.letters.get(name) {
            Some(&s) => Slot::Bound(s),
            None => position(&sig.nullary, name)
                .map(Slot::Free)
                .ok_or_else(|| Error::MissingInterpretation(name.clone()))?,
        }),
        Formula::Equal(a, b) => Node::Eq(ind(sc, a)?, ind(sc, b)?),
        Formula::Not(g) => Node::Not(Box::new(compile(g, sig, sc, di, dp, dl)?)),
        Formula::And(a, b) => {
            let (x, y) = bin(a, b, sc)?;
            Node::And(x, y)
        }
        Formula::Or(a, b) => {
            let (x, y) = bin(a, b, sc)?;
            Node::Or(x, y)
        }
        Formula::Implies(a, b) => {
            let (x, y) = bin(a, b, sc)?;
            Node::Implies(x, y)
        }
        Formula::Iff(a, b) => {
            let (x, y) = bin(a, b, sc)?;
            Node::Iff(x, y)
        }
        Formula::ForallInd(v, body) | Formula::ExistsInd(v, body) => {
            let all = matches!(f, Formula::ForallInd(..));
            let saved = sc.inds.insert(v.clone(), di);
            sc.counts.0 = sc.counts.0.max(di + 1);
            let body = compile(body, sig, sc, di + 1, dp, dl)?;
            restore(&mut sc.inds, v, saved);
            Node::Ind {
                all,
                slot: di,
                body: Box::new(body),
            }
        }
        Formula::ForallPred(v, body) | Formula::ExistsPred(v, body) => {
            let all = matches!(f, Formula::ForallPred(..));
            if body.uses_as_letter(v) {
                let saved = sc.letters.insert(v.clone(), dl);
                sc.counts.2 = sc.counts.2.max(dl + 1);
                let body = compile(body, sig, sc, di, dp, dl + 1)?;
                restore(&mut sc.letters, v, saved);
                Node::Prop {
                    all,
                    slot: dl,
                    body: Box::new(body),
                }
            } else {
                let saved = sc.preds.insert(v.clone(), dp);
                sc.counts.1 = sc.counts.1.max(dp + 1);
                let body = compile(body, sig, sc, di, dp + 1, dl)?;
                restore(&mut sc.preds, v, saved);
                Node::Pred {
                    all,
                    slot: dp,
                    body: Box::new(body),
                }
            }
        }
    })
}

fn restore(map: &mut BTreeMap<String, usize>, name: &str, saved: Option<usize>) {
    match saved {
        Some(s) => {
            map.insert(name.to_string(), s);
        }
        None => {
            map.remove(name);
        }
    }
}

struct Env<'a> {
    val: &'a Valuation,
    full: u64,
    inds: Vec<u32>,
    preds: Vec<u64>,
    letters: Vec<bool>,
}

impl Env<'_> {
    fn ind(&self, s: Slot) -> u32 {
        match s {
            Slot::Free(i) => self.val.inds[i],
            Slot::Bound(i) => self.inds[i],
        }
    }

    fn eval(&mut self, node: &Node, meter: &mut Meter) -> Result<bool> {
        meter.tick(1)?;
        Ok(match node {
            Node::Const(b) => *b,
            Node::Mem(p, x) => {
                let set = match *p {
                    Slot::Free(i) => self.val.preds[i],
                    Slot::Bound(i) => self.preds[i],
                };
                set >> self.ind(*x) & 1 == 1
            }
            Node::Letter(s) => match *s {
                Slot::Free(i) => self.val.letters[i],
                Slot::Bound(i) => self.letters[i],
            },
            Node::Eq(a, b) => self.ind(*a) == self.ind(*b),
            Node::Not(g) => !self.eval(g, meter)?,
            Node::And(a, b) => self.eval(a, meter)? && self.eval(b, meter)?,
            Node::Or(a, b) => self.eval(a, meter)? || self.eval(b, meter)?,
            Node::Implies(a, b) => !self.eval(a, meter)? || self.eval(b, meter)?,
            Node::Iff(a, b) => self.eval(a, meter)? == self.eval(b, meter)?,
            Node::Ind { all, slot, body } => {
                let mut result = *all;
                for e in 0..self.val.size {
                    self.inds[*slot] = e;
                    if self.eval(body, meter)? != *all {
                        result = !*all;
                        break;
                    }
                }
                result
            }
            Node::Pred { all, slot, body } => {
                let mut result = *all;
                for set in 0..=self.full {
                    self.preds[*slot] = set;
                    if self.eval(body, meter)? != *all {
                        result = !*all;
                        break;
                    }
                }
                result
            }
            Node::Prop { all, slot, body } => {
                let mut result = *all;
                for b in [false, true] {
                    self.letters[*slot] = b;
                    if self.eval(body, meter)? != *all {
                        result = !*all;
                        break;
                    }
                }
                result
            }
        })
    }
}

#[derive(Debug, Clone)]
enum CNode {
    Const(bool),
    /// Region given by required-in and required-out predicate masks.
    Count { inside: Vec<usize>, outside: Vec<usize>, bound: u32 },
    In { inside: Vec<usize>, outside: Vec<usize>, name: usize },
    Eq(usize, usize),
    Letter(usize),
    Not(Box<CNode>),
    And(Vec<CNode>),
    Or(Vec<CNode>),
}

/// A counting formula ready for repeated evaluation.
#[derive(Debug, Clone)]
pub(crate) struct CompiledCounting(CNode);

impl CompiledCounting {
    pub(crate) fn new(cf: &CountingFormula, sig: &Signature) -> Result<Self> {
        Ok(CompiledCounting(compile_counting(cf, sig)?))
    }

    pub(crate) fn eval(&self, val: &Valuation) -> bool {
        eval_counting(&self.0, val)
    }
}

fn compile_counting(cf: &CountingFormula, sig: &Signature) -> Result<CNode> {
    let pred = |p: &str| {
        position(&sig.unary, p).ok_or_else(|| Error::MissingInterpretation(p.to_string()))
    };
    let name = |n: &str| {
        position(&sig.individuals, n).ok_or_else(|| Error::MissingInterpretation(n.to_string()))
    };
    let split = |c: &crate::normal::Constituent| -> Result<(Vec<usize>, Vec<usize>)> {
        let (mut i, mut o) = (Vec::new(), Vec::new());
        for (p, s) in c.signs() {
            if *s { i.push(pred(p)?) } else { o.push(pred(p)?) }
        }
        Ok((i, o))
    };
    Ok(match cf {
        CountingFormula::Const(b) => CNode::Const(*b),
        CountingFormula::Leaf(Leaf::Count(a)) => {
            let (inside, outside) = split(&a.region)?;
            CNode::Count { inside, outside, bound: a.bound }
        }
        CountingFormula::Leaf(Leaf::In(c, n)) => {
            let (inside, outside) = split(c)?;
            CNode::In { inside, outside, name: name(n)? }
        }
        CountingFormula::Leaf(Leaf::Eq(a, b)) => CNode::Eq(name(a)?, name(b)?),
        CountingFormula::Leaf(Leaf::Letter(p)) => CNode::Letter(
            position(&sig.nullary, p).ok_or_else(|| Error::MissingInterpretation(p.clone()))?,
        ),
        CountingFormula::Not(g) => CNode::Not(Box::new(compile_counting(g, sig)?)),
        CountingFormula::And(xs) => {
            CNode::And(xs.iter().map(|x| compile_counting(x, sig)).collect::<Result<_>>()?)
        }
        CountingFormula::Or(xs) => {
            CNode::Or(xs.iter().map(|x| compile_counting(x, sig)).collect::<Result<_>>()?)
        }
    })
}

fn region_mask(inside: &[usize], outside: &[usize], val: &Valuation) -> u64 {
    let mut m = (1u64 << val.size) - 1;
    for &i in inside {
        m &= val.preds[i];
    }
    for &o in outside {
        m &= !val.preds[o];
    }
    m
}

fn eval_counting(node: &CNode, val: &Valuation) -> bool {
    match node {
        CNode::Const(b) => *b,
        CNode::Count {
            inside,
            outside,
            bound,
        } => region_mask(inside, outside, val).count_ones() >= *bound,
        CNode::In {
            inside,
            outside,
            name,
        } => region_mask(inside, outside, val) >> val.inds[*name] & 1 == 1,
        CNode::Eq(a, b) => val.inds[*a] == val.inds[*b],
        CNode::Letter(i) => val.letters[*i],
        CNode::Not(g) => !eval_counting(g, val),
        CNode::And(xs) => xs.iter().all(|x| eval_counting(x, val)),
        CNode::Or(xs) => xs.iter().any(|x| eval_counting(x, val)),
    }
}
