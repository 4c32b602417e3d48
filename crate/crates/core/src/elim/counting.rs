use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::normal::{
    consistent_partitions, partition_literals, Constituent, CountingFormula, Cube, Leaf, Lit,
};

/// `ex X. body` for a quantifier-free counting formula over `P ∪ {X}`.
///
/// Count atoms mentioning `X` must be over full constituents of the
/// predicates of `body`. The result mentions only predicates other than `X`.
pub fn eliminate_counting(x: &str, body: &CountingFormula, limits: &Limits) -> Result<CountingFormula> {
    let mut ctx = body.predicates();
    ctx.remove(x);
    for l in body.leaves() {
        if let Leaf::Count(a) = l {
            let sig = a.region.signature();
            if sig.contains(x) && sig.len() != ctx.len() + 1 {
                return Err(Error::Contract(format!(
                    "count atom {a} is not over a full constituent of {}",
                    ctx.iter().chain([&x.to_string()]).cloned().collect::<Vec<_>>().join(", ")
                )));
            }
        }
    }
    eliminate_counting_in(x, body, &ctx, limits)
}

/// As [`eliminate_counting`] with the remaining signature `ctx` given.
///
/// Per cube of the disjunctive form, the named individuals whose membership
/// in `X` is constrained are split by how they coincide and which full
/// constituent over `ctx ∪ {X}` each lies in. Then each constituent `s` over
/// `ctx` gets the interval of sizes splittable into `|s ∩ X|` and
/// `|s ∩ ~X|` within their bounds, counting the named elements on each side.
pub(crate) fn eliminate_counting_in(
    x: &str,
    body: &CountingFormula,
    ctx: &BTreeSet<String>,
    limits: &Limits,
) -> Result<CountingFormula> {
    let relevant = |l: &Leaf| match l {
        Leaf::Count(a) => mentions(&a.region, x),
        Leaf::In(c, _) => mentions(c, x),
        _ => false,
    };
    let (opaque, terms) = body.dnf_relative(&relevant, limits)?;
    let mut out = Vec::with_capacity(terms.len());
    let mut size = 0;
    for (cube, rest) in &terms {
        let mut parts: Vec<CountingFormula> = rest.iter().map(|&i| opaque[i].clone()).collect();
        parts.push(eliminate_cube(x, cube, ctx, limits)?);
        let part = CountingFormula::and(parts);
        size += part.atom_count();
        limits.check_atoms(size, "second-order elimination")?;
        out.push(part);
    }
    Ok(CountingFormula::or(out))
}

fn mentions(region: &Constituent, x: &str) -> bool {
    region.sign(x).is_some()
}

fn eliminate_cube(
    x: &str,
    cube: &Cube,
    ctx: &BTreeSet<String>,
    limits: &Limits,
) -> Result<CountingFormula> {
    // Names whose side of X matters.
    let names: Vec<String> = cube
        .lits
        .iter()
        .filter_map(|l| match &l.leaf {
            Leaf::In(c, n) if mentions(c, x) => Some(n.clone()),
            _ => None,
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut residue = Vec::new();
    let mut region_lits: BTreeMap<&str, Vec<(Constituent, bool)>> = BTreeMap::new();
    for l in &cube.lits {
        match &l.leaf {
            Leaf::Count(a) if mentions(&a.region, x) => {}
            Leaf::In(c, n) if names.contains(n) => {
                region_lits.entry(n).or_default().push((c.clone(), l.positive));
            }
            _ => residue.push(l.to_formula()),
        }
    }

    let mut wide = ctx.clone();
    wide.insert(x.to_string());
    let full = Constituent::all_over(&wide);

    let mut cases = Vec::new();
    for blocks in consistent_partitions(&names, cube) {
        // Candidate constituents for each block representative.
        let mut options: Vec<Vec<&Constituent>> = Vec::with_capacity(blocks.len());
        for b in &blocks {
            let lits: Vec<&(Constituent, bool)> = b
                .iter()
                .flat_map(|n| region_lits.get(n.as_str()).into_iter().flatten())
                .collect();
            options.push(
                full.iter()
                    .filter(|t| lits.iter().all(|(c, pos)| t.refines(c) == *pos))
                    .collect(),
            );
        }
        let mut placements = Vec::new();
        let mut choice = vec![0usize; blocks.len()];
        if options.iter().all(|o| !o.is_empty()) {
            loop {
                let placed: Vec<&Constituent> =
                    choice.iter().zip(&options).map(|(&i, o)| o[i]).collect();
                if let Some(f) = placement(x, cube, ctx, &blocks, &placed, limits)? {
                    placements.push(f);
                }
                limits.check_terms(placements.len(), "second-order elimination")?;
                // Advance the mixed-radix counter.
                let mut i = 0;
                while i < choice.len() {
                    choice[i] += 1;
                    if choice[i] < options[i].len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == choice.len() {
                    break;
                }
            }
        }
        let mut parts = partition_literals(&blocks);
        parts.push(CountingFormula::or(placements));
        cases.push(CountingFormula::and(parts));
    }
    residue.push(CountingFormula::or(cases));
    Ok(CountingFormula::and(residue))
}

/// The resultant for one placement of the block representatives, or `None`
/// when the named elements alone overflow an upper bound.
fn placement(
    x: &str,
    cube: &Cube,
    ctx: &BTreeSet<String>,
    blocks: &[Vec<String>],
    placed: &[&Constituent],
    limits: &Limits,
) -> Result<Option<CountingFormula>> {
    let mut parts = Vec::new();
    for (b, t) in blocks.iter().zip(placed) {
        parts.push(Lit::new(Leaf::In(t.without(x), b[0].clone()), true).to_formula());
    }
    for s in Constituent::all_over(ctx) {
        let side = |sign: bool| {
            let region = s.with(x, sign);
            let named = placed.iter().filter(|t| ***t == region).count() as u32;
            let (lo, hi) = cube.count_bounds(&region);
            (lo.max(named), hi, named)
        };
        let (lo_in, hi_in, k_in) = side(true);
        let (lo_out, hi_out, k_out) = side(false);
        // `hi` is exclusive: fewer than `hi` elements.
        if hi_in.is_some_and(|h| k_in >= h) || hi_out.is_some_and(|h| k_out >= h) {
            return Ok(None);
        }
        let lo = lo_in + lo_out;
        if lo > limits.max_bound {
            return Err(Error::ResourceLimit(format!(
                "count bound {lo} exceeds cap {}",
                limits.max_bound
            )));
        }
        parts.push(CountingFormula::count(s.clone(), lo));
        if let (Some(a), Some(b)) = (hi_in, hi_out) {
            // At most (a - 1) + (b - 1) elements.
            parts.push(CountingFormula::not(CountingFormula::count(s, a + b - 1)));
        }
    }
    Ok(Some(CountingFormula::and(parts)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn whole_with(sign: bool) -> Constituent {
        Constituent::literal("X", sign)
    }

    #[test]
    fn inside_and_outside_need_two() {
        let body = CountingFormula::and([
            CountingFormula::count(whole_with(true), 1),
            CountingFormula::count(whole_with(false), 1),
        ]);
        let out = eliminate_counting("X", &body, &Limits::default()).unwrap();
        assert_eq!(out, CountingFormula::size_at_least(2));
    }

    #[test]
    fn bounds_add_up() {
        let body = CountingFormula::and([
            CountingFormula::count(whole_with(true), 2),
            CountingFormula::count(whole_with(false), 1),
        ]);
        let out = eliminate_counting("X", &body, &Limits::default()).unwrap();
        assert_eq!(out, CountingFormula::size_at_least(3));
    }

    #[test]
    fn unconstrained_is_true() {
        let out = eliminate_counting("X", &CountingFormula::Const(true), &Limits::default()).unwrap();
        assert_eq!(out, CountingFormula::Const(true));
    }

    #[test]
    fn upper_bounds_bound_the_total() {
        // |X| < 2 and |~X| < 3: at most 1 + 2 elements.
        let body = CountingFormula::and([
            CountingFormula::not(CountingFormula::count(whole_with(true), 2)),
            CountingFormula::not(CountingFormula::count(whole_with(false), 3)),
        ]);
        let out = eliminate_counting("X", &body, &Limits::default()).unwrap();
        assert_eq!(out, CountingFormula::not(CountingFormula::size_at_least(4)));
    }

    #[test]
    fn named_element_inside_an_empty_side_is_impossible() {
        let body = CountingFormula::and([
            CountingFormula::leaf(Leaf::In(whole_with(true), "a".into())),
            CountingFormula::not(CountingFormula::count(whole_with(true), 1)),
        ]);
        let out = eliminate_counting("X", &body, &Limits::default()).unwrap();
        assert_eq!(out, CountingFormula::Const(false));
    }

    #[test]
    fn rejects_partial_regions() {
        let body = CountingFormula::and([
            CountingFormula::count(whole_with(true), 1),
            CountingFormula::count(Constituent::literal("P", true), 1),
        ]);
        assert!(matches!(
            eliminate_counting("X", &body, &Limits::default()),
            Err(Error::Contract(_))
        ));
    }
}
