//! Every rewriting step preserves meaning on all models up to a small size.

use mlogic::elim::distribute_so;
use mlogic::formula::FormulaClass;
use mlogic::normal::{is_block_form, is_nnf, miniscope, to_block_form, to_nnf};
use mlogic::oracle::{equiv_check, equiv_check_counting, random_formula, GeneratorParams};
use mlogic::{classify, free_symbols, parse, to_ccnf, Error, Formula, Limits};
use proptest::prelude::*;

fn params(seed: u64, pq: usize, iq: usize, free: usize, depth: usize, identity: bool) -> GeneratorParams {
    GeneratorParams {
        seed,
        max_pred_quantifiers: pq,
        max_ind_quantifiers: iq,
        max_free_predicates: free,
        max_depth: depth,
        identity,
        count_cap: if identity { 3 } else { 0 },
    }
}

fn second_order(seed: u64) -> Formula {
    random_formula(&params(seed, 2, 3, 2, 5, true))
}

fn first_order(seed: u64, identity: bool) -> Formula {
    random_formula(&params(seed, 0, 3, 3, 5, identity))
}

fn same(f: &Formula, g: &Formula, size: u32) -> Result<(), TestCaseError> {
    match equiv_check(f, g, size, &Limits::default()) {
        Ok(None) => Ok(()),
        Ok(Some(m)) => Err(TestCaseError::fail(format!("{f}\n  vs {g}\n  differ on {m}"))),
        Err(e) => Err(TestCaseError::fail(format!("{f}: {e}"))),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        for f in [second_order(seed), first_order(seed, true)] {
            let text = f.to_string();
            prop_assert_eq!(parse(&text).unwrap(), f, "{}", text);
        }
    }

    #[test]
    fn nnf_preserves_meaning(seed in any::<u64>()) {
        let f = second_order(seed);
        let n = to_nnf(&f);
        prop_assert!(is_nnf(&n), "{}", n);
        prop_assert_eq!(to_nnf(&n), n.clone());
        same(&f, &n, 3)?;
    }

    #[test]
    fn miniscope_preserves_meaning(seed in any::<u64>()) {
        let f = to_nnf(&second_order(seed));
        same(&f, &miniscope(&f), 3)?;
    }

    #[test]
    fn distribution_preserves_meaning(seed in any::<u64>()) {
        let f = miniscope(&to_nnf(&second_order(seed)));
        same(&f, &distribute_so(&f, &Limits::default()), 3)?;
    }

    #[test]
    fn block_form_preserves_meaning(seed in any::<u64>()) {
        let f = first_order(seed, false);
        let b = to_block_form(&f, &Limits::default());
        // Distribution is exponential; a few samples exceed the default cap.
        prop_assume!(!matches!(b, Err(Error::ResourceLimit(_))));
        let b = b.unwrap();
        prop_assert!(is_block_form(b.formula()), "{}", b);
        same(&f, b.formula(), 4)?;
    }

    #[test]
    fn counting_form_preserves_meaning(seed in any::<u64>(), named in any::<bool>()) {
        let mut f = first_order(seed, true);
        if named {
            // Free individual names take part as well.
            f = Formula::or(f, Formula::and(Formula::app("P", "a"), Formula::not(Formula::eq("a", "b"))));
        }
        let cf = to_ccnf(&f, &Limits::default());
        prop_assume!(!matches!(cf, Err(Error::ResourceLimit(_))));
        let cf = cf.unwrap();
        match equiv_check_counting(&f, &cf, 4, &Limits::default()) {
            Ok(None) => {}
            Ok(Some(m)) => prop_assert!(false, "{}\n  vs {}\n  differ on {}", f, cf, m),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn renaming_round_trips(seed in any::<u64>()) {
        let f = second_order(seed);
        let g = f.substitute("P", "S").unwrap();
        let (preds, _) = free_symbols(&g);
        prop_assert!(!preds.contains("P"));
        prop_assert_eq!(preds.contains("S"), free_symbols(&f).0.contains("P"));
        prop_assert_eq!(g.substitute("S", "P").unwrap(), f);
    }

    #[test]
    fn classification_matches_the_generator(seed in any::<u64>()) {
        let c = classify(&random_formula(&params(seed, 0, 3, 2, 4, false)));
        prop_assert!(FormulaClass::DomainA.includes(&c), "{}", c);
        let c = classify(&second_order(seed));
        prop_assert!(FormulaClass::DomainBStar.includes(&c), "{}", c);
        prop_assert!(!matches!(c, FormulaClass::OutOfScope(_)));
    }
}

#[test]
fn capture_is_refused() {
    let f = parse("all x. (P(x) | Q(a))").unwrap();
    assert!(matches!(f.substitute("a", "x"), Err(Error::CaptureRisk { .. })));
    assert!(matches!(f.substitute("P", "x"), Err(Error::Contract(_))));
    assert_eq!(f.substitute("a", "b").unwrap().to_string(), "all x. (P(x) | Q(b))");
}

#[test]
fn free_symbols_skip_bound_names() {
    let f = parse("ex X. all x. (X(x) | P(a) | p)").unwrap();
    let (preds, inds) = free_symbols(&f);
    assert_eq!(preds.into_iter().collect::<Vec<_>>(), ["P", "p"]);
    assert_eq!(inds.into_iter().collect::<Vec<_>>(), ["a"]);
}

#[test]
fn classifier_over_many_samples() {
    let mut seen = std::collections::BTreeSet::new();
    for seed in 0..500 {
        let f = random_formula(&GeneratorParams::pure(seed));
        let c = classify(&f);
        assert!(FormulaClass::DomainBStar.includes(&c), "{f}: {c}");
        let has_eq = {
            let mut found = false;
            f.walk(&mut |g| found |= matches!(g, Formula::Equal(..)));
            found
        };
        assert_eq!(c.is_identity_free(), !has_eq, "{f}: {c}");
        assert_eq!(
            matches!(c, FormulaClass::DomainB | FormulaClass::DomainBStar),
            f.has_predicate_quantifier(),
            "{f}: {c}"
        );
        seen.insert(c.name().to_string());
    }
    assert!(seen.len() >= 3, "{seen:?}");
}
