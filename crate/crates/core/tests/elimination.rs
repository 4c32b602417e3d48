//! Second-order elimination against the model oracle and against the
//! rough resultant of the main elimination form.

use mlogic::elim::{eliminate_all, eliminate_barbara, eliminate_main_form, MainEliminationForm, Region};
use mlogic::normal::CountingFormula;
use mlogic::oracle::{equiv_check, equiv_check_counting, random_formula, GeneratorParams};
use mlogic::{eliminate_counting, parse, to_ccnf, Error, Formula, Limits};
use proptest::prelude::*;

/// Formulas in the single free variable `y` over `A`, `B`, `C`.
fn region_body() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::app("A", "y")),
        Just(Formula::app("B", "y")),
        Just(Formula::app("C", "y")),
        Just(Formula::Const(true)),
        Just(Formula::Const(false)),
        Just(parse("ex z. (B(z) & z ~= y)").unwrap()),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    })
}

fn region() -> impl Strategy<Value = Region> {
    region_body().prop_map(|b| Region::new("y", b))
}

/// The rough resultant with its distinctness clause:
/// `all y. (lower | upper) & ex u1 .. ex v1 .. (G1(u1) & upper(u1) & ...
///  & D1(v1) & lower(v1) & ... & u1 ~= v1 & ...)`.
///
/// Each `ui` must end up inside `X` and each `vj` outside, so they differ;
/// the `ui` among themselves need not.
fn rough_resultant(m: &MainEliminationForm) -> Formula {
    let mut parts = vec![Formula::forall(
        "y",
        Formula::or(m.lower.at("y").unwrap(), m.upper.at("y").unwrap()),
    )];
    let us: Vec<String> = (0..m.positive.len()).map(|i| format!("u{i}")).collect();
    let vs: Vec<String> = (0..m.negative.len()).map(|j| format!("v{j}")).collect();
    let mut body = Vec::new();
    for (g, u) in m.positive.iter().zip(&us) {
        body.push(g.at(u).unwrap());
        body.push(m.upper.at(u).unwrap());
    }
    for (d, v) in m.negative.iter().zip(&vs) {
        body.push(d.at(v).unwrap());
        body.push(m.lower.at(v).unwrap());
    }
    for u in &us {
        for v in &vs {
            body.push(Formula::not(Formula::eq(u.as_str(), v.as_str())));
        }
    }
    let mut witnesses = Formula::and_all(body);
    for w in us.iter().chain(&vs).rev() {
        witnesses = Formula::exists(w.as_str(), witnesses);
    }
    parts.push(witnesses);
    Formula::and_all(parts)
}

fn counting_agrees(f: &Formula, cf: &CountingFormula, size: u32) -> Result<(), TestCaseError> {
    match equiv_check_counting(f, cf, size, &Limits::default()) {
        Ok(None) => Ok(()),
        Ok(Some(m)) => Err(TestCaseError::fail(format!("{f}\n  vs {cf}\n  differ on {m}"))),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn main_form_matches_the_rough_resultant(
        lower in region(),
        upper in region(),
        positive in prop::collection::vec(region(), 0..3),
        negative in prop::collection::vec(region(), 0..3),
    ) {
        let mut m = MainEliminationForm::new("X", lower, upper);
        m.positive = positive;
        m.negative = negative;
        let literal = rough_resultant(&m);
        // The rough resultant is itself checked by brute force ...
        let quantified = m.to_formula().unwrap();
        prop_assert_eq!(equiv_check(&quantified, &literal, 3, &Limits::default()).unwrap(), None);
        // ... and the engine, along its own route, agrees with it.
        let cf = eliminate_main_form(&m, &Limits::default());
        prop_assume!(!matches!(cf, Err(Error::ResourceLimit(_))));
        counting_agrees(&literal, &cf.unwrap(), 4)?;
    }

    #[test]
    fn barbara_for_any_bounds(lower in region(), upper in region()) {
        let m = MainEliminationForm::new("R", lower.clone(), upper.clone());
        let out = eliminate_barbara("R", &lower, &upper).unwrap();
        prop_assert!(!out.to_string().contains('R'));
        prop_assert_eq!(equiv_check(&m.to_formula().unwrap(), &out, 4, &Limits::default()).unwrap(), None);
    }

    #[test]
    fn elimination_preserves_meaning(seed in any::<u64>()) {
        let p = GeneratorParams {
            seed,
            max_pred_quantifiers: 2,
            max_ind_quantifiers: 4,
            max_free_predicates: 2,
            max_depth: 6,
            identity: true,
            count_cap: 3,
        };
        let f = random_formula(&p);
        let r = eliminate_all(&f, &Limits::default());
        prop_assume!(!matches!(r, Err(Error::ResourceLimit(_))));
        counting_agrees(&f, &r.unwrap(), 4)?;
    }

    #[test]
    fn eliminating_a_counting_body(seed in any::<u64>()) {
        // A first-order formula read with one of its free predicates as `X`.
        let p = GeneratorParams {
            seed,
            max_pred_quantifiers: 0,
            max_ind_quantifiers: 3,
            max_free_predicates: 2,
            max_depth: 5,
            identity: true,
            count_cap: 2,
        };
        let f = random_formula(&p).substitute("Q", "X").unwrap();
        let body = to_ccnf(&f, &Limits::default());
        prop_assume!(!matches!(body, Err(Error::ResourceLimit(_))));
        let body = body.unwrap();
        let r = eliminate_counting("X", &body, &Limits::default());
        prop_assume!(!matches!(r, Err(Error::ResourceLimit(_))));
        let r = r.unwrap();
        prop_assert!(!r.predicates().contains("X"), "{}", r);
        counting_agrees(&Formula::exists_pred("X", f), &r, 4)?;
    }

    #[test]
    fn counting_form_commutes_with_negation(seed in any::<u64>()) {
        let p = GeneratorParams {
            seed,
            max_pred_quantifiers: 0,
            max_ind_quantifiers: 3,
            max_free_predicates: 2,
            max_depth: 5,
            identity: true,
            count_cap: 2,
        };
        let f = random_formula(&p);
        let limits = Limits::default();
        let (Ok(pos), Ok(neg)) = (to_ccnf(&f, &limits), to_ccnf(&Formula::not(f.clone()), &limits)) else {
            return Err(TestCaseError::reject("resource limit"));
        };
        let flipped = CountingFormula::not(pos);
        prop_assert_eq!(
            mlogic::oracle::equiv_check_counting_pair(&flipped, &neg, 4, &limits).unwrap(),
            None
        );
    }
}

#[test]
fn main_form_with_witnesses_needs_room() {
    // One witness inside X and one outside, with X otherwise free: two
    // distinct elements are needed.
    let m = MainEliminationForm::new("X", Region::everything(), Region::everything())
        .with_positive(Region::everything())
        .with_negative(Region::everything());
    let r = eliminate_main_form(&m, &Limits::default()).unwrap();
    assert_eq!(r, CountingFormula::size_at_least(2));
    assert_eq!(
        equiv_check_counting(&rough_resultant(&m), &r, 4, &Limits::default()).unwrap(),
        None
    );
}

#[test]
fn names_crossing_a_quantified_class() {
    let f = parse("ex X. (X(a) & ~X(b) & all x. (X(x) -> P(x)))").unwrap();
    let r = eliminate_all(&f, &Limits::default()).unwrap();
    assert!(!r.predicates().contains("X"));
    assert_eq!(equiv_check_counting(&f, &r, 4, &Limits::default()).unwrap(), None);
    let want = parse("P(a) & a ~= b").unwrap();
    assert_eq!(equiv_check_counting(&want, &r, 4, &Limits::default()).unwrap(), None);
}

#[test]
fn partial_count_atoms_on_the_eliminated_predicate_are_refused() {
    let body = parse("ex x. (X(x) & P(x))").unwrap();
    let cf = to_ccnf(&body, &Limits::default()).unwrap();
    // Built over {P, X} this is fine ...
    assert!(eliminate_counting("X", &cf, &Limits::default()).is_ok());
    // ... but a count on X alone, beside P, is not a full constituent.
    let partial = CountingFormula::and([
        cf,
        CountingFormula::count(mlogic::normal::Constituent::literal("X", true), 2),
    ]);
    assert!(matches!(
        eliminate_counting("X", &partial, &Limits::default()),
        Err(Error::Contract(_))
    ));
}
