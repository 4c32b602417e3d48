use mlogic::decision::universal_closure;
use mlogic::oracle::{random_formula, spectrum_bruteforce, GeneratorParams};
use mlogic::{decide, decide_formula, spectrum_of, Error, Formula, Limits, Spectrum, Verdict};
use proptest::prelude::*;

fn spectrum(f: &Formula) -> Spectrum {
    decide_formula(f, &Limits::default())
        .unwrap_or_else(|e| panic!("{f}: {e}"))
        .spectrum
        .unwrap_or_else(|| panic!("{f}: not pure"))
}

fn sentence(seed: u64) -> Formula {
    random_formula(&GeneratorParams::pure(seed))
}

fn bigger_sentence(seed: u64) -> Formula {
    random_formula(&GeneratorParams {
        seed,
        max_pred_quantifiers: 2,
        max_ind_quantifiers: 4,
        max_free_predicates: 0,
        max_depth: 6,
        identity: true,
        count_cap: 4,
    })
}

/// Swaps two predicate names throughout.
fn swap(f: &Formula, a: &str, b: &str) -> Formula {
    let tmp = "Tmp";
    f.substitute(a, tmp).unwrap().substitute(b, a).unwrap().substitute(tmp, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn negation_complements_the_spectrum(seed in any::<u64>()) {
        let f = sentence(seed);
        prop_assert_eq!(spectrum(&Formula::not(f.clone())), spectrum(&f).complement());
    }

    #[test]
    fn conjunction_and_disjunction_are_intersection_and_union(a in any::<u64>(), b in any::<u64>()) {
        let (f, g) = (sentence(a), sentence(b));
        let (sf, sg) = (spectrum(&f), spectrum(&g));
        let both = spectrum(&Formula::and(f.clone(), g.clone()));
        let either = spectrum(&Formula::or(g.clone(), f.clone()));
        prop_assert_eq!(&both, &spectrum(&Formula::and(g, f)));
        for n in 1..12 {
            prop_assert_eq!(both.contains(n), sf.contains(n) && sg.contains(n));
            prop_assert_eq!(either.contains(n), sf.contains(n) || sg.contains(n));
        }
    }

    #[test]
    fn renaming_symbols_changes_nothing(seed in any::<u64>()) {
        let open = random_formula(&GeneratorParams {
            seed,
            max_pred_quantifiers: 1,
            max_ind_quantifiers: 3,
            max_free_predicates: 2,
            max_depth: 5,
            identity: true,
            count_cap: 2,
        });
        let f = universal_closure(&open);
        let g = universal_closure(&swap(&open, "P", "Q"));
        let r = decide_formula(&f, &Limits::default());
        prop_assume!(!matches!(r, Err(Error::ResourceLimit(_))));
        prop_assert_eq!(r.unwrap().verdict, decide_formula(&g, &Limits::default()).unwrap().verdict);
    }

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        let text = sentence(seed).to_string();
        let a = decide(&text, &Limits::default()).unwrap().to_json(false);
        let b = decide(&text, &Limits::default()).unwrap().to_json(false);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn the_tail_is_right(seed in any::<u64>()) {
        // Past the largest bound the spectrum is constant; check it holds
        // well beyond the sizes used in the agreement criterion.
        let f = bigger_sentence(seed);
        let r = decide_formula(&f, &Limits::default());
        prop_assume!(!matches!(r, Err(Error::ResourceLimit(_))));
        let s = r.unwrap().spectrum.unwrap();
        let truth = spectrum_bruteforce(&f, 8, &Limits::default()).unwrap();
        for (i, t) in truth.iter().enumerate() {
            prop_assert_eq!(s.contains(i as u64 + 1), *t, "{} at size {}: {}", f, i + 1, s);
        }
    }

    #[test]
    fn spectra_are_normalized(items in prop::collection::vec((1u64..20, prop::option::of(0u64..6)), 0..6)) {
        let s = Spectrum::from_intervals(items.iter().map(|&(lo, len)| (lo, len.map(|d| lo + d))));
        let iv = s.intervals();
        for w in iv.windows(2) {
            let (hi, next) = (w[0].1.expect("only the last interval is unbounded"), w[1].0);
            prop_assert!(hi + 1 < next, "{}", s);
        }
        for n in 1..30 {
            let inside = items.iter().any(|&(lo, len)| n >= lo && len.is_none_or(|d| n <= lo + d));
            prop_assert_eq!(s.contains(n), inside);
            prop_assert_eq!(s.complement().contains(n), !inside);
        }
        prop_assert_eq!(s.complement().complement(), s);
    }
}

#[test]
fn verdicts_follow_the_spectrum() {
    let cases = [
        ("all X. all y. (X(y) | ~X(y))", "Valid"),
        ("ex X. ex x. (X(x) & ~X(x))", "Unsatisfiable"),
        ("ex x. ex y. x ~= y", "SizeContingent [2,∞)"),
        ("ex x. all y. y = x", "SizeContingent {1}"),
    ];
    for (text, want) in cases {
        assert_eq!(decide(text, &Limits::default()).unwrap().verdict.to_string(), want, "{text}");
    }
}

#[test]
fn free_predicates_leave_a_resultant() {
    let limits = Limits::default();
    for (text, want) in [
        ("ex X. (all x. (P(x) -> X(x)))", "all x. (P(x) | ~P(x))"),
        ("ex X. ((all x. (P(x) -> X(x))) & ex x. ~X(x))", "ex x. ~P(x)"),
    ] {
        let r = decide(text, &limits).unwrap();
        let Verdict::ResultantOnly(cf) = &r.verdict else { panic!("{text}: {}", r.verdict) };
        let want = mlogic::parse(want).unwrap();
        assert_eq!(mlogic::oracle::equiv_check_counting(&want, cf, 4, &limits).unwrap(), None, "{text}");
    }
}

#[test]
fn json_schema() {
    let r = decide("ex X. ((ex x. X(x)) & (ex x. ~X(x)))", &Limits::default()).unwrap();
    let v = r.to_json(false);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["class", "input", "stats", "trace", "verdict"]);
    assert_eq!(v["class"], "DomainB");
    assert_eq!(v["verdict"]["kind"], "contingent");
    assert_eq!(v["verdict"]["spectrum"], serde_json::json!([[2, null]]));
    assert_eq!(v["trace"][0]["rule"], "nnf");
    assert_eq!(v["stats"]["steps"], r.trace.len());
}

#[test]
fn free_names_are_out_of_scope() {
    assert!(matches!(decide("P(a)", &Limits::default()), Err(Error::OutOfScope(_))));
}

#[test]
fn impure_counting_formulas_have_no_spectrum() {
    let r = decide("ex x. P(x)", &Limits::default()).unwrap();
    assert!(matches!(r.verdict, Verdict::ResultantOnly(_)));
    assert!(matches!(spectrum_of(&r.result), Err(Error::Contract(_))));
}
