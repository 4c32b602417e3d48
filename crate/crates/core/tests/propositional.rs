//! The two propositional methods against each other and against direct
//! evaluation, plus a pinned generator stream.

use mlogic::oracle::{random_formula, random_propositional, GeneratorParams};
use mlogic::prop::{
    clause_form_decide, eval, letters, to_clause_form, truth_table_decide, Assignment, ClauseVerdict,
    TableVerdict,
};
use mlogic::{parse, Formula, Limits};
use proptest::prelude::*;

fn rows(names: &[String]) -> impl Iterator<Item = Assignment> + '_ {
    (0u32..1 << names.len())
        .map(move |r| names.iter().enumerate().map(|(i, n)| (n.clone(), r >> i & 1 == 1)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn methods_agree(seed in any::<u64>(), k in 1usize..7, depth in 1usize..7) {
        let f = random_propositional(seed, k, depth);
        let limits = Limits::default();
        let table = truth_table_decide(&f, &limits).unwrap();
        let cnf = to_clause_form(&f, &limits).unwrap();
        prop_assert_eq!(table.is_valid(), clause_form_decide(&cnf) == ClauseVerdict::Valid, "{}", f);
        let names = letters(&f);
        let truth: Vec<bool> = rows(&names).map(|a| eval(&f, &a).unwrap()).collect();
        match table {
            TableVerdict::Valid => prop_assert!(truth.iter().all(|t| *t)),
            TableVerdict::Unsatisfiable => prop_assert!(truth.iter().all(|t| !*t)),
            TableVerdict::Contingent(a) => {
                prop_assert!(!eval(&f, &a).unwrap());
                prop_assert!(truth.iter().any(|t| *t));
            }
        }
    }

    #[test]
    fn clause_form_is_equivalent_and_stable(seed in any::<u64>()) {
        let f = random_propositional(seed, 4, 5);
        let limits = Limits::default();
        let cnf = to_clause_form(&f, &limits).unwrap();
        let g = cnf.to_formula();
        let names = letters(&f);
        for a in rows(&names) {
            // Letters dropped by simplification default to false.
            let mut full = a.clone();
            for n in letters(&g) {
                full.entry(n).or_insert(false);
            }
            prop_assert_eq!(eval(&f, &a).unwrap(), eval(&g, &full).unwrap(), "{} vs {}", f, cnf);
        }
        prop_assert_eq!(to_clause_form(&g, &limits).unwrap(), cnf.clone());
        let lean = cnf.remove_subsumed();
        prop_assert_eq!(lean.remove_subsumed(), lean.clone());
        prop_assert_eq!(clause_form_decide(&lean), clause_form_decide(&cnf));
    }
}

#[test]
fn letter_cap() {
    let f = parse("p | q | r").unwrap();
    let limits = Limits { max_letters: 2, ..Limits::default() };
    assert!(truth_table_decide(&f, &limits).is_err());
    assert_eq!(clause_form_decide(&to_clause_form(&f, &limits).unwrap()), ClauseVerdict::NotValid);
}

fn golden_stream() -> String {
    let p = GeneratorParams {
        seed: 1,
        max_pred_quantifiers: 1,
        max_ind_quantifiers: 1,
        max_free_predicates: 0,
        max_depth: 2,
        identity: true,
        count_cap: 2,
    };
    (0..20).map(|i| format!("{}\n", random_formula(&p.with_seed(p.seed + i)))).collect()
}

#[test]
fn generator_is_pinned() {
    let want = include_str!("golden/generator-seed1.txt");
    assert_eq!(golden_stream(), want);
    for line in want.lines() {
        let f: Formula = parse(line).unwrap();
        assert!(f.signature().unary.is_empty(), "{line}");
    }
}
