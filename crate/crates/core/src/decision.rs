//! The decision pipeline for sentences.

use std::fmt;
use std::time::Instant;

use serde_json::{json, Value};

use crate::elim::eliminate_traced;
use crate::error::{Error, Result};
use crate::formula::{classify, parse, Formula, FormulaClass};
use crate::limits::Limits;
use crate::normal::{CountingFormula, Step};

/// A set of positive integers given as sorted, disjoint, non-adjacent
/// intervals; only the last may be unbounded (`hi == None`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Spectrum {
    intervals: Vec<(u64, Option<u64>)>,
}

impl Spectrum {
    pub fn empty() -> Self {
        Spectrum { intervals: vec![] }
    }

    /// Every size from 1 on.
    pub fn all() -> Self {
        Spectrum {
            intervals: vec![(1, None)],
        }
    }

    /// Normalizes arbitrary intervals: sorted, merged, sizes below 1 dropped.
    pub fn from_intervals(items: impl IntoIterator<Item = (u64, Option<u64>)>) -> Self {
        let mut items: Vec<(u64, Option<u64>)> = items
            .into_iter()
            .map(|(lo, hi)| (lo.max(1), hi))
            .filter(|(lo, hi)| hi.is_none_or(|h| h >= *lo))
            .collect();
        items.sort();
        let mut out: Vec<(u64, Option<u64>)> = Vec::new();
        for (lo, hi) in items {
            if let Some(last) = out.last_mut() {
                match last.1 {
                    None => continue,
                    Some(h) if lo <= h + 1 => {
                        last.1 = match hi {
                            None => None,
                            Some(x) => Some(x.max(h)),
                        };
                        continue;
                    }
                    _ => {}
                }
            }
            out.push((lo, hi));
        }
        Spectrum { intervals: out }
    }

    pub fn intervals(&self) -> &[(u64, Option<u64>)] {
        &self.intervals
    }

    pub fn contains(&self, n: u64) -> bool {
        self.intervals
            .iter()
            .any(|&(lo, hi)| n >= lo && hi.is_none_or(|h| n <= h))
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_everything(&self) -> bool {
        self.intervals == [(1, None)]
    }

    /// The sizes from 1 on that are not in `self`.
    pub fn complement(&self) -> Spectrum {
        let mut out = Vec::new();
        let mut next = 1;
        for &(lo, hi) in &self.intervals {
            if lo > next {
                out.push((next, Some(lo - 1)));
            }
            match hi {
                Some(h) => next = h + 1,
                None => return Spectrum::from_intervals(out),
            }
        }
        out.push((next, None));
        Spectrum::from_intervals(out)
    }
}

impl fmt::Display for Spectrum {
    /// `{2,3} ∪ [5,∞)`; short finite runs are listed, long ones use `[lo,hi]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        let mut pieces = Vec::new();
        let mut run: Vec<u64> = Vec::new();
        let flush = |run: &mut Vec<u64>, pieces: &mut Vec<String>| {
            if !run.is_empty() {
                let items: Vec<String> = run.iter().map(u64::to_string).collect();
                pieces.push(format!("{{{}}}", items.join(",")));
                run.clear();
            }
        };
        for &(lo, hi) in &self.intervals {
            match hi {
                Some(h) if h - lo < 4 => run.extend(lo..=h),
                Some(h) => {
                    flush(&mut run, &mut pieces);
                    pieces.push(format!("[{lo},{h}]"));
                }
                None => {
                    flush(&mut run, &mut pieces);
                    pieces.push(format!("[{lo},∞)"));
                }
            }
        }
        flush(&mut run, &mut pieces);
        f.write_str(&pieces.join(" ∪ "))
    }
}

/// The sizes at which a pure size statement holds.
///
/// Every atom `#[] >= k` is constant from size `k` on, so the values at
/// `1..=N` with `N` one past the largest bound determine the whole set.
pub fn spectrum_of(cf: &CountingFormula) -> Result<Spectrum> {
    if !cf.is_pure() {
        return Err(Error::Contract(format!(
            "spectrum needs a pure size statement, got {cf}"
        )));
    }
    let n_max = cf.max_bound() as u64 + 1;
    let mut intervals = Vec::new();
    for n in 1..=n_max {
        if cf.eval_size(n) == Some(true) {
            intervals.push((n, if n == n_max { None } else { Some(n) }));
        }
    }
    Ok(Spectrum::from_intervals(intervals))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Unsatisfiable,
    SizeContingent(Spectrum),
    /// The sentence has free predicates; only its first-order resultant is
    /// reported.
    ResultantOnly(CountingFormula),
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Valid => "valid",
            Verdict::Unsatisfiable => "unsat",
            Verdict::SizeContingent(_) => "contingent",
            Verdict::ResultantOnly(_) => "resultant",
        }
    }

    pub fn spectrum(&self) -> Option<Spectrum> {
        match self {
            Verdict::Valid => Some(Spectrum::all()),
            Verdict::Unsatisfiable => Some(Spectrum::empty()),
            Verdict::SizeContingent(s) => Some(s.clone()),
            Verdict::ResultantOnly(_) => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("Valid"),
            Verdict::Unsatisfiable => f.write_str("Unsatisfiable"),
            Verdict::SizeContingent(s) => write!(f, "SizeContingent {s}"),
            Verdict::ResultantOnly(r) => write!(f, "Resultant {r}"),
        }
    }
}

pub fn verdict_from_spectrum(s: Spectrum) -> Verdict {
    if s.is_everything() {
        Verdict::Valid
    } else if s.is_empty() {
        Verdict::Unsatisfiable
    } else {
        Verdict::SizeContingent(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Stats {
    pub steps: usize,
    pub max_atoms: usize,
    pub millis: u128,
}

/// Everything [`decide`] found out about one sentence.
#[derive(Debug, Clone)]
pub struct DecisionReport {
    pub input: String,
    pub class: FormulaClass,
    pub nnf: Formula,
    pub prepared: Formula,
    pub result: CountingFormula,
    pub spectrum: Option<Spectrum>,
    pub verdict: Verdict,
    pub trace: Vec<Step>,
    pub stats: Stats,
}

impl DecisionReport {
    /// The report as JSON; `millis` is reported as 0 without `timing` so
    /// that repeated runs compare equal.
    pub fn to_json(&self, timing: bool) -> Value {
        let mut verdict = json!({ "kind": self.verdict.kind() });
        if let Some(s) = &self.spectrum {
            verdict["spectrum"] = s
                .intervals()
                .iter()
                .map(|&(lo, hi)| json!([lo, hi]))
                .collect();
        }
        if let Verdict::ResultantOnly(r) = &self.verdict {
            verdict["resultant"] = json!(r.to_string());
        }
        json!({
            "input": self.input,
            "class": self.class.to_string(),
            "verdict": verdict,
            "trace": self.trace.iter().map(|s| json!({"rule": s.rule, "result": s.result})).collect::<Vec<_>>(),
            "stats": {
                "steps": self.stats.steps,
                "max_atoms": self.stats.max_atoms,
                "millis": if timing { self.stats.millis } else { 0 },
            },
        })
    }
}

/// Parses and decides `text`.
pub fn decide(text: &str, limits: &Limits) -> Result<DecisionReport> {
    let f = parse(text)?;
    let mut report = decide_formula(&f, limits)?;
    report.input = text.to_string();
    Ok(report)
}

/// Decides a sentence without free individual names.
///
/// A pure sentence gets its exact spectrum; one with free predicates only
/// its first-order resultant.
pub fn decide_formula(f: &Formula, limits: &Limits) -> Result<DecisionReport> {
    let start = Instant::now();
    let sig = f.signature();
    if !sig.individuals.is_empty() {
        return Err(Error::OutOfScope(format!(
            "free individual names: {}",
            sig.individuals.iter().cloned().collect::<Vec<_>>().join(", ")
        )));
    }
    let class = classify(f);
    let e = eliminate_traced(f, limits)?;
    let (spectrum, verdict) = if sig.unary.is_empty() && sig.nullary.is_empty() {
        let s = spectrum_of(&e.result)?;
        (Some(s.clone()), verdict_from_spectrum(s))
    } else {
        (None, Verdict::ResultantOnly(e.result.clone()))
    };
    Ok(DecisionReport {
        input: f.to_string(),
        class,
        stats: Stats {
            steps: e.trace.len(),
            max_atoms: e.max_atoms,
            millis: start.elapsed().as_millis(),
        },
        nnf: e.nnf,
        prepared: e.prepared,
        result: e.result,
        spectrum,
        verdict,
        trace: e.trace,
    })
}

/// `all` over every free individual name, then over every free predicate.
pub fn universal_closure(f: &Formula) -> Formula {
    let sig = f.signature();
    let mut g = f.clone();
    for v in sig.individuals.iter().rev() {
        g = Formula::forall(v.clone(), g);
    }
    for p in sig.unary.iter().chain(&sig.nullary).rev() {
        g = Formula::forall_pred(p.clone(), g);
    }
    g
}
