use std::fmt;

use serde::Serialize;

use super::Formula;

/// The formula classes of the monadic hierarchy.
///
/// `Propositional ⊂ DomainA ⊂ DomainAStar ⊂ DomainBStar` and
/// `DomainA ⊂ DomainB ⊂ DomainBStar`; the starred classes admit identity and
/// the `B` classes admit predicate quantifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum FormulaClass {
    Propositional,
    DomainA,
    DomainAStar,
    DomainB,
    DomainBStar,
    /// Reserved for syntax beyond the monadic fragment; never produced by
    /// [`classify`] since the grammar cannot express such formulas.
    OutOfScope(String),
}

impl FormulaClass {
    fn features(&self) -> Option<(bool, bool, bool)> {
        // (first-order material, identity, predicate quantifiers)
        match self {
            FormulaClass::Propositional => Some((false, false, false)),
            FormulaClass::DomainA => Some((true, false, false)),
            FormulaClass::DomainAStar => Some((true, true, false)),
            FormulaClass::DomainB => Some((true, false, true)),
            FormulaClass::DomainBStar => Some((true, true, true)),
            FormulaClass::OutOfScope(_) => None,
        }
    }

    /// Lattice order: every formula of `other` also belongs to `self`.
    pub fn includes(&self, other: &FormulaClass) -> bool {
        match (self.features(), other.features()) {
            (_, None) => matches!(self, FormulaClass::OutOfScope(_)),
            (None, Some(_)) => true,
            (Some((a1, b1, c1)), Some((a2, b2, c2))) => (a1 || !a2) && (b1 || !b2) && (c1 || !c2),
        }
    }

    pub fn is_identity_free(&self) -> bool {
        matches!(
            self,
            FormulaClass::Propositional | FormulaClass::DomainA | FormulaClass::DomainB
        )
    }

    pub fn name(&self) -> &str {
        match self {
            FormulaClass::Propositional => "Propositional",
            FormulaClass::DomainA => "DomainA",
            FormulaClass::DomainAStar => "DomainAStar",
            FormulaClass::DomainB => "DomainB",
            FormulaClass::DomainBStar => "DomainBStar",
            FormulaClass::OutOfScope(_) => "OutOfScope",
        }
    }
}

impl fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaClass::OutOfScope(reason) => write!(f, "OutOfScope({reason})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Smallest class containing `f`.
pub fn classify(f: &Formula) -> FormulaClass {
    let (mut first_order, mut identity, mut second_order) = (false, false, false);
    f.walk(&mut |g| match g {
        Formula::Pred { arg: Some(_), .. } | Formula::ForallInd(..) | Formula::ExistsInd(..) => {
            first_order = true
        }
        Formula::Equal(..) => {
            first_order = true;
            identity = true;
        }
        Formula::ForallPred(..) | Formula::ExistsPred(..) => {
            first_order = true;
            second_order = true;
        }
        _ => {}
    });
    match (first_order, identity, second_order) {
        (false, _, _) => FormulaClass::Propositional,
        (true, false, false) => FormulaClass::DomainA,
        (true, true, false) => FormulaClass::DomainAStar,
        (true, false, true) => FormulaClass::DomainB,
        (true, true, true) => FormulaClass::DomainBStar,
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn class_of(s: &str) -> FormulaClass {
        classify(&parse(s).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(class_of("p -> ((p -> q) -> q)"), FormulaClass::Propositional);
        assert_eq!(class_of("all x. (~A(x) | B(x))"), FormulaClass::DomainA);
        assert_eq!(
            class_of("ex X. (ex y. X(y)) & (ex y. (~X(y) & y ~= y))"),
            FormulaClass::DomainBStar
        );
        assert_eq!(class_of("ex x. ex y. x ~= y"), FormulaClass::DomainAStar);
        assert_eq!(class_of("all X. all y. (X(y) | ~X(y))"), FormulaClass::DomainB);
        assert_eq!(class_of("A(a)"), FormulaClass::DomainA);
    }

    #[test]
    fn lattice() {
        use FormulaClass::*;
        assert!(DomainBStar.includes(&DomainA));
        assert!(DomainAStar.includes(&Propositional));
        assert!(!DomainAStar.includes(&DomainB));
        assert!(!DomainB.includes(&DomainAStar));
        assert!(DomainB.includes(&DomainB));
        assert!(OutOfScope("x".into()).includes(&DomainBStar));
    }
}
