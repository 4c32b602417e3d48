use super::Formula;

// Binding strength, loosest first.
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

pub(super) fn render(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &mut out);
    out
}

fn is_quantifier(f: &Formula) -> bool {
    matches!(
        f,
        Formula::ForallInd(..)
            | Formula::ExistsInd(..)
            | Formula::ForallPred(..)
            | Formula::ExistsPred(..)
    )
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn wrapped(f: &Formula, out: &mut String) {
    out.push('(');
    write(f, out);
    out.push(')');
}

/// Writes an operand of a binary connective at binding strength `min`.
fn operand(f: &Formula, min: u8, out: &mut String) {
    if is_quantifier(f) || level(f) < min {
        wrapped(f, out);
    } else {
        write(f, out);
    }
}

fn binary(a: &Formula, b: &Formula, op: &str, lvl: u8, right_assoc: bool, out: &mut String) {
    let (la, lb) = if right_assoc { (lvl + 1, lvl) } else { (lvl, lvl + 1) };
    operand(a, la, out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    operand(b, lb, out);
}

fn quantifier(kw: &str, var: &str, body: &Formula, out: &mut String) {
    out.push_str(kw);
    out.push(' ');
    out.push_str(var);
    out.push_str(". ");
    if level(body) < UNARY {
        wrapped(body, out);
    } else {
        write(body, out);
    }
}

fn write(f: &Formula, out: &mut String) {
    match f {
        Formula::Const(true) => out.push_str("true"),
        Formula::Const(false) => out.push_str("false"),
        Formula::Pred { name, arg: None } => out.push_str(name),
        Formula::Pred { name, arg: Some(a) } => {
            out.push_str(name);
            out.push('(');
            out.push_str(a);
            out.push(')');
        }
        Formula::Equal(a, b) => {
            out.push_str(a);
            out.push_str(" = ");
            out.push_str(b);
        }
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Equal(a, b) => {
                out.push_str(a);
                out.push_str(" ~= ");
                out.push_str(b);
            }
            g => {
                out.push('~');
                let diseq = matches!(g, Formula::Not(e) if matches!(**e, Formula::Equal(..)));
                if diseq || is_quantifier(g) || level(g) < UNARY {
                    wrapped(g, out);
                } else {
                    write(g, out);
                }
            }
        },
        Formula::Iff(a, b) => binary(a, b, "<->", IFF, false, out),
        Formula::Implies(a, b) => binary(a, b, "->", IMP, true, out),
        Formula::Or(a, b) => binary(a, b, "|", OR, false, out),
        Formula::And(a, b) => binary(a, b, "&", AND, false, out),
        Formula::ForallInd(v, b) | Formula::ForallPred(v, b) => quantifier("all", v, b, out),
        Formula::ExistsInd(v, b) | Formula::ExistsPred(v, b) => quantifier("ex", v, b, out),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn renders_quantified_clause() {
        let f = Formula::forall(
            "x",
            Formula::or(Formula::not(Formula::app("A", "x")), Formula::app("B", "x")),
        );
        assert_eq!(f.to_string(), "all x. (~A(x) | B(x))");
    }

    #[test]
    fn iff_under_implies_is_parenthesized() {
        let f = Formula::implies(
            Formula::iff(Formula::letter("p"), Formula::letter("q")),
            Formula::letter("r"),
        );
        assert_eq!(f.to_string(), "(p <-> q) -> r");
    }

    #[test]
    fn associativity_is_preserved() {
        for s in [
            "p & q & r",
            "p & (q & r)",
            "(p -> q) -> r",
            "p -> q -> r",
            "p <-> q <-> r",
            "p <-> (q <-> r)",
            "~(all x. P(x)) & ~~p",
            "(ex x. P(x)) | x ~= y",
            "~(x ~= y)",
        ] {
            let f = parse(s).unwrap();
            assert_eq!(f.to_string(), s, "rendering of {s}");
            assert_eq!(parse(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn quantifier_in_left_operand_keeps_its_scope() {
        let f = Formula::and(
            Formula::forall("x", Formula::app("A", "x")),
            Formula::letter("q"),
        );
        assert_eq!(f.to_string(), "(all x. A(x)) & q");
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
}
