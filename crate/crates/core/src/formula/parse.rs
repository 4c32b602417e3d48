use std::collections::BTreeMap;

use super::{is_predicate_name, Formula};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    All,
    Ex,
    True,
    False,
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    Eq,
    Neq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::All => "`all`".into(),
            Tok::Ex => "`ex`".into(),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`~=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, expected: &[&str], found: String) -> Error {
    Error::Syntax {
        line,
        column,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found,
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
            *i += width;
            *col += width;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '&' => push(Tok::Amp, 1, &mut i, &mut col),
            '|' => push(Tok::Bar, 1, &mut i, &mut col),
            '=' => push(Tok::Eq, 1, &mut i, &mut col),
            '~' if chars.get(i + 1) == Some(&'=') => push(Tok::Neq, 2, &mut i, &mut col),
            '~' => push(Tok::Tilde, 1, &mut i, &mut col),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2, &mut i, &mut col),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::DoubleArrow, 3, &mut i, &mut col)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "all" => Tok::All,
                    "ex" => Tok::Ex,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word),
                };
                push(tok, j - i, &mut i, &mut col);
            }
            other => {
                return Err(syntax(
                    line,
                    col,
                    &["a formula"],
                    format!("character `{other}`"),
                ))
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        let t = &self.toks[self.pos];
        syntax(t.line, t.column, expected, t.tok.describe())
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[what]))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::All | Tok::Ex => {
                let universal = *self.peek() == Tok::All;
                self.bump();
                let var = match self.peek().clone() {
                    Tok::Ident(v) => {
                        self.bump();
                        v
                    }
                    _ => return Err(self.error(&["a variable name"])),
                };
                self.expect(Tok::Dot, "`.`")?;
                let body = self.formula()?;
                Ok(match (universal, is_predicate_name(&var)) {
                    (true, false) => Formula::forall(var, body),
                    (false, false) => Formula::exists(var, body),
                    (true, true) => Formula::forall_pred(var, body),
                    (false, true) => Formula::exists_pred(var, body),
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::True => {
                self.bump();
                Ok(Formula::Const(true))
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Const(false))
            }
            Tok::Ident(name) => self.atom(name),
            _ => Err(self.error(&[
                "`~`", "`all`", "`ex`", "`(`", "an atom", "`true`", "`false`",
            ])),
        }
    }

    fn atom(&mut self, name: String) -> Result<Formula> {
        if is_predicate_name(&name) {
            self.bump();
            if *self.peek() != Tok::LParen {
                return Ok(Formula::letter(name));
            }
            self.bump();
            let arg = self.individual()?;
            if *self.peek() == Tok::Comma {
                return Err(Error::OutOfScope(format!(
                    "`{name}` is applied to several arguments; only monadic predicates are supported"
                )));
            }
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Formula::app(name, arg));
        }
        match self.peek2() {
            Tok::Eq | Tok::Neq => {
                self.bump();
                let negated = self.bump().tok == Tok::Neq;
                let rhs = self.individual()?;
                let eq = Formula::eq(name, rhs);
                Ok(if negated { Formula::not(eq) } else { eq })
            }
            Tok::LParen => {
                self.bump();
                Err(self.error(&["a predicate name (uppercase) before `(`"]))
            }
            _ => {
                self.bump();
                Ok(Formula::letter(name))
            }
        }
    }

    fn individual(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(v) if !is_predicate_name(&v) => {
                self.bump();
                Ok(v)
            }
            _ => Err(self.error(&["an individual name"])),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Use {
    Individual,
    Letter,
    Unary,
}

/// Rejects shadowed binders and names used in two roles.
fn check(f: &Formula) -> Result<()> {
    fn note(uses: &mut BTreeMap<String, Use>, name: &str, u: Use) -> Result<()> {
        match uses.get(name) {
            None => {
                uses.insert(name.to_string(), u);
                Ok(())
            }
            Some(&prev) if prev == u => Ok(()),
            Some(&prev) => {
                if prev == Use::Individual || u == Use::Individual {
                    Err(Error::PredicateAsIndividual { name: name.into() })
                } else {
                    Err(Error::Arity { name: name.into() })
                }
            }
        }
    }

    fn go(f: &Formula, bound: &mut Vec<String>, uses: &mut BTreeMap<String, Use>) -> Result<()> {
        match f {
            Formula::Const(_) => Ok(()),
            Formula::Pred { name, arg: None } => note(uses, name, Use::Letter),
            Formula::Pred { name, arg: Some(a) } => {
                note(uses, name, Use::Unary)?;
                note(uses, a, Use::Individual)
            }
            Formula::Equal(a, b) => {
                note(uses, a, Use::Individual)?;
                note(uses, b, Use::Individual)
            }
            Formula::ForallInd(v, body)
            | Formula::ExistsInd(v, body)
            | Formula::ForallPred(v, body)
            | Formula::ExistsPred(v, body) => {
                if bound.contains(v) {
                    return Err(Error::Shadowing { name: v.clone() });
                }
                if !is_predicate_name(v) {
                    note(uses, v, Use::Individual)?;
                }
                bound.push(v.clone());
                let r = go(body, bound, uses);
                bound.pop();
                r
            }
            _ => f.children().into_iter().try_for_each(|c| go(c, bound, uses)),
        }
    }

    go(f, &mut Vec::new(), &mut BTreeMap::new())
}

/// Parses one formula from `text`.
///
/// Quantifier scope extends as far right as possible; `->` associates to
/// the right and the other binary connectives to the left.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["a binary connective", "end of input"]));
    }
    check(&f)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_excluded_middle_over_all_predicates() {
        let f = parse("all X. all y. (X(y) | ~X(y))").unwrap();
        let expected = Formula::forall_pred(
            "X",
            Formula::forall(
                "y",
                Formula::or(Formula::app("X", "y"), Formula::not(Formula::app("X", "y"))),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn single_letter() {
        assert_eq!(parse("p").unwrap(), Formula::letter("p"));
    }

    #[test]
    fn disequality_is_sugar() {
        let f = parse("ex x. ex y. x ~= y").unwrap();
        let expected = Formula::exists(
            "x",
            Formula::exists("y", Formula::not(Formula::eq("x", "y"))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("p & q | r -> s <-> t").unwrap(),
            Formula::iff(
                Formula::implies(
                    Formula::or(
                        Formula::and(Formula::letter("p"), Formula::letter("q")),
                        Formula::letter("r")
                    ),
                    Formula::letter("s")
                ),
                Formula::letter("t")
            )
        );
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            Formula::implies(
                Formula::letter("p"),
                Formula::implies(Formula::letter("q"), Formula::letter("r"))
            )
        );
    }

    #[test]
    fn quantifier_scope_extends_rightward() {
        assert_eq!(
            parse("p & all x. A(x) | q").unwrap(),
            Formula::and(
                Formula::letter("p"),
                Formula::forall("x", Formula::or(Formula::app("A", "x"), Formula::letter("q")))
            )
        );
    }

    #[test]
    fn comments_and_newlines() {
        let f = parse("# a comment\nall x. # trailing\n  P(x)").unwrap();
        assert_eq!(f, Formula::forall("x", Formula::app("P", "x")));
    }

    #[test]
    fn syntax_error_reports_position() {
        match parse("all x.\n  (P(x) | )") {
            Err(Error::Syntax {
                line,
                column,
                expected,
                found,
            }) => {
                assert_eq!((line, column), (2, 11));
                assert!(expected.contains(&"an atom".to_string()));
                assert_eq!(found, "`)`");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("p q"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("P(X)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("p $ q"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn shadowing_is_rejected() {
        assert_eq!(
            parse("all x. ex x. P(x)"),
            Err(Error::Shadowing { name: "x".into() })
        );
        assert_eq!(
            parse("ex X. (X(a) & all X. X(b))"),
            Err(Error::Shadowing { name: "X".into() })
        );
        // Sibling binders of the same name are fine.
        assert!(parse("(all x. P(x)) & (ex x. Q(x))").is_ok());
    }

    #[test]
    fn role_confusion_is_rejected() {
        assert_eq!(
            parse("p & P(p)"),
            Err(Error::PredicateAsIndividual { name: "p".into() })
        );
        assert_eq!(
            parse("ex p. p"),
            Err(Error::PredicateAsIndividual { name: "p".into() })
        );
        assert_eq!(parse("P & P(x)"), Err(Error::Arity { name: "P".into() }));
    }

    #[test]
    fn binary_predicates_are_out_of_scope() {
        assert!(matches!(parse("R(x, y)"), Err(Error::OutOfScope(_))));
    }
}
