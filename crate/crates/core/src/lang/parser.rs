//! Recursive-descent parser for the ASCII concrete syntax.
//!
//! ```text
//! term    := ident | #literal | empty | Atoms | pow(term) | Union(term)
//!          | { term, term } | { ident in term | formula }
//! formula := quantifier | iff
//! iff     := imp ( <-> imp )*          left associative
//! imp     := or ( -> imp )?            right associative
//! or      := and ( | and )*
//! and     := unary ( & unary )*
//! unary   := ~ unary | quantifier | atomic
//! quantifier := (forall | exists) ident . formula
//! atomic  := false | ( formula ) | term = term | term in term | term subset term
//! ```

use crate::hfa::{parse_element_prefix, Element, HfaError};

use super::{Formula, LangError, Term};

const KEYWORDS: &[&str] = &[
    "forall", "exists", "in", "false", "empty", "Atoms", "pow", "Union", "subset",
];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Elem(Element),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Dot,
    Bar,
    Amp,
    Tilde,
    Arrow,
    DArrow,
    Equals,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Elem(e) => format!("`#{e}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn syntax_error(src: &str, offset: usize, message: impl Into<String>) -> LangError {
    let (line, col) = line_col(src, offset);
    LangError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, LangError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'|' => Tok::Bar,
            b'&' => Tok::Amp,
            b'~' => Tok::Tilde,
            b'=' => Tok::Equals,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::DArrow
            }
            b'#' => {
                let (e, end) = parse_element_prefix(src, i + 1).map_err(|err| match err {
                    HfaError::Literal { offset, message } => {
                        let (line, col) = line_col(src, offset);
                        LangError::UnknownElement { line, col, message }
                    }
                    other => syntax_error(src, start, other.to_string()),
                })?;
                out.push((Tok::Elem(e), start));
                i = end;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i + 1;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_' || bytes[j] == b'\'')
                {
                    j += 1;
                }
                out.push((Tok::Ident(src[i..j].to_owned()), start));
                i = j;
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(syntax_error(src, i, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, LangError> {
        Ok(Parser {
            src,
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let idx = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[idx].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> LangError {
        syntax_error(self.src, self.offset(), message)
    }

    fn unexpected(&self, wanted: &str) -> LangError {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), LangError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), LangError> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn variable(&mut self) -> Result<String, LangError> {
        match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                Ok(name)
            }
            _ => Err(self.unexpected("a variable name")),
        }
    }

    fn finish(&self) -> Result<(), LangError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of input")),
        }
    }

    fn formula(&mut self) -> Result<Formula, LangError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, LangError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, LangError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, LangError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LangError> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        if self.is_keyword("forall") || self.is_keyword("exists") {
            let universal = self.is_keyword("forall");
            self.bump();
            let v = self.variable()?;
            self.expect(Tok::Dot, "`.` after the bound variable")?;
            let body = self.formula()?;
            return Ok(if universal {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            });
        }
        self.atomic()
    }

    fn atomic(&mut self) -> Result<Formula, LangError> {
        if self.is_keyword("false") {
            self.bump();
            return Ok(Formula::Bot);
        }
        if *self.peek() == Tok::LParen {
            self.bump();
            let phi = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(phi);
        }
        let lhs = self.term()?;
        if *self.peek() == Tok::Equals {
            self.bump();
            return Ok(Formula::eq(lhs, self.term()?));
        }
        if self.is_keyword("in") {
            self.bump();
            return Ok(Formula::mem(lhs, self.term()?));
        }
        if self.is_keyword("subset") {
            self.bump();
            return Ok(Formula::subset(lhs, self.term()?));
        }
        Err(self.unexpected("`=`, `in` or `subset`"))
    }

    fn term(&mut self) -> Result<Term, LangError> {
        match self.peek().clone() {
            Tok::Elem(e) => {
                self.bump();
                Ok(Term::Elem(e))
            }
            Tok::LBrace => {
                self.bump();
                let is_comprehension = matches!(self.peek(), Tok::Ident(v) if !KEYWORDS.contains(&v.as_str()))
                    && matches!(self.peek_at(1), Tok::Ident(k) if k == "in");
                if is_comprehension {
                    let binder = self.variable()?;
                    self.expect_keyword("in")?;
                    let domain = self.term()?;
                    self.expect(Tok::Bar, "`|` in comprehension")?;
                    let body = self.formula()?;
                    self.expect(Tok::RBrace, "`}` closing the comprehension")?;
                    Ok(Term::comprehension(binder, domain, body))
                } else {
                    let s = self.term()?;
                    self.expect(Tok::Comma, "`,` in pair set")?;
                    let t = self.term()?;
                    self.expect(Tok::RBrace, "`}` closing the pair set")?;
                    Ok(Term::pair(s, t))
                }
            }
            Tok::Ident(name) => match name.as_str() {
                "empty" => {
                    self.bump();
                    Ok(Term::Empty)
                }
                "Atoms" => {
                    self.bump();
                    Ok(Term::Atoms)
                }
                "pow" | "Union" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let s = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(if name == "pow" {
                        Term::powerset(s)
                    } else {
                        Term::union(s)
                    })
                }
                _ => Ok(Term::Var(self.variable()?)),
            },
            _ => Err(self.unexpected("a term")),
        }
    }
}

pub fn parse_formula(src: &str) -> Result<Formula, LangError> {
    let mut p = Parser::new(src)?;
    let phi = p.formula()?;
    p.finish()?;
    Ok(phi)
}

pub fn parse_term(src: &str) -> Result<Term, LangError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn parses_forall() {
        assert_eq!(
            parse_formula("forall x. x = x").unwrap(),
            Formula::forall("x", Formula::eq(v("x"), v("x")))
        );
    }

    #[test]
    fn negation_desugars_to_implication_of_false() {
        let phi = parse_formula("a in Atoms & ~(a = empty)").unwrap();
        assert_eq!(
            phi,
            Formula::and(
                Formula::mem(v("a"), Term::Atoms),
                Formula::implies(Formula::eq(v("a"), Term::Empty), Formula::Bot)
            )
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let p = |s| parse_formula(s).unwrap();
        assert_eq!(p("x = y & y = z | false"), Formula::or(p("x = y & y = z"), Formula::Bot));
        assert_eq!(p("false -> false -> x = x"), Formula::implies(Formula::Bot, p("false -> x = x")));
        assert_eq!(p("x = x & y = y & z = z"), Formula::and(p("x = x & y = y"), p("z = z")));
        assert_eq!(
            p("forall x. x = x -> false"),
            Formula::forall("x", p("x = x -> false"))
        );
        assert_eq!(
            p("x = x <-> y = y -> false"),
            Formula::iff(p("x = x"), p("y = y -> false"))
        );
        assert_eq!(p("~x = x & y = y"), Formula::and(p("~x = x"), p("y = y")));
        assert_eq!(
            p("x = x & forall y. y = y | y = x"),
            Formula::and(p("x = x"), p("forall y. y = y | y = x"))
        );
    }

    #[test]
    fn sugar_expansions() {
        let p = |s| parse_formula(s).unwrap();
        assert_eq!(p("exists x. x in y"), Formula::exists("x", p("x in y")));
        assert_eq!(
            p("x subset y"),
            Formula::forall("b", Formula::implies(p("b in x"), p("b in y")))
        );
        // the bound name avoids the free variables
        assert_eq!(
            p("b subset y"),
            Formula::forall("b0", Formula::implies(p("b0 in b"), p("b0 in y")))
        );
        assert_eq!(p("x = y <-> y = x"), Formula::iff(p("x = y"), p("y = x")));
    }

    #[test]
    fn parses_terms() {
        assert_eq!(parse_term("{x, empty}").unwrap(), Term::pair(v("x"), Term::Empty));
        assert_eq!(
            parse_term("{ x in Atoms | false }").unwrap(),
            Term::comprehension("x", Term::Atoms, Formula::Bot)
        );
        assert_eq!(
            parse_term("pow(Union(#{a0, {}}))").unwrap(),
            Term::powerset(Term::union(Term::Elem("{a0, {}}".parse().unwrap())))
        );
        assert_eq!(
            parse_term("{x in y | x in z | x = y}").unwrap(),
            Term::comprehension("x", v("y"), parse_formula("x in z | x = y").unwrap())
        );
        assert_eq!(parse_term("#a3").unwrap(), Term::Elem("a3".parse().unwrap()));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_formula("forall x.\n  x = ") {
            Err(LangError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 7)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_formula("x in #b2") {
            Err(LangError::UnknownElement { line, col, .. }) => assert_eq!((line, col), (1, 7)),
            other => panic!("unexpected {other:?}"),
        }
        for bad in ["", "x", "x = ", "forall in. x = x", "(x = x", "x = x)", "{x, y", "x $ y", "pow x = y"] {
            assert!(parse_formula(bad).is_err(), "accepted `{bad}`");
        }
    }
}
