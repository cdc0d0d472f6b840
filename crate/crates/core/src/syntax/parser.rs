//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := quant | or
//! quant   := ("forall" | "exists") VAR ["/" "{" VAR* "}"] "." formula
//!          | "branch" "{" row (";" row)* "}" "." formula
//! or      := and ("or" and)*
//! and     := unary ("and" unary)*
//! unary   := "not" atom | "(" formula ")" | quant | atom
//! atom    := term "=" term | NAME "(" term ("," term)* ")"
//!          | "dep" "(" VAR* ";" VAR* ")" | "ind" "(" VAR* ";" VAR* ";" VAR* ")"
//! row     := "forall" VAR "exists" VAR
//! ```
//!
//! Identifiers starting with a lowercase letter or `_` are variables; an
//! uppercase initial marks a constant symbol. A quantifier used as an
//! operand of `and`/`or` extends to the end of the enclosing scope.

use std::fmt;

use thiserror::Error;

use super::ast::{Atom, Formula, Term};
use crate::team::{Var, VarTuple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Dot,
    Slash,
    Equals,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const KEYWORDS: &[&str] = &["forall", "exists", "and", "or", "not", "dep", "ind", "branch"];

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&d) = chars.peek() {
                if d == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    s.push(d);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: l,
                col: k,
            });
            continue;
        } else {
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '.' => Tok::Dot,
                '/' => Tok::Slash,
                '=' => Tok::Equals,
                other => {
                    return Err(ParseError {
                        line: l,
                        col: k,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        };
        chars.next();
        col += 1;
        out.push(Spanned {
            tok,
            line: l,
            col: k,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

/// Parses a single formula; trailing input is an error.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    p.expect(Tok::Eof)?;
    Ok(f)
}

/// Parses a single dependence or independence atom, e.g. `dep(x y ; z)`.
pub fn parse_atom(text: &str) -> Result<Atom, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let a = p.atom()?;
    p.expect(Tok::Eof)?;
    Ok(a)
}

fn is_var_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase() || c == '_') && !KEYWORDS.contains(&s)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: String) -> Result<T, ParseError> {
        let s = &self.toks[self.pos];
        Err(ParseError {
            line: s.line,
            col: s.col,
            message,
        })
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {want}, found {}", self.peek()))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.at_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{kw}`, found {}", self.peek()))
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if is_var_name(&s) => {
                self.bump();
                Ok(Var::new(&s))
            }
            other => self.error(format!("expected a variable, found {other}")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if self.at_keyword("forall") || self.at_keyword("exists") || self.at_keyword("branch") {
            self.quant()
        } else {
            self.or_expr()
        }
    }

    fn quant(&mut self) -> Result<Formula, ParseError> {
        if self.at_keyword("branch") {
            self.bump();
            self.expect(Tok::LBrace)?;
            let mut rows = Vec::new();
            loop {
                self.keyword("forall")?;
                let u = self.var()?;
                self.keyword("exists")?;
                let e = self.var()?;
                if u == e || rows.iter().any(|(a, b)| [a, b].contains(&&u) || [a, b].contains(&&e)) {
                    return self.error("branching rows must bind distinct variables".into());
                }
                rows.push((u, e));
                if *self.peek() == Tok::Semi {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(Tok::RBrace)?;
            self.expect(Tok::Dot)?;
            let matrix = self.formula()?;
            return Ok(Formula::Henkin {
                rows,
                matrix: Box::new(matrix),
            });
        }
        let universal = self.at_keyword("forall");
        self.bump();
        let v = self.var()?;
        let mut slashed = None;
        if *self.peek() == Tok::Slash {
            if universal {
                return self.error("a slash is only allowed on `exists`".into());
            }
            self.bump();
            self.expect(Tok::LBrace)?;
            let mut vs = Vec::new();
            while *self.peek() != Tok::RBrace {
                vs.push(self.var()?);
            }
            self.bump();
            slashed = Some(VarTuple::new(vs));
        }
        self.expect(Tok::Dot)?;
        let body = Box::new(self.formula()?);
        Ok(match (universal, slashed) {
            (true, _) => Formula::Forall(v, body),
            (false, None) => Formula::Exists(v, body),
            (false, Some(slashed)) => Formula::SlashedExists {
                var: v,
                slashed,
                body,
            },
        })
    }

    fn or_expr(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and_expr()?;
        while self.at_keyword("or") {
            self.bump();
            let rhs = self.and_expr()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.at_keyword("and") {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.at_keyword("not") {
            self.bump();
            if *self.peek() == Tok::LParen
                || self.at_keyword("not")
                || self.at_keyword("forall")
                || self.at_keyword("exists")
                || self.at_keyword("branch")
            {
                return self.error("negation applies only to atomic formulas".into());
            }
            return Ok(Formula::Not(self.atom()?));
        }
        if *self.peek() == Tok::LParen {
            self.bump();
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        if self.at_keyword("forall") || self.at_keyword("exists") || self.at_keyword("branch") {
            return self.quant();
        }
        Ok(Formula::Atom(self.atom()?))
    }

    fn var_list(&mut self) -> Result<VarTuple, ParseError> {
        let mut vs = Vec::new();
        while matches!(self.peek(), Tok::Ident(_)) {
            vs.push(self.var()?);
        }
        Ok(VarTuple::new(vs))
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let name = match self.peek().clone() {
            Tok::Ident(s) => s,
            other => return self.error(format!("expected an atomic formula, found {other}")),
        };
        if (name == "dep" || name == "ind") && *self.peek_at(1) == Tok::LParen {
            self.bump();
            self.bump();
            let first = self.var_list()?;
            self.expect(Tok::Semi)?;
            let second = self.var_list()?;
            if name == "dep" {
                self.expect(Tok::RParen)?;
                return Ok(Atom::Dep {
                    determiner: first,
                    determined: second,
                });
            }
            self.expect(Tok::Semi)?;
            let third = self.var_list()?;
            self.expect(Tok::RParen)?;
            return Ok(Atom::Ind {
                left: first,
                condition: second,
                right: third,
            });
        }
        if KEYWORDS.contains(&name.as_str()) {
            return self.error(format!("unexpected keyword `{name}`"));
        }
        if *self.peek_at(1) == Tok::LParen {
            self.bump();
            self.bump();
            let mut args = vec![self.term()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
            self.expect(Tok::RParen)?;
            return Ok(Atom::Rel(name, args));
        }
        let lhs = self.term()?;
        self.expect(Tok::Equals)?;
        let rhs = self.term()?;
        Ok(Atom::Eq(lhs, rhs))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if is_var_name(&s) => {
                self.bump();
                Ok(Term::Var(Var::new(&s)))
            }
            Tok::Ident(s) if s.starts_with(|c: char| c.is_ascii_uppercase()) => {
                self.bump();
                Ok(Term::Const(s))
            }
            other => self.error(format!("expected a term, found {other}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_valid_sentence() {
        let f = parse("forall x. forall y. exists z. (ind(z ;; x) and z = y)").unwrap();
        let want = Formula::forall(
            "x",
            Formula::forall(
                "y",
                Formula::exists(
                    "z",
                    Formula::and(Formula::ind(&["z"], &[], &["x"]), Formula::eq("z", "y")),
                ),
            ),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn parses_dep_atom() {
        assert_eq!(parse("dep(x y ; z)").unwrap(), Formula::dep(&["x", "y"], &["z"]));
        assert_eq!(parse("dep(; z)").unwrap(), Formula::dep(&[], &["z"]));
    }

    #[test]
    fn parses_slash() {
        let f = parse("exists z/{x}. z = x").unwrap();
        assert_eq!(
            f,
            Formula::SlashedExists {
                var: Var::new("z"),
                slashed: VarTuple::from_names(&["x"]),
                body: Box::new(Formula::eq("z", "x")),
            }
        );
    }

    #[test]
    fn parses_branch() {
        let f = parse("branch{forall x exists y; forall u exists v}. R(x,y,u,v)").unwrap();
        match f {
            Formula::Henkin { rows, matrix } => {
                assert_eq!(rows.len(), 2);
                assert_eq!(*matrix, Formula::rel("R", &["x", "y", "u", "v"]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence() {
        let f = parse("a = b or not c = d and R(e)").unwrap();
        let want = Formula::or(
            Formula::eq("a", "b"),
            Formula::and(
                Formula::Not(Atom::Eq(Term::var("c"), Term::var("d"))),
                Formula::rel("R", &["e"]),
            ),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn quantifier_scope_extends_right() {
        let f = parse("exists x. x = y or x = z").unwrap();
        assert!(matches!(f, Formula::Exists(_, ref b) if matches!(**b, Formula::Or(..))));
        let g = parse("x = x and forall y. y = x or y = y").unwrap();
        assert!(matches!(g, Formula::And(_, ref b) if matches!(**b, Formula::Forall(..))));
    }

    #[test]
    fn constants_are_uppercase() {
        let f = parse("x = C0").unwrap();
        assert_eq!(
            f,
            Formula::Atom(Atom::Eq(Term::var("x"), Term::Const("C0".into())))
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("forall x.\n  x = ").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse("not (x = y)").unwrap_err();
        assert!(e.message.contains("negation"));
        assert_eq!((e.line, e.col), (1, 5));
        assert!(parse("forall x/{y}. x = y").is_err());
        assert!(parse("x = y )").is_err());
        assert!(parse("dep(X ; y)").is_err());
        assert!(parse("x ~ y").is_err());
        assert!(parse("not not x = y").is_err());
    }

    #[test]
    fn parse_single_atoms() {
        assert!(matches!(parse_atom("ind(u ; ; v)").unwrap(), Atom::Ind { .. }));
        assert!(parse_atom("x = y and y = x").is_err());
    }
}
