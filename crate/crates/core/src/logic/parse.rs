//! Recursive-descent parser.
//!
//! ```text
//! formula := quant | iff
//! quant   := ("exists" | "forall") var "." formula
//! iff     := imp { "<->" imp }
//! imp     := or { "->" or }            (right associative)
//! or      := and { "|" and }
//! and     := unary { "&" unary }
//! unary   := "!" unary | quant | atom
//! atom    := "true" | "false" | ident "(" var {"," var} ")" | var "=" var
//!          | "(" formula ")"
//! ```

use super::{Formula, Var};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Var(Var),
    True,
    False,
    Exists,
    Forall,
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Iff,
    Equals,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_column) = (line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let (tok, width) = if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = match word.as_str() {
                "true" => Tok::True,
                "false" => Tok::False,
                "exists" => Tok::Exists,
                "forall" => Tok::Forall,
                _ if crate::structure::is_variable_name(&word) => {
                    let index: Var = word[1..].parse().map_err(|_| {
                        syntax(line, column, format!("variable index too large in `{word}`"))
                    })?;
                    if index == 0 {
                        return Err(syntax(line, column, "variable indices start at x1"));
                    }
                    Tok::Var(index)
                }
                _ => Tok::Ident(word),
            };
            (tok, j - i)
        } else {
            let next = chars.get(i + 1).copied();
            match (c, next) {
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('<', Some('-')) if chars.get(i + 2) == Some(&'>') => (Tok::Iff, 3),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                (',', _) => (Tok::Comma, 1),
                ('.', _) => (Tok::Dot, 1),
                ('!', _) => (Tok::Bang, 1),
                ('&', _) => (Tok::Amp, 1),
                ('|', _) => (Tok::Pipe, 1),
                ('=', _) => (Tok::Equals, 1),
                _ => return Err(syntax(line, column, format!("unknown token `{c}`"))),
            }
        };
        out.push(Token {
            tok,
            line: start_line,
            column: start_column,
        });
        i += width;
        column += width;
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let t = &self.tokens[self.pos];
        syntax(t.line, t.column, message)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn var(&mut self) -> Result<Var> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.next();
                Ok(v)
            }
            _ => Err(self.error("expected a variable `x<digits>`")),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Exists | Tok::Forall => self.quant(),
            _ => self.iff(),
        }
    }

    fn quant(&mut self) -> Result<Formula> {
        let exists = self.next().tok == Tok::Exists;
        let v = self.var()?;
        self.expect(Tok::Dot, "`.` after the quantified variable")?;
        let body = self.formula()?;
        Ok(if exists {
            Formula::exists(v, body)
        } else {
            Formula::forall(v, body)
        })
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut left = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.next();
            let right = self.imp()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula> {
        let left = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let right = self.imp()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut parts = vec![self.and()?];
        while *self.peek() == Tok::Pipe {
            self.next();
            parts.push(self.and()?);
        }
        Ok(Formula::or(parts))
    }

    fn and(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::Amp {
            self.next();
            parts.push(self.unary()?);
        }
        Ok(Formula::and(parts))
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Bang => {
                self.next();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => self.quant(),
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::True => {
                self.next();
                Ok(Formula::True)
            }
            Tok::False => {
                self.next();
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Var(a) => {
                self.next();
                self.expect(Tok::Equals, "`=` after a variable")?;
                let b = self.var()?;
                Ok(Formula::Eq(a, b))
            }
            Tok::Ident(name) => {
                self.next();
                self.expect(Tok::LParen, "`(` after a relation symbol")?;
                let mut vars = vec![self.var()?];
                while *self.peek() == Tok::Comma {
                    self.next();
                    vars.push(self.var()?);
                }
                self.expect(Tok::RParen, "`)` closing the argument list")?;
                Ok(Formula::Rel(name, vars))
            }
            Tok::End => Err(self.error("unexpected end of input")),
            other => Err(self.error(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse("E(x1,x2) & !x1=x2").unwrap(),
            Formula::And(vec![
                Formula::rel("E", vec![1, 2]),
                Formula::not(Formula::Eq(1, 2))
            ])
        );
        let f = parse("exists x2. E(x1,x2)").unwrap();
        assert_eq!(f, Formula::exists(2, Formula::rel("E", vec![1, 2])));
        assert_eq!(f.free_variables().into_iter().collect::<Vec<_>>(), vec![1]);
        let g = parse("forall x1. (E(x1,x1) | true)").unwrap();
        assert!(g.free_variables().is_empty());
    }

    #[test]
    fn precedence_and_sugar() {
        let f = parse("A(x1) | B(x1) & C(x1)").unwrap();
        assert_eq!(
            f,
            Formula::Or(vec![
                Formula::rel("A", vec![1]),
                Formula::And(vec![Formula::rel("B", vec![1]), Formula::rel("C", vec![1])])
            ])
        );
        let imp = parse("A(x1) -> B(x1)").unwrap();
        assert_eq!(
            imp,
            Formula::implies(Formula::rel("A", vec![1]), Formula::rel("B", vec![1]))
        );
        let chain = parse("A(x1) -> B(x1) -> C(x1)").unwrap();
        assert_eq!(
            chain,
            Formula::implies(
                Formula::rel("A", vec![1]),
                Formula::implies(Formula::rel("B", vec![1]), Formula::rel("C", vec![1]))
            )
        );
        assert!(parse("A(x1) <-> B(x1)").is_ok());
        assert_eq!(
            parse(" \n exists\tx3 . U( x3 )").unwrap(),
            Formula::exists(3, Formula::rel("U", vec![3]))
        );
    }

    #[test]
    fn errors_carry_positions() {
        match parse("E(x1,\n  y)").unwrap_err() {
            Error::Syntax { line, column, .. } => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        match parse("E(x1) $ F(x2)").unwrap_err() {
            Error::Syntax { line, column, message } => {
                assert_eq!((line, column), (1, 7));
                assert!(message.contains("unknown token"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse("x0=x1").is_err());
        assert!(parse("E(x1").is_err());
        assert!(parse("E(x1) E(x2)").is_err());
        assert!(parse("").is_err());
    }
}
