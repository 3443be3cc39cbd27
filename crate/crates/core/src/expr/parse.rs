//! Recursive-descent parser for the expression language.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := unary ("^" factor)?
//! unary  := "-" unary | atom
//! atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
//! ```

use super::ast::{BinOp, Expr, Func};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Next token and its starting byte offset.
    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => {
                self.pos += 1;
                Tok::Op(c)
            }
            '(' => {
                self.pos += 1;
                Tok::LParen
            }
            ')' => {
                self.pos += 1;
                Tok::RParen
            }
            ',' => {
                self.pos += 1;
                Tok::Comma
            }
            c if c.is_ascii_digit() || c == '.' => Tok::Num(self.number()?),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = rest
                    .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                    .unwrap_or(rest.len());
                self.pos += len;
                Tok::Ident(rest[..len].to_string())
            }
            other => {
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        Ok((tok, start))
    }

    fn number(&mut self) -> Result<f64> {
        let b = self.src.as_bytes();
        let start = self.pos;
        let mut i = start;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i < b.len() && b[i] == b'.' {
            i += 1;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
        }
        // exponent only when digits follow
        if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
            let mut j = i + 1;
            if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                j += 1;
            }
            if j < b.len() && b[j].is_ascii_digit() {
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        self.pos = i;
        self.src[start..i].parse::<f64>().map_err(|_| Error::Syntax {
            offset: start,
            message: format!("malformed number `{}`", &self.src[start..i]),
        })
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    at: usize,
    vars: &'a [String],
    consts: &'a [(String, f64)],
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(x) => format!("number {x}"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Op(c) => format!("`{c}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::End => "end of input".into(),
    }
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<()> {
        let (t, at) = self.lex.next()?;
        self.tok = t;
        self.at = at;
        Ok(())
    }

    fn fail<T>(&self, what: &str) -> Result<T> {
        Err(Error::Syntax {
            offset: self.at,
            message: format!("expected {what}, found {}", describe(&self.tok)),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = self.tok {
            self.advance()?;
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Tok::Op(c @ ('*' | '/')) = self.tok {
            self.advance()?;
            let rhs = self.factor()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.unary()?;
        if self.tok == Tok::Op('^') {
            self.advance()?;
            let exp = self.factor()?;
            return Ok(Expr::bin(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.tok == Tok::Op('-') {
            self.advance()?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.tok.clone() {
            Tok::Num(x) => {
                self.advance()?;
                Ok(Expr::Num(x))
            }
            Tok::LParen => {
                self.advance()?;
                let e = self.expr()?;
                if self.tok != Tok::RParen {
                    return self.fail("`)`");
                }
                self.advance()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.at;
                self.advance()?;
                if self.tok == Tok::LParen {
                    return self.call(name, at);
                }
                self.identifier(name, at)
            }
            _ => self.fail("an expression"),
        }
    }

    fn identifier(&self, name: String, at: usize) -> Result<Expr> {
        if let Some(i) = self.vars.iter().position(|v| *v == name) {
            return Ok(Expr::Var(i, name));
        }
        if let Some((_, v)) = self.consts.iter().find(|(n, _)| *n == name) {
            return Ok(Expr::Const(name, *v));
        }
        match name.as_str() {
            "pi" => Ok(Expr::Const(name, std::f64::consts::PI)),
            "e" => Ok(Expr::Const(name, std::f64::consts::E)),
            _ => Err(Error::UnknownIdentifier { name, offset: at }),
        }
    }

    fn call(&mut self, name: String, at: usize) -> Result<Expr> {
        let Some(func) = Func::from_name(&name) else {
            return Err(Error::UnknownIdentifier { name, offset: at });
        };
        self.advance()?;
        let mut args = vec![self.expr()?];
        while self.tok == Tok::Comma {
            self.advance()?;
            args.push(self.expr()?);
        }
        if self.tok != Tok::RParen {
            return self.fail("`,` or `)`");
        }
        self.advance()?;
        if args.len() != func.arity() {
            return Err(Error::Arity {
                name,
                expected: func.arity(),
                found: args.len(),
            });
        }
        Ok(Expr::Call(func, args))
    }
}

/// Parse one expression over the given variables and named constants.
///
/// Variables shadow constants, and both shadow the builtin `pi` and `e`.
pub fn parse_expr(source: &str, vars: &[String], consts: &[(String, f64)]) -> Result<Expr> {
    let mut p = Parser {
        lex: Lexer { src: source, pos: 0 },
        tok: Tok::End,
        at: 0,
        vars,
        consts,
    };
    p.advance()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.fail("an operator or end of input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn precedence_and_right_assoc_power() {
        let e = parse_expr("1+2*t^2^3", &vars(&["t"]), &[]).unwrap();
        assert_eq!(e.to_string(), "(1+(2*(t^(2^3))))");
    }

    #[test]
    fn unary_minus_binds_tighter_than_power() {
        let e = parse_expr("-t^2", &vars(&["t"]), &[]).unwrap();
        assert_eq!(e.to_string(), "((-t)^2)");
    }

    #[test]
    fn truncated_call_reports_end_offset() {
        let err = parse_expr("cos(t,", &vars(&["t"]), &[]).unwrap_err();
        assert!(matches!(err, Error::Syntax { offset: 6, .. }), "{err:?}");
    }

    #[test]
    fn unknown_identifier() {
        let err = parse_expr("2*q", &vars(&["t"]), &[]).unwrap_err();
        assert_eq!(
            err,
            Error::UnknownIdentifier {
                name: "q".into(),
                offset: 2
            }
        );
    }

    #[test]
    fn arity_mismatch() {
        let err = parse_expr("atan2(t)", &vars(&["t"]), &[]).unwrap_err();
        assert!(matches!(err, Error::Arity { expected: 2, found: 1, .. }));
    }

    #[test]
    fn scientific_literals() {
        let e = parse_expr("1.5e-3 + 2E2", &[], &[]).unwrap();
        assert_eq!(e.to_string(), "(0.0015+200)");
    }
}
