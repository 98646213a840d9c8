//! Lexer and parser for the expression language used in spec files and by
//! `expand`.

use num_traits::{One, Zero};

use crate::engine::{RawPoly, SpecError};
use crate::terms::scalar::parse_scalar;
use crate::terms::{DerivedGenerator, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(Scalar),
    Sym(char),
    Arrow,
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub fn lex(text: &str) -> Result<Vec<Token>, SpecError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| SpecError::Parse { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: start_line, column: start_col });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                s.push('/');
                i += 1;
                col += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    i += 1;
                    col += 1;
                }
            }
            let q = parse_scalar(&s).ok_or_else(|| err(start_line, start_col, format!("bad number `{}`", s)))?;
            out.push(Token { tok: Tok::Num(q), line: start_line, column: start_col });
            continue;
        }
        if c == '-' && i + 1 < chars.len() && chars[i + 1] == '>' {
            out.push(Token { tok: Tok::Arrow, line, column: col });
            i += 2;
            col += 2;
            continue;
        }
        if "{};=:()+-*^[]_,".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line, column: col });
            i += 1;
            col += 1;
            continue;
        }
        return Err(err(line, col, format!("unexpected character `{}`", c)));
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Scalar),
    Lambda,
    Vac,
    Name(String),
    Deriv(u32, Box<Expr>),
    /// Right-nested normally ordered product.
    Nop(Vec<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Bracket(Box<Expr>, Box<Expr>),
}

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(text: &str) -> Result<Self, SpecError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    pub fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error<T>(&self, message: impl Into<String>) -> Result<T, SpecError> {
        let (line, column) = self.here();
        Err(SpecError::Parse { line, column, message: message.into() })
    }

    pub fn at_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    pub fn expect_sym(&mut self, c: char) -> Result<(), SpecError> {
        if self.at_sym(c) {
            self.advance();
            Ok(())
        } else {
            self.error(format!("expected `{}`", c))
        }
    }

    pub fn expect_ident(&mut self) -> Result<String, SpecError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s)
            }
            _ => self.error("expected a name"),
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn expect_uint(&mut self) -> Result<u32, SpecError> {
        match self.peek().clone() {
            Tok::Num(q) if q.denom().is_one() && q >= Scalar::zero() => {
                self.advance();
                crate::terms::scalar::to_i64(&q)
                    .and_then(|n| u32::try_from(n).ok())
                    .map_or_else(|| self.error("exponent too large"), Ok)
            }
            _ => self.error("expected a non-negative integer"),
        }
    }

    /// Signed rational literal such as `-3/2`.
    pub fn rational(&mut self) -> Result<Scalar, SpecError> {
        let neg = if self.at_sym('-') {
            self.advance();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Num(q) => {
                self.advance();
                Ok(if neg { -q } else { q })
            }
            _ => self.error("expected a rational number"),
        }
    }

    pub fn expr(&mut self) -> Result<Expr, SpecError> {
        let mut acc = if self.at_sym('-') {
            self.advance();
            Expr::Neg(Box::new(self.term()?))
        } else {
            if self.at_sym('+') {
                self.advance();
            }
            self.term()?
        };
        loop {
            if self.at_sym('+') {
                self.advance();
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.at_sym('-') {
                self.advance();
                acc = Expr::Add(Box::new(acc), Box::new(Expr::Neg(Box::new(self.term()?))));
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(') | Tok::Sym(':') | Tok::Sym('['))
    }

    fn term(&mut self) -> Result<Expr, SpecError> {
        let mut acc = self.factor()?;
        loop {
            if self.at_sym('*') {
                self.advance();
                acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
            } else if self.starts_factor() {
                acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, SpecError> {
        if self.at_sym('-') {
            self.advance();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.at_sym('^') {
            self.advance();
            let k = self.expect_uint()?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SpecError> {
        match self.peek().clone() {
            Tok::Num(q) => {
                self.advance();
                Ok(Expr::Num(q))
            }
            Tok::Ident(s) if s == "vac" => {
                self.advance();
                Ok(Expr::Vac)
            }
            Tok::Ident(s) if s == "L" => {
                self.advance();
                Ok(Expr::Lambda)
            }
            Tok::Ident(s) if s == "T" => {
                self.advance();
                let k = if self.at_sym('^') {
                    self.advance();
                    self.expect_uint()?
                } else {
                    1
                };
                let inner = self.atom()?;
                Ok(Expr::Deriv(k, Box::new(inner)))
            }
            Tok::Ident(s) => {
                self.advance();
                Ok(Expr::Name(s))
            }
            Tok::Sym('(') => {
                self.advance();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Sym(':') => {
                self.advance();
                let mut items = Vec::new();
                while !self.at_sym(':') {
                    if self.at_eof() {
                        return self.error("unterminated normally ordered product");
                    }
                    let item = self.atom()?;
                    let item = if self.at_sym('^') {
                        self.advance();
                        Expr::Pow(Box::new(item), self.expect_uint()?)
                    } else {
                        item
                    };
                    items.push(item);
                }
                self.advance();
                if items.is_empty() {
                    return self.error("empty normally ordered product");
                }
                Ok(Expr::Nop(items))
            }
            Tok::Sym('[') => {
                self.advance();
                let a = self.expr()?;
                self.expect_sym('_')?;
                let b = self.expr()?;
                self.expect_sym(']')?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b)))
            }
            _ => self.error("expected an expression"),
        }
    }
}

/// Parses a complete expression.
pub fn parse_expr(text: &str) -> Result<Expr, SpecError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if !p.at_eof() {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

pub enum NameRef {
    Gen(usize),
    Param(Scalar),
}

fn word_free(p: &RawPoly) -> bool {
    p.iter().all(|(_, w, _)| w.is_empty())
}

fn raw_mul(a: &RawPoly, b: &RawPoly) -> RawPoly {
    let mut out = RawPoly::zero();
    for (n, w, c) in a.iter() {
        for (m, v, d) in b.iter() {
            let mut word = w.to_vec();
            word.extend_from_slice(v);
            out.add_term(n + m, word, c * d);
        }
    }
    out
}

fn raw_t(p: &RawPoly, k: u32) -> RawPoly {
    let mut cur = p.clone();
    for _ in 0..k {
        let mut next = RawPoly::zero();
        for (n, w, c) in cur.iter() {
            for i in 0..w.len() {
                let mut word = w.to_vec();
                word[i] = word[i].derive(1);
                next.add_term(n, word, c.clone());
            }
        }
        cur = next;
    }
    cur
}

/// Expands an expression into λ-powers times raw words. Nested normally
/// ordered products are only allowed in the last position.
pub fn to_raw(e: &Expr, resolve: &dyn Fn(&str) -> Option<NameRef>) -> Result<RawPoly, String> {
    Ok(match e {
        Expr::Num(q) => RawPoly::term(0, Vec::new(), q.clone()),
        Expr::Lambda => RawPoly::term(1, Vec::new(), Scalar::one()),
        Expr::Vac => RawPoly::term(0, Vec::new(), Scalar::one()),
        Expr::Name(s) => match resolve(s) {
            Some(NameRef::Gen(g)) => RawPoly::term(0, vec![DerivedGenerator::base(g)], Scalar::one()),
            Some(NameRef::Param(q)) => RawPoly::term(0, Vec::new(), q),
            None => return Err(format!("unknown name `{}`", s)),
        },
        Expr::Deriv(k, inner) => raw_t(&to_raw(inner, resolve)?, *k),
        Expr::Nop(items) => {
            let mut acc = to_raw(items.last().expect("nonempty"), resolve)?;
            for item in items[..items.len() - 1].iter().rev() {
                let x = to_raw(item, resolve)?;
                if x.iter().any(|(_, w, _)| w.len() > 1) {
                    return Err("a normally ordered product may only be nested in the last position".into());
                }
                acc = raw_mul(&x, &acc);
            }
            acc
        }
        Expr::Add(a, b) => {
            let mut x = to_raw(a, resolve)?;
            x.add_scaled(&to_raw(b, resolve)?, &Scalar::one());
            x
        }
        Expr::Neg(a) => to_raw(a, resolve)?.scaled(&-Scalar::one()),
        Expr::Mul(a, b) => {
            let (x, y) = (to_raw(a, resolve)?, to_raw(b, resolve)?);
            if !word_free(&x) && !word_free(&y) {
                return Err("`*` needs a scalar or L factor; write :a b: for products of states".into());
            }
            raw_mul(&x, &y)
        }
        Expr::Pow(a, k) => {
            let x = to_raw(a, resolve)?;
            if !word_free(&x) {
                return Err("only scalars and L may be raised to a power".into());
            }
            let mut acc = RawPoly::term(0, Vec::new(), Scalar::one());
            for _ in 0..*k {
                acc = raw_mul(&acc, &x);
            }
            acc
        }
        Expr::Bracket(..) => return Err("brackets are not allowed here".into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::scalar::int;

    fn resolver(name: &str) -> Option<NameRef> {
        match name {
            "h" => Some(NameRef::Gen(0)),
            "e" => Some(NameRef::Gen(1)),
            "k" => Some(NameRef::Param(int(3))),
            _ => None,
        }
    }

    #[test]
    fn parses_rendered_lambda_poly() {
        let e = parse_expr("L^2 - 2 L :h: - :T^1 h: + :h h:").unwrap();
        let raw = to_raw(&e, &resolver).unwrap();
        let h = DerivedGenerator::base(0);
        let mut expect = RawPoly::zero();
        expect.add_term(2, vec![], int(1));
        expect.add_term(1, vec![h], int(-2));
        expect.add_term(0, vec![h.derive(1)], int(-1));
        expect.add_term(0, vec![h, h], int(1));
        assert_eq!(raw, expect);
    }

    #[test]
    fn params_and_derivatives() {
        let e = parse_expr("k * L + T^2 :h e:").unwrap();
        let raw = to_raw(&e, &resolver).unwrap();
        let (h, f) = (DerivedGenerator::base(0), DerivedGenerator::base(1));
        let mut expect = RawPoly::term(1, vec![], int(3));
        expect.add_term(0, vec![h.derive(2), f], int(1));
        expect.add_term(0, vec![h.derive(1), f.derive(1)], int(2));
        expect.add_term(0, vec![h, f.derive(2)], int(1));
        assert_eq!(raw, expect);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expr("h +\n  ) ") {
            Err(SpecError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{:?}", other),
        }
        assert!(to_raw(&parse_expr(":(:h e:) h:").unwrap(), &resolver).is_err());
        assert!(to_raw(&parse_expr("h * e").unwrap(), &resolver).is_err());
        assert!(to_raw(&parse_expr("q").unwrap(), &resolver).is_err());
    }

    #[test]
    fn bracket_syntax() {
        let e = parse_expr("[e _ T h]").unwrap();
        assert!(matches!(e, Expr::Bracket(..)));
    }
}
