//! Scalar expression grammar and the canonical text form of tower elements.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := rational | 'sqrt' '(' expr ')' | '(' expr ')' | '-' factor
//! rational := integer ('/' integer)?
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::tower::{tower_sqrt, Level, Rational, TowerElem, TowerField};
use super::FieldError;

const MAX_NESTING: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub enum ScalarExpr {
    Rational(Rational),
    Sqrt(Box<ScalarExpr>),
    Add(Box<ScalarExpr>, Box<ScalarExpr>),
    Sub(Box<ScalarExpr>, Box<ScalarExpr>),
    Mul(Box<ScalarExpr>, Box<ScalarExpr>),
    Div(Box<ScalarExpr>, Box<ScalarExpr>),
    Neg(Box<ScalarExpr>),
}

impl ScalarExpr {
    /// Evaluates the tree over `field`, threading the tower through every
    /// `sqrt` so that later radicals see the levels adjoined by earlier ones.
    pub fn eval(&self, field: &TowerField) -> Result<(TowerField, TowerElem), FieldError> {
        match self {
            ScalarExpr::Rational(q) => {
                let value = TowerElem::from_rational(q.clone()).lift(field)?;
                Ok((field.clone(), value))
            }
            ScalarExpr::Sqrt(inner) => {
                let (field, value) = inner.eval(field)?;
                tower_sqrt(&field, &value)
            }
            ScalarExpr::Neg(inner) => {
                let (field, value) = inner.eval(field)?;
                Ok((field, -value))
            }
            ScalarExpr::Add(l, r)
            | ScalarExpr::Sub(l, r)
            | ScalarExpr::Mul(l, r)
            | ScalarExpr::Div(l, r) => {
                let (field, lhs) = l.eval(field)?;
                let (field, rhs) = r.eval(&field)?;
                let value = match self {
                    ScalarExpr::Add(..) => lhs.checked_add(&rhs)?,
                    ScalarExpr::Sub(..) => lhs.checked_sub(&rhs)?,
                    ScalarExpr::Mul(..) => lhs.checked_mul(&rhs)?,
                    _ => lhs.checked_div(&rhs)?,
                };
                Ok((field, value))
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, offset: usize, message: impl Into<String>) -> FieldError {
        FieldError::Syntax {
            offset,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<(), FieldError> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(self.error(
                self.pos,
                format!("expected '{}', found '{}'", byte as char, b as char),
            )),
            None => Err(self.error(
                self.pos,
                format!("expected '{}', found end of input", byte as char),
            )),
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr, FieldError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(self.error(self.pos, "expression nested too deeply"));
        }
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = ScalarExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = ScalarExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ScalarExpr, FieldError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = ScalarExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = ScalarExpr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ScalarExpr, FieldError> {
        match self.peek() {
            None => Err(self.error(self.pos, "unexpected end of input")),
            Some(b'-') => {
                self.pos += 1;
                self.depth += 1;
                if self.depth > MAX_NESTING {
                    return Err(self.error(self.pos, "expression nested too deeply"));
                }
                let inner = self.factor()?;
                self.depth -= 1;
                Ok(ScalarExpr::Neg(Box::new(inner)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => self.rational(),
            Some(b's') if self.src[self.pos..].starts_with(b"sqrt") => {
                self.pos += 4;
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(ScalarExpr::Sqrt(Box::new(inner)))
            }
            Some(b) => Err(self.error(self.pos, format!("unexpected character '{}'", b as char))),
        }
    }

    fn integer(&mut self) -> BigInt {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse().expect("non-empty digit run")
    }

    fn rational(&mut self) -> Result<ScalarExpr, FieldError> {
        let num = self.integer();
        let save = self.pos;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            if matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                let den = self.integer();
                if den.is_zero() {
                    // deferred to evaluation, like any other division
                    return Ok(ScalarExpr::Div(
                        Box::new(ScalarExpr::Rational(Rational::from_integer(num))),
                        Box::new(ScalarExpr::Rational(Rational::zero())),
                    ));
                }
                return Ok(ScalarExpr::Rational(Rational::new(num, den)));
            }
        }
        self.pos = save;
        Ok(ScalarExpr::Rational(Rational::from_integer(num)))
    }
}

/// Parses `text` into an expression tree without evaluating it.
pub fn parse_expr(text: &str) -> Result<ScalarExpr, FieldError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        depth: 0,
    };
    let expr = parser.expr()?;
    if let Some(b) = parser.peek() {
        return Err(parser.error(parser.pos, format!("unexpected trailing '{}'", b as char)));
    }
    Ok(expr)
}

/// Parses and evaluates `text` over `field`.
pub fn parse_scalar(text: &str, field: &TowerField) -> Result<(TowerField, TowerElem), FieldError> {
    parse_expr(text)?.eval(field)
}

fn monomial(levels: &[Level], mask: usize) -> String {
    (0..levels.len())
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| format!("sqrt({})", render_sum(&levels[..i], &levels[i].radicand)))
        .collect::<Vec<_>>()
        .join("*")
}

/// Signed terms of an element, lowest generator mask first.
fn terms(levels: &[Level], coeffs: &[Rational]) -> Vec<(bool, String)> {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(mask, c)| {
            let num = c.numer().abs();
            let den = c.denom();
            let mut body = String::new();
            if mask == 0 {
                body.push_str(&num.to_string());
            } else {
                if !num.is_one() {
                    body.push_str(&num.to_string());
                    body.push('*');
                }
                body.push_str(&monomial(levels, mask));
            }
            if !den.is_one() {
                body.push('/');
                body.push_str(&den.to_string());
            }
            (c.is_negative(), body)
        })
        .collect()
}

fn join_terms(terms: &[(bool, String)]) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(body);
    }
    out
}

fn render_sum(levels: &[Level], coeffs: &[Rational]) -> String {
    let terms = terms(levels, coeffs);
    if terms.is_empty() {
        "0".to_string()
    } else {
        join_terms(&terms)
    }
}

/// Canonical text: sums are parenthesized, radicands rendered recursively.
/// The output re-parses to an equal element.
impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels = self.field().levels();
        let terms = terms(levels, self.coefficients());
        match terms.len() {
            0 => f.write_str("0"),
            1 => f.write_str(&join_terms(&terms)),
            _ => write!(f, "({})", join_terms(&terms)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn syntax_offset(text: &str) -> usize {
        match parse_expr(text) {
            Err(FieldError::Syntax { offset, .. }) => offset,
            other => panic!("expected syntax error for {text:?}, got {other:?}"),
        }
    }

    #[test]
    fn literal_half() {
        assert_eq!(parse_expr("1/2").unwrap(), ScalarExpr::Rational(q(1, 2)));
        let (f, v) = parse_scalar(" 1 / 2 ", &TowerField::rationals()).unwrap();
        assert_eq!(f.depth(), 0);
        assert_eq!(v, TowerElem::from_ratio(1, 2));
    }

    #[test]
    fn slash_before_non_digit_is_division() {
        let (_, v) = parse_scalar("1/(2)", &TowerField::rationals()).unwrap();
        assert_eq!(v, TowerElem::from_ratio(1, 2));
        let (_, v) = parse_scalar("3/4/3", &TowerField::rationals()).unwrap();
        assert_eq!(v, TowerElem::from_ratio(1, 4));
    }

    #[test]
    fn product_of_roots() {
        let (f, v) = parse_scalar("sqrt(2)*sqrt(3)", &TowerField::rationals()).unwrap();
        assert_eq!(f.depth(), 2);
        assert!((v.to_f64() - 2.449_489_742_783_178).abs() < 1e-12);
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(syntax_offset("sqrt("), 5);
        assert_eq!(syntax_offset("1 + * 2"), 4);
        assert_eq!(syntax_offset("(1/2"), 4);
        assert_eq!(syntax_offset(""), 0);
        assert_eq!(syntax_offset("2 3"), 2);
        assert_eq!(syntax_offset("sqrt 2"), 5);
        assert_eq!(syntax_offset("x"), 0);
    }

    #[test]
    fn evaluation_errors() {
        let base = TowerField::rationals();
        assert_eq!(
            parse_scalar("1/0", &base).unwrap_err(),
            FieldError::DivisionByZero
        );
        assert_eq!(
            parse_scalar("1/(1-1)", &base).unwrap_err(),
            FieldError::DivisionByZero
        );
        assert_eq!(
            parse_scalar("sqrt(-1)", &base).unwrap_err(),
            FieldError::NegativeRadicand
        );
        assert_eq!(
            parse_scalar("sqrt(2-3)", &base).unwrap_err(),
            FieldError::NegativeRadicand
        );
    }

    #[test]
    fn deep_nesting_is_a_syntax_error() {
        let text = format!("{}1{}", "(".repeat(10_000), ")".repeat(10_000));
        assert!(matches!(parse_expr(&text), Err(FieldError::Syntax { .. })));
        let text = format!("{}1", "-".repeat(10_000));
        assert!(matches!(parse_expr(&text), Err(FieldError::Syntax { .. })));
    }

    #[test]
    fn canonical_rendering() {
        let (f, c) = parse_scalar(
            "-1/2-sqrt(2)/4+sqrt(3)/6-sqrt(2)*sqrt(3)/6",
            &TowerField::rationals(),
        )
        .unwrap();
        assert_eq!(
            c.to_string(),
            "(-1/2 - sqrt(2)/4 + sqrt(3)/6 - sqrt(2)*sqrt(3)/6)"
        );
        let (_, back) = parse_scalar(&c.to_string(), &f).unwrap();
        assert_eq!(back, c);
        assert_eq!(TowerElem::zero().to_string(), "0");
        assert_eq!(TowerElem::from_ratio(-3, 4).to_string(), "-3/4");
    }

    #[test]
    fn nested_radicand_renders_recursively() {
        let (f, r) = parse_scalar(
            "sqrt(9-2*sqrt(2)-2*sqrt(2)*sqrt(3))",
            &TowerField::rationals(),
        )
        .unwrap();
        assert_eq!(r.to_string(), "sqrt(9 - 2*sqrt(2) - 2*sqrt(2)*sqrt(3))");
        let (g, back) = parse_scalar(&r.to_string(), &TowerField::rationals()).unwrap();
        assert_eq!(g, f);
        assert_eq!(back, r);
    }
}
