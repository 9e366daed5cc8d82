//! Arithmetic expressions in the state components, used by custom system files.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('+' | '-') unary | power
//! power   := atom ('^' unary)?          right associative
//! atom    := number | 'u' index | 'exp' '(' expr ')' | '(' expr ')'
//! number  := digits ('.' digits)? (('e' | 'E') ('+' | '-')? digits)?
//! index   := digits                      1-based state component
//! ```
//!
//! Nothing else is recognised: no user functions, no variables other than
//! `u1..un`, no side effects.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
}

/// Parse failure with a 1-based column into the expression text.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ExprError {}

impl Expr {
    /// Parses `src`, accepting variables `u1..u{dim}`.
    pub fn parse(src: &str, dim: usize) -> Result<Expr, ExprError> {
        let mut p = Parser {
            chars: src.chars().collect(),
            pos: 0,
            dim,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
        }
        Ok(e)
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(i) => u[*i],
            Expr::Neg(a) => -a.eval(u),
            Expr::Add(a, b) => a.eval(u) + b.eval(u),
            Expr::Sub(a, b) => a.eval(u) - b.eval(u),
            Expr::Mul(a, b) => a.eval(u) * b.eval(u),
            Expr::Div(a, b) => a.eval(u) / b.eval(u),
            Expr::Pow(a, b) => {
                let base = a.eval(u);
                let ex = b.eval(u);
                if ex.fract() == 0.0 && ex.abs() < 64.0 {
                    base.powi(ex as i32)
                } else {
                    base.powf(ex)
                }
            }
            Expr::Exp(a) => a.eval(u).exp(),
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn error(&self, message: String) -> ExprError {
        ExprError {
            column: self.pos + 1,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(self.error(format!("expected '{c}', found '{got}'"))),
            None => Err(self.error(format!("expected '{c}', found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some('/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let ex = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(ex)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input".into())),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some('u') => {
                let start = self.pos;
                self.pos += 1;
                let digits = self.digits();
                if digits.is_empty() {
                    self.pos = start;
                    return Err(self.error("state component needs an index, e.g. u1".into()));
                }
                let idx: usize = digits.parse().unwrap_or(0);
                if idx == 0 || idx > self.dim {
                    self.pos = start;
                    return Err(self.error(format!("state component u{idx} out of range 1..={}", self.dim)));
                }
                Ok(Expr::Var(idx - 1))
            }
            Some('e') if self.lookahead_word("exp") => {
                self.pos += 3;
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Exp(Box::new(e)))
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
        }
    }

    fn lookahead_word(&self, w: &str) -> bool {
        let end = self.pos + w.len();
        end <= self.chars.len() && self.chars[self.pos..end].iter().copied().eq(w.chars())
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_ascii_digit() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        s
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let mut s = self.digits();
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            s.push('.');
            s.push_str(&self.digits());
        }
        if matches!(self.chars.get(self.pos), Some('e') | Some('E')) && !self.lookahead_word("exp") {
            let save = self.pos;
            self.pos += 1;
            let mut exp = String::from("e");
            if let Some(&c) = self.chars.get(self.pos) {
                if c == '+' || c == '-' {
                    exp.push(c);
                    self.pos += 1;
                }
            }
            let d = self.digits();
            if d.is_empty() {
                self.pos = save;
            } else {
                exp.push_str(&d);
                s.push_str(&exp);
            }
        }
        s.parse::<f64>().map(Expr::Num).map_err(|_| ExprError {
            column: start + 1,
            message: format!("malformed number '{s}'"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, u: &[f64]) -> f64 {
        Expr::parse(src, u.len()).unwrap().eval(u)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("1 + 2 * 3", &[]), 7.0);
        assert_eq!(ev("(1 + 2) * 3", &[]), 9.0);
        assert_eq!(ev("2 ^ 3 ^ 2", &[]), 512.0);
        assert_eq!(ev("-2 ^ 2", &[]), -4.0);
        assert_eq!(ev("8 / 4 / 2", &[]), 1.0);
        assert_eq!(ev("1 - 2 - 3", &[]), -4.0);
    }

    #[test]
    fn state_components_and_exp() {
        let u = [0.5, -2.0];
        assert_eq!(ev("u1 * u2", &u), -1.0);
        assert_eq!(ev("1 + u1^2/4", &u), 1.0625);
        assert!((ev("exp(u2)", &u) - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(ev("1.5e-1*2", &u), 0.3);
        assert_eq!(ev("2E+2", &u), 200.0);
    }

    #[test]
    fn errors_report_columns() {
        let e = Expr::parse("1 + * 2", 1).unwrap_err();
        assert_eq!(e.column, 5);
        let e = Expr::parse("u3 + 1", 2).unwrap_err();
        assert_eq!(e.column, 1);
        let e = Expr::parse("exp(u1", 1).unwrap_err();
        assert!(e.message.contains("expected ')'"));
        let e = Expr::parse("sin(u1)", 1).unwrap_err();
        assert_eq!(e.column, 1);
        let e = Expr::parse("1 2", 1).unwrap_err();
        assert_eq!(e.column, 3);
    }
}
