//! Recursive-descent parser and evaluator for weight expressions in one
//! variable `x`.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' factor)?        (^ is right-associative)
//! base   := number | 'x' | ident '(' expr ')' | '(' expr ')'
//! ident  := exp | sqrt | acos | cos | sin | abs
//! ```
//!
//! Evaluation never lets a NaN or infinity escape silently: any domain
//! violation is reported as an error with the offending value.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdent { offset: usize, name: String },
}

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("non-finite value from `{op}` at x = {x}")]
    NonFinite { op: &'static str, x: f64 },
    #[error("domain error in `{op}` at x = {x} (argument {arg})")]
    Domain { op: &'static str, x: f64, arg: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Func {
    Exp,
    Sqrt,
    Acos,
    Cos,
    Sin,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Acos => "acos",
            Func::Cos => "cos",
            Func::Sin => "sin",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// A parsed weight expression together with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightExpr {
    source: String,
    root: Expr,
}

impl WeightExpr {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    /// Evaluate at `x`, rejecting any non-finite intermediate.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        eval_node(&self.root, x)
    }
}

fn eval_node(e: &Expr, x: f64) -> Result<f64, EvalError> {
    let v = match e {
        Expr::Num(c) => *c,
        Expr::Var => x,
        Expr::Neg(a) => -eval_node(a, x)?,
        Expr::Add(a, b) => eval_node(a, x)? + eval_node(b, x)?,
        Expr::Sub(a, b) => eval_node(a, x)? - eval_node(b, x)?,
        Expr::Mul(a, b) => eval_node(a, x)? * eval_node(b, x)?,
        Expr::Div(a, b) => {
            let d = eval_node(b, x)?;
            if d == 0.0 {
                return Err(EvalError::Domain { op: "/", x, arg: d });
            }
            eval_node(a, x)? / d
        }
        Expr::Pow(a, b) => {
            let base = eval_node(a, x)?;
            let exp = eval_node(b, x)?;
            let v = base.powf(exp);
            if !v.is_finite() {
                return Err(EvalError::Domain {
                    op: "^",
                    x,
                    arg: base,
                });
            }
            v
        }
        Expr::Call(f, a) => {
            let arg = eval_node(a, x)?;
            match f {
                Func::Exp => arg.exp(),
                Func::Sqrt => {
                    if arg < 0.0 {
                        return Err(EvalError::Domain { op: "sqrt", x, arg });
                    }
                    arg.sqrt()
                }
                Func::Acos => {
                    if !(-1.0..=1.0).contains(&arg) {
                        return Err(EvalError::Domain { op: "acos", x, arg });
                    }
                    arg.acos()
                }
                Func::Cos => arg.cos(),
                Func::Sin => arg.sin(),
                Func::Abs => arg.abs(),
            }
        }
    };
    if !v.is_finite() {
        return Err(EvalError::NonFinite { op: op_name(e), x });
    }
    Ok(v)
}

fn op_name(e: &Expr) -> &'static str {
    match e {
        Expr::Num(_) => "number",
        Expr::Var => "x",
        Expr::Neg(_) => "-",
        Expr::Add(..) => "+",
        Expr::Sub(..) => "-",
        Expr::Mul(..) => "*",
        Expr::Div(..) => "/",
        Expr::Pow(..) => "^",
        Expr::Call(f, _) => f.name(),
    }
}

/// Parse `source` into a [`WeightExpr`].
pub fn parse_weight(source: &str) -> Result<WeightExpr, ParseError> {
    let mut p = Parser {
        src: source.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let root = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::Syntax {
            offset: p.pos,
            message: format!("unexpected `{}`", p.peek_char()),
        });
    }
    Ok(WeightExpr {
        source: source.to_owned(),
        root,
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        self.peek().map(char::from).unwrap_or('\0')
    }

    fn skip_ws(&mut self) {
        while matches!(
            self.peek(),
            Some(b' ') | Some(b'\t') | Some(b'\n') | Some(b'\r')
        ) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                offset: self.pos,
                message: format!("expected `{}`, found `{}`", char::from(c), self.peek_char()),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                self.skip_ws();
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                self.skip_ws();
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                self.skip_ws();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        self.skip_ws();
        if self.eat(b'^') {
            let exp = self.factor()?; // right-associative
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            _ => Err(ParseError::Syntax {
                offset: self.pos,
                message: format!(
                    "expected number, `x`, function or `(`, found `{}`",
                    self.peek_char()
                ),
            }),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
            self.pos += 1;
        }
        // exponent part of a decimal literal, e.g. 1.5e-3
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Expr::Num)
            .map_err(|_| ParseError::Syntax {
                offset: start,
                message: format!("invalid number `{text}`"),
            })
    }

    fn ident(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if name == "x" {
            return Ok(Expr::Var);
        }
        let func = match name {
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "acos" => Func::Acos,
            "cos" => Func::Cos,
            "sin" => Func::Sin,
            "abs" => Func::Abs,
            _ => {
                return Err(ParseError::UnknownIdent {
                    offset: start,
                    name: name.to_owned(),
                });
            }
        };
        self.skip_ws();
        self.expect(b'(')?;
        let arg = self.expr()?;
        self.skip_ws();
        self.expect(b')')?;
        Ok(Expr::Call(func, Box::new(arg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_token_arithmetic() {
        let w = parse_weight("1 - x").unwrap();
        assert_eq!(
            *w.root(),
            Expr::Sub(Box::new(Expr::Num(1.0)), Box::new(Expr::Var))
        );
        assert_eq!(w.eval(0.25).unwrap(), 0.75);
    }

    #[test]
    fn gegenbauer_style_weight_parses_and_evaluates() {
        let w = parse_weight("exp(-2*0.5*acos(x)) * (1 - x^2)^(0.75 - 1)").unwrap();
        let x = 0.3_f64;
        let expect = (-2.0 * 0.5 * x.acos()).exp() * (1.0 - x * x).powf(-0.25);
        assert!((w.eval(x).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn unknown_identifier_is_reported_with_offset() {
        match parse_weight("1 + y") {
            Err(ParseError::UnknownIdent { offset, name }) => {
                assert_eq!(offset, 4);
                assert_eq!(name, "y");
            }
            other => panic!("expected unknown identifier error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_carries_byte_offset() {
        match parse_weight("1 + ") {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_weight("(1 + x").is_err());
        assert!(parse_weight("1 2").is_err());
    }

    #[test]
    fn power_is_right_associative_and_unary_minus_binds_low() {
        let w = parse_weight("2^3^2").unwrap();
        assert_eq!(w.eval(0.0).unwrap(), 512.0);
        let w = parse_weight("-x^2").unwrap();
        assert_eq!(w.eval(0.5).unwrap(), -0.25);
    }

    #[test]
    fn domain_errors_do_not_leak_nan() {
        let w = parse_weight("sqrt(x)").unwrap();
        assert!(matches!(
            w.eval(-0.5),
            Err(EvalError::Domain { op: "sqrt", .. })
        ));
        let w = parse_weight("1/x").unwrap();
        assert!(matches!(
            w.eval(0.0),
            Err(EvalError::Domain { op: "/", .. })
        ));
        let w = parse_weight("(0 - 1)^0.5").unwrap();
        assert!(w.eval(0.0).is_err());
    }

    #[test]
    fn scientific_notation_numbers() {
        let w = parse_weight("1e-2 + 2.5E3").unwrap();
        assert_eq!(w.eval(0.0).unwrap(), 0.01 + 2500.0);
    }
}
