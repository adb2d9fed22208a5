//! Expressions in `lambdaJ` and `psiI`: parsing, validation, printing, and
//! conversion to [`HodgePolynomial`].

use num_bigint::BigInt;
use pshodge::arith::format_rational;
use pshodge::{HodgePolynomial, Rational};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TautExpr {
    Rational(Rational),
    Lambda(u32),
    Psi(u32),
    Sum(Box<TautExpr>, Box<TautExpr>),
    Diff(Box<TautExpr>, Box<TautExpr>),
    Product(Box<TautExpr>, Box<TautExpr>),
    Power(Box<TautExpr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    /// `position` is a 1-based character column.
    #[error("syntax error at column {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("{symbol}: {message}")]
    IndexOutOfRange { symbol: String, message: String },
}

fn syntax(position: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        position,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(String),
    Lambda,
    Psi,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Open,
    Close,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Int(s) => format!("number {s}"),
            Token::Lambda => "'lambda'".into(),
            Token::Psi => "'psi'".into(),
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::Caret => "'^'".into(),
            Token::Slash => "'/'".into(),
            Token::Open => "'('".into(),
            Token::Close => "')'".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            '^' => Some(Token::Caret),
            '/' => Some(Token::Slash),
            '(' => Some(Token::Open),
            ')' => Some(Token::Close),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Token::Int(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match word.as_str() {
                "lambda" => out.push((Token::Lambda, col)),
                "psi" => out.push((Token::Psi, col)),
                _ => return Err(syntax(col, format!("unknown symbol '{word}'"))),
            }
        } else {
            return Err(syntax(col, format!("unexpected character '{c}'")));
        }
    }
    out.push((Token::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn column(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn next(&mut self) -> (Token, usize) {
        let t = self.tokens[self.pos].clone();
        if t.0 != Token::End {
            self.pos += 1;
        }
        t
    }

    fn expect_int(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        match self.next() {
            (Token::Int(s), col) => Ok((s, col)),
            (t, col) => Err(syntax(
                col,
                format!("expected {what}, found {}", t.describe()),
            )),
        }
    }

    fn small_int(&mut self, what: &str) -> Result<u32, ParseError> {
        let (s, col) = self.expect_int(what)?;
        s.parse()
            .map_err(|_| syntax(col, format!("{what} {s} is too large")))
    }

    fn expr(&mut self) -> Result<TautExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.next();
                    acc = TautExpr::Sum(Box::new(acc), Box::new(self.term()?));
                }
                Token::Minus => {
                    self.next();
                    acc = TautExpr::Diff(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<TautExpr, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Token::Star {
            self.next();
            acc = TautExpr::Product(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<TautExpr, ParseError> {
        let base = self.base()?;
        if *self.peek() == Token::Caret {
            self.next();
            let k = self.small_int("exponent")?;
            return Ok(TautExpr::Power(Box::new(base), k));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<TautExpr, ParseError> {
        let col = self.column();
        match self.next().0 {
            Token::Int(num) => {
                let num: BigInt = num.parse().expect("digits");
                let den = if *self.peek() == Token::Slash {
                    self.next();
                    let (s, dcol) = self.expect_int("denominator")?;
                    let den: BigInt = s.parse().expect("digits");
                    if den == BigInt::from(0) {
                        return Err(syntax(dcol, "denominator must be positive"));
                    }
                    den
                } else {
                    BigInt::from(1)
                };
                Ok(TautExpr::Rational(Rational::new(num, den)))
            }
            Token::Lambda => Ok(TautExpr::Lambda(self.small_int("lambda index")?)),
            Token::Psi => Ok(TautExpr::Psi(self.small_int("psi index")?)),
            Token::Open => {
                let inner = self.expr()?;
                match self.next() {
                    (Token::Close, _) => Ok(inner),
                    (t, c) => Err(syntax(c, format!("expected ')', found {}", t.describe()))),
                }
            }
            t => Err(syntax(
                col,
                format!(
                    "expected a number, lambdaJ, psiI or '(', found {}",
                    t.describe()
                ),
            )),
        }
    }
}

/// Parses `text` without checking symbol indices.
pub fn parse(text: &str) -> Result<TautExpr, ParseError> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    match p.next() {
        (Token::End, _) => Ok(e),
        (t, col) => Err(syntax(col, format!("unexpected {}", t.describe()))),
    }
}

/// Parses `text` and checks `1 ≤ j ≤ g` for every `lambdaJ` and `1 ≤ i ≤ n` for every `psiI`.
pub fn parse_expression(text: &str, g: u32, n: u32) -> Result<TautExpr, ParseError> {
    let e = parse(text)?;
    e.validate(g, n)?;
    Ok(e)
}

impl TautExpr {
    pub fn validate(&self, g: u32, n: u32) -> Result<(), ParseError> {
        match self {
            TautExpr::Rational(_) => Ok(()),
            TautExpr::Lambda(j) => check_index("lambda", *j, "g", g),
            TautExpr::Psi(i) => check_index("psi", *i, "n", n),
            TautExpr::Sum(a, b) | TautExpr::Diff(a, b) | TautExpr::Product(a, b) => {
                a.validate(g, n)?;
                b.validate(g, n)
            }
            TautExpr::Power(a, _) => a.validate(g, n),
        }
    }

    /// The polynomial on `(g, n)`, with everything above degree `max_degree`
    /// dropped along the way. Assumes [`TautExpr::validate`] passed.
    pub fn to_polynomial(&self, g: u32, n: u32, max_degree: u32) -> HodgePolynomial {
        let mul = |a: &HodgePolynomial, b: &HodgePolynomial| {
            a.mul(b).expect("same ambient").truncate_above(max_degree)
        };
        match self {
            TautExpr::Rational(q) => HodgePolynomial::constant(g, n, q.clone()),
            TautExpr::Lambda(j) => HodgePolynomial::lambda(g, n, *j),
            TautExpr::Psi(i) => HodgePolynomial::psi(g, n, *i),
            TautExpr::Sum(a, b) => a
                .to_polynomial(g, n, max_degree)
                .add(&b.to_polynomial(g, n, max_degree))
                .expect("same ambient"),
            TautExpr::Diff(a, b) => a
                .to_polynomial(g, n, max_degree)
                .sub(&b.to_polynomial(g, n, max_degree))
                .expect("same ambient"),
            TautExpr::Product(a, b) => mul(
                &a.to_polynomial(g, n, max_degree),
                &b.to_polynomial(g, n, max_degree),
            ),
            TautExpr::Power(a, k) => {
                let mut base = a.to_polynomial(g, n, max_degree);
                let mut acc = HodgePolynomial::constant(g, n, Rational::from_integer(1.into()));
                let mut k = *k;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = mul(&acc, &base);
                    }
                    k >>= 1;
                    if k > 0 {
                        base = mul(&base, &base);
                    }
                }
                acc
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            TautExpr::Sum(..) | TautExpr::Diff(..) => 1,
            TautExpr::Product(..) => 2,
            TautExpr::Power(..) => 3,
            _ => 4,
        }
    }
}

fn check_index(name: &str, index: u32, bound_name: &str, bound: u32) -> Result<(), ParseError> {
    let symbol = format!("{name}{index}");
    if index == 0 {
        Err(ParseError::IndexOutOfRange {
            symbol,
            message: format!("{name} indices start at 1"),
        })
    } else if index > bound {
        Err(ParseError::IndexOutOfRange {
            symbol,
            message: format!("{name} index {index} exceeds {bound_name}={bound}"),
        })
    } else {
        Ok(())
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &TautExpr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the fewest parentheses that re-parse to the same tree.
impl fmt::Display for TautExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TautExpr::Rational(q) => write!(f, "{}", format_rational(q)),
            TautExpr::Lambda(j) => write!(f, "lambda{j}"),
            TautExpr::Psi(i) => write!(f, "psi{i}"),
            TautExpr::Sum(a, b) | TautExpr::Diff(a, b) => {
                write_operand(f, a, a.precedence() < 1)?;
                f.write_str(if matches!(self, TautExpr::Sum(..)) {
                    " + "
                } else {
                    " - "
                })?;
                write_operand(f, b, b.precedence() <= 1)
            }
            TautExpr::Product(a, b) => {
                write_operand(f, a, a.precedence() < 2)?;
                f.write_str("*")?;
                write_operand(f, b, b.precedence() <= 2)
            }
            TautExpr::Power(a, k) => {
                write_operand(f, a, a.precedence() < 4)?;
                write!(f, "^{k}")
            }
        }
    }
}
