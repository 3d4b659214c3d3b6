//! Expression parser.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := atom ("^" uint)? | "-" factor
//! atom   := number | "x" | "y" | "t" | "T" | "(" expr ")"
//! ```
//!
//! Numbers are unsigned decimal integers; `3/2` is a quotient. Syntax
//! errors report the byte offset of the offending token.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{BivariatePolynomial, Polynomial, RationalFunction};
use crate::error::{Error, Result};
use crate::forms::DifferenceForm;
use crate::operators::TruncatedOperator;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Var(char),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Var(char),
    Op(char),
    End,
}

const OPERAND: &str = "number, variable, '(' or '-'";

/// Largest accepted number of tokens.
pub const MAX_TOKENS: usize = 2048;
/// Deepest accepted nesting of parentheses and unary minus.
pub const MAX_DEPTH: usize = 128;
/// Largest accepted degree bound of an expression.
pub const MAX_DEGREE: u64 = 64;
/// Largest accepted bit-size bound of the integers in an expression.
pub const MAX_BITS: u64 = 1 << 16;
/// Largest accepted truncation degree for operator expressions.
pub const MAX_TRUNCATION: usize = 256;

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(src[start..i].parse().expect("ascii digits"))));
            }
            b'x' | b'y' | b't' | b'T' => {
                out.push((i, Tok::Var(c as char)));
                i += 1;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' | b'(' | b')' => {
                out.push((i, Tok::Op(c as char)));
                i += 1;
            }
            _ => {
                return Err(Error::Syntax { offset: i, expected: format!("{OPERAND}, operator or ')'") });
            }
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax { offset: self.offset(), expected: expected.into() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::TooLarge(format!("nesting deeper than {MAX_DEPTH}")));
        }
        Ok(())
    }

    fn factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            self.enter()?;
            let inner = self.factor()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let Tok::Num(n) = self.peek().clone() else {
                return self.err("nonnegative integer exponent");
            };
            let Ok(e) = u32::try_from(&n) else {
                return self.err("exponent below 2^32");
            };
            self.bump();
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Num(n))
            }
            Tok::Var(v) => {
                self.bump();
                Ok(Expr::Var(v))
            }
            Tok::Op('(') => {
                self.bump();
                self.enter()?;
                let e = self.expr()?;
                self.depth -= 1;
                if *self.peek() != Tok::Op(')') {
                    return self.err("')'");
                }
                self.bump();
                Ok(e)
            }
            _ => self.err(OPERAND),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    if toks.len() > MAX_TOKENS {
        return Err(Error::TooLarge(format!("more than {MAX_TOKENS} tokens")));
    }
    let mut p = Parser { toks, pos: 0, depth: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("operator or end of input");
    }
    let (deg, bits) = size_bound(&e);
    if deg > MAX_DEGREE {
        return Err(Error::TooLarge(format!("degree may exceed {MAX_DEGREE}")));
    }
    if bits > MAX_BITS {
        return Err(Error::TooLarge(format!("integers may exceed {MAX_BITS} bits")));
    }
    Ok(e)
}

/// Upper bounds on the degree and on the integer bit size of `e`.
fn size_bound(e: &Expr) -> (u64, u64) {
    match e {
        Expr::Num(n) => (0, n.bits() + 1),
        Expr::Var(_) => (1, 1),
        Expr::Neg(a) => size_bound(a),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (da, ba) = size_bound(a);
            let (db, bb) = size_bound(b);
            (da.max(db), ba.max(bb).saturating_add(1))
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            let (da, ba) = size_bound(a);
            let (db, bb) = size_bound(b);
            (da.saturating_add(db), ba.saturating_add(bb).saturating_add(da.min(db)))
        }
        Expr::Pow(a, k) => {
            let (d, b) = size_bound(a);
            let k = u64::from(*k);
            (d.saturating_mul(k), b.saturating_add(d).saturating_mul(k))
        }
    }
}

/// Arithmetic needed to evaluate an expression in some context.
trait Context: Sized + Clone {
    fn num(n: &BigInt) -> Self;
    fn var(v: char) -> Result<Self>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn one() -> Self;
}

fn eval<C: Context>(e: &Expr) -> Result<C> {
    Ok(match e {
        Expr::Num(n) => C::num(n),
        Expr::Var(v) => C::var(*v)?,
        Expr::Neg(a) => eval::<C>(a)?.neg(),
        Expr::Add(a, b) => eval::<C>(a)?.add(&eval(b)?),
        Expr::Sub(a, b) => eval::<C>(a)?.sub(&eval(b)?),
        Expr::Mul(a, b) => eval::<C>(a)?.mul(&eval(b)?),
        Expr::Div(a, b) => eval::<C>(a)?.div(&eval(b)?)?,
        Expr::Pow(a, k) => {
            let base = eval::<C>(a)?;
            let mut acc = C::one();
            for _ in 0..*k {
                acc = acc.mul(&base);
            }
            acc
        }
    })
}

fn unexpected(v: char, what: &str) -> Error {
    Error::Invalid(format!("variable '{v}' is not allowed in {what}"))
}

/// A rational function in the variable `var`.
#[derive(Clone)]
struct InVar<const V: char>(RationalFunction);

impl<const V: char> Context for InVar<V> {
    fn num(n: &BigInt) -> Self {
        Self(RationalFunction::constant(BigRational::from_integer(n.clone())))
    }
    fn var(v: char) -> Result<Self> {
        if v == V {
            Ok(Self(RationalFunction::x()))
        } else {
            Err(unexpected(v, &format!("a rational function of {V}")))
        }
    }
    fn add(&self, o: &Self) -> Self {
        Self(&self.0 + &o.0)
    }
    fn sub(&self, o: &Self) -> Self {
        Self(&self.0 - &o.0)
    }
    fn mul(&self, o: &Self) -> Self {
        Self(&self.0 * &o.0)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        Ok(Self(self.0.checked_div(&o.0)?))
    }
    fn neg(&self) -> Self {
        Self(-&self.0)
    }
    fn one() -> Self {
        Self(RationalFunction::one())
    }
}

impl Context for DifferenceForm {
    fn num(n: &BigInt) -> Self {
        DifferenceForm::scalar(RationalFunction::constant(BigRational::from_integer(n.clone())))
    }
    fn var(v: char) -> Result<Self> {
        match v {
            'x' => Ok(DifferenceForm::scalar(RationalFunction::x())),
            'T' => Ok(DifferenceForm::theta()),
            _ => Err(unexpected(v, "a difference form")),
        }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    /// Right division by a form of order zero.
    fn div(&self, o: &Self) -> Result<Self> {
        match o.order() {
            Some(0) => Ok(self * &DifferenceForm::scalar(o.coeff(0).checked_inv()?)),
            None => Err(Error::DivisionByZero),
            Some(_) => Err(Error::Invalid("division by a form containing T".into())),
        }
    }
    fn neg(&self) -> Self {
        -self
    }
    fn one() -> Self {
        DifferenceForm::one()
    }
}

impl Context for BivariatePolynomial {
    fn num(n: &BigInt) -> Self {
        BivariatePolynomial::constant(RationalFunction::constant(BigRational::from_integer(n.clone())))
    }
    fn var(v: char) -> Result<Self> {
        match v {
            'x' => Ok(BivariatePolynomial::constant(RationalFunction::x())),
            'y' => Ok(BivariatePolynomial::y()),
            _ => Err(unexpected(v, "a polynomial in y")),
        }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Result<Self> {
        match o.degree_y() {
            Some(0) => Ok(self.scale(&o.coeff(0).checked_inv()?)),
            None => Err(Error::DivisionByZero),
            Some(_) => Err(Error::Invalid("division by an expression containing y".into())),
        }
    }
    fn neg(&self) -> Self {
        -self
    }
    fn one() -> Self {
        BivariatePolynomial::constant(RationalFunction::one())
    }
}

/// Rational function of `x`.
pub fn parse_ratfunc(src: &str) -> Result<RationalFunction> {
    Ok(eval::<InVar<'x'>>(&parse(src)?)?.0)
}

pub fn parse_poly(src: &str) -> Result<Polynomial> {
    let r = parse_ratfunc(src)?;
    r.as_polynomial().cloned().ok_or_else(|| Error::Invalid(format!("'{src}' is not a polynomial")))
}

pub fn parse_rational(src: &str) -> Result<BigRational> {
    let r = parse_ratfunc(src)?;
    r.as_constant().ok_or_else(|| Error::Invalid(format!("'{src}' is not a constant")))
}

/// Sequence term as a rational function of `t`, returned in the variable
/// `x` of [`RationalFunction`].
pub fn parse_sequence(src: &str) -> Result<RationalFunction> {
    Ok(eval::<InVar<'t'>>(&parse(src)?)?.0)
}

/// Difference form in `x` and `T`, with `T x = (x + 1) T`.
pub fn parse_form(src: &str) -> Result<DifferenceForm> {
    eval(&parse(src)?)
}

pub fn parse_bivariate(src: &str) -> Result<BivariatePolynomial> {
    eval(&parse(src)?)
}

/// `re` or `re:im` as a double-precision complex number.
pub fn parse_complex(src: &str) -> Result<Complex64> {
    let bad = || Error::Invalid(format!("'{src}' is not a number or re:im pair"));
    let mut parts = src.trim().splitn(2, ':');
    let re: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(s) => s.trim().parse().map_err(|_| bad())?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

/// A matrix entry: exact rational, or complex when written `re:im` or with
/// a decimal point or exponent.
#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Exact(BigRational),
    Numeric(Complex64),
}

/// Rows separated by `;`, entries by `,`: `1,1;0,1`.
pub fn parse_matrix(src: &str) -> Result<Vec<Vec<Entry>>> {
    let rows: Vec<Vec<Entry>> = src
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|e| {
                    let e = e.trim();
                    if e.contains(':') || e.contains('.') || e.contains('e') || e.contains('E') {
                        parse_complex(e).map(Entry::Numeric)
                    } else {
                        parse_rational(e).map(Entry::Exact)
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::NotSquare);
    }
    Ok(rows)
}

/// `a..b`, inclusive.
pub fn parse_window(src: &str) -> Result<(i64, i64)> {
    let bad = || Error::Invalid(format!("'{src}' is not a window a..b"));
    let (a, b) = src.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if b < a {
        return Err(bad());
    }
    Ok((a, b))
}

/// Operator expressions on truncated polynomial spaces:
///
/// ```text
/// op     := oterm (("+" | "-") oterm)*
/// oterm  := ofact ("*" ofact)*
/// ofact  := number ("/" number)? | "I" | "D" | "T" | "S[" poly "]"
///         | "M[" poly "]" | "F[" form "]" | "(" op ")"
/// ```
///
/// `*` is composition; a number is a scalar multiple of the identity.
pub fn parse_operator(src: &str, n: usize) -> Result<TruncatedOperator> {
    if n > MAX_TRUNCATION {
        return Err(Error::TooLarge(format!("truncation {n} exceeds {MAX_TRUNCATION}")));
    }
    if src.len() > MAX_TOKENS {
        return Err(Error::TooLarge(format!("operator longer than {MAX_TOKENS} bytes")));
    }
    let mut p = OpParser { src, pos: 0, n, depth: 0 };
    let op = p.op()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(Error::Syntax { offset: p.pos, expected: "operator or end of input".into() });
    }
    Ok(op.with_label(src.trim()))
}

struct OpParser<'a> {
    src: &'a str,
    pos: usize,
    n: usize,
    depth: usize,
}

impl OpParser<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn err<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax { offset: self.pos, expected: expected.into() })
    }

    fn op(&mut self) -> Result<TruncatedOperator> {
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            self.oterm()?.scale(&-BigRational::one())
        } else {
            self.oterm()?
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.oterm()?)?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.oterm()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn oterm(&mut self) -> Result<TruncatedOperator> {
        let mut acc = self.ofact()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.compose(&self.ofact()?)?;
        }
        Ok(acc)
    }

    fn bracket(&mut self) -> Result<(usize, &str)> {
        if self.peek() != Some('[') {
            return self.err("'['");
        }
        let start = self.pos + 1;
        let Some(len) = self.src[start..].find(']') else {
            return Err(Error::Syntax { offset: self.src.len(), expected: "']'".into() });
        };
        self.pos = start + len + 1;
        Ok((start, &self.src[start..start + len]))
    }

    fn shift_offset(e: Error, base: usize) -> Error {
        match e {
            Error::Syntax { offset, expected } => Error::Syntax { offset: offset + base, expected },
            e => e,
        }
    }

    fn ofact(&mut self) -> Result<TruncatedOperator> {
        let n = self.n;
        let Some(c) = self.peek() else {
            return self.err("operator");
        };
        match c {
            '0'..='9' => {
                let start = self.pos;
                let end = self.src[start..].find(|ch: char| !ch.is_ascii_digit() && ch != '/').map_or(self.src.len(), |k| start + k);
                self.pos = end;
                let r = parse_rational(&self.src[start..end]).map_err(|e| Self::shift_offset(e, start))?;
                Ok(TruncatedOperator::identity(n).scale(&r))
            }
            'I' => {
                self.pos += 1;
                Ok(TruncatedOperator::identity(n))
            }
            'D' => {
                self.pos += 1;
                Ok(TruncatedOperator::derivative(n))
            }
            'T' => {
                self.pos += 1;
                Ok(TruncatedOperator::theta(n))
            }
            'S' | 'M' | 'F' => {
                self.pos += 1;
                let (base, inner) = self.bracket()?;
                let inner = inner.to_string();
                let wrap = |e| Self::shift_offset(e, base);
                match c {
                    'S' => Ok(TruncatedOperator::substitution(n, &parse_poly(&inner).map_err(wrap)?)),
                    'M' => Ok(TruncatedOperator::multiplication(n, &parse_poly(&inner).map_err(wrap)?)),
                    _ => TruncatedOperator::from_difference_form(n, &parse_form(&inner).map_err(wrap)?),
                }
            }
            '(' => {
                self.pos += 1;
                self.depth += 1;
                if self.depth > MAX_DEPTH {
                    return Err(Error::TooLarge(format!("nesting deeper than {MAX_DEPTH}")));
                }
                let inner = self.op()?;
                self.depth -= 1;
                if self.peek() != Some(')') {
                    return self.err("')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => self.err("number, I, D, T, S[..], M[..], F[..] or '('"),
        }
    }
}
