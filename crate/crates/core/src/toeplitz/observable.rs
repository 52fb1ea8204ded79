//! Real polynomial observables in the Cartesian coordinates of the unit
//! sphere.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exponents `(a, b, c)` of `x1^a x2^b x3^c`.
pub type Monomial = (u32, u32, u32);

/// `sum c_{abc} x1^a x2^b x3^c` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Observable {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Observable {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial((0, 0, 0), BigRational::from_integer(c.into()))
    }

    /// The coordinate function `x_i`, `i` in `1..=3`.
    pub fn coordinate(i: u8) -> Self {
        let m = match i {
            1 => (1, 0, 0),
            2 => (0, 1, 0),
            3 => (0, 0, 1),
            _ => panic!("coordinate index must be 1, 2 or 3"),
        };
        Self::monomial(m, BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut o = Self::zero();
        if !c.is_zero() {
            o.terms.insert(m, c);
        }
        o
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(a, b, c)| a + b + c).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let e = out.terms.entry(*m).or_insert_with(BigRational::zero);
            *e += c;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = Self::zero();
        if s.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(*m, c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a1, b1, c1), x) in &self.terms {
            for ((a2, b2, c2), y) in &other.terms {
                let e = out
                    .terms
                    .entry((a1 + a2, b1 + b2, c1 + c2))
                    .or_insert_with(BigRational::zero);
                *e += x * y;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(1), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(&(a, b, c), coef)| {
                coef.to_f64().unwrap_or(f64::NAN) * x[0].powi(a as i32) * x[1].powi(b as i32) * x[2].powi(c as i32)
            })
            .sum()
    }

    /// Value at spherical angles (polar `theta`, azimuth `phi`).
    pub fn eval_angles(&self, theta: f64, phi: f64) -> f64 {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        self.eval([st * cp, st * sp, ct])
    }

    /// Average over the sphere (total mass 1), exact.
    pub fn integral(&self) -> BigRational {
        self.terms
            .iter()
            .map(|(m, c)| c * monomial_average(*m))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `sup |f|` over the sphere from a dense angular grid followed by a
    /// shrinking pattern search around the best grid points.
    pub fn sup_norm(&self) -> f64 {
        const NT: usize = 181;
        const NP: usize = 360;
        let pi = std::f64::consts::PI;
        let mut samples: Vec<(f64, f64, f64)> = Vec::with_capacity(NT * NP);
        for i in 0..NT {
            let theta = pi * i as f64 / (NT - 1) as f64;
            for j in 0..NP {
                let phi = 2.0 * pi * j as f64 / NP as f64;
                samples.push((self.eval_angles(theta, phi).abs(), theta, phi));
            }
        }
        samples.sort_by(|a, b| b.0.total_cmp(&a.0));
        let step0 = pi / (NT - 1) as f64;
        samples
            .iter()
            .take(12)
            .map(|&(v, t, p)| self.refine_max(v, t, p, step0))
            .fold(0.0, f64::max)
    }

    fn refine_max(&self, mut best: f64, mut t: f64, mut p: f64, mut step: f64) -> f64 {
        let f = |t: f64, p: f64| self.eval_angles(t, p).abs();
        while step > 1e-12 {
            let mut moved = false;
            for (dt, dp) in [
                (1.0, 0.0),
                (-1.0, 0.0),
                (0.0, 1.0),
                (0.0, -1.0),
                (1.0, 1.0),
                (-1.0, -1.0),
                (1.0, -1.0),
                (-1.0, 1.0),
            ] {
                let (nt, np) = (t + dt * step, p + dp * step);
                let v = f(nt, np);
                if v > best {
                    best = v;
                    t = nt;
                    p = np;
                    moved = true;
                }
            }
            if !moved {
                step /= 2.0;
            }
        }
        best
    }
}

fn double_factorial_odd(m: i64) -> BigInt {
    // (m)!! for odd m >= -1, with (-1)!! = 1
    let mut acc = BigInt::one();
    let mut x = m;
    while x > 1 {
        acc *= x;
        x -= 2;
    }
    acc
}

/// Sphere average of `x1^a x2^b x3^c`: zero unless all exponents are even,
/// otherwise `(a-1)!! (b-1)!! (c-1)!! / (a+b+c+1)!!`.
pub fn monomial_average((a, b, c): Monomial) -> BigRational {
    if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
        return BigRational::zero();
    }
    let num =
        double_factorial_odd(a as i64 - 1) * double_factorial_odd(b as i64 - 1) * double_factorial_odd(c as i64 - 1);
    BigRational::new(num, double_factorial_odd((a + b + c) as i64 + 1))
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(a, b, c), coef)) in self.terms.iter().enumerate() {
            let sign = match (i, coef.is_negative()) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            write!(f, "{sign}")?;
            let mag = coef.abs();
            let mut parts = Vec::new();
            if !mag.is_one() || (a, b, c) == (0, 0, 0) {
                parts.push(mag.to_string());
            }
            for (v, e) in [("x1", a), ("x2", b), ("x3", c)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for Observable {
    type Err = Error;

    /// Polynomial syntax: `x1`, `x2`, `x3`, integer or `p/q` coefficients,
    /// `+ - * ^` and parentheses, e.g. `1/2*x1^2 - (x3 + 1)^2`.
    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut parser = Parser { tokens, pos: 0, src: s };
        let out = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Var(u8),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Token::Op(c));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Token::Num(digits.parse().expect("ascii digits")));
            }
            'x' | 'X' => match chars.get(i + 1) {
                Some(d @ '1'..='3') => {
                    out.push(Token::Var(*d as u8 - b'0'));
                    i += 2;
                }
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "expected x1, x2 or x3 in observable '{s}'"
                    )))
                }
            },
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unexpected character '{c}' in observable '{s}'"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::InvalidInput(format!("{what} at token {} of observable '{}'", self.pos, self.src))
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Observable> {
        let mut acc = match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                self.term()?.scale(&BigRational::from_integer((-1).into()))
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == '+' {
                acc.add(&t)
            } else {
                acc.add(&t.scale(&BigRational::from_integer((-1).into())))
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Observable> {
        let mut acc = self.power()?;
        loop {
            match self.tokens.get(self.pos) {
                Some(Token::Op('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                // juxtaposition: `2 x1`, `x1 x2`, `3(x1 + 1)`
                Some(Token::Num(_) | Token::Var(_) | Token::Op('(')) => acc = acc.mul(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Observable> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some(Token::Num(e)) => {
                    let e = e.to_u32().ok_or_else(|| self.error("exponent too large"))?;
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                _ => Err(self.error("expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Observable> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(p)) => {
                self.pos += 1;
                let mut value = BigRational::from_integer(p);
                if self.peek_op() == Some('/') {
                    self.pos += 1;
                    match self.tokens.get(self.pos) {
                        Some(Token::Num(q)) if !q.is_zero() => {
                            value /= BigRational::from_integer(q.clone());
                            self.pos += 1;
                        }
                        _ => return Err(self.error("expected a nonzero denominator")),
                    }
                }
                Ok(Observable::monomial((0, 0, 0), value))
            }
            Some(Token::Var(i)) => {
                self.pos += 1;
                Ok(Observable::coordinate(i))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}
