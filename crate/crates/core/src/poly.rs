//! Univariate polynomials and rational functions over `Q`, with a parser for
//! the curve file grammar.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, Q};

/// Coefficients low degree first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(q(1))
    }

    /// `t`.
    pub fn var() -> Self {
        Poly::new(vec![q(0), q(1)])
    }

    /// `(t - c)^e`.
    pub fn linear_power(c: &Q, e: u32) -> Self {
        Poly::new(vec![-c.clone(), q(1)]).pow(e)
    }

    pub fn monomial(e: usize) -> Self {
        let mut v = vec![q(0); e + 1];
        v[e] = q(1);
        Poly(v)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.0.len() {
            0 => Some(Q::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(Q::zero);
                    let b = other.0.get(i).cloned().unwrap_or_else(Q::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead_inv = d.lead().recip();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Coefficients of `(t - c)^k` for `k < order`.
    pub fn taylor(&self, c: &Q, order: usize) -> Vec<Q> {
        let mut cur = self.0.clone();
        let mut out = Vec::with_capacity(order);
        for _ in 0..order {
            if cur.is_empty() {
                out.push(Q::zero());
                continue;
            }
            // synthetic division by (t - c)
            let mut next = vec![Q::zero(); cur.len() - 1];
            let mut acc = Q::zero();
            for i in (0..cur.len()).rev() {
                acc = acc * c + &cur[i];
                if i > 0 {
                    next[i - 1] = acc.clone();
                }
            }
            out.push(acc);
            cur = next;
        }
        out
    }

    /// Multiplicity of `c` as a root.
    pub fn order_at(&self, c: &Q) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let t = self.taylor(c, self.0.len());
        t.iter().position(|x| !x.is_zero())
    }

    /// Distinct rational roots, sorted.
    pub fn rational_roots(&self) -> Result<Vec<Q>> {
        if self.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        let ints = integer_coefficients(self);
        let mut roots = Vec::new();
        let low = ints.iter().position(|c| !c.is_zero()).unwrap();
        if low > 0 {
            roots.push(Q::zero());
        }
        let a0 = ints[low].abs();
        let an = ints.last().unwrap().abs();
        let ps = divisors(&a0)?;
        let qs = divisors(&an)?;
        for p in &ps {
            for d in &qs {
                for sign in [1, -1] {
                    let r = Q::new(BigInt::from(sign) * p, d.clone());
                    if !roots.contains(&r) && self.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        Ok(roots)
    }

    /// Splits into `(c, multiplicity)` over the rational roots and a cofactor
    /// without rational roots.
    pub fn split_rational(&self) -> Result<(Vec<(Q, u32)>, Poly)> {
        let mut rest = self.clone();
        let mut out = Vec::new();
        for r in self.rational_roots()? {
            let lin = Poly::linear_power(&r, 1);
            let mut e = 0;
            loop {
                let (qt, rm) = rest.div_rem(&lin);
                if !rm.is_zero() {
                    break;
                }
                rest = qt;
                e += 1;
            }
            out.push((r, e));
        }
        Ok((out, rest))
    }
}

fn integer_coefficients(p: &Poly) -> Vec<BigInt> {
    let l = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.0.iter()
        .map(|c| (c * Q::from_integer(l.clone())).to_integer())
        .collect()
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.to_u64().filter(|&n| n <= 1 << 40).ok_or_else(|| {
        Error::UnsupportedModel(format!("coefficient {n} too large for root search"))
    })?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Ok(out)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

/// `num / den` with `den` monic and the pair coprime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let g = if g.is_zero() { Poly::one() } else { g };
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let l = den.lead().recip();
        Ok(RatFunc {
            num: num.scale(&l),
            den: den.scale(&l),
        })
    }

    pub fn poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        (self.den.degree() == Some(0)).then_some(&self.num)
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .unwrap()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.num.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Order of vanishing at `c` (negative for a pole).
    pub fn order_at(&self, c: &Q) -> Option<i64> {
        let n = self.num.order_at(c)? as i64;
        Some(n - self.den.order_at(c).unwrap() as i64)
    }

    /// Pole order at infinity, `deg num - deg den` (negative for a zero).
    pub fn pole_at_infinity(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap() as i64)
    }

    /// Laurent coefficients at `c`: returns `(v, coeffs)` with
    /// `f = Σ coeffs[k] (t-c)^(v+k)` for `k < len`.
    pub fn laurent(&self, c: &Q, len: usize) -> (i64, Vec<Q>) {
        let e = self.den.order_at(c).unwrap();
        let den_rest = self.den.div_rem(&Poly::linear_power(c, e as u32)).0;
        let n = self.num.taylor(c, len);
        let d = den_rest.taylor(c, len);
        (-(e as i64), series_div(&n, &d))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// `a / b` as truncated power series; `b[0]` must be nonzero.
pub fn series_div(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len();
    let inv = b[0].recip();
    let mut out: Vec<Q> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = a[k].clone();
        for j in 1..=k.min(b.len() - 1) {
            if !b[j].is_zero() {
                acc -= &b[j] * &out[k - j];
            }
        }
        out.push(acc * &inv);
    }
    out
}

/// Truncated product of two power series of the same length.
pub fn series_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len();
    let mut out = vec![Q::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().take(n - i).enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Parses `+ - * / ^`, parentheses, integers, decimals-free rationals via `/`
/// and the variable `t` (or `x`).
pub fn parse(input: &str) -> Result<RatFunc> {
    let mut p = Parser {
        s: input.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

/// Parses a polynomial; rejects a nonconstant denominator.
pub fn parse_poly(input: &str) -> Result<Poly> {
    let f = parse(input)?;
    match f.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(Error::Parse {
            pos: 0,
            msg: format!("`{input}` is not a polynomial"),
        }),
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' {
                acc.add(&rhs)
            } else {
                acc.add(&rhs.neg())
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.unary()?;
            acc = if op == b'*' {
                acc.mul(&rhs)
            } else {
                acc.div(&rhs).map_err(|_| Error::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = e
                .to_u32()
                .filter(|&e| e <= 4096)
                .ok_or_else(|| self.err("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b't' | b'x') => {
                self.pos += 1;
                Ok(RatFunc::poly(Poly::var()))
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatFunc::poly(Poly::constant(Q::from_integer(n))))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}
