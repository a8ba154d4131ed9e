//! Exact coefficient fields: rationals, prime fields, rational functions in a
//! transcendental `q`, and cyclotomic quotients (over the rationals or over a
//! prime field), plus grading twists.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{self, Rationals, Residues};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("invalid field specification: {0}")]
    InvalidSpec(String),
    #[error("cannot parse scalar literal `{literal}`: {reason}")]
    Parse { literal: String, reason: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("the symbol q has no value in field {0}")]
    NoQ(String),
    #[error("twist dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("twist entry ({0}, {1}) is zero")]
    ZeroTwistEntry(usize, usize),
    #[error("order of zero is undefined")]
    ZeroOrder,
}

/// Exact field element. The representation is canonical, so derived
/// equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
    /// Polynomial in q reduced mod the cyclotomic polynomial, rational coefficients.
    Cyc(Vec<BigRational>),
    /// Same over a prime field.
    CycMod(Vec<u64>),
    /// Reduced fraction of integer polynomials in q.
    Frac(Vec<BigInt>, Vec<BigInt>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Rationals,
    Prime(u64),
    RatFunc,
    Cyclotomic(u64),
    CyclotomicMod { p: u64, r: u64 },
}

#[derive(Debug)]
struct Inner {
    kind: Kind,
    q: Option<Scalar>,
    modulus_q: Vec<BigRational>,
    modulus_p: Vec<u64>,
}

/// Field handle; cheap to clone and shareable across threads.
#[derive(Clone, Debug)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.kind == other.0.kind && self.0.q == other.0.q
    }
}

impl Eq for Field {}

/// JSON form of a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn divisors(n: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (1..=n).take_while(|d| d * d <= n).filter(|d| n % d == 0).collect();
    let big: Vec<u64> = v.iter().rev().map(|d| n / d).filter(|e| e * e != n).collect();
    v.extend(big);
    v
}

fn mod_bigint(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn rat_mod(x: &BigRational, p: u64) -> Option<u64> {
    let d = mod_bigint(x.denom(), p);
    let inv = poly::mod_inv(d, p)?;
    Some(((mod_bigint(x.numer(), p) as u128 * inv as u128) % p as u128) as u64)
}

impl Field {
    fn build(kind: Kind) -> Result<Field, FieldError> {
        let (modulus_q, modulus_p) = match kind {
            Kind::Prime(p) if !is_prime(p) || p >= 1 << 32 => {
                return Err(FieldError::InvalidSpec(format!("{p} is not a supported prime")));
            }
            Kind::Cyclotomic(0) | Kind::CyclotomicMod { r: 0, .. } => {
                return Err(FieldError::InvalidSpec("r must be at least 1".into()));
            }
            Kind::Cyclotomic(r) => (poly::cyclotomic(r), Vec::new()),
            Kind::CyclotomicMod { p, r } => {
                if !is_prime(p) || p >= 1 << 32 {
                    return Err(FieldError::InvalidSpec(format!("{p} is not a supported prime")));
                }
                let phi = poly::cyclotomic(r);
                let deg = phi.len() as u64 - 1;
                // Phi_r stays irreducible mod p exactly when p has order phi(r) mod r.
                let ord = if r == 1 {
                    Some(1)
                } else if p % r == 0 || r % p == 0 {
                    None
                } else {
                    (1..=r).find(|&k| {
                        let mut x = 1u64;
                        for _ in 0..k {
                            x = x * (p % r) % r;
                        }
                        x == 1
                    })
                };
                if ord != Some(deg) {
                    return Err(FieldError::InvalidSpec(format!(
                        "cyclotomic polynomial of order {r} is reducible mod {p}"
                    )));
                }
                let m = phi.iter().map(|c| rat_mod(c, p).unwrap()).collect();
                (Vec::new(), m)
            }
            _ => (Vec::new(), Vec::new()),
        };
        Ok(Field(Arc::new(Inner { kind, q: None, modulus_q, modulus_p })))
    }

    pub fn rationals() -> Field {
        Field::build(Kind::Rationals).unwrap()
    }

    pub fn prime(p: u64) -> Result<Field, FieldError> {
        Field::build(Kind::Prime(p))
    }

    /// Rational functions in a transcendental q.
    pub fn rational_functions() -> Field {
        Field::build(Kind::RatFunc).unwrap()
    }

    /// Rationals adjoined a primitive r-th root of unity q.
    pub fn cyclotomic(r: u64) -> Result<Field, FieldError> {
        Field::build(Kind::Cyclotomic(r))
    }

    /// F_p adjoined a primitive r-th root of unity q; requires the cyclotomic
    /// polynomial to stay irreducible mod p.
    pub fn cyclotomic_mod(p: u64, r: u64) -> Result<Field, FieldError> {
        Field::build(Kind::CyclotomicMod { p, r })
    }

    /// Assign a value to the symbol q (rationals and prime fields).
    pub fn with_q(&self, q: &str) -> Result<Field, FieldError> {
        if !matches!(self.0.kind, Kind::Rationals | Kind::Prime(_)) {
            return Err(FieldError::InvalidSpec("q is already intrinsic to this field".into()));
        }
        let v = self.parse(q)?;
        if self.is_zero(&v) {
            return Err(FieldError::InvalidSpec("q must be nonzero".into()));
        }
        let mut inner = Inner {
            kind: self.0.kind.clone(),
            q: Some(v),
            modulus_q: Vec::new(),
            modulus_p: Vec::new(),
        };
        inner.modulus_q.clone_from(&self.0.modulus_q);
        Ok(Field(Arc::new(inner)))
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field, FieldError> {
        let base = match spec.kind.as_str() {
            "Q" => Field::rationals(),
            "Fp" => Field::prime(
                spec.p.ok_or_else(|| FieldError::InvalidSpec("Fp requires p".into()))?,
            )?,
            "Qq" => Field::rational_functions(),
            "cyclotomic" => {
                let r = spec.r.ok_or_else(|| FieldError::InvalidSpec("cyclotomic requires r".into()))?;
                match spec.p {
                    Some(p) => Field::cyclotomic_mod(p, r)?,
                    None => Field::cyclotomic(r)?,
                }
            }
            other => return Err(FieldError::InvalidSpec(format!("unknown kind `{other}`"))),
        };
        match &spec.q {
            Some(q) if matches!(spec.kind.as_str(), "Q" | "Fp") => base.with_q(q),
            Some(_) => Err(FieldError::InvalidSpec("q value only allowed for Q and Fp".into())),
            None => Ok(base),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        let q = self.0.q.as_ref().map(|v| self.render(v));
        let (kind, p, r) = match self.0.kind {
            Kind::Rationals => ("Q", None, None),
            Kind::Prime(p) => ("Fp", Some(p), None),
            Kind::RatFunc => ("Qq", None, None),
            Kind::Cyclotomic(r) => ("cyclotomic", None, Some(r)),
            Kind::CyclotomicMod { p, r } => ("cyclotomic", Some(p), Some(r)),
        };
        FieldSpec { kind: kind.into(), p, r, q }
    }

    /// Short name such as `Q(q)`, `Q, q = -1` or `F_2(zeta_3)`.
    pub fn describe(&self) -> String {
        let base = match self.0.kind {
            Kind::Rationals => "Q".to_string(),
            Kind::Prime(p) => format!("F_{p}"),
            Kind::RatFunc => "Q(q)".to_string(),
            Kind::Cyclotomic(r) => format!("Q(zeta_{r})"),
            Kind::CyclotomicMod { p, r } => format!("F_{p}(zeta_{r})"),
        };
        match &self.0.q {
            Some(q) => format!("{base}, q = {}", self.render(q)),
            None => base,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self.0.kind {
            Kind::Prime(p) | Kind::CyclotomicMod { p, .. } => p,
            _ => 0,
        }
    }

    /// Value of the symbol q, if the field has one.
    pub fn q(&self) -> Result<Scalar, FieldError> {
        match self.0.kind {
            Kind::RatFunc => Ok(Scalar::Frac(vec![BigInt::zero(), BigInt::one()], vec![BigInt::one()])),
            Kind::Cyclotomic(_) => {
                Ok(self.cyc_q(poly::trim(&Rationals, vec![BigRational::zero(), BigRational::one()])))
            }
            Kind::CyclotomicMod { .. } => Ok(self.cycp(vec![0, 1])),
            _ => self.0.q.clone().ok_or_else(|| FieldError::NoQ(self.to_string())),
        }
    }

    /// Whether q is a transcendental (generic) parameter.
    pub fn q_is_generic(&self) -> bool {
        self.0.kind == Kind::RatFunc
    }

    fn cyc_q(&self, v: Vec<BigRational>) -> Scalar {
        Scalar::Cyc(poly::rem(&Rationals, &v, &self.0.modulus_q))
    }

    fn cycp(&self, v: Vec<u64>) -> Scalar {
        let c = Residues(self.characteristic());
        let v = poly::trim(&c, v.into_iter().map(|x| x % c.0).collect());
        Scalar::CycMod(poly::rem(&c, &v, &self.0.modulus_p))
    }

    fn frac(&self, n: &[BigRational], d: &[BigRational]) -> Scalar {
        let (n, d) = poly::canonical_fraction(n, d);
        Scalar::Frac(n, d)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self.0.kind {
            Kind::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            Kind::Prime(p) => Scalar::Mod(mod_bigint(n, p)),
            Kind::RatFunc => {
                if n.is_zero() {
                    Scalar::Frac(Vec::new(), vec![BigInt::one()])
                } else {
                    Scalar::Frac(vec![n.clone()], vec![BigInt::one()])
                }
            }
            Kind::Cyclotomic(_) => {
                Scalar::Cyc(poly::trim(&Rationals, vec![BigRational::from_integer(n.clone())]))
            }
            Kind::CyclotomicMod { p, .. } => self.cycp(vec![mod_bigint(n, p)]),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Mod(x) => *x == 0,
            Scalar::Cyc(v) => v.is_empty(),
            Scalar::CycMod(v) => v.is_empty(),
            Scalar::Frac(n, _) => n.is_empty(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % self.characteristic()),
            (Scalar::Cyc(x), Scalar::Cyc(y)) => Scalar::Cyc(poly::add(&Rationals, x, y)),
            (Scalar::CycMod(x), Scalar::CycMod(y)) => {
                Scalar::CycMod(poly::add(&Residues(self.characteristic()), x, y))
            }
            (Scalar::Frac(n1, d1), Scalar::Frac(n2, d2)) => {
                if d1 == d2 && d1.len() == 1 && d1[0].is_one() {
                    let c = Rationals;
                    let s = poly::add(&c, &poly::int_poly_to_rat(n1), &poly::int_poly_to_rat(n2));
                    return self.frac(&s, &[BigRational::one()]);
                }
                let c = Rationals;
                let (n1, d1, n2, d2) = (
                    poly::int_poly_to_rat(n1),
                    poly::int_poly_to_rat(d1),
                    poly::int_poly_to_rat(n2),
                    poly::int_poly_to_rat(d2),
                );
                let n = poly::add(&c, &poly::mul(&c, &n1, &d2), &poly::mul(&c, &n2, &d1));
                self.frac(&n, &poly::mul(&c, &d1, &d2))
            }
            _ => panic!("scalars from different fields"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Mod(x) => {
                let p = self.characteristic();
                Scalar::Mod((p - x) % p)
            }
            Scalar::Cyc(v) => Scalar::Cyc(poly::neg(&Rationals, v)),
            Scalar::CycMod(v) => Scalar::CycMod(poly::neg(&Residues(self.characteristic()), v)),
            Scalar::Frac(n, d) => Scalar::Frac(n.iter().map(|x| -x).collect(), d.clone()),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % self.characteristic() as u128) as u64)
            }
            (Scalar::Cyc(x), Scalar::Cyc(y)) => self.cyc_q(poly::mul(&Rationals, x, y)),
            (Scalar::CycMod(x), Scalar::CycMod(y)) => {
                let c = Residues(self.characteristic());
                Scalar::CycMod(poly::rem(&c, &poly::mul(&c, x, y), &self.0.modulus_p))
            }
            (Scalar::Frac(n1, d1), Scalar::Frac(n2, d2)) => {
                if n1.is_empty() || n2.is_empty() {
                    return self.zero();
                }
                let c = Rationals;
                let n = poly::mul(&c, &poly::int_poly_to_rat(n1), &poly::int_poly_to_rat(n2));
                let d = poly::mul(&c, &poly::int_poly_to_rat(d1), &poly::int_poly_to_rat(d2));
                self.frac(&n, &d)
            }
            _ => panic!("scalars from different fields"),
        }
    }

    pub fn try_inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        Some(match a {
            Scalar::Rat(x) => Scalar::Rat(x.recip()),
            Scalar::Mod(x) => Scalar::Mod(poly::mod_inv(*x, self.characteristic())?),
            Scalar::Cyc(v) => Scalar::Cyc(poly::inv_mod(&Rationals, v, &self.0.modulus_q)?),
            Scalar::CycMod(v) => {
                let c = Residues(self.characteristic());
                Scalar::CycMod(poly::inv_mod(&c, v, &self.0.modulus_p)?)
            }
            Scalar::Frac(n, d) => {
                self.frac(&poly::int_poly_to_rat(d), &poly::int_poly_to_rat(n))
            }
        })
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        self.try_inv(a).expect("inverse of zero")
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, FieldError> {
        let inv = self.try_inv(b).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(a, &inv))
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, a: &Scalar, e: i64) -> Scalar {
        let mut base = if e < 0 { self.inv(a) } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Least n ≥ 1 with s^n = 1, or `None` when the order is infinite.
    pub fn order(&self, s: &Scalar) -> Result<Option<u64>, FieldError> {
        if self.is_zero(s) {
            return Err(FieldError::ZeroOrder);
        }
        let bound = match self.0.kind {
            Kind::Rationals | Kind::RatFunc => 2,
            Kind::Prime(p) => p - 1,
            Kind::Cyclotomic(r) => 2 * r,
            Kind::CyclotomicMod { p, .. } => {
                let d = self.0.modulus_p.len() as u32 - 1;
                p.checked_pow(d).expect("field too large") - 1
            }
        };
        Ok(divisors(bound).into_iter().find(|&d| self.is_one(&self.pow(s, d as i64))))
    }

    pub fn render(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rat(x) => x.to_string(),
            Scalar::Mod(x) => x.to_string(),
            Scalar::Cyc(v) => render_poly(v),
            Scalar::CycMod(v) => {
                render_poly(&v.iter().map(|x| BigRational::from_integer((*x).into())).collect::<Vec<_>>())
            }
            Scalar::Frac(n, d) => {
                let n = render_poly(&poly::int_poly_to_rat(n));
                if d.len() == 1 && d[0].is_one() {
                    return n;
                }
                let terms = |v: &[BigInt]| v.iter().filter(|x| !x.is_zero()).count();
                let Scalar::Frac(nn, _) = a else { unreachable!() };
                let ns = if terms(nn) > 1 { format!("({n})") } else { n };
                let ds = render_poly(&poly::int_poly_to_rat(d));
                let ds = if terms(d) > 1 || ds.contains('*') { format!("({ds})") } else { ds };
                format!("{ns}/{ds}")
            }
        }
    }

    /// Parse a scalar literal: integers, fractions, and polynomial
    /// expressions in q with + - * / ^ and parentheses.
    pub fn parse(&self, s: &str) -> Result<Scalar, FieldError> {
        let mut p = Parser { field: self, src: s, toks: tokenize(s)?, pos: 0 };
        let v = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(v)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.kind {
            Kind::Rationals => write!(f, "Q")?,
            Kind::Prime(p) => write!(f, "F_{p}")?,
            Kind::RatFunc => write!(f, "Q(q)")?,
            Kind::Cyclotomic(r) => write!(f, "Q(zeta_{r})")?,
            Kind::CyclotomicMod { p, r } => write!(f, "F_{p}(zeta_{r})")?,
        }
        if let Some(q) = &self.0.q {
            write!(f, " with q = {}", self.render(q))?;
        }
        Ok(())
    }
}

fn render_poly(v: &[BigRational]) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in v.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let mono = match k {
            0 => String::new(),
            1 => "q".into(),
            _ => format!("q^{k}"),
        };
        if mono.is_empty() {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{a}*{mono}"));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Q,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, FieldError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().unwrap()));
        } else if c == 'q' {
            out.push(Tok::Q);
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(FieldError::Parse {
                literal: s.into(),
                reason: format!("unexpected character `{c}`"),
            });
        }
    }
    if out.is_empty() {
        return Err(FieldError::Parse { literal: s.into(), reason: "empty literal".into() });
    }
    Ok(out)
}

struct Parser<'a> {
    field: &'a Field,
    src: &'a str,
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, reason: &str) -> FieldError {
        FieldError::Parse { literal: self.src.into(), reason: reason.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<Scalar, FieldError> {
        let k = self.field;
        let mut acc: Option<Scalar> = None;
        loop {
            let sign = match self.peek() {
                Some(Tok::Op('+')) => {
                    self.pos += 1;
                    false
                }
                Some(Tok::Op('-')) => {
                    self.pos += 1;
                    true
                }
                _ if acc.is_none() => false,
                _ => break,
            };
            let t = self.term()?;
            let t = if sign { k.neg(&t) } else { t };
            acc = Some(match acc {
                None => t,
                Some(a) => k.add(&a, &t),
            });
        }
        Ok(acc.unwrap())
    }

    fn term(&mut self) -> Result<Scalar, FieldError> {
        let k = self.field;
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = k.mul(&acc, &self.factor()?);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let d = self.factor()?;
                    acc = k.div(&acc, &d).map_err(|_| self.err("division by zero"))?;
                }
                Some(Tok::Num(_)) | Some(Tok::Q) | Some(Tok::Op('(')) => {
                    acc = k.mul(&acc, &self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Scalar, FieldError> {
        let k = self.field;
        let base = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                k.from_bigint(&n)
            }
            Some(Tok::Q) => {
                self.pos += 1;
                k.q().map_err(|_| self.err("the symbol q has no value in this field"))?
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(self.err("missing `)`"));
                }
                self.pos += 1;
                v
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                return Ok(k.neg(&self.factor()?));
            }
            _ => return Err(self.err("expected a number, q, or `(`")),
        };
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            true
        } else {
            false
        };
        let Some(Tok::Num(e)) = self.peek().cloned() else {
            return Err(self.err("exponent must be an integer"));
        };
        self.pos += 1;
        let e = e.to_i64().ok_or_else(|| self.err("exponent too large"))?;
        if neg && k.is_zero(&base) {
            return Err(self.err("division by zero"));
        }
        Ok(k.pow(&base, if neg { -e } else { e }))
    }
}

/// Bicharacter on ℤ^m × ℤ^n given by invertible entries t_uv.
#[derive(Clone, Debug)]
pub struct Twist {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Scalar>>,
}

impl Twist {
    pub fn new(field: &Field, entries: Vec<Vec<Scalar>>) -> Result<Twist, FieldError> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        for (u, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(FieldError::DimensionMismatch { expected: cols, got: row.len() });
            }
            for (v, e) in row.iter().enumerate() {
                if field.is_zero(e) {
                    return Err(FieldError::ZeroTwistEntry(u, v));
                }
            }
        }
        Ok(Twist { field: field.clone(), rows, cols, entries })
    }

    pub fn trivial(field: &Field, rows: usize, cols: usize) -> Twist {
        Twist::new(field, vec![vec![field.one(); cols]; rows]).unwrap()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn entry(&self, u: usize, v: usize) -> &Scalar {
        &self.entries[u][v]
    }

    /// t^{<a|b>} = ∏ t_uv^{a_u b_v}.
    pub fn eval(&self, a: &[i64], b: &[i64]) -> Result<Scalar, FieldError> {
        if a.len() != self.rows {
            return Err(FieldError::DimensionMismatch { expected: self.rows, got: a.len() });
        }
        if b.len() != self.cols {
            return Err(FieldError::DimensionMismatch { expected: self.cols, got: b.len() });
        }
        let k = &self.field;
        let mut acc = k.one();
        for (u, au) in a.iter().enumerate() {
            for (v, bv) in b.iter().enumerate() {
                let e = au * bv;
                if e != 0 {
                    acc = k.mul(&acc, &k.pow(&self.entries[u][v], e));
                }
            }
        }
        Ok(acc)
    }
}
