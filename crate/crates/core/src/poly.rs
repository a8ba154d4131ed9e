//! Dense univariate polynomials over a coefficient field, used to realize
//! cyclotomic quotients and rational functions in `q`.
//!
//! Coefficients are stored low degree first and always trimmed, so the zero
//! polynomial is the empty vector.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) trait Coeffs {
    type E: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

/// Rational coefficients.
pub(crate) struct Rationals;

impl Coeffs for Rationals {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

/// Residues modulo a prime `p < 2^32`.
pub(crate) struct Residues(pub u64);

impl Coeffs for Residues {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        mod_inv(*a, self.0).expect("inverse of zero residue")
    }
}

pub(crate) fn mod_inv(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (s0, s1) = (s1, s0 - qt * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(p as i128) as u64)
}

pub(crate) fn trim<C: Coeffs>(c: &C, mut v: Vec<C::E>) -> Vec<C::E> {
    while v.last().is_some_and(|x| c.is_zero(x)) {
        v.pop();
    }
    v
}

pub(crate) fn add<C: Coeffs>(c: &C, a: &[C::E], b: &[C::E]) -> Vec<C::E> {
    let n = a.len().max(b.len());
    let zero = c.zero();
    let v = (0..n)
        .map(|i| c.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(c, v)
}

pub(crate) fn neg<C: Coeffs>(c: &C, a: &[C::E]) -> Vec<C::E> {
    a.iter().map(|x| c.neg(x)).collect()
}

pub(crate) fn sub<C: Coeffs>(c: &C, a: &[C::E], b: &[C::E]) -> Vec<C::E> {
    add(c, a, &neg(c, b))
}

pub(crate) fn mul<C: Coeffs>(c: &C, a: &[C::E], b: &[C::E]) -> Vec<C::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![c.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if c.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] = c.add(&v[i + j], &c.mul(x, y));
        }
    }
    trim(c, v)
}

pub(crate) fn scale<C: Coeffs>(c: &C, a: &[C::E], s: &C::E) -> Vec<C::E> {
    trim(c, a.iter().map(|x| c.mul(x, s)).collect())
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem<C: Coeffs>(c: &C, a: &[C::E], b: &[C::E]) -> (Vec<C::E>, Vec<C::E>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = c.inv(b.last().unwrap());
    let mut q = vec![c.zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = c.mul(r.last().unwrap(), &lead_inv);
        for (i, y) in b.iter().enumerate() {
            r[shift + i] = c.add(&r[shift + i], &c.neg(&c.mul(&f, y)));
        }
        q[shift] = f;
        r = trim(c, r);
        if r.is_empty() {
            break;
        }
    }
    (trim(c, q), r)
}

pub(crate) fn rem<C: Coeffs>(c: &C, a: &[C::E], m: &[C::E]) -> Vec<C::E> {
    if a.len() < m.len() {
        return a.to_vec();
    }
    divrem(c, a, m).1
}

pub(crate) fn make_monic<C: Coeffs>(c: &C, a: &[C::E]) -> Vec<C::E> {
    match a.last() {
        None => Vec::new(),
        Some(l) => scale(c, a, &c.inv(l)),
    }
}

pub(crate) fn gcd<C: Coeffs>(c: &C, a: &[C::E], b: &[C::E]) -> Vec<C::E> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let r = rem(c, &x, &y);
        x = y;
        y = r;
    }
    make_monic(c, &x)
}

/// Inverse of `a` modulo `m`, when `gcd(a, m) = 1`.
pub(crate) fn inv_mod<C: Coeffs>(c: &C, a: &[C::E], m: &[C::E]) -> Option<Vec<C::E>> {
    let (mut r0, mut r1) = (m.to_vec(), rem(c, a, m));
    let (mut s0, mut s1): (Vec<C::E>, Vec<C::E>) = (Vec::new(), vec![c.one()]);
    while !r1.is_empty() {
        let (qt, r) = divrem(c, &r0, &r1);
        let s = sub(c, &s0, &mul(c, &qt, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.len() != 1 {
        return None;
    }
    let f = c.inv(&r0[0]);
    Some(rem(c, &scale(c, &s0, &f), m))
}

/// Integer cyclotomic polynomial `Φ_r`, low degree first.
pub(crate) fn cyclotomic(r: u64) -> Vec<BigRational> {
    let c = Rationals;
    let mut num = vec![BigRational::zero(); r as usize + 1];
    num[0] = -BigRational::one();
    num[r as usize] = BigRational::one();
    for d in 1..r {
        if r % d == 0 {
            let (q, rm) = divrem(&c, &num, &cyclotomic(d));
            debug_assert!(rm.is_empty());
            num = q;
        }
    }
    num
}

pub(crate) fn int_poly_to_rat(a: &[BigInt]) -> Vec<BigRational> {
    a.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Reduce a fraction of rational polynomials to the canonical integer form:
/// coprime, jointly primitive integer coefficients, positive leading
/// denominator coefficient.
pub(crate) fn canonical_fraction(
    num: &[BigRational],
    den: &[BigRational],
) -> (Vec<BigInt>, Vec<BigInt>) {
    let c = Rationals;
    assert!(!den.is_empty(), "rational function with zero denominator");
    if num.is_empty() {
        return (Vec::new(), vec![BigInt::one()]);
    }
    let g = gcd(&c, num, den);
    let n = divrem(&c, num, &g).0;
    let d = divrem(&c, den, &g).0;
    let mut lcm = BigInt::one();
    for x in n.iter().chain(d.iter()) {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let to_int = |v: &[BigRational]| -> Vec<BigInt> {
        v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect()
    };
    let (mut ni, mut di) = (to_int(&n), to_int(&d));
    let mut content = BigInt::zero();
    for x in ni.iter().chain(di.iter()) {
        content = num_integer::gcd(content, x.clone());
    }
    if di.last().unwrap().is_negative() {
        content = -content;
    }
    for x in ni.iter_mut().chain(di.iter_mut()) {
        *x = &*x / &content;
    }
    (ni, di)
}
