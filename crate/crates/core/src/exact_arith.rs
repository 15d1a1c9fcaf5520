//! Exact arithmetic in real quadratic fields `Q(sqrt(d))`.
//!
//! Rationals are [`num_rational::BigRational`]; a [`QuadNum`] is `a + b*sqrt(d)`
//! with rational `a`, `b` and a squarefree radicand `d`. Sign, comparison and
//! floor are decided with integer square roots only, never floating point.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("radicand mismatch: sqrt({0}) and sqrt({1}) live in different fields")]
    RadicandMismatch(BigInt, BigInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative radicand {0}")]
    NegativeRadicand(BigInt),
    #[error("negative discriminant {0}")]
    NegativeDiscriminant(BigRational),
    #[error("leading coefficient of the quadratic is zero")]
    DegenerateQuadratic,
    #[error("cannot parse quadratic number from {0:?}")]
    Parse(String),
}

/// Splits `n > 0` as `n = s^2 * k` with `k` squarefree. Returns `(s, k)`.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(
        n.is_positive(),
        "squarefree_decompose needs a positive integer"
    );
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        let mut count = 0u32;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            count += 1;
        }
        if count > 0 {
            square *= p.pow(count / 2);
            if count % 2 == 1 {
                free *= &p;
            }
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    // `rest` is 1 or a prime at this point.
    free *= rest;
    (square, free)
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// An element `a + b*sqrt(d)` of a real quadratic field.
///
/// `d` is kept squarefree. A value with `b = 0` is rational; its radicand is
/// carried along but ignored by equality and hashing, and it may be `1` when
/// no field has been chosen yet.
#[derive(Clone, Debug)]
pub struct QuadNum {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

impl PartialEq for QuadNum {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadNum {}

impl Hash for QuadNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        if !self.b.is_zero() {
            self.d.hash(state);
        }
    }
}

impl QuadNum {
    /// Builds `a + b*sqrt(d)`, absorbing square factors of `d` into `b`.
    pub fn new(a: BigRational, b: BigRational, d: impl Into<BigInt>) -> Result<Self, ArithError> {
        let d = d.into();
        if d.is_negative() {
            return Err(ArithError::NegativeRadicand(d));
        }
        if d.is_zero() || b.is_zero() {
            return Ok(Self::rational_with_radicand(
                a,
                if d.is_zero() { BigInt::one() } else { d },
            ));
        }
        let (s, k) = squarefree_decompose(&d);
        let b = b * rat(s);
        if k.is_one() {
            Ok(Self::rational(a + b))
        } else {
            Ok(QuadNum { a, b, d: k })
        }
    }

    pub fn rational(a: BigRational) -> Self {
        QuadNum {
            a,
            b: BigRational::zero(),
            d: BigInt::one(),
        }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::rational(rat(n))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    fn rational_with_radicand(a: BigRational, d: BigInt) -> Self {
        let d = if d.is_positive() {
            squarefree_decompose(&d).1
        } else {
            BigInt::one()
        };
        QuadNum {
            a,
            b: BigRational::zero(),
            d,
        }
    }

    /// The exact square root of a nonnegative rational.
    pub fn sqrt_rational(r: &BigRational) -> Result<Self, ArithError> {
        if r.is_negative() {
            return Err(ArithError::NegativeRadicand(r.numer() * r.denom()));
        }
        if r.is_zero() {
            return Ok(Self::zero());
        }
        // sqrt(n/m) = sqrt(n*m)/m
        let nm = r.numer() * r.denom();
        let (s, k) = squarefree_decompose(&nm);
        let coeff = BigRational::new(s, r.denom().clone());
        Self::new(BigRational::zero(), coeff, k)
    }

    /// The rational part `a`.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// The coefficient `b` of `sqrt(d)`.
    pub fn sqrt_coefficient(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.a.clone())
    }

    fn common_radicand(&self, other: &Self) -> Result<BigInt, ArithError> {
        if self.b.is_zero() {
            Ok(other.d.clone())
        } else if other.b.is_zero() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(ArithError::RadicandMismatch(
                self.d.clone(),
                other.d.clone(),
            ))
        }
    }

    fn build(a: BigRational, b: BigRational, d: BigInt) -> Self {
        debug_assert!(b.is_zero() || d > BigInt::one());
        QuadNum { a, b, d }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.common_radicand(other)?;
        Ok(Self::build(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.common_radicand(other)?;
        Ok(Self::build(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.common_radicand(other)?;
        let dr = rat(d.clone());
        let a = &self.a * &other.a + &self.b * &other.b * dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::build(a, b, d))
    }

    /// `a^2 - d*b^2`, the field norm.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.d.clone())
    }

    pub fn conjugate(&self) -> Self {
        Self::build(self.a.clone(), -&self.b, self.d.clone())
    }

    pub fn checked_inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::build(&self.a / &n, -&self.b / &n, self.d.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.common_radicand(other)?;
        let inv = other.checked_inv()?;
        let mut out = self.checked_mul(&inv)?;
        if out.b.is_zero() {
            out.d = d;
        }
        Ok(out)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::build(&self.a * r, &self.b * r, self.d.clone())
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        Self::build(&self.a + r, self.b.clone(), self.d.clone())
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Self::rational_with_radicand(BigRational::one(), self.d.clone());
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    /// Exact sign of `a + b*sqrt(d)`: -1, 0 or 1.
    pub fn sign(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a^2 with b^2 d.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * rat(self.d.clone());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Writes the value as `(p + q*sqrt(d)) / r` with integers and `r > 0`.
    fn integer_form(&self) -> (BigInt, BigInt, BigInt) {
        let r = self.a.denom().lcm(self.b.denom());
        let p = self.a.numer() * (&r / self.a.denom());
        let q = self.b.numer() * (&r / self.b.denom());
        (p, q, r)
    }

    /// Greatest integer `f` with `f <= self`.
    pub fn floor(&self) -> BigInt {
        let (p, q, r) = self.integer_form();
        if q.is_zero() {
            return p.div_floor(&r);
        }
        // floor((p + y)/r) = floor((p + floor(y))/r) for integer p and r > 0.
        let s = &q * &q * &self.d;
        let root = s.sqrt();
        let floor_y = if q.is_positive() {
            root
        } else if &root * &root == s {
            -root
        } else {
            -(root + 1u32)
        };
        (p + floor_y).div_floor(&r)
    }

    /// Least integer `c` with `c >= self`.
    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Truncated decimal expansion with `digits` places after the point.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let negative = self.sign() < 0;
        let x = self.abs();
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = x.scale(&rat(scale.clone())).floor();
        let (int_part, frac) = scaled.div_rem(&scale);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            out.push('.');
            out.push_str(&format!("{:0>width$}", frac.to_string(), width = digits));
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        a + b * d.sqrt()
    }

    /// Compact form over a common denominator, e.g. `(1+sqrt(5))/2`.
    pub fn to_pretty_string(&self) -> String {
        if self.b.is_zero() {
            return self.a.to_string();
        }
        let (p, q, r) = self.integer_form();
        let radical = |q: &BigInt| -> String {
            if q.is_one() {
                format!("sqrt({})", self.d)
            } else if *q == -BigInt::one() {
                format!("-sqrt({})", self.d)
            } else {
                format!("{}*sqrt({})", q, self.d)
            }
        };
        let numer = if p.is_zero() {
            radical(&q)
        } else if q.is_positive() {
            format!("{}+{}", p, radical(&q))
        } else {
            format!("{}-{}", p, radical(&-q))
        };
        if r.is_one() {
            numer
        } else if p.is_zero() {
            format!("{}/{}", numer, r)
        } else {
            format!("({})/{}", numer, r)
        }
    }
}

fn sign_of(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for QuadNum {
    /// `None` when the two values live in different quadratic fields.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let diff = self.checked_sub(other).ok()?;
        Some(diff.sign().cmp(&0))
    }
}

impl From<BigRational> for QuadNum {
    fn from(r: BigRational) -> Self {
        QuadNum::rational(r)
    }
}

impl From<i64> for QuadNum {
    fn from(n: i64) -> Self {
        QuadNum::from_integer(n)
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::build(-&self.a, -&self.b, self.d.clone())
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

// Operator forms panic on a radicand mismatch or division by zero, like the
// rational operators do; use the `checked_*` methods to handle those cases.
macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{}", e))
            }
        }
        impl $tr<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                (&self).$method(rhs)
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
forward_op!(Div, div, checked_div);

impl fmt::Display for QuadNum {
    /// `a + b*sqrt(d)` with rationals as `p/q`; a rational value prints as `a`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.a, -&self.b, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.strip_prefix('+').unwrap_or(s);
    let r = BigRational::from_str(s).ok()?;
    Some(r)
}

impl FromStr for QuadNum {
    type Err = ArithError;

    /// Accepts `a`, `a + b*sqrt(d)`, `a - b*sqrt(d)`, `b*sqrt(d)` and `sqrt(d)`.
    fn from_str(text: &str) -> Result<Self, ArithError> {
        let err = || ArithError::Parse(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(idx) = s.rfind("sqrt(") else {
            return parse_rational(&s).map(QuadNum::rational).ok_or_else(err);
        };
        let radicand = s[idx + 5..].strip_suffix(')').ok_or_else(err)?;
        let d = BigInt::from_str(radicand).map_err(|_| err())?;
        let mut prefix = &s[..idx];
        if let Some(p) = prefix.strip_suffix('*') {
            prefix = p;
        } else if !(prefix.is_empty() || prefix.ends_with('+') || prefix.ends_with('-')) {
            return Err(err());
        }
        // Split the rational part from the coefficient at the first sign
        // that follows a digit.
        let bytes = prefix.as_bytes();
        let split = (1..bytes.len())
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1].is_ascii_digit());
        let (a_str, b_str) = match split {
            Some(i) => (&prefix[..i], &prefix[i..]),
            None => ("", prefix),
        };
        let a = if a_str.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(a_str).ok_or_else(err)?
        };
        let b = match b_str {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            _ => {
                // "+-3/4" and "--3/4" arise from "a + -3/4*sqrt(d)" style text.
                let (sign, body) = match b_str.as_bytes()[0] {
                    b'-' => (-1, &b_str[1..]),
                    b'+' => (1, &b_str[1..]),
                    _ => (1, b_str),
                };
                let v = match body {
                    "" => BigRational::one(),
                    _ => parse_rational(body).ok_or_else(err)?,
                };
                if sign < 0 {
                    -v
                } else {
                    v
                }
            }
        };
        QuadNum::new(a, b, d)
    }
}

/// Exact sign of `x`: -1, 0 or 1.
pub fn quad_sign(x: &QuadNum) -> i8 {
    x.sign()
}

/// Largest integer not exceeding `x`.
pub fn quad_floor(x: &QuadNum) -> BigInt {
    x.floor()
}

/// Roots `(x_minus, x_plus)` of `A x^2 + B x + C = 0`, with `x_minus <= x_plus`.
pub fn solve_quadratic(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
) -> Result<(QuadNum, QuadNum), ArithError> {
    if a.is_zero() {
        return Err(ArithError::DegenerateQuadratic);
    }
    let disc = b * b - a * c * rat(4);
    if disc.is_negative() {
        return Err(ArithError::NegativeDiscriminant(disc));
    }
    let root = QuadNum::sqrt_rational(&disc)?;
    let two_a = a * rat(2);
    let inv = BigRational::one() / &two_a;
    let minus_b = QuadNum::rational_with_radicand(-b, root.d.clone());
    let r1 = (&minus_b - &root).scale(&inv);
    let r2 = (&minus_b + &root).scale(&inv);
    if a.is_positive() {
        Ok((r1, r2))
    } else {
        Ok((r2, r1))
    }
}
