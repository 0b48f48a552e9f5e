//! Rational helpers on top of [`num_rational::BigRational`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p"` or `"p/q"` exactly. Decimal points and exponents are rejected.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let is_integer = |s: &str| {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_integer(numer) || !is_integer(denom) || denom.starts_with('-') {
        return None;
    }
    let numer: BigInt = numer.parse().ok()?;
    let denom: BigInt = denom.parse().ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

/// Canonical `"p/q"` form; integers are written without a denominator.
pub fn format(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Positive rescaling of a vector to coprime integers. The zero vector is returned as is.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let mut lcm = BigInt::one();
    for x in v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        if !x.is_zero() {
            gcd = gcd.gcd(x);
        }
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &gcd))
        .collect()
}

/// Positive rescaling so that the first nonzero entry has absolute value one.
pub fn unit_leading(v: &[Rational]) -> Vec<Rational> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let scale = lead.abs();
            v.iter().map(|x| x / &scale).collect()
        }
        None => v.to_vec(),
    }
}

/// Positive rescaling to unit sum; `None` when the entries sum to a non-positive value.
pub fn normalize_sum(v: &[Rational]) -> Option<Vec<Rational>> {
    let total: Rational = v.iter().sum();
    if !total.is_positive() {
        return None;
    }
    Some(v.iter().map(|x| x / &total).collect())
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}
