//! Exact rationals seen through a single prime: valuations, norms,
//! fractional parts and the additive character.
//!
//! Everything here is exact. A rational `x = u * p^v` with `u` a p-adic unit
//! has valuation `v` and norm `|x|_p = p^(-v)`; zero has valuation
//! [`Valuation::Infinity`] and norm zero.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A rational prime, checked on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^e` as an exact rational; `e` may be negative.
    pub fn pow(self, e: i64) -> Rational {
        let base = self.to_bigint().pow(e.unsigned_abs() as u32);
        if e >= 0 {
            Rational::from_integer(base)
        } else {
            Rational::new(BigInt::one(), base)
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Exponent of a prime in a rational. `Infinity` orders above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// Strips every factor `p` from `n` in place and returns how many were removed.
fn strip(n: &mut BigInt, p: &BigInt) -> i64 {
    let mut count = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return count;
        }
        *n = q;
        count += 1;
    }
}

fn int_ord(n: &BigInt, p: &BigInt) -> i64 {
    let mut m = n.clone();
    strip(&mut m, p)
}

pub fn vp(x: &Rational, p: Prime) -> Valuation {
    valuation_at(x, &p.to_bigint())
}

/// Valuation at a prime given as a big integer (primality is the caller's
/// responsibility); used where primes come out of a factorization.
pub fn valuation_at(x: &Rational, q: &BigInt) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    Valuation::Finite(int_ord(x.numer(), q) - int_ord(x.denom(), q))
}

/// Valuation of a rational known to be nonzero.
///
/// Panics on zero; callers use it where nondegeneracy is already established.
pub fn ord(x: &Rational, p: Prime) -> i64 {
    vp(x, p)
        .finite()
        .expect("valuation of zero requested where a nonzero value is required")
}

pub fn norm_p(x: &Rational, p: Prime) -> Rational {
    match vp(x, p) {
        Valuation::Infinity => Rational::zero(),
        Valuation::Finite(v) => p.pow(-v),
    }
}

pub fn is_integral(x: &Rational, p: Prime) -> bool {
    !x.denom().is_multiple_of(&p.to_bigint())
}

/// Inverse of `a` modulo `m`, if it exists, in `[0, m)`.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(m).extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// The p-adic fractional part `{x}_p`: the unique `r` in `[0, 1)` whose
/// denominator is a power of `p` and with `x - r` a p-adic integer.
///
/// The p-coprime part of the denominator is inverted modulo the p-power part.
pub fn frac_p(x: &Rational, p: Prime) -> Rational {
    let pb = p.to_bigint();
    let mut coprime = x.denom().clone();
    let k = strip(&mut coprime, &pb);
    if k == 0 {
        return Rational::zero();
    }
    let modulus = pb.pow(k as u32);
    let inv = inv_mod(&coprime, &modulus).expect("coprime part is invertible modulo a p-power");
    let t = (x.numer() * inv).mod_floor(&modulus);
    Rational::new(t, modulus)
}

/// A point `e^(2 pi i angle)` on the unit circle with rational `angle` in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhaseQ {
    angle: Rational,
}

impl PhaseQ {
    /// Reduces `angle` modulo 1.
    pub fn new(angle: Rational) -> Self {
        let angle = &angle - angle.floor();
        PhaseQ { angle }
    }

    pub fn one() -> Self {
        PhaseQ {
            angle: Rational::zero(),
        }
    }

    pub fn angle(&self) -> &Rational {
        &self.angle
    }

    pub fn is_one(&self) -> bool {
        self.angle.is_zero()
    }

    pub fn conj(&self) -> Self {
        PhaseQ::new(-self.angle.clone())
    }
}

impl Mul for &PhaseQ {
    type Output = PhaseQ;

    fn mul(self, rhs: &PhaseQ) -> PhaseQ {
        PhaseQ::new(&self.angle + &rhs.angle)
    }
}

impl Mul for PhaseQ {
    type Output = PhaseQ;

    fn mul(self, rhs: PhaseQ) -> PhaseQ {
        &self * &rhs
    }
}

impl fmt::Display for PhaseQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(2πi·{})", self.angle)
    }
}

/// The additive character `chi(x) = exp(2 pi i {x}_p)`.
pub fn chi(x: &Rational, p: Prime) -> PhaseQ {
    PhaseQ { angle: frac_p(x, p) }
}

/// Parses `"num/den"` or `"num"`. Accepts ASCII `-` or U+2212 as the sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim().replace('\u{2212}', "-");
    let bad = || Error::InvalidInput(format!("cannot parse rational {s:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t.as_str(), "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// `"num/den"`, or `"num"` for integers.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}
