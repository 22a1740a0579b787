//! Exact logarithms of rationals as formal sums `sum_q e_q log q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::factor::factorize;
use crate::padic::{Prime, Rational};

/// Base used when a ledger is rendered as a number.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LogBase {
    #[default]
    E,
    Two,
    Ten,
}

impl LogBase {
    pub fn symbol(self) -> &'static str {
        match self {
            LogBase::E => "ln",
            LogBase::Two => "log2",
            LogBase::Ten => "log10",
        }
    }

    /// Suffix used in JSON keys such as `value_base_e`.
    pub fn key(self) -> &'static str {
        match self {
            LogBase::E => "e",
            LogBase::Two => "2",
            LogBase::Ten => "10",
        }
    }

    fn ln_base(self) -> f64 {
        match self {
            LogBase::E => 1.0,
            LogBase::Two => std::f64::consts::LN_2,
            LogBase::Ten => std::f64::consts::LN_10,
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" => Ok(LogBase::E),
            "2" => Ok(LogBase::Two),
            "10" => Ok(LogBase::Ten),
            other => Err(Error::InvalidInput(format!(
                "log base must be e, 2 or 10, got {other:?}"
            ))),
        }
    }
}

/// A formal integer combination of logarithms of primes.
///
/// Zero exponents are never stored, so the empty ledger is the value zero and
/// structural equality is value equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LogLedger {
    terms: BTreeMap<BigUint, i64>,
}

impl LogLedger {
    pub fn zero() -> Self {
        LogLedger::default()
    }

    /// `e * log q`.
    pub fn term(q: impl Into<BigUint>, e: i64) -> Self {
        let mut l = LogLedger::zero();
        l.add_term(q.into(), e);
        l
    }

    pub fn prime_power(p: Prime, e: i64) -> Self {
        LogLedger::term(p.get(), e)
    }

    /// `log |x|` for a nonzero rational.
    pub fn log_abs(x: &Rational) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::InvalidInput("log of zero".into()));
        }
        let mut l = LogLedger::zero();
        for (q, e) in factorize(&x.numer().abs().to_biguint().expect("nonnegative"))? {
            l.add_term(q, e as i64);
        }
        for (q, e) in factorize(&x.denom().to_biguint().expect("positive denominator"))? {
            l.add_term(q, -(e as i64));
        }
        Ok(l)
    }

    fn add_term(&mut self, q: BigUint, e: i64) {
        if e == 0 {
            return;
        }
        let slot = self.terms.entry(q.clone()).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.terms.remove(&q);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponent(&self, q: u64) -> i64 {
        self.terms.get(&BigUint::from(q)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> &BTreeMap<BigUint, i64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Numerical value in the given base.
    pub fn value(&self, base: LogBase) -> f64 {
        let nats: f64 = self
            .terms
            .iter()
            .map(|(q, e)| *e as f64 * ln_big(q))
            .sum();
        nats / base.ln_base()
    }

    /// Symbolic form such as `2·ln 3 - 1·ln 5`; `0` when empty.
    pub fn render(&self, base: LogBase) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (q, e)) in self.terms.iter().enumerate() {
            let sym = base.symbol();
            match (i, *e < 0) {
                (0, _) => out.push_str(&format!("{e}·{sym} {q}")),
                (_, true) => out.push_str(&format!(" - {}·{sym} {q}", -e)),
                (_, false) => out.push_str(&format!(" + {e}·{sym} {q}")),
            }
        }
        out
    }
}

fn ln_big(q: &BigUint) -> f64 {
    match q.to_f64() {
        Some(f) if f.is_finite() => f.ln(),
        // Beyond f64 range: ln q = bits * ln 2 + ln(mantissa)
        _ => {
            let bits = q.bits();
            let shift = bits - 53;
            let top = (q >> shift).to_f64().expect("53-bit value");
            top.ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

impl Add for &LogLedger {
    type Output = LogLedger;
    fn add(self, rhs: &LogLedger) -> LogLedger {
        let mut out = self.clone();
        for (q, e) in &rhs.terms {
            out.add_term(q.clone(), *e);
        }
        out
    }
}

impl Neg for &LogLedger {
    type Output = LogLedger;
    fn neg(self) -> LogLedger {
        LogLedger {
            terms: self.terms.iter().map(|(q, e)| (q.clone(), -e)).collect(),
        }
    }
}

impl Sub for &LogLedger {
    type Output = LogLedger;
    fn sub(self, rhs: &LogLedger) -> LogLedger {
        self + &(-rhs)
    }
}

impl fmt::Display for LogLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(LogBase::E))
    }
}

impl Serialize for LogLedger {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (q, e) in &self.terms {
            map.serialize_entry(&q.to_string(), e)?;
        }
        map.end()
    }
}
