//! Entropy gains of `K` at every place of `Q`, and their sum.
//!
//! At a prime `p` the Gaussian channel built from `K` gains `log |det K|_p`;
//! at the real place the gain is `log |det K|`. Both are exact log-ledgers, so
//! the product formula `|x| prod_p |x|_p = 1` becomes the statement that the
//! merged exponent maps cancel term by term.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ledger::LogLedger;
use crate::linalg::Mat2;
use crate::padic::{format_rational, ord, valuation_at, Prime, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdelicGainReport {
    pub det: Rational,
    /// Exponent `-vp(det)` of `log p` in the gain at each prime of the support.
    pub prime_gains: BTreeMap<BigUint, i64>,
    /// `log |det|` as a ledger.
    pub real_gain: LogLedger,
    pub sum_is_zero: bool,
}

/// Prime-keyed exponents serialized in numeric key order.
struct ExponentMap<'a>(&'a BTreeMap<BigUint, i64>);

impl Serialize for ExponentMap<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (q, e) in self.0 {
            map.serialize_entry(&q.to_string(), e)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    det: String,
    primes: ExponentMap<'a>,
    real: &'a LogLedger,
    sum_is_zero: bool,
}

impl Serialize for AdelicGainReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReportJson {
            det: format_rational(&self.det),
            primes: ExponentMap(&self.prime_gains),
            real: &self.real_gain,
            sum_is_zero: self.sum_is_zero,
        }
        .serialize(s)
    }
}

impl AdelicGainReport {
    /// Gain at the prime `q` as a ledger, `-vp(det) log q`.
    pub fn gain_ledger_at(&self, q: &BigUint) -> LogLedger {
        LogLedger::term(q.clone(), self.prime_gains.get(q).copied().unwrap_or(0))
    }

    /// Sum of all finite-place gains.
    pub fn total_prime_gain(&self) -> LogLedger {
        self.prime_gains
            .iter()
            .fold(LogLedger::zero(), |acc, (q, e)| &acc + &LogLedger::term(q.clone(), *e))
    }
}

fn det_of(k: &Mat2) -> Result<Rational> {
    let det = k.det();
    if det.is_zero() {
        return Err(Error::Singular(format!("channel matrix {k}")));
    }
    Ok(det)
}

pub fn adelic_report(k: &Mat2) -> Result<AdelicGainReport> {
    let det = det_of(k)?;
    let real_gain = LogLedger::log_abs(&det)?;

    // Finite places: the support is read off the factorization, but each gain
    // is recomputed from the valuation of det itself.
    let mut prime_gains = BTreeMap::new();
    for q in real_gain.terms().keys() {
        let v = valuation_at(&det, &BigInt::from(q.clone()))
            .finite()
            .expect("det is nonzero");
        if v != 0 {
            prime_gains.insert(q.clone(), -v);
        }
    }

    let report_total = prime_gains
        .iter()
        .fold(real_gain.clone(), |acc, (q, e)| &acc + &LogLedger::term(q.clone(), *e));
    let sum_is_zero = report_total.is_zero();
    if sum_is_zero != product_formula_holds(&det, &prime_gains) {
        return Err(Error::Invariant(format!(
            "exponent cancellation and the product formula disagree for det = {det}"
        )));
    }
    Ok(AdelicGainReport {
        det,
        prime_gains,
        real_gain,
        sum_is_zero,
    })
}

/// `|x| * prod_q |x|_q == 1`, with `|x|_q = q^(gain exponent)`, as exact rationals.
fn product_formula_holds(x: &Rational, prime_gains: &BTreeMap<BigUint, i64>) -> bool {
    let mut acc = x.abs();
    for (q, e) in prime_gains {
        let qp = Rational::from_integer(BigInt::from(q.pow(e.unsigned_abs() as u32)));
        acc = if *e >= 0 { acc * qp } else { acc / qp };
    }
    acc.is_one()
}

/// Exponent of `log p` in the gain at `p`: `-vp(det K)`.
pub fn gain_at_prime(k: &Mat2, p: Prime) -> Result<i64> {
    Ok(-ord(&det_of(k)?, p))
}
