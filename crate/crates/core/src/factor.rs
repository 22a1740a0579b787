//! Integer factorization into exact prime-exponent maps.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Prime factorization of a positive integer. `1` factors as the empty map.
pub fn factorize(n: &BigUint) -> Result<BTreeMap<BigUint, u32>> {
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    let mut out = BTreeMap::new();
    if n.is_one() {
        return Ok(out);
    }
    if let Some(small) = n.to_u128() {
        for (q, e) in num_prime::nt_funcs::factorize128(small) {
            out.insert(BigUint::from(q), e as u32);
        }
    } else {
        let (found, rest) = num_prime::nt_funcs::factors(n.clone(), None);
        if let Some(rest) = rest {
            return Err(Error::InvalidInput(format!(
                "could not completely factor {n}: cofactors {rest:?} remain"
            )));
        }
        for (q, e) in found {
            out.insert(q, e as u32);
        }
    }
    // The factorization must rebuild n exactly.
    let rebuilt = out
        .iter()
        .fold(BigUint::one(), |acc, (q, e)| acc * q.pow(*e));
    if &rebuilt != n {
        return Err(Error::Invariant(format!("factorization of {n} rebuilt {rebuilt}")));
    }
    Ok(out)
}
