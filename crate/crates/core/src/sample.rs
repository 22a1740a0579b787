//! Seeded random instances for property checks.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::channel::{channel_condition, GaussianChannel};
use crate::lattice::Lattice;
use crate::linalg::Mat2;
use crate::padic::{Prime, Rational};

/// Integer in `[1, bound]` coprime to `p`, with a random sign.
fn unit<R: Rng>(rng: &mut R, p: Prime, bound: i64) -> i64 {
    loop {
        let u = rng.gen_range(1..=bound);
        if u as u64 % p.get() != 0 {
            return if rng.gen_bool(0.5) { -u } else { u };
        }
    }
}

/// `p^v u / w` with `v` in `[-vmax, vmax]` and `u, w` small p-units.
pub fn rational_with_valuation<R: Rng>(rng: &mut R, p: Prime, vmax: i64) -> Rational {
    let v = rng.gen_range(-vmax..=vmax);
    let u = unit(rng, p, 30);
    let w = unit(rng, p, 30).abs();
    p.pow(v) * Rational::new(BigInt::from(u), BigInt::from(w))
}

/// Lattice with a random rational basis whose entries have valuations in
/// `[-vmax, vmax]`; an entry is zero with probability 1/5.
pub fn random_lattice<R: Rng>(rng: &mut R, p: Prime, vmax: i64) -> Lattice {
    loop {
        let entry = |rng: &mut R| {
            if rng.gen_ratio(1, 5) {
                Rational::zero()
            } else {
                rational_with_valuation(rng, p, vmax)
            }
        };
        let basis = Mat2::new(entry(rng), entry(rng), entry(rng), entry(rng));
        if let Ok(l) = Lattice::from_basis(basis, p) {
            return l;
        }
    }
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let num = rng.gen_range(-12i64..=12);
    let den = rng.gen_range(1i64..=12);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Determinant-one rational matrix: a product of shears and a dilation pair.
pub fn random_symplectic<R: Rng>(rng: &mut R) -> Mat2 {
    let one = Rational::one();
    let zero = Rational::zero();
    let mut s = Mat2::identity();
    for _ in 0..rng.gen_range(1..=4) {
        let t = small_rational(rng);
        let shear = if rng.gen_bool(0.5) {
            Mat2::new(one.clone(), t, zero.clone(), one.clone())
        } else {
            Mat2::new(one.clone(), zero.clone(), t, one.clone())
        };
        s = &s * &shear;
    }
    let r = loop {
        let r = small_rational(rng);
        if !r.is_zero() {
            break r;
        }
    };
    &s * &Mat2::diag(r.clone(), r.recip())
}

/// Valid channel with `v_p(det K)` in `[-3, 3]`.
///
/// `K = S1 diag(p^e u, 1) S2` with determinant-one `S1, S2`; `u` is a
/// p-unit, congruent to 1 mod p about a third of the time. The noise is a
/// random lattice pushed down by powers of `p` until the channel condition
/// holds.
pub fn random_channel<R: Rng>(rng: &mut R, p: Prime) -> GaussianChannel {
    let e = rng.gen_range(-3i64..=3);
    let u = if rng.gen_ratio(1, 3) {
        1 + p.get() as i64 * rng.gen_range(-3i64..=3)
    } else {
        unit(rng, p, 20)
    };
    let core = Mat2::diag(p.pow(e) * Rational::from_integer(BigInt::from(u)), Rational::one());
    let k = &(&random_symplectic(rng) * &core) * &random_symplectic(rng);
    let mut noise = random_lattice(rng, p, 2);
    while channel_condition(&k, &noise) > Rational::one() {
        noise = noise.scale(1);
    }
    GaussianChannel::new(k, noise).expect("condition enforced above")
}

/// Nonsingular matrix with numerators and denominators up to `bound`.
pub fn random_matrix<R: Rng>(rng: &mut R, bound: i64) -> Mat2 {
    loop {
        let entry = |rng: &mut R| {
            Rational::new(
                BigInt::from(rng.gen_range(-bound..=bound)),
                BigInt::from(rng.gen_range(1..=bound)),
            )
        };
        let k = Mat2::new(entry(rng), entry(rng), entry(rng), entry(rng));
        if !k.is_singular() {
            return k;
        }
    }
}
