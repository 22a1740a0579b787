//! Gaussian states and Gaussian channels over `Q_p`.
//!
//! A Gaussian state `gamma(L, alpha)` is described by its characteristic
//! function `z -> chi(Delta(alpha, z)) h_L(z)`, where `h_L` is the indicator of
//! the lattice `L`. It is a state exactly when `|L| <= 1`, in which case it is
//! `|L|` times an orthogonal projector of rank `1/|L|`; its von Neumann entropy
//! is `-log |L|`.
//!
//! A Gaussian channel `(K, L)` acts on characteristic functions as
//! `pi(z) -> pi(K z) h_L(z)` and is a channel exactly when
//! `|1 - det K|_p |L| <= 1`. Its entropy gain is `log |det K|_p`, which is
//! certified here by the witness sequence `gamma(p^n L)` and by the norm of
//! the image of the identity, `|det K|_p^(-1)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::ledger::LogLedger;
use crate::linalg::{sympl, Mat2, Vec2};
use crate::padic::{chi, norm_p, ord, PhaseQ, Prime, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianState {
    lattice: Lattice,
    shift: Vec2,
}

impl GaussianState {
    /// `gamma(L, alpha)`; fails with `NotAState` when `|L| > 1`.
    pub fn new(lattice: Lattice, shift: Vec2) -> Result<Self> {
        if lattice.measure_exponent() < 0 {
            return Err(Error::NotAState {
                measure: lattice.measure().to_string(),
            });
        }
        Ok(GaussianState { lattice, shift })
    }

    pub fn centred(lattice: Lattice) -> Result<Self> {
        GaussianState::new(lattice, Vec2::zero())
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn shift(&self) -> &Vec2 {
        &self.shift
    }

    pub fn prime(&self) -> Prime {
        self.lattice.prime()
    }

    /// `None` off the lattice, the phase `chi(Delta(alpha, z))` on it.
    pub fn char_fn(&self, z: &Vec2) -> Option<PhaseQ> {
        self.lattice
            .contains(z)
            .then(|| chi(&sympl(&self.shift, z), self.prime()))
    }

    /// `n` with `|L| = p^(-n)`; the state has rank `p^n`.
    pub fn entropy_exponent(&self) -> u64 {
        self.lattice.measure_exponent() as u64
    }

    /// `-log |L|`, i.e. `n log p`.
    pub fn entropy(&self) -> LogLedger {
        LogLedger::prime_power(self.prime(), self.lattice.measure_exponent())
    }

    pub fn is_pure(&self) -> bool {
        self.lattice.is_self_dual()
    }

    /// Gaussian states are unitarily equivalent exactly when their lattices
    /// have the same measure.
    pub fn unitarily_equivalent(&self, other: &GaussianState) -> Result<bool> {
        if self.prime() != other.prime() {
            return Err(Error::PrimeMismatch(self.prime().get(), other.prime().get()));
        }
        Ok(self.lattice.measure_exponent() == other.lattice.measure_exponent())
    }
}

/// `|1 - det K|_p * |L|`, the quantity bounded by one for a valid channel.
pub fn channel_condition(k: &Mat2, noise: &Lattice) -> Rational {
    norm_p(&(Rational::one() - k.det()), noise.prime()) * noise.measure()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianChannel {
    k: Mat2,
    k_inv: Mat2,
    noise: Lattice,
}

impl GaussianChannel {
    pub fn new(k: Mat2, noise: Lattice) -> Result<Self> {
        let k_inv = k
            .inverse()
            .ok_or_else(|| Error::Singular(format!("channel matrix {k}")))?;
        let lhs = channel_condition(&k, &noise);
        if lhs > Rational::one() {
            return Err(Error::NotAChannel {
                lhs: lhs.to_string(),
            });
        }
        Ok(GaussianChannel { k, k_inv, noise })
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.k
    }

    pub fn noise(&self) -> &Lattice {
        &self.noise
    }

    pub fn prime(&self) -> Prime {
        self.noise.prime()
    }

    /// Output state: support `K^(-1) L_s ∩ L_noise`, shift `adj(K) alpha`.
    ///
    /// The shift follows from `K^T J K = det(K) J`, which turns
    /// `Delta(alpha, K z)` into `Delta(adj(K) alpha, z)`.
    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if state.prime() != self.prime() {
            return Err(Error::PrimeMismatch(state.prime().get(), self.prime().get()));
        }
        let support = state
            .lattice()
            .apply_matrix(&self.k_inv)?
            .intersect(&self.noise)?;
        if support.measure_exponent() < 0 {
            return Err(Error::Invariant(format!(
                "channel output has measure {} > 1",
                support.measure()
            )));
        }
        let shift = self.k.adjugate().apply(state.shift());
        GaussianState::new(support, shift)
    }

    /// `log |det K|_p`.
    pub fn gain(&self) -> LogLedger {
        LogLedger::prime_power(self.prime(), -ord(&self.k.det(), self.prime()))
    }

    /// Smallest `N >= 0` such that, for `L_N = p^N L`, `L_N` is a state lattice
    /// (`|L_N| <= 1`), `L_N ⊆ L` and `K^(-1) L_N ⊆ L`.
    ///
    /// All three conditions are monotone in `N`, so an increasing scan finds it.
    pub fn threshold(&self) -> i64 {
        let mut n = 0;
        loop {
            let ln = self.noise.scale(n);
            let ok = ln.measure_exponent() >= 0
                && ln.subset(&self.noise).expect("same prime")
                && ln
                    .apply_matrix(&self.k_inv)
                    .expect("inverse is nonsingular")
                    .subset(&self.noise)
                    .expect("same prime");
            if ok {
                return n;
            }
            n += 1;
        }
    }

    /// Entropy change on the witness state `gamma(p^n L)` for `n` at or above
    /// the threshold.
    pub fn gain_witness(&self, n: i64) -> Result<LogLedger> {
        let threshold = self.threshold();
        if n < threshold {
            return Err(Error::BelowThreshold { n, threshold });
        }
        let input = GaussianState::centred(self.noise.scale(n))?;
        let output = self.apply(&input)?;
        Ok(&output.entropy() - &input.entropy())
    }

    /// `||Phi[I]|| = |det K|_p^(-1)`.
    pub fn identity_norm(&self) -> Rational {
        norm_p(&self.k.det(), self.prime()).recip()
    }

    /// `-log ||Phi[I]||` as a ledger; equals [`GaussianChannel::gain`].
    pub fn identity_norm_bound(&self) -> LogLedger {
        let norm = self.identity_norm();
        debug_assert!(!norm.is_zero());
        -&LogLedger::prime_power(self.prime(), ord(&norm, self.prime()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn lat(s: &str) -> Lattice {
        Lattice::from_basis(Mat2::parse(s).unwrap(), p3()).unwrap()
    }

    fn chan(k: &str, l: &str) -> Result<GaussianChannel> {
        GaussianChannel::new(Mat2::parse(k).unwrap(), lat(l))
    }

    #[test]
    fn state_validity() {
        let vacuum = GaussianState::centred(Lattice::standard(p3())).unwrap();
        assert!(vacuum.is_pure());
        assert!(vacuum.entropy().is_zero());

        let mixed = GaussianState::centred(lat("3,0;0,1")).unwrap();
        assert!(!mixed.is_pure());

        let too_big = lat("3,0;0,1").dual();
        assert_eq!(too_big.measure(), q(3, 1));
        assert!(matches!(
            GaussianState::centred(too_big),
            Err(Error::NotAState { .. })
        ));
    }

    #[test]
    fn characteristic_function() {
        let l0 = Lattice::standard(p3());
        let centred = GaussianState::centred(l0.clone()).unwrap();
        assert!(centred.char_fn(&Vec2::new(q(1, 1), q(1, 2))).unwrap().is_one());
        assert_eq!(centred.char_fn(&Vec2::new(q(1, 3), q(0, 1))), None);

        let shifted = GaussianState::new(l0.clone(), Vec2::from_ints(1, 0)).unwrap();
        assert!(shifted.char_fn(&Vec2::from_ints(0, 1)).unwrap().is_one());

        let shifted = GaussianState::new(l0, Vec2::new(q(1, 3), q(0, 1))).unwrap();
        assert_eq!(shifted.char_fn(&Vec2::from_ints(0, 1)).unwrap().angle(), &q(1, 3));
    }

    #[test]
    fn entropy_values() {
        let s = GaussianState::centred(Lattice::diagonal(p3(), 1, 1)).unwrap();
        assert_eq!(s.entropy(), LogLedger::term(3u64, 2));
        let shifted = GaussianState::new(s.lattice().clone(), Vec2::new(q(1, 9), q(4, 1))).unwrap();
        assert_eq!(shifted.entropy(), s.entropy());
    }

    #[test]
    fn unitary_equivalence() {
        let a = GaussianState::centred(lat("3,0;0,1")).unwrap();
        let b = GaussianState::centred(lat("1,0;0,3")).unwrap();
        let c = GaussianState::centred(lat("3,0;0,3")).unwrap();
        assert!(a.unitarily_equivalent(&b).unwrap());
        assert!(!a.unitarily_equivalent(&c).unwrap());
        let other = GaussianState::centred(Lattice::standard(Prime::new(5).unwrap())).unwrap();
        assert!(matches!(
            a.unitarily_equivalent(&other),
            Err(Error::PrimeMismatch(3, 5))
        ));
    }

    #[test]
    fn channel_validity() {
        assert!(chan("3,0;0,1", "1,0;0,1").is_ok());
        // det 4: |1 - 4|_3 * 3 = 1
        let noise = lat("3,0;0,1").dual();
        assert!(GaussianChannel::new(Mat2::from_ints(4, 0, 0, 1), noise.clone()).is_ok());
        // det 2: |1 - 2|_3 * 3 = 3
        assert_eq!(
            GaussianChannel::new(Mat2::from_ints(2, 0, 0, 1), noise),
            Err(Error::NotAChannel { lhs: "3".into() })
        );
        assert!(matches!(chan("1,1;1,1", "1,0;0,1"), Err(Error::Singular(_))));
    }

    #[test]
    fn apply_on_witness_state() {
        let phi = chan("3,0;0,1", "1,0;0,1").unwrap();
        let input = GaussianState::centred(Lattice::standard(p3()).scale(1)).unwrap();
        let out = phi.apply(&input).unwrap();
        assert_eq!(out.lattice(), &lat("1,0;0,3"));
        assert_eq!(out.lattice().measure(), q(1, 3));
        let k_inv = phi.matrix().inverse().unwrap();
        assert_eq!(out.lattice(), &input.lattice().apply_matrix(&k_inv).unwrap());
    }

    #[test]
    fn apply_symplectic_channel() {
        let phi = chan("2,1;1,1", "1,0;0,1").unwrap();
        let input = GaussianState::centred(lat("3,0;0,1")).unwrap();
        let out = phi.apply(&input).unwrap();
        assert_eq!(out.entropy(), input.entropy());
        let k_inv = phi.matrix().inverse().unwrap();
        assert_eq!(out.lattice(), &input.lattice().apply_matrix(&k_inv).unwrap());
    }

    #[test]
    fn shift_transport_uses_adjugate() {
        let phi = chan("3,0;0,1", "1,0;0,1").unwrap();
        let input = GaussianState::new(
            Lattice::standard(p3()).scale(1),
            Vec2::from_ints(1, 0),
        )
        .unwrap();
        let out = phi.apply(&input).unwrap();
        assert_eq!(out.shift(), &Vec2::from_ints(1, 0));

        // Delta(alpha, K z) = Delta(adj(K) alpha, z) on sample points
        let k = Mat2::parse("2,1/3;5,7").unwrap();
        let alpha = Vec2::new(q(1, 9), q(-2, 5));
        for (x, y) in [(1, 0), (0, 1), (3, -7), (11, 4)] {
            let z = Vec2::from_ints(x, y);
            assert_eq!(sympl(&alpha, &k.apply(&z)), sympl(&k.adjugate().apply(&alpha), &z));
        }
    }

    #[test]
    fn output_char_fn_follows_the_channel_law() {
        // pi_out(z) = pi_in(K z) h_L(z) on a grid of points
        let phi = chan("3,1;0,1", "3,1;0,1/3").unwrap();
        let input = GaussianState::new(lat("1,1;0,3"), Vec2::new(q(1, 3), q(2, 9))).unwrap();
        let out = phi.apply(&input).unwrap();
        for x in -9..=9 {
            for y in -9..=9 {
                let z = Vec2::new(q(x, 3), q(y, 9));
                let expected = if phi.noise().contains(&z) {
                    input.char_fn(&phi.matrix().apply(&z))
                } else {
                    None
                };
                assert_eq!(out.char_fn(&z), expected, "z = {z}");
            }
        }
    }

    #[test]
    fn gain_values() {
        assert_eq!(chan("3,0;0,1", "1,0;0,1").unwrap().gain(), LogLedger::term(3u64, -1));
        assert!(chan("2,1;1,1", "1,0;0,1").unwrap().gain().is_zero());
        assert_eq!(chan("1/3,0;0,1", "3,0;0,1").unwrap().gain(), LogLedger::term(3u64, 1));
    }

    #[test]
    fn thresholds() {
        assert_eq!(chan("3,0;0,1", "1,0;0,1").unwrap().threshold(), 1);
        assert_eq!(chan("2,1;1,1", "1,0;0,1").unwrap().threshold(), 0);
        assert_eq!(chan("9,0;0,1", "1,0;0,1").unwrap().threshold(), 2);
    }

    #[test]
    fn witnesses() {
        let phi = chan("3,0;0,1", "1,0;0,1").unwrap();
        let input = GaussianState::centred(Lattice::standard(p3()).scale(1)).unwrap();
        assert_eq!(input.entropy(), LogLedger::term(3u64, 2));
        assert_eq!(phi.apply(&input).unwrap().entropy(), LogLedger::term(3u64, 1));
        assert_eq!(phi.gain_witness(1).unwrap(), phi.gain());
        assert_eq!(
            phi.gain_witness(0),
            Err(Error::BelowThreshold { n: 0, threshold: 1 })
        );

        let sympl_chan = chan("2,1;1,1", "1,0;0,1").unwrap();
        for n in 0..4 {
            assert!(sympl_chan.gain_witness(n).unwrap().is_zero());
        }

        let phi = chan("9,0;0,1", "1,0;0,1").unwrap();
        assert_eq!(phi.gain_witness(2).unwrap(), LogLedger::term(3u64, -2));
    }

    #[test]
    fn identity_norms() {
        let phi = chan("3,0;0,1", "1,0;0,1").unwrap();
        assert_eq!(phi.identity_norm(), q(3, 1));
        assert_eq!(phi.identity_norm_bound(), phi.gain());
        assert_eq!(chan("2,1;1,1", "1,0;0,1").unwrap().identity_norm(), q(1, 1));
        let phi = chan("1/9,0;0,1", "3,0;0,3").unwrap();
        assert_eq!(phi.identity_norm(), q(1, 9));
        assert_eq!(phi.identity_norm_bound(), phi.gain());
    }

    #[test]
    fn large_noise_needs_positive_threshold() {
        // det K = 4 = 1 mod 3 tolerates noise of measure 3; the witness must
        // start where p^n L is a state lattice.
        let noise = lat("3,0;0,1").dual();
        let phi = GaussianChannel::new(Mat2::from_ints(4, 0, 0, 1), noise).unwrap();
        let n = phi.threshold();
        assert_eq!(n, 1);
        assert_eq!(phi.gain_witness(n).unwrap(), phi.gain());
    }
}
