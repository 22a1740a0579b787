//! Rank-two `Z_p`-lattices in the symplectic plane `(Q_p^2, Delta)`.
//!
//! A lattice is stored as a rational basis (columns are generators) together
//! with its canonical form
//!
//! ```text
//!     [[p^a,  0 ],
//!      [ c,  p^b]]
//! ```
//!
//! where `c` is reduced to `p^b * {c / p^b}_p`, so `0 <= c < p^b` with a
//! p-power denominator. Two bases generate the same lattice exactly when their
//! canonical forms agree entrywise, so equality and hashing use it directly.
//!
//! Only p-valuations of the rational entries ever matter; all work is done
//! over the localization `Z_(p)`, which gives the same lattices as `Z_p`.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{sympl, Mat2, Vec2};
use crate::padic::{frac_p, is_integral, ord, Prime, Rational};

#[derive(Clone, Debug)]
pub struct Lattice {
    p: Prime,
    basis: Mat2,
    canonical: Mat2,
    /// `a + b` from the canonical pivots, i.e. `vp(det basis)`.
    det_exponent: i64,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.canonical == other.canonical
    }
}

impl Eq for Lattice {}

impl Hash for Lattice {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.canonical.hash(state);
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L_{}[{}]", self.p, self.canonical)
    }
}

/// Column reduction of a generating set over `Z_(p)`.
///
/// Returns the canonical basis and its determinant exponent, or `None` when the
/// generators do not span the plane.
fn reduce(mut gens: Vec<Vec2>, p: Prime) -> Option<(Mat2, i64)> {
    // First pivot: minimal valuation in the top row.
    let i = gens
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.x1.is_zero())
        .min_by_key(|(_, g)| ord(&g.x1, p))
        .map(|(i, _)| i)?;
    let pivot = gens.swap_remove(i);
    let rest: Vec<Vec2> = gens
        .iter()
        .map(|g| g - &pivot.scaled(&(&g.x1 / &pivot.x1)))
        .collect();

    // Second pivot: the remaining generators live on the second axis.
    let second = rest
        .iter()
        .filter(|g| !g.x2.is_zero())
        .min_by_key(|g| ord(&g.x2, p))?;

    let a = ord(&pivot.x1, p);
    let b = ord(&second.x2, p);
    let pa = p.pow(a);
    let pb = p.pow(b);
    let unit = &pivot.x1 / &pa;
    let c = &pivot.x2 / &unit;
    let c = &pb * frac_p(&(&c / &pb), p);
    Some((Mat2::new(pa, Rational::zero(), c, pb), a + b))
}

fn check_prime(p: Prime, q: Prime) -> Result<()> {
    if p == q {
        Ok(())
    } else {
        Err(Error::PrimeMismatch(p.get(), q.get()))
    }
}

impl Lattice {
    /// The lattice spanned over `Z_p` by the columns of `basis`.
    pub fn from_basis(basis: Mat2, p: Prime) -> Result<Self> {
        if basis.is_singular() {
            return Err(Error::Singular(format!("lattice basis {basis}")));
        }
        let (canonical, det_exponent) =
            reduce(basis.columns().to_vec(), p).expect("nonsingular basis spans the plane");
        Ok(Lattice {
            p,
            basis,
            canonical,
            det_exponent,
        })
    }

    /// The lattice spanned by an arbitrary generating set.
    pub fn from_generators(gens: Vec<Vec2>, p: Prime) -> Result<Self> {
        let (canonical, det_exponent) = reduce(gens, p)
            .ok_or_else(|| Error::Singular("generators do not span the plane".into()))?;
        Ok(Lattice {
            p,
            basis: canonical.clone(),
            canonical,
            det_exponent,
        })
    }

    /// `Z_p e1 + Z_p e2`.
    pub fn standard(p: Prime) -> Self {
        Lattice::from_basis(Mat2::identity(), p).expect("identity is nonsingular")
    }

    /// `diag(p^a, p^b) * L0`.
    pub fn diagonal(p: Prime, a: i64, b: i64) -> Self {
        Lattice::from_basis(Mat2::diag(p.pow(a), p.pow(b)), p).expect("diagonal p-powers")
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// The basis this lattice was built from.
    pub fn basis(&self) -> &Mat2 {
        &self.basis
    }

    pub fn canonical_form(&self) -> &Mat2 {
        &self.canonical
    }

    /// Pivot exponents `(a, b)` of the canonical form.
    pub fn pivots(&self) -> (i64, i64) {
        let a = ord(&self.canonical.a, self.p);
        (a, self.det_exponent - a)
    }

    /// `n` with `|L| = p^(-n)`.
    pub fn measure_exponent(&self) -> i64 {
        self.det_exponent
    }

    /// Haar measure normalized so that self-dual lattices have measure one.
    pub fn measure(&self) -> Rational {
        self.p.pow(-self.det_exponent)
    }

    pub fn contains(&self, v: &Vec2) -> bool {
        let m = &self.canonical;
        let y1 = &v.x1 / &m.a;
        let y2 = (&v.x2 - &m.c * &y1) / &m.d;
        is_integral(&y1, self.p) && is_integral(&y2, self.p)
    }

    pub fn subset(&self, other: &Lattice) -> Result<bool> {
        check_prime(self.p, other.p)?;
        Ok(self.canonical.columns().iter().all(|g| other.contains(g)))
    }

    /// `L* = { u : Delta(u, v) in Z_p for all v in L }`, spanned by `J B^(-T)`.
    pub fn dual(&self) -> Lattice {
        let inv_t = self
            .canonical
            .inverse()
            .expect("canonical basis is nonsingular")
            .transpose();
        Lattice::from_basis(&Mat2::j() * &inv_t, self.p).expect("dual basis is nonsingular")
    }

    pub fn is_self_dual(&self) -> bool {
        let by_measure = self.det_exponent == 0;
        let by_duality = *self == self.dual();
        assert_eq!(
            by_measure, by_duality,
            "unit measure and self-duality disagree for {self}"
        );
        by_duality
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        check_prime(self.p, other.p)?;
        let mut gens = self.canonical.columns().to_vec();
        gens.extend(other.canonical.columns());
        Lattice::from_generators(gens, self.p)
    }

    /// Computed as `(L1* + L2*)*`.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        Ok(self.dual().sum(&other.dual())?.dual())
    }

    /// `p^n L`.
    ///
    /// Both coordinates scale, so `|p^n L| = p^(-2n) |L|`. A one-dimensional
    /// count would give `p^(-n) |L|`; the two-dimensional Haar value is the one
    /// used everywhere in this crate. The entropy-gain witness only relies on
    /// the inclusions `p^n L` inside `L` and on the measure tending to zero,
    /// which hold under either reading.
    pub fn scale(&self, n: i64) -> Lattice {
        Lattice::from_basis(self.canonical.scaled(&self.p.pow(n)), self.p)
            .expect("scaling preserves nonsingularity")
    }

    /// `K L`, with `|K L| = |det K|_p |L|`.
    pub fn apply_matrix(&self, k: &Mat2) -> Result<Lattice> {
        if k.is_singular() {
            return Err(Error::Singular(format!("transformation {k}")));
        }
        Lattice::from_basis(k * &self.canonical, self.p)
    }

    /// A basis `(e1, e2)` of a self-dual lattice with `Delta(e1, e2) = 1`.
    pub fn symplectic_basis(&self) -> Result<(Vec2, Vec2)> {
        if !self.is_self_dual() {
            return Err(Error::NotSelfDual {
                measure: self.measure().to_string(),
            });
        }
        let [u, v] = self.canonical.columns();
        // Delta(u, v) = det of the canonical basis, a p-adic unit here.
        let d = sympl(&u, &v);
        Ok((u, v.scaled(&d.recip())))
    }

    /// `(S, n)` with `det S = 1` and `L = S diag(p^n, 1) L0`, `|L| = p^(-n)`.
    pub fn diagonalize_symplectic(&self) -> (Mat2, i64) {
        let n = self.det_exponent;
        let [u, v] = self.canonical.columns();
        let unit = sympl(&u, &v) / self.p.pow(n);
        let s = Mat2::from_columns(&u.scaled(&self.p.pow(-n)), &v.scaled(&unit.recip()));
        debug_assert!(s.det().is_one());
        (s, n)
    }

    /// A symplectic `S` with `S L1 = L2`; requires equal measures.
    pub fn transport(&self, target: &Lattice) -> Result<Mat2> {
        check_prime(self.p, target.p)?;
        if self.det_exponent != target.det_exponent {
            return Err(Error::MeasureMismatch(
                self.measure().to_string(),
                target.measure().to_string(),
            ));
        }
        let (s1, _) = self.diagonalize_symplectic();
        let (s2, _) = target.diagonalize_symplectic();
        Ok(&s2 * &s1.inverse().expect("symplectic matrices are invertible"))
    }
}
