use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{Mat2, Vec2};
use crate::padic::{inv_mod, is_integral, Prime, Rational};

/// Largest Hilbert-space dimension the oracle will build.
pub const MAX_DIM: usize = 343;

/// Finite Weyl system on functions over `Z/p^N`, with `p` odd and `N` even.
///
/// The window exponent `m = N/2` places the self-dual lattice `L0` at
/// `p^m (Z/p^N)^2`; a p-adic lattice `L` with `p^m L0 ⊆ L ⊆ p^(-m) L0` maps
/// to the subgroup `p^m L / p^N`, and `Delta(z, w)` on `Q_p^2` corresponds to
/// `Delta_fin(p^m z, p^m w) / p^N`.
#[derive(Clone, Debug)]
pub struct WeylSystem {
    p: Prime,
    n: u32,
    dim: usize,
    half: usize,
    m: i64,
    roots: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitePoint {
    pub a: usize,
    pub b: usize,
}

/// Integer matrix acting on `(Z/p^N)^2`, row-major.
pub type FiniteMatrix = [[usize; 2]; 2];

impl WeylSystem {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        let prime = Prime::new(p)?;
        if p == 2 {
            return Err(Error::InvalidInput(
                "the Weyl oracle needs an odd prime (2 must be invertible)".into(),
            ));
        }
        if n == 0 || n % 2 == 1 {
            return Err(Error::InvalidInput(format!(
                "window exponent N must be even and positive, got {n}"
            )));
        }
        let dim = p
            .checked_pow(n)
            .filter(|&d| d as usize <= MAX_DIM)
            .ok_or_else(|| {
                Error::InvalidInput(format!("dimension {p}^{n} exceeds the cap {MAX_DIM}"))
            })? as usize;
        let half = (dim + 1) / 2;
        debug_assert_eq!((2 * half) % dim, 1);
        let roots = (0..dim)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / dim as f64))
            .collect();
        Ok(WeylSystem {
            p: prime,
            n,
            dim,
            half,
            m: (n / 2) as i64,
            roots,
        })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn p(&self) -> usize {
        self.p.get() as usize
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Window exponent `m = N/2`.
    pub fn window(&self) -> i64 {
        self.m
    }

    /// Inverse of 2 modulo `p^N`.
    pub fn half(&self) -> usize {
        self.half
    }

    pub fn point(&self, a: i64, b: i64) -> FinitePoint {
        let d = self.dim as i64;
        FinitePoint {
            a: a.rem_euclid(d) as usize,
            b: b.rem_euclid(d) as usize,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = FinitePoint> + '_ {
        (0..self.dim).flat_map(move |a| (0..self.dim).map(move |b| FinitePoint { a, b }))
    }

    pub fn index(&self, z: FinitePoint) -> usize {
        z.a * self.dim + z.b
    }

    pub fn add(&self, z: FinitePoint, w: FinitePoint) -> FinitePoint {
        FinitePoint {
            a: (z.a + w.a) % self.dim,
            b: (z.b + w.b) % self.dim,
        }
    }

    pub fn neg(&self, z: FinitePoint) -> FinitePoint {
        FinitePoint {
            a: (self.dim - z.a) % self.dim,
            b: (self.dim - z.b) % self.dim,
        }
    }

    pub fn scale(&self, k: usize, z: FinitePoint) -> FinitePoint {
        FinitePoint {
            a: (k % self.dim) * z.a % self.dim,
            b: (k % self.dim) * z.b % self.dim,
        }
    }

    /// `Delta(z, w) = a b' - b a'` modulo `p^N`.
    pub fn sympl(&self, z: FinitePoint, w: FinitePoint) -> usize {
        let d = self.dim;
        (z.a * w.b % d + d - z.b * w.a % d) % d
    }

    /// `exp(2 pi i k / p^N)`.
    pub fn root(&self, k: usize) -> Complex64 {
        self.roots[k % self.dim]
    }

    pub fn apply_matrix(&self, k: &FiniteMatrix, z: FinitePoint) -> FinitePoint {
        let d = self.dim;
        FinitePoint {
            a: (k[0][0] * z.a + k[0][1] * z.b) % d,
            b: (k[1][0] * z.a + k[1][1] * z.b) % d,
        }
    }

    /// Row `x` of `W(z)`: the column of its single nonzero entry and the
    /// exponent of that entry, `(W(a,b) f)(x) = e((b x + half a b) / p^N) f(x + a)`.
    pub(crate) fn weyl_entry(&self, z: FinitePoint, x: usize) -> (usize, usize) {
        let d = self.dim;
        let col = (x + z.a) % d;
        let k = (z.b * x % d + self.half * (z.a * z.b % d)) % d;
        (col, k)
    }

    /// Dense matrix of the Weyl operator `W(z)`.
    pub fn weyl_op(&self, z: FinitePoint) -> DMatrix<Complex64> {
        let mut w = DMatrix::zeros(self.dim, self.dim);
        for x in 0..self.dim {
            let (col, k) = self.weyl_entry(z, x);
            w[(x, col)] = self.root(k);
        }
        w
    }

    /// `|| W(z) W(w) - e(half Delta(z,w) / p^N) W(z + w) ||` in operator norm.
    ///
    /// Both sides are monomial with the same support, so the operator norm of
    /// the difference is its largest entry.
    pub fn ccr_deviation(&self, z: FinitePoint, w: FinitePoint) -> f64 {
        let phase = self.root(self.half * self.sympl(z, w) % self.dim);
        let zw = self.add(z, w);
        let mut worst = 0.0f64;
        for x in 0..self.dim {
            let (mid, k1) = self.weyl_entry(z, x);
            let (col, k2) = self.weyl_entry(w, mid);
            let (col2, k3) = self.weyl_entry(zw, x);
            if col != col2 {
                return f64::INFINITY;
            }
            let lhs = self.root(k1) * self.root(k2);
            let rhs = phase * self.root(k3);
            worst = worst.max((lhs - rhs).norm());
        }
        worst
    }

    /// Residue of a p-integral rational modulo `p^N`.
    pub fn residue(&self, x: &Rational) -> Result<usize> {
        if !is_integral(x, self.p) {
            return Err(Error::OutOfWindow(format!("{x} is not {}-integral", self.p)));
        }
        let modulus = BigInt::from(self.dim);
        let inv = inv_mod(x.denom(), &modulus).expect("p-integral denominators are units");
        Ok((x.numer() * inv)
            .mod_floor(&modulus)
            .to_usize()
            .expect("residue below the dimension"))
    }

    /// Reduction of a p-integral matrix modulo `p^N`.
    pub fn embed_matrix(&self, k: &Mat2) -> Result<FiniteMatrix> {
        Ok([
            [self.residue(&k.a)?, self.residue(&k.b)?],
            [self.residue(&k.c)?, self.residue(&k.d)?],
        ])
    }

    /// Image `p^m v` of a point of `p^(-m) Z_p^2`.
    pub fn embed_point(&self, v: &Vec2) -> Result<FinitePoint> {
        let s = self.p.pow(self.m);
        Ok(FinitePoint {
            a: self.residue(&(&v.x1 * &s))?,
            b: self.residue(&(&v.x2 * &s))?,
        })
    }

    /// Whether `p^m L0 ⊆ L ⊆ p^(-m) L0`.
    pub fn fits(&self, lattice: &Lattice) -> bool {
        let l0 = Lattice::standard(self.p);
        lattice.prime() == self.p
            && l0.scale(self.m).subset(lattice).unwrap_or(false)
            && lattice.subset(&l0.scale(-self.m)).unwrap_or(false)
    }

    /// The finite subgroup `p^m L / p^N` of a lattice inside the window.
    pub fn embed_lattice(&self, lattice: &Lattice) -> Result<FiniteSubgroup> {
        if !self.fits(lattice) {
            return Err(Error::OutOfWindow(format!(
                "{lattice} is not between p^{m} L0 and p^-{m} L0",
                m = self.m
            )));
        }
        let [u, v] = lattice.canonical_form().columns();
        Ok(FiniteSubgroup::generated(
            self,
            &[self.embed_point(&u)?, self.embed_point(&v)?],
        ))
    }

    /// Subgroup of `diag(p^alpha, p^beta) L0`, i.e. `p^(m+alpha) Z x p^(m+beta) Z`.
    pub fn window_subgroup(&self, alpha: i64, beta: i64) -> Result<FiniteSubgroup> {
        self.check_window(alpha, beta)?;
        Ok(FiniteSubgroup::product(
            self,
            (self.m + alpha) as u32,
            (self.m + beta) as u32,
        ))
    }

    pub(crate) fn check_window(&self, alpha: i64, beta: i64) -> Result<()> {
        let m = self.m;
        if alpha.abs() > m || beta.abs() > m {
            return Err(Error::OutOfWindow(format!(
                "exponents ({alpha}, {beta}) outside [-{m}, {m}]"
            )));
        }
        Ok(())
    }
}

/// A subgroup of `(Z/p^N)^2`, stored as a membership table.
#[derive(Clone, Debug)]
pub struct FiniteSubgroup {
    dim: usize,
    members: Vec<bool>,
    size: usize,
    generators: Vec<FinitePoint>,
}

impl PartialEq for FiniteSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.members == other.members
    }
}

impl Eq for FiniteSubgroup {}

impl FiniteSubgroup {
    /// Subgroup generated by the given points.
    pub fn generated(sys: &WeylSystem, gens: &[FinitePoint]) -> Self {
        let d = sys.dim();
        let mut members = vec![false; d * d];
        members[0] = true;
        let mut frontier = vec![FinitePoint { a: 0, b: 0 }];
        while let Some(z) = frontier.pop() {
            for g in gens {
                let w = sys.add(z, *g);
                let i = sys.index(w);
                if !members[i] {
                    members[i] = true;
                    frontier.push(w);
                }
            }
        }
        let size = members.iter().filter(|&&b| b).count();
        FiniteSubgroup {
            dim: d,
            members,
            size,
            generators: gens.to_vec(),
        }
    }

    /// `p^ea Z x p^eb Z` for `0 <= ea, eb <= N`.
    pub fn product(sys: &WeylSystem, ea: u32, eb: u32) -> Self {
        let d = sys.dim();
        let g1 = FinitePoint {
            a: sys.p().pow(ea) % d,
            b: 0,
        };
        let g2 = FinitePoint {
            a: 0,
            b: sys.p().pow(eb) % d,
        };
        FiniteSubgroup::generated(sys, &[g1, g2])
    }

    pub fn contains(&self, z: FinitePoint) -> bool {
        self.members[z.a * self.dim + z.b]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn generators(&self) -> &[FinitePoint] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = FinitePoint> + '_ {
        let d = self.dim;
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(move |(i, _)| FinitePoint { a: i / d, b: i % d })
    }

    /// `Delta` vanishes on all pairs of generators (hence on the whole subgroup).
    pub fn is_isotropic(&self, sys: &WeylSystem) -> bool {
        self.generators
            .iter()
            .all(|&g| self.generators.iter().all(|&h| sys.sympl(g, h) == 0))
    }

    /// `{ z : Delta(z, s) = 0 for every s in S }`, by enumeration.
    pub fn annihilator(&self, sys: &WeylSystem) -> FiniteSubgroup {
        let d = sys.dim();
        let mut members = vec![false; d * d];
        let elements: Vec<_> = self.elements().collect();
        for z in sys.points() {
            members[sys.index(z)] = elements.iter().all(|&s| sys.sympl(z, s) == 0);
        }
        let size = members.iter().filter(|&&b| b).count();
        FiniteSubgroup {
            dim: d,
            members,
            size,
            generators: Vec::new(),
        }
    }
}
