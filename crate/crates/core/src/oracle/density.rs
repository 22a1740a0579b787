use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

use super::system::{FinitePoint, FiniteSubgroup, WeylSystem};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues at or below this are dropped from entropy sums.
pub const ZERO_EIG: f64 = 1e-12;

/// A validated density matrix with its spectrum.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: DMatrix<Complex64>,
    spectrum: Vec<f64>,
}

impl DensityMatrix {
    /// Checks hermiticity, unit trace and positivity.
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        let herm = hermitian_defect(&mat);
        if herm > HERMITIAN_TOL {
            return Err(Error::Invariant(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = mat.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::Invariant(format!("trace {tr} is not 1")));
        }
        let spectrum = spectrum(&mat);
        if spectrum[0] < -PSD_TOL {
            return Err(Error::NotAState {
                measure: format!("(finite) minimum eigenvalue {:e}", spectrum[0]),
            });
        }
        Ok(DensityMatrix { mat, spectrum })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.spectrum.iter().filter(|&&l| l > tol).count()
    }
}

pub fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Ascending eigenvalues of the Hermitian part of `m`.
pub fn spectrum(m: &DMatrix<Complex64>) -> Vec<f64> {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    ev
}

/// `rho = p^(-N) sum_z f(z) W(-z)`, the inverse of `z -> Tr(rho W(z))`.
pub fn reconstruct(
    sys: &WeylSystem,
    mut f: impl FnMut(FinitePoint) -> Complex64,
) -> DMatrix<Complex64> {
    let d = sys.dim();
    let mut rho = DMatrix::zeros(d, d);
    for z in sys.points() {
        let c = f(z);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mz = sys.neg(z);
        for x in 0..d {
            let (col, k) = sys.weyl_entry(mz, x);
            rho[(x, col)] += c * sys.root(k);
        }
    }
    rho / Complex64::new(d as f64, 0.0)
}

/// `p^(-N) sum_{z in S} W(-z)` with no validity checks; PSD only for isotropic `S`.
pub fn indicator_operator(sys: &WeylSystem, s: &FiniteSubgroup) -> DMatrix<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    reconstruct(sys, |z| if s.contains(z) { one } else { zero })
}

/// `Tr(rho W(z))`.
pub fn char_fn(sys: &WeylSystem, rho: &DMatrix<Complex64>, z: FinitePoint) -> Complex64 {
    (0..sys.dim())
        .map(|x| {
            let (col, k) = sys.weyl_entry(z, x);
            sys.root(k) * rho[(col, x)]
        })
        .sum()
}

/// `W(s) rho W(-s)`.
pub fn conjugate(sys: &WeylSystem, rho: &DMatrix<Complex64>, s: FinitePoint) -> DMatrix<Complex64> {
    if s == (FinitePoint { a: 0, b: 0 }) {
        return rho.clone();
    }
    let w = sys.weyl_op(s);
    &w * rho * w.adjoint()
}

/// Gaussian state of `diag(p^alpha, p^beta) L0`, conjugated by `W(shift)`.
///
/// Requires `|alpha|, |beta| <= m`; `alpha + beta < 0` is a lattice of measure
/// above one and is rejected as not a state.
pub fn gaussian_density(
    sys: &WeylSystem,
    alpha: i64,
    beta: i64,
    shift: FinitePoint,
) -> Result<DensityMatrix> {
    let s = sys.window_subgroup(alpha, beta)?;
    if alpha + beta < 0 {
        return Err(Error::NotAState {
            measure: format!("p^{}", -(alpha + beta)),
        });
    }
    DensityMatrix::new(conjugate(sys, &indicator_operator(sys, &s), shift))
}

/// Gaussian state of an arbitrary lattice inside the window.
pub fn lattice_density(
    sys: &WeylSystem,
    lattice: &Lattice,
    shift: FinitePoint,
) -> Result<DensityMatrix> {
    let s = sys.embed_lattice(lattice)?;
    if lattice.measure_exponent() < 0 {
        return Err(Error::NotAState {
            measure: lattice.measure().to_string(),
        });
    }
    DensityMatrix::new(conjugate(sys, &indicator_operator(sys, &s), shift))
}

/// `-sum lambda ln lambda` over eigenvalues above [`ZERO_EIG`].
pub fn entropy_of(rho: &DensityMatrix) -> f64 {
    rho.spectrum()
        .iter()
        .filter(|&&l| l > ZERO_EIG)
        .map(|&l| -l * l.ln())
        .sum()
}
