use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::channel::{channel_condition, GaussianChannel, GaussianState};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::ledger::LogBase;
use crate::linalg::{Mat2, Vec2};
use crate::padic::Rational;

use super::density::{char_fn, conjugate, entropy_of, indicator_operator, reconstruct, spectrum, DensityMatrix, ZERO_EIG};
use super::system::{FiniteMatrix, FinitePoint, FiniteSubgroup, WeylSystem};

/// Outputs at or above this minimum eigenvalue count as positive.
pub const PSD_VERDICT: f64 = -1e-9;
/// A minimum eigenvalue below this witnesses a violation.
pub const VIOLATION: f64 = -1e-6;
/// The Choi matrix has dimension `p^(2N)`; the scan runs only up to this `p^N`
/// (i.e. `(p, N) = (3, 2)`), beyond which one eigendecomposition per case
/// takes seconds.
pub const CHOI_MAX_DIM: usize = 9;

/// `rho_out = p^(-N) sum_{z in S} Tr(rho_in W(K z)) W(-z)`.
pub fn channel_output(
    sys: &WeylSystem,
    k: &FiniteMatrix,
    noise: &FiniteSubgroup,
    input: &DMatrix<Complex64>,
) -> DMatrix<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    reconstruct(sys, |z| {
        if noise.contains(z) {
            char_fn(sys, input, sys.apply_matrix(k, z))
        } else {
            zero
        }
    })
}

/// Normalized Choi matrix `p^(-N) sum_ij E_ij ⊗ Phi(E_ij)`, indexed
/// `(i p^N + r, j p^N + c)`.
///
/// It is positive semidefinite exactly when the map is completely positive.
pub fn choi_matrix(sys: &WeylSystem, k: &FiniteMatrix, noise: &FiniteSubgroup) -> DMatrix<Complex64> {
    let d = sys.dim();
    let mut c = DMatrix::zeros(d * d, d * d);
    let norm = 1.0 / (d * d) as f64;
    for z in noise.elements() {
        let w = sys.apply_matrix(k, z);
        let mz = sys.neg(z);
        // Tr(E_ij W(w)) = W(w)[j, i], nonzero only at i = j + a_w.
        for j in 0..d {
            let (i, kw) = sys.weyl_entry(w, j);
            let coeff = sys.root(kw) * norm;
            for r in 0..d {
                let (col, kz) = sys.weyl_entry(mz, r);
                c[(i * d + r, j * d + col)] += coeff * sys.root(kz);
            }
        }
    }
    c
}

/// Exact `|1 - det K|_p |L| <= 1` for the diagonal noise lattice.
pub fn expected_predicate(sys: &WeylSystem, k: &Mat2, alpha: i64, beta: i64) -> bool {
    channel_condition(k, &Lattice::diagonal(sys.prime(), alpha, beta)) <= Rational::one()
}

/// A default grid of integral matrices covering determinants `1`, `p`, `p^2`,
/// units `≢ 1 (mod p)` and units `≡ 1 (mod p)`.
pub fn default_matrices(sys: &WeylSystem) -> Vec<Mat2> {
    let p = sys.p() as i64;
    vec![
        Mat2::from_ints(1, 0, 0, 1),
        Mat2::from_ints(1, 1, 0, 1),
        Mat2::from_ints(2, 1, 1, 1),
        Mat2::from_ints(0, 1, -1, 0),
        Mat2::from_ints(p, 0, 0, 1),
        Mat2::from_ints(1, 0, 0, p),
        Mat2::from_ints(p, 1, 0, 1),
        Mat2::from_ints(p, 0, 0, p),
        Mat2::from_ints(p * p, 0, 0, 1),
        Mat2::from_ints(2, 0, 0, 1),
        Mat2::from_ints(-1, 0, 0, 1),
        Mat2::from_ints(1 + p, 0, 0, 1),
        Mat2::from_ints(1, p, p, 1),
        Mat2::from_ints(2, 1, 3, 2),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanParams {
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "K")]
    pub k: String,
    pub noise: [i64; 2],
    /// Input whose output has the smallest eigenvalue.
    pub witness: String,
    pub inputs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanCase {
    pub params: ScanParams,
    pub trace: f64,
    pub min_eig: f64,
    pub spectrum: Vec<f64>,
    pub entropy_nats: Option<f64>,
    pub expected_predicate: bool,
    pub agree: bool,
}

/// PSD verdict against the exact predicate; eigenvalues between the two
/// thresholds are inconclusive and count as disagreement.
pub fn verdict_agrees(min_eig: f64, predicate: bool) -> bool {
    if predicate {
        min_eig >= PSD_VERDICT
    } else {
        min_eig < VIOLATION
    }
}

/// Pushes every admissible centred Gaussian input, and the maximally
/// entangled input through the Choi matrix, through the channel `(K, noise)`.
///
/// Gaussian inputs alone cannot witness every violation: when `det K` is a
/// unit `≢ 1 (mod p)` the output of each Gaussian input is still a state, so the
/// Choi matrix is required for the "only if" direction.
pub fn scan_pair(sys: &WeylSystem, k: &Mat2, alpha: i64, beta: i64) -> Result<ScanCase> {
    let fk = sys.embed_matrix(k)?;
    let noise = sys.window_subgroup(alpha, beta)?;
    if sys.dim() > CHOI_MAX_DIM {
        return Err(Error::OutOfWindow(format!(
            "channel scan needs the Choi matrix; dimension {} exceeds {CHOI_MAX_DIM}",
            sys.dim()
        )));
    }
    let m = sys.window();
    let mut outputs: Vec<(String, DMatrix<Complex64>)> = Vec::new();
    for a in -m..=m {
        for b in -m..=m {
            if a + b < 0 {
                continue;
            }
            let input = indicator_operator(sys, &sys.window_subgroup(a, b)?);
            outputs.push((format!("gaussian({a},{b})"), channel_output(sys, &fk, &noise, &input)));
        }
    }
    outputs.push(("choi".to_string(), choi_matrix(sys, &fk, &noise)));

    let inputs = outputs.len();
    let mut worst: Option<(String, f64, Vec<f64>, Complex64, DMatrix<Complex64>)> = None;
    for (label, out) in outputs {
        let spec = spectrum(&out);
        let min = spec[0];
        if worst.as_ref().map_or(true, |w| min < w.1) {
            worst = Some((label, min, spec, out.trace(), out));
        }
    }
    let (witness, min_eig, spec, trace, out) = worst.expect("at least one input");
    let entropy_nats = DensityMatrix::new(out).ok().map(|rho| entropy_of(&rho));
    let predicate = expected_predicate(sys, k, alpha, beta);
    Ok(ScanCase {
        params: ScanParams {
            p: sys.prime().get(),
            n: sys.exponent(),
            k: k.to_string(),
            noise: [alpha, beta],
            witness,
            inputs,
        },
        trace: trace.re,
        min_eig,
        spectrum: spec,
        entropy_nats,
        expected_predicate: predicate,
        agree: verdict_agrees(min_eig, predicate),
    })
}

/// Scans `matrices × noise window`, in that order, stopping after `max_cases`.
pub fn channel_validity_scan(
    sys: &WeylSystem,
    matrices: &[Mat2],
    max_cases: Option<usize>,
) -> Result<Vec<ScanCase>> {
    let m = sys.window();
    let mut cases = Vec::new();
    'outer: for k in matrices {
        for alpha in -m..=m {
            for beta in -m..=m {
                if max_cases.is_some_and(|n| cases.len() >= n) {
                    break 'outer;
                }
                cases.push(scan_pair(sys, k, alpha, beta)?);
            }
        }
    }
    Ok(cases)
}

/// Oracle versus exact pipeline on one channel and one input state.
#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    /// Largest gap between the oracle spectrum and the flat spectrum of the
    /// exact output.
    pub spectrum_deviation: f64,
    pub entropy_oracle: f64,
    pub entropy_exact: f64,
    /// Largest gap between oracle and exact characteristic functions.
    pub char_fn_deviation: f64,
}

impl CrossCheck {
    pub fn within(&self, tol: f64) -> bool {
        self.spectrum_deviation < tol
            && (self.entropy_oracle - self.entropy_exact).abs() < tol
            && self.char_fn_deviation < tol
    }
}

/// Finite shift whose conjugation reproduces the exact shift `alpha`:
/// `W(s) rho W(-s)` has characteristic function `e(-Delta(s, z) / p^N)` on the
/// support, so `s = -p^m alpha`.
pub fn embed_shift(sys: &WeylSystem, alpha: &Vec2) -> Result<FinitePoint> {
    sys.embed_point(&-alpha)
}

fn phase_value(angle: &Rational) -> Complex64 {
    Complex64::from_polar(1.0, TAU * angle.to_f64().expect("finite angle"))
}

/// Runs `input` through the exact channel and through the oracle and compares
/// spectra, entropies and characteristic functions at every finite point.
pub fn cross_check(
    sys: &WeylSystem,
    channel: &GaussianChannel,
    input: &GaussianState,
) -> Result<CrossCheck> {
    let exact = channel.apply(input)?;
    let fk = sys.embed_matrix(channel.matrix())?;
    let noise = sys.embed_lattice(channel.noise())?;
    let s_in = sys.embed_lattice(input.lattice())?;
    let rho_in = conjugate(sys, &indicator_operator(sys, &s_in), embed_shift(sys, input.shift())?);
    let rho_out = DensityMatrix::new(channel_output(sys, &fk, &noise, &rho_in))?;

    let n = exact.entropy_exponent() as u32;
    let rank = sys.p().pow(n);
    let level = 1.0 / rank as f64;
    let d = sys.dim();
    let spectrum_deviation = rho_out
        .spectrum()
        .iter()
        .enumerate()
        .map(|(i, &l)| (l - if i >= d - rank { level } else { 0.0 }).abs())
        .fold(0.0, f64::max);

    let inv = sys.prime().pow(-sys.window());
    let mut char_fn_deviation = 0.0f64;
    for z in sys.points() {
        let exact_z = Vec2::from_ints(z.a as i64, z.b as i64).scaled(&inv);
        let expected = exact
            .char_fn(&exact_z)
            .map_or(Complex64::new(0.0, 0.0), |ph| phase_value(ph.angle()));
        let got = char_fn(sys, rho_out.matrix(), z);
        char_fn_deviation = char_fn_deviation.max((got - expected).norm());
    }

    let entropy_oracle = entropy_of(&rho_out);
    debug_assert!(rho_out.spectrum().iter().all(|&l| l > -ZERO_EIG));
    Ok(CrossCheck {
        spectrum_deviation,
        entropy_oracle,
        entropy_exact: exact.entropy().value(LogBase::E),
        char_fn_deviation,
    })
}
