//! Finite-dimensional Weyl-operator oracle on `L^2(Z/p^N)`.
//!
//! Everything here is floating point and deliberately brute force; it exists
//! to check the exact modules, not to be fast.

mod density;
mod fourier;
mod scan;
mod system;

pub use density::{
    char_fn, conjugate, entropy_of, gaussian_density, hermitian_defect, indicator_operator,
    lattice_density, reconstruct, spectrum, DensityMatrix, HERMITIAN_TOL, PSD_TOL, TRACE_TOL,
    ZERO_EIG,
};
pub use fourier::{fourier_dual_check, product_subgroups};
pub use scan::{
    channel_output, channel_validity_scan, choi_matrix, cross_check, default_matrices,
    embed_shift, expected_predicate, scan_pair, verdict_agrees, CrossCheck, ScanCase, ScanParams,
    CHOI_MAX_DIM, PSD_VERDICT, VIOLATION,
};
pub use system::{FiniteMatrix, FinitePoint, FiniteSubgroup, WeylSystem, MAX_DIM};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;

pub const ALGEBRAIC_TOL: f64 = 1e-10;
pub const SPECTRAL_TOL: f64 = 1e-9;
/// Above this dimension the CCR check samples pairs instead of the full grid.
pub const CCR_FULL_GRID_DIM: usize = 81;
pub const CCR_SAMPLES: usize = 500;

#[derive(Clone, Debug, Serialize)]
pub struct CcrReport {
    pub pairs: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Weyl relation over every pair of points, or `CCR_SAMPLES` seeded pairs
/// when the grid is too large.
pub fn ccr_check(sys: &WeylSystem, seed: u64) -> CcrReport {
    let points: Vec<_> = sys.points().collect();
    let mut max_deviation = 0.0f64;
    let pairs = if sys.dim() <= CCR_FULL_GRID_DIM {
        max_deviation = ccr_grid(sys, &points);
        points.len() * points.len()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..CCR_SAMPLES {
            let z = points[rng.gen_range(0..points.len())];
            let w = points[rng.gen_range(0..points.len())];
            max_deviation = max_deviation.max(sys.ccr_deviation(z, w));
        }
        CCR_SAMPLES
    };
    CcrReport {
        pairs,
        max_deviation,
        pass: max_deviation < ALGEBRAIC_TOL,
    }
}

/// Full-grid version of [`WeylSystem::ccr_deviation`] with the phase
/// exponents of every `W(z)` tabulated once; same arithmetic, no divisions
/// in the inner loop.
fn ccr_grid(sys: &WeylSystem, points: &[FinitePoint]) -> f64 {
    let d = sys.dim();
    let roots: Vec<_> = (0..d).map(|k| sys.root(k)).collect();
    let table: Vec<u32> = points
        .iter()
        .flat_map(|&z| (0..d).map(move |x| sys.weyl_entry(z, x).1 as u32))
        .collect();
    let row = |z: FinitePoint| &table[sys.index(z) * d..][..d];
    let mut worst = 0.0f64;
    for &z in points {
        let kz = row(z);
        for &w in points {
            let kw = row(w);
            let kzw = row(sys.add(z, w));
            let phase = roots[sys.half() * sys.sympl(z, w) % d];
            let mut mid = z.a;
            for x in 0..d {
                let lhs = roots[kz[x] as usize] * roots[kw[mid] as usize];
                let rhs = phase * roots[kzw[x] as usize];
                worst = worst.max((lhs - rhs).norm_sqr());
                mid += 1;
                if mid == d {
                    mid = 0;
                }
            }
        }
    }
    worst.sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityCase {
    pub alpha: i64,
    pub beta: i64,
    pub n: i64,
    pub trace: f64,
    pub min_eig: f64,
    pub spectrum: Vec<f64>,
    pub entropy_nats: f64,
    /// Largest gap from the flat spectrum `p^(-n)` with multiplicity `p^n`.
    pub spectrum_deviation: f64,
    /// Largest gap between `Tr(rho W(z))` and the subgroup indicator.
    pub char_fn_deviation: f64,
    pub pure: bool,
    pub pass: bool,
}

/// Gaussian density of `diag(p^alpha, p^beta) L0` checked against the flat
/// spectrum, entropy `n ln p`, purity and its characteristic function.
pub fn density_case(sys: &WeylSystem, alpha: i64, beta: i64) -> Result<DensityCase> {
    let origin = FinitePoint { a: 0, b: 0 };
    let rho = gaussian_density(sys, alpha, beta, origin)?;
    let s = sys.window_subgroup(alpha, beta)?;
    let n = alpha + beta;
    let rank = sys.p().pow(n as u32);
    let level = 1.0 / rank as f64;
    let d = sys.dim();
    let spectrum_deviation = rho
        .spectrum()
        .iter()
        .enumerate()
        .map(|(i, &l)| (l - if i >= d - rank { level } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    let char_fn_deviation = sys
        .points()
        .map(|z| {
            let expected = if s.contains(z) { 1.0 } else { 0.0 };
            (char_fn(sys, rho.matrix(), z) - num_complex::Complex64::new(expected, 0.0)).norm()
        })
        .fold(0.0, f64::max);
    let entropy_nats = entropy_of(&rho);
    let pure = rho.rank(SPECTRAL_TOL) == 1;
    let pass = spectrum_deviation < SPECTRAL_TOL
        && char_fn_deviation < ALGEBRAIC_TOL
        && (entropy_nats - n as f64 * (sys.p() as f64).ln()).abs() < SPECTRAL_TOL
        && pure == (n == 0);
    Ok(DensityCase {
        alpha,
        beta,
        n,
        trace: rho.matrix().trace().re,
        min_eig: rho.spectrum()[0],
        spectrum: rho.spectrum().to_vec(),
        entropy_nats,
        spectrum_deviation,
        char_fn_deviation,
        pure,
        pass,
    })
}

/// Every admissible `(alpha, beta)` in the window.
pub fn density_cases(sys: &WeylSystem) -> Result<Vec<DensityCase>> {
    let m = sys.window();
    let mut out = Vec::new();
    for alpha in -m..=m {
        for beta in -m..=m {
            if alpha + beta >= 0 {
                out.push(density_case(sys, alpha, beta)?);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FourierCase {
    pub exponents: [u32; 2],
    pub size: usize,
    pub annihilator_size: usize,
    pub deviation: f64,
}

pub fn fourier_cases(sys: &WeylSystem) -> Vec<FourierCase> {
    product_subgroups(sys)
        .into_iter()
        .map(|(i, j, s)| FourierCase {
            exponents: [i, j],
            size: s.size(),
            annihilator_size: s.annihilator(sys).size(),
            deviation: fourier_dual_check(sys, &s),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u32,
    pub dim: usize,
    pub ccr: CcrReport,
    pub densities: Vec<DensityCase>,
    pub fourier: Vec<FourierCase>,
    /// `None` when the dimension is too large for the Choi matrix.
    pub channel_scan: Option<Vec<ScanCase>>,
    pub all_pass: bool,
}

/// Full oracle run: CCR, Gaussian densities, Fourier identity and the
/// channel scan over [`default_matrices`].
pub fn run(sys: &WeylSystem, max_cases: Option<usize>, seed: u64) -> Result<OracleReport> {
    let ccr = ccr_check(sys, seed);
    let densities = density_cases(sys)?;
    let fourier = fourier_cases(sys);
    let channel_scan = if sys.dim() <= CHOI_MAX_DIM {
        Some(channel_validity_scan(sys, &default_matrices(sys), max_cases)?)
    } else {
        None
    };
    let all_pass = ccr.pass
        && densities.iter().all(|c| c.pass)
        && fourier.iter().all(|c| c.deviation < ALGEBRAIC_TOL)
        && channel_scan
            .as_ref()
            .map_or(true, |cases| cases.iter().all(|c| c.agree));
    Ok(OracleReport {
        p: sys.prime().get(),
        n: sys.exponent(),
        dim: sys.dim(),
        ccr,
        densities,
        fourier,
        channel_scan,
        all_pass,
    })
}

#[cfg(test)]
mod tests;
