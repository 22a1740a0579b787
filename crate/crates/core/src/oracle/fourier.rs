use num_complex::Complex64;

use super::system::{FiniteSubgroup, WeylSystem};

/// Largest deviation, over all `z`, between the averaged character sum
/// `|S|^(-1) sum_{s in S} e(Delta(z, s) / p^N)` and the indicator of the
/// annihilator `S^perp`.
///
/// This is the finite form of the statement that the Fourier transform of a
/// lattice indicator is, up to normalization, the indicator of the dual lattice.
pub fn fourier_dual_check(sys: &WeylSystem, s: &FiniteSubgroup) -> f64 {
    let perp = s.annihilator(sys);
    let elements: Vec<_> = s.elements().collect();
    let norm = elements.len() as f64;
    let mut worst = 0.0f64;
    for z in sys.points() {
        let sum: Complex64 = elements.iter().map(|&e| sys.root(sys.sympl(z, e))).sum();
        let expected = if perp.contains(z) { 1.0 } else { 0.0 };
        worst = worst.max((sum / norm - Complex64::new(expected, 0.0)).norm());
    }
    worst
}

/// Every product subgroup `p^i Z x p^j Z`, `0 <= i, j <= N`.
pub fn product_subgroups(sys: &WeylSystem) -> Vec<(u32, u32, FiniteSubgroup)> {
    let n = sys.exponent();
    (0..=n)
        .flat_map(|i| (0..=n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, FiniteSubgroup::product(sys, i, j)))
        .collect()
}
