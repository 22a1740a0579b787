use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::channel::{GaussianChannel, GaussianState};
use crate::error::Error;
use crate::lattice::Lattice;
use crate::linalg::{Mat2, Vec2};
use crate::padic::Prime;

fn sys(p: u64, n: u32) -> WeylSystem {
    WeylSystem::new(p, n).unwrap()
}

fn origin() -> FinitePoint {
    FinitePoint { a: 0, b: 0 }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn rejects_bad_parameters() {
    assert!(WeylSystem::new(2, 2).is_err());
    assert!(WeylSystem::new(3, 3).is_err());
    assert!(WeylSystem::new(9, 2).is_err());
    assert!(WeylSystem::new(3, 6).is_err());
    assert_eq!(sys(7, 2).dim(), 49);
    let s = sys(5, 2);
    assert_eq!(2 * s.half() % s.dim(), 1);
}

#[test]
fn weyl_zero_is_identity_and_shift_is_cyclic() {
    let s = sys(3, 2);
    let id = DMatrix::<Complex64>::identity(9, 9);
    assert!(max_abs(&(s.weyl_op(origin()) - &id)) < 1e-15);
    let w = s.weyl_op(FinitePoint { a: 1, b: 0 });
    for x in 0..9 {
        for y in 0..9 {
            let expected = if y == (x + 1) % 9 { 1.0 } else { 0.0 };
            assert!((w[(x, y)] - Complex64::new(expected, 0.0)).norm() < 1e-15);
        }
    }
}

#[test]
fn weyl_ops_are_unitary() {
    let s = sys(5, 2);
    let id = DMatrix::<Complex64>::identity(25, 25);
    for z in [s.point(1, 2), s.point(7, 24), s.point(13, 5)] {
        let w = s.weyl_op(z);
        assert!(max_abs(&(&w * w.adjoint() - &id)) < 1e-12);
    }
}

#[test]
fn ccr_by_dense_multiplication() {
    // Independent of the monomial shortcut in `ccr_deviation`.
    let s = sys(3, 2);
    for (z, w) in [((1, 2), (4, 7)), ((8, 8), (3, 1)), ((0, 5), (2, 0))] {
        let (z, w) = (s.point(z.0, z.1), s.point(w.0, w.1));
        let phase = Complex64::from_polar(
            1.0,
            std::f64::consts::TAU * (s.half() * s.sympl(z, w)) as f64 / 9.0,
        );
        let diff = s.weyl_op(z) * s.weyl_op(w) - s.weyl_op(s.add(z, w)) * phase;
        assert!(max_abs(&diff) < 1e-10);
        assert!(s.ccr_deviation(z, w) < 1e-10);
    }
}

#[test]
fn ccr_full_grid_small() {
    let r = ccr_check(&sys(3, 2), 0);
    assert_eq!(r.pairs, 81 * 81);
    assert!(r.pass, "{}", r.max_deviation);
}

#[test]
fn wrong_phase_would_fail_ccr() {
    // Guard against a vacuous check: dropping the half factor breaks the relation.
    let s = sys(3, 2);
    let (z, w) = (s.point(1, 0), s.point(0, 1));
    let product = s.weyl_op(z) * s.weyl_op(w);
    assert!(max_abs(&(product - s.weyl_op(s.add(z, w)))) > 0.1);
}

#[test]
fn self_dual_window_lattice_is_pure() {
    let s = sys(3, 2);
    let rho = gaussian_density(&s, 1, -1, origin()).unwrap();
    assert_eq!(rho.rank(1e-9), 1);
    assert!(entropy_of(&rho).abs() < 1e-9);
    assert!((rho.spectrum()[8] - 1.0).abs() < 1e-9);
}

#[test]
fn one_third_spectrum() {
    let s = sys(3, 2);
    let rho = gaussian_density(&s, 1, 0, origin()).unwrap();
    let spec = rho.spectrum();
    assert!(spec[..6].iter().all(|l| l.abs() < 1e-10));
    assert!(spec[6..].iter().all(|l| (l - 1.0 / 3.0).abs() < 1e-10));
    assert!((entropy_of(&rho) - 3f64.ln()).abs() < 1e-9);
}

#[test]
fn density_is_a_projector_multiple() {
    let s = sys(3, 2);
    for (a, b) in [(0, 1), (1, 1), (-1, 1), (0, 0)] {
        let rho = gaussian_density(&s, a, b, s.point(2, 5)).unwrap();
        let rank = 3f64.powi((a + b) as i32);
        let proj = rho.matrix() * Complex64::new(rank, 0.0);
        assert!(max_abs(&(&proj * &proj - &proj)) < 1e-10);
        assert!(hermitian_defect(&proj) < 1e-12);
    }
}

#[test]
fn density_preconditions() {
    let s = sys(3, 2);
    assert!(matches!(
        gaussian_density(&s, 2, 0, origin()),
        Err(Error::OutOfWindow(_))
    ));
    assert!(matches!(
        gaussian_density(&s, 0, -1, origin()),
        Err(Error::NotAState { .. })
    ));
    // The unchecked operator really is not positive there.
    let raw = indicator_operator(&s, &s.window_subgroup(0, -1).unwrap());
    assert!(spectrum(&raw)[0] < -1e-6);
}

#[test]
fn char_fn_of_density_is_indicator() {
    let s = sys(5, 2);
    let rho = gaussian_density(&s, 1, 0, origin()).unwrap();
    let sub = s.window_subgroup(1, 0).unwrap();
    assert_eq!(sub.size(), 25 / 5);
    for z in s.points() {
        let expected = if sub.contains(z) { 1.0 } else { 0.0 };
        assert!((char_fn(&s, rho.matrix(), z) - Complex64::new(expected, 0.0)).norm() < 1e-10);
    }
    assert!((char_fn(&s, rho.matrix(), origin()) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn shifted_density_has_shift_phase() {
    // W(s) rho W(-s) carries e(-Delta(s, z) / p^N) on the support.
    let s = sys(3, 2);
    let shift = s.point(1, 4);
    let rho = gaussian_density(&s, 0, 1, shift).unwrap();
    let sub = s.window_subgroup(0, 1).unwrap();
    for z in sub.elements() {
        let k = (9 - s.sympl(shift, z)) % 9;
        assert!((char_fn(&s, rho.matrix(), z) - s.root(k)).norm() < 1e-10);
    }
}

#[test]
fn equal_n_gives_equal_spectra() {
    let s = sys(3, 2);
    let a = gaussian_density(&s, 1, 0, origin()).unwrap();
    let b = gaussian_density(&s, 1, 0, s.point(3, 7)).unwrap();
    let c = gaussian_density(&s, 0, 1, s.point(1, 1)).unwrap();
    for (x, y) in a.spectrum().iter().zip(b.spectrum()).chain(a.spectrum().iter().zip(c.spectrum())) {
        assert!((x - y).abs() < 1e-9);
    }
}

#[test]
fn every_density_case_passes() {
    for (p, n) in [(3, 2), (5, 2)] {
        let cases = density_cases(&sys(p, n)).unwrap();
        assert_eq!(cases.len(), 6);
        assert!(cases.iter().all(|c| c.pass));
    }
}

#[test]
fn fourier_examples() {
    let s = sys(3, 2);
    let whole = FiniteSubgroup::product(&s, 0, 0);
    let trivial = FiniteSubgroup::product(&s, 2, 2);
    assert_eq!(whole.annihilator(&s).size(), 1);
    assert_eq!(trivial.size(), 1);
    assert_eq!(trivial.annihilator(&s).size(), 81);
    assert!(fourier_dual_check(&s, &whole) < 1e-10);
    assert!(fourier_dual_check(&s, &trivial) < 1e-10);

    // p^(m+1) Z x p^m Z has annihilator p^m Z x p^(m-1) Z.
    let sub = FiniteSubgroup::product(&s, 2, 1);
    let perp = sub.annihilator(&s);
    assert_eq!(perp, FiniteSubgroup::product(&s, 1, 0).annihilator(&s).annihilator(&s));
    for z in s.points() {
        assert_eq!(perp.contains(z), z.a % 3 == 0);
    }
    assert!(fourier_dual_check(&s, &sub) < 1e-10);
}

#[test]
fn fourier_all_product_subgroups() {
    for (p, n) in [(3, 2), (5, 2)] {
        let s = sys(p, n);
        for c in fourier_cases(&s) {
            assert!(c.deviation < 1e-10, "{c:?}");
            assert_eq!(c.size * c.annihilator_size, s.dim() * s.dim());
        }
    }
}

#[test]
fn lattice_embedding_matches_product_form() {
    let s = sys(3, 2);
    let p = Prime::new(3).unwrap();
    for (a, b) in [(1, -1), (0, 1), (-1, 1), (1, 1)] {
        let l = Lattice::diagonal(p, a, b);
        assert_eq!(s.embed_lattice(&l).unwrap(), s.window_subgroup(a, b).unwrap());
    }
    assert!(matches!(
        s.embed_lattice(&Lattice::diagonal(p, 2, 0)),
        Err(Error::OutOfWindow(_))
    ));
    // A non-diagonal lattice: isotropy of the image tracks |L| <= 1.
    let l = Lattice::from_basis(Mat2::parse("3,1;0,1/3").unwrap(), p).unwrap();
    let img = s.embed_lattice(&l).unwrap();
    assert_eq!(img.size(), 9);
    assert!(img.is_isotropic(&s));
}

#[test]
fn isotropy_iff_measure_at_most_one() {
    let s = sys(3, 2);
    for a in -1..=1 {
        for b in -1..=1 {
            let sub = s.window_subgroup(a, b).unwrap();
            assert_eq!(sub.is_isotropic(&s), a + b >= 0, "({a},{b})");
        }
    }
}

#[test]
fn residues() {
    let s = sys(3, 2);
    let half = crate::padic::parse_rational("1/2").unwrap();
    assert_eq!(s.residue(&half).unwrap(), 5);
    assert!(s.residue(&crate::padic::parse_rational("1/3").unwrap()).is_err());
    let k = s.embed_matrix(&Mat2::parse("-1,2;1/2,3").unwrap()).unwrap();
    assert_eq!(k, [[8, 2], [5, 3]]);
}

#[test]
fn symplectic_channel_outputs_are_states() {
    let s = sys(3, 2);
    let case = scan_pair(&s, &Mat2::from_ints(2, 1, 1, 1), -1, 0).unwrap();
    assert!(case.expected_predicate);
    assert!(case.min_eig >= PSD_VERDICT);
    assert!(case.agree);
}

#[test]
fn violation_needs_the_choi_input() {
    // det = 2 is a 3-adic unit not congruent to 1: Gaussian outputs stay
    // positive, only the entangled input reveals the violation.
    let s = sys(3, 2);
    let k = Mat2::from_ints(2, 0, 0, 1);
    let case = scan_pair(&s, &k, -1, 0).unwrap();
    assert!(!case.expected_predicate);
    assert_eq!(case.params.witness, "choi");
    assert!(case.min_eig < VIOLATION);
    assert!(case.agree);

    let fk = s.embed_matrix(&k).unwrap();
    let noise = s.window_subgroup(-1, 0).unwrap();
    for (a, b) in [(0, 0), (1, 0), (1, 1), (-1, 1)] {
        let input = indicator_operator(&s, &s.window_subgroup(a, b).unwrap());
        assert!(spectrum(&channel_output(&s, &fk, &noise, &input))[0] > PSD_VERDICT);
    }
}

#[test]
fn violation_seen_by_gaussian_input() {
    let s = sys(3, 2);
    let case = scan_pair(&s, &Mat2::from_ints(3, 0, 0, 1), -1, 0).unwrap();
    assert!(!case.expected_predicate);
    assert!(case.min_eig < VIOLATION);
}

#[test]
fn choi_of_identity_channel_is_maximally_entangled() {
    let s = sys(3, 2);
    let fk = s.embed_matrix(&Mat2::identity()).unwrap();
    let choi = choi_matrix(&s, &fk, &FiniteSubgroup::product(&s, 0, 0));
    let spec = spectrum(&choi);
    assert!((spec[80] - 1.0).abs() < 1e-10);
    assert!(spec[..80].iter().all(|l| l.abs() < 1e-10));
    assert!((choi.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
}

#[test]
fn scan_agrees_at_small_window() {
    let s = sys(3, 2);
    let cases = channel_validity_scan(&s, &default_matrices(&s), None).unwrap();
    assert_eq!(cases.len(), default_matrices(&s).len() * 9);
    assert!(cases.iter().any(|c| c.expected_predicate));
    assert!(cases.iter().any(|c| !c.expected_predicate));
    for c in &cases {
        assert!(c.agree, "{c:?}");
        assert!((c.trace - 1.0).abs() < 1e-9);
    }
    let capped = channel_validity_scan(&s, &default_matrices(&s), Some(5)).unwrap();
    assert_eq!(capped.len(), 5);
}

#[test]
fn scan_rejects_non_integral_matrix() {
    let s = sys(3, 2);
    let k = Mat2::parse("1/3,0;0,3").unwrap();
    assert!(matches!(scan_pair(&s, &k, 0, 0), Err(Error::OutOfWindow(_))));
}

#[test]
fn cross_check_against_exact_channel() {
    let s = sys(3, 2);
    let p = Prime::new(3).unwrap();
    let channel = GaussianChannel::new(Mat2::from_ints(3, 0, 0, 1), Lattice::standard(p)).unwrap();
    let n = channel.threshold();
    let input = GaussianState::centred(Lattice::standard(p).scale(n)).unwrap();
    let check = cross_check(&s, &channel, &input).unwrap();
    assert!(check.within(1e-9), "{check:?}");
    assert!((check.entropy_exact - 3f64.ln()).abs() < 1e-12);
}

#[test]
fn cross_check_with_shift() {
    let s = sys(3, 2);
    let p = Prime::new(3).unwrap();
    let noise = Lattice::from_basis(Mat2::parse("1,0;0,1/3").unwrap(), p).unwrap();
    let channel = GaussianChannel::new(Mat2::from_ints(1, 1, 0, 1), noise).unwrap();
    let input = GaussianState::new(
        Lattice::diagonal(p, 1, 0),
        Vec2::parse("1/3,2").unwrap(),
    )
    .unwrap();
    let check = cross_check(&s, &channel, &input).unwrap();
    assert!(check.within(1e-9), "{check:?}");
}

#[test]
fn full_report_passes() {
    let report = run(&sys(3, 2), None, 0).unwrap();
    assert!(report.all_pass);
    assert!(report.channel_scan.is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ccr_holds_at_random_points(a in 0i64..49, b in 0i64..49, c in 0i64..49, d in 0i64..49) {
        let s = sys(7, 2);
        prop_assert!(s.ccr_deviation(s.point(a, b), s.point(c, d)) < 1e-10);
    }

    #[test]
    fn sympl_is_antisymmetric(a in 0i64..25, b in 0i64..25, c in 0i64..25, d in 0i64..25) {
        let s = sys(5, 2);
        let (z, w) = (s.point(a, b), s.point(c, d));
        prop_assert_eq!((s.sympl(z, w) + s.sympl(w, z)) % 25, 0);
        prop_assert_eq!(s.sympl(z, z), 0);
    }
}
