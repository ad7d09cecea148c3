mod common;

use cavdd_core::effective_coupling::{first_order_residual, fn_transform, second_order_terms, SingleModeSystem};
use cavdd_core::Error;
use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;
use proptest::prelude::*;

/// Exact single-excitation spectrum on `|e1 g2 0>, |g1 e2 0>, |g1 g2 1>`.
fn single_excitation(s: &SingleModeSystem) -> SymmetricEigen<Complex64, nalgebra::U3> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let h = Matrix3::new(
        c(s.omega1), c(0.0), s.g1,
        c(0.0), c(s.omega2), s.g2,
        s.g1.conj(), s.g2.conj(), c(s.nu),
    );
    SymmetricEigen::new(h)
}

/// The two eigenpairs with the least photon weight.
fn dressed_dipole_states(s: &SingleModeSystem) -> Vec<(f64, Complex64, Complex64)> {
    let eig = single_excitation(s);
    let mut states: Vec<(f64, Complex64, Complex64, f64)> = (0..3)
        .map(|i| {
            let v = eig.eigenvectors.column(i);
            (eig.eigenvalues[i], v[0], v[1], v[2].norm_sqr())
        })
        .collect();
    states.sort_by(|a, b| a.3.total_cmp(&b.3));
    let mut out: Vec<_> = states[..2].iter().map(|&(e, a, b, _)| (e, a, b)).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

#[test]
fn splitting_matches_exact_diagonalization() {
    let nu = 1.0;
    for &w1 in &[1.3, 1.6, 2.0, 0.5, 0.7] {
        for &w2 in &[1.3, 1.45, 2.5, 0.6] {
            for &(g1, g2) in &[(0.01, 0.015), (0.03, -0.02), (0.02, 0.02)] {
                let s = SingleModeSystem::new(w1, w2, nu, Complex64::new(g1, 0.3 * g1), Complex64::new(g2, -0.5 * g2)).unwrap();
                let t = fn_transform(&s).unwrap();
                let predicted = ((w1 + t.xi1 - w2 - t.xi2).powi(2) + 4.0 * t.beta.norm_sqr()).sqrt();
                let states = dressed_dipole_states(&s);
                let exact = states[1].0 - states[0].0;
                let g = s.g1.norm().max(s.g2.norm());
                let delta = (w1 - nu).abs().min((w2 - nu).abs());
                let bound = 5.0 * g.powi(3) / delta.powi(2);
                assert!((exact - predicted).abs() <= bound, "w=({w1},{w2}) g=({g1},{g2}): {exact} vs {predicted}");
            }
        }
    }
}

#[test]
fn exchange_phase_matches_exact_eigenvectors() {
    // Degenerate dipoles: the upper dressed state is (x, y) with arg(x y*) = arg(beta).
    for phase in [0.3, 1.2, 2.5, -2.0] {
        let g1 = Complex64::from_polar(0.02, phase);
        let g2 = Complex64::new(0.015, 0.0);
        let s = SingleModeSystem::new(1.7, 1.7, 1.0, g1, g2).unwrap();
        let t = fn_transform(&s).unwrap();
        let upper = dressed_dipole_states(&s)[1];
        let got = (upper.1 * upper.2.conj()).arg();
        let diff = (got - t.beta.arg() + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
        assert!(diff.abs() < 1e-3, "phase {phase}: {got} vs {}", t.beta.arg());
    }
}

#[test]
fn worked_example_reproduced() {
    let s = SingleModeSystem::real(2.0, 3.0, 1.0, 0.1, 0.1).unwrap();
    let t = fn_transform(&s).unwrap();
    assert!((t.beta.re - 0.0075).abs() < 1e-15 && t.beta.im == 0.0);
    assert!((t.xi1 - 0.01).abs() < 1e-15);
    assert!((t.xi2 - 0.005).abs() < 1e-15);
}

#[test]
fn detuning_guard_reports_which_dipole() {
    let err = SingleModeSystem::real(2.0, 1.0, 1.0, 0.1, 0.1).unwrap_err();
    assert!(matches!(err, Error::DetuningGuard { which: 2, .. }));
}

fn coupling() -> impl Strategy<Value = Complex64> {
    (-0.5..0.5f64, -0.5..0.5f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn detuned(nu: f64) -> impl Strategy<Value = f64> {
    (0.05..3.0f64, any::<bool>()).prop_map(move |(d, above)| if above { nu + d } else { (nu - d).max(1e-3) })
}

proptest! {
    #[test]
    fn generator_cancels_first_order(
        nu in 0.5..3.0f64, g1 in coupling(), g2 in coupling(), seed in 0.0..1.0f64,
    ) {
        let w1 = nu + 0.05 + 2.0 * seed;
        let w2 = (nu - 0.05 - seed).max(1e-3);
        prop_assume!((w2 - nu).abs() > 1e-3);
        let s = SingleModeSystem::new(w1, w2, nu, g1, g2).unwrap();
        prop_assert!(first_order_residual(&s).unwrap() <= 1e-14);
    }

    #[test]
    fn commutator_route_agrees(nu in 0.5..3.0f64, g1 in coupling(), g2 in coupling(), w1 in detuned(1.5), w2 in detuned(1.5)) {
        prop_assume!((w1 - nu).abs() > 1e-2 && (w2 - nu).abs() > 1e-2);
        let s = SingleModeSystem::new(w1, w2, nu, g1, g2).unwrap();
        let t = fn_transform(&s).unwrap();
        let second = second_order_terms(&s, t.a, t.b);
        let scale = t.beta.norm() + t.xi1.abs() + t.xi2.abs() + 1e-300;
        prop_assert!((second.exchange - t.beta).norm() <= 1e-13 * scale);
        prop_assert!((second.shifts[0].re - t.xi1).abs() <= 1e-13 * scale);
        prop_assert!((second.shifts[1].re - t.xi2).abs() <= 1e-13 * scale);
        prop_assert!(second.shifts[0].im.abs() <= 1e-13 * scale);
        // swapping the dipoles conjugates the exchange
        let swapped = SingleModeSystem::new(w2, w1, nu, g2, g1).unwrap();
        prop_assert!((fn_transform(&swapped).unwrap().beta - t.beta.conj()).norm() <= 1e-14 * scale);
    }
}
