mod common;

use cavdd_core::cavity_modes::{component_curls, mode_curl, mode_function, zeta, zeta_components, ModeIndex, ModeTable};
use cavdd_core::{CavityGeometry, Constants, Dipole, LevelPair, Vec3};
use common::*;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

/// Gauss-Legendre nodes and weights on [0, len] from the Jacobi matrix.
fn gauss_legendre(n: usize, len: f64) -> Vec<(f64, f64)> {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        let b = i as f64 / ((4 * i * i - 1) as f64).sqrt();
        jacobi[(i, i - 1)] = b;
        jacobi[(i - 1, i)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut nodes: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let w = 2.0 * eig.eigenvectors[(0, i)].powi(2);
            (0.5 * len * (x + 1.0), 0.5 * len * w)
        })
        .collect();
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    nodes
}

fn random_mode(rng: &mut rand_chacha::ChaCha8Rng) -> ModeIndex {
    loop {
        let idx = ModeIndex::new(rng.random_range(0..5), rng.random_range(0..5), rng.random_range(0..5));
        if !idx.is_trivial() {
            return idx;
        }
    }
}

#[test]
fn quadrature_rule_is_exact_for_polynomials() {
    let q = gauss_legendre(12, 2.0);
    let integral: f64 = q.iter().map(|(x, w)| w * x.powi(9)).sum();
    assert!((integral - 2f64.powi(10) / 10.0).abs() < 1e-12);
}

#[test]
fn modes_are_orthonormal_per_component() {
    let g = CavityGeometry::new(1.0, 1.3, 0.8).unwrap();
    let q: Vec<Vec<(f64, f64)>> = g.sides().iter().map(|&l| gauss_legendre(24, l)).collect();
    let mut rng = rng(21);
    let mut pairs: Vec<(ModeIndex, ModeIndex)> = (0..8).map(|_| (random_mode(&mut rng), random_mode(&mut rng))).collect();
    let same = random_mode(&mut rng);
    pairs.push((same, same));
    pairs.push((ModeIndex::new(0, 1, 2), ModeIndex::new(0, 1, 2)));
    for (a, b) in pairs {
        let mut overlap = [0.0; 3];
        for (x, wx) in &q[0] {
            for (y, wy) in &q[1] {
                for (z, wz) in &q[2] {
                    let r = Vec3::new(*x, *y, *z);
                    let (fa, fb) = (mode_function(a, r, &g).unwrap(), mode_function(b, r, &g).unwrap());
                    for s in 0..3 {
                        overlap[s] += wx * wy * wz * fa.get(s) * fb.get(s);
                    }
                }
            }
        }
        for (s, value) in overlap.iter().enumerate() {
            // component s vanishes identically when another axis index is zero
            let live = a.indices().iter().enumerate().all(|(ax, &i)| ax == s || i != 0);
            let expected = if a == b && live { 1.0 } else { 0.0 };
            assert!((value - expected).abs() <= 1e-6, "{a} {b} sigma {s}: {value}");
        }
    }
}

#[test]
fn analytic_curls_match_finite_differences() {
    let g = CavityGeometry::new(1.0, 1.3, 0.8).unwrap();
    let mut rng = rng(22);
    for _ in 0..50 {
        let idx = random_mode(&mut rng);
        let r = interior(&mut rng, &g, 0.01);
        let h = 1e-3;
        let comp = |s: usize| move |x: Vec3| mode_function(idx, x, &g).unwrap().get(s);
        let d = |s: usize, axis: usize| deriv4(&comp(s), r, axis, h);
        let fd = Vec3::new(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
        let exact = mode_curl(idx, r, &g).unwrap();
        let scale = idx.k(&g) * (8.0 / g.volume()).sqrt();
        assert!((fd - exact).norm() <= 1e-8 * scale, "{idx}: {fd} vs {exact}");

        let parts = component_curls(idx, r, &g).unwrap();
        for (sigma, part) in parts.iter().enumerate() {
            let dd = |axis: usize| deriv4(&comp(sigma), r, axis, h);
            let e = Vec3::axis(sigma);
            let grad = Vec3::new(dd(0), dd(1), dd(2));
            // curl(f e) = grad f x e
            let fd_part = grad.cross(e);
            assert!((fd_part - *part).norm() <= 1e-8 * scale);
        }
    }
}

#[test]
fn components_satisfy_helmholtz_eigenrelation() {
    let g = CavityGeometry::new(1.0, 1.3, 0.8).unwrap();
    let mut rng = rng(23);
    for _ in 0..30 {
        let idx = random_mode(&mut rng);
        let r = interior(&mut rng, &g, 0.05);
        let k2 = idx.k(&g).powi(2);
        for s in 0..3 {
            let f = |x: Vec3| mode_function(idx, x, &g).unwrap().get(s);
            let lap = laplacian4(&f, r, 2e-3);
            assert!((lap + k2 * f(r)).abs() <= 1e-6 * k2 * (8.0 / g.volume()).sqrt());
        }
    }
}

#[test]
fn normal_derivative_vanishes_on_end_caps() {
    let g = CavityGeometry::new(1.0, 1.3, 0.8).unwrap();
    let mut rng = rng(24);
    for _ in 0..20 {
        let idx = random_mode(&mut rng);
        let r = interior(&mut rng, &g, 0.05);
        for sigma in 0..3 {
            for wall in [0.0, g.sides()[sigma]] {
                let on = r.with(sigma, wall);
                let f = |x: Vec3| mode_function(idx, x, &g).unwrap().get(sigma);
                // one-sided second-order difference into the box
                let h = 1e-4 * if wall == 0.0 { 1.0 } else { -1.0 };
                let e = Vec3::axis(sigma);
                let d = (-3.0 * f(on) + 4.0 * f(on + e * h) - f(on + e * (2.0 * h))) / (2.0 * h);
                assert!(d.abs() <= 1e-6 * idx.k(&g).powi(2), "{idx} sigma {sigma} wall {wall}: {d}");
            }
        }
    }
}

#[test]
fn zeta_splits_into_components() {
    let g = CavityGeometry::cube(1.0).unwrap();
    let k = Constants::new(1.0, 2.0, 1.0).unwrap();
    let mut rng = rng(25);
    for _ in 0..20 {
        let idx = random_mode(&mut rng);
        let d = Dipole::permanent(interior(&mut rng, &g, 0.05), unit_vec(&mut rng)).unwrap();
        let pair = LevelPair::new(0, 0);
        let total = zeta(&d, pair, idx, &g, &k).unwrap();
        let parts = zeta_components(&d, pair, idx, &g, &k).unwrap();
        assert!((parts.iter().sum::<f64>() - total).abs() <= 1e-12 * (1.0 + total.abs()));
    }
}

#[test]
fn mode_count_follows_weyl_law() {
    // Each (m, n, p) carries up to three components; two polarizations per
    // wavevector give N(k) ~ V k^3 / (3 pi^2).
    let g = CavityGeometry::new(1.0, 1.3, 0.8).unwrap();
    let cutoff = 120.0;
    let table = ModeTable::build(&g, cutoff);
    let all_nonzero = table.modes().iter().filter(|m| m.index.indices().iter().all(|&i| i > 0)).count();
    let one_zero = table.len() - all_nonzero;
    let polarizations = 2 * all_nonzero + one_zero;
    let weyl = g.volume() * cutoff.powi(3) / (3.0 * std::f64::consts::PI.powi(2));
    assert!(rel(polarizations as f64, weyl) < 0.03, "{polarizations} vs {weyl}");
}
