//! Embedded invariant checks behind `cavdd selftest`.

use std::fmt;

use cavdd_core::cavity_modes::{mode_function, ModeIndex};
use cavdd_core::effective_coupling::{first_order_residual, SingleModeSystem};
use cavdd_core::ewald::{free_space_probe, gamma_cutoff, select_truncation, CavityGreen, FREE_SPACE_PROBE_TOL};
use cavdd_core::{CavityGeometry, Constants, EwaldParams, Vec3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Negative control: flip the sign of the spectral part everywhere.
    pub flip_spectral_sign: bool,
    /// Scale Kc while keeping the truncations chosen for the default Kc.
    pub kc_scale: Option<f64>,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            flip_spectral_sign: false,
            kc_scale: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub threshold: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.measured.is_finite() && self.measured <= self.threshold
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<24} measured {:.3e}  threshold {:.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.threshold
        )
    }
}

const K: Constants = Constants::natural();

fn unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if v.norm() > 0.1 && v.norm() <= 1.0 {
            return v * (1.0 / v.norm());
        }
    }
}

fn point(rng: &mut ChaCha8Rng, g: &CavityGeometry, margin: f64) -> Vec3 {
    let s = g.sides();
    Vec3::from_array(std::array::from_fn(|a| rng.random_range(margin..1.0 - margin) * s[a]))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

struct Setup {
    g: CavityGeometry,
    params: EwaldParams,
}

impl Setup {
    // Parameters under test at wavenumber k, honoring the debug options.
    fn params(&self, opts: &SelftestOptions, k: f64) -> EwaldParams {
        let mut p = EwaldParams {
            flip_spectral_sign: opts.flip_spectral_sign,
            ..self.params
        };
        if let Some(scale) = opts.kc_scale {
            let frozen = select_truncation(k, &self.g, &self.params).expect("default truncation");
            p.kc *= scale;
            p.image_range = Some(frozen.image_range);
            p.mode_cutoff = Some(frozen.mode_cutoff);
        }
        p
    }
}

fn kc_invariance(setup: &Setup, opts: &SelftestOptions, rng: &mut ChaCha8Rng) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let (r1, r2) = (point(rng, &setup.g, 0.1), point(rng, &setup.g, 0.1));
        let (m1, m2) = (unit(rng), unit(rng));
        let omega = rng.random_range(1.0..20.0);
        let reference = CavityGreen::new(setup.g, setup.params, K, omega)
            .and_then(|s| s.directional(r2, r1, m2, m1, omega))
            .map(|d| d.total);
        let base = setup.params(opts, omega);
        for scale in [0.5, 1.0, 2.0] {
            let p = if opts.kc_scale.is_some() {
                EwaldParams { kc: base.kc * scale, ..base }
            } else {
                base.with_kc(base.kc * scale)
            };
            let v = CavityGreen::new(setup.g, p, K, omega).and_then(|s| s.directional(r2, r1, m2, m1, omega));
            worst = match (&reference, v) {
                (Ok(r), Ok(v)) => worst.max(rel(v.total, *r)),
                _ => f64::INFINITY,
            };
        }
    }
    Check {
        name: "kc-invariance",
        measured: worst,
        threshold: 1e-8,
    }
}

fn free_space_limit(opts: &SelftestOptions) -> Check {
    Check {
        name: "free-space-limit",
        measured: free_space_probe(opts.flip_spectral_sign).map_or(f64::INFINITY, |p| p.relative_error),
        threshold: FREE_SPACE_PROBE_TOL,
    }
}

fn boundary(setup: &Setup, opts: &SelftestOptions, rng: &mut ChaCha8Rng) -> Check {
    let omega = 7.3;
    let p = setup.params(opts, omega);
    let Ok(solver) = CavityGreen::new(setup.g, p, K, omega) else {
        return Check { name: "boundary-conditions", measured: f64::INFINITY, threshold: 1e-10 };
    };
    let rp = point(rng, &setup.g, 0.15);
    let scale = solver
        .green_a(point(rng, &setup.g, 0.2), rp, omega)
        .map_or(f64::NAN, |g| g.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    let mut worst: f64 = 0.0;
    for axis in 0..3 {
        for wall in [0.0, setup.g.sides()[axis]] {
            let on = point(rng, &setup.g, 0.05).with(axis, wall);
            match solver.green_a(on, rp, omega) {
                Ok(ga) => {
                    for s in (0..3).filter(|&s| s != axis) {
                        worst = worst.max(ga[s].abs() / scale);
                    }
                }
                Err(_) => worst = f64::INFINITY,
            }
        }
    }
    Check {
        name: "boundary-conditions",
        measured: worst,
        threshold: 1e-10,
    }
}

const LEVI_CIVITA: [(usize, usize, usize, f64); 6] = [
    (0, 1, 2, 1.0),
    (1, 2, 0, 1.0),
    (2, 0, 1, 1.0),
    (0, 2, 1, -1.0),
    (2, 1, 0, -1.0),
    (1, 0, 2, -1.0),
];

fn eps(i: usize, j: usize, k: usize) -> f64 {
    LEVI_CIVITA
        .iter()
        .find(|(a, b, c, _)| (*a, *b, *c) == (i, j, k))
        .map_or(0.0, |e| e.3)
}

fn fd_tensor(setup: &Setup, opts: &SelftestOptions, rng: &mut ChaCha8Rng) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..2 {
        let omega = rng.random_range(1.0..15.0);
        let (r1, r2) = loop {
            let (a, b) = (point(rng, &setup.g, 0.1), point(rng, &setup.g, 0.1));
            if (a - b).norm() > 0.15 {
                break (a, b);
            }
        };
        let Ok(solver) = CavityGreen::new(setup.g, setup.params(opts, omega), K, omega) else {
            return Check { name: "fd-tensor", measured: f64::INFINITY, threshold: 1e-6 };
        };
        let Ok(analytic) = solver.tensor(r2, r1, omega) else {
            return Check { name: "fd-tensor", measured: f64::INFINITY, threshold: 1e-6 };
        };
        let green = |a: Vec3, b: Vec3| solver.green_a(a, b, omega).unwrap_or([f64::NAN; 3]);
        // d[l][k][n] = d_{2k} d_{1n} G^l, Richardson over h and h/2
        let mixed = |h: f64| {
            let mut d = [[[0.0; 3]; 3]; 3];
            for k in 0..3 {
                for n in 0..3 {
                    let (ek, en) = (Vec3::axis(k), Vec3::axis(n));
                    let at = |a: f64, b: f64| green(r2 + ek * (a * h), r1 + en * (b * h));
                    let (pp, pm, mp, mm) = (at(1.0, 1.0), at(1.0, -1.0), at(-1.0, 1.0), at(-1.0, -1.0));
                    for l in 0..3 {
                        d[l][k][n] = (pp[l] - pm[l] - mp[l] + mm[l]) / (4.0 * h * h);
                    }
                }
            }
            d
        };
        let (coarse, fine) = (mixed(4e-3), mixed(2e-3));
        let scale = analytic.t.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..3 {
            for j in 0..3 {
                let mut fd = 0.0;
                for l in 0..3 {
                    for k in 0..3 {
                        for n in 0..3 {
                            let e = eps(i, k, l) * eps(j, l, n);
                            if e != 0.0 {
                                fd += e * (4.0 * fine[l][k][n] - coarse[l][k][n]) / 3.0;
                            }
                        }
                    }
                }
                worst = worst.max((fd - analytic.t[i][j]).abs() / scale);
            }
        }
    }
    Check {
        name: "fd-tensor",
        measured: if worst.is_nan() { f64::INFINITY } else { worst },
        threshold: 1e-6,
    }
}

fn gamma_limit(rng: &mut ChaCha8Rng) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let q: f64 = rng.random_range(1.0..60.0);
        let k: f64 = rng.random_range(0.0..60.0);
        if (q - k).abs() < 0.05 {
            continue;
        }
        worst = match gamma_cutoff(k, q, 1e6, 1e-9) {
            Ok(g) => worst.max(rel(g, 1.0 / (q * q - k * k))),
            Err(_) => f64::INFINITY,
        };
    }
    Check {
        name: "gamma-limit",
        measured: worst,
        threshold: 1e-8,
    }
}

fn orthonormality(rng: &mut ChaCha8Rng) -> Check {
    // The midpoint rule with N points is exact for these trigonometric
    // products while the summed index stays below 2N.
    let g = CavityGeometry::new(1.0, 1.2, 0.9).expect("geometry");
    let n = 24;
    let nodes: Vec<[f64; 3]> = (0..n).map(|i| g.sides().map(|l| (i as f64 + 0.5) * l / n as f64)).collect();
    let weight = g.volume() / (n * n * n) as f64;
    let random_mode = |rng: &mut ChaCha8Rng| loop {
        let idx = ModeIndex::new(rng.random_range(0..6), rng.random_range(0..6), rng.random_range(0..6));
        if !idx.is_trivial() {
            break idx;
        }
    };
    let mut worst: f64 = 0.0;
    for trial in 0..10 {
        let a = random_mode(rng);
        let b = if trial % 3 == 0 { a } else { random_mode(rng) };
        let mut overlap = [0.0; 3];
        for x in &nodes {
            for y in &nodes {
                for z in &nodes {
                    let r = Vec3::new(x[0], y[1], z[2]);
                    let (Ok(fa), Ok(fb)) = (mode_function(a, r, &g), mode_function(b, r, &g)) else {
                        return Check { name: "orthonormality", measured: f64::INFINITY, threshold: 1e-6 };
                    };
                    for s in 0..3 {
                        overlap[s] += weight * fa.get(s) * fb.get(s);
                    }
                }
            }
        }
        for (s, v) in overlap.iter().enumerate() {
            let live = a.indices().iter().enumerate().all(|(ax, &i)| ax == s || i != 0);
            let expected = if a == b && live { 1.0 } else { 0.0 };
            worst = worst.max((v - expected).abs());
        }
    }
    Check {
        name: "orthonormality",
        measured: worst,
        threshold: 1e-6,
    }
}

fn fn_residual(rng: &mut ChaCha8Rng) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let nu: f64 = rng.random_range(0.5..3.0);
        let w1 = nu + rng.random_range(0.05..2.0);
        let w2 = (nu - rng.random_range(0.05..0.4f64)).max(0.01);
        let c = |rng: &mut ChaCha8Rng| Complex64::new(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3));
        let (g1, g2) = (c(rng), c(rng));
        worst = match SingleModeSystem::new(w1, w2, nu, g1, g2).and_then(|s| first_order_residual(&s)) {
            Ok(r) => worst.max(r),
            Err(_) => f64::INFINITY,
        };
    }
    Check {
        name: "fn-residual",
        measured: worst,
        threshold: 1e-14,
    }
}

pub fn run_selftest(opts: &SelftestOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let g = CavityGeometry::new(1.0, 1.1, 0.9).expect("geometry");
    let setup = Setup {
        g,
        params: EwaldParams::for_geometry(&g),
    };
    vec![
        kc_invariance(&setup, opts, &mut rng),
        free_space_limit(opts),
        boundary(&setup, opts, &mut rng),
        fd_tensor(&setup, opts, &mut rng),
        gamma_limit(&mut rng),
        orthonormality(&mut rng),
        fn_residual(&mut rng),
    ]
}
