#![allow(dead_code)]

use cavdd_core::{CavityGeometry, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vec(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}

/// Uniform point at least `margin` (fraction of each side) from the walls.
pub fn interior(rng: &mut ChaCha8Rng, g: &CavityGeometry, margin: f64) -> Vec3 {
    let s = g.sides();
    Vec3::new(
        rng.random_range(margin..1.0 - margin) * s[0],
        rng.random_range(margin..1.0 - margin) * s[1],
        rng.random_range(margin..1.0 - margin) * s[2],
    )
}

/// Two interior points at least `min_sep` apart.
pub fn pair(rng: &mut ChaCha8Rng, g: &CavityGeometry, margin: f64, min_sep: f64) -> (Vec3, Vec3) {
    loop {
        let a = interior(rng, g, margin);
        let b = interior(rng, g, margin);
        if (a - b).norm() >= min_sep {
            return (a, b);
        }
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Fourth-order central Laplacian of `f` at `r`.
pub fn laplacian4(f: &dyn Fn(Vec3) -> f64, r: Vec3, h: f64) -> f64 {
    let f0 = f(r);
    (0..3)
        .map(|a| {
            let e = Vec3::axis(a);
            let p1 = f(r + e * h);
            let m1 = f(r - e * h);
            let p2 = f(r + e * (2.0 * h));
            let m2 = f(r - e * (2.0 * h));
            (-p2 + 16.0 * p1 - 30.0 * f0 + 16.0 * m1 - m2) / (12.0 * h * h)
        })
        .sum()
}

/// Fourth-order central first derivative along `axis`.
pub fn deriv4(f: &dyn Fn(Vec3) -> f64, r: Vec3, axis: usize, h: f64) -> f64 {
    let e = Vec3::axis(axis);
    (f(r - e * (2.0 * h)) - 8.0 * f(r - e * h) + 8.0 * f(r + e * h) - f(r + e * (2.0 * h))) / (12.0 * h)
}

pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `T_ij = sum eps_{ikl} eps_{jln} d_{2k} d_{1n} G^l` by mixed central
/// differences, Richardson-extrapolated from steps `h` and `h/2`.
pub fn curl_curl_fd(green: &dyn Fn(Vec3, Vec3) -> [f64; 3], r2: Vec3, r1: Vec3, h: f64) -> [[f64; 3]; 3] {
    let mixed = |h: f64| -> [[[f64; 3]; 3]; 3] {
        // d[l][k][n] = d_{2k} d_{1n} G^l
        let mut d = [[[0.0; 3]; 3]; 3];
        for k in 0..3 {
            for n in 0..3 {
                let (ek, en) = (Vec3::axis(k), Vec3::axis(n));
                let g = |a: f64, b: f64| green(r2 + ek * (a * h), r1 + en * (b * h));
                let (pp, pm, mp, mm) = (g(1.0, 1.0), g(1.0, -1.0), g(-1.0, 1.0), g(-1.0, -1.0));
                for l in 0..3 {
                    d[l][k][n] = (pp[l] - pm[l] - mp[l] + mm[l]) / (4.0 * h * h);
                }
            }
        }
        d
    };
    let (coarse, fine) = (mixed(h), mixed(h / 2.0));
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                for k in 0..3 {
                    for n in 0..3 {
                        let e = levi_civita(i, k, l) * levi_civita(j, l, n);
                        if e != 0.0 {
                            t[i][j] += e * (4.0 * fine[l][k][n] - coarse[l][k][n]) / 3.0;
                        }
                    }
                }
            }
        }
    }
    t
}

pub fn max_abs(t: &[[f64; 3]; 3]) -> f64 {
    t.iter().flatten().fold(0.0, |a, v| a.max(v.abs()))
}
