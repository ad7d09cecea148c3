//! Domain types shared by every evaluator: vectors, physical constants,
//! multilevel dipoles, cavity geometry and Ewald parameters.
//!
//! Everything is immutable after construction. The default unit system sets
//! `c = mu0 = hbar = 1` and uses the cavity side as the length unit, so a
//! frequency is quoted as `omega / c` in inverse lengths.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Checked constructor for positions and moments.
    pub fn finite(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Self::new(x, y, z);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { what: "vector" })
        }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Unit vector along axis 0, 1 or 2.
    pub fn axis(index: usize) -> Self {
        match index {
            0 => Self::X,
            1 => Self::Y,
            2 => Self::Z,
            _ => panic!("axis index {index} out of range"),
        }
    }

    pub fn get(self, index: usize) -> f64 {
        self.to_array()[index]
    }

    pub fn with(self, index: usize, value: f64) -> Self {
        let mut a = self.to_array();
        a[index] = value;
        Self::from_array(a)
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

/// Speed of light, vacuum permeability and reduced Planck constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    c: f64,
    mu0: f64,
    hbar: f64,
}

impl Constants {
    pub fn new(c: f64, mu0: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [("c", c), ("mu0", mu0), ("hbar", hbar)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and > 0, got {value}"),
                });
            }
        }
        Ok(Self { c, mu0, hbar })
    }

    /// `c = mu0 = hbar = 1`.
    pub const fn natural() -> Self {
        Self {
            c: 1.0,
            mu0: 1.0,
            hbar: 1.0,
        }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Wavenumber `omega / c`.
    pub fn wavenumber(&self, omega: f64) -> f64 {
        omega / self.c
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::natural()
    }
}

/// Ordered level pair `(a, b)`; labels the operator `|a><b|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelPair {
    pub a: usize,
    pub b: usize,
}

impl LevelPair {
    pub const fn new(a: usize, b: usize) -> Self {
        Self { a, b }
    }

    pub fn is_diagonal(&self) -> bool {
        self.a == self.b
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.b, self.a)
    }
}

// Relative tolerance used for the Hermiticity check on real moment matrices.
const HERMITIAN_RTOL: f64 = 1e-12;

/// A multilevel magnetic dipole: position, level energies and the matrix of
/// real moment vectors `<u|m|v>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dipole {
    position: Vec3,
    energies: Vec<f64>,
    // row-major n x n
    moments: Vec<Vec3>,
}

impl Dipole {
    pub fn new(position: Vec3, energies: Vec<f64>, moments: Vec<Vec<Vec3>>) -> Result<Self> {
        if !position.is_finite() {
            return Err(Error::NonFinite { what: "dipole position" });
        }
        let n = energies.len();
        if n == 0 {
            return Err(Error::NoLevels);
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite { what: "level energy" });
        }
        if let Some(index) = (1..n).find(|&i| energies[i] < energies[i - 1]) {
            return Err(Error::UnsortedEnergies { index });
        }
        if moments.len() != n || moments.iter().any(|row| row.len() != n) {
            let cols = moments.iter().map(Vec::len).find(|&c| c != n).unwrap_or(n);
            return Err(Error::MomentShape {
                expected: n,
                rows: moments.len(),
                cols,
            });
        }
        let flat: Vec<Vec3> = moments.into_iter().flatten().collect();
        if flat.iter().any(|m| !m.is_finite()) {
            return Err(Error::NonFinite { what: "moment" });
        }
        for u in 0..n {
            for v in (u + 1)..n {
                let (muv, mvu) = (flat[u * n + v], flat[v * n + u]);
                let scale = muv.norm().max(mvu.norm());
                if (muv - mvu).norm() > HERMITIAN_RTOL * scale {
                    return Err(Error::NonHermitian { u, v });
                }
            }
        }
        Ok(Self {
            position,
            energies,
            moments: flat,
        })
    }

    /// Levels given as angular frequencies; energies are `hbar * omega`.
    pub fn from_frequencies(
        position: Vec3,
        frequencies: &[f64],
        moments: Vec<Vec<Vec3>>,
        k: &Constants,
    ) -> Result<Self> {
        let energies = frequencies.iter().map(|w| w * k.hbar()).collect();
        Self::new(position, energies, moments)
    }

    /// Single-level dipole carrying only a permanent moment.
    pub fn permanent(position: Vec3, moment: Vec3) -> Result<Self> {
        Self::new(position, vec![0.0], vec![vec![moment]])
    }

    /// Two-level dipole with gap `omega` (as frequency), transition moment
    /// `transition` and no permanent moments.
    pub fn two_level(position: Vec3, omega: f64, transition: Vec3, k: &Constants) -> Result<Self> {
        Self::from_frequencies(
            position,
            &[0.0, omega],
            vec![
                vec![Vec3::ZERO, transition],
                vec![transition, Vec3::ZERO],
            ],
            k,
        )
    }

    pub fn position(&self) -> Vec3 {
        self.position
    }

    /// Same dipole moved to `position`.
    pub fn at(&self, position: Vec3) -> Self {
        Self {
            position,
            ..self.clone()
        }
    }

    pub fn levels(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn moment(&self, pair: LevelPair) -> Result<Vec3> {
        self.check(pair)?;
        Ok(self.moments[pair.a * self.levels() + pair.b])
    }

    /// All level pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = LevelPair> + '_ {
        let n = self.levels();
        (0..n).flat_map(move |a| (0..n).map(move |b| LevelPair::new(a, b)))
    }

    fn check(&self, pair: LevelPair) -> Result<()> {
        let levels = self.levels();
        for index in [pair.a, pair.b] {
            if index >= levels {
                return Err(Error::LevelOutOfRange { index, levels });
            }
        }
        Ok(())
    }
}

/// Angular frequency `(E_a - E_b) / hbar` of the pair `(a, b)`.
pub fn transition_frequency(d: &Dipole, pair: LevelPair, k: &Constants) -> Result<f64> {
    d.check(pair)?;
    Ok((d.energies[pair.a] - d.energies[pair.b]) / k.hbar())
}

/// Rectangular box `[0, Lx] x [0, Ly] x [0, Lz]` with perfectly conducting walls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    lx: f64,
    ly: f64,
    lz: f64,
}

impl CavityGeometry {
    pub fn new(lx: f64, ly: f64, lz: f64) -> Result<Self> {
        for (name, value) in [("Lx", lx), ("Ly", ly), ("Lz", lz)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("side length must be finite and > 0, got {value}"),
                });
            }
        }
        Ok(Self { lx, ly, lz })
    }

    pub fn cube(side: f64) -> Result<Self> {
        Self::new(side, side, side)
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn lz(&self) -> f64 {
        self.lz
    }

    pub fn sides(&self) -> [f64; 3] {
        [self.lx, self.ly, self.lz]
    }

    pub fn volume(&self) -> f64 {
        self.lx * self.ly * self.lz
    }

    pub fn min_side(&self) -> f64 {
        self.lx.min(self.ly).min(self.lz)
    }

    pub fn center(&self) -> Vec3 {
        Vec3::new(0.5 * self.lx, 0.5 * self.ly, 0.5 * self.lz)
    }

    fn slack(&self) -> f64 {
        1e-12 * self.lx.max(self.ly).max(self.lz)
    }

    /// Closed-box membership, walls included up to rounding.
    pub fn contains(&self, p: Vec3) -> bool {
        let eps = self.slack();
        p.is_finite()
            && self
                .sides()
                .iter()
                .zip(p.to_array())
                .all(|(&l, c)| c >= -eps && c <= l + eps)
    }

    pub fn ensure_inside(&self, p: Vec3) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutsideBox { point: p })
        }
    }

    /// Whether `p` sits on one of the six walls.
    pub fn on_wall(&self, p: Vec3) -> bool {
        let eps = self.slack();
        self.sides()
            .iter()
            .zip(p.to_array())
            .any(|(&l, c)| c.abs() <= eps || (c - l).abs() <= eps)
    }
}

/// Ewald split settings. `None` truncations are selected automatically
/// from `target_tail`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EwaldParams {
    pub kc: f64,
    pub image_range: Option<usize>,
    pub mode_cutoff: Option<f64>,
    pub resonance_tol: f64,
    pub target_tail: f64,
    /// Negative control only: flips the sign of the spectral part.
    pub flip_spectral_sign: bool,
}

impl EwaldParams {
    /// Default splitting `Kc = sqrt(pi) / (2 V^(1/3))`, guard
    /// `1e-6 * pi / min L` and tail target `1e-12`.
    pub fn for_geometry(g: &CavityGeometry) -> Self {
        Self {
            kc: default_kc(g),
            image_range: None,
            mode_cutoff: None,
            resonance_tol: 1e-6 * std::f64::consts::PI / g.min_side(),
            target_tail: 1e-12,
            flip_spectral_sign: false,
        }
    }

    pub fn with_kc(self, kc: f64) -> Self {
        Self { kc, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and > 0, got {v}"),
                })
            }
        };
        positive("kc", self.kc)?;
        positive("resonance_tol", self.resonance_tol)?;
        positive("target_tail", self.target_tail)?;
        if self.target_tail >= 1.0 {
            return Err(Error::InvalidParameter {
                name: "target_tail",
                reason: "must be below 1".into(),
            });
        }
        if let Some(cut) = self.mode_cutoff {
            positive("mode_cutoff", cut)?;
        }
        Ok(())
    }
}

pub fn default_kc(g: &CavityGeometry) -> f64 {
    std::f64::consts::PI.sqrt() / (2.0 * g.volume().cbrt())
}
