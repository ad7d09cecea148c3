//! Vector eigenmodes of the rectangular conducting box and the plain
//! mode-expansion Green function.
//!
//! Mode `(m, n, p)` has wavevector `(m pi/Lx, n pi/Ly, p pi/Lz)` and components
//!
//! ```text
//! A^x = Nx cos(kx x) sin(ky y) sin(kz z)
//! A^y = Ny sin(kx x) cos(ky y) sin(kz z)
//! A^z = Nz sin(kx x) sin(ky y) cos(kz z)
//! ```
//!
//! with `N_sigma = sqrt(4 (2 - delta_{index,0}) / V)`, so each component is
//! unit-normalized over the box. Tangential components vanish on the walls.
//!
//! The expansion `sum A(r) A(r') / (k_mnp^2 - k^2)` converges slowly; it is
//! kept as a reference and to demonstrate why the Ewald split is needed.

use std::f64::consts::PI;
use std::fmt;

use crate::domain::{CavityGeometry, Constants, Dipole, EwaldParams, LevelPair, Vec3};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    pub m: u32,
    pub n: u32,
    pub p: u32,
}

impl ModeIndex {
    pub const fn new(m: u32, n: u32, p: u32) -> Self {
        Self { m, n, p }
    }

    pub fn indices(&self) -> [u32; 3] {
        [self.m, self.n, self.p]
    }

    pub fn wavevector(&self, g: &CavityGeometry) -> Vec3 {
        Vec3::new(
            self.m as f64 * PI / g.lx(),
            self.n as f64 * PI / g.ly(),
            self.p as f64 * PI / g.lz(),
        )
    }

    pub fn k(&self, g: &CavityGeometry) -> f64 {
        self.wavevector(g).norm()
    }

    /// Modes with two or more zero indices vanish identically.
    pub fn is_trivial(&self) -> bool {
        self.indices().iter().filter(|&&i| i == 0).count() >= 2
    }

    fn norms(&self, g: &CavityGeometry) -> [f64; 3] {
        let v = g.volume();
        self.indices()
            .map(|i| (4.0 * if i == 0 { 1.0 } else { 2.0 } / v).sqrt())
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.m, self.n, self.p)
    }
}

/// Eigenmode vector `(A^x, A^y, A^z)` at `r`.
pub fn mode_function(idx: ModeIndex, r: Vec3, g: &CavityGeometry) -> Result<Vec3> {
    g.ensure_inside(r)?;
    let [nx, ny, nz] = idx.norms(g);
    let t = AxisTrig::single(idx, r, g);
    Ok(Vec3::new(
        nx * t.c[0] * t.s[1] * t.s[2],
        ny * t.s[0] * t.c[1] * t.s[2],
        nz * t.s[0] * t.s[1] * t.c[2],
    ))
}

/// Analytic curl of [`mode_function`].
pub fn mode_curl(idx: ModeIndex, r: Vec3, g: &CavityGeometry) -> Result<Vec3> {
    g.ensure_inside(r)?;
    let t = AxisTrig::single(idx, r, g);
    Ok(curl_from_trig(idx.norms(g), idx.wavevector(g).to_array(), t.c, t.s))
}

// curl_x = dy A^z - dz A^y, etc., using d/dx cos = -k sin, d/dx sin = k cos.
fn curl_from_trig(norm: [f64; 3], kv: [f64; 3], c: [f64; 3], s: [f64; 3]) -> Vec3 {
    let [nx, ny, nz] = norm;
    let [km, kn, kp] = kv;
    Vec3::new(
        s[0] * c[1] * c[2] * (nz * kn - ny * kp),
        c[0] * s[1] * c[2] * (nx * kp - nz * km),
        c[0] * c[1] * s[2] * (ny * km - nx * kn),
    )
}

struct AxisTrig {
    c: [f64; 3],
    s: [f64; 3],
}

impl AxisTrig {
    fn single(idx: ModeIndex, r: Vec3, g: &CavityGeometry) -> Self {
        let kv = idx.wavevector(g).to_array();
        let rv = r.to_array();
        let mut c = [0.0; 3];
        let mut s = [0.0; 3];
        for a in 0..3 {
            (s[a], c[a]) = (kv[a] * rv[a]).sin_cos();
        }
        Self { c, s }
    }
}

/// Curls of the single-component fields `e_sigma A^sigma` for
/// `sigma = x, y, z`. They sum to [`mode_curl`].
///
/// The Green function is diagonal, one scalar expansion per component, so
/// curl-curl sums pair `curl(e_sigma A^sigma)` at both points with the same
/// `sigma` and never mix components.
pub fn component_curls(idx: ModeIndex, r: Vec3, g: &CavityGeometry) -> Result<[Vec3; 3]> {
    g.ensure_inside(r)?;
    let t = AxisTrig::single(idx, r, g);
    Ok(component_curls_from_trig(idx.norms(g), idx.wavevector(g).to_array(), t.c, t.s))
}

fn component_curls_from_trig(norm: [f64; 3], kv: [f64; 3], c: [f64; 3], s: [f64; 3]) -> [Vec3; 3] {
    let [nx, ny, nz] = norm;
    let [km, kn, kp] = kv;
    [
        // curl(A^x e_x) = (0, dz A^x, -dy A^x)
        Vec3::new(0.0, nx * kp * c[0] * s[1] * c[2], -nx * kn * c[0] * c[1] * s[2]),
        // curl(A^y e_y) = (-dz A^y, 0, dx A^y)
        Vec3::new(-ny * kp * s[0] * c[1] * c[2], 0.0, ny * km * c[0] * c[1] * s[2]),
        // curl(A^z e_z) = (dy A^z, -dx A^z, 0)
        Vec3::new(nz * kn * s[0] * c[1] * c[2], -nz * km * c[0] * s[1] * c[2], 0.0),
    ]
}

/// Magnetic coupling `sqrt(mu0) m^{ab} . curl A_k(r)` of a dipole to a mode.
pub fn zeta(d: &Dipole, pair: LevelPair, idx: ModeIndex, g: &CavityGeometry, k: &Constants) -> Result<f64> {
    let m = d.moment(pair)?;
    let curl = mode_curl(idx, d.position(), g)?;
    Ok(k.mu0().sqrt() * m.dot(curl))
}

/// Per-component couplings `sqrt(mu0) m^{ab} . curl(e_sigma A^sigma)`; these
/// are the factors that enter the interaction mode sum. They add up to [`zeta`].
pub fn zeta_components(
    d: &Dipole,
    pair: LevelPair,
    idx: ModeIndex,
    g: &CavityGeometry,
    k: &Constants,
) -> Result<[f64; 3]> {
    let m = d.moment(pair)?;
    let curls = component_curls(idx, d.position(), g)?;
    Ok(curls.map(|c| k.mu0().sqrt() * m.dot(c)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub index: ModeIndex,
    pub k: f64,
    pub wavevector: [f64; 3],
    norm: [f64; 3],
}

/// Non-trivial modes with `k_mnp <= cutoff`, sorted by `k_mnp` and then
/// lexicographically by `(m, n, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTable {
    cutoff: f64,
    modes: Vec<Mode>,
    max_index: [usize; 3],
}

impl ModeTable {
    pub fn build(g: &CavityGeometry, cutoff: f64) -> Self {
        let max_index = g.sides().map(|l| (cutoff.max(0.0) * l / PI).floor() as usize);
        let mut modes = Vec::new();
        for m in 0..=max_index[0] as u32 {
            for n in 0..=max_index[1] as u32 {
                for p in 0..=max_index[2] as u32 {
                    let index = ModeIndex::new(m, n, p);
                    if index.is_trivial() {
                        continue;
                    }
                    let k = index.k(g);
                    if k <= cutoff {
                        modes.push(Mode {
                            index,
                            k,
                            wavevector: index.wavevector(g).to_array(),
                            norm: index.norms(g),
                        });
                    }
                }
            }
        }
        modes.sort_by(|a, b| a.k.total_cmp(&b.k).then(a.index.cmp(&b.index)));
        Self {
            cutoff,
            modes,
            max_index,
        }
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Leading modes with `k_mnp <= cutoff`.
    pub fn up_to(&self, cutoff: f64) -> &[Mode] {
        let end = self.modes.partition_point(|m| m.k <= cutoff);
        &self.modes[..end]
    }

    /// First mode within `tol` of wavenumber `k`, if any.
    pub(crate) fn resonance(modes: &[Mode], k: f64, tol: f64) -> Option<&Mode> {
        let k = k.abs();
        let start = modes.partition_point(|m| m.k < k - tol);
        modes[start..].iter().take_while(|m| m.k <= k + tol).next()
    }

    pub(crate) fn sampler(&self, r: Vec3, g: &CavityGeometry) -> ModeSampler {
        ModeSampler::new(r, g, self.max_index)
    }
}

/// Per-axis cos/sin tables at one point, reused across all modes.
pub(crate) struct ModeSampler {
    cos: [Vec<f64>; 3],
    sin: [Vec<f64>; 3],
}

impl ModeSampler {
    fn new(r: Vec3, g: &CavityGeometry, max_index: [usize; 3]) -> Self {
        let sides = g.sides();
        let coords = r.to_array();
        let table = |axis: usize| -> (Vec<f64>, Vec<f64>) {
            (0..=max_index[axis])
                .map(|i| (i as f64 * PI * coords[axis] / sides[axis]).sin_cos())
                .map(|(s, c)| (c, s))
                .unzip()
        };
        let (cx, sx) = table(0);
        let (cy, sy) = table(1);
        let (cz, sz) = table(2);
        Self {
            cos: [cx, cy, cz],
            sin: [sx, sy, sz],
        }
    }

    fn trig(&self, mode: &Mode) -> ([f64; 3], [f64; 3]) {
        let [m, n, p] = mode.index.indices().map(|i| i as usize);
        (
            [self.cos[0][m], self.cos[1][n], self.cos[2][p]],
            [self.sin[0][m], self.sin[1][n], self.sin[2][p]],
        )
    }

    pub(crate) fn value(&self, mode: &Mode) -> [f64; 3] {
        let (c, s) = self.trig(mode);
        let [nx, ny, nz] = mode.norm;
        [
            nx * c[0] * s[1] * s[2],
            ny * s[0] * c[1] * s[2],
            nz * s[0] * s[1] * c[2],
        ]
    }

    pub(crate) fn component_curls(&self, mode: &Mode) -> [Vec3; 3] {
        let (c, s) = self.trig(mode);
        component_curls_from_trig(mode.norm, mode.wavevector, c, s)
    }
}

fn check_cutoff(modes: &[Mode], k: f64, cutoff: f64, tol: f64) -> Result<()> {
    if cutoff <= k.abs() {
        return Err(Error::CutoffBelowFrequency { cutoff, k: k.abs() });
    }
    if let Some(mode) = ModeTable::resonance(modes, k, tol) {
        return Err(Error::ResonanceGuard {
            mode: mode.index,
            k_mode: mode.k,
            k: k.abs(),
            tol,
        });
    }
    Ok(())
}

// Groups consecutive modes of equal k.
fn same_shell(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.max(b)
}

/// Truncated mode-expansion Green function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSumGreen {
    pub components: [f64; 3],
    /// Magnitude of the last complete `k`-shell's contribution.
    pub tail: f64,
    pub modes: usize,
}

/// `G^sigma(r, r') = sum_k A^sigma_k(r) A^sigma_k(r') / (k_mnp^2 - (omega/c)^2)`
/// over `k_mnp <= cutoff`.
pub fn green_a_mode_sum(
    r: Vec3,
    rp: Vec3,
    omega: f64,
    g: &CavityGeometry,
    cutoff: f64,
    resonance_tol: f64,
    k: &Constants,
) -> Result<ModeSumGreen> {
    g.ensure_inside(r)?;
    g.ensure_inside(rp)?;
    let kk = k.wavenumber(omega);
    let table = ModeTable::build(g, cutoff);
    check_cutoff(table.modes(), kk, cutoff, resonance_tol)?;
    let (at_r, at_rp) = (table.sampler(r, g), table.sampler(rp, g));

    let mut total = [0.0; 3];
    let mut shell = [0.0; 3];
    let mut shell_k = f64::NAN;
    let mut tail = 0.0;
    for mode in table.modes() {
        if !same_shell(mode.k, shell_k) {
            tail = norm3(shell);
            shell = [0.0; 3];
            shell_k = mode.k;
        }
        let w = 1.0 / (mode.k * mode.k - kk * kk);
        let (a, b) = (at_r.value(mode), at_rp.value(mode));
        for s in 0..3 {
            let term = a[s] * b[s] * w;
            total[s] += term;
            shell[s] += term;
        }
    }
    if !table.is_empty() {
        tail = norm3(shell);
    }
    Ok(ModeSumGreen {
        components: total,
        tail,
        modes: table.len(),
    })
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSum {
    pub value: f64,
    pub tail: f64,
    pub modes: usize,
}

/// Truncated mode sum `sum_k c^2 zeta_2^{uv} zeta_1^{ab} / (omega^2 - c^2 k^2)`
/// for `V_{2<-1}^{uv,ab}(omega)`, with `pair1 = (a, b)` on `d1` and
/// `pair2 = (u, v)` on `d2`. The product `zeta_2 zeta_1` runs over the three
/// components, see [`zeta_components`].
///
/// The sign follows from the curl-curl contraction: the mode part of the
/// dyadic is `-curl A(r2) curl A(r1)` times the mode weight, so the
/// `omega^2 - c^2 k^2` denominator is consistent with the
/// `k^2 - (omega/c)^2` denominator of the Green function itself.
#[allow(clippy::too_many_arguments)]
pub fn v_mode_sum(
    d1: &Dipole,
    d2: &Dipole,
    pair1: LevelPair,
    pair2: LevelPair,
    omega: f64,
    g: &CavityGeometry,
    k: &Constants,
    cutoff: f64,
    resonance_tol: f64,
) -> Result<ModeSum> {
    let terms = mode_terms(d1, d2, pair1, pair2, omega, g, k, cutoff, resonance_tol)?;
    let mut value = 0.0;
    let mut shell: f64 = 0.0;
    let mut shell_k = f64::NAN;
    let mut tail = 0.0;
    for t in &terms {
        if !same_shell(t.k, shell_k) {
            tail = shell.abs();
            shell = 0.0;
            shell_k = t.k;
        }
        value += t.exact;
        shell += t.exact;
    }
    if !terms.is_empty() {
        tail = shell.abs();
    }
    Ok(ModeSum {
        value,
        tail,
        modes: terms.len(),
    })
}

struct ModeTerm {
    k: f64,
    exact: f64,
    lorentzian: f64,
}

#[allow(clippy::too_many_arguments)]
fn mode_terms(
    d1: &Dipole,
    d2: &Dipole,
    pair1: LevelPair,
    pair2: LevelPair,
    omega: f64,
    g: &CavityGeometry,
    k: &Constants,
    cutoff: f64,
    resonance_tol: f64,
) -> Result<Vec<ModeTerm>> {
    g.ensure_inside(d1.position())?;
    g.ensure_inside(d2.position())?;
    let m1 = d1.moment(pair1)?;
    let m2 = d2.moment(pair2)?;
    let kk = k.wavenumber(omega);
    let table = ModeTable::build(g, cutoff);
    check_cutoff(table.modes(), kk, cutoff, resonance_tol)?;
    let (s1, s2) = (table.sampler(d1.position(), g), table.sampler(d2.position(), g));
    let c = k.c();
    let root_mu0 = k.mu0().sqrt();
    let w = omega.abs();
    Ok(table
        .modes()
        .iter()
        .map(|mode| {
            let (c1, c2) = (s1.component_curls(mode), s2.component_curls(mode));
            let zz: f64 = (0..3)
                .map(|sigma| (root_mu0 * m2.dot(c2[sigma])) * (root_mu0 * m1.dot(c1[sigma])))
                .sum();
            let num = c * c * zz;
            ModeTerm {
                k: mode.k,
                exact: num / (omega * omega - c * c * mode.k * mode.k),
                lorentzian: num / (2.0 * w) / (w - c * mode.k),
            }
        })
        .collect())
}

/// Restricted sum over modes with `| k_mnp - omega/c | <= band`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearResonantEstimate {
    /// Exact summands restricted to the band.
    pub value: f64,
    /// Single-pole approximants `c^2 zeta zeta / 2 omega / (omega - c k)`
    /// over the same band.
    pub lorentzian: f64,
    pub modes_in_band: usize,
    /// Set when no mode falls in the band; `value` is then zero.
    pub empty: bool,
    /// Converged Ewald value of the same term.
    pub ewald: f64,
    /// `value / ewald`.
    pub ratio: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn near_resonant_estimate(
    d1: &Dipole,
    d2: &Dipole,
    pair1: LevelPair,
    pair2: LevelPair,
    omega: f64,
    g: &CavityGeometry,
    k: &Constants,
    band: f64,
    cutoff: f64,
    params: &EwaldParams,
) -> Result<NearResonantEstimate> {
    let kk = k.wavenumber(omega).abs();
    let terms = mode_terms(d1, d2, pair1, pair2, omega, g, k, cutoff, params.resonance_tol)?;
    let in_band: Vec<&ModeTerm> = terms.iter().filter(|t| (t.k - kk).abs() <= band).collect();
    let value = in_band.iter().map(|t| t.exact).sum();
    let lorentzian = in_band.iter().map(|t| t.lorentzian).sum();
    let ewald = crate::ewald::directional_interaction(
        d2.position(),
        d1.position(),
        d2.moment(pair2)?,
        d1.moment(pair1)?,
        omega,
        g,
        params,
        k,
    )?
    .total;
    Ok(NearResonantEstimate {
        value,
        lorentzian,
        modes_in_band: in_band.len(),
        empty: in_band.is_empty(),
        ewald,
        ratio: value / ewald,
    })
}
