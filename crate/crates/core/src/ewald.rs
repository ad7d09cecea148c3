//! Ewald-accelerated cavity Green function.
//!
//! The diagonal vector-potential Green function of the box is split with
//! `erf + erfc = 1` into
//!
//! * an image part: the source reflected through the walls, each copy
//!   `(-1)^(r+s+t-q_sigma) cos(kR)/(4 pi R)` screened by `erfc(Kc R)`;
//! * a spectral part: the eigenmode sum weighted by the Gaussian-cutoff
//!   factor [`gamma_cutoff`] instead of `1/(k_mnp^2 - k^2)`.
//!
//! Both halves converge quickly and their sum does not depend on `Kc`. The
//! curl-curl dyadic `curl_2 G x curl_1` needed for the interaction is built
//! analytically: radial derivatives with reflection Jacobians for the
//! images, analytic mode curls for the spectral part.

use std::f64::consts::PI;
use std::sync::Arc;

use log::warn;

use crate::cavity_modes::{Mode, ModeTable};
use crate::domain::{CavityGeometry, Constants, Dipole, EwaldParams, Vec3};
use crate::error::{Error, Result};
use crate::interaction::{assemble, Direction, Directional, InteractionTable, SplitParts, TermValue};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Gaussian-cutoff mode weight
/// `(1/2q) [exp(-(k+q)^2/4Kc^2)/(q+k) + exp(-(k-q)^2/4Kc^2)/(q-k)]`
/// for `q = k_mode`. Tends to `1/(q^2 - k^2)` as `Kc -> inf`.
pub fn gamma_cutoff(k: f64, k_mode: f64, kc: f64, resonance_tol: f64) -> Result<f64> {
    if !(k_mode > 0.0) {
        return Err(Error::InvalidParameter {
            name: "k_mode",
            reason: format!("must be > 0, got {k_mode}"),
        });
    }
    let k = k.abs();
    if (k_mode - k).abs() <= resonance_tol {
        return Err(Error::GammaResonance {
            k_mode,
            k,
            tol: resonance_tol,
        });
    }
    Ok(gamma_unchecked(k, k_mode, kc))
}

fn gamma_unchecked(k: f64, q: f64, kc: f64) -> f64 {
    let s = 4.0 * kc * kc;
    let plus = (-(k + q) * (k + q) / s).exp() / (q + k);
    let minus = (-(k - q) * (k - q) / s).exp() / (q - k);
    0.5 * (plus + minus) / q
}

/// One reflected copy of the source point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageTerm {
    /// Lattice translation `(i, j, l)`; the copy sits near `(2iLx, 2jLy, 2lLz)`.
    pub indices: [i64; 3],
    /// Reflection parities `(r, s, t)`.
    pub parities: [u8; 3],
    pub position: Vec3,
    /// `(-1)^(r+s+t-q_sigma)` for `sigma = x, y, z` with `q = (r, s, t)`.
    pub signs: [f64; 3],
    /// Diagonal of `d(image)/d(source)`: `(-1)^r, (-1)^s, (-1)^t`.
    pub jacobian: [f64; 3],
}

fn parity_sign(p: u8) -> f64 {
    if p.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl ImageTerm {
    fn new(indices: [i64; 3], parities: [u8; 3], source: Vec3, g: &CavityGeometry) -> Self {
        let sides = g.sides();
        let src = source.to_array();
        let jacobian = parities.map(parity_sign);
        let pos: [f64; 3] =
            std::array::from_fn(|a| 2.0 * indices[a] as f64 * sides[a] + jacobian[a] * src[a]);
        let total: u8 = parities.iter().sum();
        let signs = std::array::from_fn(|s| parity_sign(total - parities[s]));
        Self {
            indices,
            parities,
            position: Vec3::from_array(pos),
            signs,
            jacobian,
        }
    }
}

/// All `8 (2N+1)^3` images of `rp`, ordered lexicographically in
/// `(i, j, l, r, s, t)`.
pub fn image_lattice(rp: Vec3, g: &CavityGeometry, range: usize) -> Vec<ImageTerm> {
    let n = range as i64;
    let side = 2 * range + 1;
    let mut out = Vec::with_capacity(8 * side.pow(3));
    for i in -n..=n {
        for j in -n..=n {
            for l in -n..=n {
                for r in 0..2u8 {
                    for s in 0..2u8 {
                        for t in 0..2u8 {
                            out.push(ImageTerm::new([i, j, l], [r, s, t], rp, g));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Radial profile `f(R) = cos(kR) erfc(Kc R) / (4 pi R)` of one image and
/// its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenedKernel {
    pub k: f64,
    pub kc: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radial {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
}

impl ScreenedKernel {
    pub fn new(k: f64, kc: f64) -> Self {
        Self { k, kc }
    }

    pub fn value(&self, r: f64) -> f64 {
        (self.k * r).cos() * libm::erfc(self.kc * r) / (4.0 * PI * r)
    }

    pub fn radial(&self, r: f64) -> Radial {
        let (k, kc) = (self.k, self.kc);
        let (s, c) = (k * r).sin_cos();
        let screen = libm::erfc(kc * r);
        let gauss = FRAC_2_SQRT_PI * kc * (-(kc * r) * (kc * r)).exp();
        // f = u / R with u = cos(kR) erfc(Kc R) / 4 pi
        let u = c * screen;
        let du = -k * s * screen - c * gauss;
        let d2u = -k * k * c * screen + 2.0 * k * s * gauss + 2.0 * kc * kc * r * c * gauss;
        let inv = 1.0 / r;
        let norm = 1.0 / (4.0 * PI);
        Radial {
            f: norm * u * inv,
            df: norm * (du - u * inv) * inv,
            d2f: norm * (d2u - 2.0 * du * inv + 2.0 * u * inv * inv) * inv,
        }
    }
}

/// Truncation actually used for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub image_range: usize,
    pub mode_cutoff: f64,
    /// Bound on the largest neglected screened image.
    pub image_tail: f64,
    /// Largest neglected Gaussian weight `exp(-(k_max - k)^2 / 4Kc^2)`.
    pub mode_tail: f64,
}

/// Resolve `params` at wavenumber `k`: `N_img` is the smallest range with
/// `erfc(Kc R_min) < target_tail` for the nearest neglected image, and
/// `k_max = k + 2 Kc sqrt(ln(1/target_tail))`.
pub fn select_truncation(k: f64, g: &CavityGeometry, params: &EwaldParams) -> Result<Truncation> {
    params.validate()?;
    let k = k.abs();
    let kc = params.kc;
    let lmin = g.min_side();
    // Images outside [-N, N]^3 are at least 2 N Lmin away from any point in the box.
    let neglected = |n: usize| 2.0 * n as f64 * lmin;
    let image_range = match params.image_range {
        Some(n) => n,
        None => (1..)
            .find(|&n| libm::erfc(kc * neglected(n)) < params.target_tail)
            .expect("erfc decays to zero"),
    };
    let r_min = neglected(image_range);
    let image_tail = if r_min > 0.0 {
        libm::erfc(kc * r_min) / (4.0 * PI * r_min)
    } else {
        f64::INFINITY
    };
    let mode_cutoff = match params.mode_cutoff {
        Some(cut) => cut,
        None => k + 2.0 * kc * (1.0 / params.target_tail).ln().sqrt(),
    };
    if mode_cutoff <= k {
        return Err(Error::CutoffBelowFrequency { cutoff: mode_cutoff, k });
    }
    let mode_tail = (-(mode_cutoff - k).powi(2) / (4.0 * kc * kc)).exp();
    Ok(Truncation {
        image_range,
        mode_cutoff,
        image_tail,
        mode_tail,
    })
}

/// Screened image sum `G_A1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagePart {
    pub components: [f64; 3],
    pub images: usize,
    pub truncation: Truncation,
}

/// Gaussian-cutoff mode sum `G_A2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPart {
    pub components: [f64; 3],
    pub modes: usize,
    pub truncation: Truncation,
}

/// Green components with their curl-curl dyadic at `(r2, r1)`.
///
/// `t[i][j]` is `[curl_2 G x curl_1]_{ij}`, so `mu0 m2 . t . m1` is the
/// field energy of moment `m2` at `r2` in the field of `m1` at `r1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenTensor {
    pub ga: [f64; 3],
    pub ga1: [f64; 3],
    pub ga2: [f64; 3],
    pub t: [[f64; 3]; 3],
    pub t1: [[f64; 3]; 3],
    pub t2: [[f64; 3]; 3],
    pub truncation: Truncation,
}

fn contract_matrix(t: &[[f64; 3]; 3], field: Vec3, source: Vec3) -> f64 {
    let (a, b) = (field.to_array(), source.to_array());
    (0..3)
        .map(|i| a[i] * (0..3).map(|j| t[i][j] * b[j]).sum::<f64>())
        .sum()
}

impl GreenTensor {
    /// `m_field . T . m_source`.
    pub fn contract(&self, field: Vec3, source: Vec3) -> f64 {
        contract_matrix(&self.t, field, source)
    }

    /// Image and spectral pieces of [`GreenTensor::contract`].
    pub fn contract_parts(&self, field: Vec3, source: Vec3) -> (f64, f64) {
        (
            contract_matrix(&self.t1, field, source),
            contract_matrix(&self.t2, field, source),
        )
    }
}

// For each l: the (i, k, eps_{ikl}) with nonzero Levi-Civita symbol.
const LEVI_CIVITA: [[(usize, usize, f64); 2]; 3] = [
    [(1, 2, 1.0), (2, 1, -1.0)],
    [(2, 0, 1.0), (0, 2, -1.0)],
    [(0, 1, 1.0), (1, 0, -1.0)],
];

/// Evaluator for one geometry and parameter set. Mode tables are cached and
/// shared read-only.
#[derive(Debug, Clone)]
pub struct CavityGreen {
    geometry: CavityGeometry,
    params: EwaldParams,
    constants: Constants,
    modes: Arc<ModeTable>,
}

impl CavityGreen {
    /// Prepare for frequencies up to `max_omega` in magnitude.
    pub fn new(geometry: CavityGeometry, params: EwaldParams, constants: Constants, max_omega: f64) -> Result<Self> {
        let trunc = select_truncation(constants.wavenumber(max_omega), &geometry, &params)?;
        Ok(Self {
            geometry,
            params,
            constants,
            modes: Arc::new(ModeTable::build(&geometry, trunc.mode_cutoff)),
        })
    }

    pub fn geometry(&self) -> &CavityGeometry {
        &self.geometry
    }

    pub fn params(&self) -> &EwaldParams {
        &self.params
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    fn modes_for(&self, cutoff: f64) -> Arc<ModeTable> {
        if cutoff <= self.modes.cutoff() {
            Arc::clone(&self.modes)
        } else {
            Arc::new(ModeTable::build(&self.geometry, cutoff))
        }
    }

    fn spectral_sign(&self) -> f64 {
        if self.params.flip_spectral_sign {
            -1.0
        } else {
            1.0
        }
    }

    fn prepare(&self, r: Vec3, rp: Vec3, omega: f64) -> Result<(f64, Truncation)> {
        self.geometry.ensure_inside(r)?;
        self.geometry.ensure_inside(rp)?;
        let k = self.constants.wavenumber(omega).abs();
        Ok((k, select_truncation(k, &self.geometry, &self.params)?))
    }

    /// Per-image screened contributions at `r` for source `rp`.
    pub fn image_contributions(&self, r: Vec3, rp: Vec3, omega: f64) -> Result<Vec<(ImageTerm, Radial)>> {
        let (k, trunc) = self.prepare(r, rp, omega)?;
        let kernel = ScreenedKernel::new(k, self.params.kc);
        let coincide = 1e-14 * self.geometry.min_side();
        image_lattice(rp, &self.geometry, trunc.image_range)
            .into_iter()
            .map(|img| {
                let dist = (r - img.position).norm();
                if dist <= coincide {
                    Err(coincidence(&img))
                } else {
                    Ok((img, kernel.radial(dist)))
                }
            })
            .collect()
    }

    pub fn green_a1(&self, r: Vec3, rp: Vec3, omega: f64) -> Result<ImagePart> {
        let (k, trunc) = self.prepare(r, rp, omega)?;
        let kernel = ScreenedKernel::new(k, self.params.kc);
        let coincide = 1e-14 * self.geometry.min_side();
        let images = image_lattice(rp, &self.geometry, trunc.image_range);
        let mut components = [0.0; 3];
        for img in &images {
            let dist = (r - img.position).norm();
            if dist <= coincide {
                return Err(coincidence(img));
            }
            let f = kernel.value(dist);
            for s in 0..3 {
                components[s] += img.signs[s] * f;
            }
        }
        Ok(ImagePart {
            components,
            images: images.len(),
            truncation: trunc,
        })
    }

    fn spectral_modes(&self, k: f64, trunc: &Truncation) -> Result<Arc<ModeTable>> {
        let table = self.modes_for(trunc.mode_cutoff);
        if let Some(mode) = ModeTable::resonance(table.up_to(trunc.mode_cutoff), k, self.params.resonance_tol) {
            return Err(Error::ResonanceGuard {
                mode: mode.index,
                k_mode: mode.k,
                k,
                tol: self.params.resonance_tol,
            });
        }
        Ok(table)
    }

    pub fn green_a2(&self, r: Vec3, rp: Vec3, omega: f64) -> Result<SpectralPart> {
        let (k, trunc) = self.prepare(r, rp, omega)?;
        let table = self.spectral_modes(k, &trunc)?;
        let modes = table.up_to(trunc.mode_cutoff);
        let (at_r, at_rp) = (table.sampler(r, &self.geometry), table.sampler(rp, &self.geometry));
        let sign = self.spectral_sign();
        let mut components = [0.0; 3];
        for mode in modes {
            let w = sign * gamma_unchecked(k, mode.k, self.params.kc);
            let (a, b) = (at_r.value(mode), at_rp.value(mode));
            for s in 0..3 {
                components[s] += a[s] * b[s] * w;
            }
        }
        Ok(SpectralPart {
            components,
            modes: modes.len(),
            truncation: trunc,
        })
    }

    /// Diagonal Green components `G_A^sigma(r, rp)`.
    pub fn green_a(&self, r: Vec3, rp: Vec3, omega: f64) -> Result<[f64; 3]> {
        let g1 = self.green_a1(r, rp, omega)?;
        let g2 = self.green_a2(r, rp, omega)?;
        Ok(std::array::from_fn(|s| g1.components[s] + g2.components[s]))
    }

    /// Green components and curl-curl dyadic for field point `r2`, source `r1`.
    pub fn tensor(&self, r2: Vec3, r1: Vec3, omega: f64) -> Result<GreenTensor> {
        if r2 == r1 {
            return Err(Error::DegenerateSeparation);
        }
        let (k, trunc) = self.prepare(r2, r1, omega)?;
        let table = self.spectral_modes(k, &trunc)?;
        let (ga1, t1) = self.image_tensor(r2, r1, k, &trunc)?;
        let (ga2, t2) = self.spectral_tensor(r2, r1, k, table.up_to(trunc.mode_cutoff), &table);
        let ga = std::array::from_fn(|s| ga1[s] + ga2[s]);
        let t = std::array::from_fn(|i| std::array::from_fn(|j| t1[i][j] + t2[i][j]));
        let out = GreenTensor {
            ga,
            ga1,
            ga2,
            t,
            t1,
            t2,
            truncation: trunc,
        };
        if out.t.iter().flatten().chain(out.ga.iter()).all(|v| v.is_finite()) {
            Ok(out)
        } else {
            Err(Error::NonFinite { what: "cavity Green tensor" })
        }
    }

    #[allow(clippy::type_complexity)]
    fn image_tensor(&self, r2: Vec3, r1: Vec3, k: f64, trunc: &Truncation) -> Result<([f64; 3], [[f64; 3]; 3])> {
        let kernel = ScreenedKernel::new(k, self.params.kc);
        let coincide = 1e-14 * self.geometry.min_side();
        let mut ga = [0.0; 3];
        let mut t = [[0.0; 3]; 3];
        for img in image_lattice(r1, &self.geometry, trunc.image_range) {
            let d = r2 - img.position;
            let dist = d.norm();
            if dist <= coincide {
                return Err(coincidence(&img));
            }
            let rad = kernel.radial(dist);
            let u = (d * (1.0 / dist)).to_array();
            // Hessian of f(|r2 - R'|) with respect to r2.
            let a = rad.d2f - rad.df / dist;
            let b = rad.df / dist;
            let hess: [[f64; 3]; 3] =
                std::array::from_fn(|p| std::array::from_fn(|q| a * u[p] * u[q] + if p == q { b } else { 0.0 }));
            // d_{2k} d_{1n} G^l = -s_l J_nn H_kn, contracted as
            // T_ij = sum_l eps_{ikl} eps_{jln} d_{2k} d_{1n} G^l.
            for l in 0..3 {
                ga[l] += img.signs[l] * rad.f;
                for &(i, kk, e1) in &LEVI_CIVITA[l] {
                    for &(j, n, e2) in &LEVI_CIVITA[l] {
                        t[i][j] += e1 * e2 * img.signs[l] * img.jacobian[n] * hess[kk][n];
                    }
                }
            }
        }
        Ok((ga, t))
    }

    fn spectral_tensor(
        &self,
        r2: Vec3,
        r1: Vec3,
        k: f64,
        modes: &[Mode],
        table: &ModeTable,
    ) -> ([f64; 3], [[f64; 3]; 3]) {
        let (at2, at1) = (table.sampler(r2, &self.geometry), table.sampler(r1, &self.geometry));
        let sign = self.spectral_sign();
        let mut ga = [0.0; 3];
        let mut t = [[0.0; 3]; 3];
        for mode in modes {
            let w = sign * gamma_unchecked(k, mode.k, self.params.kc);
            let (a2, a1) = (at2.value(mode), at1.value(mode));
            for s in 0..3 {
                ga[s] += a2[s] * a1[s] * w;
            }
            let (c2, c1) = (at2.component_curls(mode), at1.component_curls(mode));
            for sigma in 0..3 {
                let (c2, c1) = (c2[sigma].to_array(), c1[sigma].to_array());
                for i in 0..3 {
                    for j in 0..3 {
                        t[i][j] -= w * c2[i] * c1[j];
                    }
                }
            }
        }
        (ga, t)
    }

    /// `mu0 m_field . T(field, source; omega) . m_source` with its split.
    pub fn directional(&self, field: Vec3, source: Vec3, m_field: Vec3, m_source: Vec3, omega: f64) -> Result<Directional> {
        let tensor = self.tensor(field, source, omega)?;
        Ok(directional_from(&tensor, m_field, m_source, self.constants.mu0()))
    }
}

fn directional_from(tensor: &GreenTensor, m_field: Vec3, m_source: Vec3, mu0: f64) -> Directional {
    let (image, mode) = tensor.contract_parts(m_field, m_source);
    Directional {
        total: mu0 * tensor.contract(m_field, m_source),
        split: Some(SplitParts {
            image: mu0 * image,
            mode: mu0 * mode,
            image_tail: tensor.truncation.image_tail,
            mode_tail: tensor.truncation.mode_tail,
        }),
    }
}

fn coincidence(img: &ImageTerm) -> Error {
    let [i, j, l] = img.indices;
    let [r, s, t] = img.parities;
    Error::ImageCoincidence { i, j, l, r, s, t }
}

/// Screened image sum at `r` for source `rp`.
pub fn green_a1(r: Vec3, rp: Vec3, omega: f64, g: &CavityGeometry, params: &EwaldParams, k: &Constants) -> Result<ImagePart> {
    CavityGreen::new(*g, *params, *k, omega)?.green_a1(r, rp, omega)
}

/// Gaussian-cutoff spectral sum at `r` for source `rp`.
pub fn green_a2(r: Vec3, rp: Vec3, omega: f64, g: &CavityGeometry, params: &EwaldParams, k: &Constants) -> Result<SpectralPart> {
    CavityGreen::new(*g, *params, *k, omega)?.green_a2(r, rp, omega)
}

pub fn green_tensor(r2: Vec3, r1: Vec3, omega: f64, g: &CavityGeometry, params: &EwaldParams, k: &Constants) -> Result<GreenTensor> {
    CavityGreen::new(*g, *params, *k, omega)?.tensor(r2, r1, omega)
}

/// Single directional interaction `V_{field<-source}(omega)` in the cavity.
#[allow(clippy::too_many_arguments)]
pub fn directional_interaction(
    field: Vec3,
    source: Vec3,
    m_field: Vec3,
    m_source: Vec3,
    omega: f64,
    g: &CavityGeometry,
    params: &EwaldParams,
    k: &Constants,
) -> Result<Directional> {
    CavityGreen::new(*g, *params, *k, omega)?.directional(field, source, m_field, m_source, omega)
}

/// Full cavity term table. Geometry problems are fatal; resonance guards and
/// non-finite values are reported per term.
pub fn pair_interaction_cavity(
    d1: &Dipole,
    d2: &Dipole,
    g: &CavityGeometry,
    k: &Constants,
    params: &EwaldParams,
) -> Result<InteractionTable> {
    let (r1, r2) = (d1.position(), d2.position());
    g.ensure_inside(r1)?;
    g.ensure_inside(r2)?;
    if r1 == r2 {
        return Err(Error::DegenerateSeparation);
    }
    for (label, p) in [("1", r1), ("2", r2)] {
        if g.on_wall(p) {
            warn!("dipole {label} at {p} lies on a cavity wall");
        }
    }
    let max_omega = d1
        .energies()
        .iter()
        .chain(d2.energies())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)));
    let max_omega = (max_omega.1 - max_omega.0) / k.hbar();
    let solver = CavityGreen::new(*g, *params, *k, max_omega)?;

    // Green tensors depend on |omega| only; evaluate each once per direction.
    let mut cache: Vec<(Direction, u64, std::result::Result<GreenTensor, Error>)> = Vec::new();
    assemble(d1, d2, k, |req| -> TermValue {
        let key = req.omega.abs().to_bits();
        let idx = match cache.iter().position(|(d, w, _)| *d == req.direction && *w == key) {
            Some(i) => i,
            None => {
                let (field, source) = match req.direction {
                    Direction::TwoFromOne => (r2, r1),
                    Direction::OneFromTwo => (r1, r2),
                };
                cache.push((req.direction, key, solver.tensor(field, source, req.omega)));
                cache.len() - 1
            }
        };
        let tensor = cache[idx].2.clone()?;
        let value = directional_from(&tensor, req.field_moment, req.source_moment, k.mu0());
        if value.total.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFinite { what: "interaction term" })
        }
    })
}

/// Result of the free-space limit probe used to pin the spectral sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSpaceProbe {
    pub cavity: f64,
    pub free: f64,
    pub relative_error: f64,
}

/// Compare the cavity interaction of two z-moments a short distance apart at
/// the center of a unit cube with the free-space retarded value. A large
/// splitting parameter puts most of the near field into the spectral part,
/// so a wrong spectral sign shows up as an O(1) error.
pub fn free_space_probe(flip_spectral_sign: bool) -> Result<FreeSpaceProbe> {
    let g = CavityGeometry::cube(1.0)?;
    let k = Constants::natural();
    let params = EwaldParams {
        flip_spectral_sign,
        ..EwaldParams::for_geometry(&g).with_kc(10.0)
    };
    let omega = 3.0;
    let r1 = g.center();
    let r2 = r1 + Vec3::X * 0.05;
    let cavity = directional_interaction(r2, r1, Vec3::Z, Vec3::Z, omega, &g, &params, &k)?.total;
    let free = crate::freespace::v_retarded(Vec3::Z, Vec3::Z, r1, r2, omega, &k)?;
    Ok(FreeSpaceProbe {
        cavity,
        free,
        relative_error: (cavity - free).abs() / free.abs(),
    })
}

/// Tolerance of [`free_space_probe`].
pub const FREE_SPACE_PROBE_TOL: f64 = 0.02;
