//! Closed-form free-space interactions.
//!
//! In free space the vector-potential Green tensor is isotropic,
//! `cos(kR) / (4 pi R)` times the identity, and the curl-curl contraction
//! with two moments has the closed retarded form implemented by
//! [`v_retarded`]. Its `omega -> 0` limit is the static dipolar energy
//! [`v_static`].

use std::f64::consts::PI;

use crate::domain::{Constants, Dipole, Vec3};
use crate::error::{Error, Result};
use crate::interaction::{assemble, Direction, Directional, InteractionTable};

/// Retardation data for a pair of points at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetardedKernel {
    /// `omega R / c`.
    pub eta: f64,
    pub r: f64,
    /// Unit vector from source to field point.
    pub e_r: Vec3,
}

impl RetardedKernel {
    pub fn new(source: Vec3, field: Vec3, omega: f64, k: &Constants) -> Result<Self> {
        let (r, e_r) = separation(source, field)?;
        Ok(Self {
            eta: k.wavenumber(omega) * r,
            r,
            e_r,
        })
    }

    /// Factors multiplying `m1.m2` and `-3 (m1.e)(m2.e)`.
    pub fn angular_factors(&self) -> (f64, f64) {
        let eta = self.eta;
        let (s, c) = eta.sin_cos();
        let isotropic = (1.0 - eta * eta) * c + eta * s;
        let radial = (1.0 - eta * eta / 3.0) * c + eta * s;
        (isotropic, radial)
    }
}

fn separation(r1: Vec3, r2: Vec3) -> Result<(f64, Vec3)> {
    if !(r1.is_finite() && r2.is_finite()) {
        return Err(Error::NonFinite { what: "position" });
    }
    let d = r2 - r1;
    let r = d.norm();
    if r == 0.0 {
        return Err(Error::DegenerateSeparation);
    }
    Ok((r, d * (1.0 / r)))
}

/// Static dipolar energy `mu0/(4 pi R^3) [m1.m2 - 3 (m1.e)(m2.e)]`.
pub fn v_static(m1: Vec3, m2: Vec3, r1: Vec3, r2: Vec3, k: &Constants) -> Result<f64> {
    let (r, e) = separation(r1, r2)?;
    let pre = k.mu0() / (4.0 * PI * r.powi(3));
    Ok(pre * (m1.dot(m2) - 3.0 * m1.dot(e) * m2.dot(e)))
}

/// Retarded single-frequency interaction. Even in `omega`; equals
/// [`v_static`] bit for bit at `omega = 0`.
pub fn v_retarded(m1: Vec3, m2: Vec3, r1: Vec3, r2: Vec3, omega: f64, k: &Constants) -> Result<f64> {
    let kernel = RetardedKernel::new(r1, r2, omega, k)?;
    let (iso, rad) = kernel.angular_factors();
    let e = kernel.e_r;
    let pre = k.mu0() / (4.0 * PI * kernel.r.powi(3));
    Ok(pre * (m1.dot(m2) * iso - 3.0 * m1.dot(e) * m2.dot(e) * rad))
}

/// Isotropic free-space Green function `cos(kR) / (4 pi R)`, `k = omega/c`.
pub fn green_a_free(r: Vec3, rp: Vec3, omega: f64, k: &Constants) -> Result<f64> {
    let (dist, _) = separation(rp, r)?;
    Ok((k.wavenumber(omega) * dist).cos() / (4.0 * PI * dist))
}

/// Full free-space term table for two multilevel dipoles.
pub fn pair_interaction_free(d1: &Dipole, d2: &Dipole, k: &Constants) -> Result<InteractionTable> {
    let (r1, r2) = (d1.position(), d2.position());
    separation(r1, r2)?;
    assemble(d1, d2, k, |req| {
        let (field_pos, source_pos) = match req.direction {
            Direction::TwoFromOne => (r2, r1),
            Direction::OneFromTwo => (r1, r2),
        };
        v_retarded(req.source_moment, req.field_moment, source_pos, field_pos, req.omega, k)
            .map(Directional::plain)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::LevelPair;
    use crate::interaction::TermClass;

    const K: Constants = Constants::natural();

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn static_reference_values() {
        let (r1, r2) = (Vec3::ZERO, Vec3::new(0.3, 0.0, 0.0));
        let unit = 1.0 / (4.0 * PI * 0.027);
        assert!(rel(v_static(Vec3::Z, Vec3::Z, r1, r2, &K).unwrap(), unit) < 1e-15);
        assert_eq!(v_static(Vec3::X, Vec3::Y, r1, r2, &K).unwrap(), 0.0);
        assert!(rel(v_static(Vec3::X, Vec3::X, r1, r2, &K).unwrap(), -2.0 * unit) < 1e-15);
    }

    #[test]
    fn static_scales_inverse_cube() {
        let m1 = Vec3::new(0.3, -1.0, 0.4);
        let m2 = Vec3::new(1.1, 0.2, -0.7);
        let dir = Vec3::new(0.2, 0.5, -0.9);
        let r1 = Vec3::new(0.1, 0.2, 0.3);
        let near = v_static(m1, m2, r1, r1 + dir * 0.5, &K).unwrap();
        let far = v_static(m1, m2, r1, r1 + dir * 1.0, &K).unwrap();
        assert!(rel(far, near / 8.0) < 1e-12);
    }

    #[test]
    fn retarded_at_eta_pi() {
        let r = 0.7;
        let omega = PI / r;
        let v = v_retarded(Vec3::Z, Vec3::Z, Vec3::ZERO, Vec3::new(r, 0.0, 0.0), omega, &K).unwrap();
        // cos(pi) = -1, sin(pi) = 0: factor (1 - pi^2)(-1)
        let expected = (PI * PI - 1.0) / (4.0 * PI * r.powi(3));
        assert!(rel(v, expected) < 1e-13, "{v} vs {expected}");
    }

    #[test]
    fn retarded_even_and_static_limit() {
        let m1 = Vec3::new(0.3, -1.0, 0.4);
        let m2 = Vec3::new(1.1, 0.2, -0.7);
        let (r1, r2) = (Vec3::new(0.1, 0.2, 0.3), Vec3::new(-0.4, 0.9, 0.1));
        let plus = v_retarded(m1, m2, r1, r2, 7.3, &K).unwrap();
        let minus = v_retarded(m1, m2, r1, r2, -7.3, &K).unwrap();
        assert_eq!(plus, minus);
        assert_eq!(
            v_retarded(m1, m2, r1, r2, 0.0, &K).unwrap(),
            v_static(m1, m2, r1, r2, &K).unwrap()
        );
        let swapped = v_retarded(m2, m1, r2, r1, 7.3, &K).unwrap();
        assert!(rel(swapped, plus) < 1e-14);
    }

    #[test]
    fn coincident_points_rejected() {
        let p = Vec3::new(0.5, 0.5, 0.5);
        assert_eq!(v_static(Vec3::Z, Vec3::Z, p, p, &K), Err(Error::DegenerateSeparation));
        assert_eq!(v_retarded(Vec3::Z, Vec3::Z, p, p, 1.0, &K), Err(Error::DegenerateSeparation));
        assert_eq!(green_a_free(p, p, 1.0, &K), Err(Error::DegenerateSeparation));
    }

    #[test]
    fn green_free_values() {
        let rp = Vec3::new(0.2, 0.0, 0.0);
        let r = rp + Vec3::new(0.0, 1.0, 0.0);
        assert!(rel(green_a_free(r, rp, 0.0, &K).unwrap(), 1.0 / (4.0 * PI)) < 1e-15);
        let g = green_a_free(r, rp, PI / 2.0, &K).unwrap();
        assert!(g.abs() < 1e-16);
    }

    #[test]
    fn permanent_pair_is_static() {
        let k = K;
        let d1 = Dipole::permanent(Vec3::ZERO, Vec3::new(0.1, 0.4, 1.0)).unwrap();
        let d2 = Dipole::permanent(Vec3::new(0.2, 0.1, -0.1), Vec3::new(-0.3, 0.2, 0.5)).unwrap();
        let table = pair_interaction_free(&d1, &d2, &k).unwrap();
        assert_eq!(table.len(), 1);
        let e = &table.entries[0];
        assert_eq!(e.class, TermClass::Permanent);
        let expected = v_static(
            d1.moment(LevelPair::new(0, 0)).unwrap(),
            d2.moment(LevelPair::new(0, 0)).unwrap(),
            d1.position(),
            d2.position(),
            &k,
        )
        .unwrap();
        assert!(rel(e.symmetrized().unwrap(), expected) < 1e-14);
    }
}
