//! Second-order elimination of a single shared field mode.
//!
//! Two two-level dipoles couple to one mode through
//! `V = g1 t1+ a + g2 t2+ a + h.c.` on top of
//! `H0 = w1 t1+ t1- + w2 t2+ t2- + nu a+ a`. The generator
//! `S = A t1+ a + B t2+ a - h.c.` with `A = g1/(nu - w1)`, `B = g2/(nu - w2)`
//! removes the first-order coupling, and `[V, S]/2` leaves an exchange term
//! `beta t1+ t2- + h.c.` plus mode-dependent shifts `xi_a t_a^z (a+ a + 1/2)`.
//!
//! Besides the closed forms, this module carries a tiny ladder-operator
//! algebra that assembles `V + [H0, S]` and `[V, S]/2` term by term, so the
//! closed forms can be checked against the commutators they come from.

use num_complex::Complex64;

use crate::domain::Constants;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleModeSystem {
    pub omega1: f64,
    pub omega2: f64,
    pub nu: f64,
    pub g1: Complex64,
    pub g2: Complex64,
    /// Minimum allowed `|omega_a - nu|`.
    pub detune_guard: f64,
}

impl SingleModeSystem {
    /// Guard defaults to `1e-9 max(|w1|, |w2|, |nu|)`.
    pub fn new(omega1: f64, omega2: f64, nu: f64, g1: Complex64, g2: Complex64) -> Result<Self> {
        let guard = 1e-9 * omega1.abs().max(omega2.abs()).max(nu.abs());
        Self::with_guard(omega1, omega2, nu, g1, g2, guard)
    }

    pub fn with_guard(omega1: f64, omega2: f64, nu: f64, g1: Complex64, g2: Complex64, detune_guard: f64) -> Result<Self> {
        let finite = [omega1, omega2, nu, g1.re, g1.im, g2.re, g2.im, detune_guard]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFinite { what: "single-mode system" });
        }
        let s = Self {
            omega1,
            omega2,
            nu,
            g1,
            g2,
            detune_guard,
        };
        s.check()?;
        Ok(s)
    }

    /// Real couplings.
    pub fn real(omega1: f64, omega2: f64, nu: f64, g1: f64, g2: f64) -> Result<Self> {
        Self::new(omega1, omega2, nu, g1.into(), g2.into())
    }

    fn check(&self) -> Result<()> {
        for (which, omega) in [(1u8, self.omega1), (2u8, self.omega2)] {
            let detuning = (omega - self.nu).abs();
            if detuning <= self.detune_guard {
                return Err(Error::DetuningGuard {
                    which,
                    detuning,
                    guard: self.detune_guard,
                });
            }
        }
        Ok(())
    }

    fn detunings(&self) -> (f64, f64) {
        (self.omega1 - self.nu, self.omega2 - self.nu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FnTransform {
    /// Exchange coefficient of `t1+ t2-`.
    pub beta: Complex64,
    pub xi1: f64,
    pub xi2: f64,
    /// Generator coefficient `A = g1 / (nu - w1)`.
    pub a: Complex64,
    /// Generator coefficient `B = g2 / (nu - w2)`.
    pub b: Complex64,
}

/// Closed-form effective couplings.
///
/// `beta = (g1 g2*/2) [1/(w1 - nu) + 1/(w2 - nu)]`; for real couplings this
/// is the familiar `[g1 g2/(w1 - nu) + g2 g1/(w2 - nu)]/2`.
pub fn fn_transform(s: &SingleModeSystem) -> Result<FnTransform> {
    s.check()?;
    let (d1, d2) = s.detunings();
    let exchange = s.g1 * s.g2.conj();
    Ok(FnTransform {
        beta: 0.5 * (exchange / d1 + exchange / d2),
        xi1: s.g1.norm_sqr() / d1,
        xi2: s.g2.norm_sqr() / d2,
        a: s.g1 / (s.nu - s.omega1),
        b: s.g2 / (s.nu - s.omega2),
    })
}

/// Ladder monomial `t_d+ a` (raise) or `t_d- a+` (lower) on dipole `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Ladder {
    dipole: u8,
    raise: bool,
}

type Operator = Vec<(Ladder, Complex64)>;

const BASIS: [Ladder; 4] = [
    Ladder { dipole: 1, raise: true },
    Ladder { dipole: 2, raise: true },
    Ladder { dipole: 1, raise: false },
    Ladder { dipole: 2, raise: false },
];

fn coupling_operator(s: &SingleModeSystem) -> Operator {
    vec![
        (BASIS[0], s.g1),
        (BASIS[1], s.g2),
        (BASIS[2], s.g1.conj()),
        (BASIS[3], s.g2.conj()),
    ]
}

fn generator(a: Complex64, b: Complex64) -> Operator {
    vec![(BASIS[0], a), (BASIS[1], b), (BASIS[2], -a.conj()), (BASIS[3], -b.conj())]
}

// [H0, M] = (energy M adds) M.
fn energy_transfer(s: &SingleModeSystem, m: Ladder) -> f64 {
    let omega = if m.dipole == 1 { s.omega1 } else { s.omega2 };
    if m.raise {
        omega - s.nu
    } else {
        s.nu - omega
    }
}

/// Largest coefficient of `V + [H0, S]` in the ladder basis for generator
/// coefficients `a`, `b`.
pub fn generator_residual(s: &SingleModeSystem, a: Complex64, b: Complex64) -> f64 {
    let v = coupling_operator(s);
    let gen = generator(a, b);
    BASIS
        .iter()
        .map(|m| {
            let from_v: Complex64 = v.iter().filter(|(x, _)| x == m).map(|(_, c)| c).sum();
            let from_comm: Complex64 = gen
                .iter()
                .filter(|(x, _)| x == m)
                .map(|(x, c)| c * energy_transfer(s, *x))
                .sum();
            (from_v + from_comm).norm()
        })
        .fold(0.0, f64::max)
}

/// [`generator_residual`] at the closed-form `A`, `B`.
pub fn first_order_residual(s: &SingleModeSystem) -> Result<f64> {
    let t = fn_transform(s)?;
    Ok(generator_residual(s, t.a, t.b))
}

/// Second-order terms read off `[V, S]/2` by commuting monomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrder {
    /// Coefficient of `t1+ t2-`.
    pub exchange: Complex64,
    /// Coefficients of `t_a^z (a+ a + 1/2)`.
    pub shifts: [Complex64; 2],
}

pub fn second_order_terms(s: &SingleModeSystem, a: Complex64, b: Complex64) -> SecondOrder {
    let v = coupling_operator(s);
    let gen = generator(a, b);
    let mut exchange = Complex64::new(0.0, 0.0);
    let mut shifts = [Complex64::new(0.0, 0.0); 2];
    for (x, cx) in &v {
        for (y, cy) in &gen {
            let c = 0.5 * cx * cy;
            match (x.dipole == y.dipole, x.raise, y.raise) {
                // [t+ a, t- a+] = t^z (n + 1/2) + 1/2 on one dipole
                (true, true, false) => shifts[x.dipole as usize - 1] += c,
                (true, false, true) => shifts[x.dipole as usize - 1] -= c,
                // [t1+ a, t2- a+] = t1+ t2- [a, a+] = t1+ t2-
                (false, true, false) if x.dipole == 1 => exchange += c,
                // [t2- a+, t1+ a] = t1+ t2- [a+, a] = -t1+ t2-
                (false, false, true) if x.dipole == 2 => exchange -= c,
                _ => {}
            }
        }
    }
    SecondOrder { exchange, shifts }
}

/// Mode coupling in frequency units from a magnetic coupling `zeta` of a
/// mode with frequency `nu`, under the convention `g = c zeta / sqrt(2 nu)`.
///
/// This is a convention, not derived: it makes `beta` for a single mode
/// match the single-pole approximant `c^2 zeta_1 zeta_2 / (2 omega (omega - nu))`
/// of the mode sum when `omega ~ nu`. Use only for that comparison.
pub fn coupling_from_zeta(zeta: f64, nu: f64, k: &Constants) -> f64 {
    k.c() * zeta / (2.0 * nu).sqrt()
}
