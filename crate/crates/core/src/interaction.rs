//! Term tables `V^{uv,ab}` for a dipole pair.
//!
//! Entry `(u, v, a, b)` is the coefficient of `|u><v|_2 |a><b|_1`. The
//! `2<-1` value is evaluated at `omega_ab` of dipole 1, the `1<-2` value at
//! `omega_uv` of dipole 2, and the symmetrized value is their mean.

use std::fmt;

use crate::domain::{transition_frequency, Constants, Dipole, LevelPair, Vec3};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermClass {
    /// Both operators static (permanent moments or degenerate levels).
    Permanent,
    /// One static operator, one transition.
    PermanentTransition,
    /// One raising and one lowering transition with matching gaps.
    Resonant,
    /// One raising and one lowering transition with different gaps.
    NonResonant,
    /// Two raising or two lowering transitions.
    CounterRotating,
}

impl TermClass {
    pub const ALL: [TermClass; 5] = [
        TermClass::Permanent,
        TermClass::PermanentTransition,
        TermClass::Resonant,
        TermClass::NonResonant,
        TermClass::CounterRotating,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TermClass::Permanent => "permanent",
            TermClass::PermanentTransition => "permanent-transition",
            TermClass::Resonant => "resonant",
            TermClass::NonResonant => "non-resonant",
            TermClass::CounterRotating => "counter-rotating",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == name)
    }

    /// Classify from the two transition frequencies `omega_ab^(1)` and
    /// `omega_uv^(2)`.
    pub fn classify(omega_1: f64, omega_2: f64) -> Self {
        let scale = omega_1.abs().max(omega_2.abs());
        let zero = |w: f64| w.abs() <= 1e-12 * scale || w == 0.0;
        match (zero(omega_1), zero(omega_2)) {
            (true, true) => TermClass::Permanent,
            (true, false) | (false, true) => TermClass::PermanentTransition,
            _ if omega_1.signum() == omega_2.signum() => TermClass::CounterRotating,
            _ if (omega_1 + omega_2).abs() <= 1e-9 * scale => TermClass::Resonant,
            _ => TermClass::NonResonant,
        }
    }

    /// Co-rotating terms: resonant and non-resonant exchange.
    pub fn is_co_rotating(&self) -> bool {
        matches!(self, TermClass::Resonant | TermClass::NonResonant)
    }
}

impl fmt::Display for TermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Image/mode decomposition of a cavity value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitParts {
    pub image: f64,
    pub mode: f64,
    pub image_tail: f64,
    pub mode_tail: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Directional {
    pub total: f64,
    pub split: Option<SplitParts>,
}

impl Directional {
    pub fn plain(total: f64) -> Self {
        Self { total, split: None }
    }
}

pub type TermValue = std::result::Result<Directional, Error>;

#[derive(Debug, Clone, PartialEq)]
pub struct TermEntry {
    /// `(u, v)` on dipole 2.
    pub dipole2: LevelPair,
    /// `(a, b)` on dipole 1.
    pub dipole1: LevelPair,
    pub class: TermClass,
    /// `omega_ab` of dipole 1; frequency of the `2<-1` propagation.
    pub omega_21: f64,
    /// `omega_uv` of dipole 2; frequency of the `1<-2` propagation.
    pub omega_12: f64,
    pub v21: TermValue,
    pub v12: TermValue,
}

impl TermEntry {
    pub fn symmetrized(&self) -> Option<f64> {
        match (&self.v21, &self.v12) {
            (Ok(a), Ok(b)) => Some(0.5 * (a.total + b.total)),
            _ => None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.v21.is_ok() && self.v12.is_ok()
    }

    /// First failure on this term, if any.
    pub fn failure(&self) -> Option<&Error> {
        self.v21.as_ref().err().or(self.v12.as_ref().err())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InteractionTable {
    pub entries: Vec<TermEntry>,
}

impl InteractionTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, dipole2: LevelPair, dipole1: LevelPair) -> Option<&TermEntry> {
        self.entries
            .iter()
            .find(|e| e.dipole2 == dipole2 && e.dipole1 == dipole1)
    }

    pub fn succeeded(&self) -> usize {
        self.entries.iter().filter(|e| e.is_ok()).count()
    }

    /// Sum of the symmetrized values over all successful terms.
    pub fn symmetrized_total(&self) -> f64 {
        self.entries.iter().filter_map(TermEntry::symmetrized).sum()
    }

    /// The same table with the roles of the two dipoles exchanged.
    pub fn relabeled(&self) -> Self {
        let mut entries: Vec<TermEntry> = self
            .entries
            .iter()
            .map(|e| TermEntry {
                dipole2: e.dipole1,
                dipole1: e.dipole2,
                class: e.class,
                omega_21: e.omega_12,
                omega_12: e.omega_21,
                v21: e.v12.clone(),
                v12: e.v21.clone(),
            })
            .collect();
        entries.sort_by_key(|e| (e.dipole2, e.dipole1));
        Self { entries }
    }
}

/// Which way the field propagates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Field of dipole 1 acting on dipole 2.
    TwoFromOne,
    /// Field of dipole 2 acting on dipole 1.
    OneFromTwo,
}

/// One directional request: field-side moment, source-side moment and the
/// source transition frequency.
#[derive(Debug, Clone, Copy)]
pub struct DirectionalRequest {
    pub direction: Direction,
    pub field_moment: Vec3,
    pub source_moment: Vec3,
    pub omega: f64,
}

/// Walk every `(u, v, a, b)` in lexicographic order and fill both directions
/// through `evaluate`.
pub(crate) fn assemble<F>(d1: &Dipole, d2: &Dipole, k: &Constants, mut evaluate: F) -> Result<InteractionTable>
where
    F: FnMut(DirectionalRequest) -> TermValue,
{
    let mut entries = Vec::with_capacity(d1.levels().pow(2) * d2.levels().pow(2));
    for uv in d2.pairs() {
        let m2 = d2.moment(uv)?;
        let omega_12 = transition_frequency(d2, uv, k)?;
        for ab in d1.pairs() {
            let m1 = d1.moment(ab)?;
            let omega_21 = transition_frequency(d1, ab, k)?;
            let v21 = evaluate(DirectionalRequest {
                direction: Direction::TwoFromOne,
                field_moment: m2,
                source_moment: m1,
                omega: omega_21,
            });
            let v12 = evaluate(DirectionalRequest {
                direction: Direction::OneFromTwo,
                field_moment: m1,
                source_moment: m2,
                omega: omega_12,
            });
            entries.push(TermEntry {
                dipole2: uv,
                dipole1: ab,
                class: TermClass::classify(omega_21, omega_12),
                omega_21,
                omega_12,
                v21,
                v12,
            });
        }
    }
    Ok(InteractionTable { entries })
}
