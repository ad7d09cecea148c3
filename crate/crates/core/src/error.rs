use thiserror::Error;

use crate::cavity_modes::ModeIndex;
use crate::domain::Vec3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    #[error("degenerate separation: field and source points coincide")]
    DegenerateSeparation,

    #[error("field point coincides with image ({i}, {j}, {l}; {r}{s}{t}) of the source")]
    ImageCoincidence {
        i: i64,
        j: i64,
        l: i64,
        r: u8,
        s: u8,
        t: u8,
    },

    #[error("moment matrix is not Hermitian at levels ({u}, {v})")]
    NonHermitian { u: usize, v: usize },

    #[error("level energies must be sorted non-decreasing (index {index})")]
    UnsortedEnergies { index: usize },

    #[error("a dipole needs at least one level")]
    NoLevels,

    #[error("moment matrix must be {expected}x{expected}, got {rows} rows / row of length {cols}")]
    MomentShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("level index {index} out of range for a dipole with {levels} levels")]
    LevelOutOfRange { index: usize, levels: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("point {point} lies outside the cavity")]
    OutsideBox { point: Vec3 },

    #[error("resonance guard: mode {mode} has k = {k_mode}, within {tol:e} of k = {k}")]
    ResonanceGuard {
        mode: ModeIndex,
        k_mode: f64,
        k: f64,
        tol: f64,
    },

    #[error("resonance guard: k_mode = {k_mode} within {tol:e} of k = {k}")]
    GammaResonance { k_mode: f64, k: f64, tol: f64 },

    #[error("mode cutoff {cutoff} must exceed the evaluation wavenumber {k}")]
    CutoffBelowFrequency { cutoff: f64, k: f64 },

    #[error("detuning guard: |omega_{which} - nu| = {detuning:e} is below {guard:e}")]
    DetuningGuard {
        which: u8,
        detuning: f64,
        guard: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
