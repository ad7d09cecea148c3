//! Run configuration files (TOML).
//!
//! ```toml
//! [geometry]              # omit for free space
//! lx = 1.0
//! ly = 1.0
//! lz = 1.0
//!
//! [[dipole]]
//! position = [0.5, 0.5, 0.5]
//! levels = "frequencies"  # or "energies"
//! values = [0.0, 20.0]
//! moments = [[[0, 0, 0], [0, 0, 1]], [[0, 0, 1], [0, 0, 0]]]
//!
//! [[dipole]]              # second dipole; position comes from the sweep
//! ...
//!
//! [sweep]
//! variable = "separation" # r2 = r1 + R e_axis
//! axis = "x"
//! from = 0.005
//! to = 0.495
//! samples = 100
//! ```
//!
//! Optional sections: `[constants]` (c, mu0, hbar), `[ewald]` (kc,
//! image_range, mode_cutoff, resonance_tol, target_tail), `[output]` (csv,
//! columns, classes) and a top-level `workers`. Unknown keys are errors.

use std::fmt;

use cavdd_core::{CavityGeometry, Constants, Dipole, EwaldParams, TermClass, Vec3};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("could not parse config: {0}")]
    Parse(String),
    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },
    #[error("sweep sample {index} ({variable} = {value}) puts dipole {dipole} at {point}, outside the cavity")]
    SampleOutside {
        index: usize,
        variable: SweepVariable,
        value: f64,
        dipole: usize,
        point: Vec3,
    },
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometrySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ewald: Option<EwaldSpec>,
    #[serde(rename = "dipole")]
    pub dipoles: Vec<DipoleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsSpec {
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "one")]
    pub mu0: f64,
    #[serde(default = "one")]
    pub hbar: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EwaldSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_range: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_cutoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resonance_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_tail: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelUnits {
    /// Values are energies `E_a`.
    Energies,
    /// Values are `E_a / hbar`.
    Frequencies,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DipoleSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<[f64; 3]>,
    pub levels: LevelUnits,
    pub values: Vec<f64>,
    /// `moments[a][b]` is the 3-vector `m^{ab}`.
    pub moments: Vec<Vec<[f64; 3]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    /// Dipole 2 sits at `r1 + R e_axis`.
    Separation,
    /// Both dipoles shifted by `d e_axis`.
    Offset,
    /// Level values multiplied by the sample value.
    Frequency,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Separation => "separation",
            Self::Offset => "offset",
            Self::Frequency => "frequency",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn unit(&self) -> Vec3 {
        match self {
            Self::X => Vec3::X,
            Self::Y => Vec3::Y,
            Self::Z => Vec3::Z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<Axis>,
    pub from: f64,
    pub to: f64,
    pub samples: usize,
}

impl SweepSpec {
    /// Evenly spaced sample values, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let n = self.samples;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.to
                } else {
                    self.from + (self.to - self.from) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<Vec<String>>,
    /// Term classes to emit; all when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<String>>,
}

/// Every column a run can emit, in output order.
pub const COLUMNS: [&str; 19] = [
    "u",
    "v",
    "a",
    "b",
    "class",
    "omega_21",
    "omega_12",
    "v_21",
    "v_12",
    "v_sym",
    "v_21_image",
    "v_21_mode",
    "v_12_image",
    "v_12_mode",
    "image_tail",
    "mode_tail",
    "v0_free",
    "vomega_free",
    "status",
];

/// A config after validation, with core types built.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub constants: Constants,
    pub geometry: Option<CavityGeometry>,
    pub params: Option<EwaldParams>,
    pub dipoles: [DipoleSpec; 2],
    pub sweep: Option<SweepSpec>,
    pub columns: Vec<&'static str>,
    pub classes: Option<Vec<TermClass>>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn prepare(&self) -> Result<Prepared, ConfigError> {
        let constants = match self.constants {
            Some(c) => Constants::new(c.c, c.mu0, c.hbar).map_err(|e| invalid("constants", e.to_string()))?,
            None => Constants::natural(),
        };
        let geometry = self
            .geometry
            .map(|g| CavityGeometry::new(g.lx, g.ly, g.lz).map_err(|e| invalid("geometry", e.to_string())))
            .transpose()?;
        let params = match (geometry, self.ewald) {
            (Some(g), spec) => Some(ewald_params(&g, spec.unwrap_or_default())?),
            (None, Some(_)) => return Err(invalid("ewald", "requires a [geometry] section")),
            (None, None) => None,
        };
        if self.dipoles.len() != 2 {
            return Err(invalid("dipole", format!("exactly 2 dipoles required, got {}", self.dipoles.len())));
        }
        if self.workers == Some(0) {
            return Err(invalid("workers", "must be at least 1"));
        }
        let sweep = self.sweep.map(validate_sweep).transpose()?;
        for (i, d) in self.dipoles.iter().enumerate() {
            let needs_position = !(i == 1 && matches!(sweep, Some(s) if s.variable == SweepVariable::Separation));
            match (needs_position, d.position) {
                (true, None) => return Err(invalid(format!("dipole[{i}].position"), "required")),
                (false, Some(_)) => {
                    return Err(invalid(
                        format!("dipole[{i}].position"),
                        "must be omitted for a separation sweep (set by r1 + R e_axis)",
                    ))
                }
                _ => {}
            }
            // Validates levels and moments through the core constructor.
            build_dipole(d, i, Vec3::ZERO, 1.0, &constants)?;
        }
        let columns = match self.output.as_ref().and_then(|o| o.columns.as_ref()) {
            None => COLUMNS.to_vec(),
            Some(names) => {
                let mut out = Vec::with_capacity(names.len());
                for name in names {
                    match COLUMNS.iter().find(|c| *c == name) {
                        Some(c) => out.push(*c),
                        None => return Err(invalid("output.columns", format!("unknown column `{name}`"))),
                    }
                }
                if out.is_empty() {
                    return Err(invalid("output.columns", "must not be empty"));
                }
                out
            }
        };
        let classes = match self.output.as_ref().and_then(|o| o.classes.as_ref()) {
            None => None,
            Some(names) => Some(
                names
                    .iter()
                    .map(|n| TermClass::parse(n).ok_or_else(|| invalid("output.classes", format!("unknown term class `{n}`"))))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let prepared = Prepared {
            constants,
            geometry,
            params,
            dipoles: [self.dipoles[0].clone(), self.dipoles[1].clone()],
            sweep,
            columns,
            classes,
        };
        prepared.check_samples()?;
        Ok(prepared)
    }
}

fn positive(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(field, format!("must be finite and > 0, got {v}")))
    }
}

fn ewald_params(g: &CavityGeometry, spec: EwaldSpec) -> Result<EwaldParams, ConfigError> {
    let mut p = EwaldParams::for_geometry(g);
    if let Some(kc) = spec.kc {
        p.kc = positive("ewald.kc", kc)?;
    }
    if let Some(n) = spec.image_range {
        p.image_range = Some(n);
    }
    if let Some(cut) = spec.mode_cutoff {
        p.mode_cutoff = Some(positive("ewald.mode_cutoff", cut)?);
    }
    if let Some(tol) = spec.resonance_tol {
        p.resonance_tol = positive("ewald.resonance_tol", tol)?;
    }
    if let Some(tail) = spec.target_tail {
        if !(tail > 0.0 && tail < 1.0) {
            return Err(invalid("ewald.target_tail", format!("must lie in (0, 1), got {tail}")));
        }
        p.target_tail = tail;
    }
    p.validate().map_err(|e| invalid("ewald", e.to_string()))?;
    Ok(p)
}

fn validate_sweep(s: SweepSpec) -> Result<SweepSpec, ConfigError> {
    if !(s.from.is_finite() && s.to.is_finite()) {
        return Err(invalid("sweep.from/to", "must be finite"));
    }
    if !(s.to > s.from) {
        return Err(invalid("sweep.to", format!("must exceed sweep.from ({} <= {})", s.to, s.from)));
    }
    if s.samples < 2 {
        return Err(invalid("sweep.samples", format!("must be at least 2, got {}", s.samples)));
    }
    match s.variable {
        SweepVariable::Separation | SweepVariable::Offset if s.axis.is_none() => {
            Err(invalid("sweep.axis", format!("required for a {} sweep", s.variable)))
        }
        SweepVariable::Frequency if s.axis.is_some() => Err(invalid("sweep.axis", "not used by a frequency sweep")),
        SweepVariable::Separation if s.from <= 0.0 => Err(invalid("sweep.from", "separation must be > 0")),
        _ => Ok(s),
    }
}

/// Build dipole `index` at `position` with level values scaled by `scale`.
pub fn build_dipole(
    spec: &DipoleSpec,
    index: usize,
    position: Vec3,
    scale: f64,
    k: &Constants,
) -> Result<Dipole, ConfigError> {
    let field = |name: &str| format!("dipole[{index}].{name}");
    let n = spec.values.len();
    if n == 0 {
        return Err(invalid(field("values"), "at least one level required"));
    }
    if spec.moments.len() != n || spec.moments.iter().any(|row| row.len() != n) {
        return Err(invalid(field("moments"), format!("must be a {n}x{n} array of 3-vectors")));
    }
    let moments = spec
        .moments
        .iter()
        .map(|row| row.iter().map(|&m| Vec3::from_array(m)).collect())
        .collect();
    let values: Vec<f64> = spec.values.iter().map(|v| v * scale).collect();
    let built = match spec.levels {
        LevelUnits::Energies => Dipole::new(position, values, moments),
        LevelUnits::Frequencies => Dipole::from_frequencies(position, &values, moments, k),
    };
    built.map_err(|e| invalid(format!("dipole[{index}]"), e.to_string()))
}

/// One evaluation point of a run.
#[derive(Debug, Clone)]
pub struct Sample {
    /// Swept value, absent for single runs.
    pub value: Option<f64>,
    pub dipoles: [Dipole; 2],
}

impl Prepared {
    fn sample_at(&self, value: Option<f64>) -> Result<Sample, ConfigError> {
        let pos = |i: usize| self.dipoles[i].position.map(Vec3::from_array);
        let r1 = pos(0).expect("validated");
        let (r1, r2, scale) = match (self.sweep, value) {
            (Some(s), Some(v)) => match s.variable {
                SweepVariable::Separation => (r1, r1 + s.axis.expect("validated").unit() * v, 1.0),
                SweepVariable::Offset => {
                    let shift = s.axis.expect("validated").unit() * v;
                    (r1 + shift, pos(1).expect("validated") + shift, 1.0)
                }
                SweepVariable::Frequency => (r1, pos(1).expect("validated"), v),
            },
            _ => (r1, pos(1).expect("validated"), 1.0),
        };
        let d1 = build_dipole(&self.dipoles[0], 0, r1, scale, &self.constants)?;
        let d2 = build_dipole(&self.dipoles[1], 1, r2, scale, &self.constants)?;
        Ok(Sample {
            value,
            dipoles: [d1, d2],
        })
    }

    /// All evaluation points in sweep order.
    pub fn samples(&self) -> Result<Vec<Sample>, ConfigError> {
        match self.sweep {
            None => Ok(vec![self.sample_at(None)?]),
            Some(s) => s.values().into_iter().map(|v| self.sample_at(Some(v))).collect(),
        }
    }

    fn check_samples(&self) -> Result<(), ConfigError> {
        let samples = self.samples()?;
        let Some(g) = self.geometry else {
            return Ok(());
        };
        for (index, sample) in samples.iter().enumerate() {
            for (dipole, d) in sample.dipoles.iter().enumerate() {
                if !g.contains(d.position()) {
                    return Err(match (self.sweep, sample.value) {
                        (Some(s), Some(value)) => ConfigError::SampleOutside {
                            index,
                            variable: s.variable,
                            value,
                            dipole,
                            point: d.position(),
                        },
                        _ => invalid(format!("dipole[{dipole}].position"), format!("{} lies outside the cavity", d.position())),
                    });
                }
            }
        }
        Ok(())
    }
}
