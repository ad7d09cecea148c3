//! Evaluation of prepared configs and CSV rendering.

use std::fmt::Write as _;

use cavdd_core::ewald::pair_interaction_cavity;
use cavdd_core::freespace::{pair_interaction_free, v_retarded, v_static};
use cavdd_core::interaction::{Directional, TermEntry};
use cavdd_core::{Constants, Error, InteractionTable, LevelPair};
use log::{debug, info};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::config::{Prepared, Sample};

/// Results of one sample.
#[derive(Debug, Clone)]
pub struct SampleResult {
    pub value: Option<f64>,
    pub table: std::result::Result<InteractionTable, Error>,
    /// Free-space references `(V0, V(omega))` per entry.
    pub references: Vec<(f64, f64)>,
}

impl SampleResult {
    /// Terms that evaluated in both directions.
    pub fn succeeded(&self) -> usize {
        self.table.as_ref().map_or(0, |t| t.succeeded())
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub samples: Vec<SampleResult>,
}

impl RunOutput {
    /// True when no term of any sample evaluated.
    pub fn all_guarded(&self) -> bool {
        self.samples.iter().all(|s| s.succeeded() == 0)
    }
}

fn evaluate(p: &Prepared, sample: &Sample) -> SampleResult {
    let [d1, d2] = &sample.dipoles;
    let k = &p.constants;
    let table = match (p.geometry, p.params) {
        (Some(g), Some(params)) => pair_interaction_cavity(d1, d2, &g, k, &params),
        _ => pair_interaction_free(d1, d2, k),
    };
    let references = match &table {
        Ok(t) => t
            .entries
            .iter()
            .map(|e| free_references(e, sample, k))
            .collect(),
        Err(_) => Vec::new(),
    };
    SampleResult {
        value: sample.value,
        table,
        references,
    }
}

// V0 and the symmetrized V(omega) of the same term without walls.
fn free_references(e: &TermEntry, sample: &Sample, k: &Constants) -> (f64, f64) {
    let [d1, d2] = &sample.dipoles;
    let moment = |d: &cavdd_core::Dipole, pair: LevelPair| d.moment(pair).expect("pair from table");
    let (m1, m2) = (moment(d1, e.dipole1), moment(d2, e.dipole2));
    let (r1, r2) = (d1.position(), d2.position());
    let v0 = v_static(m1, m2, r1, r2, k).unwrap_or(f64::NAN);
    let v21 = v_retarded(m1, m2, r1, r2, e.omega_21, k);
    let v12 = v_retarded(m2, m1, r2, r1, e.omega_12, k);
    let vw = match (v21, v12) {
        (Ok(a), Ok(b)) => 0.5 * (a + b),
        _ => f64::NAN,
    };
    (v0, vw)
}

/// Evaluate every sample on a pool of `workers` threads; results keep
/// sweep order.
pub fn run(p: &Prepared, workers: usize) -> Result<RunOutput, crate::config::ConfigError> {
    let samples = p.samples()?;
    info!("evaluating {} sample(s) on {} worker(s)", samples.len(), workers);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    let results = pool.install(|| samples.par_iter().map(|s| evaluate(p, s)).collect());
    Ok(RunOutput { samples: results })
}

pub fn config_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Stable kebab-case tag for an error, used in the status column.
pub fn status_tag(e: &Error) -> &'static str {
    match e {
        Error::NonFinite { .. } => "non-finite",
        Error::DegenerateSeparation => "degenerate-separation",
        Error::ImageCoincidence { .. } => "image-coincidence",
        Error::NonHermitian { .. } => "non-hermitian",
        Error::UnsortedEnergies { .. } => "unsorted-energies",
        Error::NoLevels => "no-levels",
        Error::MomentShape { .. } => "moment-shape",
        Error::LevelOutOfRange { .. } => "level-out-of-range",
        Error::InvalidParameter { .. } => "invalid-parameter",
        Error::OutsideBox { .. } => "outside-box",
        Error::ResonanceGuard { .. } => "resonance-guard",
        Error::GammaResonance { .. } => "gamma-resonance",
        Error::CutoffBelowFrequency { .. } => "cutoff-below-frequency",
        Error::DetuningGuard { .. } => "detuning-guard",
    }
}

fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

fn split_field(d: &std::result::Result<Directional, Error>, pick: fn(&cavdd_core::interaction::SplitParts) -> f64) -> String {
    match d {
        Ok(Directional { split: Some(s), .. }) => float(pick(s)),
        _ => String::new(),
    }
}

fn total(d: &std::result::Result<Directional, Error>) -> String {
    d.as_ref().map(|v| float(v.total)).unwrap_or_default()
}

fn cell(column: &str, e: &TermEntry, refs: (f64, f64)) -> String {
    let tails = e.v21.as_ref().ok().and_then(|d| d.split).or(e.v12.as_ref().ok().and_then(|d| d.split));
    match column {
        "u" => e.dipole2.a.to_string(),
        "v" => e.dipole2.b.to_string(),
        "a" => e.dipole1.a.to_string(),
        "b" => e.dipole1.b.to_string(),
        "class" => e.class.as_str().to_string(),
        "omega_21" => float(e.omega_21),
        "omega_12" => float(e.omega_12),
        "v_21" => total(&e.v21),
        "v_12" => total(&e.v12),
        "v_sym" => e.symmetrized().map(float).unwrap_or_default(),
        "v_21_image" => split_field(&e.v21, |s| s.image),
        "v_21_mode" => split_field(&e.v21, |s| s.mode),
        "v_12_image" => split_field(&e.v12, |s| s.image),
        "v_12_mode" => split_field(&e.v12, |s| s.mode),
        "image_tail" => tails.map(|s| float(s.image_tail)).unwrap_or_default(),
        "mode_tail" => tails.map(|s| float(s.mode_tail)).unwrap_or_default(),
        "v0_free" => float(refs.0),
        "vomega_free" => float(refs.1),
        "status" => match e.failure() {
            None => "ok".to_string(),
            Some(err) => status_tag(err).to_string(),
        },
        other => unreachable!("column {other} validated at config time"),
    }
}

/// Render the run as CSV: `#` metadata lines, a header and one row per
/// term (per sample for sweeps).
pub fn render_csv(p: &Prepared, out: &RunOutput, config_text: &str) -> String {
    let k = &p.constants;
    let mut s = String::new();
    let _ = writeln!(s, "# cavdd {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "# config-sha256 {}", config_hash(config_text));
    let _ = writeln!(s, "# constants c={} mu0={} hbar={}", float(k.c()), float(k.mu0()), float(k.hbar()));
    match (p.geometry, p.params) {
        (Some(g), Some(e)) => {
            let _ = writeln!(s, "# geometry lx={} ly={} lz={}", float(g.lx()), float(g.ly()), float(g.lz()));
            let _ = writeln!(s, "# ewald kc={} target_tail={}", float(e.kc), float(e.target_tail));
        }
        _ => {
            let _ = writeln!(s, "# geometry free-space");
        }
    }
    let mut header: Vec<&str> = Vec::new();
    if let Some(sw) = p.sweep {
        header.push(sw.variable.as_str());
    }
    header.extend(p.columns.iter().copied());
    let _ = writeln!(s, "{}", header.join(","));

    for sample in &out.samples {
        let prefix = sample.value.map(float);
        match &sample.table {
            Ok(table) => {
                for (entry, refs) in table.entries.iter().zip(&sample.references) {
                    if let Some(classes) = &p.classes {
                        if !classes.contains(&entry.class) {
                            continue;
                        }
                    }
                    let mut row: Vec<String> = prefix.iter().cloned().collect();
                    row.extend(p.columns.iter().map(|c| cell(c, entry, *refs)));
                    let _ = writeln!(s, "{}", row.join(","));
                }
            }
            Err(err) => {
                debug!("sample {:?} failed: {err}", sample.value);
                let mut row: Vec<String> = prefix.iter().cloned().collect();
                row.extend(p.columns.iter().map(|c| if *c == "status" { status_tag(err).to_string() } else { String::new() }));
                let _ = writeln!(s, "{}", row.join(","));
            }
        }
    }
    s
}
