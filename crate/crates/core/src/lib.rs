//! Dipole-dipole interactions between multilevel magnetic dipoles in free
//! space and inside a perfectly conducting rectangular cavity.
//!
//! Natural units are the default (`c = mu0 = hbar = 1`, lengths in units of
//! the cavity side). See [`domain::Constants`] to change them.

pub mod cavity_modes;
pub mod domain;
pub mod effective_coupling;
pub mod error;
pub mod ewald;
pub mod freespace;
pub mod interaction;

pub use domain::{default_kc, transition_frequency, CavityGeometry, Constants, Dipole, EwaldParams, LevelPair, Vec3};
pub use error::{Error, Result};
pub use ewald::{pair_interaction_cavity, CavityGreen};
pub use freespace::{pair_interaction_free, v_retarded, v_static};
pub use interaction::{InteractionTable, TermClass, TermEntry};
