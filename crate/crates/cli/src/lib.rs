//! Config-driven runs, sweeps and self-checks on top of `cavdd-core`.

pub mod app;
pub mod config;
pub mod presets;
pub mod run;
pub mod selftest;
