//! Command implementations behind the CLI: sweeps, lemma suites, profiles
//! and replays.

pub mod config;
pub mod lemmas;
pub mod report;
pub mod sweep;

pub use config::{CharFilter, Moduli, Spacing, SweepConfig, TGrid};
pub use lemmas::{cmd_lemmas, LemmaReport, SuiteResult};
pub use report::{cmd_profile, cmd_replay, ProfileReport, ReplayReport};
pub use sweep::{cmd_verify, fmt17, run_sweep, write_csv, Cell, SweepOutcome, SweepSummary};
