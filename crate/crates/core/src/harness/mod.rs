//! Experiment orchestration: configuration, seeded trial execution, sweeps,
//! CSV output and acceptance suites.

pub mod acceptance;
pub mod config;
pub mod experiment;

pub use acceptance::{run_acceptance, AcceptanceOptions, AcceptanceReport, CriterionOutcome};
pub use config::ExperimentConfig;
pub use experiment::{run_trial, write_csv, write_outputs, CsvRow, Experiment, PointResult, CSV_HEADER};
