//! Clopen algebra over `2^ℕ × ℕ`, topologies generated by ideals on ℕ, and
//! bounded verification of their properties with replayable certificates.

pub mod cantor;
pub mod certificate;
pub mod config;
pub mod constructions;
pub mod enumeration;
pub mod error;
pub mod finite;
pub mod harness;
pub mod ideals;
pub mod topology;

pub use certificate::{replay, Certificate, Evidence, Outcome, Provenance, Scan, ScanSummary};
pub use error::{Error, Result};
pub use config::Config;
pub use harness::{accepted, resolve_id, run_lemma, run_suite, suite_outcome, LemmaRun, LEMMAS};
