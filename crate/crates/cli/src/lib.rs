//! Certification reports for the sizeable-core constructions.
//!
//! Every subcommand produces a [`report::CertReport`]: named pass/fail checks,
//! derived quantities, and a digest of the inputs. Reports serialize
//! canonically, so two runs on the same inputs give identical bytes.

pub mod commands;
pub mod config;
pub mod golden;
pub mod presentation_file;
pub mod report;
