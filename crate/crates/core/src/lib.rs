//! Toolkit for the strategic fragment of classical stit logic.
//!
//! The crate covers the one-shot neighbourhood semantics (`nbhd`, `mc`),
//! branching-time models with agents and choices (`btac`), the bridge
//! between the two (`bridge`), bounded core morphisms (`morphism`) and the
//! axiom system with soundness fuzzing and bounded validity search (`logic`).

pub mod bridge;
pub mod btac;
pub mod cli;
pub mod error;
pub mod logic;
pub mod mc;
pub mod morphism;
pub mod nbhd;
pub mod report;
pub mod syntax;

pub use error::{Error, Result};
pub use report::{CheckReport, Witness};
pub use syntax::{AgentId, Formula};
