//! Staggered quantum walks with Hamiltonians on Cayley graphs of finite
//! groups.
//!
//! The pipeline: build a [`group::FiniteGroup`], pick an inverse-closed
//! connection set ([`cayley::ConnectionSet`]), partition it into pieces whose
//! union with the identity forms subgroups ([`tessellation`]), turn each
//! induced vertex partition into a reflection operator ([`operators`]), and
//! compose the local unitaries into one walk step. [`phenomena`] provides the
//! angle schedules and detectors for perfect state transfer, uniform mixing,
//! and periodicity, plus the check that a walk step power matches a
//! continuous-time walk. [`config`] and [`cli`] wrap it all in a JSON-driven
//! command-line tool.

pub mod cayley;
pub mod cli;
pub mod config;
pub mod error;
pub mod group;
pub mod operators;
pub mod phenomena;
pub mod tessellation;

pub use error::{Error, Result};
