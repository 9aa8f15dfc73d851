//! Strategic manipulation of threshold proportional-representation elections.
//!
//! An election is a set of running parties, voters with strict orders over a
//! wider party universe, and an electoral threshold. Each voter's single vote
//! goes to their top running party; parties reaching the threshold are
//! *active* and share the parliament in proportion to their active votes.
//!
//! The manipulator promotes a coalition `C` (reach a fraction `phi` of the
//! active votes) and optionally a favored party inside it (hold a fraction
//! `rho` of the coalition's share). This crate decides, and constructs
//! witnesses for, three families of manipulation:
//!
//! * [`bribery`]: changing voters' orders under unit, per-voter, swap and
//!   coalition-shift cost models.
//! * [`voter_control`]: adding spoiler voters or deleting registered voters.
//! * [`party_control`]: deleting or adding coalition/opposition parties.
//!
//! [`reductions`] builds the hard party-control and shift-bribery instances
//! from clique, dominating-set and exact-cover inputs, and [`io`] holds the
//! JSON instance/result documents and a seeded instance generator.
//!
//! Every feasible answer carries a witness that is re-tallied through
//! [`election`] before it is returned.

pub mod bribery;
mod cost;
pub mod election;
mod error;
pub mod exec;
pub mod fixtures;
pub mod io;
pub mod mcf;
pub mod party_control;
pub mod rational;
pub mod reductions;
pub mod voter_control;

pub use error::{Error, Result};
pub use exec::Execution;
pub use rational::Rational;
