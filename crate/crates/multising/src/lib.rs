//! Exact universal relations between Euler characteristics of Lagrangian
//! multisingularity manifolds in target dimensions 3, 4 and 5.
//!
//! The whole computation runs over exact rationals. Starting from the
//! adjacency homomorphism table (`data/jtable.dsl`), the crate builds the
//! linear system between Euler characteristics of multisingularity strata,
//! solves it by back-substitution, lifts the per-k solutions to parametric
//! rows, aggregates them into caustic (`ca`) relations, collapses signs to
//! caustic-symbol relations, and extracts mod-2 congruences and divisibility
//! consequences. Digitised reference tables live in `data/` and are compared
//! coefficient by coefficient against everything the engine derives.

pub mod algebra;
pub mod collapse;
pub mod dsl;
pub mod jtable;
pub mod relations;
pub mod generator;
pub mod lattice;
pub mod monomial;
pub mod parametric;
pub mod parity;

use std::fmt;

use serde::{Deserialize, Serialize};

/// Compactness hypothesis a relation depends on, ordered by strength.
///
/// H0: the singular set of the caustic is compact; H1: the source manifold is
/// compact; H2: source and target are both compact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    CausticCompact,
    SourceCompact,
    SourceTargetCompact,
}

impl Hypothesis {
    pub fn token(self) -> &'static str {
        match self {
            Hypothesis::CausticCompact => "H0",
            Hypothesis::SourceCompact => "H1",
            Hypothesis::SourceTargetCompact => "H2",
        }
    }

    pub fn from_token(tok: &str) -> Option<Hypothesis> {
        match tok {
            "H0" => Some(Hypothesis::CausticCompact),
            "H1" => Some(Hypothesis::SourceCompact),
            "H2" => Some(Hypothesis::SourceTargetCompact),
            _ => None,
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}
