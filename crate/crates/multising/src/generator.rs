//! The sixteen generators of the multisingularity semigroup.
//!
//! A generator is a stable simple Lagrangian singularity class for target
//! dimension n <= 5: `A1, A2, A4, A6, A3±, A5±, D4±, D5±, D6±, E6±`.
//! Odd-index classes of the A, D families and E6 split into a `+` and a `-`
//! form; even-index A classes (and A1) carry no sign.
//!
//! Every generator has a fixed position in [`Generator::ALL`]; that order is
//! the tie-breaker behind all deterministic output in this crate.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Singularity series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

/// Superscript sign of a generator, `None` where the two signed germs are
/// Lagrangian equivalent and the symbol is written unsigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
    None,
}

/// One of the sixteen admissible generator symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub family: Family,
    pub index: u8,
    pub sign: Sign,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("unknown generator token `{0}`")]
    Unknown(String),
}

impl Generator {
    /// All generators in the canonical order used everywhere:
    /// A1, A2, A3+, A3-, A4, A5+, A5-, A6, D4+, D4-, D5+, D5-, D6+, D6-, E6+, E6-.
    pub const ALL: [Generator; 16] = [
        gen(Family::A, 1, Sign::None),
        gen(Family::A, 2, Sign::None),
        gen(Family::A, 3, Sign::Plus),
        gen(Family::A, 3, Sign::Minus),
        gen(Family::A, 4, Sign::None),
        gen(Family::A, 5, Sign::Plus),
        gen(Family::A, 5, Sign::Minus),
        gen(Family::A, 6, Sign::None),
        gen(Family::D, 4, Sign::Plus),
        gen(Family::D, 4, Sign::Minus),
        gen(Family::D, 5, Sign::Plus),
        gen(Family::D, 5, Sign::Minus),
        gen(Family::D, 6, Sign::Plus),
        gen(Family::D, 6, Sign::Minus),
        gen(Family::E, 6, Sign::Plus),
        gen(Family::E, 6, Sign::Minus),
    ];

    pub const COUNT: usize = 16;

    pub const A1: Generator = Self::ALL[0];
    pub const A2: Generator = Self::ALL[1];

    /// Position in [`Generator::ALL`].
    pub fn ord(self) -> usize {
        Self::ALL
            .iter()
            .position(|g| *g == self)
            .expect("generator is one of the sixteen admissible symbols")
    }

    pub fn from_ord(i: usize) -> Generator {
        Self::ALL[i]
    }

    /// Codimension of the singularity: mu - 1 for A_mu and D_mu, 5 for E6.
    pub fn codim(self) -> u32 {
        match self.family {
            Family::A | Family::D => u32::from(self.index) - 1,
            Family::E => 5,
        }
    }

    /// Sign-merged partner: `A3+ <-> A3-` and so on; identity for unsigned
    /// generators. Used when checking delta-parameterised table rows.
    pub fn sign_flipped(self) -> Generator {
        let sign = match self.sign {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::None => Sign::None,
        };
        Generator { sign, ..self }
    }

    /// Whether the caustic germ forgets this generator's sign (odd-index
    /// A/D classes and E6). D4 and D6 keep their signs.
    pub fn sign_collapses(self) -> bool {
        match self.family {
            Family::A | Family::D => self.index % 2 == 1,
            Family::E => true,
        }
    }

    /// ASCII token: "A1", "A3+", "D4-", "E6+", ...
    pub fn token(self) -> String {
        let fam = match self.family {
            Family::A => 'A',
            Family::D => 'D',
            Family::E => 'E',
        };
        let sign = match self.sign {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::None => "",
        };
        format!("{}{}{}", fam, self.index, sign)
    }

    pub fn from_token(tok: &str) -> Result<Generator, GeneratorError> {
        Self::ALL
            .iter()
            .copied()
            .find(|g| g.token() == tok)
            .ok_or_else(|| GeneratorError::Unknown(tok.to_string()))
    }
}

const fn gen(family: Family, index: u8, sign: Sign) -> Generator {
    Generator { family, index, sign }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}
