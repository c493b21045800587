//! Multisingularity types: monomials of the free Abelian semigroup on the
//! sixteen generators.
//!
//! A type is an exponent vector over [`Generator::ALL`]; the empty vector is
//! the unit `1` (the type of a point with no preimages). Codimension and
//! A1-degree are additive under the product, which makes both gradings usable
//! for exact truncation.
//!
//! `Ord` is the canonical total order: by codimension, then by A1-degree,
//! then descending-lexicographic on the exponent vector. All enumeration and
//! serialisation in the crate follows it.

use std::cmp::Ordering;
use std::fmt;

use crate::generator::Generator;

/// Exponent vector over the sixteen generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; Generator::COUNT],
}

impl Monomial {
    /// The unit type `1`.
    pub const ONE: Monomial = Monomial { exps: [0; Generator::COUNT] };

    pub fn generator(g: Generator) -> Monomial {
        let mut exps = [0; Generator::COUNT];
        exps[g.ord()] = 1;
        Monomial { exps }
    }

    pub fn from_exponents(exps: [u16; Generator::COUNT]) -> Monomial {
        Monomial { exps }
    }

    pub fn exponent(&self, g: Generator) -> u16 {
        self.exps[g.ord()]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Sum of factor codimensions.
    pub fn codim(&self) -> u32 {
        self.exps
            .iter()
            .zip(Generator::ALL)
            .map(|(&e, g)| u32::from(e) * g.codim())
            .sum()
    }

    /// Exponent of the A1 factor.
    pub fn a1_degree(&self) -> u16 {
        self.exps[0]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = [0; Generator::COUNT];
        for i in 0..Generator::COUNT {
            exps[i] = self.exps[i]
                .checked_add(other.exps[i])
                .expect("monomial exponent overflow");
        }
        Monomial { exps }
    }

    pub fn mul_gen(&self, g: Generator) -> Monomial {
        self.mul(&Monomial::generator(g))
    }

    /// Multiply by A1^k.
    pub fn mul_a1(&self, k: u16) -> Monomial {
        let mut exps = self.exps;
        exps[0] = exps[0].checked_add(k).expect("monomial exponent overflow");
        Monomial { exps }
    }

    /// The type with all A1 factors removed.
    pub fn a1_free_part(&self) -> Monomial {
        let mut exps = self.exps;
        exps[0] = 0;
        Monomial { exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Quotient by a divisor; `None` when not divisible.
    pub fn div(&self, divisor: &Monomial) -> Option<Monomial> {
        if !divisor.divides(self) {
            return None;
        }
        let mut exps = [0; Generator::COUNT];
        for i in 0..Generator::COUNT {
            exps[i] = self.exps[i] - divisor.exps[i];
        }
        Some(Monomial { exps })
    }

    /// Factors with nonzero exponent, in generator order.
    pub fn factors(&self) -> impl Iterator<Item = (Generator, u16)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (Generator::from_ord(i), e))
    }

    /// Simultaneous `+ <-> -` swap on every signed factor.
    pub fn sign_flipped(&self) -> Monomial {
        let mut exps = [0; Generator::COUNT];
        for (g, e) in self.factors() {
            exps[g.sign_flipped().ord()] += e;
        }
        Monomial { exps }
    }

    /// All types with codim <= `max_codim` and A1-degree <= `max_a1`, in the
    /// canonical order, duplicate-free and closed under divisors.
    pub fn enumerate(max_codim: u32, max_a1: u16) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = [0u16; Generator::COUNT];
        collect(1, max_codim, &mut exps, &mut out);
        let mut all = Vec::with_capacity(out.len() * (usize::from(max_a1) + 1));
        for m in out {
            for k in 0..=max_a1 {
                all.push(m.mul_a1(k));
            }
        }
        all.sort();
        all
    }
}

// Enumerates A1-free exponent vectors over generators[from..] within the
// codim budget.
fn collect(from: usize, budget: u32, exps: &mut [u16; Generator::COUNT], out: &mut Vec<Monomial>) {
    if from == Generator::COUNT {
        out.push(Monomial { exps: *exps });
        return;
    }
    let c = Generator::from_ord(from).codim();
    debug_assert!(c > 0, "A1 is handled separately");
    let mut e = 0u16;
    while u32::from(e) * c <= budget {
        exps[from] = e;
        collect(from + 1, budget - u32::from(e) * c, exps, out);
        e += 1;
    }
    exps[from] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.codim()
            .cmp(&other.codim())
            .then_with(|| self.a1_degree().cmp(&other.a1_degree()))
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    /// Factors are printed highest codimension first (A1 last), matching the
    /// usual way multisingularity symbols are written: `D4+ A3- A1^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut factors: Vec<(Generator, u16)> = self.factors().collect();
        factors.sort_by(|a, b| b.0.codim().cmp(&a.0.codim()).then(a.0.ord().cmp(&b.0.ord())));
        let mut first = true;
        for (g, e) in factors {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", g)?;
            } else {
                write!(f, "{}^{}", g, e)?;
            }
        }
        Ok(())
    }
}
