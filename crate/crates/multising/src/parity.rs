//! Mod-2 congruences between ca-quantities.
//!
//! Every ca-quantity is an Euler characteristic, hence an integer. A relation
//! `lhs = sum c_i T_i` with some half-odd coefficients therefore forces the
//! terms with fractional coefficient to sum to 0 mod 2: doubling the relation
//! makes every coefficient integral and the half-odd ones odd. Denominators
//! other than 1 or 2 never occur in these tables and are a hard error.
//!
//! Congruences live over the A1-free variable table of the dimension (48
//! variables at n = 5), encoded as bit masks; the span is handled by plain
//! GF(2) elimination with pivots chosen in the canonical type order, so the
//! reduced basis is reproducible.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::monomial::Monomial;
use crate::parametric::CaFormula;
use crate::Hypothesis;

#[derive(Debug, Error)]
pub enum ParityError {
    #[error("row `{row}`: coefficient {coeff} of `{term}` has denominator other than 1 or 2")]
    BadDenominator { row: String, term: String, coeff: String },
    #[error("variable `{0}` is outside the lattice variable table")]
    UnknownVariable(String),
}

/// A statement `sum(support) = 0 (mod 2)` over ca-variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub support: BTreeSet<Monomial>,
    /// Row or table the congruence came from.
    pub source: String,
}

impl Congruence {
    pub fn new<I: IntoIterator<Item = Monomial>>(support: I, source: impl Into<String>) -> Congruence {
        Congruence { support: support.into_iter().collect(), source: source.into() }
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0 = 0 (mod 2)");
        }
        let terms: Vec<String> = self.support.iter().map(|m| m.to_string()).collect();
        write!(f, "{} = 0 (mod 2)", terms.join(" + "))
    }
}

/// Extract the mod-2 congruences carried by ca-relations at or below the
/// given hypothesis level.
pub fn raw_congruences(
    rows: &[CaFormula],
    level: Hypothesis,
) -> Result<Vec<Congruence>, ParityError> {
    let mut out = Vec::new();
    for row in rows.iter().filter(|r| r.hypothesis <= level) {
        let mut support = BTreeSet::new();
        for (m, c) in &row.rhs {
            if c.is_integer() {
                continue;
            }
            if *c.denom() != 2.into() {
                return Err(ParityError::BadDenominator {
                    row: row.lhs.to_string(),
                    term: m.to_string(),
                    coeff: c.to_string(),
                });
            }
            support.insert(*m);
        }
        if !support.is_empty() {
            out.push(Congruence { support, source: row.lhs.to_string() });
        }
    }
    Ok(out)
}

/// GF(2) span of a set of congruences over a fixed variable table.
pub struct Gf2Span {
    vars: Vec<Monomial>,
    raw: Vec<Congruence>,
    /// Reduced rows: (mask over vars, combination over raw indices).
    basis: Vec<(u64, u64)>,
}

impl Gf2Span {
    /// `vars` must list every variable congruences may mention (at most 64).
    pub fn new(vars: Vec<Monomial>, raw: Vec<Congruence>) -> Result<Gf2Span, ParityError> {
        assert!(vars.len() <= 64, "variable table fits a 64-bit mask");
        let mut span = Gf2Span { vars, raw, basis: Vec::new() };
        for i in 0..span.raw.len() {
            let mask = span.mask_of(&span.raw[i].support.clone())?;
            span.insert(mask, 1u64 << i);
        }
        Ok(span)
    }

    fn mask_of(&self, support: &BTreeSet<Monomial>) -> Result<u64, ParityError> {
        let mut mask = 0u64;
        for m in support {
            let i = self
                .vars
                .binary_search(m)
                .map_err(|_| ParityError::UnknownVariable(m.to_string()))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    fn reduce(&self, mut mask: u64, mut combo: u64) -> (u64, u64) {
        for (bm, bc) in &self.basis {
            let pivot = bm & bm.wrapping_neg(); // lowest set bit = earliest type
            if mask & pivot != 0 {
                mask ^= bm;
                combo ^= bc;
            }
        }
        (mask, combo)
    }

    fn insert(&mut self, mask: u64, combo: u64) {
        let (m, c) = self.reduce(mask, combo);
        if m == 0 {
            return;
        }
        // Keep the basis fully reduced for reproducible printing.
        let pivot = m & m.wrapping_neg();
        for (bm, bc) in &mut self.basis {
            if *bm & pivot != 0 {
                *bm ^= m;
                *bc ^= c;
            }
        }
        self.basis.push((m, c));
        self.basis.sort_by_key(|(bm, _)| bm & bm.wrapping_neg());
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn raw_rows(&self) -> &[Congruence] {
        &self.raw
    }

    /// Whether the target lies in the span; on success returns the indices
    /// of raw congruences that sum to it.
    pub fn implies(&self, target: &Congruence) -> Result<Option<Vec<usize>>, ParityError> {
        let mask = match self.mask_of(&target.support) {
            Ok(m) => m,
            // A variable we have no congruences about: not implied.
            Err(ParityError::UnknownVariable(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let (rem, combo) = self.reduce(mask, 0);
        if rem != 0 {
            return Ok(None);
        }
        let witness: Vec<usize> = (0..self.raw.len()).filter(|i| combo & (1 << i) != 0).collect();
        debug_assert!(self.verify_combination(&witness, target));
        Ok(Some(witness))
    }

    /// XOR of the chosen raw supports equals the target support.
    pub fn verify_combination(&self, indices: &[usize], target: &Congruence) -> bool {
        let mut acc = BTreeSet::new();
        for &i in indices {
            for m in &self.raw[i].support {
                if !acc.remove(m) {
                    acc.insert(*m);
                }
            }
        }
        acc == target.support
    }

    /// The reduced basis as congruences, pivot order.
    pub fn reduced_basis(&self) -> Vec<Congruence> {
        self.basis
            .iter()
            .map(|(mask, _)| {
                let support: BTreeSet<Monomial> = (0..self.vars.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| self.vars[i])
                    .collect();
                Congruence { support, source: "reduced".into() }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mono;
    use crate::jtable::JTable;
    use crate::parametric::{aggregate_ca, lift_parametric};
    use crate::relations::{build_system, solve};

    fn ca_rows(dim: u32) -> Vec<CaFormula> {
        let sys = build_system(JTable::builtin(), dim, 12).unwrap();
        let formulas = solve(&sys, dim).unwrap();
        lift_parametric(&formulas, 12)
            .unwrap()
            .iter()
            .map(aggregate_ca)
            .collect()
    }

    fn h0_span(dim: u32) -> Gf2Span {
        let rows = ca_rows(dim);
        let raw = raw_congruences(&rows, Hypothesis::CausticCompact).unwrap();
        Gf2Span::new(Monomial::enumerate(dim, 0), raw).unwrap()
    }

    #[test]
    fn d5_row_gives_the_d6_congruence() {
        let rows = ca_rows(5);
        let raw = raw_congruences(&rows, Hypothesis::CausticCompact).unwrap();
        let d5p = raw.iter().find(|c| c.source == "D5+").unwrap();
        let expect: BTreeSet<Monomial> =
            [mono(&[("D6+", 1)]), mono(&[("D6-", 1)])].into_iter().collect();
        assert_eq!(d5p.support, expect);

        let a5p = raw.iter().find(|c| c.source == "A5+").unwrap();
        let expect: BTreeSet<Monomial> =
            [mono(&[("E6+", 1)]), mono(&[("E6-", 1)]), mono(&[("A6", 1)])].into_iter().collect();
        assert_eq!(a5p.support, expect);

        let a2_4 = raw.iter().find(|c| c.source == "A2^4").unwrap();
        let expect: BTreeSet<Monomial> = [mono(&[("A4", 1), ("A2", 2)])].into_iter().collect();
        assert_eq!(a2_4.support, expect);
    }

    #[test]
    fn integer_rows_emit_nothing() {
        let rows = ca_rows(5);
        let raw = raw_congruences(&rows, Hypothesis::CausticCompact).unwrap();
        assert!(raw.iter().all(|c| c.source != "A4 A2"));
        // 16 H0 rows, one of which (A4 A2) is all-integer.
        assert_eq!(raw.len(), 15);
    }

    #[test]
    fn span_membership_examples() {
        let span = h0_span(5);
        // D4+ + D4- = A4 A3-
        let t = Congruence::new(
            [mono(&[("D4+", 1)]), mono(&[("D4-", 1)]), mono(&[("A4", 1), ("A3-", 1)])],
            "test",
        );
        let w = span.implies(&t).unwrap().expect("implied");
        assert!(span.verify_combination(&w, &t));

        // A4 = A5+ A2 + A5- A2
        let t = Congruence::new(
            [
                mono(&[("A4", 1)]),
                mono(&[("A5+", 1), ("A2", 1)]),
                mono(&[("A5-", 1), ("A2", 1)]),
            ],
            "test",
        );
        assert!(span.implies(&t).unwrap().is_some());
    }

    #[test]
    fn empty_span_implies_nothing() {
        let span = Gf2Span::new(Monomial::enumerate(5, 0), Vec::new()).unwrap();
        let t = Congruence::new([mono(&[("E6+", 1)])], "test");
        assert!(span.implies(&t).unwrap().is_none());
        // ... except the trivial congruence.
        let trivial = Congruence::new([], "test");
        assert_eq!(span.implies(&trivial).unwrap(), Some(vec![]));
    }

    #[test]
    fn basis_is_reduced_and_deterministic() {
        let a = h0_span(5);
        let b = h0_span(5);
        let basis_a = a.reduced_basis();
        let basis_b = b.reduced_basis();
        assert_eq!(
            basis_a.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            basis_b.iter().map(|c| c.to_string()).collect::<Vec<_>>()
        );
        // Pivots strictly increase and appear in no other row.
        let masks: Vec<u64> = basis_a
            .iter()
            .map(|c| a.mask_of(&c.support).unwrap())
            .collect();
        for (i, m) in masks.iter().enumerate() {
            let pivot = m & m.wrapping_neg();
            for (j, other) in masks.iter().enumerate() {
                if i != j {
                    assert_eq!(other & pivot, 0, "pivot of row {i} appears in row {j}");
                }
            }
        }
    }

    #[test]
    fn dim3_congruences_include_the_classical_parities() {
        let span = h0_span(3);
        let a4_even = Congruence::new([mono(&[("A4", 1)])], "test");
        assert!(span.implies(&a4_even).unwrap().is_some());
        let d4_pair = Congruence::new([mono(&[("D4+", 1)]), mono(&[("D4-", 1)])], "test");
        assert!(span.implies(&d4_pair).unwrap().is_some());
    }
}
