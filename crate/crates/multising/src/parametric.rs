//! Parametric rows and ca-aggregation.
//!
//! The solved formulas for a fixed A1-free base B0 and k = 0..K stabilise
//! into a single pattern of shift terms `(c, B, s)` meaning
//! `c * chi(B A1^{k-s})`, with the convention that a term vanishes when
//! `k - s < 0` and B carries no A1 factor. [`lift_parametric`] extracts the
//! pattern from the formula at k = K and verifies every smaller k against
//! its instantiation.
//!
//! Summing a row over all k >= 0 replaces each `chi(B A1^{k-s})` by the
//! Euler characteristic of the disjoint union of the `B A1^j` strata, the
//! ca-quantity of B; shifts disappear and coefficients on equal bases
//! accumulate ([`aggregate_ca`]).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::Coeff;
use crate::monomial::Monomial;
use crate::relations::{EngineError, SolvedFormula};
use crate::Hypothesis;

/// A k-parameterised family of solved formulas: `chi(base A1^k) = terms`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricFormula {
    /// A1-free left base B0.
    pub base: Monomial,
    /// Shift terms `(c, B, s)`, sorted by (B, s); B is A1-free.
    pub terms: Vec<(Coeff, Monomial, u16)>,
    /// Hypothesis of the generic member (k >= 1).
    pub hypothesis: Hypothesis,
    /// Hypothesis of the k = 0 member; differs from `hypothesis` only for
    /// the A1^k family, whose k = 0 case needs a compact target as well.
    pub hypothesis_k0: Hypothesis,
}

impl ParametricFormula {
    /// The formula at a concrete k; negative-shift terms are dropped.
    pub fn instantiate(&self, k: u16) -> BTreeMap<Monomial, Coeff> {
        let mut out = BTreeMap::new();
        for (c, b, s) in &self.terms {
            if *s > k {
                continue;
            }
            let m = b.mul_a1(k - s);
            let e = out.entry(m).or_insert_with(Coeff::zero);
            *e += c;
            if e.is_zero() {
                out.remove(&m);
            }
        }
        out
    }

    /// Smallest k from which no term is dropped.
    pub fn stable_from(&self) -> u16 {
        self.terms.iter().map(|(_, _, s)| *s).max().unwrap_or(0)
    }

    /// Canonical multiset view for order-insensitive comparison.
    pub fn term_map(&self) -> BTreeMap<(Monomial, u16), Coeff> {
        let mut out: BTreeMap<(Monomial, u16), Coeff> = BTreeMap::new();
        for (c, b, s) in &self.terms {
            let e = out.entry((*b, *s)).or_insert_with(Coeff::zero);
            *e += c;
            if e.is_zero() {
                out.remove(&(*b, *s));
            }
        }
        out
    }
}

impl fmt::Display for ParametricFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =", lhs_symbolic(&self.base))?;
        if self.terms.is_empty() {
            return write!(f, " 0");
        }
        for (i, (c, b, s)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 && !c.is_negative() {
                write!(f, " ")?;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !mag.is_one() {
                write!(f, "{} * ", mag)?;
            }
            write!(f, "{}", term_symbolic(b, *s))?;
        }
        Ok(())
    }
}

fn lhs_symbolic(base: &Monomial) -> String {
    term_symbolic(base, 0)
}

fn term_symbolic(base: &Monomial, shift: u16) -> String {
    let a1 = if shift == 0 { "A1^{k}".to_string() } else { format!("A1^{{k-{shift}}}") };
    if base.is_one() {
        a1
    } else {
        format!("{base} {a1}")
    }
}

/// Group solved formulas by A1-free base and lift each family to its
/// parametric pattern. `max_k` is the largest available k.
pub fn lift_parametric(
    formulas: &[SolvedFormula],
    max_k: u16,
) -> Result<Vec<ParametricFormula>, EngineError> {
    let mut families: BTreeMap<Monomial, BTreeMap<u16, &SolvedFormula>> = BTreeMap::new();
    for f in formulas {
        families
            .entry(f.lhs.a1_free_part())
            .or_default()
            .insert(f.lhs.a1_degree(), f);
    }

    let mut out = Vec::with_capacity(families.len());
    for (base, members) in families {
        for k in 0..=max_k {
            if !members.contains_key(&k) {
                return Err(EngineError::IncompleteFamily { base: base.to_string(), k });
            }
        }
        let top = members[&max_k];
        let mut terms: Vec<(Coeff, Monomial, u16)> = top
            .rhs
            .iter()
            .map(|(m, c)| (c.clone(), m.a1_free_part(), max_k - m.a1_degree()))
            .collect();
        terms.sort_by(|x, y| x.1.cmp(&y.1).then(x.2.cmp(&y.2)));

        let hypothesis = if max_k >= 1 { members[&1].hypothesis } else { members[&0].hypothesis };
        let row = ParametricFormula {
            base,
            terms,
            hypothesis,
            hypothesis_k0: members[&0].hypothesis,
        };
        for (k, f) in &members {
            if row.instantiate(*k) != f.rhs {
                return Err(EngineError::NoShiftStability { base: base.to_string(), k: *k });
            }
        }
        out.push(row);
    }
    Ok(out)
}

/// A relation between ca-quantities: `chi(lhs^ca) = rhs` over A1-free types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaFormula {
    pub lhs: Monomial,
    pub rhs: BTreeMap<Monomial, Coeff>,
    pub hypothesis: Hypothesis,
}

impl fmt::Display for CaFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =", self.lhs)?;
        if self.rhs.is_empty() {
            return write!(f, " 0");
        }
        for (i, (m, c)) in self.rhs.iter().enumerate() {
            let mag = c.abs();
            if i == 0 && !c.is_negative() {
                write!(f, " ")?;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{} * {}", mag, m)?;
            }
        }
        Ok(())
    }
}

/// Sum a parametric row over all k >= 0. Valid for every k, so the result
/// needs the row's strongest hypothesis (the k = 0 one included).
pub fn aggregate_ca(row: &ParametricFormula) -> CaFormula {
    let mut rhs: BTreeMap<Monomial, Coeff> = BTreeMap::new();
    for (c, b, _) in &row.terms {
        let e = rhs.entry(*b).or_insert_with(Coeff::zero);
        *e += c;
        if e.is_zero() {
            rhs.remove(b);
        }
    }
    CaFormula {
        lhs: row.base,
        rhs,
        hypothesis: row.hypothesis.max(row.hypothesis_k0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{coeff_ratio, mono};
    use crate::jtable::JTable;
    use crate::relations::{build_system, solve};

    fn derive5(k: u16) -> Vec<ParametricFormula> {
        let sys = build_system(JTable::builtin(), 5, k).unwrap();
        let formulas = solve(&sys, 5).unwrap();
        lift_parametric(&formulas, k).unwrap()
    }

    #[test]
    fn d5_family_has_the_five_shift_terms() {
        let rows = derive5(12);
        let d5p = mono(&[("D5+", 1)]);
        let row = rows.iter().find(|r| r.base == d5p).unwrap();
        let map = row.term_map();
        let expect = [
            (mono(&[("E6+", 1)]), 1, coeff_ratio(1, 1)),
            (mono(&[("D6+", 1)]), 1, coeff_ratio(1, 2)),
            (mono(&[("D6-", 1)]), 1, coeff_ratio(1, 2)),
            (mono(&[("D5+", 1), ("A2", 1)]), 0, coeff_ratio(1, 2)),
            (mono(&[("D5+", 1), ("A2", 1)]), 2, coeff_ratio(1, 2)),
        ];
        assert_eq!(map.len(), expect.len());
        for (b, s, c) in expect {
            assert_eq!(map.get(&(b, s)), Some(&c), "term ({b}, {s})");
        }
        assert_eq!(row.hypothesis, Hypothesis::CausticCompact);
    }

    #[test]
    fn a2_fourth_family_carries_the_five_halves() {
        let rows = derive5(12);
        let base = mono(&[("A2", 4)]);
        let row = rows.iter().find(|r| r.base == base).unwrap();
        let map = row.term_map();
        let a2_5 = mono(&[("A2", 5)]);
        assert_eq!(map.get(&(a2_5, 0)), Some(&coeff_ratio(5, 2)));
        assert_eq!(map.get(&(a2_5, 2)), Some(&coeff_ratio(5, 2)));
    }

    #[test]
    fn maximal_shift_over_all_rows_is_ten() {
        let rows = derive5(12);
        let max_shift = rows.iter().map(|r| r.stable_from()).max().unwrap();
        assert_eq!(max_shift, 10);
        let unit_row = rows.iter().find(|r| r.base.is_one()).unwrap();
        assert_eq!(unit_row.stable_from(), 10);
    }

    #[test]
    fn seventeen_families_at_dim5() {
        let rows = derive5(12);
        assert_eq!(rows.len(), 17);
        let unit = rows.iter().find(|r| r.base.is_one()).unwrap();
        assert_eq!(unit.hypothesis, Hypothesis::SourceCompact);
        assert_eq!(unit.hypothesis_k0, Hypothesis::SourceTargetCompact);
        for r in rows.iter().filter(|r| !r.base.is_one()) {
            assert_eq!(r.hypothesis, Hypothesis::CausticCompact, "{}", r.base);
            assert_eq!(r.hypothesis_k0, Hypothesis::CausticCompact, "{}", r.base);
        }
    }

    #[test]
    fn instantiation_drops_negative_shifts() {
        let rows = derive5(12);
        let d5p = mono(&[("D5+", 1)]);
        let row = rows.iter().find(|r| r.base == d5p).unwrap();
        let at0 = row.instantiate(0);
        assert_eq!(at0.len(), 1);
        assert_eq!(at0.get(&mono(&[("D5+", 1), ("A2", 1)])), Some(&coeff_ratio(1, 2)));
    }

    #[test]
    fn ca_aggregation_of_the_d5_row() {
        let rows = derive5(12);
        let d5p = mono(&[("D5+", 1)]);
        let row = rows.iter().find(|r| r.base == d5p).unwrap();
        let ca = aggregate_ca(row);
        let expect = [
            (mono(&[("E6+", 1)]), coeff_ratio(1, 1)),
            (mono(&[("D6+", 1)]), coeff_ratio(1, 2)),
            (mono(&[("D6-", 1)]), coeff_ratio(1, 2)),
            (mono(&[("D5+", 1), ("A2", 1)]), coeff_ratio(1, 1)),
        ];
        assert_eq!(ca.rhs.len(), expect.len());
        for (m, c) in expect {
            assert_eq!(ca.rhs.get(&m), Some(&c), "{m}");
        }
        assert_eq!(ca.hypothesis, Hypothesis::CausticCompact);
    }

    #[test]
    fn display_emits_symbolic_exponents() {
        let rows = derive5(12);
        let d5p = mono(&[("D5+", 1)]);
        let row = rows.iter().find(|r| r.base == d5p).unwrap();
        let text = row.to_string();
        assert!(text.starts_with("D5+ A1^{k} ="), "{text}");
        assert!(text.contains("E6+ A1^{k-1}"), "{text}");
        assert!(text.contains("1/2 * D5+ A2 A1^{k-2}"), "{text}");
    }

    #[test]
    fn k_independence_between_10_and_12() {
        let at10 = derive5(10);
        let at12 = derive5(12);
        assert_eq!(at10.len(), at12.len());
        for (a, b) in at10.iter().zip(&at12) {
            assert_eq!(a.base, b.base);
            assert_eq!(a.term_map(), b.term_map(), "family {}", a.base);
            assert_eq!(a.hypothesis, b.hypothesis);
        }
    }
}
