//! Caustic-level symbols and the sign-collapse operator.
//!
//! Caustic germs forget the superscript sign of the odd-index classes
//! (A3, A5, D5) and of E6; D4 and D6 keep theirs. A [`CollapsedMonomial`] is a
//! multisingularity symbol over this smaller alphabet. The collapse map sends
//! a signed type to its caustic symbol; `expand` returns the whole fiber,
//! e.g. A3^2 expands to (A3+)^2, A3+ A3-, (A3-)^2.
//!
//! [`collapse_signs`] rewrites a family of ca-relations over signed types as
//! relations over caustic symbols. Rows whose left-hand sides share a caustic
//! symbol are summed, and the summed functional must be constant on every
//! fiber; a non-constant fiber means the input rows are not sign-symmetric
//! and is reported as an error.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::Coeff;
use crate::generator::{Family, Generator, Sign};
use crate::monomial::Monomial;
use crate::parametric::CaFormula;
use crate::Hypothesis;

/// Number of caustic-level generator symbols.
pub const CGEN_COUNT: usize = 12;

/// Tokens of the collapsed alphabet, in canonical order.
pub const CGEN_TOKENS: [&str; CGEN_COUNT] =
    ["A1", "A2", "A3", "A4", "A5", "A6", "D4+", "D4-", "D5", "D6+", "D6-", "E6"];

const CGEN_CODIM: [u32; CGEN_COUNT] = [0, 1, 2, 3, 4, 5, 3, 3, 4, 5, 5, 5];

/// Caustic symbol: exponent vector over the collapsed alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CollapsedMonomial {
    exps: [u16; CGEN_COUNT],
}

impl CollapsedMonomial {
    pub const ONE: CollapsedMonomial = CollapsedMonomial { exps: [0; CGEN_COUNT] };

    pub fn from_exponents(exps: [u16; CGEN_COUNT]) -> CollapsedMonomial {
        CollapsedMonomial { exps }
    }

    pub fn generator(i: usize) -> CollapsedMonomial {
        let mut exps = [0; CGEN_COUNT];
        exps[i] = 1;
        CollapsedMonomial { exps }
    }

    pub fn generator_index(token: &str) -> Option<usize> {
        CGEN_TOKENS.iter().position(|t| *t == token)
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn codim(&self) -> u32 {
        self.exps
            .iter()
            .zip(CGEN_CODIM)
            .map(|(&e, c)| u32::from(e) * c)
            .sum()
    }

    pub fn a1_degree(&self) -> u16 {
        self.exps[0]
    }

    pub fn mul(&self, other: &CollapsedMonomial) -> CollapsedMonomial {
        let mut exps = [0; CGEN_COUNT];
        for i in 0..CGEN_COUNT {
            exps[i] = self.exps[i] + other.exps[i];
        }
        CollapsedMonomial { exps }
    }

    /// The caustic symbol of a signed type.
    pub fn of(m: &Monomial) -> CollapsedMonomial {
        let mut exps = [0; CGEN_COUNT];
        for (g, e) in m.factors() {
            exps[cgen_index_of(g)] += e;
        }
        CollapsedMonomial { exps }
    }

    /// All signed types whose caustic symbol is `self`, in canonical order.
    /// For a sign-splitting generator with exponent e the fiber runs over all
    /// e+1 distributions of the exponent between the two signs.
    pub fn expand(&self) -> Vec<Monomial> {
        let mut fiber = vec![[0u16; Generator::COUNT]];
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            match cgen_signed_pair(i) {
                CgenLift::Plain(g) => {
                    for exps in &mut fiber {
                        exps[g.ord()] += e;
                    }
                }
                CgenLift::Pair(gp, gm) => {
                    let mut next = Vec::with_capacity(fiber.len() * (usize::from(e) + 1));
                    for exps in &fiber {
                        for plus in (0..=e).rev() {
                            let mut out = *exps;
                            out[gp.ord()] += plus;
                            out[gm.ord()] += e - plus;
                            next.push(out);
                        }
                    }
                    fiber = next;
                }
            }
        }
        let mut out: Vec<Monomial> = fiber.into_iter().map(Monomial::from_exponents).collect();
        out.sort();
        out
    }
}

enum CgenLift {
    Plain(Generator),
    Pair(Generator, Generator),
}

fn cgen_index_of(g: Generator) -> usize {
    let token = if g.sign_collapses() && g.sign != Sign::None {
        format!("{}{}", match g.family { Family::A => 'A', Family::D => 'D', Family::E => 'E' }, g.index)
    } else {
        g.token()
    };
    CollapsedMonomial::generator_index(&token).expect("every generator has a caustic symbol")
}

fn cgen_signed_pair(i: usize) -> CgenLift {
    let token = CGEN_TOKENS[i];
    match Generator::from_token(token) {
        Ok(g) => CgenLift::Plain(g),
        Err(_) => {
            let gp = Generator::from_token(&format!("{token}+")).expect("signed pair");
            let gm = Generator::from_token(&format!("{token}-")).expect("signed pair");
            CgenLift::Pair(gp, gm)
        }
    }
}

impl Ord for CollapsedMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.codim()
            .cmp(&other.codim())
            .then_with(|| self.a1_degree().cmp(&other.a1_degree()))
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for CollapsedMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CollapsedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut factors: Vec<(usize, u16)> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i, e))
            .collect();
        factors.sort_by(|a, b| CGEN_CODIM[b.0].cmp(&CGEN_CODIM[a.0]).then(a.0.cmp(&b.0)));
        let mut first = true;
        for (i, e) in factors {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", CGEN_TOKENS[i])?;
            } else {
                write!(f, "{}^{}", CGEN_TOKENS[i], e)?;
            }
        }
        Ok(())
    }
}

/// A relation between Euler characteristics of caustic-symbol strata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapsedFormula {
    pub lhs: CollapsedMonomial,
    pub rhs: BTreeMap<CollapsedMonomial, Coeff>,
    pub hypothesis: Hypothesis,
}

impl fmt::Display for CollapsedFormula {
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

#[derive(Debug, Error)]
pub enum CollapseError {
    #[error(
        "rows collapsing to `{lhs}` are not sign-symmetric: fiber of `{class}` carries \
         coefficients {details}"
    )]
    FiberMismatch { lhs: String, class: String, details: String },
    #[error("caustic symbol `{lhs}` needs {expected} signed rows, found {got}")]
    IncompleteGroup { lhs: String, expected: usize, got: usize },
}

/// Rewrite ca-relations over caustic symbols.
pub fn collapse_signs(rows: &[CaFormula]) -> Result<Vec<CollapsedFormula>, CollapseError> {
    let mut groups: BTreeMap<CollapsedMonomial, Vec<&CaFormula>> = BTreeMap::new();
    for row in rows {
        groups.entry(CollapsedMonomial::of(&row.lhs)).or_default().push(row);
    }

    let mut out = Vec::with_capacity(groups.len());
    for (lhs, group) in groups {
        let fiber = lhs.expand();
        if fiber.len() != group.len() {
            return Err(CollapseError::IncompleteGroup {
                lhs: lhs.to_string(),
                expected: fiber.len(),
                got: group.len(),
            });
        }

        // Signed functional lhs - rhs, summed over the group.
        let mut v: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        let mut add = |m: Monomial, c: Coeff| {
            let entry = v.entry(m).or_insert_with(Coeff::zero);
            *entry += c;
            if entry.is_zero() {
                v.remove(&m);
            }
        };
        let mut hypothesis = Hypothesis::CausticCompact;
        for row in &group {
            add(row.lhs, Coeff::one());
            for (m, c) in &row.rhs {
                add(*m, -c.clone());
            }
            hypothesis = hypothesis.max(row.hypothesis);
        }

        // The summed functional must be constant on every fiber.
        let mut collapsed: BTreeMap<CollapsedMonomial, Coeff> = BTreeMap::new();
        let mut classes: Vec<CollapsedMonomial> = v.keys().map(CollapsedMonomial::of).collect();
        classes.sort();
        classes.dedup();
        for class in classes {
            let members = class.expand();
            let coeffs: Vec<Coeff> = members.iter().map(|m| v.get(m).cloned().unwrap_or_else(Coeff::zero)).collect();
            if coeffs.windows(2).any(|w| w[0] != w[1]) {
                let details = members
                    .iter()
                    .zip(&coeffs)
                    .map(|(m, c)| format!("{m}: {c}"))
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(CollapseError::FiberMismatch {
                    lhs: lhs.to_string(),
                    class: class.to_string(),
                    details,
                });
            }
            if !coeffs[0].is_zero() {
                collapsed.insert(class, coeffs[0].clone());
            }
        }

        let lhs_coeff = collapsed.remove(&lhs).unwrap_or_else(Coeff::zero);
        debug_assert!(lhs_coeff.is_one(), "collapsed lhs coefficient is 1");
        let rhs = collapsed.into_iter().map(|(m, c)| (m, -c)).collect();
        out.push(CollapsedFormula { lhs, rhs, hypothesis });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mono;

    #[test]
    fn collapse_forgets_odd_family_signs_only() {
        let m = mono(&[("D4+", 1), ("A3-", 1)]).mul_a1(2);
        let c = CollapsedMonomial::of(&m);
        assert_eq!(c.to_string(), "D4+ A3 A1^2");
        let d6 = mono(&[("D6-", 1)]);
        assert_eq!(CollapsedMonomial::of(&d6).to_string(), "D6-");
    }

    #[test]
    fn fiber_of_a3_squared_has_three_members() {
        let sq = CollapsedMonomial::of(&mono(&[("A3+", 2)]));
        let fiber = sq.expand();
        let tokens: Vec<String> = fiber.iter().map(|m| m.to_string()).collect();
        assert_eq!(tokens, ["A3+^2", "A3+ A3-", "A3-^2"]);
    }

    #[test]
    fn fiber_of_mixed_symbol() {
        let c = CollapsedMonomial::of(&mono(&[("D5+", 1), ("E6-", 1)]));
        assert_eq!(c.expand().len(), 4);
        let plain = CollapsedMonomial::of(&mono(&[("A4", 1), ("A2", 2)]));
        assert_eq!(plain.expand(), vec![mono(&[("A4", 1), ("A2", 2)])]);
    }

    #[test]
    fn expand_collapse_round_trip() {
        for m in Monomial::enumerate(5, 1) {
            let c = CollapsedMonomial::of(&m);
            assert!(c.expand().contains(&m), "{m} in its own fiber");
            for x in c.expand() {
                assert_eq!(CollapsedMonomial::of(&x), c);
            }
        }
    }
}
