//! The rational semigroup algebra of multisingularity types.
//!
//! An [`Element`] is a finite linear combination of [`Monomial`]s with exact
//! `BigRational` coefficients; zero coefficients are never stored, so equality
//! is plain coefficient-wise equality. Products are truncated against
//! [`Bounds`]: any product monomial whose codimension or A1-degree exceeds the
//! bounds is discarded. Because both gradings are additive, discarding early
//! or late yields the same element (truncation is a ring congruence for the
//! graded filtration).
//!
//! No floating point anywhere: coefficients stay exact rationals end to end.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::monomial::Monomial;

pub type Coeff = BigRational;

/// Integer-valued coefficient helper.
pub fn coeff_int(n: i64) -> Coeff {
    BigRational::from_integer(n.into())
}

/// `p/q` coefficient helper; panics on q == 0.
pub fn coeff_ratio(p: i64, q: i64) -> Coeff {
    BigRational::new(p.into(), q.into())
}

/// Truncation window: keep monomials with `codim <= max_codim` and
/// `a1_degree <= max_a1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_codim: u32,
    pub max_a1: u16,
}

impl Bounds {
    pub fn new(max_codim: u32, max_a1: u16) -> Bounds {
        Bounds { max_codim, max_a1 }
    }

    /// Effectively untruncated window for small test elements.
    pub fn unbounded() -> Bounds {
        Bounds { max_codim: u32::MAX, max_a1: u16::MAX }
    }

    pub fn admits(&self, m: &Monomial) -> bool {
        m.codim() <= self.max_codim && m.a1_degree() <= self.max_a1
    }

    /// Whether every monomial admitted by `other` is admitted by `self`.
    pub fn dominates(&self, other: &Bounds) -> bool {
        self.max_codim >= other.max_codim && self.max_a1 >= other.max_a1
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("geometric series does not terminate: element has a unit term with coefficient {0}")]
    UnitTermInSeries(String),
}

/// Finite rational linear combination of multisingularity types.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Element {
    pub fn zero() -> Element {
        Element { terms: BTreeMap::new() }
    }

    pub fn one() -> Element {
        Element::monomial(Monomial::ONE)
    }

    pub fn monomial(m: Monomial) -> Element {
        Element::term(m, Coeff::one())
    }

    pub fn term(m: Monomial, c: Coeff) -> Element {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Element { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(iter: I) -> Element {
        let mut e = Element::zero();
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `m`, zero when absent.
    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Terms in the canonical monomial order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Element {
        Element { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }

    pub fn scale(&self, s: &Coeff) -> Element {
        if s.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect() }
    }

    /// Drop every term outside the bounds.
    pub fn truncate(&self, bounds: Bounds) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| bounds.admits(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Distributive product, truncated against `bounds`.
    pub fn mul(&self, other: &Element, bounds: Bounds) -> Element {
        let mut out = Element::zero();
        for (ma, ca) in &self.terms {
            if !bounds.admits(ma) {
                continue;
            }
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if bounds.admits(&m) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }

    /// Multiply by the monomial A1^k, truncating against `bounds`.
    pub fn mul_a1(&self, k: u16, bounds: Bounds) -> Element {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            let shifted = m.mul_a1(k);
            if bounds.admits(&shifted) {
                out.add_term(shifted, c.clone());
            }
        }
        out
    }

    pub fn pow(&self, n: u32, bounds: Bounds) -> Element {
        let mut out = Element::one();
        for _ in 0..n {
            out = out.mul(self, bounds);
        }
        out
    }

    /// Truncated partial sum of the geometric series `sum_{k>=0} x^k`.
    ///
    /// Requires every term of `x` to increase the grading (no unit term), so
    /// that the series terminates under truncation. The empty sum convention
    /// gives 1 for x = 0.
    pub fn geometric_partial_sum(&self, bounds: Bounds) -> Result<Element, AlgebraError> {
        let unit_coeff = self.coeff(&Monomial::ONE);
        if !unit_coeff.is_zero() {
            return Err(AlgebraError::UnitTermInSeries(unit_coeff.to_string()));
        }
        let x = self.truncate(bounds);
        let mut acc = Element::one();
        let mut power = Element::one();
        loop {
            power = power.mul(&x, bounds);
            if power.is_zero() {
                return Ok(acc);
            }
            acc = acc.add(&power);
        }
    }

    /// Largest absolute coefficient (exact); zero for the zero element.
    pub fn max_abs_coeff(&self) -> Coeff {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Coeff::zero)
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Restriction of the combination to the A1-free parts: the coefficient
    /// of each monomial is accumulated onto the monomial with A1 stripped.
    pub fn a1_collapsed(&self) -> Element {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            out.add_term(m.a1_free_part(), c.clone());
        }
        out
    }
}

impl fmt::Display for Element {
    /// Signed-term text form: `1 + A1^2 - A2`, `1/2 * D6+ A1` and so on.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let one = Coeff::one();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag == one {
                write!(f, "{}", m)?;
            } else if m.is_one() {
                write!(f, "{}", mag)?;
            } else {
                write!(f, "{} * {}", mag, m)?;
            }
        }
        Ok(())
    }
}

/// JSON form of an element: a list of `{"type": ..., "coeff": "p/q"}` pairs
/// in the canonical monomial order.
pub fn element_to_json(e: &Element) -> serde_json::Value {
    serde_json::Value::Array(
        e.iter()
            .map(|(m, c)| {
                serde_json::json!({ "type": m.to_string(), "coeff": c.to_string() })
            })
            .collect(),
    )
}

/// `(-1)^codim` of a monomial, the sign weight of the adjacency sum.
pub fn codim_sign(m: &Monomial) -> i64 {
    if m.codim() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Convenience: the element `A2`, `D4+ A1^2`, ... from generator tokens.
#[cfg(test)]
pub fn mono(tokens: &[(&str, u16)]) -> Monomial {
    use crate::generator::Generator;
    let mut m = Monomial::ONE;
    for (tok, e) in tokens {
        for _ in 0..*e {
            m = m.mul_gen(Generator::from_token(tok).unwrap());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Monomial {
        mono(&[("A2", 1)])
    }

    #[test]
    fn addition_cancels_and_keeps_identity() {
        let x = Element::monomial(a2());
        assert!(x.add(&x.neg()).is_zero());
        assert_eq!(x.add(&Element::zero()), x);
    }

    #[test]
    fn j_a2_assembles_from_parts() {
        // (1 + A1^2) + (-A2) = 1 + A1^2 - A2
        let lhs = Element::one().add(&Element::monomial(Monomial::ONE.mul_a1(2)));
        let out = lhs.add(&Element::monomial(a2()).neg());
        assert_eq!(out.len(), 3);
        assert_eq!(out.coeff(&a2()), coeff_int(-1));
        assert_eq!(out.to_string(), "1 + A1^2 - A2");
    }

    #[test]
    fn multiplicative_identity() {
        let x = Element::from_terms([
            (a2(), coeff_ratio(5, 2)),
            (Monomial::ONE.mul_a1(3), coeff_int(-7)),
        ]);
        assert_eq!(x.mul(&Element::one(), Bounds::unbounded()), x);
    }

    #[test]
    fn truncated_product_drops_high_terms() {
        // (1 + A1^2 - A2) * A1 at bounds (2, 3) keeps all three products.
        let j_a2 = Element::from_terms([
            (Monomial::ONE, coeff_int(1)),
            (Monomial::ONE.mul_a1(2), coeff_int(1)),
            (a2(), coeff_int(-1)),
        ]);
        let a1 = Element::monomial(Monomial::ONE.mul_a1(1));
        let p = j_a2.mul(&a1, Bounds::new(2, 3));
        assert_eq!(p.coeff(&Monomial::ONE.mul_a1(1)), coeff_int(1));
        assert_eq!(p.coeff(&Monomial::ONE.mul_a1(3)), coeff_int(1));
        assert_eq!(p.coeff(&a2().mul_a1(1)), coeff_int(-1));
        assert_eq!(p.len(), 3);
        // At bounds (2, 2) the A1^3 term is discarded.
        let q = j_a2.mul(&a1, Bounds::new(2, 2));
        assert_eq!(q.len(), 2);
    }

    #[test]
    fn geometric_series_in_one_variable() {
        let x = Element::monomial(a2());
        let s = x.geometric_partial_sum(Bounds::new(3, 0)).unwrap();
        // 1 + A2 + A2^2 + A2^3
        assert_eq!(s.len(), 4);
        assert_eq!(s.coeff(&mono(&[("A2", 3)])), coeff_int(1));

        let a1 = Element::monomial(Monomial::ONE.mul_a1(1));
        let s = a1.geometric_partial_sum(Bounds::new(5, 2)).unwrap();
        assert_eq!(s.len(), 3); // 1 + A1 + A1^2

        assert_eq!(Element::zero().geometric_partial_sum(Bounds::new(5, 5)).unwrap(), Element::one());
    }

    #[test]
    fn geometric_series_rejects_unit_terms() {
        let bad = Element::one().add(&Element::monomial(a2()));
        assert!(bad.geometric_partial_sum(Bounds::new(3, 0)).is_err());
    }

    #[test]
    fn geometric_series_inverts_one_minus_x() {
        let x = Element::from_terms([
            (a2(), coeff_int(2)),
            (Monomial::ONE.mul_a1(1), coeff_int(-1)),
        ]);
        let bounds = Bounds::new(4, 4);
        let s = x.geometric_partial_sum(bounds).unwrap();
        let one_minus_x = Element::one().sub(&x);
        assert_eq!(s.mul(&one_minus_x, bounds), Element::one());
    }

    #[test]
    fn display_of_zero_and_fractions() {
        assert_eq!(Element::zero().to_string(), "0");
        let e = Element::from_terms([
            (a2(), coeff_ratio(-5, 2)),
            (Monomial::ONE, coeff_ratio(1, 4)),
        ]);
        assert_eq!(e.to_string(), "1/4 - 5/2 * A2");
    }
}
