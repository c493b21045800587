//! The linear system between Euler characteristics of multisingularity
//! strata and its exact solution.
//!
//! For a target dimension n in {3,4,5}, each type A with
//! `codim A = n-1 (mod 2)` and `codim A <= n-1` yields one equation
//!
//! ```text
//!   sum_X (-1)^codim(X) J_A(X) chi(X)  =  (-1)^n chi(A)
//! ```
//!
//! over the unknowns `{X : codim X <= n, a1_degree X <= K}`. The truncation
//! at `a1 <= K` is exact: every term of J(X) carries at least as many A1
//! factors as X, so an index with `a1(A) <= K` only ever sees unknowns with
//! `a1(X) <= K`.
//!
//! The coefficient matrix is strictly triangular in the codimension grading
//! with a known diagonal of (-1)^codim(A), so the system is solved by plain
//! back-substitution in descending codimension order; no pivot search ever
//! happens, and a failed diagonal means a corrupted J table.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{codim_sign, coeff_int, Bounds, Coeff};
use crate::jtable::{JEvaluator, JTable};
use crate::monomial::Monomial;
use crate::Hypothesis;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("target dimension must be 3, 4 or 5, got {0}")]
    BadDim(u32),
    #[error("equation for `{index}` has diagonal {got}, want {want}: corrupted J table")]
    BadDiagonal { index: String, got: i64, want: i64 },
    #[error("no solved formula for `{0}` while substituting into `{1}`: corrupted J table")]
    MissingPivot(String, String),
    #[error("adjacency coefficient of `{0}` in J(`{1}`) does not fit an integer")]
    CoefficientOverflow(String, String),
    #[error("family `{base}` is not shift-stable at k = {k}: raise the A1 cutoff")]
    NoShiftStability { base: String, k: u16 },
    #[error("family `{base}` is missing the formula for k = {k}")]
    IncompleteFamily { base: String, k: u16 },
}

/// One equation of the system, indexed by the type A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub index_type: Monomial,
    /// `c_{A,X} = (-1)^codim(X) J_A(X)`, nonzero entries only.
    pub coeffs: BTreeMap<Monomial, i64>,
    /// `(-1)^n`.
    pub rhs_sign: i64,
    pub hypothesis: Hypothesis,
}

/// A solved unknown: chi(lhs) expressed over the free types
/// (`codim = n mod 2`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvedFormula {
    pub lhs: Monomial,
    pub rhs: BTreeMap<Monomial, Coeff>,
    pub hypothesis: Hypothesis,
}

pub fn check_dim(dim: u32) -> Result<(), EngineError> {
    if (3..=5).contains(&dim) {
        Ok(())
    } else {
        Err(EngineError::BadDim(dim))
    }
}

/// Whether A indexes an equation of the dimension-n system.
pub fn is_index_type(m: &Monomial, dim: u32) -> bool {
    m.codim() <= dim - 1 && m.codim() % 2 == (dim - 1) % 2
}

/// Whether X stays a free unknown of the dimension-n system.
pub fn is_free_type(m: &Monomial, dim: u32) -> bool {
    m.codim() % 2 == dim % 2
}

/// Hypothesis needed for the closure of the stratum of A to be compact:
/// the caustic's singular set covers everything except the A1^k strata.
pub fn hypothesis_for(m: &Monomial) -> Hypothesis {
    if m.is_one() {
        Hypothesis::SourceTargetCompact
    } else if m.a1_free_part().is_one() {
        Hypothesis::SourceCompact
    } else {
        Hypothesis::CausticCompact
    }
}

/// Build the exact system for dimension `dim` with A1-degree cutoff `max_a1`.
pub fn build_system(
    table: &JTable,
    dim: u32,
    max_a1: u16,
) -> Result<Vec<Equation>, EngineError> {
    check_dim(dim)?;
    let bounds = Bounds::new(dim, max_a1);
    let eval = JEvaluator::new(table, bounds);
    let unknowns = Monomial::enumerate(dim, max_a1);
    let rhs_sign = if dim % 2 == 0 { 1 } else { -1 };

    let mut equations: BTreeMap<Monomial, BTreeMap<Monomial, i64>> = unknowns
        .iter()
        .filter(|a| is_index_type(a, dim))
        .map(|a| (*a, BTreeMap::new()))
        .collect();

    for x in &unknowns {
        let sign_x = codim_sign(x);
        for (a, coeff) in eval.image(x).iter() {
            let Some(row) = equations.get_mut(a) else {
                continue;
            };
            let j_ax = coeff
                .to_integer()
                .to_i64()
                .ok_or_else(|| EngineError::CoefficientOverflow(a.to_string(), x.to_string()))?;
            let c = sign_x * codim_sign(a) * j_ax;
            if c != 0 {
                row.insert(*x, c);
            }
        }
    }

    let out: Vec<Equation> = equations
        .into_iter()
        .map(|(index_type, coeffs)| Equation {
            hypothesis: hypothesis_for(&index_type),
            index_type,
            coeffs,
            rhs_sign,
        })
        .collect();

    for eq in &out {
        let want = codim_sign(&eq.index_type);
        let got = eq.coeffs.get(&eq.index_type).copied().unwrap_or(0);
        if got != want {
            return Err(EngineError::BadDiagonal {
                index: eq.index_type.to_string(),
                got,
                want,
            });
        }
    }
    Ok(out)
}

/// Solve for the indexed unknowns by back-substitution in descending
/// codimension order. Each formula ends up supported on free types only.
pub fn solve(system: &[Equation], dim: u32) -> Result<Vec<SolvedFormula>, EngineError> {
    check_dim(dim)?;
    let mut levels: Vec<u32> = system.iter().map(|e| e.index_type.codim()).collect();
    levels.sort_unstable();
    levels.dedup();
    levels.reverse();

    let mut solved: BTreeMap<Monomial, SolvedFormula> = BTreeMap::new();
    for level in levels {
        for eq in system.iter().filter(|e| e.index_type.codim() == level) {
            let a = eq.index_type;
            let diag = eq.coeffs.get(&a).copied().unwrap_or(0);
            let want = codim_sign(&a);
            if diag != want {
                return Err(EngineError::BadDiagonal {
                    index: a.to_string(),
                    got: diag,
                    want,
                });
            }
            // 2 (-1)^n chi(A) = sum_{X != A} c_{A,X} chi(X)
            let half = Coeff::new(eq.rhs_sign.into(), 2.into());
            let mut rhs: BTreeMap<Monomial, Coeff> = BTreeMap::new();
            let mut hypothesis = eq.hypothesis;
            let add = |m: Monomial, c: Coeff, rhs: &mut BTreeMap<Monomial, Coeff>| {
                if c.is_zero() {
                    return;
                }
                let e = rhs.entry(m).or_insert_with(Coeff::zero);
                *e += c;
                if e.is_zero() {
                    rhs.remove(&m);
                }
            };
            for (x, c) in &eq.coeffs {
                if x == &a {
                    continue;
                }
                let w = &half * coeff_int(*c);
                if is_free_type(x, dim) {
                    add(*x, w, &mut rhs);
                } else {
                    let f = solved.get(x).ok_or_else(|| {
                        EngineError::MissingPivot(x.to_string(), a.to_string())
                    })?;
                    hypothesis = hypothesis.max(f.hypothesis);
                    for (m, fc) in &f.rhs {
                        add(*m, &w * fc, &mut rhs);
                    }
                }
            }
            solved.insert(a, SolvedFormula { lhs: a, rhs, hypothesis });
        }
    }
    Ok(solved.into_values().collect())
}

/// Substitute the solved formulas into every equation and return the largest
/// absolute residual coefficient; exactly zero on a correct derivation.
pub fn residual_check(system: &[Equation], formulas: &[SolvedFormula]) -> Coeff {
    let by_lhs: BTreeMap<&Monomial, &SolvedFormula> =
        formulas.iter().map(|f| (&f.lhs, f)).collect();
    let mut max = Coeff::zero();
    for eq in system {
        let r = equation_residual(eq, &by_lhs);
        if r > max {
            max = r;
        }
    }
    max
}

/// Equations whose residual is nonzero, with the residual magnitude.
pub fn residual_offenders(
    system: &[Equation],
    formulas: &[SolvedFormula],
) -> Vec<(Monomial, Coeff)> {
    let by_lhs: BTreeMap<&Monomial, &SolvedFormula> =
        formulas.iter().map(|f| (&f.lhs, f)).collect();
    system
        .iter()
        .filter_map(|eq| {
            let r = equation_residual(eq, &by_lhs);
            if r.is_zero() {
                None
            } else {
                Some((eq.index_type, r))
            }
        })
        .collect()
}

fn equation_residual(
    eq: &Equation,
    by_lhs: &BTreeMap<&Monomial, &SolvedFormula>,
) -> Coeff {
    // Express every unknown over the free types and accumulate
    // sum_X c_{A,X} phi(X) - (-1)^n phi(A).
    let mut acc: BTreeMap<Monomial, Coeff> = BTreeMap::new();
    let add = |m: Monomial, c: Coeff, acc: &mut BTreeMap<Monomial, Coeff>| {
        if c.is_zero() {
            return;
        }
        let e = acc.entry(m).or_insert_with(Coeff::zero);
        *e += c;
        if e.is_zero() {
            acc.remove(&m);
        }
    };
    let phi = |m: &Monomial, weight: Coeff, acc: &mut BTreeMap<Monomial, Coeff>| {
        match by_lhs.get(m) {
            Some(f) => {
                for (b, c) in &f.rhs {
                    add(*b, &weight * c, acc);
                }
            }
            None => add(*m, weight, acc),
        }
    };
    for (x, c) in &eq.coeffs {
        phi(x, coeff_int(*c), &mut acc);
    }
    phi(&eq.index_type, coeff_int(-eq.rhs_sign), &mut acc);
    acc.values().map(|c| c.abs()).max().unwrap_or_else(Coeff::zero)
}

/// Symbolic equivalence of the stored equation with its boundary form
/// `chi(A) = 1/2 sum_{X != A} (-1)^(n - codim X) J_A(X) chi(X)`.
///
/// The right side is recomputed from the evaluator, independently of the
/// scatter pass that built the equation.
pub fn equation_matches_boundary_form(
    eq: &Equation,
    eval: &JEvaluator<'_>,
    dim: u32,
) -> bool {
    let a = &eq.index_type;
    if a.codim() % 2 != (dim - 1) % 2 {
        return false;
    }
    if eq.coeffs.get(a).copied().unwrap_or(0) != codim_sign(a) {
        return false;
    }
    // Route 1: from the stored equation, chi(A) = 1/2 (-1)^n sum c_{A,X} chi(X).
    let half = Coeff::new(eq.rhs_sign.into(), 2.into());
    let mut route1: BTreeMap<Monomial, Coeff> = BTreeMap::new();
    for (x, c) in &eq.coeffs {
        if x == a {
            continue;
        }
        route1.insert(*x, &half * coeff_int(*c));
    }
    // Route 2: fresh coefficient extraction from J.
    let mut route2: BTreeMap<Monomial, Coeff> = BTreeMap::new();
    for x in Monomial::enumerate(dim, eval.bounds().max_a1) {
        if &x == a {
            continue;
        }
        let j_ax = codim_sign(a) * {
            let c = eval.image(&x).coeff(a);
            match c.to_integer().to_i64() {
                Some(v) if c.is_integer() => v,
                _ => return false,
            }
        };
        if j_ax == 0 {
            continue;
        }
        let sign = if (dim + x.codim()) % 2 == 0 { 1 } else { -1 };
        route2.insert(x, Coeff::new((sign * j_ax).into(), 2.into()));
    }
    route1 == route2
}
