//! The adjacency homomorphism J.
//!
//! J sends a multisingularity type X to the signed sum of its adjacency
//! indices: `J(X) = sum_A (-1)^codim(A) J_A(X) A`, and is multiplicative,
//! `J(BC) = J(B) J(C)`. Its action on the sixteen generators is transcribed
//! data (`data/jtable.dsl`), the single trusted input of the whole engine;
//! [`JTable::validate`] runs the structural checks that guard the
//! transcription, and the fixture comparisons downstream guard the values.
//!
//! [`JEvaluator`] extends the table to arbitrary monomials by truncated
//! multiplication, memoised per A1-free base. Since J(A1) = A1, the image of
//! `B * A1^k` is the image of `B` shifted by `A1^k`, so the cache stays small.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use thiserror::Error;

use crate::algebra::{codim_sign, Bounds, Coeff, Element};
use crate::dsl::{self, DslError};
use crate::generator::Generator;
use crate::monomial::Monomial;

/// Embedded copy of the generator table shipped in `data/jtable.dsl`.
pub const BUILTIN_JTABLE_DSL: &str = include_str!("../data/jtable.dsl");

#[derive(Debug, Error)]
pub enum JTableError {
    #[error(transparent)]
    Parse(#[from] DslError),
    #[error("duplicate J-table entry for `{0}`")]
    Duplicate(Generator),
    #[error("missing J-table entry for `{0}`")]
    Missing(Generator),
    #[error("type `{0}` has codimension {1} > 5: outside the classified range")]
    UnclassifiedType(Monomial, u32),
    #[error("adjacency index of ({0}, {1}) is not an integer")]
    NonIntegerIndex(Monomial, Monomial),
}

/// Images of the sixteen generators under J.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JTable {
    entries: BTreeMap<Generator, Element>,
}

impl JTable {
    pub fn from_dsl(src: &str) -> Result<JTable, JTableError> {
        let mut entries = BTreeMap::new();
        for block in dsl::split_blocks(src)? {
            for (line_no, formula) in &block.formulas {
                let (g, e) = dsl::parse_jtable_line(formula, *line_no)?;
                if entries.insert(g, e).is_some() {
                    return Err(JTableError::Duplicate(g));
                }
            }
        }
        Ok(JTable { entries })
    }

    /// The table shipped with the crate.
    pub fn builtin() -> &'static JTable {
        static TABLE: OnceLock<JTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            JTable::from_dsl(BUILTIN_JTABLE_DSL).expect("embedded J table parses")
        })
    }

    pub fn entry(&self, g: Generator) -> Result<&Element, JTableError> {
        self.entries.get(&g).ok_or(JTableError::Missing(g))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Generator, &Element)> {
        self.entries.iter()
    }

    /// Replace one entry; used by negative-control tests.
    pub fn with_entry(&self, g: Generator, e: Element) -> JTable {
        let mut entries = self.entries.clone();
        entries.insert(g, e);
        JTable { entries }
    }

    /// Structural checks on the transcription.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();

        let missing: Vec<String> = Generator::ALL
            .iter()
            .filter(|g| !self.entries.contains_key(g))
            .map(|g| g.token())
            .collect();
        checks.push(Check::new(
            "sixteen-entries",
            missing.is_empty() && self.entries.len() == Generator::COUNT,
            if missing.is_empty() { String::new() } else { format!("missing: {}", missing.join(", ")) },
        ));

        let a1 = Element::monomial(Monomial::ONE.mul_a1(1));
        let a1_ok = self.entries.get(&Generator::A1) == Some(&a1);
        checks.push(Check::new("j-a1-identity", a1_ok, String::new()));

        let mut bad_codim = Vec::new();
        let mut bad_diag = Vec::new();
        let mut bad_int = Vec::new();
        for (g, e) in &self.entries {
            let gc = g.codim();
            let gm = Monomial::generator(*g);
            for (m, c) in e.iter() {
                if m.codim() > gc || (m.codim() == gc && *m != gm) {
                    bad_codim.push(format!("{}: term {}", g, m));
                }
                if !c.is_integer() {
                    bad_int.push(format!("{}: term {} has coefficient {}", g, m, c));
                }
            }
            let want = Coeff::from_integer(codim_sign(&gm).into());
            if e.coeff(&gm) != want {
                bad_diag.push(format!("{}: coefficient of {} is {}, want {}", g, gm, e.coeff(&gm), want));
            }
        }
        checks.push(Check::new("codim-monotone", bad_codim.is_empty(), bad_codim.join("; ")));
        checks.push(Check::new("diagonal-sign", bad_diag.is_empty(), bad_diag.join("; ")));
        checks.push(Check::new("integer-coefficients", bad_int.is_empty(), bad_int.join("; ")));

        // A1-monotonicity via multiplicativity: terms of J(g * A1^j) keep
        // at least j factors A1.
        let mut bad_a1 = Vec::new();
        if missing.is_empty() && a1_ok {
            let eval = JEvaluator::new(self, Bounds::new(5, 8));
            for g in Generator::ALL {
                for j in [1u16, 2] {
                    let x = Monomial::generator(g).mul_a1(j);
                    for (m, _) in eval.image(&x).iter() {
                        if m.a1_degree() < j {
                            bad_a1.push(format!("J({x}) has term {m}"));
                        }
                    }
                }
            }
        }
        checks.push(Check::new("a1-monotone", bad_a1.is_empty(), bad_a1.join("; ")));

        ValidationReport { checks }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, details: String) -> Check {
        Check { name, passed, details }
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<22} {}{}",
                c.name,
                if c.passed { "ok" } else { "FAIL" },
                if c.details.is_empty() { String::new() } else { format!("  ({})", c.details) }
            )?;
        }
        Ok(())
    }
}

/// Memoised evaluation of J on monomials, truncated against fixed bounds.
///
/// The cache is keyed by A1-free base; concurrent readers are fine and a
/// racing recomputation inserts an identical element.
pub struct JEvaluator<'t> {
    table: &'t JTable,
    bounds: Bounds,
    cache: RwLock<HashMap<Monomial, Element>>,
}

impl<'t> JEvaluator<'t> {
    pub fn new(table: &'t JTable, bounds: Bounds) -> JEvaluator<'t> {
        JEvaluator { table, bounds, cache: RwLock::new(HashMap::new()) }
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    /// `J(m)` truncated at the evaluator bounds.
    pub fn image(&self, m: &Monomial) -> Element {
        let base = m.a1_free_part();
        let img = self.base_image(&base);
        img.mul_a1(m.a1_degree(), self.bounds)
    }

    /// `J(m)` truncated at tighter bounds; the result at larger bounds is
    /// truncated down, never recomputed.
    pub fn image_at(&self, m: &Monomial, bounds: Bounds) -> Element {
        assert!(
            self.bounds.dominates(&bounds),
            "requested bounds exceed the evaluator bounds"
        );
        self.image(m).truncate(bounds)
    }

    fn base_image(&self, base: &Monomial) -> Element {
        if base.is_one() {
            return Element::one();
        }
        if let Some(hit) = self.cache.read().expect("cache lock").get(base) {
            return hit.clone();
        }
        let (g, _) = base.factors().next().expect("non-unit monomial has a factor");
        let rest = base.div(&Monomial::generator(g)).expect("factor divides");
        let entry = self
            .table
            .entry(g)
            .unwrap_or_else(|_| panic!("J table has no entry for {g}"));
        let img = entry.truncate(self.bounds).mul(&self.base_image(&rest), self.bounds);
        self.cache
            .write()
            .expect("cache lock")
            .entry(*base)
            .or_insert(img)
            .clone()
    }

    /// Adjacency index `J_A(X) = (-1)^codim(A) * [A] J(X)`; 1 on the
    /// diagonal, 0 when X is not adjacent to A.
    pub fn adjacency_index(&self, a: &Monomial, x: &Monomial) -> Result<i64, JTableError> {
        if x.codim() > 5 {
            return Err(JTableError::UnclassifiedType(*x, x.codim()));
        }
        assert!(
            self.bounds.admits(a) && self.bounds.max_codim >= 5,
            "evaluator bounds must admit the index type"
        );
        let c = self.image(x).coeff(a);
        if !c.is_integer() {
            return Err(JTableError::NonIntegerIndex(*a, *x));
        }
        let v: i64 = num_traits::ToPrimitive::to_i64(&c.to_integer())
            .ok_or(JTableError::NonIntegerIndex(*a, *x))?;
        Ok(codim_sign(a) * v)
    }
}

/// Adjacency index against the built-in table.
pub fn adjacency_index(a: &Monomial, x: &Monomial) -> Result<i64, JTableError> {
    let eval = JEvaluator::new(JTable::builtin(), Bounds::new(5, a.a1_degree().max(x.a1_degree()) + 1));
    eval.adjacency_index(a, x)
}
