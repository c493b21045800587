// Counterexample certificate: an integer assignment satisfying every ca
// relation (H0, H1 and H2) on which the functional
// D4+A2^2 + D4-A2^2 + 1/2 A4A3+ + 1/2 A4A3- takes the odd value 1.
use std::collections::BTreeMap;

use multising::algebra::{coeff_int, coeff_ratio, Coeff};
use multising::dsl::parse_type;
use multising::jtable::JTable;
use multising::monomial::Monomial;
use multising::parametric::{aggregate_ca, lift_parametric};
use multising::relations::{build_system, solve};
use num_traits::Zero;

#[test]
fn fifth_parity_statement_has_an_integer_counterexample() {
    let sys = build_system(JTable::builtin(), 5, 12).unwrap();
    let formulas = solve(&sys, 5).unwrap();
    let ca: Vec<_> = lift_parametric(&formulas, 12).unwrap().iter().map(aggregate_ca).collect();
    assert_eq!(ca.len(), 17);

    // Free variables: A4A3- = 2, everything else 0.
    let mut v: BTreeMap<Monomial, Coeff> = BTreeMap::new();
    v.insert(parse_type("A4 A3-").unwrap(), coeff_int(2));
    // Determined variables: each lhs takes its rhs value.
    let value = |v: &BTreeMap<Monomial, Coeff>, m: &Monomial| -> Coeff {
        v.get(m).cloned().unwrap_or_else(Coeff::zero)
    };
    // Evaluate in ascending codim order? ca rows only reference free (odd
    // codim) variables on the rhs, so one pass suffices.
    let mut assignment = v.clone();
    for row in &ca {
        let mut val = Coeff::zero();
        for (m, c) in &row.rhs {
            val += c * value(&v, m);
        }
        assert!(val.is_integer(), "row {} evaluates to non-integer {val}", row.lhs);
        assignment.insert(row.lhs, val);
    }
    // Every relation holds exactly on the assignment.
    for row in &ca {
        let mut rhs = Coeff::zero();
        for (m, c) in &row.rhs {
            rhs += c * value(&assignment, m);
        }
        assert_eq!(value(&assignment, &row.lhs), rhs, "row {}", row.lhs);
    }
    // ... and the fifth parity functional is odd on it.
    let ell = value(&assignment, &parse_type("D4+ A2^2").unwrap())
        + value(&assignment, &parse_type("D4- A2^2").unwrap())
        + coeff_ratio(1, 2) * value(&assignment, &parse_type("A4 A3+").unwrap())
        + coeff_ratio(1, 2) * value(&assignment, &parse_type("A4 A3-").unwrap());
    assert_eq!(ell, coeff_int(1));
}
