use std::sync::Arc;

use super::{AlgebraSpec, EventAlgebra};
use crate::error::StructureError;
use crate::report::{Check, ValidationReport};

/// First element (in canonical order) violating `pred`.
fn first_single(alg: &EventAlgebra, mut bad: impl FnMut(usize) -> bool) -> Option<Vec<String>> {
    alg.elements()
        .find(|&x| bad(x))
        .map(|x| vec![alg.id(x).to_string()])
}

/// First pair (lexicographic in canonical order) violating `pred`.
fn first_pair(
    alg: &EventAlgebra,
    mut bad: impl FnMut(usize, usize) -> bool,
) -> Option<Vec<String>> {
    for x in alg.elements() {
        for y in alg.elements() {
            if bad(x, y) {
                return Some(alg.ids_of(&[x, y]));
            }
        }
    }
    None
}

fn quantum_checks(alg: &EventAlgebra, report: &mut ValidationReport) {
    let top = alg.top();
    let bottom = alg.bottom();
    report.push(Check::from_outcome(
        "axiom[a]",
        first_single(alg, |l| !alg.leq(l, top)),
    ));
    report.push(Check::from_outcome(
        "axiom[b]",
        first_single(alg, |l| alg.ortho(alg.ortho(l)) != l),
    ));
    report.push(Check::from_outcome(
        "axiom[c]",
        first_single(alg, |l| alg.join(l, alg.ortho(l)) != Some(top)),
    ));
    report.push(Check::from_outcome(
        "axiom[d]",
        first_pair(alg, |l, m| {
            alg.leq(l, m) && !alg.leq(alg.ortho(m), alg.ortho(l))
        }),
    ));
    report.push(Check::from_outcome(
        "axiom[e]",
        first_pair(alg, |l, m| alg.orthogonal(l, m) && alg.join(l, m).is_none()),
    ));
    // Premise read with l ⊥ l′; see the crate README for the reading of [g].
    report.push(Check::from_outcome(
        "axiom[g]",
        first_pair(alg, |l, m| {
            alg.orthogonal(l, m)
                && alg.join(l, m) == Some(top)
                && alg.meet(l, m) == Some(bottom)
                && l != alg.ortho(m)
        }),
    ));
    report.push(Check::from_outcome(
        "bottom",
        first_single(alg, |l| !alg.leq(bottom, l)),
    ));
}

fn structure_notes(alg: &EventAlgebra, report: &mut ValidationReport) {
    let orthomodular = first_pair(alg, |x, y| {
        alg.leq(x, y)
            && alg
                .meet(y, alg.ortho(x))
                .and_then(|m| alg.join(x, m))
                .is_none_or(|j| j != y)
    });
    report.notes.push(match orthomodular {
        None => "orthomodular: yes".to_string(),
        Some(w) => format!("orthomodular: no ({})", w.join(", ")),
    });
    let unique = first_pair(alg, |l, m| {
        alg.join(l, m) == Some(alg.top()) && alg.meet(l, m) == Some(alg.bottom()) && l != alg.ortho(m)
    });
    report.notes.push(match unique {
        None => "unique complements: yes".to_string(),
        Some(w) => format!("unique complements: no ({})", w.join(", ")),
    });
}

/// Checks the orthoposet axioms `[a]`–`[g]` and that `1*` is the minimum.
///
/// Orthomodularity and uniqueness of complements are reported as notes only.
pub fn validate_quantum_algebra(alg: &EventAlgebra) -> ValidationReport {
    let mut report = ValidationReport::new(alg.name());
    quantum_checks(alg, &mut report);
    structure_notes(alg, &mut report);
    report
}

/// Structural errors first, then the axiom report.
pub fn validate_quantum_spec(spec: &AlgebraSpec) -> Result<ValidationReport, StructureError> {
    let alg = EventAlgebra::from_spec(spec)?;
    Ok(validate_quantum_algebra(&alg))
}

/// Minimal nonzero elements in canonical order.
pub fn atoms(alg: &EventAlgebra) -> Vec<usize> {
    let bottom = alg.bottom();
    alg.elements()
        .filter(|&x| {
            x != bottom
                && alg.leq(bottom, x)
                && !alg
                    .elements()
                    .any(|y| y != bottom && y != x && alg.leq(y, x) && alg.leq(bottom, y))
        })
        .collect()
}

pub fn validate_boolean_algebra(alg: &EventAlgebra) -> ValidationReport {
    let mut report = ValidationReport::new(alg.name());
    quantum_checks(alg, &mut report);
    let top = alg.top();
    let bottom = alg.bottom();

    report.push(Check::from_outcome(
        "meet-total",
        first_pair(alg, |x, y| alg.meet(x, y).is_none()),
    ));
    report.push(Check::from_outcome(
        "join-total",
        first_pair(alg, |x, y| alg.join(x, y).is_none()),
    ));

    let mut distributive = None;
    'outer: for a in alg.elements() {
        for b in alg.elements() {
            for c in alg.elements() {
                let lhs = alg.join(b, c).and_then(|bc| alg.meet(a, bc));
                let rhs = match (alg.meet(a, b), alg.meet(a, c)) {
                    (Some(ab), Some(ac)) => alg.join(ab, ac),
                    _ => None,
                };
                if lhs.is_none() || lhs != rhs {
                    distributive = Some(alg.ids_of(&[a, b, c]));
                    break 'outer;
                }
            }
        }
    }
    report.push(Check::from_outcome("distributive", distributive));

    report.push(Check::from_outcome(
        "complement",
        first_single(alg, |a| {
            alg.meet(a, alg.ortho(a)) != Some(bottom) || alg.join(a, alg.ortho(a)) != Some(top)
        }),
    ));

    let at = atoms(alg);
    let mut atomic = first_single(alg, |x| {
        let below = at.iter().copied().filter(|&a| alg.leq(a, x));
        alg.join_all(below) != Some(x)
    });
    if atomic.is_none() && (at.len() >= usize::BITS as usize || alg.len() != 1usize << at.len()) {
        atomic = Some(vec![format!("|elements|={}", alg.len()), format!("|atoms|={}", at.len())]);
    }
    report.push(Check::from_outcome("atomic", atomic));
    report
        .notes
        .push(format!("atoms: {}", alg.ids_of(&at).join(" ")));
    report
}

/// A carrier that passed [`validate_boolean_algebra`], with its atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanAlgebra {
    algebra: Arc<EventAlgebra>,
    atoms: Vec<usize>,
}

impl BooleanAlgebra {
    pub fn new(algebra: Arc<EventAlgebra>) -> Result<Self, ValidationReport> {
        let report = validate_boolean_algebra(&algebra);
        if !report.passed() {
            return Err(report);
        }
        let atoms = atoms(&algebra);
        Ok(BooleanAlgebra { algebra, atoms })
    }

    pub fn algebra(&self) -> &Arc<EventAlgebra> {
        &self.algebra
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn atoms_below(&self, x: usize) -> Vec<usize> {
        self.atoms
            .iter()
            .copied()
            .filter(|&a| self.algebra.leq(a, x))
            .collect()
    }
}
