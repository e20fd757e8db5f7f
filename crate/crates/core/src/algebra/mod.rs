//! Finite quantum and Boolean event algebras.
//!
//! A carrier is a finite poset with a top element and an orthocomplement.
//! Joins and meets are partial: they are stored as `Option` tables computed
//! once at construction, and `None` means the bound does not exist (or is not
//! unique).

mod blocks;
mod hom;
mod validate;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::StructureError;

pub use blocks::{enumerate_blocks, Block};
pub use hom::{enumerate_homomorphisms, validate_homomorphism, EventHomomorphism};
pub(crate) use hom::hom_label;
pub use validate::{
    atoms, validate_boolean_algebra, validate_quantum_algebra, validate_quantum_spec,
    BooleanAlgebra,
};

/// Raw carrier data as written in a lattice file, before closure and checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub name: String,
    pub elements: Vec<String>,
    pub top: String,
    /// `(x, y)` means `x <= y`; closed reflexively and transitively.
    pub leq: Vec<(String, String)>,
    /// `(x, y)` means `x* = y`.
    pub ortho: Vec<(String, String)>,
}

pub(crate) fn is_valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Finite orthoposet with explicit partial meet and join tables.
///
/// Elements are addressed by their index in declaration order; that order is
/// also the canonical order used for witnesses and listings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventAlgebra {
    name: String,
    ids: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<Vec<bool>>,
    top: usize,
    ortho: Vec<usize>,
    joins: Vec<Option<usize>>,
    meets: Vec<Option<usize>>,
}

impl EventAlgebra {
    /// Builds the carrier: checks ids, closes the order and rejects
    /// non-antisymmetric closures and non-bijective ortho maps. Involution and
    /// the other axioms are left to the validators.
    pub fn from_spec(spec: &AlgebraSpec) -> Result<Self, StructureError> {
        if spec.elements.is_empty() {
            return Err(StructureError::Empty);
        }
        let mut index = HashMap::new();
        for (i, id) in spec.elements.iter().enumerate() {
            if !is_valid_id(id) {
                return Err(StructureError::InvalidId(id.clone()));
            }
            if index.insert(id.clone(), i).is_some() {
                return Err(StructureError::DuplicateId(id.clone()));
            }
        }
        let lookup = |context: &'static str, id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| StructureError::UnknownId {
                    context,
                    id: id.to_string(),
                })
        };
        let n = spec.elements.len();
        let top = lookup("top", &spec.top)?;

        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (x, y) in &spec.leq {
            let (x, y) = (lookup("leq", x)?, lookup("leq", y)?);
            leq[x][y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(StructureError::NotAntisymmetric(
                        spec.elements[i].clone(),
                        spec.elements[j].clone(),
                    ));
                }
            }
        }

        let mut ortho = vec![None; n];
        let mut hit = vec![false; n];
        for (x, y) in &spec.ortho {
            let (x, y) = (lookup("ortho", x)?, lookup("ortho", y)?);
            if ortho[x].is_some() {
                return Err(StructureError::OrthoDuplicate(spec.elements[x].clone()));
            }
            if hit[y] {
                return Err(StructureError::OrthoNotBijective(spec.elements[y].clone()));
            }
            ortho[x] = Some(y);
            hit[y] = true;
        }
        let ortho = ortho
            .into_iter()
            .enumerate()
            .map(|(i, o)| o.ok_or_else(|| StructureError::OrthoMissing(spec.elements[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;

        let mut alg = EventAlgebra {
            name: spec.name.clone(),
            ids: spec.elements.clone(),
            index,
            leq,
            top,
            ortho,
            joins: Vec::new(),
            meets: Vec::new(),
        };
        alg.fill_bounds();
        Ok(alg)
    }

    fn fill_bounds(&mut self) {
        let n = self.len();
        let mut joins = vec![None; n * n];
        let mut meets = vec![None; n * n];
        for x in 0..n {
            for y in 0..n {
                let upper: Vec<usize> = (0..n)
                    .filter(|&u| self.leq[x][u] && self.leq[y][u])
                    .collect();
                joins[x * n + y] = upper
                    .iter()
                    .copied()
                    .find(|&u| upper.iter().all(|&v| self.leq[u][v]));
                let lower: Vec<usize> = (0..n)
                    .filter(|&l| self.leq[l][x] && self.leq[l][y])
                    .collect();
                meets[x * n + y] = lower
                    .iter()
                    .copied()
                    .find(|&l| lower.iter().all(|&v| self.leq[v][l]));
            }
        }
        self.joins = joins;
        self.meets = meets;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// `0 := 1*`.
    pub fn bottom(&self) -> usize {
        self.ortho[self.top]
    }

    pub fn ortho(&self, x: usize) -> usize {
        self.ortho[x]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    /// `x ⊥ y` iff `x <= y*`.
    pub fn orthogonal(&self, x: usize, y: usize) -> bool {
        self.leq[x][self.ortho[y]]
    }

    /// Least upper bound, if it exists.
    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        self.joins[x * self.len() + y]
    }

    /// Greatest lower bound, if it exists.
    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        self.meets[x * self.len() + y]
    }

    /// Iterated join of a family; `Some(bottom)` for the empty family.
    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> Option<usize> {
        let mut acc = self.bottom();
        for x in xs {
            acc = self.join(acc, x)?;
        }
        Some(acc)
    }

    pub fn ids_of(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.ids[x].clone()).collect()
    }

    /// Raw data with the full (non-reflexive) order relation spelled out.
    pub fn to_spec(&self) -> AlgebraSpec {
        let mut leq = Vec::new();
        for x in self.elements() {
            for y in self.elements() {
                if x != y && self.leq[x][y] {
                    leq.push((self.ids[x].clone(), self.ids[y].clone()));
                }
            }
        }
        AlgebraSpec {
            name: self.name.clone(),
            elements: self.ids.clone(),
            top: self.ids[self.top].clone(),
            leq,
            ortho: self
                .elements()
                .map(|x| (self.ids[x].clone(), self.ids[self.ortho[x]].clone()))
                .collect(),
        }
    }

    /// Induced sub-orthoposet on `elems` (kept in the parent's order). The
    /// subset must contain the top and be closed under ortho.
    pub fn subalgebra(&self, name: &str, elems: &[usize]) -> Result<EventAlgebra, StructureError> {
        let mut keep: Vec<usize> = elems.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let member = |x: usize| keep.binary_search(&x).is_ok();
        let mut spec = AlgebraSpec {
            name: name.to_string(),
            elements: self.ids_of(&keep),
            top: self.ids[self.top].clone(),
            leq: Vec::new(),
            ortho: Vec::new(),
        };
        for &x in &keep {
            for &y in &keep {
                if x != y && self.leq[x][y] {
                    spec.leq.push((self.ids[x].clone(), self.ids[y].clone()));
                }
            }
            if !member(self.ortho[x]) {
                return Err(StructureError::UnknownId {
                    context: "subalgebra ortho",
                    id: self.ids[self.ortho[x]].clone(),
                });
            }
            spec.ortho
                .push((self.ids[x].clone(), self.ids[self.ortho[x]].clone()));
        }
        EventAlgebra::from_spec(&spec)
    }

    pub fn into_arc(self) -> Arc<EventAlgebra> {
        Arc::new(self)
    }
}

impl fmt::Display for EventAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{{}}}", self.name, self.ids.join(", "))
    }
}

pub(crate) fn same_algebra(a: &Arc<EventAlgebra>, b: &Arc<EventAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn mo2_bounds() {
        let mo2 = corpus::mo2();
        let id = |s: &str| mo2.index_of(s).unwrap();
        assert_eq!(mo2.join(id("a"), id("a_c")), Some(id("1")));
        assert_eq!(mo2.meet(id("a"), id("b")), Some(id("0")));
        assert_eq!(mo2.join(id("a"), id("b")), Some(id("1")));
        assert_eq!(mo2.bottom(), id("0"));
    }

    #[test]
    fn idempotent_join_in_b4() {
        let b4 = corpus::b4();
        let a = b4.index_of("a").unwrap();
        assert_eq!(b4.join(a, a), Some(a));
    }

    #[test]
    fn join_undefined_without_least_upper_bound() {
        // two maximal elements above a pair: no least upper bound
        let spec = AlgebraSpec {
            name: "w".into(),
            elements: ["0", "p", "q", "r", "s", "1"].map(String::from).to_vec(),
            top: "1".into(),
            leq: vec![
                ("p".into(), "r".into()),
                ("q".into(), "r".into()),
                ("p".into(), "s".into()),
                ("q".into(), "s".into()),
                ("0".into(), "p".into()),
                ("0".into(), "q".into()),
                ("r".into(), "1".into()),
                ("s".into(), "1".into()),
            ],
            ortho: vec![
                ("0".into(), "1".into()),
                ("1".into(), "0".into()),
                ("p".into(), "s".into()),
                ("s".into(), "p".into()),
                ("q".into(), "r".into()),
                ("r".into(), "q".into()),
            ],
        };
        let alg = EventAlgebra::from_spec(&spec).unwrap();
        let (p, q) = (alg.index_of("p").unwrap(), alg.index_of("q").unwrap());
        assert_eq!(alg.join(p, q), None);
    }

    #[test]
    fn structural_errors() {
        let mut spec = corpus::mo2().to_spec();
        spec.elements.push("a".into());
        assert_eq!(
            EventAlgebra::from_spec(&spec),
            Err(StructureError::DuplicateId("a".into()))
        );

        let mut spec = corpus::mo2().to_spec();
        spec.leq.push(("1".into(), "a".into()));
        assert!(matches!(
            EventAlgebra::from_spec(&spec),
            Err(StructureError::NotAntisymmetric(..))
        ));

        let mut spec = corpus::mo2().to_spec();
        spec.leq.push(("zz".into(), "a".into()));
        assert!(matches!(
            EventAlgebra::from_spec(&spec),
            Err(StructureError::UnknownId { .. })
        ));

        let mut spec = corpus::mo2().to_spec();
        spec.ortho[1].1 = "b".into();
        assert!(matches!(
            EventAlgebra::from_spec(&spec),
            Err(StructureError::OrthoNotBijective(_))
        ));

        let mut spec = corpus::mo2().to_spec();
        spec.ortho.pop();
        assert!(matches!(
            EventAlgebra::from_spec(&spec),
            Err(StructureError::OrthoMissing(_))
        ));
    }
}
