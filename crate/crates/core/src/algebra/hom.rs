use std::fmt;
use std::sync::Arc;

use super::{same_algebra, EventAlgebra};
use crate::budget::Budget;
use crate::error::{Error, Result, StructureError};
use crate::report::{Check, ValidationReport};

/// A total map between the carriers of two event algebras.
///
/// Construction only checks totality; [`validate_homomorphism`] decides
/// whether the map is an arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventHomomorphism {
    source: Arc<EventAlgebra>,
    target: Arc<EventAlgebra>,
    map: Vec<usize>,
}

impl EventHomomorphism {
    pub fn new(
        source: Arc<EventAlgebra>,
        target: Arc<EventAlgebra>,
        map: Vec<usize>,
    ) -> Result<Self, StructureError> {
        if map.len() != source.len() {
            return Err(StructureError::MapLength {
                expected: source.len(),
                got: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.len()) {
            return Err(StructureError::UnknownId {
                context: "homomorphism image",
                id: bad.to_string(),
            });
        }
        Ok(EventHomomorphism {
            source,
            target,
            map,
        })
    }

    /// Builds the map from `(source id, target id)` pairs; every source
    /// element needs exactly one image.
    pub fn from_pairs(
        source: Arc<EventAlgebra>,
        target: Arc<EventAlgebra>,
        pairs: &[(String, String)],
    ) -> Result<Self, StructureError> {
        let mut map = vec![None; source.len()];
        for (x, y) in pairs {
            let xi = source.index_of(x).ok_or_else(|| StructureError::UnknownId {
                context: "map source",
                id: x.clone(),
            })?;
            let yi = target.index_of(y).ok_or_else(|| StructureError::UnknownId {
                context: "map target",
                id: y.clone(),
            })?;
            if map[xi].replace(yi).is_some() {
                return Err(StructureError::DuplicateId(x.clone()));
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, y)| y.ok_or_else(|| StructureError::MapNotTotal(source.id(i).to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EventHomomorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(alg: Arc<EventAlgebra>) -> Self {
        let map = alg.elements().collect();
        EventHomomorphism {
            source: alg.clone(),
            target: alg,
            map,
        }
    }

    pub fn source(&self) -> &Arc<EventAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<EventAlgebra> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &EventHomomorphism) -> Result<EventHomomorphism> {
        if !same_algebra(&first.target, &self.source) {
            return Err(Error::AlgebraMismatch {
                expected: self.source.name().to_string(),
                found: first.target.name().to_string(),
            });
        }
        Ok(EventHomomorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first.map.iter().map(|&x| self.map[x]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    /// Sorted, deduplicated image.
    pub fn image(&self) -> Vec<usize> {
        let mut im = self.map.clone();
        im.sort_unstable();
        im.dedup();
        im
    }

    /// Images in source order, e.g. `[0|a|a_c|1]`.
    pub fn label(&self) -> String {
        hom_label(&self.target, &self.map)
    }
}

pub(crate) fn hom_label(target: &EventAlgebra, map: &[usize]) -> String {
    let parts: Vec<&str> = map.iter().map(|&y| target.id(y)).collect();
    format!("[{}]", parts.join("|"))
}

impl fmt::Display for EventHomomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} {}",
            self.source.name(),
            self.target.name(),
            self.label()
        )
    }
}

/// Checks the arrow conditions `[a]`–`[d]` on every element and pair.
pub fn validate_homomorphism(h: &EventHomomorphism) -> ValidationReport {
    let (src, dst) = (&*h.source, &*h.target);
    let m = |x: usize| h.map[x];
    let mut report = ValidationReport::new(format!("{}->{}", src.name(), dst.name()));

    report.push(Check::from_outcome(
        "hom[a]",
        (m(src.top()) != dst.top()).then(|| vec![src.id(src.top()).to_string()]),
    ));
    report.push(Check::from_outcome(
        "hom[b]",
        src.elements()
            .find(|&k| m(src.ortho(k)) != dst.ortho(m(k)))
            .map(|k| vec![src.id(k).to_string()]),
    ));
    let mut monotone = None;
    let mut join_bound = None;
    for k in src.elements() {
        for l in src.elements() {
            if monotone.is_none() && src.leq(k, l) && !dst.leq(m(k), m(l)) {
                monotone = Some(src.ids_of(&[k, l]));
            }
            if join_bound.is_none() && src.orthogonal(k, l) {
                let ok = match (src.join(k, l), dst.join(m(k), m(l))) {
                    (Some(j), Some(t)) => dst.leq(m(j), t),
                    _ => false,
                };
                if !ok {
                    join_bound = Some(src.ids_of(&[k, l]));
                }
            }
        }
    }
    report.push(Check::from_outcome("hom[c]", monotone));
    report.push(Check::from_outcome("hom[d]", join_bound));
    report
}

/// Every map `source -> target` satisfying `[a]`–`[d]`, in lexicographic order
/// of image vectors.
///
/// Backtracking assigns complementary pairs together (forced by `[b]`) and
/// prunes on `[c]` and `[d]` as soon as the elements involved are assigned.
/// `budget` bounds the number of search nodes.
pub fn enumerate_homomorphisms(
    source: &Arc<EventAlgebra>,
    target: &Arc<EventAlgebra>,
    budget: Budget,
) -> Result<Vec<EventHomomorphism>> {
    let mut meter = budget.meter(&format!(
        "enumerating homomorphisms {} -> {}",
        source.name(),
        target.name()
    ));
    let n = source.len();
    let mut map: Vec<Option<usize>> = vec![None; n];
    let mut out = Vec::new();

    let top = source.top();
    let bottom = source.bottom();
    map[top] = Some(target.top());
    if map[bottom].is_some_and(|y| y != target.bottom()) {
        return Ok(out);
    }
    map[bottom] = Some(target.bottom());

    fn consistent(src: &EventAlgebra, dst: &EventAlgebra, map: &[Option<usize>], fresh: &[usize]) -> bool {
        for &x in fresh {
            let Some(mx) = map[x] else { return false };
            if let Some(mo) = map[src.ortho(x)] {
                if mo != dst.ortho(mx) {
                    return false;
                }
            }
            for z in src.elements() {
                let Some(mz) = map[z] else { continue };
                if src.leq(z, x) && !dst.leq(mz, mx) || src.leq(x, z) && !dst.leq(mx, mz) {
                    return false;
                }
                for (k, l) in [(x, z), (z, x)] {
                    if !src.orthogonal(k, l) {
                        continue;
                    }
                    let Some(j) = src.join(k, l) else { continue };
                    let Some(mj) = map[j] else { continue };
                    let (mk, ml) = (map[k].unwrap(), map[l].unwrap());
                    match dst.join(mk, ml) {
                        Some(t) if dst.leq(mj, t) => {}
                        _ => return false,
                    }
                }
            }
            // x may be the join of an assigned orthogonal pair
            for k in src.elements() {
                let Some(mk) = map[k] else { continue };
                for l in src.elements() {
                    let Some(ml) = map[l] else { continue };
                    if src.orthogonal(k, l) && src.join(k, l) == Some(x) {
                        match dst.join(mk, ml) {
                            Some(t) if dst.leq(mx, t) => {}
                            _ => return false,
                        }
                    }
                }
            }
        }
        true
    }

    if !consistent(source, target, &map, &[top, bottom]) {
        return Ok(out);
    }

    fn search(
        src: &Arc<EventAlgebra>,
        dst: &Arc<EventAlgebra>,
        map: &mut Vec<Option<usize>>,
        out: &mut Vec<EventHomomorphism>,
        meter: &mut crate::budget::Meter,
    ) -> Result<()> {
        meter.tick()?;
        let Some(x) = map.iter().position(Option::is_none) else {
            let h = EventHomomorphism {
                source: src.clone(),
                target: dst.clone(),
                map: map.iter().map(|y| y.unwrap()).collect(),
            };
            if validate_homomorphism(&h).passed() {
                out.push(h);
            }
            return Ok(());
        };
        let xo = src.ortho(x);
        for y in dst.elements() {
            let yo = dst.ortho(y);
            if xo == x && yo != y {
                continue;
            }
            if map[xo].is_some() {
                continue;
            }
            map[x] = Some(y);
            map[xo] = Some(yo);
            if consistent(src, dst, map, &[x, xo]) {
                search(src, dst, map, out, meter)?;
            }
            map[x] = None;
            map[xo] = None;
        }
        Ok(())
    }

    search(source, target, &mut map, &mut out, &mut meter)?;
    out.sort_by(|a, b| a.map.cmp(&b.map));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn hom(src: &Arc<EventAlgebra>, dst: &Arc<EventAlgebra>, pairs: &[(&str, &str)]) -> EventHomomorphism {
        let pairs: Vec<(String, String)> =
            pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        EventHomomorphism::from_pairs(src.clone(), dst.clone(), &pairs).unwrap()
    }

    #[test]
    fn identity_is_a_homomorphism() {
        for alg in corpus::algebras() {
            let r = validate_homomorphism(&EventHomomorphism::identity(alg.clone()));
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn block_inclusion_into_mo2() {
        let (b4, mo2) = (corpus::b4(), corpus::mo2());
        let h = hom(&b4, &mo2, &[("0", "0"), ("a", "a"), ("a_c", "a_c"), ("1", "1")]);
        assert!(validate_homomorphism(&h).passed());
        assert!(h.is_injective());
    }

    #[test]
    fn ortho_violation_is_caught_at_a() {
        let (b4, mo2) = (corpus::b4(), corpus::mo2());
        let h = hom(&b4, &mo2, &[("0", "0"), ("a", "b"), ("a_c", "a"), ("1", "1")]);
        let r = validate_homomorphism(&h);
        let first = r.first_failure().unwrap();
        assert_eq!(first.name, "hom[b]");
        assert_eq!(first.witness, Some(vec!["a".to_string()]));
    }

    #[test]
    fn partial_map_is_a_structural_error() {
        let (b4, mo2) = (corpus::b4(), corpus::mo2());
        let err = EventHomomorphism::from_pairs(
            b4,
            mo2,
            &[("0".into(), "0".into()), ("1".into(), "1".into())],
        )
        .unwrap_err();
        assert_eq!(err, StructureError::MapNotTotal("a".into()));
    }

    #[test]
    fn enumeration_matches_naive_count() {
        let algs = corpus::algebras();
        for src in algs.iter().filter(|a| a.len() <= 8) {
            for dst in algs.iter().filter(|a| a.len() <= 8) {
                // the naive count refuses spaces beyond its budget (B8 -> B8)
                let Ok(slow) = corpus::oracle_hom_count(src, dst, Budget::DEFAULT) else {
                    continue;
                };
                let fast = enumerate_homomorphisms(src, dst, Budget::DEFAULT).unwrap();
                assert_eq!(fast.len() as u64, slow, "{} -> {}", src.name(), dst.name());
            }
        }
    }

    #[test]
    fn enumeration_respects_budget() {
        let (b8, mo2) = (corpus::b8(), corpus::mo2());
        assert!(matches!(
            enumerate_homomorphisms(&b8, &mo2, Budget(3)),
            Err(Error::Budget { .. })
        ));
    }
}
