//! Stone spaces of finite Boolean algebras, measurement charts over a cover
//! system, and the Boolean power fibration.
//!
//! A finite Boolean algebra is the powerset of its atoms, so its Stone space
//! is the discrete space on the atoms and every subset is clopen.

use std::sync::Arc;

use crate::adjunction::{colimit, ColimitCarrier};
use crate::algebra::{hom_label, validate_homomorphism, BooleanAlgebra, EventAlgebra, EventHomomorphism};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::localization::PrelocalizationSystem;
use crate::observable::Observable;
use crate::presheaf::{hom_functor_r, FiniteCategory};
use crate::report::{Check, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoneSpace {
    algebra: Arc<EventAlgebra>,
    points: Vec<usize>,
    clopen: Vec<Vec<usize>>,
}

/// Points are the atoms; `clopen(x)` lists (as point indices) the atoms
/// below `x`.
pub fn stone(b: &BooleanAlgebra) -> StoneSpace {
    let alg = b.algebra().clone();
    let points = b.atoms().to_vec();
    let clopen = alg
        .elements()
        .map(|x| (0..points.len()).filter(|&i| alg.leq(points[i], x)).collect())
        .collect();
    StoneSpace {
        algebra: alg,
        points,
        clopen,
    }
}

fn mask(points: &[usize]) -> u64 {
    points.iter().fold(0, |m, &i| m | 1 << i)
}

impl StoneSpace {
    pub fn algebra(&self) -> &Arc<EventAlgebra> {
        &self.algebra
    }

    /// Atoms of the algebra, in canonical order.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn clopen(&self, x: usize) -> &[usize] {
        &self.clopen[x]
    }

    /// `clopen` is a bijection onto all subsets of points carrying join to
    /// union, meet to intersection, ortho to complement and order to
    /// inclusion.
    pub fn verify(&self) -> ValidationReport {
        let alg = &self.algebra;
        let full = (1u64 << self.points.len()) - 1;
        let m: Vec<u64> = self.clopen.iter().map(|c| mask(c)).collect();
        let id = |x: usize| alg.id(x).to_string();
        let mut report = ValidationReport::new(format!("stone {}", alg.name()));

        let mut seen = std::collections::HashSet::new();
        let injective = alg.elements().find(|&x| !seen.insert(m[x])).map(|x| vec![id(x)]);
        report.push(Check::from_outcome("injective", injective));
        let count_ok = self.points.len() < 64 && alg.len() as u128 == 1u128 << self.points.len();
        report.push(Check::from_outcome(
            "onto-powerset",
            (!count_ok).then(|| vec![format!("{} elements", alg.len()), format!("{} points", self.points.len())]),
        ));
        let pair = |bad: &dyn Fn(usize, usize) -> bool| {
            alg.elements()
                .flat_map(|x| alg.elements().map(move |y| (x, y)))
                .find(|&(x, y)| bad(x, y))
                .map(|(x, y)| vec![id(x), id(y)])
        };
        report.push(Check::from_outcome(
            "join",
            pair(&|x, y| alg.join(x, y).map(|j| m[j]) != Some(m[x] | m[y])),
        ));
        report.push(Check::from_outcome(
            "meet",
            pair(&|x, y| alg.meet(x, y).map(|j| m[j]) != Some(m[x] & m[y])),
        ));
        report.push(Check::from_outcome(
            "ortho",
            alg.elements().find(|&x| m[alg.ortho(x)] != full ^ m[x]).map(|x| vec![id(x)]),
        ));
        report.push(Check::from_outcome(
            "order",
            pair(&|x, y| alg.leq(x, y) != (m[x] & !m[y] == 0)),
        ));
        report
    }

    /// The powerset algebra of the points, with elements `s<mask>`.
    pub fn powerset_algebra(&self) -> Arc<EventAlgebra> {
        let k = self.points.len();
        let size = 1usize << k;
        let ids: Vec<String> = (0..size).map(|s| format!("s{s}")).collect();
        let mut spec = crate::algebra::AlgebraSpec {
            name: format!("stone_{}", self.algebra.name()),
            elements: ids.clone(),
            top: ids[size - 1].clone(),
            leq: Vec::new(),
            ortho: Vec::new(),
        };
        for s in 0..size {
            for t in 0..size {
                if s != t && s & t == s {
                    spec.leq.push((ids[s].clone(), ids[t].clone()));
                }
            }
            spec.ortho.push((ids[s].clone(), ids[(size - 1) ^ s].clone()));
        }
        Arc::new(EventAlgebra::from_spec(&spec).expect("powerset is well formed"))
    }

    /// Rebuilds the algebra from the powerset of points and matches it with
    /// the original by sending each singleton to its atom. Returns the
    /// isomorphism `powerset -> algebra` if it is one.
    pub fn round_trip(&self) -> Option<EventHomomorphism> {
        let pow = self.powerset_algebra();
        let mut map = Vec::with_capacity(pow.len());
        for s in 0..pow.len() {
            let mut atoms = (0..self.points.len()).filter(|&i| s >> i & 1 == 1).map(|i| self.points[i]);
            let joined = atoms.try_fold(self.algebra.bottom(), |j, a| self.algebra.join(j, a))?;
            map.push(joined);
        }
        let forward = EventHomomorphism::new(pow.clone(), self.algebra.clone(), map.clone()).ok()?;
        if !forward.is_injective() || forward.image().len() != self.algebra.len() {
            return None;
        }
        let mut inv = vec![0; map.len()];
        for (s, &x) in map.iter().enumerate() {
            inv[x] = s;
        }
        let backward = EventHomomorphism::new(self.algebra.clone(), pow, inv).ok()?;
        (validate_homomorphism(&forward).passed() && validate_homomorphism(&backward).passed()).then_some(forward)
    }

    /// `point <atom>` lines, then `clopen <element> : <atoms>` lines.
    pub fn dump(&self) -> Vec<String> {
        let alg = &self.algebra;
        let mut out: Vec<String> = self.points.iter().map(|&p| format!("point {}", alg.id(p))).collect();
        for x in alg.elements() {
            let atoms: Vec<&str> = self.clopen[x].iter().map(|&i| alg.id(self.points[i])).collect();
            if atoms.is_empty() {
                out.push(format!("clopen {} :", alg.id(x)));
            } else {
                out.push(format!("clopen {} : {}", alg.id(x), atoms.join(" ")));
            }
        }
        out
    }
}

/// A local measurement chart: the Stone space of a base object's algebra
/// together with a cover of the system.
#[derive(Debug, Clone)]
pub struct SpaceChart {
    pub stone: StoneSpace,
    pub object: usize,
    pub cover: EventHomomorphism,
}

impl SpaceChart {
    pub fn label(&self) -> String {
        self.cover.label()
    }
}

/// The charts of a system together with the colimit that decides their
/// compatibility.
#[derive(Debug, Clone)]
pub struct Atlas {
    system: PrelocalizationSystem,
    carrier: ColimitCarrier,
}

impl Atlas {
    pub fn new(system: &PrelocalizationSystem) -> Self {
        Atlas {
            system: system.clone(),
            carrier: colimit(&system.presheaf()),
        }
    }

    pub fn system(&self) -> &PrelocalizationSystem {
        &self.system
    }

    pub fn carrier(&self) -> &ColimitCarrier {
        &self.carrier
    }

    /// The chart of cover `map` at `object`; the object's algebra must be
    /// Boolean and the cover must belong to the system.
    pub fn chart(&self, object: usize, map: &[usize]) -> Result<SpaceChart> {
        if object >= self.system.base().objects().len() || !self.system.contains(object, map) {
            return Err(Error::NotInSystem(if object < self.system.base().objects().len() {
                self.system.cover_label(object, map)
            } else {
                format!("object {object}")
            }));
        }
        let alg = self.system.base().object(object).target().clone();
        let b = BooleanAlgebra::new(alg).map_err(|r| Error::NotCategory(r.to_string()))?;
        Ok(SpaceChart {
            stone: stone(&b),
            object,
            cover: self.system.cover_hom(object, map),
        })
    }

    fn class(&self, chart: &SpaceChart, element: usize) -> Result<usize> {
        let s = self.system.covers(chart.object)
            .binary_search_by(|c| c.as_slice().cmp(chart.cover.map()))
            .map_err(|_| Error::NotInSystem(self.system.cover_label(chart.object, chart.cover.map())))?;
        Ok(self.carrier.class_of_pair(chart.object, s, element))
    }
}

/// `ψ_B ⊗ a = ψ_D ⊗ c`: both generators lie in one class of the system's
/// colimit.
pub fn charts_equivalent(atlas: &Atlas, c1: &SpaceChart, a: usize, c2: &SpaceChart, b: usize) -> Result<bool> {
    Ok(atlas.class(c1, a)? == atlas.class(c2, b)?)
}

/// `Υ_B`: every pair of a cover in `R(L)(B)` and an element of `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanPowerFiber {
    pub object: usize,
    pub covers: Vec<Vec<usize>>,
    /// `(cover index, element)`, in lexicographic order.
    pub pairs: Vec<(usize, usize)>,
}

impl BooleanPowerFiber {
    /// The projection `(ψ_B, q) ↦ q`.
    pub fn project(&self, pair: usize) -> usize {
        self.pairs[pair].1
    }
}

/// `Υ` with the relation `(ψ_B ∘ η, q′) ⊗ (ψ_B, η(q′))` and its equivalence
/// closure.
#[derive(Debug, Clone)]
pub struct FibrationRelation {
    base: Arc<FiniteCategory>,
    target: Arc<Observable>,
    fibers: Vec<BooleanPowerFiber>,
    offsets: Vec<usize>,
    carrier: Vec<(usize, usize)>,
    related: Vec<(usize, usize)>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    labels: Vec<usize>,
}

pub fn build_fibration(base: &Arc<FiniteCategory>, l_obs: &Arc<Observable>, budget: Budget) -> Result<FibrationRelation> {
    let r = hom_functor_r(base, l_obs, budget)?;
    let mut fibers = Vec::new();
    let mut offsets = Vec::new();
    let mut carrier = Vec::new();
    for (o, obj) in base.objects().iter().enumerate() {
        let covers: Vec<Vec<usize>> = (0..r.sections(o).len()).map(|s| r.hom_section(o, s).unwrap().to_vec()).collect();
        let pairs: Vec<(usize, usize)> = (0..covers.len())
            .flat_map(|c| obj.target().elements().map(move |q| (c, q)))
            .collect();
        offsets.push(carrier.len());
        carrier.extend(pairs.iter().map(|_| (o, 0)));
        let start = offsets[o];
        for (i, &(c, q)) in pairs.iter().enumerate() {
            carrier[start + i] = (c, q);
        }
        fibers.push(BooleanPowerFiber { object: o, covers, pairs });
    }
    let n_elems: Vec<usize> = base.objects().iter().map(|o| o.target().len()).collect();
    let index = |o: usize, c: usize, q: usize| offsets[o] + c * n_elems[o] + q;

    let mut related = Vec::new();
    for (eta, arrow) in base.arrows().iter().enumerate() {
        let (b_prime, b) = (arrow.source, arrow.target);
        for c in 0..fibers[b].covers.len() {
            let pulled = r.restrict(eta, c);
            for (q_prime, &eq) in arrow.map.iter().enumerate() {
                related.push((index(b_prime, pulled, q_prime), index(b, c, eq)));
            }
        }
    }

    // least-label fixpoint over the symmetric adjacency
    let total = offsets.last().map_or(0, |&s| s + fibers.last().unwrap().pairs.len());
    let mut adjacency = vec![Vec::new(); total];
    for &(x, y) in &related {
        adjacency[x].push(y);
        adjacency[y].push(x);
    }
    let mut label: Vec<usize> = (0..total).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..total {
            for &y in &adjacency[x] {
                if label[y] < label[x] {
                    label[x] = label[y];
                    changed = true;
                }
            }
        }
    }
    let mut class_of = vec![0; total];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut id_of_label = std::collections::HashMap::new();
    for x in 0..total {
        let id = *id_of_label.entry(label[x]).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        class_of[x] = id;
        classes[id].push(x);
    }
    let object_of = |x: usize| offsets.iter().rposition(|&s| s <= x).unwrap();
    // representative from the largest algebra, then lowest object and pair
    let labels = classes
        .iter()
        .map(|members| {
            *members
                .iter()
                .min_by_key(|&&x| {
                    let o = object_of(x);
                    (std::cmp::Reverse(n_elems[o]), o, x)
                })
                .unwrap()
        })
        .collect();
    Ok(FibrationRelation {
        base: base.clone(),
        target: l_obs.clone(),
        fibers,
        offsets,
        carrier,
        related,
        class_of,
        classes,
        labels,
    })
}

impl FibrationRelation {
    pub fn fibers(&self) -> &[BooleanPowerFiber] {
        &self.fibers
    }

    /// Size of `Υ`.
    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    /// Index in `Υ` of `(ψ, q)` in the fiber over `object`.
    pub fn index(&self, object: usize, cover: usize, element: usize) -> usize {
        self.offsets[object] + cover * self.base.object(object).target().len() + element
    }

    pub fn object_of(&self, x: usize) -> usize {
        self.offsets.iter().rposition(|&s| s <= x).unwrap()
    }

    /// `(cover index, element)` within its fiber.
    pub fn pair(&self, x: usize) -> (usize, usize) {
        self.carrier[x]
    }

    /// Raw instances of the relation.
    pub fn related(&self) -> &[(usize, usize)] {
        &self.related
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn equivalent(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    pub fn element_label(&self, x: usize) -> String {
        let o = self.object_of(x);
        let (c, q) = self.carrier[x];
        let obj = self.base.object(o);
        format!(
            "({}:{},{})",
            obj.name(),
            hom_label(self.target.target(), &self.fibers[o].covers[c]),
            obj.target().id(q)
        )
    }

    /// Label of a class: its member over the largest fiber algebra.
    pub fn class_label(&self, class: usize) -> String {
        self.element_label(self.labels[class])
    }

    /// `class <label> : <members>` per class.
    pub fn dump(&self) -> Vec<String> {
        self.classes
            .iter()
            .enumerate()
            .map(|(i, members)| {
                let m: Vec<String> = members.iter().map(|&x| self.element_label(x)).collect();
                format!("class {} : {}", self.class_label(i), m.join(" "))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::localization::PrelocalizationSystem;

    fn boolean(alg: Arc<EventAlgebra>) -> BooleanAlgebra {
        BooleanAlgebra::new(alg).unwrap()
    }

    #[test]
    fn two_element_space_is_a_point() {
        let s = stone(&boolean(corpus::two_element()));
        assert_eq!(s.points().len(), 1);
        assert_eq!(s.clopen(1), &[0]);
        assert!(s.clopen(0).is_empty());
        assert_eq!(s.dump(), vec!["point 1", "clopen 0 :", "clopen 1 : 1"]);
    }

    #[test]
    fn corpus_boolean_algebras_round_trip() {
        for alg in corpus::boolean_algebras() {
            let s = stone(&boolean(alg.clone()));
            assert!(s.verify().passed(), "{}", s.verify());
            assert_eq!(alg.len(), 1 << s.points().len());
            assert!(s.round_trip().is_some(), "{}", alg.name());
        }
    }

    fn mo2_atlas() -> Atlas {
        let lib = corpus::mo2_library();
        let sys = PrelocalizationSystem::from_library(&lib, lib.system("mo2_both").unwrap(), Budget::DEFAULT).unwrap();
        Atlas::new(&sys)
    }

    #[test]
    fn block_charts() {
        let atlas = mo2_atlas();
        let lib = corpus::mo2_library();
        let (ia, ib) = (lib.hom("incl_a").unwrap(), lib.hom("incl_b").unwrap());
        let ca = atlas.chart(0, ia.map()).unwrap();
        let cb = atlas.chart(1, ib.map()).unwrap();
        let top = 3;
        assert!(charts_equivalent(&atlas, &ca, top, &cb, top).unwrap());
        assert!(charts_equivalent(&atlas, &ca, 1, &ca, 1).unwrap());
        assert!(!charts_equivalent(&atlas, &ca, 1, &cb, 1).unwrap());

        let lib = corpus::mo2_library();
        let single = PrelocalizationSystem::from_library(&lib, lib.system("mo2_single").unwrap(), Budget::DEFAULT).unwrap();
        // a -> b is not generated by the a-block inclusion
        assert!(matches!(Atlas::new(&single).chart(0, ib.map()), Err(Error::NotInSystem(_))));
    }

    fn warshall(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            m[a][b] = true;
            m[b][a] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if m[i][k] && m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
        m
    }

    #[test]
    fn fibration_closure_matches_warshall() {
        for (base, target) in [corpus::mo2_two_block_base(), corpus::b4_base()] {
            let fib = build_fibration(&base, &target, Budget::DEFAULT).unwrap();
            let m = warshall(fib.len(), fib.related());
            for x in 0..fib.len() {
                for y in 0..fib.len() {
                    assert_eq!(fib.equivalent(x, y), m[x][y]);
                }
            }
        }
    }

    #[test]
    fn mo2_fibration_glues_bottoms() {
        let (base, target) = corpus::mo2_two_block_base();
        let fib = build_fibration(&base, &target, Budget::DEFAULT).unwrap();
        let lib = corpus::mo2_library();
        let find = |o: usize, name: &str| {
            let m = lib.hom(name).unwrap().map();
            fib.fibers()[o].covers.iter().position(|c| c.as_slice() == m).unwrap()
        };
        let a0 = fib.index(0, find(0, "incl_a"), 0);
        let b0 = fib.index(1, find(1, "incl_b"), 0);
        assert!(fib.equivalent(a0, b0));
        assert_eq!(fib.classes().len(), 6);
    }

    #[test]
    fn identity_only_fibration_is_discrete() {
        let (base, target) = corpus::b4_base();
        let fib = build_fibration(&base, &target, Budget::DEFAULT).unwrap();
        assert_eq!(fib.classes().len(), fib.len());
    }

    #[test]
    fn displayed_instances_are_related() {
        let (base, target) = corpus::mo2_two_block_base();
        let fib = build_fibration(&base, &target, Budget::DEFAULT).unwrap();
        for (eta, arrow) in base.arrows().iter().enumerate() {
            for (c, psi) in fib.fibers()[arrow.target].covers.iter().enumerate() {
                let composite: Vec<usize> = arrow.map.iter().map(|&q| psi[q]).collect();
                let pc = fib.fibers()[arrow.source].covers.iter().position(|d| *d == composite).unwrap();
                for (q, &eq) in arrow.map.iter().enumerate() {
                    let x = fib.index(arrow.source, pc, q);
                    let y = fib.index(arrow.target, c, eq);
                    assert!(fib.equivalent(x, y), "arrow {eta}");
                    assert_eq!(arrow.map[fib.pair(x).1], fib.pair(y).1);
                }
            }
        }
    }
}
