//! Finite categories of Boolean observables and set-valued presheaves on
//! them.
//!
//! A presheaf stores, for every object, a list of sections and, for every
//! arrow `u: θ -> ξ`, the restriction `X(ξ) -> X(θ)` as an index table.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::algebra::hom_label;
use crate::algebra::{enumerate_homomorphisms, validate_boolean_algebra, validate_homomorphism, EventHomomorphism};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::observable::{commutes, same_frame, Observable, ObservableArrow};
use crate::report::{Check, ValidationReport};

/// Which Boolean homomorphisms become arrows of a full subcategory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArrowSelection {
    #[default]
    All,
    Injective,
}

/// Arrow `source -> target` carried by the algebra map `map`
/// (`map[q]` is the image of element `q` of `A(source)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CatArrow {
    pub source: usize,
    pub target: usize,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct FiniteCategory {
    objects: Vec<Arc<Observable>>,
    arrows: Vec<CatArrow>,
    identities: Vec<usize>,
    lookup: HashMap<CatArrow, usize>,
    composition: HashMap<(usize, usize), usize>,
    hom: Vec<Vec<Vec<usize>>>,
}

impl FiniteCategory {
    fn check_objects(objects: &[Arc<Observable>]) -> Result<()> {
        for (i, o) in objects.iter().enumerate() {
            let r = validate_boolean_algebra(o.target());
            if !r.passed() {
                return Err(Error::NotCategory(format!(
                    "object {} has non-Boolean target {}",
                    o.name(),
                    o.target().name()
                )));
            }
            if objects[..i].iter().any(|p| p.name() == o.name()) {
                return Err(Error::NotCategory(format!("duplicate object name {}", o.name())));
            }
        }
        Ok(())
    }

    /// Full subcategory of Boolean observables on `objects`: every
    /// homomorphism making the triangle commute (optionally only the
    /// injective ones) is an arrow.
    pub fn full(
        objects: Vec<Arc<Observable>>,
        selection: ArrowSelection,
        budget: Budget,
    ) -> Result<Self> {
        Self::check_objects(&objects)?;
        let mut arrows = Vec::new();
        for (s, src) in objects.iter().enumerate() {
            for (t, dst) in objects.iter().enumerate() {
                if !same_frame(src.frame(), dst.frame()) {
                    continue;
                }
                for h in enumerate_homomorphisms(src.target(), dst.target(), budget)? {
                    if !commutes(src, dst, h.map()) {
                        continue;
                    }
                    if selection == ArrowSelection::Injective && !h.is_injective() {
                        continue;
                    }
                    arrows.push(CatArrow {
                        source: s,
                        target: t,
                        map: h.map().to_vec(),
                    });
                }
            }
        }
        Self::assemble(objects, arrows)
    }

    /// Subcategory generated by `arrows`: identities are added and the set is
    /// closed under composition. Every arrow must be a homomorphism with a
    /// commuting triangle.
    pub fn generated(objects: Vec<Arc<Observable>>, arrows: Vec<CatArrow>) -> Result<Self> {
        Self::check_objects(&objects)?;
        let mut set: Vec<CatArrow> = Vec::new();
        let mut seen: BTreeSet<(usize, usize, Vec<usize>)> = BTreeSet::new();
        let mut push = |a: CatArrow, set: &mut Vec<CatArrow>| {
            if seen.insert((a.source, a.target, a.map.clone())) {
                set.push(a);
            }
        };
        for (i, o) in objects.iter().enumerate() {
            push(
                CatArrow {
                    source: i,
                    target: i,
                    map: o.target().elements().collect(),
                },
                &mut set,
            );
        }
        for a in arrows {
            if a.source >= objects.len() || a.target >= objects.len() {
                return Err(Error::NotCategory("arrow endpoint out of range".into()));
            }
            let (src, dst) = (&objects[a.source], &objects[a.target]);
            let h = EventHomomorphism::new(src.target().clone(), dst.target().clone(), a.map.clone())?;
            if !validate_homomorphism(&h).passed() {
                return Err(Error::NotCategory(format!("{h} is not a homomorphism")));
            }
            ObservableArrow::new(src.clone(), dst.clone(), h)?;
            push(a, &mut set);
        }
        loop {
            let mut fresh = Vec::new();
            for f in &set {
                for g in &set {
                    if f.target == g.source {
                        fresh.push(CatArrow {
                            source: f.source,
                            target: g.target,
                            map: f.map.iter().map(|&x| g.map[x]).collect(),
                        });
                    }
                }
            }
            let before = set.len();
            for a in fresh {
                push(a, &mut set);
            }
            if set.len() == before {
                break;
            }
        }
        Self::assemble(objects, set)
    }

    fn assemble(objects: Vec<Arc<Observable>>, mut arrows: Vec<CatArrow>) -> Result<Self> {
        arrows.sort_by(|a, b| (a.source, a.target, &a.map).cmp(&(b.source, b.target, &b.map)));
        let n = objects.len();
        let lookup: HashMap<CatArrow, usize> =
            arrows.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let mut hom = vec![vec![Vec::new(); n]; n];
        for (i, a) in arrows.iter().enumerate() {
            hom[a.source][a.target].push(i);
        }
        let mut identities = Vec::with_capacity(n);
        for (i, o) in objects.iter().enumerate() {
            let id = CatArrow {
                source: i,
                target: i,
                map: o.target().elements().collect(),
            };
            let idx = *lookup
                .get(&id)
                .ok_or_else(|| Error::NotCategory(format!("missing identity on {}", o.name())))?;
            identities.push(idx);
        }
        let mut composition = HashMap::new();
        for (fi, f) in arrows.iter().enumerate() {
            for &gi in hom[f.target].iter().flatten() {
                let g = &arrows[gi];
                let gf = CatArrow {
                    source: f.source,
                    target: g.target,
                    map: f.map.iter().map(|&x| g.map[x]).collect(),
                };
                let idx = *lookup.get(&gf).ok_or_else(|| {
                    Error::NotCategory(format!("composite of arrows {fi} and {gi} is missing"))
                })?;
                composition.insert((gi, fi), idx);
            }
        }
        Ok(FiniteCategory {
            objects,
            arrows,
            identities,
            lookup,
            composition,
            hom,
        })
    }

    pub fn objects(&self) -> &[Arc<Observable>] {
        &self.objects
    }

    pub fn object(&self, i: usize) -> &Arc<Observable> {
        &self.objects[i]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.name() == name)
    }

    pub fn arrows(&self) -> &[CatArrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &CatArrow {
        &self.arrows[i]
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn is_identity(&self, arrow: usize) -> bool {
        self.identities[self.arrows[arrow].source] == arrow
    }

    /// Arrows `source -> target`.
    pub fn hom_set(&self, source: usize, target: usize) -> &[usize] {
        &self.hom[source][target]
    }

    /// `g ∘ f`, when `f.target == g.source`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.composition.get(&(g, f)).copied()
    }

    pub fn find_arrow(&self, source: usize, target: usize, map: &[usize]) -> Option<usize> {
        self.lookup
            .get(&CatArrow {
                source,
                target,
                map: map.to_vec(),
            })
            .copied()
    }

    /// Underlying homomorphism `A(u)`.
    pub fn carrier(&self, arrow: usize) -> EventHomomorphism {
        let a = &self.arrows[arrow];
        EventHomomorphism::new(
            self.objects[a.source].target().clone(),
            self.objects[a.target].target().clone(),
            a.map.clone(),
        )
        .expect("arrow maps are total")
    }

    pub fn arrow_label(&self, arrow: usize) -> String {
        let a = &self.arrows[arrow];
        format!(
            "{}->{}{}",
            self.objects[a.source].name(),
            self.objects[a.target].name(),
            hom_label(self.objects[a.target].target(), &a.map)
        )
    }

    /// Identity laws, closure and associativity, checked exhaustively.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new("category");
        let mut identity = None;
        for (i, a) in self.arrows.iter().enumerate() {
            let l = self.compose(self.identities[a.target], i);
            let r = self.compose(i, self.identities[a.source]);
            if l != Some(i) || r != Some(i) {
                identity = Some(vec![self.arrow_label(i)]);
                break;
            }
        }
        report.push(Check::from_outcome("identity", identity));
        let mut assoc = None;
        'outer: for (fi, f) in self.arrows.iter().enumerate() {
            for &gi in self.hom[f.target].iter().flatten() {
                let g = &self.arrows[gi];
                for &hi in self.hom[g.target].iter().flatten() {
                    let left = self.compose(hi, gi).and_then(|hg| self.compose(hg, fi));
                    let right = self.compose(gi, fi).and_then(|gf| self.compose(hi, gf));
                    if left.is_none() || left != right {
                        assoc = Some(vec![
                            self.arrow_label(fi),
                            self.arrow_label(gi),
                            self.arrow_label(hi),
                        ]);
                        break 'outer;
                    }
                }
            }
        }
        report.push(Check::from_outcome("associative", assoc));
        report
    }
}

/// A section of a presheaf: an opaque name, a base arrow (for
/// representables) or a homomorphism into a fixed target (for subfunctors of
/// the Hom-functor).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Section {
    Named(String),
    Arrow(usize),
    Hom(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct Presheaf {
    base: Arc<FiniteCategory>,
    sections: Vec<Vec<Section>>,
    restrict: Vec<Vec<usize>>,
    hom_target: Option<Arc<Observable>>,
}

impl Presheaf {
    /// Checks only the shape of the data; use [`validate_presheaf`] for the
    /// functor laws.
    pub fn new(
        base: Arc<FiniteCategory>,
        sections: Vec<Vec<Section>>,
        restrict: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if sections.len() != base.objects.len() || restrict.len() != base.arrows.len() {
            return Err(Error::NotCategory("presheaf shape does not match its base".into()));
        }
        for (i, a) in base.arrows.iter().enumerate() {
            if restrict[i].len() != sections[a.target].len()
                || restrict[i].iter().any(|&s| s >= sections[a.source].len())
            {
                return Err(Error::NotCategory(format!(
                    "restriction along {} is not a map X({}) -> X({})",
                    base.arrow_label(i),
                    base.objects[a.target].name(),
                    base.objects[a.source].name()
                )));
            }
        }
        Ok(Presheaf {
            base,
            sections,
            restrict,
            hom_target: None,
        })
    }

    pub fn empty(base: Arc<FiniteCategory>) -> Self {
        let sections = vec![Vec::new(); base.objects.len()];
        let restrict = vec![Vec::new(); base.arrows.len()];
        Presheaf {
            base,
            sections,
            restrict,
            hom_target: None,
        }
    }

    /// The terminal presheaf with one named section everywhere.
    pub fn constant(base: Arc<FiniteCategory>, label: &str) -> Self {
        let sections = vec![vec![Section::Named(label.to_string())]; base.objects.len()];
        let restrict = vec![vec![0]; base.arrows.len()];
        Presheaf {
            base,
            sections,
            restrict,
            hom_target: None,
        }
    }

    /// Subfunctor of `R(Ξ)` with the given sections; restriction is
    /// precomposition, which must stay inside the family.
    pub fn from_covers(
        base: Arc<FiniteCategory>,
        target: Arc<Observable>,
        covers: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if covers.len() != base.objects.len() {
            return Err(Error::NotCategory("one cover list per object required".into()));
        }
        let index: Vec<HashMap<&Vec<usize>, usize>> = covers
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(i, c)| (c, i)).collect())
            .collect();
        let mut restrict = Vec::with_capacity(base.arrows.len());
        for (ai, a) in base.arrows.iter().enumerate() {
            let mut table = Vec::with_capacity(covers[a.target].len());
            for h in &covers[a.target] {
                let pre: Vec<usize> = a.map.iter().map(|&q| h[q]).collect();
                match index[a.source].get(&pre) {
                    Some(&j) => table.push(j),
                    None => {
                        return Err(Error::NotSubfunctor(format!(
                            "{} restricted along {} gives {} outside the family at {}",
                            hom_label(target.target(), h),
                            base.arrow_label(ai),
                            hom_label(target.target(), &pre),
                            base.objects[a.source].name()
                        )))
                    }
                }
            }
            restrict.push(table);
        }
        let sections = covers
            .into_iter()
            .map(|cs| cs.into_iter().map(Section::Hom).collect())
            .collect();
        Ok(Presheaf {
            base,
            sections,
            restrict,
            hom_target: Some(target),
        })
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    pub fn sections(&self, object: usize) -> &[Section] {
        &self.sections[object]
    }

    pub fn all_sections(&self) -> &[Vec<Section>] {
        &self.sections
    }

    /// `X(u)(p)` for `u: θ -> ξ` and `p ∈ X(ξ)`, as an index into `X(θ)`.
    pub fn restrict(&self, arrow: usize, section: usize) -> usize {
        self.restrict[arrow][section]
    }

    pub fn restriction_table(&self, arrow: usize) -> &[usize] {
        &self.restrict[arrow]
    }

    /// The observable `Ξ` when every section is a homomorphism into it.
    pub fn hom_target(&self) -> Option<&Arc<Observable>> {
        self.hom_target.as_ref()
    }

    pub fn total_sections(&self) -> usize {
        self.sections.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_sections() == 0
    }

    pub fn section_label(&self, object: usize, section: usize) -> String {
        let obj = self.base.objects[object].name();
        match &self.sections[object][section] {
            Section::Named(n) => format!("{obj}:{n}"),
            Section::Arrow(a) => self.base.arrow_label(*a),
            Section::Hom(m) => match &self.hom_target {
                Some(t) => format!("{obj}:{}", hom_label(t.target(), m)),
                None => format!("{obj}:{m:?}"),
            },
        }
    }

    /// Homomorphism carried by a `Section::Hom`.
    pub fn hom_section(&self, object: usize, section: usize) -> Option<&[usize]> {
        match &self.sections[object][section] {
            Section::Hom(m) => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, o) in self.base.objects.iter().enumerate() {
            writeln!(f, "{}: {} sections", o.name(), self.sections[i].len())?;
        }
        Ok(())
    }
}

/// Identity and contravariant composition laws on every arrow.
pub fn validate_presheaf(x: &Presheaf) -> ValidationReport {
    let base = &x.base;
    let mut report = ValidationReport::new("presheaf");
    let mut identity = None;
    for (o, &id) in base.identities.iter().enumerate() {
        if let Some(s) = (0..x.sections[o].len()).find(|&s| x.restrict[id][s] != s) {
            identity = Some(vec![x.section_label(o, s)]);
            break;
        }
    }
    report.push(Check::from_outcome("identity", identity));

    let mut contra = None;
    'outer: for (&(v, w), &vw) in sorted(&base.composition) {
        // w: θ′ -> θ, v: θ -> ξ; X(v ∘ w) = X(w) ∘ X(v)
        let xi = base.arrows[v].target;
        for p in 0..x.sections[xi].len() {
            if x.restrict[vw][p] != x.restrict[w][x.restrict[v][p]] {
                contra = Some(vec![
                    base.arrow_label(v),
                    base.arrow_label(w),
                    x.section_label(xi, p),
                ]);
                break 'outer;
            }
        }
    }
    report.push(Check::from_outcome("contravariant", contra));
    report
}

fn sorted<K: Ord, V>(map: &HashMap<K, V>) -> Vec<(&K, &V)> {
    let mut v: Vec<_> = map.iter().collect();
    v.sort_by(|a, b| a.0.cmp(b.0));
    v
}

/// `y[ξ] = Hom(-, ξ)`, restriction by precomposition.
pub fn representable(base: &Arc<FiniteCategory>, xi: usize) -> Presheaf {
    let n = base.objects.len();
    let sections: Vec<Vec<Section>> = (0..n)
        .map(|t| base.hom[t][xi].iter().map(|&a| Section::Arrow(a)).collect())
        .collect();
    let position: Vec<HashMap<usize, usize>> = (0..n)
        .map(|t| base.hom[t][xi].iter().enumerate().map(|(i, &a)| (a, i)).collect())
        .collect();
    let restrict = base
        .arrows
        .iter()
        .enumerate()
        .map(|(w, a)| {
            base.hom[a.target][xi]
                .iter()
                .map(|&v| {
                    let vw = base.compose(v, w).expect("base is closed under composition");
                    position[a.source][&vw]
                })
                .collect()
        })
        .collect();
    Presheaf {
        base: base.clone(),
        sections,
        restrict,
        hom_target: None,
    }
}

/// `R(Ξ): ξ ↦ Hom_{O_Q}(A(ξ), Ξ)`: homomorphisms `h` from the coefficient
/// algebra of `ξ` into the target of `Ξ` with `h ∘ ξ = Ξ`.
pub fn hom_functor_r(base: &Arc<FiniteCategory>, xi_q: &Arc<Observable>, budget: Budget) -> Result<Presheaf> {
    let mut covers = Vec::with_capacity(base.objects.len());
    for o in &base.objects {
        if !same_frame(o.frame(), xi_q.frame()) {
            return Err(Error::FrameMismatch(format!(
                "{} and {} have different frames",
                o.name(),
                xi_q.name()
            )));
        }
        let homs = enumerate_homomorphisms(o.target(), xi_q.target(), budget)?;
        covers.push(
            homs.into_iter()
                .filter(|h| commutes(o, xi_q, h.map()))
                .map(|h| h.map().to_vec())
                .collect(),
        );
    }
    Presheaf::from_covers(base.clone(), xi_q.clone(), covers)
}

/// Arrow `(θ, X(u)(p)) -> (ξ, p)` of the category of elements over `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementArrow {
    pub base_arrow: usize,
    pub source: usize,
    pub target: usize,
}

/// Category of elements `G(X)` with its projection to the base.
#[derive(Debug, Clone)]
pub struct ElementsCategory {
    pairs: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    arrows: Vec<ElementArrow>,
    base: Arc<FiniteCategory>,
}

pub fn category_of_elements(x: &Presheaf) -> ElementsCategory {
    let mut pairs = Vec::new();
    let mut offsets = Vec::new();
    for (o, ss) in x.sections.iter().enumerate() {
        offsets.push(pairs.len());
        pairs.extend((0..ss.len()).map(|s| (o, s)));
    }
    let mut arrows = Vec::new();
    for (u, a) in x.base.arrows.iter().enumerate() {
        for p in 0..x.sections[a.target].len() {
            arrows.push(ElementArrow {
                base_arrow: u,
                source: offsets[a.source] + x.restrict[u][p],
                target: offsets[a.target] + p,
            });
        }
    }
    ElementsCategory {
        pairs,
        offsets,
        arrows,
        base: x.base.clone(),
    }
}

impl ElementsCategory {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn arrows(&self) -> &[ElementArrow] {
        &self.arrows
    }

    pub fn pair_index(&self, object: usize, section: usize) -> usize {
        self.offsets[object] + section
    }

    /// Projection `(ξ, p) ↦ ξ`.
    pub fn project(&self, pair: usize) -> usize {
        self.pairs[pair].0
    }

    /// The only arrows lying over identities are identities.
    pub fn fibers_discrete(&self) -> bool {
        self.arrows
            .iter()
            .filter(|e| self.base.is_identity(e.base_arrow))
            .all(|e| e.source == e.target)
    }

    /// Projection preserves endpoints and composition.
    pub fn projection_is_functorial(&self) -> bool {
        let by_key: HashMap<(usize, usize, usize), ()> = self
            .arrows
            .iter()
            .map(|e| ((e.base_arrow, e.source, e.target), ()))
            .collect();
        self.arrows.iter().all(|e| {
            let a = &self.base.arrows[e.base_arrow];
            self.project(e.source) == a.source && self.project(e.target) == a.target
        }) && self.arrows.iter().all(|f| {
            self.arrows.iter().filter(|g| g.source == f.target).all(|g| {
                self.base
                    .compose(g.base_arrow, f.base_arrow)
                    .is_some_and(|gf| by_key.contains_key(&(gf, f.source, g.target)))
            })
        })
    }

    /// Pairs receiving exactly one arrow from every pair.
    pub fn terminal_objects(&self) -> Vec<usize> {
        let n = self.pairs.len();
        (0..n)
            .filter(|&t| {
                let mut count = vec![0usize; n];
                for e in self.arrows.iter().filter(|e| e.target == t) {
                    count[e.source] += 1;
                }
                count.iter().all(|&c| c == 1)
            })
            .collect()
    }
}

/// Components `τ[ξ][p] ∈ Y(ξ)` of a natural transformation `X -> Y`.
pub type NatTrans = Vec<Vec<usize>>;

/// Every natural transformation `X -> Y` over a shared base, found by
/// backtracking over the elements of `X` with each naturality square checked
/// as soon as both of its corners are assigned. `budget` bounds search nodes.
pub fn natural_transformations(x: &Presheaf, y: &Presheaf, budget: Budget) -> Result<Vec<NatTrans>> {
    if !Arc::ptr_eq(&x.base, &y.base) {
        return Err(Error::NotCategory("presheaves over different bases".into()));
    }
    let base = &x.base;
    let elems = category_of_elements(x);
    let n = elems.pairs.len();
    // constraint (u, p at ξ): τ_θ(X(u)p) = Y(u)(τ_ξ(p))
    let mut constraints: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
    for e in &elems.arrows {
        let c = (e.base_arrow, e.source, e.target);
        constraints[e.source].push(c);
        if e.target != e.source {
            constraints[e.target].push(c);
        }
    }
    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut out = Vec::new();
    let mut meter = budget.meter("enumerating natural transformations");

    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        elems: &ElementsCategory,
        y: &Presheaf,
        constraints: &[Vec<(usize, usize, usize)>],
        assign: &mut Vec<Option<usize>>,
        out: &mut Vec<NatTrans>,
        meter: &mut crate::budget::Meter,
        objects: usize,
    ) -> Result<()> {
        meter.tick()?;
        if i == assign.len() {
            let mut tau = vec![Vec::new(); objects];
            for (k, &(o, _)) in elems.pairs.iter().enumerate() {
                tau[o].push(assign[k].unwrap());
            }
            out.push(tau);
            return Ok(());
        }
        let (obj, _) = elems.pairs[i];
        for cand in 0..y.sections[obj].len() {
            assign[i] = Some(cand);
            let ok = constraints[i].iter().all(|&(u, src, tgt)| match (assign[src], assign[tgt]) {
                (Some(a), Some(b)) => y.restrict[u][b] == a,
                _ => true,
            });
            if ok {
                go(i + 1, elems, y, constraints, assign, out, meter, objects)?;
            }
        }
        assign[i] = None;
        Ok(())
    }

    go(0, &elems, y, &constraints, &mut assign, &mut out, &mut meter, base.objects.len())?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn corpus_bases_are_categories() {
        for (name, base) in corpus::bases() {
            let r = base.validate();
            assert!(r.passed(), "{name}: {r}");
        }
    }

    #[test]
    fn representable_contains_identity() {
        for (_, base) in corpus::bases() {
            for xi in 0..base.objects().len() {
                let y = representable(&base, xi);
                assert!(validate_presheaf(&y).passed());
                assert!(y.sections(xi).contains(&Section::Arrow(base.identity(xi))));
            }
        }
    }

    #[test]
    fn single_arrow_base() {
        let base = corpus::single_arrow_base();
        assert_eq!(base.arrows().len(), 3);
        let (theta, xi) = (0, 1);
        let y = representable(&base, xi);
        let u = base.hom_set(theta, xi)[0];
        assert_eq!(y.sections(theta), &[Section::Arrow(u)]);
    }

    #[test]
    fn yoneda_counts() {
        for (name, base) in corpus::bases().into_iter().filter(|(_, b)| b.arrows().len() <= 40) {
            for t in 0..base.objects().len() {
                for x in 0..base.objects().len() {
                    let nat = natural_transformations(
                        &representable(&base, t),
                        &representable(&base, x),
                        Budget::DEFAULT,
                    )
                    .unwrap();
                    assert_eq!(nat.len(), base.hom_set(t, x).len(), "{name} {t}->{x}");
                }
            }
        }
    }

    #[test]
    fn elements_of_representable_have_terminal_identity() {
        for (_, base) in corpus::bases() {
            for xi in 0..base.objects().len() {
                let y = representable(&base, xi);
                let g = category_of_elements(&y);
                let id_pos = y
                    .sections(xi)
                    .iter()
                    .position(|s| *s == Section::Arrow(base.identity(xi)))
                    .unwrap();
                // (ξ, σ) is terminal too for every isomorphism σ into ξ
                let terminal = g.terminal_objects();
                assert!(terminal.contains(&g.pair_index(xi, id_pos)));
                for t in terminal {
                    let (o, s) = g.pairs()[t];
                    let Section::Arrow(a) = y.sections(o)[s] else { unreachable!() };
                    assert!(!base.hom_set(xi, o).is_empty(), "{}", base.arrow_label(a));
                }
                assert!(g.fibers_discrete());
                assert!(g.projection_is_functorial());
                assert_eq!(g.pairs().len(), y.total_sections());
            }
        }
    }

    #[test]
    fn elements_of_constant_presheaf_mirror_the_base() {
        let (base, _) = corpus::mo2_two_block_base();
        let g = category_of_elements(&Presheaf::constant(base.clone(), "pt"));
        assert_eq!(g.pairs().len(), base.objects().len());
        assert_eq!(g.arrows().len(), base.arrows().len());
    }

    #[test]
    fn hom_functor_on_two_frame_blocks() {
        let (base, xi_q) = corpus::mo2_two_block_base_k2();
        let r = hom_functor_r(&base, &xi_q, Budget::DEFAULT).unwrap();
        assert!(validate_presheaf(&r).passed());
        let a = base.object_index("mo2_block0[a|a_c]").unwrap();
        assert_eq!(r.sections(a).len(), 1);
        // naturality of precomposition: every restriction lands in R(Ξ)
        for (u, arrow) in base.arrows().iter().enumerate() {
            for p in 0..r.sections(arrow.target).len() {
                let h = r.hom_section(arrow.target, p).unwrap();
                let q = r.restrict(u, p);
                let pre: Vec<usize> = arrow.map.iter().map(|&e| h[e]).collect();
                assert_eq!(r.hom_section(arrow.source, q).unwrap(), pre.as_slice());
            }
        }
    }

    #[test]
    fn hom_functor_contains_identity_for_boolean_target() {
        let (base, xi) = corpus::b4_base();
        let r = hom_functor_r(&base, &xi, Budget::DEFAULT).unwrap();
        let id: Vec<usize> = xi.target().elements().collect();
        assert!(r.sections(0).contains(&Section::Hom(id)));
    }

    #[test]
    fn broken_restriction_fails_validation() {
        let (base, xi_q) = corpus::mo2_two_block_base();
        let r = hom_functor_r(&base, &xi_q, Budget::DEFAULT).unwrap();
        let mut restrict: Vec<Vec<usize>> = (0..base.arrows().len())
            .map(|u| r.restriction_table(u).to_vec())
            .collect();
        let id = base.identity(0);
        restrict[id].swap(0, 1);
        let bad = Presheaf::new(base.clone(), r.all_sections().to_vec(), restrict).unwrap();
        let report = validate_presheaf(&bad);
        assert_eq!(report.first_failure().unwrap().name, "identity");
    }
}
