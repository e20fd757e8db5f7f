//! Systems of Boolean covers `ψ_ξ: A(ξ) -> Ξ`, their pullbacks and pasting
//! maps, and the end-to-end verdict on whether a system represents `Ξ`
//! faithfully.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::adjunction::{counit, counit_is_iso, IsoReport};
use crate::algebra::{enumerate_homomorphisms, hom_label, validate_homomorphism, EventAlgebra, EventHomomorphism};
use crate::budget::Budget;
use crate::corpus::library_base;
use crate::error::{Error, Result};
use crate::format::{Library, SystemSpec};
use crate::observable::{commutes, Observable};
use crate::presheaf::{FiniteCategory, Presheaf};
use crate::report::{Check, ValidationReport};

/// A precomposition-closed family of covers: a subfunctor of `R(Ξ)`.
#[derive(Debug, Clone)]
pub struct PrelocalizationSystem {
    name: String,
    base: Arc<FiniteCategory>,
    target: Arc<Observable>,
    covers: Vec<Vec<Vec<usize>>>,
    generators: Vec<(usize, Vec<usize>)>,
}

fn in_hom_functor(base: &FiniteCategory, target: &Observable, object: usize, map: &[usize]) -> Option<String> {
    let obj = base.object(object);
    let label = format!("{}:{}", obj.name(), hom_label(target.target(), map));
    let Ok(h) = EventHomomorphism::new(obj.target().clone(), target.target().clone(), map.to_vec()) else {
        return Some(format!("{}: map is not total on {}", obj.name(), obj.target().name()));
    };
    if let Some(c) = validate_homomorphism(&h).first_failure() {
        return Some(format!("{label} ({})", c.line()));
    }
    if !commutes(obj, target, map) {
        return Some(format!("{label} (triangle does not commute)"));
    }
    None
}

impl PrelocalizationSystem {
    /// Takes `covers` as given and checks that it is a subfunctor of `R(Ξ)`.
    pub fn new(
        name: impl Into<String>,
        base: Arc<FiniteCategory>,
        target: Arc<Observable>,
        covers: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if covers.len() != base.objects().len() {
            return Err(Error::NotCategory("one cover list per object required".into()));
        }
        for (o, cs) in covers.iter().enumerate() {
            for c in cs {
                if let Some(why) = in_hom_functor(&base, &target, o, c) {
                    return Err(Error::NotInHomFunctor(why));
                }
            }
        }
        let mut covers = covers;
        for cs in &mut covers {
            cs.sort();
            cs.dedup();
        }
        Presheaf::from_covers(base.clone(), target.clone(), covers.clone())?;
        let generators = covers
            .iter()
            .enumerate()
            .flat_map(|(o, cs)| cs.iter().map(move |c| (o, c.clone())))
            .collect();
        Ok(PrelocalizationSystem {
            name: name.into(),
            base,
            target,
            covers,
            generators,
        })
    }

    /// Resolves a system file against a library. The base is every Boolean
    /// observable on the frame of the system's target.
    pub fn from_library(lib: &Library, spec: &SystemSpec, budget: Budget) -> Result<Self> {
        let target = lib.require_observable(&spec.target)?;
        let base = library_base(lib, &target, budget)?;
        let mut generators = Vec::new();
        for (obj, hom) in &spec.covers {
            let o = base.object_index(obj).ok_or_else(|| Error::Unknown {
                kind: "base object",
                name: obj.clone(),
            })?;
            let h = lib.require_hom(hom)?;
            if h.source().name() != base.object(o).target().name() {
                return Err(Error::AlgebraMismatch {
                    expected: base.object(o).target().name().to_string(),
                    found: h.source().name().to_string(),
                });
            }
            if h.target().name() != target.target().name() {
                return Err(Error::AlgebraMismatch {
                    expected: target.target().name().to_string(),
                    found: h.target().name().to_string(),
                });
            }
            generators.push((o, h.map().to_vec()));
        }
        generate_system(spec.name.clone(), base, target, &generators)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    pub fn target(&self) -> &Arc<Observable> {
        &self.target
    }

    /// Covers at `object`, sorted.
    pub fn covers(&self, object: usize) -> &[Vec<usize>] {
        &self.covers[object]
    }

    pub fn all_covers(&self) -> impl Iterator<Item = (usize, &Vec<usize>)> {
        self.covers
            .iter()
            .enumerate()
            .flat_map(|(o, cs)| cs.iter().map(move |c| (o, c)))
    }

    pub fn len(&self) -> usize {
        self.covers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn generators(&self) -> &[(usize, Vec<usize>)] {
        &self.generators
    }

    pub fn contains(&self, object: usize, map: &[usize]) -> bool {
        self.covers[object].binary_search_by(|c| c.as_slice().cmp(map)).is_ok()
    }

    pub fn cover_label(&self, object: usize, map: &[usize]) -> String {
        format!("{}:{}", self.base.object(object).name(), hom_label(self.target.target(), map))
    }

    pub fn cover_hom(&self, object: usize, map: &[usize]) -> EventHomomorphism {
        EventHomomorphism::new(
            self.base.object(object).target().clone(),
            self.target.target().clone(),
            map.to_vec(),
        )
        .expect("covers are total")
    }

    /// The system as a presheaf with restriction by precomposition.
    pub fn presheaf(&self) -> Presheaf {
        Presheaf::from_covers(self.base.clone(), self.target.clone(), self.covers.clone())
            .expect("systems are closed under precomposition")
    }

    /// Removing any cover that is not a generator leaves a family that is no
    /// longer closed under precomposition.
    pub fn is_minimal(&self) -> bool {
        let generated: BTreeSet<(usize, &Vec<usize>)> =
            self.generators.iter().map(|(o, c)| (*o, c)).collect();
        self.all_covers()
            .filter(|(o, c)| !generated.contains(&(*o, *c)))
            .all(|(o, c)| {
                let mut reduced = self.covers.clone();
                reduced[o].retain(|d| d != c);
                Presheaf::from_covers(self.base.clone(), self.target.clone(), reduced).is_err()
            })
    }
}

/// Smallest subfunctor of `R(Ξ)` containing the generators.
pub fn generate_system(
    name: impl Into<String>,
    base: Arc<FiniteCategory>,
    target: Arc<Observable>,
    generators: &[(usize, Vec<usize>)],
) -> Result<PrelocalizationSystem> {
    let n = base.objects().len();
    let mut seen: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); n];
    let mut queue = Vec::new();
    for (o, g) in generators {
        if *o >= n {
            return Err(Error::Unknown {
                kind: "base object",
                name: o.to_string(),
            });
        }
        if let Some(why) = in_hom_functor(&base, &target, *o, g) {
            return Err(Error::NotInHomFunctor(why));
        }
        if seen[*o].insert(g.clone()) {
            queue.push((*o, g.clone()));
        }
    }
    while let Some((o, c)) = queue.pop() {
        for t in 0..n {
            for &v in base.hom_set(t, o) {
                let pre: Vec<usize> = base.arrow(v).map.iter().map(|&q| c[q]).collect();
                if seen[t].insert(pre.clone()) {
                    queue.push((t, pre));
                }
            }
        }
    }
    let mut gens: Vec<(usize, Vec<usize>)> = generators.to_vec();
    gens.sort();
    gens.dedup();
    Ok(PrelocalizationSystem {
        name: name.into(),
        base,
        target,
        covers: seen.into_iter().map(|s| s.into_iter().collect()).collect(),
        generators: gens,
    })
}

/// `A(ξ) ×_Ξ A(ξ′)` as the set of pairs with equal images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverPullback {
    left: EventHomomorphism,
    right: EventHomomorphism,
    carrier: Vec<(usize, usize)>,
}

pub fn pullback(psi1: &EventHomomorphism, psi2: &EventHomomorphism) -> Result<CoverPullback> {
    if psi1.target() != psi2.target() {
        return Err(Error::AlgebraMismatch {
            expected: psi1.target().name().to_string(),
            found: psi2.target().name().to_string(),
        });
    }
    let carrier = psi1
        .source()
        .elements()
        .flat_map(|x| psi2.source().elements().map(move |y| (x, y)))
        .filter(|&(x, y)| psi1.apply(x) == psi2.apply(y))
        .collect();
    Ok(CoverPullback {
        left: psi1.clone(),
        right: psi2.clone(),
        carrier,
    })
}

impl CoverPullback {
    pub fn carrier(&self) -> &[(usize, usize)] {
        &self.carrier
    }

    pub fn carrier_ids(&self) -> Vec<(String, String)> {
        self.carrier
            .iter()
            .map(|&(x, y)| (self.left.source().id(x).to_string(), self.right.source().id(y).to_string()))
            .collect()
    }

    pub fn square_commutes(&self) -> bool {
        self.carrier
            .iter()
            .all(|&(x, y)| self.left.apply(x) == self.right.apply(y))
    }

    /// Every cone `f: C -> A(ξ)`, `g: C -> A(ξ′)` with `ψ ∘ f = ψ′ ∘ g`, for
    /// `C` ranging over `test_objects` and `f`, `g` over homomorphisms, factors
    /// through the carrier by exactly one map. Returns the check and the
    /// number of cones tried.
    pub fn universal_property(&self, test_objects: &[Arc<EventAlgebra>], budget: Budget) -> Result<(Check, usize)> {
        let index: HashMap<(usize, usize), usize> =
            self.carrier.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut cones = 0;
        for c in test_objects {
            let fs = enumerate_homomorphisms(c, self.left.source(), budget)?;
            let gs = enumerate_homomorphisms(c, self.right.source(), budget)?;
            for f in &fs {
                for g in &gs {
                    if !c.elements().all(|e| self.left.apply(f.apply(e)) == self.right.apply(g.apply(e))) {
                        continue;
                    }
                    cones += 1;
                    // the mediating map is forced pointwise; it exists iff
                    // every pair lands in the carrier
                    let mediating: Option<Vec<usize>> =
                        c.elements().map(|e| index.get(&(f.apply(e), g.apply(e))).copied()).collect();
                    let ok = mediating.is_some_and(|u| {
                        u.iter().enumerate().all(|(e, &i)| {
                            self.carrier[i] == (f.apply(e), g.apply(e))
                        })
                    });
                    if !ok {
                        return Ok((Check::fail("universal", vec![c.name().to_string(), f.label(), g.label()]), cones));
                    }
                }
            }
        }
        Ok((Check::pass("universal"), cones))
    }
}

/// `Ω_{ξ,ξ′} = ψ_{ξξ′} ∘ ψ_{ξ′ξ}^{-1}`: from the overlap inside `A(ξ′)` to
/// the overlap inside `A(ξ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PastingMap {
    /// `(y, x)` with `y ∈ A(ξ′)`, `x ∈ A(ξ)`, ascending in `y`.
    pairs: Vec<(usize, usize)>,
}

pub fn pasting_map(psi1: &EventHomomorphism, psi2: &EventHomomorphism) -> Result<PastingMap> {
    for psi in [psi1, psi2] {
        if !psi.is_injective() {
            return Err(Error::NotInvertible(format!("{}->{}{}", psi.source().name(), psi.target().name(), psi.label())));
        }
    }
    let pb = pullback(psi1, psi2)?;
    let mut pairs: Vec<(usize, usize)> = pb.carrier.iter().map(|&(x, y)| (y, x)).collect();
    pairs.sort_unstable();
    Ok(PastingMap { pairs })
}

impl PastingMap {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn apply(&self, y: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&y, |&(d, _)| d)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    pub fn domain(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(y, _)| y).collect()
    }

    pub fn codomain(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.pairs.iter().map(|&(_, x)| x).collect();
        c.sort_unstable();
        c
    }

    pub fn is_bijection(&self) -> bool {
        let mut c = self.codomain();
        c.dedup();
        c.len() == self.pairs.len()
    }
}

/// The three pasting conditions over the injective covers of a system:
/// `Ω_{ξ,ξ} = 1`, `Ω_{ξ,ξ′} ∘ Ω_{ξ′,ξ} = 1` on overlaps larger than `{0}`,
/// and `Ω_{ξ,ξ′} ∘ Ω_{ξ′,ξ″} = Ω_{ξ,ξ″}` on triple overlaps larger than
/// `{0}`. Non-injective covers are skipped and listed in the notes.
pub fn cocycle_check(system: &PrelocalizationSystem) -> ValidationReport {
    let mut report = ValidationReport::new(format!("{}:cocycle", system.name));
    let mut homs = Vec::new();
    let mut labels = Vec::new();
    let mut skipped = Vec::new();
    for (o, c) in system.all_covers() {
        let h = system.cover_hom(o, c);
        if h.is_injective() {
            homs.push(h);
            labels.push(system.cover_label(o, c));
        } else {
            skipped.push(system.cover_label(o, c));
        }
    }
    let n = homs.len();
    let target = system.target.target();
    let bottom = target.bottom();
    let images: Vec<Vec<bool>> = homs
        .iter()
        .map(|h| {
            let mut im = vec![false; target.len()];
            for &y in h.map() {
                im[y] = true;
            }
            im
        })
        .collect();
    let nonzero = |sets: &[usize]| target.elements().any(|e| e != bottom && sets.iter().all(|&i| images[i][e]));

    let omega: Vec<Vec<PastingMap>> = (0..n)
        .map(|i| (0..n).map(|j| pasting_map(&homs[i], &homs[j]).expect("injective covers")).collect())
        .collect();

    let mut identity = None;
    for i in 0..n {
        if omega[i][i].pairs.iter().any(|&(y, x)| x != y) || omega[i][i].pairs.len() != homs[i].source().len() {
            identity = Some(vec![labels[i].clone()]);
            break;
        }
    }
    report.push(Check::from_outcome("identity", identity));

    let mut inverse = None;
    'inv: for i in 0..n {
        for j in 0..n {
            if i == j || !nonzero(&[i, j]) {
                continue;
            }
            if !omega[i][j].is_bijection() {
                inverse = Some(vec![labels[i].clone(), labels[j].clone()]);
                break 'inv;
            }
            for &(x, _) in &omega[j][i].pairs {
                // x ∈ A(ξ) goes to A(ξ′) and back
                let back = omega[j][i].apply(x).and_then(|y| omega[i][j].apply(y));
                if back != Some(x) {
                    inverse = Some(vec![labels[i].clone(), labels[j].clone(), homs[i].source().id(x).to_string()]);
                    break 'inv;
                }
            }
        }
    }
    report.push(Check::from_outcome("inverse", inverse));

    let mut triple = None;
    let mut triples = 0usize;
    'tri: for i in 0..n {
        for j in 0..n {
            if !nonzero(&[i, j]) {
                continue;
            }
            for k in 0..n {
                if !nonzero(&[i, j, k]) {
                    continue;
                }
                triples += 1;
                for y in homs[k].source().elements() {
                    let e = homs[k].apply(y);
                    if !(images[i][e] && images[j][e]) {
                        continue;
                    }
                    let via = omega[j][k].apply(y).and_then(|z| omega[i][j].apply(z));
                    if via.is_none() || via != omega[i][k].apply(y) {
                        triple = Some(vec![
                            labels[i].clone(),
                            labels[j].clone(),
                            labels[k].clone(),
                            homs[k].source().id(y).to_string(),
                        ]);
                        break 'tri;
                    }
                }
            }
        }
    }
    report.push(Check::from_outcome("triple", triple));
    report.notes.push(format!("injective covers: {n}, triples checked: {triples}"));
    if !skipped.is_empty() {
        let shown: Vec<&str> = skipped.iter().take(3).map(String::as_str).collect();
        let more = if skipped.len() > 3 { " ..." } else { "" };
        report
            .notes
            .push(format!("skipped non-injective covers: {} ({}{more})", skipped.len(), shown.join(" ")));
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The empty system: vacuously a localization system.
    Degenerate,
    Localization,
    PrelocalizationOnly,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Degenerate => "degenerate",
            Verdict::Localization => "localization",
            Verdict::PrelocalizationOnly => "prelocalization-only",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizationReport {
    pub verdict: Verdict,
    pub cocycle: ValidationReport,
    pub structure: Check,
}

/// Localization requires the cocycle conditions and that every cover passes
/// the homomorphism conditions.
pub fn is_localization_system(system: &PrelocalizationSystem) -> LocalizationReport {
    let cocycle = cocycle_check(system);
    let mut structure = None;
    for (o, c) in system.all_covers() {
        if let Some(f) = validate_homomorphism(&system.cover_hom(o, c)).first_failure() {
            let mut w = vec![system.cover_label(o, c), f.name.clone()];
            w.extend(f.witness.clone().unwrap_or_default());
            structure = Some(w);
            break;
        }
    }
    let structure = Check::from_outcome("covers-preserve-structure", structure);
    let verdict = if system.is_empty() {
        Verdict::Degenerate
    } else if cocycle.passed() && structure.passed() {
        Verdict::Localization
    } else {
        Verdict::PrelocalizationOnly
    };
    LocalizationReport {
        verdict,
        cocycle,
        structure,
    }
}

/// Localization verdict plus the counit criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullReport {
    pub system: String,
    pub target: String,
    pub covers: usize,
    pub generators: usize,
    pub localization: LocalizationReport,
    pub iso: IsoReport,
}

impl FullReport {
    /// The system faithfully represents its target.
    pub fn is_iso(&self) -> bool {
        self.localization.verdict != Verdict::PrelocalizationOnly && self.iso.is_iso()
    }

    pub fn verdict(&self) -> &'static str {
        if self.is_iso() {
            "ISO"
        } else {
            "NOT-ISO"
        }
    }

    /// `PASS|FAIL <check> <witness...>`, one per check.
    pub fn lines(&self) -> Vec<String> {
        let mut out = self.localization.cocycle.lines();
        let prefix = |c: &Check| {
            let mut c = c.clone();
            c.name = format!("{}:{}", self.system, c.name);
            c.line()
        };
        out.push(prefix(&self.localization.structure));
        out.push(format!(
            "{} {}:localization {}",
            if self.localization.verdict == Verdict::PrelocalizationOnly { "FAIL" } else { "PASS" },
            self.system,
            self.localization.verdict
        ));
        for c in self.iso.checks() {
            out.push(prefix(c));
        }
        out.push(format!(
            "{} {}:verdict {}",
            if self.is_iso() { "PASS" } else { "FAIL" },
            self.system,
            self.verdict()
        ));
        out
    }
}

impl fmt::Display for FullReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "system {} over {}", self.system, self.target)?;
        writeln!(f, "covers: {} (generated by {})", self.covers, self.generators)?;
        write!(f, "{}", self.localization.cocycle)?;
        match &self.localization.structure.witness {
            None => writeln!(f, "covers preserve structure: yes")?,
            Some(w) => writeln!(f, "covers preserve structure: no (witness {})", w.join(" "))?,
        }
        writeln!(f, "localization verdict: {}", self.localization.verdict)?;
        write!(f, "{}", self.iso)?;
        writeln!(f, "verdict: {}", self.verdict())
    }
}

/// Builds the presheaf of covers, its colimit and counit, and decides
/// whether the counit is an isomorphism.
pub fn boolean_representation_verdict(system: &PrelocalizationSystem) -> Result<FullReport> {
    let localization = is_localization_system(system);
    if localization.verdict == Verdict::PrelocalizationOnly {
        let why = localization
            .cocycle
            .first_failure()
            .or(Some(&localization.structure).filter(|c| !c.passed()))
            .map(Check::line)
            .unwrap_or_default();
        return Err(Error::NotLocalization(why));
    }
    let cm = counit(&system.presheaf(), &system.target)?;
    Ok(FullReport {
        system: system.name.clone(),
        target: system.target.name().to_string(),
        covers: system.len(),
        generators: system.generators.len(),
        localization,
        iso: counit_is_iso(&cm),
    })
}
