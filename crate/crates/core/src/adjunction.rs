//! The left adjoint `L` as a quotient of `(section, element)` generators,
//! its counit `ε_Ξ`, and the exhaustive check of `Nat(X, R(Ξ)) ≅ Hom(LX, Ξ)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::hom_label;
use crate::algebra::{validate_homomorphism, EventHomomorphism};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::observable::{commutes, Observable};
use crate::presheaf::{category_of_elements, hom_functor_r, natural_transformations, representable, FiniteCategory, Presheaf};
use crate::report::Check;
use crate::unionfind::UnionFind;

/// Generator `p ⊗ q`: section `section` of `X(object)` paired with element
/// `element` of `A(object)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub object: usize,
    pub section: usize,
    pub element: usize,
}

/// `L(X)` as a set: generators modulo `X(v)p ⊗ q′ ~ p ⊗ v(q′)`.
#[derive(Debug, Clone)]
pub struct ColimitCarrier {
    presheaf: Presheaf,
    generators: Vec<Generator>,
    offsets: Vec<Vec<usize>>,
    relation: Vec<(usize, usize)>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

/// Builds the quotient with union-find. Generators are ordered by object,
/// section and element; class `i` is the class of the `i`-th smallest class
/// minimum.
pub fn colimit(x: &Presheaf) -> ColimitCarrier {
    let base = x.base();
    let mut generators = Vec::new();
    let mut offsets = Vec::with_capacity(base.objects().len());
    for (o, obj) in base.objects().iter().enumerate() {
        let n = obj.target().len();
        let mut row = Vec::with_capacity(x.sections(o).len());
        for s in 0..x.sections(o).len() {
            row.push(generators.len());
            generators.extend((0..n).map(|e| Generator {
                object: o,
                section: s,
                element: e,
            }));
        }
        offsets.push(row);
    }
    let mut relation = Vec::new();
    for (v, arrow) in base.arrows().iter().enumerate() {
        for p in 0..x.sections(arrow.target).len() {
            let pv = x.restrict(v, p);
            for (q, &vq) in arrow.map.iter().enumerate() {
                relation.push((offsets[arrow.source][pv] + q, offsets[arrow.target][p] + vq));
            }
        }
    }
    let mut uf = UnionFind::new(generators.len());
    for &(a, b) in &relation {
        uf.union(a, b);
    }
    let (class_of, classes) = uf.classes();
    ColimitCarrier {
        presheaf: x.clone(),
        generators,
        offsets,
        relation,
        class_of,
        classes,
    }
}

impl ColimitCarrier {
    pub fn presheaf(&self) -> &Presheaf {
        &self.presheaf
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_index(&self, object: usize, section: usize, element: usize) -> usize {
        self.offsets[object][section] + element
    }

    /// Generating pairs of the relation, as generator indices.
    pub fn relation(&self) -> &[(usize, usize)] {
        &self.relation
    }

    /// Members of each class, ascending.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, generator: usize) -> usize {
        self.class_of[generator]
    }

    pub fn class_of_pair(&self, object: usize, section: usize, element: usize) -> usize {
        self.class_of[self.generator_index(object, section, element)]
    }

    /// `(<p-name>,<q-id>)`.
    pub fn generator_label(&self, g: usize) -> String {
        let Generator { object, section, element } = self.generators[g];
        let alg = self.presheaf.base().object(object).target();
        format!("({},{})", self.presheaf.section_label(object, section), alg.id(element))
    }

    /// Label of the class's smallest generator.
    pub fn class_label(&self, class: usize) -> String {
        self.generator_label(self.classes[class][0])
    }

    /// One line per class: `class <id> : (<p-name>,<q-id>) ...`.
    pub fn dump(&self) -> Vec<String> {
        self.classes
            .iter()
            .enumerate()
            .map(|(i, members)| {
                let gens: Vec<String> = members.iter().map(|&g| self.generator_label(g)).collect();
                format!("class {i} : {}", gens.join(" "))
            })
            .collect()
    }
}

/// `ε_Ξ`: class of `p ⊗ q` ↦ `p(q)`.
#[derive(Debug, Clone)]
pub struct CounitMap {
    carrier: ColimitCarrier,
    target: Arc<Observable>,
    value: Vec<usize>,
}

fn check_hom_sections(x: &Presheaf, xi: &Arc<Observable>) -> Result<()> {
    let base = x.base();
    for (o, obj) in base.objects().iter().enumerate() {
        for s in 0..x.sections(o).len() {
            let label = x.section_label(o, s);
            let Some(map) = x.hom_section(o, s) else {
                return Err(Error::NotHomSections(format!("{label} is not a homomorphism")));
            };
            let h = EventHomomorphism::new(obj.target().clone(), xi.target().clone(), map.to_vec())
                .map_err(|e| Error::NotHomSections(format!("{label}: {e}")))?;
            if let Some(c) = validate_homomorphism(&h).first_failure() {
                return Err(Error::NotHomSections(format!("{label}: {}", c.line())));
            }
            if !commutes(obj, xi, map) {
                return Err(Error::NotHomSections(format!(
                    "{label} does not commute with {}",
                    xi.name()
                )));
            }
        }
    }
    Ok(())
}

/// Builds the counit on `colimit(x)` for a subfunctor `x` of `R(Ξ)`.
pub fn counit(x: &Presheaf, xi: &Arc<Observable>) -> Result<CounitMap> {
    check_hom_sections(x, xi)?;
    let carrier = colimit(x);
    let mut value = Vec::with_capacity(carrier.num_classes());
    for members in &carrier.classes {
        let eval = |g: usize| {
            let Generator { object, section, element } = carrier.generators[g];
            x.hom_section(object, section).unwrap()[element]
        };
        let first = eval(members[0]);
        if let Some(&clash) = members.iter().find(|&&g| eval(g) != first) {
            return Err(Error::IllFormedSubfunctor(format!(
                "{} evaluates to {} but {} evaluates to {}",
                carrier.generator_label(members[0]),
                xi.target().id(first),
                carrier.generator_label(clash),
                xi.target().id(eval(clash))
            )));
        }
        value.push(first);
    }
    Ok(CounitMap {
        carrier,
        target: xi.clone(),
        value,
    })
}

impl CounitMap {
    pub fn carrier(&self) -> &ColimitCarrier {
        &self.carrier
    }

    pub fn target(&self) -> &Arc<Observable> {
        &self.target
    }

    /// Element of the target algebra assigned to each class.
    pub fn values(&self) -> &[usize] {
        &self.value
    }

    /// The component family `(ξ, p) ↦ (q ↦ ε(p ⊗ q))`.
    pub fn components(&self) -> Vec<Vec<Vec<usize>>> {
        let x = &self.carrier.presheaf;
        x.base()
            .objects()
            .iter()
            .enumerate()
            .map(|(o, obj)| {
                (0..x.sections(o).len())
                    .map(|s| {
                        obj.target()
                            .elements()
                            .map(|q| self.value[self.carrier.class_of_pair(o, s, q)])
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

/// The three criteria for `ε_Ξ` to be an isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoReport {
    pub classes: usize,
    pub surjective: Check,
    pub injective: Check,
    pub structure: Check,
}

impl IsoReport {
    pub fn is_iso(&self) -> bool {
        self.surjective.passed() && self.injective.passed() && self.structure.passed()
    }

    pub fn checks(&self) -> [&Check; 3] {
        [&self.surjective, &self.injective, &self.structure]
    }
}

impl fmt::Display for IsoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "classes: {}", self.classes)?;
        for c in self.checks() {
            match &c.witness {
                None => writeln!(f, "{}: yes", c.name)?,
                Some(w) => writeln!(f, "{}: no (witness {})", c.name, w.join(" "))?,
            }
        }
        Ok(())
    }
}

/// Surjectivity, injectivity and structure preservation of the counit.
///
/// Structure on classes is read through representatives: for every section
/// `p` the map `q ↦ ε(p ⊗ q)` must satisfy conditions `[a]`–`[d]`. When the
/// counit is a bijection the order must also be reflected: `ε(c) ≤ ε(c′)`
/// only if `c ≤ c′` in the order generated by representatives.
pub fn counit_is_iso(cm: &CounitMap) -> IsoReport {
    let carrier = &cm.carrier;
    let x = &carrier.presheaf;
    let alg = cm.target.target();

    let mut hit = vec![false; alg.len()];
    for &v in &cm.value {
        hit[v] = true;
    }
    let surjective = Check::from_outcome(
        "surjective",
        alg.elements().find(|&e| !hit[e]).map(|e| vec![alg.id(e).to_string()]),
    );

    let mut first_with: HashMap<usize, usize> = HashMap::new();
    let mut clash = None;
    for (c, &v) in cm.value.iter().enumerate() {
        if let Some(&d) = first_with.get(&v) {
            clash = Some(vec![carrier.class_label(d), carrier.class_label(c), alg.id(v).to_string()]);
            break;
        }
        first_with.insert(v, c);
    }
    let injective = Check::from_outcome("injective", clash);

    let mut structure = None;
    let components = cm.components();
    'outer: for (o, obj) in x.base().objects().iter().enumerate() {
        for (s, comp) in components[o].iter().enumerate() {
            let h = EventHomomorphism::new(obj.target().clone(), alg.clone(), comp.clone())
                .expect("components are total");
            if let Some(c) = validate_homomorphism(&h).first_failure() {
                let mut w = vec![x.section_label(o, s), c.name.clone()];
                w.extend(c.witness.clone().unwrap_or_default());
                structure = Some(w);
                break 'outer;
            }
        }
    }
    if structure.is_none() && surjective.passed() && injective.passed() {
        structure = order_reflection_failure(cm);
    }
    IsoReport {
        classes: carrier.num_classes(),
        surjective,
        injective,
        structure: Check::from_outcome("structure-preserving", structure),
    }
}

fn order_reflection_failure(cm: &CounitMap) -> Option<Vec<String>> {
    let carrier = &cm.carrier;
    let x = &carrier.presheaf;
    let n = carrier.num_classes();
    let mut le = vec![vec![false; n]; n];
    for (o, obj) in x.base().objects().iter().enumerate() {
        let a = obj.target();
        for s in 0..x.sections(o).len() {
            for q in a.elements() {
                for r in a.elements() {
                    if a.leq(q, r) {
                        le[carrier.class_of_pair(o, s, q)][carrier.class_of_pair(o, s, r)] = true;
                    }
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if le[i][k] {
                for j in 0..n {
                    if le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
    }
    let alg = cm.target.target();
    for c in 0..n {
        for d in 0..n {
            if alg.leq(cm.value[c], cm.value[d]) && !le[c][d] {
                return Some(vec![
                    "order".to_string(),
                    alg.id(cm.value[c]).to_string(),
                    alg.id(cm.value[d]).to_string(),
                ]);
            }
        }
    }
    None
}

/// Checks `τ_ξ(p) ∘ A(u) = τ_ξ′(X(u)p)` along every arrow of the category of
/// elements. `family[ξ][p]` is a map `A(ξ) -> Ξ`.
pub fn cocone_check(x: &Presheaf, xi: &Observable, family: &[Vec<Vec<usize>>]) -> Check {
    let base = x.base();
    let elems = category_of_elements(x);
    for e in elems.arrows() {
        let arrow = base.arrow(e.base_arrow);
        let (src_obj, src_sec) = elems.pairs()[e.source];
        let (tgt_obj, tgt_sec) = elems.pairs()[e.target];
        let big = &family[tgt_obj][tgt_sec];
        let pulled: Vec<usize> = arrow.map.iter().map(|&q| big[q]).collect();
        if pulled != family[src_obj][src_sec] {
            return Check::fail(
                "cocone",
                vec![
                    base.arrow_label(e.base_arrow),
                    x.section_label(tgt_obj, tgt_sec),
                    hom_label(xi.target(), &pulled),
                    hom_label(xi.target(), &family[src_obj][src_sec]),
                ],
            );
        }
    }
    Check::pass("cocone")
}

/// Both sides of `Nat(X, R(Ξ)) ≅ Hom(LX, Ξ)` and the comparison map
/// `τ ↦ (p ⊗ q ↦ τ_ξ(p)(q))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionReport {
    pub nat_count: usize,
    pub hom_count: usize,
    /// `(index in Nat, index in Hom)` for each transformation.
    pub correspondence: Vec<(usize, usize)>,
    pub counterexample: Option<String>,
}

impl BijectionReport {
    pub fn is_bijection(&self) -> bool {
        self.counterexample.is_none() && self.nat_count == self.hom_count
    }
}

impl fmt::Display for BijectionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|Nat| = {}, |Hom| = {}", self.nat_count, self.hom_count)?;
        match &self.counterexample {
            None if self.is_bijection() => write!(f, ", bijection"),
            None => write!(f, ", cardinalities differ"),
            Some(c) => write!(f, ", not a bijection: {c}"),
        }
    }
}

/// Maps `LX -> Ξ` whose restriction to every section lies in `R(Ξ)`:
/// functions on classes, found by choosing one hom per section so that
/// shared classes agree.
pub fn colimit_maps(carrier: &ColimitCarrier, r: &Presheaf, budget: Budget) -> Result<Vec<Vec<usize>>> {
    let x = &carrier.presheaf;
    let pairs: Vec<(usize, usize)> = (0..x.base().objects().len())
        .flat_map(|o| (0..x.sections(o).len()).map(move |s| (o, s)))
        .collect();
    let mut value: Vec<Option<usize>> = vec![None; carrier.num_classes()];
    let mut out = Vec::new();
    let mut meter = budget.meter("enumerating maps out of the colimit");

    fn go(
        i: usize,
        pairs: &[(usize, usize)],
        carrier: &ColimitCarrier,
        r: &Presheaf,
        value: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<usize>>,
        meter: &mut crate::budget::Meter,
    ) -> Result<()> {
        meter.tick()?;
        let Some(&(o, s)) = pairs.get(i) else {
            out.push(value.iter().map(|v| v.expect("every class has a generator")).collect());
            return Ok(());
        };
        for cand in 0..r.sections(o).len() {
            let h = r.hom_section(o, cand).unwrap();
            let classes: Vec<usize> = (0..h.len()).map(|q| carrier.class_of_pair(o, s, q)).collect();
            if classes.iter().zip(h).any(|(&c, &y)| value[c].is_some_and(|v| v != y)) {
                continue;
            }
            let fresh: Vec<usize> = classes
                .iter()
                .zip(h)
                .filter_map(|(&c, &y)| {
                    if value[c].is_none() {
                        value[c] = Some(y);
                        Some(c)
                    } else {
                        None
                    }
                })
                .collect();
            go(i + 1, pairs, carrier, r, value, out, meter)?;
            for c in fresh {
                value[c] = None;
            }
        }
        Ok(())
    }

    go(0, &pairs, carrier, r, &mut value, &mut out, &mut meter)?;
    out.sort();
    Ok(out)
}

/// Enumerates both sides and checks that `τ ↦ f_τ` is a well-defined
/// bijection.
pub fn adjunction_bijection_check(x: &Presheaf, xi: &Arc<Observable>, budget: Budget) -> Result<BijectionReport> {
    let r = hom_functor_r(x.base(), xi, budget)?;
    let nat = natural_transformations(x, &r, budget)?;
    let carrier = colimit(x);
    let homs = colimit_maps(&carrier, &r, budget)?;
    let index: HashMap<&Vec<usize>, usize> = homs.iter().enumerate().map(|(i, f)| (f, i)).collect();

    let mut correspondence = Vec::with_capacity(nat.len());
    let mut used = vec![false; homs.len()];
    let mut counterexample = None;
    'tau: for (t, tau) in nat.iter().enumerate() {
        let mut f: Vec<Option<usize>> = vec![None; carrier.num_classes()];
        for (g, gen) in carrier.generators.iter().enumerate() {
            let h = r.hom_section(gen.object, tau[gen.object][gen.section]).unwrap();
            let c = carrier.class_of[g];
            let y = h[gen.element];
            match f[c] {
                Some(prev) if prev != y => {
                    counterexample = Some(format!(
                        "transformation {t} is not constant on class {}",
                        carrier.class_label(c)
                    ));
                    break 'tau;
                }
                _ => f[c] = Some(y),
            }
        }
        let f: Vec<usize> = f.into_iter().map(Option::unwrap).collect();
        match index.get(&f) {
            Some(&j) if !used[j] => {
                used[j] = true;
                correspondence.push((t, j));
            }
            Some(_) => {
                counterexample = Some(format!("transformation {t} collides with an earlier one"));
                break;
            }
            None => {
                counterexample = Some(format!("transformation {t} induces a map outside Hom(LX, Ξ)"));
                break;
            }
        }
    }
    Ok(BijectionReport {
        nat_count: nat.len(),
        hom_count: homs.len(),
        correspondence,
        counterexample,
    })
}

/// `L y[ξ] ≅ A(ξ)`: the colimit of the representable has one class per
/// element and `1_ξ ⊗ q` meets every class exactly once.
pub fn representable_colimit_check(base: &Arc<FiniteCategory>, xi: usize) -> Check {
    let y = representable(base, xi);
    let carrier = colimit(&y);
    let alg = base.object(xi).target();
    let name = format!("representable-colimit {}", base.object(xi).name());
    if carrier.num_classes() != alg.len() {
        return Check::fail(
            name,
            vec![format!("{} classes", carrier.num_classes()), format!("{} elements", alg.len())],
        );
    }
    let id = y
        .sections(xi)
        .iter()
        .position(|s| *s == crate::presheaf::Section::Arrow(base.identity(xi)))
        .expect("identity section");
    let mut seen = vec![false; carrier.num_classes()];
    for q in alg.elements() {
        let c = carrier.class_of_pair(xi, id, q);
        if std::mem::replace(&mut seen[c], true) {
            return Check::fail(name, vec![alg.id(q).to_string()]);
        }
    }
    Check::pass(name)
}
