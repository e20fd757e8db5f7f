//! Bundled instances and naive reference oracles.
//!
//! The instance files under `corpus/` are compiled in, so the loaders below
//! and the command-line tool read exactly the same data. The `oracle_*`
//! functions share no code with the library paths they certify.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{enumerate_blocks, AlgebraSpec, EventAlgebra, EventHomomorphism};
use crate::budget::{power, Budget};
use crate::error::Result;
use crate::format::{parse_algebra, Library};
use crate::observable::{enumerate_observables, observable_from_atoms, BorelFrame, Observable};
use crate::presheaf::{ArrowSelection, CatArrow, FiniteCategory};

/// `(file name, contents)` of every bundled instance file.
pub const FILES: &[(&str, &str)] = &[
    ("two.lat", include_str!("../corpus/two.lat")),
    ("b4.lat", include_str!("../corpus/b4.lat")),
    ("b8.lat", include_str!("../corpus/b8.lat")),
    ("mo2.lat", include_str!("../corpus/mo2.lat")),
    ("mo2_block_a.lat", include_str!("../corpus/mo2_block_a.lat")),
    ("mo2_block_b.lat", include_str!("../corpus/mo2_block_b.lat")),
    ("g3.lat", include_str!("../corpus/g3.lat")),
    ("hexagon.lat", include_str!("../corpus/hexagon.lat")),
    ("mo2_bad_ortho.lat", include_str!("../corpus/mo2_bad_ortho.lat")),
    ("mo2_missing_top.lat", include_str!("../corpus/mo2_missing_top.lat")),
    ("mo2.obs", include_str!("../corpus/mo2.obs")),
    ("mo2_both.sys", include_str!("../corpus/mo2_both.sys")),
    ("mo2_single.sys", include_str!("../corpus/mo2_single.sys")),
    ("mo2_single_b.sys", include_str!("../corpus/mo2_single_b.sys")),
    ("b4.obs", include_str!("../corpus/b4.obs")),
    ("b4_identity.sys", include_str!("../corpus/b4_identity.sys")),
];

pub fn file(name: &str) -> &'static str {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .unwrap_or_else(|| panic!("no bundled file {name}"))
}

fn load(name: &str) -> Arc<EventAlgebra> {
    let spec = parse_algebra(file(name)).expect("bundled file parses");
    Arc::new(EventAlgebra::from_spec(&spec).expect("bundled file is well formed"))
}

pub fn two_element() -> Arc<EventAlgebra> {
    load("two.lat")
}

pub fn b4() -> Arc<EventAlgebra> {
    load("b4.lat")
}

pub fn b8() -> Arc<EventAlgebra> {
    load("b8.lat")
}

pub fn mo2() -> Arc<EventAlgebra> {
    load("mo2.lat")
}

/// Three eight-element blocks in a chain, neighbours sharing one atom.
pub fn g3() -> Arc<EventAlgebra> {
    load("g3.lat")
}

/// MO2 with two extra orthogonalities; fails axiom `[g]`.
pub fn hexagon() -> Arc<EventAlgebra> {
    load("hexagon.lat")
}

/// MO2 with a self-complemented atom pair; fails axiom `[c]`.
pub fn mo2_bad_ortho() -> Arc<EventAlgebra> {
    load("mo2_bad_ortho.lat")
}

/// The valid algebras: `{0,1}`, B4, B8, MO2 and the three-block lattice.
pub fn algebras() -> Vec<Arc<EventAlgebra>> {
    vec![two_element(), b4(), b8(), mo2(), g3()]
}

/// Every Boolean algebra the corpus provides: the Boolean members of
/// [`algebras`], all blocks of the others and the frames with up to three
/// cells.
pub fn boolean_algebras() -> Vec<Arc<EventAlgebra>> {
    let mut out = vec![two_element(), b4(), b8()];
    for alg in [mo2(), g3()] {
        out.extend(enumerate_blocks(&alg).into_iter().map(|b| b.algebra));
    }
    for k in 1..=3 {
        out.push(BorelFrame::with_cells(k).unwrap().algebra().clone());
    }
    out
}

fn library(names: &[&str]) -> Library {
    let sources: Vec<(&str, &str)> = names.iter().map(|n| (*n, file(n))).collect();
    Library::from_sources(&sources).expect("bundled files resolve")
}

/// MO2, its two block files, the one-cell observables and both systems.
pub fn mo2_library() -> Library {
    library(&[
        "mo2.lat",
        "mo2_block_a.lat",
        "mo2_block_b.lat",
        "mo2.obs",
        "mo2_both.sys",
        "mo2_single.sys",
        "mo2_single_b.sys",
    ])
}

pub fn b4_library() -> Library {
    library(&["b4.lat", "b4.obs", "b4_identity.sys"])
}

/// The base used with a system file: every observable with a Boolean target
/// on the frame of `target`, with all commuting homomorphisms as arrows.
pub fn library_base(lib: &Library, target: &Observable, budget: Budget) -> Result<Arc<FiniteCategory>> {
    let objects: Vec<Arc<Observable>> = lib
        .observables()
        .iter()
        .filter(|o| o.frame().cuts() == target.frame().cuts())
        .filter(|o| crate::algebra::validate_boolean_algebra(o.target()).passed())
        .cloned()
        .collect();
    Ok(Arc::new(FiniteCategory::full(objects, ArrowSelection::All, budget)?))
}

/// One-cell observables `xi_a`, `xi_b` into the two blocks of MO2 with all
/// arrows, and the one-cell observable `Xi` into MO2.
pub fn mo2_two_block_base() -> (Arc<FiniteCategory>, Arc<Observable>) {
    let lib = mo2_library();
    let xi = lib.require_observable("Xi").unwrap();
    (library_base(&lib, &xi, Budget::DEFAULT).unwrap(), xi)
}

/// The single object `xi: frame2 -> B4` with images `(a, a*)`.
pub fn b4_base() -> (Arc<FiniteCategory>, Arc<Observable>) {
    let lib = b4_library();
    let xi = lib.require_observable("xi").unwrap();
    (library_base(&lib, &xi, Budget::DEFAULT).unwrap(), xi)
}

/// Observables from the `k`-cell frame into each block of `alg`, named
/// `<block>[<atom images>]`.
pub fn block_observables(alg: &EventAlgebra, k: usize) -> Vec<Arc<Observable>> {
    let frame = Arc::new(BorelFrame::with_cells(k).unwrap());
    let mut out = Vec::new();
    for block in enumerate_blocks(alg) {
        for obs in enumerate_observables(&frame, &block.algebra, Budget::DEFAULT).unwrap() {
            let images: Vec<&str> = obs.atom_images().iter().map(|&y| block.algebra.id(y)).collect();
            let name = format!("{}[{}]", block.algebra.name(), images.join("|"));
            out.push(Arc::new(obs.with_name(name)));
        }
    }
    out
}

/// Full base on the block observables of `alg` over `k` cells.
pub fn block_base(alg: &EventAlgebra, k: usize, selection: ArrowSelection) -> Result<Arc<FiniteCategory>> {
    Ok(Arc::new(FiniteCategory::full(block_observables(alg, k), selection, Budget::DEFAULT)?))
}

/// The observable `frame_k -> alg` with the given atom images.
pub fn observable(alg: &Arc<EventAlgebra>, name: &str, atom_ids: &[&str]) -> Arc<Observable> {
    let frame = Arc::new(BorelFrame::with_cells(atom_ids.len()).unwrap());
    let images: Vec<usize> = atom_ids.iter().map(|id| alg.index_of(id).unwrap()).collect();
    Arc::new(observable_from_atoms(name, frame, alg.clone(), &images).unwrap())
}

/// Two-cell block observables of MO2 and `Xi: frame2 -> MO2` with images
/// `(a, a*)`.
pub fn mo2_two_block_base_k2() -> (Arc<FiniteCategory>, Arc<Observable>) {
    let mo2 = mo2();
    let base = block_base(&mo2, 2, ArrowSelection::All).unwrap();
    (base, observable(&mo2, "Xi", &["a", "a_c"]))
}

/// One-cell observables on the three blocks of the three-block lattice,
/// and the one-cell observable into the lattice itself.
pub fn g3_base() -> (Arc<FiniteCategory>, Arc<Observable>) {
    let g3 = g3();
    let base = block_base(&g3, 1, ArrowSelection::All).unwrap();
    (base, observable(&g3, "Xi", &["1"]))
}

/// `θ -> ξ` with a single non-identity arrow: one-cell observables into
/// `{0,1}` and B4, joined by the unit inclusion.
pub fn single_arrow_base() -> Arc<FiniteCategory> {
    let theta = observable(&two_element(), "theta", &["1"]);
    let xi = observable(&b4(), "xi", &["1"]);
    let u = CatArrow {
        source: 0,
        target: 1,
        map: vec![0, 3],
    };
    Arc::new(FiniteCategory::generated(vec![theta, xi], vec![u]).unwrap())
}

/// Every base the test suites sweep.
pub fn bases() -> Vec<(String, Arc<FiniteCategory>)> {
    vec![
        ("single_arrow".to_string(), single_arrow_base()),
        ("b4".to_string(), b4_base().0),
        ("two_k1".to_string(), block_base(&two_element(), 1, ArrowSelection::All).unwrap()),
        ("mo2_k1".to_string(), mo2_two_block_base().0),
        ("mo2_k2".to_string(), mo2_two_block_base_k2().0),
        ("g3_k1".to_string(), g3_base().0),
    ]
}

/// One random edit of a lattice spec: add or drop an order pair, swap two
/// ortho images, redirect one ortho image, or move the top.
pub fn corrupt(spec: &AlgebraSpec, rng: &mut impl Rng) -> AlgebraSpec {
    let mut out = spec.clone();
    let pick = |rng: &mut dyn rand::RngCore, v: &[String]| v.choose(rng).unwrap().clone();
    match rng.gen_range(0..5) {
        0 => {
            let (x, y) = (pick(rng, &out.elements), pick(rng, &out.elements));
            out.leq.push((x, y));
        }
        1 if !out.leq.is_empty() => {
            let i = rng.gen_range(0..out.leq.len());
            out.leq.remove(i);
        }
        2 => {
            let (i, j) = (rng.gen_range(0..out.ortho.len()), rng.gen_range(0..out.ortho.len()));
            let (a, b) = (out.ortho[i].1.clone(), out.ortho[j].1.clone());
            out.ortho[i].1 = b;
            out.ortho[j].1 = a;
        }
        3 => {
            let i = rng.gen_range(0..out.ortho.len());
            out.ortho[i].1 = pick(rng, &out.elements);
        }
        _ => out.top = pick(rng, &out.elements),
    }
    out
}

/// `n` specs, each carrying one to three edits, from a fixed seed.
pub fn seeded_corruptions(spec: &AlgebraSpec, n: usize, seed: u64) -> Vec<AlgebraSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let edits = rng.gen_range(1..=3);
            let mut s = spec.clone();
            for _ in 0..edits {
                s = corrupt(&s, &mut rng);
            }
            s
        })
        .collect()
}

/// Outcome of [`oracle_axioms`]: either malformed carrier data or the
/// pass/fail status of each axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Malformed,
    Axioms(Vec<(&'static str, bool)>),
}

/// Nested-loop check of the orthoposet axioms straight from the raw spec.
pub fn oracle_axioms(spec: &AlgebraSpec) -> OracleVerdict {
    let n = spec.elements.len();
    let pos = |id: &str| spec.elements.iter().position(|e| e == id);
    if n == 0 {
        return OracleVerdict::Malformed;
    }
    for i in 0..n {
        let id = &spec.elements[i];
        if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return OracleVerdict::Malformed;
        }
        if spec.elements[..i].contains(id) {
            return OracleVerdict::Malformed;
        }
    }
    let Some(top) = pos(&spec.top) else {
        return OracleVerdict::Malformed;
    };
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for (x, y) in &spec.leq {
        let (Some(x), Some(y)) = (pos(x), pos(y)) else {
            return OracleVerdict::Malformed;
        };
        le[x][y] = true;
    }
    // naive fixpoint instead of Warshall
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if le[i][j] && le[j][k] && !le[i][k] {
                        le[i][k] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && le[i][j] && le[j][i] {
                return OracleVerdict::Malformed;
            }
        }
    }
    let mut o = vec![usize::MAX; n];
    for (x, y) in &spec.ortho {
        let (Some(x), Some(y)) = (pos(x), pos(y)) else {
            return OracleVerdict::Malformed;
        };
        if o[x] != usize::MAX {
            return OracleVerdict::Malformed;
        }
        o[x] = y;
    }
    if o.contains(&usize::MAX) {
        return OracleVerdict::Malformed;
    }
    let mut sorted = o.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != n {
        return OracleVerdict::Malformed;
    }

    let lub = |x: usize, y: usize| -> Option<usize> {
        (0..n).find(|&u| {
            le[x][u] && le[y][u] && (0..n).all(|v| !(le[x][v] && le[y][v]) || le[u][v])
        })
    };
    let glb = |x: usize, y: usize| -> Option<usize> {
        (0..n).find(|&l| {
            le[l][x] && le[l][y] && (0..n).all(|v| !(le[v][x] && le[v][y]) || le[v][l])
        })
    };
    let bottom = o[top];
    let all = |f: &dyn Fn(usize) -> bool| (0..n).all(f);
    let all2 = |f: &dyn Fn(usize, usize) -> bool| (0..n).all(|x| (0..n).all(|y| f(x, y)));
    OracleVerdict::Axioms(vec![
        ("axiom[a]", all(&|l| le[l][top])),
        ("axiom[b]", all(&|l| o[o[l]] == l)),
        ("axiom[c]", all(&|l| lub(l, o[l]) == Some(top))),
        ("axiom[d]", all2(&|l, m| !le[l][m] || le[o[m]][o[l]])),
        ("axiom[e]", all2(&|l, m| !le[l][o[m]] || lub(l, m).is_some())),
        (
            "axiom[g]",
            all2(&|l, m| {
                !(le[l][o[m]] && lub(l, m) == Some(top) && glb(l, m) == Some(bottom)) || l == o[m]
            }),
        ),
        ("bottom", all(&|l| le[bottom][l])),
    ])
}

/// Equivalence closure of `pairs` on `0..n` by repeated label propagation;
/// classes listed by smallest member.
pub fn oracle_closure(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for &(a, b) in pairs {
            let m = label[a].min(label[b]);
            if label[a] != m || label[b] != m {
                label[a] = m;
                label[b] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        match classes.iter_mut().find(|c| label[c[0]] == label[x]) {
            Some(c) => c.push(x),
            None => classes.push(vec![x]),
        }
    }
    classes
}

/// Counts maps `src -> dst` meeting conditions `[a]`–`[d]` by trying all
/// `|dst|^|src|` of them.
pub fn oracle_hom_count(src: &EventAlgebra, dst: &EventAlgebra, budget: Budget) -> Result<u64> {
    let (n, m) = (src.len(), dst.len());
    budget.admit(
        &format!("counting maps {} -> {}", src.name(), dst.name()),
        power(m, n),
    )?;
    let mut count = 0;
    let mut map = vec![0usize; n];
    'maps: loop {
        let ok = map[src.top()] == dst.top()
            && (0..n).all(|k| map[src.ortho(k)] == dst.ortho(map[k]))
            && (0..n).all(|k| (0..n).all(|l| !src.leq(k, l) || dst.leq(map[k], map[l])))
            && (0..n).all(|k| {
                (0..n).all(|l| {
                    if !src.leq(k, src.ortho(l)) {
                        return true;
                    }
                    match (src.join(k, l), dst.join(map[k], map[l])) {
                        (Some(j), Some(t)) => dst.leq(map[j], t),
                        (None, _) => true,
                        (Some(_), None) => false,
                    }
                })
            });
        if ok {
            count += 1;
        }
        for slot in map.iter_mut() {
            *slot += 1;
            if *slot < m {
                continue 'maps;
            }
            *slot = 0;
        }
        return Ok(count);
    }
}

/// The map `A(ξ) -> Ξ` of a block inclusion, by element ids.
pub fn inclusion(block: &Arc<EventAlgebra>, parent: &Arc<EventAlgebra>) -> EventHomomorphism {
    let map = block
        .elements()
        .map(|x| parent.index_of(block.id(x)).expect("block ids come from the parent"))
        .collect();
    EventHomomorphism::new(block.clone(), parent.clone(), map).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate_quantum_spec;

    #[test]
    fn closure_oracle_basics() {
        assert_eq!(oracle_closure(3, &[]), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(oracle_closure(3, &[(0, 1), (1, 2)]), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn hom_count_goldens() {
        let b = Budget::DEFAULT;
        assert_eq!(oracle_hom_count(&two_element(), &two_element(), b).unwrap(), 1);
        assert_eq!(oracle_hom_count(&b4(), &b4(), b).unwrap(), 4);
        assert_eq!(oracle_hom_count(&b4(), &mo2(), b).unwrap(), 6);
        assert!(oracle_hom_count(&g3(), &g3(), Budget(1000)).is_err());
    }

    #[test]
    fn oracle_agrees_on_clean_corpus() {
        for alg in algebras().into_iter().chain([hexagon(), mo2_bad_ortho()]) {
            let spec = alg.to_spec();
            let report = validate_quantum_spec(&spec).unwrap();
            let OracleVerdict::Axioms(axioms) = oracle_axioms(&spec) else {
                panic!("{} judged malformed", alg.name());
            };
            for (name, ok) in axioms {
                assert_eq!(report.check(name).unwrap().passed(), ok, "{} {name}", alg.name());
            }
        }
    }

    #[test]
    fn corruptions_are_reproducible() {
        let spec = mo2().to_spec();
        assert_eq!(seeded_corruptions(&spec, 20, 7), seeded_corruptions(&spec, 20, 7));
        assert_ne!(seeded_corruptions(&spec, 20, 7), seeded_corruptions(&spec, 20, 8));
    }

    #[test]
    fn bases_are_consistent() {
        let (base, xi) = mo2_two_block_base();
        assert_eq!(base.objects().len(), 2);
        assert_eq!(base.arrows().len(), 16);
        assert_eq!(xi.target().name(), "mo2");
        let (g3_base, _) = g3_base();
        assert_eq!(g3_base.objects().len(), 3);
    }
}
