//! Finite Borel frames, observables and the triangle arrows between them.
//!
//! A frame with `k` cells stands in for the Borel algebra of the real line:
//! cut points `c_1 < ... < c_{k-1}` split the line into `k` intervals and the
//! frame is the powerset of those cells. Frame element `m` is the cell set
//! whose bitmask is `m`.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use crate::algebra::{same_algebra, AlgebraSpec, EventAlgebra, EventHomomorphism};
use crate::budget::{power, Budget};
use crate::error::{Error, Result, StructureError};
use crate::report::{Check, ValidationReport};

pub type Cut = Ratio<i64>;

/// Powerset of the cells cut out of the real line by finitely many points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorelFrame {
    cuts: Vec<Cut>,
    algebra: Arc<EventAlgebra>,
}

fn cell_set_id(mask: usize) -> String {
    if mask == 0 {
        return "none".to_string();
    }
    let cells: Vec<String> = (0..usize::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i.to_string())
        .collect();
    format!("c{}", cells.join("_"))
}

impl BorelFrame {
    pub fn new(cuts: Vec<Cut>) -> Result<Self> {
        if let Some(w) = cuts.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Construction(format!(
                "cut points must be strictly increasing ({} >= {})",
                w[0], w[1]
            )));
        }
        let k = cuts.len() + 1;
        if k > 16 {
            return Err(Error::Construction(format!("{k} cells is beyond the supported 16")));
        }
        let size = 1usize << k;
        let full = size - 1;
        let ids: Vec<String> = (0..size).map(cell_set_id).collect();
        let mut spec = AlgebraSpec {
            name: format!("frame{k}"),
            elements: ids.clone(),
            top: ids[full].clone(),
            leq: Vec::new(),
            ortho: Vec::new(),
        };
        for x in 0..size {
            for y in 0..size {
                if x != y && x & y == x {
                    spec.leq.push((ids[x].clone(), ids[y].clone()));
                }
            }
            spec.ortho.push((ids[x].clone(), ids[full ^ x].clone()));
        }
        let algebra = EventAlgebra::from_spec(&spec).expect("powerset carrier is well formed");
        Ok(BorelFrame {
            cuts,
            algebra: Arc::new(algebra),
        })
    }

    /// Frame with `k` cells cut at the integers `1, ..., k-1`.
    pub fn with_cells(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Construction("a frame needs at least one cell".into()));
        }
        BorelFrame::new((1..k as i64).map(Cut::from_integer).collect())
    }

    pub fn k(&self) -> usize {
        self.cuts.len() + 1
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn algebra(&self) -> &Arc<EventAlgebra> {
        &self.algebra
    }

    /// Bitmask of the whole line.
    pub fn full(&self) -> usize {
        (1 << self.k()) - 1
    }

    /// Human-readable interval for cell `i`.
    pub fn cell_interval(&self, i: usize) -> String {
        let lo = if i == 0 {
            "-inf".to_string()
        } else {
            self.cuts[i - 1].to_string()
        };
        let hi = if i + 1 == self.k() {
            "inf)".to_string()
        } else {
            format!("{}]", self.cuts[i])
        };
        format!("({lo},{hi}")
    }
}

/// A map from a frame into an event algebra. Quantum and Boolean
/// observables share this type; the target algebra decides which is which.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observable {
    name: String,
    frame: Arc<BorelFrame>,
    target: Arc<EventAlgebra>,
    map: Vec<usize>,
}

impl Observable {
    pub fn new(
        name: impl Into<String>,
        frame: Arc<BorelFrame>,
        target: Arc<EventAlgebra>,
        map: Vec<usize>,
    ) -> Result<Self, StructureError> {
        if map.len() != frame.algebra().len() {
            return Err(StructureError::MapLength {
                expected: frame.algebra().len(),
                got: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.len()) {
            return Err(StructureError::UnknownId {
                context: "observable image",
                id: bad.to_string(),
            });
        }
        Ok(Observable {
            name: name.into(),
            frame,
            target,
            map,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn frame(&self) -> &Arc<BorelFrame> {
        &self.frame
    }

    /// The coefficient algebra `A(ξ)`: the target carrier, read as a quantum
    /// algebra when the observable is Boolean.
    pub fn target(&self) -> &Arc<EventAlgebra> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, cell_set: usize) -> usize {
        self.map[cell_set]
    }

    pub fn atom_images(&self) -> Vec<usize> {
        (0..self.frame.k()).map(|i| self.map[1 << i]).collect()
    }

    /// Sorted range of the map.
    pub fn range(&self) -> Vec<usize> {
        let mut r = self.map.clone();
        r.sort_unstable();
        r.dedup();
        r
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<&str> = self
            .atom_images()
            .into_iter()
            .map(|y| self.target.id(y))
            .collect();
        write!(
            f,
            "{}: frame{} -> {} ({})",
            self.name,
            self.frame.k(),
            self.target.name(),
            imgs.join(", ")
        )
    }
}

pub(crate) fn same_frame(a: &Arc<BorelFrame>, b: &Arc<BorelFrame>) -> bool {
    Arc::ptr_eq(a, b) || a.cuts == b.cuts
}

/// Conditions `[i]`–`[iii]`. Countable additivity reduces to additivity over
/// disjoint pairs on a finite frame: iterated pairwise joins give the join of
/// any finite disjoint family.
pub fn validate_observable(obs: &Observable) -> ValidationReport {
    let frame = obs.frame.algebra();
    let alg = &obs.target;
    let full = obs.frame.full();
    let m = |e: usize| obs.map[e];
    let pair = |e: usize, f: usize| vec![frame.id(e).to_string(), frame.id(f).to_string()];
    let mut report = ValidationReport::new(obs.name.clone());

    let mut cond_i = None;
    if m(0) != alg.bottom() {
        cond_i = Some(vec![frame.id(0).to_string()]);
    } else if m(full) != alg.top() {
        cond_i = Some(vec![frame.id(full).to_string()]);
    }
    report.push(Check::from_outcome("obs[i]", cond_i));

    let mut cond_ii = None;
    let mut cond_iii = None;
    for e in 0..=full {
        for f in 0..=full {
            if e & f != 0 {
                continue;
            }
            if cond_ii.is_none() && !alg.orthogonal(m(e), m(f)) {
                cond_ii = Some(pair(e, f));
            }
            if cond_iii.is_none() && alg.join(m(e), m(f)) != Some(m(e | f)) {
                cond_iii = Some(pair(e, f));
            }
        }
    }
    report.push(Check::from_outcome("obs[ii]", cond_ii));
    report.push(Check::from_outcome("obs[iii]", cond_iii));
    report
}

/// Extends atom images to the whole frame by joins.
pub fn observable_from_atoms(
    name: impl Into<String>,
    frame: Arc<BorelFrame>,
    target: Arc<EventAlgebra>,
    atom_images: &[usize],
) -> Result<Observable> {
    let k = frame.k();
    if atom_images.len() != k {
        return Err(Error::Construction(format!(
            "{} atom images for a frame with {k} cells",
            atom_images.len()
        )));
    }
    if let Some(&bad) = atom_images.iter().find(|&&y| y >= target.len()) {
        return Err(Error::Construction(format!("atom image {bad} out of range")));
    }
    for i in 0..k {
        for j in i + 1..k {
            let (x, y) = (atom_images[i], atom_images[j]);
            if !target.orthogonal(x, y) {
                return Err(Error::Construction(format!(
                    "images of cells {i} and {j} are not orthogonal ({} is not below {}*)",
                    target.id(x),
                    target.id(y)
                )));
            }
        }
    }
    let size = 1usize << k;
    let mut map = vec![0; size];
    map[0] = target.bottom();
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        map[mask] = target.join(map[rest], atom_images[low]).ok_or_else(|| {
            Error::Construction(format!(
                "join of {} and {} is undefined in {}",
                target.id(map[rest]),
                target.id(atom_images[low]),
                target.name()
            ))
        })?;
    }
    if map[size - 1] != target.top() {
        return Err(Error::Construction(format!(
            "atom images join to {}, not to the top",
            target.id(map[size - 1])
        )));
    }
    let obs = Observable::new(name, frame, target, map)?;
    let report = validate_observable(&obs);
    if let Some(c) = report.first_failure() {
        return Err(Error::Construction(c.line()));
    }
    Ok(obs)
}

/// `h ∘ obs`, which must again be an observable.
///
/// For a validated `h` the composite always is one; a failing composite
/// signals that `h` is not an arrow and is reported as [`Error::NotAnArrow`].
pub fn compose_triangle(obs: &Observable, h: &EventHomomorphism) -> Result<Observable> {
    if !same_algebra(h.source(), &obs.target) {
        return Err(Error::AlgebraMismatch {
            expected: obs.target.name().to_string(),
            found: h.source().name().to_string(),
        });
    }
    let map = obs.map.iter().map(|&x| h.apply(x)).collect();
    let composite = Observable::new(obs.name.clone(), obs.frame.clone(), h.target().clone(), map)?;
    let report = validate_observable(&composite);
    if let Some(c) = report.first_failure() {
        return Err(Error::NotAnArrow {
            condition: c.name.trim_start_matches("obs").trim_matches(['[', ']']).to_string(),
            witness: c.witness.clone().unwrap_or_default().join(", "),
        });
    }
    Ok(composite)
}

/// All observables `frame -> target`, ordered by their atom-image tuples.
/// Named `<target>_k<k>_<i>`.
pub fn enumerate_observables(
    frame: &Arc<BorelFrame>,
    target: &Arc<EventAlgebra>,
    budget: Budget,
) -> Result<Vec<Observable>> {
    let k = frame.k();
    budget.admit(
        &format!("enumerating observables frame{k} -> {}", target.name()),
        power(target.len(), k),
    )?;
    let mut out = Vec::new();
    let mut images = vec![0usize; k];
    loop {
        let name = format!("{}_k{}_{}", target.name(), k, out.len());
        if let Ok(obs) = observable_from_atoms(name, frame.clone(), target.clone(), &images) {
            out.push(obs);
        }
        // odometer, last position fastest
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            images[pos] += 1;
            if images[pos] < target.len() {
                break;
            }
            images[pos] = 0;
        }
    }
}

/// A commutative triangle `carrier ∘ source = target` under a shared frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservableArrow {
    source: Arc<Observable>,
    target: Arc<Observable>,
    carrier: EventHomomorphism,
}

impl ObservableArrow {
    pub fn new(
        source: Arc<Observable>,
        target: Arc<Observable>,
        carrier: EventHomomorphism,
    ) -> Result<Self> {
        if !same_frame(&source.frame, &target.frame) {
            return Err(Error::FrameMismatch(format!(
                "{} and {} have different frames",
                source.name, target.name
            )));
        }
        if !same_algebra(carrier.source(), &source.target) {
            return Err(Error::AlgebraMismatch {
                expected: source.target.name().to_string(),
                found: carrier.source().name().to_string(),
            });
        }
        if !same_algebra(carrier.target(), &target.target) {
            return Err(Error::AlgebraMismatch {
                expected: target.target.name().to_string(),
                found: carrier.target().name().to_string(),
            });
        }
        if !commutes(&source, &target, carrier.map()) {
            return Err(Error::NotCommuting(format!(
                "{} -> {} {}",
                source.name,
                target.name,
                carrier.label()
            )));
        }
        Ok(ObservableArrow {
            source,
            target,
            carrier,
        })
    }

    pub fn source(&self) -> &Arc<Observable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Observable> {
        &self.target
    }

    pub fn carrier(&self) -> &EventHomomorphism {
        &self.carrier
    }
}

pub(crate) fn commutes(source: &Observable, target: &Observable, carrier: &[usize]) -> bool {
    source
        .map
        .iter()
        .zip(&target.map)
        .all(|(&s, &t)| carrier[s] == t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::enumerate_blocks;
    use crate::corpus;

    fn frame(k: usize) -> Arc<BorelFrame> {
        Arc::new(BorelFrame::with_cells(k).unwrap())
    }

    fn idx(alg: &EventAlgebra, ids: &[&str]) -> Vec<usize> {
        ids.iter().map(|s| alg.index_of(s).unwrap()).collect()
    }

    #[test]
    fn frame_is_a_powerset_algebra() {
        let f = frame(3);
        assert_eq!(f.algebra().len(), 8);
        let r = crate::algebra::validate_boolean_algebra(f.algebra());
        assert!(r.passed(), "{r}");
        assert_eq!(f.cell_interval(0), "(-inf,1]");
        assert_eq!(f.cell_interval(2), "(2,inf)");
        assert!(BorelFrame::new(vec![Cut::new(1, 2), Cut::new(1, 3)]).is_err());
    }

    #[test]
    fn one_cell_observable_is_forced() {
        for alg in corpus::algebras() {
            let obs = observable_from_atoms("t", frame(1), alg.clone(), &[alg.top()]).unwrap();
            assert!(validate_observable(&obs).passed());
            assert_eq!(enumerate_observables(&frame(1), &alg, Budget::DEFAULT).unwrap().len(), 1);
        }
    }

    #[test]
    fn complementary_atoms_give_an_observable() {
        let mo2 = corpus::mo2();
        let obs = observable_from_atoms("x", frame(2), mo2.clone(), &idx(&mo2, &["a", "a_c"])).unwrap();
        assert!(validate_observable(&obs).passed());
        assert_eq!(obs.range(), idx(&mo2, &["0", "a", "a_c", "1"]));

        let b4 = corpus::b4();
        let iso = observable_from_atoms("x", frame(2), b4.clone(), &idx(&b4, &["a", "a_c"])).unwrap();
        assert_eq!(iso.map(), &[0, 1, 2, 3]);
    }

    #[test]
    fn non_orthogonal_atoms_are_rejected() {
        let mo2 = corpus::mo2();
        let err = observable_from_atoms("x", frame(2), mo2.clone(), &idx(&mo2, &["a", "b"])).unwrap_err();
        assert!(matches!(&err, Error::Construction(m) if m.contains("cells 0 and 1")), "{err}");

        // the same images written directly fail condition [ii]
        let ab = idx(&mo2, &["0", "a", "b", "1"]);
        let obs = Observable::new("x", frame(2), mo2.clone(), ab).unwrap();
        let r = validate_observable(&obs);
        let first = r.first_failure().unwrap();
        assert_eq!(first.name, "obs[ii]");
        assert_eq!(first.witness, Some(vec!["c0".to_string(), "c1".to_string()]));
    }

    #[test]
    fn enumerated_observables_validate() {
        let f = frame(2);
        for alg in corpus::algebras() {
            for obs in enumerate_observables(&f, &alg, Budget::DEFAULT).unwrap() {
                assert!(validate_observable(&obs).passed());
            }
        }
    }

    #[test]
    fn observable_counts_match_brute_force() {
        // brute force over every map on the 4 frame elements
        let f = frame(2);
        for alg in corpus::algebras().into_iter().filter(|a| a.len() <= 8) {
            let n = alg.len();
            let mut count = 0;
            for code in 0..n.pow(4) {
                let map: Vec<usize> = (0..4).map(|i| code / n.pow(i) % n).collect();
                let obs = Observable::new("x", f.clone(), alg.clone(), map).unwrap();
                if validate_observable(&obs).passed() {
                    count += 1;
                }
            }
            let fast = enumerate_observables(&f, &alg, Budget::DEFAULT).unwrap().len();
            assert_eq!(fast, count, "{}", alg.name());
        }
    }

    #[test]
    fn golden_observable_counts() {
        let f = frame(2);
        let count = |alg| enumerate_observables(&f, &alg, Budget::DEFAULT).unwrap().len();
        // (0,1) and (1,0) are observables too
        assert_eq!(count(corpus::two_element()), 2);
        assert_eq!(count(corpus::mo2()), 6);
        assert_eq!(count(corpus::b4()), 4);
        assert_eq!(count(corpus::b8()), 8);
    }

    #[test]
    fn budget_refusal_names_the_bound() {
        let err = enumerate_observables(&frame(3), &corpus::g3(), Budget(100)).unwrap_err();
        assert!(err.to_string().contains("budget is 100"), "{err}");
    }

    #[test]
    fn triangle_composition() {
        let mo2 = corpus::mo2();
        let blocks = enumerate_blocks(&mo2);
        let block = blocks[0].algebra.clone();
        let xi = observable_from_atoms("xi", frame(2), block.clone(), &idx(&block, &["a", "a_c"])).unwrap();

        let id = EventHomomorphism::identity(block.clone());
        assert_eq!(compose_triangle(&xi, &id).unwrap(), xi);

        let incl = EventHomomorphism::new(block.clone(), mo2.clone(), blocks[0].elements.clone()).unwrap();
        let q = compose_triangle(&xi, &incl).unwrap();
        assert_eq!(q.atom_images(), idx(&mo2, &["a", "a_c"]));
        assert!(validate_observable(&q).passed());
    }

    #[test]
    fn composites_with_arrows_never_fail_on_b4_to_two() {
        let (b4, two) = (corpus::b4(), corpus::two_element());
        let xi = observable_from_atoms("xi", frame(2), b4.clone(), &idx(&b4, &["a", "a_c"])).unwrap();
        let homs = crate::algebra::enumerate_homomorphisms(&b4, &two, Budget::DEFAULT).unwrap();
        assert_eq!(homs.len(), 2);
        assert!(homs.iter().all(|h| compose_triangle(&xi, h).is_ok()));

        // a map collapsing both atoms onto 1 is not an arrow, and the
        // composite violates [ii]
        let bad = EventHomomorphism::new(b4.clone(), two.clone(), vec![0, 1, 1, 1]).unwrap();
        assert!(!crate::algebra::validate_homomorphism(&bad).passed());
        match compose_triangle(&xi, &bad) {
            Err(Error::NotAnArrow { condition, witness }) => {
                assert_eq!(condition, "ii");
                assert_eq!(witness, "c0, c1");
            }
            other => panic!("expected NotAnArrow, got {other:?}"),
        }
    }

    #[test]
    fn observable_ranges_lie_in_one_block() {
        let f = frame(2);
        for alg in corpus::algebras() {
            let blocks = enumerate_blocks(&alg);
            for obs in enumerate_observables(&f, &alg, Budget::DEFAULT).unwrap() {
                let range = obs.range();
                assert!(
                    blocks.iter().any(|b| range.iter().all(|x| b.elements.contains(x))),
                    "{obs}"
                );
            }
        }
    }

    #[test]
    fn arrows_require_commuting_triangles() {
        let b4 = corpus::b4();
        let f = frame(2);
        let xi = Arc::new(observable_from_atoms("xi", f.clone(), b4.clone(), &[1, 2]).unwrap());
        let swapped = Arc::new(observable_from_atoms("sw", f.clone(), b4.clone(), &[2, 1]).unwrap());
        let swap = EventHomomorphism::new(b4.clone(), b4.clone(), vec![0, 2, 1, 3]).unwrap();
        assert!(ObservableArrow::new(xi.clone(), swapped.clone(), swap.clone()).is_ok());
        let id = EventHomomorphism::identity(b4.clone());
        assert!(matches!(
            ObservableArrow::new(xi.clone(), swapped, id),
            Err(Error::NotCommuting(_))
        ));
    }
}
