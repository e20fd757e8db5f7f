use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use boolean_covers::adjunction::{colimit, counit, counit_is_iso};
use boolean_covers::corpus::{self, OracleVerdict};
use boolean_covers::localization::{generate_system, pullback, PrelocalizationSystem};
use boolean_covers::observable::{compose_triangle, enumerate_observables, observable_from_atoms};
use boolean_covers::presheaf::hom_functor_r;
use boolean_covers::stone::{charts_equivalent, Atlas};
use boolean_covers::{
    enumerate_homomorphisms, validate_homomorphism, validate_quantum_spec, BorelFrame, Budget, EventAlgebra,
    EventHomomorphism,
};
use proptest::prelude::*;
use proptest::sample::Index;

fn small_algebras() -> &'static [Arc<EventAlgebra>] {
    static ALGS: OnceLock<Vec<Arc<EventAlgebra>>> = OnceLock::new();
    ALGS.get_or_init(|| vec![corpus::two_element(), corpus::b4(), corpus::b8(), corpus::mo2()])
}

fn homs(i: usize, j: usize) -> &'static [EventHomomorphism] {
    static HOMS: OnceLock<Vec<Vec<Vec<EventHomomorphism>>>> = OnceLock::new();
    let all = HOMS.get_or_init(|| {
        let algs = small_algebras();
        algs.iter()
            .map(|s| algs.iter().map(|t| enumerate_homomorphisms(s, t, Budget::DEFAULT).unwrap()).collect())
            .collect()
    });
    &all[i][j]
}

fn mo2_library_system(name: &str) -> PrelocalizationSystem {
    let lib = corpus::mo2_library();
    PrelocalizationSystem::from_library(&lib, lib.system(name).unwrap(), Budget::DEFAULT).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn validator_agrees_with_oracle_on_any_seed(alg in 0usize..5, seed in any::<u64>()) {
        let alg = &corpus::algebras()[alg];
        for spec in corpus::seeded_corruptions(&alg.to_spec(), 4, seed) {
            match (corpus::oracle_axioms(&spec), validate_quantum_spec(&spec)) {
                (OracleVerdict::Malformed, Err(_)) => {}
                (OracleVerdict::Axioms(expected), Ok(report)) => {
                    for (name, ok) in expected {
                        prop_assert_eq!(report.check(name).unwrap().passed(), ok, "{}", name);
                    }
                }
                (o, r) => prop_assert!(false, "oracle {o:?}, validator {r:?}"),
            }
        }
    }

    #[test]
    fn ortho_reverses_order_whenever_axiom_d_holds(alg in 0usize..5, seed in any::<u64>()) {
        let alg = &corpus::algebras()[alg];
        for spec in corpus::seeded_corruptions(&alg.to_spec(), 4, seed) {
            let Ok(parsed) = EventAlgebra::from_spec(&spec) else { continue };
            let report = validate_quantum_spec(&spec).unwrap();
            if !(report.check("axiom[b]").unwrap().passed() && report.check("axiom[d]").unwrap().passed()) {
                continue;
            }
            for x in parsed.elements() {
                for y in parsed.elements() {
                    prop_assert_eq!(parsed.leq(x, y), parsed.leq(parsed.ortho(y), parsed.ortho(x)));
                }
            }
        }
    }

    #[test]
    fn composites_of_homomorphisms_are_homomorphisms(
        a in 0usize..4, b in 0usize..4, c in 0usize..4, f in any::<Index>(), g in any::<Index>()
    ) {
        let (fs, gs) = (homs(a, b), homs(b, c));
        prop_assume!(!fs.is_empty() && !gs.is_empty());
        let h = gs[g.index(gs.len())].after(&fs[f.index(fs.len())]).unwrap();
        prop_assert!(validate_homomorphism(&h).passed());
    }

    #[test]
    fn triangle_composition_is_functorial(
        k in 1usize..=3, obs in any::<Index>(), h1 in any::<Index>(), h2 in any::<Index>(), mid in 0usize..4, end in 0usize..4
    ) {
        let algs = small_algebras();
        let frame = Arc::new(BorelFrame::with_cells(k).unwrap());
        let all = enumerate_observables(&frame, &algs[1], Budget::DEFAULT).unwrap();
        let xi = &all[obs.index(all.len())];
        let (f1, f2) = (homs(1, mid), homs(mid, end));
        prop_assume!(!f1.is_empty() && !f2.is_empty());
        let (h1, h2) = (&f1[h1.index(f1.len())], &f2[h2.index(f2.len())]);
        let stepwise = compose_triangle(&compose_triangle(xi, h1).unwrap(), h2).unwrap();
        let direct = compose_triangle(xi, &h2.after(h1).unwrap()).unwrap();
        prop_assert_eq!(stepwise.map(), direct.map());
    }

    #[test]
    fn atoms_round_trip_through_observables(k in 1usize..=3, obs in any::<Index>(), target in 0usize..4) {
        let target = &small_algebras()[target];
        let frame = Arc::new(BorelFrame::with_cells(k).unwrap());
        let all = enumerate_observables(&frame, target, Budget::DEFAULT).unwrap();
        prop_assume!(!all.is_empty());
        let xi = &all[obs.index(all.len())];
        let rebuilt = observable_from_atoms("again", frame.clone(), target.clone(), &xi.atom_images()).unwrap();
        prop_assert_eq!(rebuilt.atom_images(), xi.atom_images());
        prop_assert_eq!(rebuilt.map(), xi.map());
    }

    #[test]
    fn generated_systems_are_closed_and_quotients_certified(mask in 1u32..(1 << 12)) {
        let (base, xi) = corpus::mo2_two_block_base();
        let r = hom_functor_r(&base, &xi, Budget::DEFAULT).unwrap();
        let candidates: Vec<(usize, Vec<usize>)> = (0..base.objects().len())
            .flat_map(|o| (0..r.sections(o).len()).map(move |s| (o, s)))
            .map(|(o, s)| (o, r.hom_section(o, s).unwrap().to_vec()))
            .collect();
        let gens: Vec<(usize, Vec<usize>)> = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, g)| g.clone())
            .collect();
        let once = generate_system("g", base.clone(), xi.clone(), &gens).unwrap();
        let all: Vec<(usize, Vec<usize>)> = once.all_covers().map(|(o, c)| (o, c.clone())).collect();
        let twice = generate_system("g", base.clone(), xi.clone(), &all).unwrap();
        for o in 0..base.objects().len() {
            prop_assert_eq!(once.covers(o), twice.covers(o));
        }
        let carrier = colimit(&once.presheaf());
        prop_assert_eq!(corpus::oracle_closure(carrier.generators().len(), carrier.relation()), carrier.classes().to_vec());
    }

    #[test]
    fn counit_is_natural_on_generators(arrow in any::<Index>(), section in any::<Index>(), q in any::<Index>()) {
        let sys = mo2_library_system("mo2_both");
        let x = sys.presheaf();
        let base = sys.base();
        let carrier = colimit(&x);
        let u = arrow.index(base.arrows().len());
        let a = base.arrow(u);
        let p = section.index(x.sections(a.target).len());
        let q = q.index(a.map.len());
        prop_assert_eq!(
            carrier.class_of_pair(a.source, x.restrict(u, p), q),
            carrier.class_of_pair(a.target, p, a.map[q])
        );
    }

    #[test]
    fn adding_covers_keeps_an_iso_system_surjective(extra in 0u32..(1 << 12)) {
        let sys = mo2_library_system("mo2_both");
        let r = hom_functor_r(sys.base(), sys.target(), Budget::DEFAULT).unwrap();
        let mut gens = sys.generators().to_vec();
        let mut i = 0;
        for o in 0..sys.base().objects().len() {
            for s in 0..r.sections(o).len() {
                if extra >> i & 1 == 1 {
                    gens.push((o, r.hom_section(o, s).unwrap().to_vec()));
                }
                i += 1;
            }
        }
        let bigger = generate_system("bigger", sys.base().clone(), sys.target().clone(), &gens).unwrap();
        let cm = counit(&bigger.presheaf(), bigger.target()).unwrap();
        prop_assert!(counit_is_iso(&cm).surjective.passed());
    }

    #[test]
    fn chart_equivalence_is_an_equivalence(picks in proptest::collection::vec((any::<Index>(), any::<Index>()), 3)) {
        let sys = mo2_library_system("mo2_both");
        let atlas = Atlas::new(&sys);
        let covers: Vec<(usize, Vec<usize>)> = sys.all_covers().map(|(o, c)| (o, c.clone())).collect();
        let pts: Vec<_> = picks
            .iter()
            .map(|(c, e)| {
                let (o, map) = &covers[c.index(covers.len())];
                let chart = atlas.chart(*o, map).unwrap();
                let e = e.index(chart.stone.algebra().len());
                (chart, e)
            })
            .collect();
        let eq = |i: usize, j: usize| charts_equivalent(&atlas, &pts[i].0, pts[i].1, &pts[j].0, pts[j].1).unwrap();
        prop_assert!(eq(0, 0));
        prop_assert_eq!(eq(0, 1), eq(1, 0));
        if eq(0, 1) && eq(1, 2) {
            prop_assert!(eq(0, 2));
        }
    }
}

#[test]
fn injective_pullbacks_have_the_size_of_the_image_overlap() {
    let (base, xi) = corpus::g3_base();
    let g3 = xi.target().clone();
    let gens: Vec<(usize, Vec<usize>)> = (0..base.objects().len())
        .map(|o| (o, corpus::inclusion(base.object(o).target(), &g3).map().to_vec()))
        .collect();
    let g3_sys = generate_system("g3_blocks", base, xi, &gens).unwrap();
    for sys in [mo2_library_system("mo2_both"), g3_sys] {
        let injective: Vec<EventHomomorphism> = sys
            .all_covers()
            .map(|(o, c)| sys.cover_hom(o, c))
            .filter(EventHomomorphism::is_injective)
            .collect();
        for p in &injective {
            for q in &injective {
                let a: BTreeSet<usize> = p.image().into_iter().collect();
                let b: BTreeSet<usize> = q.image().into_iter().collect();
                assert_eq!(pullback(p, q).unwrap().carrier().len(), a.intersection(&b).count());
            }
        }
    }
}
