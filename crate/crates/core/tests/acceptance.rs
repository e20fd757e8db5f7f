//! Acceptance criteria, one PASS/FAIL line each with elapsed time and the
//! stated tolerance. Exits non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use boolean_covers::adjunction::{adjunction_bijection_check, colimit, representable_colimit_check};
use boolean_covers::corpus::{self, OracleVerdict};
use boolean_covers::localization::{boolean_representation_verdict, cocycle_check, generate_system, pullback, PrelocalizationSystem};
use boolean_covers::presheaf::{hom_functor_r, representable};
use boolean_covers::stone::stone;
use boolean_covers::{validate_quantum_spec, BooleanAlgebra, Budget, Presheaf};

type Outcome = Result<String, String>;

struct Criterion {
    id: u8,
    name: &'static str,
    tolerance: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn axiom_suite() -> Outcome {
    let (mut malformed, mut failing, mut valid) = (0, 0, 0);
    for alg in corpus::algebras() {
        let spec = alg.to_spec();
        let mut specs = vec![spec.clone()];
        specs.extend(corpus::seeded_corruptions(&spec, 100, 0x5eed ^ alg.len() as u64));
        for (i, s) in specs.iter().enumerate() {
            let ours = validate_quantum_spec(s);
            let agree = match (corpus::oracle_axioms(s), &ours) {
                (OracleVerdict::Malformed, Err(_)) => true,
                (OracleVerdict::Axioms(expected), Ok(report)) => expected
                    .iter()
                    .all(|(name, ok)| report.check(name).is_some_and(|c| c.passed() == *ok)),
                _ => false,
            };
            if !agree {
                return Err(format!("{} corruption {i} disagrees: {ours:?}", alg.name()));
            }
            match ours {
                Err(_) => malformed += 1,
                Ok(r) if r.passed() => valid += 1,
                Ok(_) => failing += 1,
            }
        }
    }
    Ok(format!(
        "{} specs ({malformed} malformed, {failing} failing an axiom, {valid} valid), 0 disagreements",
        malformed + failing + valid
    ))
}

fn representable_colimits() -> Outcome {
    let mut objects = 0;
    for (name, base) in corpus::bases() {
        for o in 0..base.objects().len() {
            let classes = colimit(&representable(&base, o)).num_classes();
            let expected = base.object(o).target().len();
            if classes != expected || !representable_colimit_check(&base, o).passed() {
                return Err(format!("{name}/{}: {classes} classes, |A| = {expected}", base.object(o).name()));
            }
            objects += 1;
        }
    }
    Ok(format!("{objects} objects over {} bases", corpus::bases().len()))
}

fn adjunction_bijection() -> Outcome {
    let (base, xi) = corpus::mo2_two_block_base();
    let budget = Budget::DEFAULT;
    let mut cases = vec![("empty".to_string(), Presheaf::empty(base.clone()))];
    for o in 0..base.objects().len() {
        cases.push((format!("y[{}]", base.object(o).name()), representable(&base, o)));
    }
    cases.push(("R".to_string(), hom_functor_r(&base, &xi, budget).map_err(|e| e.to_string())?));
    let mut counts = Vec::new();
    for (name, x) in &cases {
        let rep = adjunction_bijection_check(x, &xi, budget).map_err(|e| e.to_string())?;
        let mut images: Vec<usize> = rep.correspondence.iter().map(|&(_, h)| h).collect();
        images.sort_unstable();
        images.dedup();
        if !rep.is_bijection() || images.len() != rep.hom_count || rep.correspondence.len() != rep.nat_count {
            return Err(format!("{name}: {rep}"));
        }
        counts.push(format!("{name}={}", rep.nat_count));
    }
    Ok(counts.join(" "))
}

fn counit_verdicts() -> Outcome {
    let mo2 = corpus::mo2_library();
    let b4 = corpus::b4_library();
    let cases = [
        (&mo2, "mo2_both", "ISO", None),
        (&mo2, "mo2_single", "NOT-ISO", Some("b")),
        (&mo2, "mo2_single_b", "NOT-ISO", Some("a")),
        (&b4, "b4_identity", "ISO", None),
    ];
    for (lib, name, verdict, missing) in cases {
        let spec = lib.system(name).ok_or(format!("no system {name}"))?;
        let sys = PrelocalizationSystem::from_library(lib, spec, Budget::DEFAULT).map_err(|e| e.to_string())?;
        let report = boolean_representation_verdict(&sys).map_err(|e| e.to_string())?;
        if report.verdict() != verdict {
            return Err(format!("{name}: {}", report.verdict()));
        }
        let surjective = report.iso.checks().into_iter().find(|c| c.name == "surjective");
        let witness = surjective.and_then(|c| c.witness.as_ref()).and_then(|w| w.first().cloned());
        if witness.as_deref() != missing {
            return Err(format!("{name}: missing element {witness:?}, expected {missing:?}"));
        }
        let golden = std::fs::read_to_string(golden_dir().join(format!("represent_{name}.txt")))
            .map_err(|e| format!("{name}: {e}"))?;
        let got = report.lines().join("\n") + "\n";
        if got != golden {
            return Err(format!("{name}: report differs from golden file"));
        }
    }
    Ok("4 systems match golden verdicts".into())
}

fn cocycle_suite() -> Outcome {
    let (base, xi) = corpus::g3_base();
    let g3 = xi.target().clone();
    let gens: Vec<(usize, Vec<usize>)> = (0..base.objects().len())
        .map(|o| (o, corpus::inclusion(base.object(o).target(), &g3).map().to_vec()))
        .collect();
    let sys = generate_system("g3_blocks", base.clone(), xi, &gens).map_err(|e| e.to_string())?;
    // the diagonal sits in every self-pullback, and is all of it exactly
    // when the cover is injective
    for (o, c) in sys.all_covers() {
        let h = sys.cover_hom(o, c);
        let pb = pullback(&h, &h).map_err(|e| e.to_string())?;
        let diagonal = h.source().elements().all(|x| pb.carrier().contains(&(x, x)));
        let only_diagonal = pb.carrier().iter().all(|&(x, y)| x == y);
        if !diagonal || (h.is_injective() && !only_diagonal) {
            return Err(format!("identity fails on {}", sys.cover_label(o, c)));
        }
    }
    let report = cocycle_check(&sys);
    if !report.passed() {
        return Err(report.to_string());
    }
    Ok(format!("{} covers; {}", sys.len(), report.notes[0]))
}

fn colimit_presheaves() -> Result<Vec<(String, Presheaf)>, String> {
    let mut out = Vec::new();
    for (name, base) in corpus::bases() {
        out.push((format!("{name}/empty"), Presheaf::empty(base.clone())));
        for o in 0..base.objects().len() {
            out.push((format!("{name}/y[{}]", base.object(o).name()), representable(&base, o)));
        }
    }
    for (name, base, xi) in [
        ("mo2_k1", corpus::mo2_two_block_base().0, corpus::mo2_two_block_base().1),
        ("b4", corpus::b4_base().0, corpus::b4_base().1),
    ] {
        out.push((format!("{name}/R"), hom_functor_r(&base, &xi, Budget::DEFAULT).map_err(|e| e.to_string())?));
    }
    for (lib, names) in [
        (corpus::mo2_library(), &["mo2_both", "mo2_single", "mo2_single_b"][..]),
        (corpus::b4_library(), &["b4_identity"][..]),
    ] {
        for name in names {
            let sys = PrelocalizationSystem::from_library(&lib, lib.system(name).unwrap(), Budget::DEFAULT)
                .map_err(|e| e.to_string())?;
            out.push((name.to_string(), sys.presheaf()));
        }
    }
    Ok(out)
}

fn quotient_certification() -> Outcome {
    let all = colimit_presheaves()?;
    let mut generators = 0;
    for (name, x) in &all {
        let carrier = colimit(x);
        let oracle = corpus::oracle_closure(carrier.generators().len(), carrier.relation());
        if oracle != carrier.classes() {
            return Err(format!("{name}: union-find and closure partitions differ"));
        }
        generators += carrier.generators().len();
    }
    Ok(format!("{} colimits, {generators} generators", all.len()))
}

fn stone_suite() -> Outcome {
    let algebras = corpus::boolean_algebras();
    for alg in &algebras {
        let b = BooleanAlgebra::new(Arc::clone(alg)).map_err(|r| r.to_string())?;
        let space = stone(&b);
        if alg.len() != 1usize << b.atoms().len() {
            return Err(format!("{}: {} elements, {} atoms", alg.name(), alg.len(), b.atoms().len()));
        }
        if !space.verify().passed() || space.round_trip().is_none() {
            return Err(format!("{}: {}", alg.name(), space.verify()));
        }
    }
    Ok(format!("{} Boolean algebras", algebras.len()))
}

fn cli_determinism() -> Outcome {
    let corpus_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let f = |n: &str| corpus_dir.join(n).display().to_string();
    let mo2: Vec<String> = ["mo2.lat", "mo2_block_a.lat", "mo2_block_b.lat", "mo2.obs"].iter().map(|n| f(n)).collect();
    let with = |extra: &[&str], files: &[String]| -> Vec<String> {
        extra.iter().map(|s| s.to_string()).chain(files.iter().cloned()).collect()
    };
    let invocations: Vec<Vec<String>> = vec![
        with(&["validate"], &[f("two.lat"), f("b4.lat"), f("b8.lat"), f("g3.lat"), f("mo2_bad_ortho.lat")]),
        with(&["--format", "lines", "validate"], &mo2),
        with(&["blocks"], &[f("g3.lat")]),
        with(&["observables", "--cells", "2"], &[f("mo2.lat")]),
        with(&["colimit"], &[&mo2[..], &[f("mo2_both.sys")]].concat()),
        with(&["represent"], &[&mo2[..], &[f("mo2_both.sys")]].concat()),
        with(&["--format", "lines", "represent"], &[&mo2[..], &[f("mo2_single.sys")]].concat()),
        with(&["represent"], &[f("b4.lat"), f("b4.obs"), f("b4_identity.sys")]),
        with(&["--format", "lines", "adjunction"], &mo2),
        with(&["stone"], &[f("g3.lat")]),
        with(&["fibration"], &mo2),
        with(&["validate"], &[f("mo2_missing_top.lat")]),
    ];
    for args in &invocations {
        let mut first: Option<(Option<i32>, Vec<u8>, Vec<u8>)> = None;
        for _ in 0..3 {
            let out = Command::new(env!("CARGO_BIN_EXE_qcover"))
                .args(args)
                .output()
                .map_err(|e| e.to_string())?;
            let run = (out.status.code(), out.stdout, out.stderr);
            match &first {
                None => first = Some(run),
                Some(f) if *f != run => return Err(format!("qcover {} differs between runs", args.join(" "))),
                Some(_) => {}
            }
        }
    }
    Ok(format!("{} invocations x 3 runs", invocations.len()))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "axiom suite vs oracle", tolerance: "zero disagreements", limit: Some(Duration::from_secs(5)), run: axiom_suite },
        Criterion { id: 2, name: "representable colimits", tolerance: "exact", limit: Some(Duration::from_secs(10)), run: representable_colimits },
        Criterion { id: 3, name: "adjunction bijection on MO2", tolerance: "exact", limit: Some(Duration::from_secs(60)), run: adjunction_bijection },
        Criterion { id: 4, name: "counit verdicts", tolerance: "exact golden match", limit: Some(Duration::from_secs(10)), run: counit_verdicts },
        Criterion { id: 5, name: "cocycle suite on the three-block lattice", tolerance: "zero violations", limit: Some(Duration::from_secs(10)), run: cocycle_suite },
        Criterion { id: 6, name: "quotient certification", tolerance: "exact", limit: Some(Duration::from_secs(10)), run: quotient_certification },
        Criterion { id: 7, name: "Stone suite", tolerance: "exact", limit: Some(Duration::from_secs(1)), run: stone_suite },
        Criterion { id: 8, name: "CLI determinism", tolerance: "byte-identical", limit: None, run: cli_determinism },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let limit = c.limit.map_or("none".to_string(), |l| format!("{}s", l.as_secs()));
        let (ok, detail) = match outcome {
            Ok(d) if c.limit.is_none_or(|l| elapsed < l) => (true, d),
            Ok(d) => (false, format!("{d}; over time limit")),
            Err(e) => (false, e),
        };
        failures += usize::from(!ok);
        println!(
            "{} [{}] {} ({:.3}s, limit {limit}, tolerance: {}) {detail}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.tolerance
        );
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
