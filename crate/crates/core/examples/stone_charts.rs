//! Stone spaces of Boolean algebras and charts glued by a cover system.

use boolean_covers::localization::PrelocalizationSystem;
use boolean_covers::stone::{charts_equivalent, stone, Atlas};
use boolean_covers::{corpus, BooleanAlgebra, Budget};

fn main() -> boolean_covers::Result<()> {
    for alg in corpus::boolean_algebras() {
        let b = BooleanAlgebra::new(alg.clone()).expect("corpus algebra is Boolean");
        let space = stone(&b);
        println!(
            "{:<12} {} points, verify {}, round trip {}",
            alg.name(),
            space.points().len(),
            if space.verify().passed() { "PASS" } else { "FAIL" },
            if space.round_trip().is_some() { "ok" } else { "missing" }
        );
    }

    println!();
    for line in stone(&BooleanAlgebra::new(corpus::b4()).unwrap()).dump() {
        println!("{line}");
    }

    let lib = corpus::mo2_library();
    let sys = PrelocalizationSystem::from_library(&lib, lib.system("mo2_both").unwrap(), Budget::DEFAULT)?;
    let atlas = Atlas::new(&sys);
    let (a_chart, b_chart) = (atlas.chart(0, &sys.generators()[0].1)?, atlas.chart(1, &sys.generators()[1].1)?);
    println!("\ncharts {} and {}", a_chart.label(), b_chart.label());
    let (top_a, top_b) = (a_chart.stone.algebra().top(), b_chart.stone.algebra().top());
    let (atom_a, atom_b) = (a_chart.stone.points()[0], b_chart.stone.points()[0]);
    println!("tops agree: {}", charts_equivalent(&atlas, &a_chart, top_a, &b_chart, top_b)?);
    println!("atoms agree: {}", charts_equivalent(&atlas, &a_chart, atom_a, &b_chart, atom_b)?);
    Ok(())
}
