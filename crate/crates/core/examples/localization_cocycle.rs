//! Pullbacks of covers, pasting maps and the cocycle conditions on the
//! three-block lattice.

use std::time::Instant;

use boolean_covers::localization::{cocycle_check, generate_system, pasting_map, pullback};
use boolean_covers::{corpus, Budget};

fn main() -> boolean_covers::Result<()> {
    let mo2 = corpus::mo2();
    let blocks = boolean_covers::enumerate_blocks(&mo2);
    let (a, b) = (&blocks[0].algebra, &blocks[1].algebra);
    let (ia, ib) = (corpus::inclusion(a, &mo2), corpus::inclusion(b, &mo2));

    let pb = pullback(&ia, &ib)?;
    println!("{} x {} over mo2: {:?}", a.name(), b.name(), pb.carrier_ids());
    let (check, cones) = pb.universal_property(&corpus::boolean_algebras(), Budget::DEFAULT)?;
    println!("{} ({cones} cones)", check.line());
    let omega = pasting_map(&ia, &ib)?;
    println!("pasting map defined on {} elements, bijective: {}", omega.domain().len(), omega.is_bijection());

    let (base, xi) = corpus::g3_base();
    let g3 = xi.target().clone();
    let gens: Vec<(usize, Vec<usize>)> = (0..base.objects().len())
        .map(|o| (o, corpus::inclusion(base.object(o).target(), &g3).map().to_vec()))
        .collect();
    let sys = generate_system("g3_blocks", base, xi, &gens)?;
    let start = Instant::now();
    let report = cocycle_check(&sys);
    println!("\n{} covers generated by {} inclusions", sys.len(), gens.len());
    println!("{report}");
    println!("checked in {:.2?}", start.elapsed());
    Ok(())
}
