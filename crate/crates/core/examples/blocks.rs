//! Maximal Boolean subalgebras ("blocks") of MO2 and of the three-block
//! lattice, and the homomorphism counts between small algebras.

use boolean_covers::{corpus, enumerate_blocks, enumerate_homomorphisms, Budget};

fn main() -> boolean_covers::Result<()> {
    for alg in [corpus::mo2(), corpus::g3()] {
        println!("{} ({} elements)", alg.name(), alg.len());
        for b in enumerate_blocks(&alg) {
            println!("  {} : {}", b.algebra.name(), alg.ids_of(&b.elements).join(" "));
        }
    }

    let small = [corpus::two_element(), corpus::b4(), corpus::mo2()];
    println!("\nhomomorphisms");
    for s in &small {
        for t in &small {
            let n = enumerate_homomorphisms(s, t, Budget::DEFAULT)?.len();
            println!("  {:>4} -> {:<4} {n}", s.name(), t.name());
        }
    }
    Ok(())
}
