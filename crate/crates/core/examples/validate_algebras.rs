//! Axiom reports for the bundled algebras, including two deliberately broken
//! ones.
//!
//! ```text
//! cargo run --example validate_algebras
//! ```

use boolean_covers::{corpus, validate_boolean_algebra, validate_quantum_algebra};

fn main() {
    let mut algebras = corpus::algebras();
    algebras.push(corpus::hexagon());
    algebras.push(corpus::mo2_bad_ortho());

    for alg in &algebras {
        println!("{}", validate_quantum_algebra(alg));
        let boolean = validate_boolean_algebra(alg);
        match boolean.first_failure() {
            None => println!("  Boolean: yes\n"),
            Some(c) => println!("  Boolean: no, {} fails at {:?}\n", c.name, c.witness.clone().unwrap_or_default()),
        }
    }
}
