//! Observables as event-algebra maps out of a finite partition of the line.

use std::sync::Arc;

use boolean_covers::observable::{compose_triangle, enumerate_observables, observable_from_atoms, validate_observable};
use boolean_covers::{corpus, enumerate_homomorphisms, BorelFrame, Budget};
use num_rational::Rational64;

fn main() -> boolean_covers::Result<()> {
    // cells (-inf, 0], (0, 1/2], (1/2, +inf)
    let frame = Arc::new(BorelFrame::new(vec![Rational64::from_integer(0), Rational64::new(1, 2)])?);
    for i in 0..frame.k() {
        println!("cell {i}: {}", frame.cell_interval(i));
    }

    let b8 = corpus::b8();
    let ids = ["x", "y", "z"];
    let atoms: Vec<usize> = ids.iter().map(|id| b8.index_of(id).unwrap()).collect();
    let xi = observable_from_atoms("spin", frame.clone(), b8.clone(), &atoms)?;
    println!("\n{}", validate_observable(&xi));

    let mo2 = corpus::mo2();
    for k in 1..=3 {
        let f = Arc::new(BorelFrame::with_cells(k)?);
        println!("observables from {k} cells into mo2: {}", enumerate_observables(&f, &mo2, Budget::DEFAULT)?.len());
    }

    // pushing an observable along a homomorphism gives another observable
    let to_two = enumerate_homomorphisms(&b8, &corpus::two_element(), Budget::DEFAULT)?;
    println!("\n{} homomorphisms b8 -> two; composites:", to_two.len());
    for h in &to_two {
        let coarse = compose_triangle(&xi, h)?;
        let imgs: Vec<&str> = coarse.atom_images().iter().map(|&y| coarse.target().id(y)).collect();
        println!("  {} : {}", h.label(), imgs.join(" "));
    }
    Ok(())
}
