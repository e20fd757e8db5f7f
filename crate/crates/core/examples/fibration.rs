//! The Boolean power fibration over the block observables of MO2.

use boolean_covers::stone::build_fibration;
use boolean_covers::{corpus, Budget};

fn main() -> boolean_covers::Result<()> {
    let (base, xi) = corpus::mo2_two_block_base();
    let fib = build_fibration(&base, &xi, Budget::DEFAULT)?;
    println!("{} pairs in {} fibers", fib.len(), fib.fibers().len());
    for f in fib.fibers() {
        println!("  {}: {} covers", base.object(f.object).name(), f.covers.len());
    }
    println!("{} related instances generate {} classes", fib.related().len(), fib.classes().len());
    for line in fib.dump() {
        println!("{line}");
    }
    Ok(())
}
