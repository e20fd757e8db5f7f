//! The colimit of a presheaf as a quotient of (section, element) pairs.

use boolean_covers::adjunction::colimit;
use boolean_covers::presheaf::{hom_functor_r, representable};
use boolean_covers::{corpus, Budget, Presheaf};

fn main() -> boolean_covers::Result<()> {
    let (base, xi) = corpus::mo2_two_block_base();

    // one class per element of the object's algebra
    let y = representable(&base, 0);
    let c = colimit(&y);
    println!("L y[{}]: {} generators, {} classes", base.object(0).name(), c.generators().len(), c.num_classes());
    for line in c.dump() {
        println!("  {line}");
    }

    let r = hom_functor_r(&base, &xi, Budget::DEFAULT)?;
    let c = colimit(&r);
    println!("\nL R({}): {} generators, {} relation pairs, {} classes", xi.name(), c.generators().len(), c.relation().len(), c.num_classes());
    for i in 0..c.num_classes() {
        println!("  class {i} represented by {}", c.class_label(i));
    }

    let empty = colimit(&Presheaf::empty(base.clone()));
    println!("\nL of the empty presheaf has {} classes", empty.num_classes());
    Ok(())
}
