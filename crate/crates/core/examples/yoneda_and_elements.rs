//! Representable presheaves on the MO2 two-block base, the Yoneda count and
//! the category of elements.

use boolean_covers::presheaf::{category_of_elements, natural_transformations, representable, validate_presheaf};
use boolean_covers::{corpus, Budget};

fn main() -> boolean_covers::Result<()> {
    let (base, _) = corpus::mo2_two_block_base();
    println!("{}", base.validate());
    for (i, obj) in base.objects().iter().enumerate() {
        println!("object {i}: {} over {}", obj.name(), obj.target().name());
    }

    for theta in 0..base.objects().len() {
        for xi in 0..base.objects().len() {
            let (yt, yx) = (representable(&base, theta), representable(&base, xi));
            let nat = natural_transformations(&yt, &yx, Budget::DEFAULT)?.len();
            let hom = base.hom_set(theta, xi).len();
            println!(
                "Hom({0}, {1}) = {hom}, Nat(y[{0}], y[{1}]) = {nat}",
                base.object(theta).name(),
                base.object(xi).name()
            );
        }
    }

    let y = representable(&base, 0);
    println!("\n{}", validate_presheaf(&y));
    let el = category_of_elements(&y);
    println!("elements of y[{}]: {} objects, {} arrows", base.object(0).name(), el.pairs().len(), el.arrows().len());
    println!("fibers discrete: {}, projection functorial: {}", el.fibers_discrete(), el.projection_is_functorial());
    for t in el.terminal_objects() {
        let (o, s) = el.pairs()[t];
        println!("terminal: {}", y.section_label(o, s));
    }
    Ok(())
}
