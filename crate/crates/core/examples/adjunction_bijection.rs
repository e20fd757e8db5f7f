//! Nat(X, R(Ξ)) against maps L(X) -> Ξ, counted on both sides.

use boolean_covers::adjunction::{adjunction_bijection_check, representable_colimit_check};
use boolean_covers::presheaf::{hom_functor_r, representable};
use boolean_covers::{corpus, Budget, Presheaf};

fn main() -> boolean_covers::Result<()> {
    let (base, xi) = corpus::mo2_two_block_base();
    let budget = Budget::DEFAULT;

    let mut cases = vec![("empty".to_string(), Presheaf::empty(base.clone()))];
    for o in 0..base.objects().len() {
        cases.push((format!("y[{}]", base.object(o).name()), representable(&base, o)));
    }
    cases.push((format!("R({})", xi.name()), hom_functor_r(&base, &xi, budget)?));

    for (name, x) in &cases {
        let report = adjunction_bijection_check(x, &xi, budget)?;
        println!("{name:>10}: {report}");
    }
    for o in 0..base.objects().len() {
        println!("{}", representable_colimit_check(&base, o).line());
    }

    // budgets are enforced, not advisory
    let r = &cases.last().unwrap().1;
    match adjunction_bijection_check(r, &xi, Budget(5)) {
        Err(e) => println!("with budget 5: {e}"),
        Ok(report) => println!("with budget 5: {report}"),
    }
    Ok(())
}
