//! End-to-end verdicts: does a system of Boolean covers represent its target
//! faithfully?

use boolean_covers::localization::{boolean_representation_verdict, PrelocalizationSystem};
use boolean_covers::{corpus, Budget};

fn main() -> boolean_covers::Result<()> {
    let runs = [
        (corpus::mo2_library(), "mo2_both"),
        (corpus::mo2_library(), "mo2_single"),
        (corpus::mo2_library(), "mo2_single_b"),
        (corpus::b4_library(), "b4_identity"),
    ];
    for (lib, name) in &runs {
        let spec = lib.system(name).expect("bundled system");
        let sys = PrelocalizationSystem::from_library(lib, spec, Budget::DEFAULT)?;
        let report = boolean_representation_verdict(&sys)?;
        println!("{report}");
    }
    Ok(())
}
