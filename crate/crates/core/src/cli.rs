//! Batch frontend. Exit codes: 0 success, 1 a check failed (witnesses are
//! printed), 2 parse, structural, usage or budget error.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::adjunction::{adjunction_bijection_check, colimit, representable_colimit_check};
use crate::algebra::{enumerate_blocks, validate_boolean_algebra, validate_homomorphism, validate_quantum_algebra, BooleanAlgebra};
use crate::budget::Budget;
use crate::corpus::library_base;
use crate::error::{Error, Result};
use crate::format::Library;
use crate::localization::{boolean_representation_verdict, PrelocalizationSystem};
use crate::observable::{enumerate_observables, validate_observable, BorelFrame, Observable};
use crate::presheaf::{hom_functor_r, representable, Presheaf};
use crate::report::ValidationReport;
use crate::stone::{build_fibration, stone};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ReportFormat {
    #[default]
    Text,
    /// One `PASS|FAIL <check> <witness...>` line per check.
    Lines,
}

#[derive(Debug, Parser)]
#[command(name = "qcover", version, about = "Boolean covers of finite quantum event algebras")]
pub struct Cli {
    /// Maximum number of candidates any exhaustive enumeration may visit.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT.0, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate every algebra, observable, hom and system in the files.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// List the maximal Boolean subalgebras of each algebra.
    Blocks { path: PathBuf },
    /// Enumerate observables from a frame with `cells` cells.
    Observables {
        path: PathBuf,
        #[arg(long)]
        cells: usize,
        /// Restrict to one algebra of the file.
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Dump the colimit classes of a cover system.
    Colimit {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long)]
        system: Option<String>,
    },
    /// Decide whether a cover system represents its target faithfully.
    Represent {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long)]
        system: Option<String>,
    },
    /// Check Nat(X, R(Ξ)) ≅ Hom(LX, Ξ) on the empty presheaf, the
    /// representables and R(Ξ); check the representable colimits.
    Adjunction {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Observable playing Ξ.
        #[arg(long)]
        target: Option<String>,
    },
    /// Stone spaces of the Boolean algebras in a file (blocks for the others).
    Stone { path: PathBuf },
    /// Classes of the Boolean power fibration over the Boolean observables.
    Fibration {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long)]
        target: Option<String>,
    },
}

/// Report text and whether every check passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub report: String,
    pub passed: bool,
}

impl Outcome {
    fn new(lines: Vec<String>, passed: bool) -> Self {
        let mut report = lines.join("\n");
        if !report.is_empty() {
            report.push('\n');
        }
        Outcome { report, passed }
    }
}

/// Parses arguments, runs, writes the report, returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &outcome.report).map_err(|e| Error::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                }),
                None => {
                    print!("{}", outcome.report);
                    Ok(())
                }
            };
            match written {
                Ok(()) if outcome.passed => 0,
                Ok(()) => 1,
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let budget = Budget(cli.budget);
    let fmt = cli.format;
    match &cli.command {
        Command::Validate { paths } => validate(&Library::load(paths)?, budget, fmt),
        Command::Blocks { path } => blocks(&Library::load(&[path])?),
        Command::Observables { path, cells, algebra } => {
            observables(&Library::load(&[path])?, *cells, algebra.as_deref(), budget)
        }
        Command::Colimit { paths, system } => {
            let lib = Library::load(paths)?;
            let sys = resolve_system(&lib, system.as_deref(), budget)?;
            let carrier = colimit(&sys.presheaf());
            let mut lines = Vec::new();
            if fmt == ReportFormat::Text {
                lines.push(format!(
                    "colimit of {}: {} generators, {} classes",
                    sys.name(),
                    carrier.generators().len(),
                    carrier.num_classes()
                ));
            }
            lines.extend(carrier.dump());
            Ok(Outcome::new(lines, true))
        }
        Command::Represent { paths, system } => {
            let lib = Library::load(paths)?;
            let sys = resolve_system(&lib, system.as_deref(), budget)?;
            match boolean_representation_verdict(&sys) {
                Ok(report) => {
                    let lines = match fmt {
                        ReportFormat::Text => vec![report.to_string().trim_end().to_string()],
                        ReportFormat::Lines => report.lines(),
                    };
                    Ok(Outcome::new(lines, report.is_iso()))
                }
                Err(Error::NotLocalization(why)) => Ok(Outcome::new(
                    vec![
                        format!("FAIL {}:localization {why}", sys.name()),
                        format!("FAIL {}:verdict NOT-ISO", sys.name()),
                    ],
                    false,
                )),
                Err(e) => Err(e),
            }
        }
        Command::Adjunction { paths, target } => adjunction(&Library::load(paths)?, target.as_deref(), budget, fmt),
        Command::Stone { path } => stone_dump(&Library::load(&[path])?, fmt),
        Command::Fibration { paths, target } => {
            let lib = Library::load(paths)?;
            let xi = resolve_target(&lib, target.as_deref())?;
            let base = library_base(&lib, &xi, budget)?;
            let fib = build_fibration(&base, &xi, budget)?;
            let mut lines = Vec::new();
            if fmt == ReportFormat::Text {
                lines.push(format!(
                    "fibration over {}: {} pairs, {} related instances, {} classes",
                    xi.name(),
                    fib.len(),
                    fib.related().len(),
                    fib.classes().len()
                ));
            }
            lines.extend(fib.dump());
            Ok(Outcome::new(lines, true))
        }
    }
}

fn emit(report: &ValidationReport, fmt: ReportFormat, lines: &mut Vec<String>) {
    match fmt {
        ReportFormat::Text => lines.push(report.to_string().trim_end().to_string()),
        ReportFormat::Lines => lines.extend(report.lines()),
    }
}

fn validate(lib: &Library, budget: Budget, fmt: ReportFormat) -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut passed = true;
    for alg in lib.algebras() {
        let r = validate_quantum_algebra(alg);
        passed &= r.passed();
        emit(&r, fmt, &mut lines);
    }
    for obs in lib.observables() {
        let r = validate_observable(obs);
        passed &= r.passed();
        emit(&r, fmt, &mut lines);
    }
    for (name, why) in lib.rejected() {
        passed = false;
        lines.push(format!("FAIL {name}:construction {why}"));
    }
    for (name, h) in lib.homs() {
        let mut r = validate_homomorphism(h);
        r.subject = name.clone();
        passed &= r.passed();
        emit(&r, fmt, &mut lines);
    }
    for spec in lib.systems() {
        match PrelocalizationSystem::from_library(lib, spec, budget) {
            Ok(sys) => lines.push(format!("PASS {}:subfunctor {} covers", spec.name, sys.len())),
            Err(e @ (Error::NotInHomFunctor(_) | Error::NotSubfunctor(_))) => {
                passed = false;
                lines.push(format!("FAIL {}:subfunctor {e}", spec.name));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Outcome::new(lines, passed))
}

fn blocks(lib: &Library) -> Result<Outcome> {
    let mut lines = Vec::new();
    for alg in lib.algebras() {
        for b in enumerate_blocks(alg) {
            lines.push(format!("block {} : {}", b.algebra.name(), alg.ids_of(&b.elements).join(" ")));
        }
    }
    Ok(Outcome::new(lines, true))
}

fn observables(lib: &Library, cells: usize, only: Option<&str>, budget: Budget) -> Result<Outcome> {
    let frame = Arc::new(BorelFrame::with_cells(cells).map_err(|e| Error::Usage(e.to_string()))?);
    let algebras = match only {
        Some(name) => vec![lib.require_algebra(name)?],
        None => lib.algebras().to_vec(),
    };
    let mut lines = Vec::new();
    for alg in algebras {
        let all = enumerate_observables(&frame, &alg, budget)?;
        for obs in &all {
            let imgs: Vec<&str> = obs.atom_images().into_iter().map(|y| alg.id(y)).collect();
            lines.push(format!("observable {} : {}", obs.name(), imgs.join(" ")));
        }
        lines.push(format!("total {} {}", alg.name(), all.len()));
    }
    Ok(Outcome::new(lines, true))
}

fn resolve_system(lib: &Library, name: Option<&str>, budget: Budget) -> Result<PrelocalizationSystem> {
    let spec = match name {
        Some(n) => lib.system(n).ok_or_else(|| Error::Unknown {
            kind: "system",
            name: n.to_string(),
        })?,
        None => lib
            .systems()
            .first()
            .ok_or_else(|| Error::Usage("no system section in the input files".into()))?,
    };
    PrelocalizationSystem::from_library(lib, spec, budget)
}

/// The named observable, or the first one with a non-Boolean target, or the
/// first one.
fn resolve_target(lib: &Library, name: Option<&str>) -> Result<Arc<Observable>> {
    if let Some(n) = name {
        return lib.require_observable(n);
    }
    lib.observables()
        .iter()
        .find(|o| !validate_boolean_algebra(o.target()).passed())
        .or_else(|| lib.observables().first())
        .cloned()
        .ok_or_else(|| Error::Usage("no observable in the input files".into()))
}

fn adjunction(lib: &Library, target: Option<&str>, budget: Budget, fmt: ReportFormat) -> Result<Outcome> {
    let xi = resolve_target(lib, target)?;
    let base = library_base(lib, &xi, budget)?;
    let mut cases: Vec<(String, Presheaf)> = vec![("empty".to_string(), Presheaf::empty(base.clone()))];
    for (o, obj) in base.objects().iter().enumerate() {
        cases.push((format!("y[{}]", obj.name()), representable(&base, o)));
    }
    cases.push((format!("R({})", xi.name()), hom_functor_r(&base, &xi, budget)?));

    let mut lines = Vec::new();
    if fmt == ReportFormat::Text {
        lines.push(format!(
            "base: {} objects, {} arrows; target {}",
            base.objects().len(),
            base.arrows().len(),
            xi.name()
        ));
    }
    let mut passed = true;
    for (name, x) in &cases {
        let rep = adjunction_bijection_check(x, &xi, budget)?;
        passed &= rep.is_bijection();
        lines.push(match fmt {
            ReportFormat::Text => format!("bijection {name}: {rep}"),
            ReportFormat::Lines => format!(
                "{} bijection[{name}] nat {} hom {}",
                if rep.is_bijection() { "PASS" } else { "FAIL" },
                rep.nat_count,
                rep.hom_count
            ),
        });
    }
    for o in 0..base.objects().len() {
        let c = representable_colimit_check(&base, o);
        passed &= c.passed();
        lines.push(c.line());
    }
    Ok(Outcome::new(lines, passed))
}

fn stone_dump(lib: &Library, fmt: ReportFormat) -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut passed = true;
    for alg in lib.algebras() {
        let targets = match BooleanAlgebra::new(alg.clone()) {
            Ok(b) => vec![b],
            Err(_) => enumerate_blocks(alg)
                .into_iter()
                .map(|b| BooleanAlgebra::new(b.algebra).expect("blocks are Boolean"))
                .collect(),
        };
        for b in targets {
            let space = stone(&b);
            let verify = space.verify();
            let round_trip = space.round_trip().is_some();
            passed &= verify.passed() && round_trip;
            lines.push(format!("stone {}", b.algebra().name()));
            lines.extend(space.dump());
            if fmt == ReportFormat::Lines {
                lines.extend(verify.lines());
                lines.push(format!(
                    "{} stone {}:round-trip",
                    if round_trip { "PASS" } else { "FAIL" },
                    b.algebra().name()
                ));
            }
        }
    }
    Ok(Outcome::new(lines, passed))
}
