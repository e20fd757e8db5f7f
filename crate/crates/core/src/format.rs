//! Line-oriented text formats for algebras, observables, homomorphisms and
//! cover systems, and a [`Library`] that resolves the names they reference.
//!
//! A file is a sequence of sections, each opened by one of the keywords
//! `algebra`, `observable`, `hom` or `system`. Blank lines and lines starting
//! with `#` are ignored.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{is_valid_id, AlgebraSpec, EventAlgebra, EventHomomorphism};
use crate::error::{Error, Result};
use crate::observable::{observable_from_atoms, BorelFrame, Cut, Observable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservableSpec {
    pub name: String,
    pub cells: usize,
    pub cuts: Vec<Cut>,
    pub target: String,
    /// `(cell, element id)`.
    pub atoms: Vec<(usize, String)>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    pub pairs: Vec<(String, String)>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    pub name: String,
    pub target: String,
    /// `(object name, hom name)`.
    pub covers: Vec<(String, String)>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Algebra(AlgebraSpec),
    Observable(ObservableSpec),
    Hom(HomSpec),
    System(SystemSpec),
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a cut point written as an integer, `p/q` or a decimal.
pub fn parse_cut(s: &str) -> Option<Cut> {
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return None;
        }
        let negative = int.starts_with('-');
        let whole: i64 = match int.trim_start_matches(['-', '+']) {
            "" => 0,
            w => w.parse().ok()?,
        };
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let num = whole.checked_mul(scale)?.checked_add(frac.parse::<i64>().ok()?)?;
        return Some(Cut::new(if negative { -num } else { num }, scale));
    }
    if let Some((p, q)) = s.split_once('/') {
        let (p, q): (i64, i64) = (p.parse().ok()?, q.parse().ok()?);
        return (q != 0).then(|| Cut::new(p, q));
    }
    s.parse::<i64>().ok().map(Cut::from_integer)
}

struct Builder {
    item: Item,
    line: usize,
    seen_top: bool,
}

/// Parses every section of a document.
pub fn parse(text: &str) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    let mut current: Option<Builder> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let words: Vec<&str> = trimmed.split_whitespace().collect();
        let opener = match words[0] {
            "algebra" => {
                let [_, name] = words[..] else {
                    return Err(err(line, "expected `algebra <name>`"));
                };
                Some(Item::Algebra(AlgebraSpec {
                    name: name.to_string(),
                    elements: Vec::new(),
                    top: String::new(),
                    leq: Vec::new(),
                    ortho: Vec::new(),
                }))
            }
            "observable" => {
                let [_, name] = words[..] else {
                    return Err(err(line, "expected `observable <name>`"));
                };
                Some(Item::Observable(ObservableSpec {
                    name: name.to_string(),
                    cells: 0,
                    cuts: Vec::new(),
                    target: String::new(),
                    atoms: Vec::new(),
                    line,
                }))
            }
            "hom" => {
                let [_, name, source, "->", target] = words[..] else {
                    return Err(err(line, "expected `hom <name> <source> -> <target>`"));
                };
                Some(Item::Hom(HomSpec {
                    name: name.to_string(),
                    source: source.to_string(),
                    target: target.to_string(),
                    pairs: Vec::new(),
                    line,
                }))
            }
            "system" => {
                let [_, name, "target", target] = words[..] else {
                    return Err(err(line, "expected `system <name> target <observable>`"));
                };
                Some(Item::System(SystemSpec {
                    name: name.to_string(),
                    target: target.to_string(),
                    covers: Vec::new(),
                    line,
                }))
            }
            _ => None,
        };
        if let Some(item) = opener {
            if let Some(done) = current.take() {
                items.push(finish(done)?);
            }
            current = Some(Builder {
                item,
                line,
                seen_top: false,
            });
            continue;
        }
        let Some(b) = current.as_mut() else {
            return Err(err(line, format!("`{}` outside of any section", words[0])));
        };
        body_line(b, line, &words)?;
    }
    if let Some(done) = current.take() {
        items.push(finish(done)?);
    }
    Ok(items)
}

fn body_line(b: &mut Builder, line: usize, words: &[&str]) -> Result<()> {
    match &mut b.item {
        Item::Algebra(spec) => match words {
            ["elements", ids @ ..] => {
                if !spec.elements.is_empty() {
                    return Err(err(line, "second `elements` line"));
                }
                for id in ids {
                    if !is_valid_id(id) {
                        return Err(err(line, format!("invalid element id `{id}`")));
                    }
                    if spec.elements.iter().any(|e| e == id) {
                        return Err(err(line, format!("duplicate element id `{id}`")));
                    }
                    spec.elements.push(id.to_string());
                }
            }
            ["top", id] => {
                known(spec, line, id)?;
                if b.seen_top {
                    return Err(err(line, "second `top` line"));
                }
                spec.top = id.to_string();
                b.seen_top = true;
            }
            ["leq", x, y] => {
                known(spec, line, x)?;
                known(spec, line, y)?;
                spec.leq.push((x.to_string(), y.to_string()));
            }
            ["ortho", x, y] => {
                known(spec, line, x)?;
                known(spec, line, y)?;
                if spec.ortho.iter().any(|(a, _)| a == x) {
                    return Err(err(line, format!("ortho of `{x}` given twice")));
                }
                spec.ortho.push((x.to_string(), y.to_string()));
            }
            _ => return Err(err(line, format!("unexpected `{}` in algebra section", words.join(" ")))),
        },
        Item::Observable(spec) => match words {
            ["frame", k] => {
                spec.cells = k
                    .parse()
                    .ok()
                    .filter(|&k: &usize| k >= 1)
                    .ok_or_else(|| err(line, format!("bad cell count `{k}`")))?;
            }
            ["cuts", cuts @ ..] => {
                spec.cuts = cuts
                    .iter()
                    .map(|c| parse_cut(c).ok_or_else(|| err(line, format!("bad cut point `{c}`"))))
                    .collect::<Result<_>>()?;
            }
            ["target", name] => spec.target = name.to_string(),
            ["atom", cell, "->", id] => {
                let cell = cell
                    .parse()
                    .map_err(|_| err(line, format!("bad cell index `{cell}`")))?;
                spec.atoms.push((cell, id.to_string()));
            }
            _ => {
                return Err(err(
                    line,
                    format!("unexpected `{}` in observable section", words.join(" ")),
                ))
            }
        },
        Item::Hom(spec) => match words {
            ["map", x, "->", y] => spec.pairs.push((x.to_string(), y.to_string())),
            _ => return Err(err(line, format!("unexpected `{}` in hom section", words.join(" ")))),
        },
        Item::System(spec) => match words {
            ["cover", obj, ":", hom] => spec.covers.push((obj.to_string(), hom.to_string())),
            _ => return Err(err(line, format!("unexpected `{}` in system section", words.join(" ")))),
        },
    }
    Ok(())
}

fn known(spec: &AlgebraSpec, line: usize, id: &str) -> Result<()> {
    if spec.elements.iter().any(|e| e == id) {
        Ok(())
    } else {
        Err(err(line, format!("unknown element id `{id}`")))
    }
}

fn finish(b: Builder) -> Result<Item> {
    let line = b.line;
    match &b.item {
        Item::Algebra(spec) => {
            if spec.elements.is_empty() {
                return Err(err(line, format!("algebra {} has no `elements` line", spec.name)));
            }
            if !b.seen_top {
                return Err(err(line, format!("algebra {} has no `top` line", spec.name)));
            }
            let ortho: HashMap<&str, &str> =
                spec.ortho.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
            for e in &spec.elements {
                let Some(o) = ortho.get(e.as_str()) else {
                    return Err(err(line, format!("algebra {}: no ortho line for `{e}`", spec.name)));
                };
                if ortho.get(o).copied() != Some(e.as_str()) {
                    return Err(err(
                        line,
                        format!("algebra {}: ortho is not involutive on `{e}`", spec.name),
                    ));
                }
            }
        }
        Item::Observable(spec) => {
            if spec.cells == 0 {
                return Err(err(line, format!("observable {} has no `frame` line", spec.name)));
            }
            if spec.cuts.len() + 1 != spec.cells {
                return Err(err(
                    line,
                    format!(
                        "observable {}: {} cells need {} cut points, found {}",
                        spec.name,
                        spec.cells,
                        spec.cells - 1,
                        spec.cuts.len()
                    ),
                ));
            }
            if spec.target.is_empty() {
                return Err(err(line, format!("observable {} has no `target` line", spec.name)));
            }
            let mut cells: Vec<usize> = spec.atoms.iter().map(|(c, _)| *c).collect();
            cells.sort_unstable();
            if cells != (0..spec.cells).collect::<Vec<_>>() {
                return Err(err(
                    line,
                    format!("observable {} needs one `atom` line per cell", spec.name),
                ));
            }
        }
        Item::Hom(_) | Item::System(_) => {}
    }
    Ok(b.item)
}

/// Parses a document holding exactly one algebra section.
pub fn parse_algebra(text: &str) -> Result<AlgebraSpec> {
    let mut algebras = parse(text)?.into_iter().filter_map(|i| match i {
        Item::Algebra(a) => Some(a),
        _ => None,
    });
    match (algebras.next(), algebras.next()) {
        (Some(a), None) => Ok(a),
        _ => Err(err(1, "expected exactly one algebra section")),
    }
}

/// Writes an algebra in the lattice format, listing the covering relation
/// only.
pub fn write_algebra(alg: &EventAlgebra) -> String {
    let mut out = format!("algebra {}\nelements {}\ntop {}\n", alg.name(), alg.ids().join(" "), alg.id(alg.top()));
    for x in alg.elements() {
        for y in alg.elements() {
            let covers = x != y
                && alg.leq(x, y)
                && !alg.elements().any(|z| z != x && z != y && alg.leq(x, z) && alg.leq(z, y));
            if covers {
                out.push_str(&format!("leq {} {}\n", alg.id(x), alg.id(y)));
            }
        }
    }
    for x in alg.elements() {
        out.push_str(&format!("ortho {} {}\n", alg.id(x), alg.id(alg.ortho(x))));
    }
    out
}

/// Every named object of a set of documents, with references resolved.
///
/// Observables whose atom images do not extend to an observable are kept
/// aside in [`Library::rejected`] instead of failing the whole load.
#[derive(Debug, Clone, Default)]
pub struct Library {
    algebras: Vec<Arc<EventAlgebra>>,
    observables: Vec<Arc<Observable>>,
    homs: Vec<(String, EventHomomorphism)>,
    systems: Vec<SystemSpec>,
    rejected: Vec<(String, String)>,
    frames: Vec<Arc<BorelFrame>>,
}

impl Library {
    /// Resolves `(origin, text)` sources. Parse errors are prefixed with the
    /// origin.
    pub fn from_sources<S: AsRef<str>, T: AsRef<str>>(sources: &[(S, T)]) -> Result<Self> {
        let mut items = Vec::new();
        for (origin, text) in sources {
            let parsed = parse(text.as_ref()).map_err(|e| match e {
                Error::Parse { line, message } => Error::Parse {
                    line,
                    message: format!("{}: {message}", origin.as_ref()),
                },
                other => other,
            })?;
            items.extend(parsed);
        }
        let mut lib = Library::default();
        for item in &items {
            if let Item::Algebra(spec) = item {
                if lib.algebra(&spec.name).is_some() {
                    return Err(Error::Usage(format!("algebra {} defined twice", spec.name)));
                }
                lib.algebras.push(Arc::new(EventAlgebra::from_spec(spec)?));
            }
        }
        for item in &items {
            match item {
                Item::Observable(spec) => lib.add_observable(spec)?,
                Item::Hom(spec) => {
                    let src = lib.require_algebra(&spec.source)?;
                    let dst = lib.require_algebra(&spec.target)?;
                    let h = EventHomomorphism::from_pairs(src, dst, &spec.pairs)?;
                    // system files may repeat a shared hom verbatim
                    match lib.hom(&spec.name) {
                        Some(prev) if *prev == h => {}
                        Some(_) => {
                            return Err(Error::Usage(format!("hom {} defined twice with different maps", spec.name)))
                        }
                        None => lib.homs.push((spec.name.clone(), h)),
                    }
                }
                Item::System(spec) => lib.systems.push(spec.clone()),
                Item::Algebra(_) => {}
            }
        }
        Ok(lib)
    }

    /// Reads and resolves files.
    pub fn load<P: AsRef<std::path::Path>>(paths: &[P]) -> Result<Self> {
        let sources = paths
            .iter()
            .map(|p| {
                let p = p.as_ref();
                std::fs::read_to_string(p)
                    .map(|t| (p.display().to_string(), t))
                    .map_err(|e| Error::Io {
                        path: p.display().to_string(),
                        message: e.to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Library::from_sources(&sources)
    }

    fn add_observable(&mut self, spec: &ObservableSpec) -> Result<()> {
        if self.observable(&spec.name).is_some() || self.rejected.iter().any(|(n, _)| *n == spec.name) {
            return Err(Error::Usage(format!("observable {} defined twice", spec.name)));
        }
        let target = self.require_algebra(&spec.target)?;
        let frame = match self.frames.iter().find(|f| f.cuts() == spec.cuts.as_slice()) {
            Some(f) => f.clone(),
            None => {
                let f = Arc::new(BorelFrame::new(spec.cuts.clone()).map_err(|e| err(spec.line, e.to_string()))?);
                self.frames.push(f.clone());
                f
            }
        };
        let mut images = vec![0; spec.cells];
        for (cell, id) in &spec.atoms {
            images[*cell] = target.index_of(id).ok_or_else(|| {
                err(spec.line, format!("observable {}: unknown element `{id}` of {}", spec.name, target.name()))
            })?;
        }
        match observable_from_atoms(spec.name.clone(), frame, target, &images) {
            Ok(obs) => self.observables.push(Arc::new(obs)),
            Err(Error::Construction(msg)) => self.rejected.push((spec.name.clone(), msg)),
            Err(e) => return Err(e),
        }
        Ok(())
    }

    pub fn algebras(&self) -> &[Arc<EventAlgebra>] {
        &self.algebras
    }

    pub fn observables(&self) -> &[Arc<Observable>] {
        &self.observables
    }

    pub fn homs(&self) -> &[(String, EventHomomorphism)] {
        &self.homs
    }

    pub fn systems(&self) -> &[SystemSpec] {
        &self.systems
    }

    /// Observables that failed construction, with the reason.
    pub fn rejected(&self) -> &[(String, String)] {
        &self.rejected
    }

    pub fn algebra(&self, name: &str) -> Option<&Arc<EventAlgebra>> {
        self.algebras.iter().find(|a| a.name() == name)
    }

    pub fn observable(&self, name: &str) -> Option<&Arc<Observable>> {
        self.observables.iter().find(|o| o.name() == name)
    }

    pub fn hom(&self, name: &str) -> Option<&EventHomomorphism> {
        self.homs.iter().find(|(n, _)| n == name).map(|(_, h)| h)
    }

    pub fn system(&self, name: &str) -> Option<&SystemSpec> {
        self.systems.iter().find(|s| s.name == name)
    }

    pub fn require_algebra(&self, name: &str) -> Result<Arc<EventAlgebra>> {
        self.algebra(name).cloned().ok_or_else(|| Error::Unknown {
            kind: "algebra",
            name: name.to_string(),
        })
    }

    pub fn require_observable(&self, name: &str) -> Result<Arc<Observable>> {
        if let Some((_, why)) = self.rejected.iter().find(|(n, _)| n == name) {
            return Err(Error::Construction(format!("{name}: {why}")));
        }
        self.observable(name).cloned().ok_or_else(|| Error::Unknown {
            kind: "observable",
            name: name.to_string(),
        })
    }

    pub fn require_hom(&self, name: &str) -> Result<&EventHomomorphism> {
        self.hom(name).ok_or_else(|| Error::Unknown {
            kind: "hom",
            name: name.to_string(),
        })
    }
}
