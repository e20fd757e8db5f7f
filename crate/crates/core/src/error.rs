use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Malformed carrier data, detected before any axiom is evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("algebra has no elements")]
    Empty,
    #[error("invalid element id `{0}` (ids are nonempty alphanumeric/underscore tokens)")]
    InvalidId(String),
    #[error("duplicate element id `{0}`")]
    DuplicateId(String),
    #[error("unknown element id `{id}` in {context}")]
    UnknownId { context: &'static str, id: String },
    #[error("order is not antisymmetric: `{0}` <= `{1}` and `{1}` <= `{0}`")]
    NotAntisymmetric(String, String),
    #[error("ortho is not defined on `{0}`")]
    OrthoMissing(String),
    #[error("ortho is defined twice on `{0}`")]
    OrthoDuplicate(String),
    #[error("ortho is not a bijection: `{0}` is the image of two elements")]
    OrthoNotBijective(String),
    #[error("ortho is not involutive on `{0}`")]
    OrthoNotInvolutive(String),
    #[error("map is not total: no image for `{0}`")]
    MapNotTotal(String),
    #[error("map has {got} entries, source has {expected} elements")]
    MapLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("exhaustion budget exceeded while {what}: needs {needed} candidates, budget is {budget}")]
    Budget {
        what: String,
        needed: String,
        budget: u64,
    },
    #[error("frame mismatch: {0}")]
    FrameMismatch(String),
    #[error("algebra mismatch: expected `{expected}`, found `{found}`")]
    AlgebraMismatch { expected: String, found: String },
    #[error("cannot build observable: {0}")]
    Construction(String),
    #[error("composite is not an observable (condition [{condition}] fails at {witness})")]
    NotAnArrow { condition: String, witness: String },
    #[error("arrow {0} does not make the triangle commute")]
    NotCommuting(String),
    #[error("not a category: {0}")]
    NotCategory(String),
    #[error("presheaf sections are not homomorphisms into the target: {0}")]
    NotHomSections(String),
    #[error("counit is representative-dependent: {0}")]
    IllFormedSubfunctor(String),
    #[error("cover {0} is not injective, its pasting map is undefined")]
    NotInvertible(String),
    #[error("cover {0} does not lie in the Hom-functor of the target")]
    NotInHomFunctor(String),
    #[error("cover family is not closed under precomposition: {0}")]
    NotSubfunctor(String),
    #[error("cover {0} does not belong to the system")]
    NotInSystem(String),
    #[error("system is not a localization system: {0}")]
    NotLocalization(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("{0}")]
    Usage(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}
