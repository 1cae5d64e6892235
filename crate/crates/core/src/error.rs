use thiserror::Error;

/// Errors surfaced by library operations.
///
/// Programming mistakes (mismatched variable registries, mixed dimensions in
/// arithmetic operators) panic instead; everything that can be triggered by
/// data reaching the library from outside goes through this enum.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("entries are not rational constants; use the symbolic path")]
    NotRational,

    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),

    #[error("subspace is not an ideal: bracket [e{0}, e{1}] leaves it")]
    NotIdeal(usize, usize),

    #[error("designated ideal is not nilpotent")]
    NotNilpotent,

    #[error("matrix is not a derivation: Leibniz fails on pair (e{0}, e{1})")]
    NotDerivation(usize, usize),

    #[error("derivation has no non-nilpotent part: D^{0} = 0")]
    NilpotentDerivation(usize),

    #[error("form of degree {0} is not closed")]
    NotClosed(usize),

    #[error("cohomology in degree {0} is trivial; no action matrix")]
    TrivialSpace(usize),

    #[error("supplied forms are not a basis of H^{0}: {1}")]
    BadBasis(usize, String),

    #[error("basis change matrix is singular")]
    SingularBasisChange,

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("unknown catalog id `{0}`")]
    UnknownCatalogId(String),

    #[error("catalog data is invalid at line {0}: {1}")]
    CatalogData(usize, String),

    #[error("{0}")]
    Usage(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
