use thiserror::Error;

/// Crate-wide error type. Variant names follow the failure modes of the
/// operation that raises them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("field size {0} exceeds the configured cap {1}")]
    UnsupportedSize(u128, u64),
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("field mismatch between operands")]
    FieldMismatch,
    #[error("quiver algebra is infinite-dimensional at path length cap {cap}: {detail}")]
    InfiniteDimensional { cap: usize, detail: String },
    #[error("malformed relation: {0}")]
    MalformedRelation(String),
    #[error("multiplication table is not associative: {0}")]
    NonAssociative(String),
    #[error("operands live over different algebras")]
    AlgebraMismatch,
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("algebra too large: {0}")]
    AlgebraTooLarge(String),
    #[error("subcategory spec {0} is not resolving")]
    NotResolvingSpec(String),
    #[error("module is not rigid: Ext^{witness_degree}(T,T) has dimension {witness_dim}")]
    NotRigid {
        witness_degree: usize,
        witness_dim: usize,
    },
    #[error("no add(T)-coresolution of the regular module found within bound {0}")]
    CoresolutionNotFound(usize),
    #[error("functor table violates functoriality: {0}")]
    NotFunctorial(String),
    #[error("module is not certified of Gorenstein-projective dimension <= 1")]
    NotGPdim1,
    #[error("argument is not flagged P^{{<=1}} in the context")]
    NotPLE1,
    #[error("catalog is incomplete: {0}")]
    IncompleteCatalog(String),
    #[error("commutation rule not certified for classes ({0}, {1})")]
    CommutationNotCertified(usize, usize),
    #[error("truncation overflow: product of grades {0} and {1} exceeds dimension bound {2}")]
    TruncationOverflow(usize, usize, usize),
    #[error("class not found in the catalog over the endomorphism side: {0}")]
    BClassNotInCatalog(String),
    #[error("unsupported exact-structure spec: {0}")]
    UnsupportedSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cache corrupt: {0}")]
    CacheCorrupt(String),
    #[error("{0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
