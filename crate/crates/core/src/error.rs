use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("unknown root system type `{0}`")]
    UnknownType(String),

    #[error("node index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("elements belong to different Weyl groups")]
    GroupMismatch,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not divisible: no exact quotient exists in the group ring")]
    NotDivisible,

    #[error("element is not in the subring generated by the e^(-alpha_i)")]
    NotInSubring,

    #[error("class is not in the span of the Schubert classes indexed by W^P: {0}")]
    NotInSpan(String),

    #[error(
        "{element} is not a minimal length coset representative for the parabolic {parabolic}"
    )]
    NotMinimalRepresentative { element: String, parabolic: String },

    #[error("node {k} lies in the parabolic {parabolic}")]
    NodeInParabolic { k: usize, parabolic: String },

    #[error(
        "parabolic {parabolic} is not {k}-free: it contains a simple root adjacent to alpha_{k}"
    )]
    NotKFree { k: usize, parabolic: String },

    #[error(
        "(P, alpha_{k}) with P = {parabolic} is outside the admissible class: alpha_{k} is short and \
         the component of alpha_{k} in Delta_P + alpha_{k} is not simply laced (cf. the B2 counterexample)"
    )]
    NotInClassP { k: usize, parabolic: String },

    #[error("parabolic {inner} is not contained in {outer}")]
    NotContained { inner: String, outer: String },
}

pub type Result<T> = std::result::Result<T, Error>;
