use thiserror::Error;

/// Side of a bimodule or comodule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 2^31")]
    InvalidModulus(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("entry {value} out of range for F_{p}")]
    EntryOutOfRange { value: u64, p: u32 },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("associativity fails on basis triple ({i}, {j}, {l})")]
    AssociativityViolation { i: usize, j: usize, l: usize },
    #[error("unit law fails on basis element {0}")]
    UnitViolation(usize),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("map is not multiplicative on basis pair ({i}, {j})")]
    NotMultiplicative { i: usize, j: usize },
    #[error("map does not send 1 to 1")]
    NotUnital,
    #[error("module law fails: {0}")]
    ModuleLaw(String),
    #[error("left action of {i} does not commute with right action of {j}")]
    ActionsDoNotCommute { i: usize, j: usize },
    #[error("operands are modules over different algebras")]
    AlgebraMismatch,
    #[error("{0} is not a bimodule map")]
    NotBimoduleMap(&'static str),
    #[error("comultiplication is not coassociative")]
    NotCoassociative,
    #[error("{0} counit law fails")]
    CounitFails(Side),
    #[error("comodule axiom fails: {0}")]
    NotComodule(String),
    #[error("coring is not finitely generated projective over its base as a left module")]
    NotFgpOverBase,
    #[error("dual sequence stops: stage {0} needs a finitely generated projective restriction")]
    NotProjectiveAtStage(i64),
    #[error("graded structure violated: {0}")]
    Grading(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
