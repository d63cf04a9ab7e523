use crate::table::Attribute;
use thiserror::Error;

/// Everything that can go wrong while building, transforming or solving tables.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size k must be at least 2, got {0}")]
    BadAlphabet(u32),
    #[error("duplicate row {0:?}")]
    DuplicateRow(Vec<u32>),
    #[error("duplicate column {0}")]
    DuplicateColumn(Attribute),
    #[error("value {value} is outside E_{k}")]
    ValueOutOfRange { value: u32, k: u32 },
    #[error("decision {0} is not 0 or 1")]
    BadDecision(u32),
    #[error("row has {found} values but the table has {expected} columns")]
    RowLength { expected: usize, found: usize },
    #[error("a table without columns cannot have rows")]
    RowsWithoutColumns,
    #[error("attribute {0} is not a column of the table")]
    UnknownAttribute(Attribute),
    #[error("relabeling has no value for row {0:?}")]
    PartialRelabeling(Vec<u32>),
    #[error("row {0:?} is not a row of the table")]
    RowNotInTable(Vec<u32>),
    #[error("tuple has length {found}, expected {expected}")]
    BadTupleLength { expected: usize, found: usize },
    #[error("measure is not decomposable along tree paths")]
    NotDecomposable,
    #[error("measure is not bounded: {0}")]
    UnboundedMeasure(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("table is not critical")]
    NotCritical,
    #[error("table needs at least two rows")]
    TooFewRows,
    #[error("operation not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid phi: {0}")]
    BadPhi(String),
    #[error("generator set contains 0")]
    ContainsZero,
    #[error("cannot sample {rows} distinct rows from E_{k}^{cols}")]
    TooManyRows { k: u32, cols: usize, rows: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
