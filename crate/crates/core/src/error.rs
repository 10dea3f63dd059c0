use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("invalid scalar `{0}`")]
    Scalar(String),
    #[error("line {line}: {msg}")]
    Matrix { line: usize, msg: String },
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("invalid partition spec: {0}")]
    Partition(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("entry ({row}, {col}) is not integral")]
    NotIntegral { row: usize, col: usize },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("coefficient matrix is rank deficient (rank {rank} < {cols} unknowns)")]
    RankDeficient { rank: usize, cols: usize },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("class {0} is empty")]
    EmptyClass(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} appears in more than one class")]
    Overlap(usize),
    #[error("class index {index} out of range (p = {p})")]
    ClassIndex { index: usize, p: usize },
    #[error("relation requires a covering partition")]
    NotCovering,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PencilError {
    #[error("relation {0} requires a vertex partition")]
    MissingPartition(&'static str),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("order mismatch: {0}")]
    Order(String),
    #[error("deterministic mode needs {nodes} evaluation nodes, budget is {budget}")]
    OverBudget { nodes: u128, budget: u128 },
    #[error("pencil coefficients must be square and nonempty")]
    Shape,
    #[error("relation {0} is not defined for this input kind")]
    WrongKind(&'static str),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SimilarityError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("matrix order {matrix} does not match partition order {partition}")]
    Order { matrix: usize, partition: usize },
    #[error("matrix is not symmetric (Hermitian)")]
    NotHermitian,
    #[error("entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },
    #[error("tolerance must be positive")]
    Tolerance,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("builtin enumeration supports 1 ≤ n ≤ 7, got {0}")]
    Order(usize),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}: {source}")]
    Parse { path: String, line: usize, source: ParseError },
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error("relation {0} does not apply here")]
    Relation(&'static str),
    #[error("thread pool: {0}")]
    Threads(String),
}
