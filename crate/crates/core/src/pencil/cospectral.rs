use serde::Serialize;

use crate::error::PencilError;
use crate::graph::{Digraph, Graph, VertexPartition};
use crate::matrix::Matrix;
use crate::scalar::ExactScalar;
use crate::{GaussianRational, Rational};

use super::{build_pencil, pencil_equal, PencilComparison, PitOptions, SpectrumKind, SpectrumRelation};

/// How the shared vertex partition is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionChoice {
    /// Degree classes of the first graph; the second must have the same ones.
    Degree,
    Explicit(VertexPartition),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CospectralVerdict {
    pub relation: SpectrumKind,
    pub equal: bool,
    /// False when the degree partitions differ, which decides the verdict
    /// without evaluating any pencil.
    pub partitions_match: bool,
    pub comparison: Option<PencilComparison>,
}

/// Compares the pencils of `a` and `b` under `relation`.
pub fn matrices_cospectral<T: ExactScalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    relation: &SpectrumRelation,
    opts: &PitOptions,
) -> Result<PencilComparison, PencilError> {
    if a.shape() != b.shape() {
        return Err(PencilError::Order(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    pencil_equal(&build_pencil(relation, a)?, &build_pencil(relation, b)?, opts)
}

fn resolve(
    kind: SpectrumKind,
    choice: &PartitionChoice,
    first: VertexPartition,
    second: VertexPartition,
) -> Result<Option<SpectrumRelation>, PencilError> {
    if !kind.needs_partition() {
        return SpectrumRelation::new(kind, None).map(Some);
    }
    let part = match choice {
        PartitionChoice::Degree if first != second => return Ok(None),
        PartitionChoice::Degree => first,
        PartitionChoice::Explicit(p) => p.clone(),
    };
    SpectrumRelation::new(kind, Some(part)).map(Some)
}

fn verdict<T: ExactScalar>(
    kind: SpectrumKind,
    relation: Option<SpectrumRelation>,
    a: &Matrix<T>,
    b: &Matrix<T>,
    opts: &PitOptions,
) -> Result<CospectralVerdict, PencilError> {
    match relation {
        None => Ok(CospectralVerdict { relation: kind, equal: false, partitions_match: false, comparison: None }),
        Some(rel) => {
            let c = matrices_cospectral(a, b, &rel, opts)?;
            Ok(CospectralVerdict { relation: kind, equal: c.equal, partitions_match: true, comparison: Some(c) })
        }
    }
}

/// Decides whether `g` and `h` have the same multivariate spectrum.
pub fn are_cospectral(
    g: &Graph,
    h: &Graph,
    kind: SpectrumKind,
    choice: &PartitionChoice,
    opts: &PitOptions,
) -> Result<CospectralVerdict, PencilError> {
    if kind.is_digraph_kind() {
        return Err(PencilError::WrongKind("hgbls applies to digraphs only"));
    }
    if g.order() != h.order() {
        return Err(PencilError::Order(format!("{} vs {} vertices", g.order(), h.order())));
    }
    let rel = resolve(kind, choice, g.degree_partition(), h.degree_partition())?;
    verdict(kind, rel, &g.adjacency::<Rational>(), &h.adjacency::<Rational>(), opts)
}

/// Same as [`are_cospectral`] on Hermitian adjacency matrices. Degree
/// classes are `(out, in)` degree classes.
pub fn are_cospectral_digraphs(
    g: &Digraph,
    h: &Digraph,
    kind: SpectrumKind,
    choice: &PartitionChoice,
    opts: &PitOptions,
) -> Result<CospectralVerdict, PencilError> {
    if g.order() != h.order() {
        return Err(PencilError::Order(format!("{} vs {} vertices", g.order(), h.order())));
    }
    let rel = resolve(kind, choice, g.degree_partition(), h.degree_partition())?;
    verdict(kind, rel, &g.hermitian_adjacency::<GaussianRational>(), &h.hermitian_adjacency::<GaussianRational>(), opts)
}
