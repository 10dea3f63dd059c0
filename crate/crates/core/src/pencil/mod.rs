//! Matrix pencils `W(s) = Σ sᵢ Aᵢ` and equality of their characteristic
//! polynomials `φ(s; t) = det(tI − W(s))`.

mod cospectral;
mod pit;

pub use cospectral::{
    are_cospectral, are_cospectral_digraphs, matrices_cospectral, CospectralVerdict, PartitionChoice,
};
pub use pit::{
    lower_set_size, pencil_equal, FingerprintPlan, PencilComparison, PencilFingerprint, PitMode, PitOptions,
};

use std::fmt;
use std::str::FromStr;

use crate::error::PencilError;
use crate::graph::VertexPartition;
use crate::matrix::Matrix;
use crate::scalar::ExactScalar;

/// Which multivariate spectrum is compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpectrumKind {
    /// `(A)`: the adjacency spectrum.
    S,
    /// `(A, J)`: spectrum together with the complement's.
    GS,
    /// `(A, D₁, …, D_p)`.
    GDLS,
    /// `(A, J₁₁, …, J_pp)`.
    GBDLS,
    /// `(A, J₁₁, J₁₂, …, J_pp)`, all `p²` blocks.
    GBLS,
    /// `(H, J₁₁, J₁₂, …, J_pp)` with `H` the Hermitian adjacency of a digraph.
    HGBLS,
}

impl SpectrumKind {
    pub const ALL: [SpectrumKind; 6] = [
        SpectrumKind::S,
        SpectrumKind::GS,
        SpectrumKind::GDLS,
        SpectrumKind::GBDLS,
        SpectrumKind::GBLS,
        SpectrumKind::HGBLS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpectrumKind::S => "s",
            SpectrumKind::GS => "gs",
            SpectrumKind::GDLS => "gdls",
            SpectrumKind::GBDLS => "gbdls",
            SpectrumKind::GBLS => "gbls",
            SpectrumKind::HGBLS => "hgbls",
        }
    }

    pub fn needs_partition(self) -> bool {
        !matches!(self, SpectrumKind::S | SpectrumKind::GS)
    }

    pub fn is_digraph_kind(self) -> bool {
        self == SpectrumKind::HGBLS
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl serde::Serialize for SpectrumKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for SpectrumKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SpectrumKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown relation `{s}` (expected s|gs|gdls|gbdls|gbls|hgbls)"))
    }
}

/// A spectrum kind together with the vertex partition it is taken over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumRelation {
    kind: SpectrumKind,
    partition: Option<VertexPartition>,
}

impl SpectrumRelation {
    pub fn new(kind: SpectrumKind, partition: Option<VertexPartition>) -> Result<Self, PencilError> {
        if kind.needs_partition() {
            let p = partition.as_ref().ok_or(PencilError::MissingPartition(kind.name()))?;
            if kind == SpectrumKind::GBDLS {
                p.require_covering()?;
            }
        }
        let partition = if kind.needs_partition() { partition } else { None };
        Ok(SpectrumRelation { kind, partition })
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn partition(&self) -> Option<&VertexPartition> {
        self.partition.as_ref()
    }

    /// Number of pencil variables `k`.
    pub fn variable_count(&self) -> usize {
        let p = self.partition.as_ref().map_or(0, VertexPartition::len);
        match self.kind {
            SpectrumKind::S => 1,
            SpectrumKind::GS => 2,
            SpectrumKind::GDLS | SpectrumKind::GBDLS => 1 + p,
            SpectrumKind::GBLS | SpectrumKind::HGBLS => 1 + p * p,
        }
    }
}

/// Ordered coefficient matrices of equal order with variable labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil<T> {
    labels: Vec<String>,
    matrices: Vec<Matrix<T>>,
}

impl<T: ExactScalar> Pencil<T> {
    pub fn new(labels: Vec<String>, matrices: Vec<Matrix<T>>) -> Result<Self, PencilError> {
        let n = matrices.first().ok_or(PencilError::Shape)?.rows();
        if labels.len() != matrices.len() || matrices.iter().any(|m| m.shape() != (n, n)) {
            return Err(PencilError::Shape);
        }
        Ok(Pencil { labels, matrices })
    }

    pub fn order(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn variable_count(&self) -> usize {
        self.matrices.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrices(&self) -> &[Matrix<T>] {
        &self.matrices
    }

    /// `Σ sᵢ Aᵢ` at the given point.
    pub fn evaluate(&self, s: &[T]) -> Matrix<T> {
        assert_eq!(s.len(), self.matrices.len());
        let n = self.order();
        let mut out = Matrix::zeros(n, n);
        for (c, m) in s.iter().zip(&self.matrices) {
            out = &out + &m.scale(c);
        }
        out
    }
}

/// Coefficient list of the relation's pencil, in the order
/// `A, J`, `A, D₁…D_p`, `A, J₁₁…J_pp` or `A, J₁₁, J₁₂, …, J_pp`.
pub fn build_pencil<T: ExactScalar>(relation: &SpectrumRelation, a: &Matrix<T>) -> Result<Pencil<T>, PencilError> {
    let n = a.require_square().map_err(|_| PencilError::Shape)?;
    if let Some(p) = relation.partition() {
        if p.order() != n {
            return Err(PencilError::Order(format!("matrix has order {n}, partition is on {} vertices", p.order())));
        }
    }
    let mut labels = vec!["s_A".to_string()];
    let mut mats = vec![a.clone()];
    let part = relation.partition();
    match relation.kind() {
        SpectrumKind::S => {}
        SpectrumKind::GS => {
            labels.push("s_J".into());
            mats.push(Matrix::from_fn(n, n, |_, _| T::one()));
        }
        SpectrumKind::GDLS => {
            let p = part.expect("validated");
            for i in 0..p.len() {
                labels.push(format!("s_D{}", i + 1));
                mats.push(p.class_diagonal(i)?);
            }
        }
        SpectrumKind::GBDLS => {
            let p = part.expect("validated");
            for i in 0..p.len() {
                labels.push(format!("s_J{},{}", i + 1, i + 1));
                mats.push(p.block_ones(i, i)?);
            }
        }
        SpectrumKind::GBLS | SpectrumKind::HGBLS => {
            let p = part.expect("validated");
            for i in 0..p.len() {
                for j in 0..p.len() {
                    labels.push(format!("s_J{},{}", i + 1, j + 1));
                    mats.push(p.block_ones(i, j)?);
                }
            }
        }
    }
    Pencil::new(labels, mats)
}
