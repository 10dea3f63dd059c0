use std::fmt;

use crate::error::{ParseError, PartitionError};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Ordered disjoint vertex classes `V₁, …, V_p` on `n` vertices.
///
/// Classes are nonempty and each is kept sorted. A partition is *covering*
/// when the classes exhaust the vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPartition {
    n: usize,
    classes: Vec<Vec<usize>>,
    covering: bool,
}

impl VertexPartition {
    pub fn new(n: usize, classes: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut seen = vec![false; n];
        let mut classes = classes;
        for (k, class) in classes.iter_mut().enumerate() {
            if class.is_empty() {
                return Err(PartitionError::EmptyClass(k));
            }
            class.sort_unstable();
            for &v in class.iter() {
                if v >= n {
                    return Err(PartitionError::OutOfRange { vertex: v, n });
                }
                if seen[v] {
                    return Err(PartitionError::Overlap(v));
                }
                seen[v] = true;
            }
        }
        let covering = seen.iter().all(|&s| s);
        Ok(VertexPartition { n, classes, covering })
    }

    /// The single class `V₁ = V`.
    pub fn trivial(n: usize) -> Self {
        let classes = if n == 0 { vec![] } else { vec![(0..n).collect()] };
        VertexPartition { n, classes, covering: true }
    }

    /// Every vertex in its own class.
    pub fn discrete(n: usize) -> Self {
        VertexPartition { n, classes: (0..n).map(|v| vec![v]).collect(), covering: true }
    }

    /// Groups vertices by key, classes ordered by increasing key.
    pub fn by_key<K: Ord>(n: usize, key: impl Fn(usize) -> K) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| key(a).cmp(&key(b)).then(a.cmp(&b)));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for v in order {
            match classes.last_mut() {
                Some(c) if key(c[0]) == key(v) => c.push(v),
                _ => classes.push(vec![v]),
            }
        }
        for c in &mut classes {
            c.sort_unstable();
        }
        VertexPartition { n, classes, covering: true }
    }

    /// Parses `0,1;2,3,4` (classes separated by `;` or `|`).
    pub fn parse(n: usize, spec: &str) -> Result<Self, ParseError> {
        let bad = |m: String| ParseError::Partition(m);
        let mut classes = Vec::new();
        for part in spec.split([';', '|']) {
            let part = part.trim();
            if part.is_empty() {
                return Err(bad(format!("empty class in `{spec}`")));
            }
            let class = part
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad(format!("bad vertex `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            classes.push(class);
        }
        VertexPartition::new(n, classes).map_err(|e| bad(e.to_string()))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of classes `p`.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_covering(&self) -> bool {
        self.covering
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> Result<&[usize], PartitionError> {
        self.classes.get(i).map(Vec::as_slice).ok_or(PartitionError::ClassIndex { index: i, p: self.classes.len() })
    }

    /// Class index of each vertex, `None` for uncovered vertices.
    pub fn class_of(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.n];
        for (k, c) in self.classes.iter().enumerate() {
            for &v in c {
                out[v] = Some(k);
            }
        }
        out
    }

    /// The 0/1 column `eᵢ` (classes are 0-indexed).
    pub fn indicator_vector<T: Scalar>(&self, i: usize) -> Result<Matrix<T>, PartitionError> {
        let class = self.class(i)?;
        let mut e = Matrix::zeros(self.n, 1);
        for &v in class {
            e[(v, 0)] = T::one();
        }
        Ok(e)
    }

    /// `J_{i,j} = eᵢ eⱼᵀ`.
    pub fn block_ones<T: Scalar>(&self, i: usize, j: usize) -> Result<Matrix<T>, PartitionError> {
        let ei = self.indicator_vector::<T>(i)?;
        let ej = self.indicator_vector::<T>(j)?;
        Ok(&ei * &ej.transpose())
    }

    /// `Dᵢ`: the 0/1 diagonal of class `i`.
    pub fn class_diagonal<T: Scalar>(&self, i: usize) -> Result<Matrix<T>, PartitionError> {
        let class = self.class(i)?;
        let mut d = Matrix::zeros(self.n, self.n);
        for &v in class {
            d[(v, v)] = T::one();
        }
        Ok(d)
    }

    /// True if `perm` maps every class onto itself.
    pub fn is_preserved_by(&self, perm: &[usize]) -> bool {
        let of = self.class_of();
        perm.len() == self.n && (0..self.n).all(|v| of[v] == of[perm[v]])
    }

    /// Restriction to the vertex subset `keep` (given in increasing order),
    /// renumbered `0..keep.len()`. Classes that become empty are dropped.
    pub fn restrict(&self, keep: &[usize]) -> VertexPartition {
        let mut index = vec![None; self.n];
        for (k, &v) in keep.iter().enumerate() {
            index[v] = Some(k);
        }
        let classes: Vec<Vec<usize>> = self
            .classes
            .iter()
            .map(|c| c.iter().filter_map(|&v| index[v]).collect::<Vec<_>>())
            .filter(|c: &Vec<usize>| !c.is_empty())
            .collect();
        VertexPartition::new(keep.len(), classes).expect("restriction of a valid partition")
    }

    /// The same classes ordered by their smallest vertex.
    pub fn canonical(&self) -> VertexPartition {
        let mut classes = self.classes.clone();
        classes.sort_unstable();
        VertexPartition { n: self.n, classes, covering: self.covering }
    }

    pub fn require_covering(&self) -> Result<(), PartitionError> {
        if self.covering {
            Ok(())
        } else {
            Err(PartitionError::NotCovering)
        }
    }
}

impl fmt::Display for VertexPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.classes.iter().map(|c| c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", parts.join(";"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RationalMatrix;

    #[test]
    fn validation() {
        assert_eq!(VertexPartition::new(3, vec![vec![]]), Err(PartitionError::EmptyClass(0)));
        assert_eq!(VertexPartition::new(3, vec![vec![0, 3]]), Err(PartitionError::OutOfRange { vertex: 3, n: 3 }));
        assert_eq!(VertexPartition::new(3, vec![vec![0, 1], vec![1]]), Err(PartitionError::Overlap(1)));
        let p = VertexPartition::new(3, vec![vec![2], vec![0]]).unwrap();
        assert!(!p.is_covering());
        assert!(p.require_covering().is_err());
    }

    #[test]
    fn indicator_vectors() {
        let p = VertexPartition::trivial(3);
        let e: RationalMatrix = p.indicator_vector(0).unwrap();
        assert_eq!(e, RationalMatrix::from_i64_rows(&[&[1], &[1], &[1]]));

        let q = VertexPartition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let e1: RationalMatrix = q.indicator_vector(1).unwrap();
        assert_eq!(e1, RationalMatrix::from_i64_rows(&[&[0], &[0], &[1]]));
        let e0: RationalMatrix = q.indicator_vector(0).unwrap();
        assert!((&e0.transpose() * &e1).is_zero());
        assert!(q.indicator_vector::<crate::Rational>(2).is_err());
    }

    #[test]
    fn indicator_outer_products_sum_to_identity_diagonal() {
        let p = VertexPartition::new(5, vec![vec![0, 3], vec![1], vec![2, 4]]).unwrap();
        let mut sum = RationalMatrix::zeros(5, 5);
        for i in 0..p.len() {
            sum = &sum + &p.class_diagonal(i).unwrap();
        }
        assert_eq!(sum, RationalMatrix::identity(5));
    }

    #[test]
    fn parse_spec() {
        let p = VertexPartition::parse(5, "0,1;2,3,4").unwrap();
        assert_eq!(p.classes(), &[vec![0, 1], vec![2, 3, 4]]);
        assert_eq!(VertexPartition::parse(5, "4|0").unwrap().to_string(), "4;0");
        assert!(VertexPartition::parse(5, "0,1;;2").is_err());
        assert!(VertexPartition::parse(5, "0,x").is_err());
        assert!(VertexPartition::parse(3, "0,1;1,2").is_err());
    }

    #[test]
    fn restriction_and_preservation() {
        let p = VertexPartition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(p.is_preserved_by(&[2, 3, 0, 1]));
        assert!(!p.is_preserved_by(&[1, 0, 2, 3]));
        let r = p.restrict(&[1, 2, 3]);
        assert_eq!(r.classes(), &[vec![1], vec![0, 2]]);
    }
}
