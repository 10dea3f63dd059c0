use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{PencilError, SearchError};
use crate::graph::{Digraph, VertexPartition};
use crate::pencil::{
    build_pencil, pencil_equal, FingerprintPlan, PencilFingerprint, PitMode, PitOptions, SpectrumKind, SpectrumRelation,
};
use crate::similarity::{assemble_from_decompositions, eigenblock_decompose_numeric, EigenBlockDecomposition};
use crate::GaussianRational;

use super::with_pool;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    /// Order, at most 5.
    pub n: usize,
    pub seed: u64,
    /// Digraphs examined; all of them when `4^(n(n−1)/2)` fits.
    pub budget: u64,
    /// Largest number of same-bucket pairs compared.
    pub pair_budget: u64,
    pub pit: PitOptions,
    pub tol: f64,
    pub jobs: usize,
    /// Digraphs checked against a random class-preserving relabelling.
    pub permutation_checks: usize,
}

impl ProbeConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        ProbeConfig {
            n,
            seed,
            budget: 4096,
            pair_budget: 1_000_000,
            pit: PitOptions::probabilistic(8, seed),
            tol: crate::similarity::DEFAULT_TOLERANCE,
            jobs: 0,
            permutation_checks: 64,
        }
    }
}

/// A pair equal under the diagonal-only pencil `(H, J₁₁, …, J_pp)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeCandidate {
    pub a: String,
    pub b: String,
    pub partition: String,
    pub diagonal_equal: bool,
    pub full_equal: bool,
    pub unitary_found: bool,
    /// Both verdicts recomputed in deterministic mode; `None` when the
    /// deterministic grid exceeds its budget.
    pub reverified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub n: usize,
    pub seed: u64,
    pub mode: PitMode,
    pub exhaustive: bool,
    pub digraphs: usize,
    pub buckets: usize,
    pub pairs_tested: u64,
    pub diagonal_equal_pairs: u64,
    pub full_equal_pairs: u64,
    pub unitary_found: u64,
    pub truncated: bool,
    /// Diagonal-only equality without full HGBLS equality.
    pub candidates: Vec<ProbeCandidate>,
    /// Pairs where full HGBLS equality and the unitary `Q` disagree.
    pub mismatches: Vec<ProbeCandidate>,
    pub permutation_checks: usize,
    pub permutation_certified: usize,
}

struct Sample {
    digraph: Digraph,
    partition: VertexPartition,
    numeric: DMatrix<Complex<f64>>,
    decomposition: EigenBlockDecomposition<Complex<f64>>,
    diagonal: PencilFingerprint,
    full: PencilFingerprint,
}

fn relations(partition: &VertexPartition) -> Result<(SpectrumRelation, SpectrumRelation), PencilError> {
    Ok((
        SpectrumRelation::new(SpectrumKind::GBDLS, Some(partition.clone()))?,
        SpectrumRelation::new(SpectrumKind::HGBLS, Some(partition.clone()))?,
    ))
}

fn sample(d: &Digraph, plans: &(FingerprintPlan, FingerprintPlan), tol: f64) -> Result<Sample, SearchError> {
    let partition = d.degree_partition();
    let (diag, full) = relations(&partition)?;
    let h = d.hermitian_adjacency::<GaussianRational>();
    let numeric = h.to_numeric();
    Ok(Sample {
        decomposition: eigenblock_decompose_numeric(&numeric, &partition, tol)?,
        diagonal: plans.0.fingerprint(&build_pencil(&diag, &h)?)?,
        full: plans.1.fingerprint(&build_pencil(&full, &h)?)?,
        numeric,
        partition,
        digraph: d.clone(),
    })
}

fn unitary_exists(x: &Sample, y: &Sample, tol: f64) -> bool {
    assemble_from_decompositions(&x.numeric, &y.numeric, &x.partition, &x.decomposition, &y.decomposition, tol)
        .is_certified()
}

/// Deterministic recheck of `diagonal_equal && !full_equal`.
fn reverify(x: &Digraph, y: &Digraph, partition: &VertexPartition) -> Result<Option<bool>, SearchError> {
    let (diag, full) = relations(partition)?;
    let (hx, hy) = (x.hermitian_adjacency::<GaussianRational>(), y.hermitian_adjacency::<GaussianRational>());
    let det = PitOptions::deterministic();
    let check = |rel: &SpectrumRelation| -> Result<Option<bool>, SearchError> {
        match pencil_equal(&build_pencil(rel, &hx)?, &build_pencil(rel, &hy)?, &det) {
            Ok(c) => Ok(Some(c.equal)),
            Err(PencilError::OverBudget { .. }) => Ok(None),
            Err(e) => Err(e.into()),
        }
    };
    Ok(match (check(&diag)?, check(&full)?) {
        (Some(d), Some(f)) => Some(d && !f),
        _ => None,
    })
}

fn digraphs(config: &ProbeConfig, rng: &mut ChaCha8Rng) -> (Vec<Digraph>, bool) {
    let pairs = (config.n * (config.n - 1) / 2) as u32;
    let total = 4u64.pow(pairs);
    if total <= config.budget {
        return ((0..total).map(|c| Digraph::from_pair_code(config.n, c)).collect(), true);
    }
    let mut codes = BTreeSet::new();
    while (codes.len() as u64) < config.budget {
        codes.insert(rng.random_range(0..total));
    }
    (codes.into_iter().map(|c| Digraph::from_pair_code(config.n, c)).collect(), false)
}

/// Random permutation mapping every class of `partition` onto itself.
pub(crate) fn class_preserving_permutation(partition: &VertexPartition, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..partition.order()).collect();
    for class in partition.classes() {
        let mut image = class.clone();
        image.shuffle(rng);
        for (&v, &w) in class.iter().zip(&image) {
            perm[v] = w;
        }
    }
    perm
}

/// Looks for digraph pairs separated by the off-diagonal blocks `J_{iℓ}`:
/// equal under `(H, J₁₁, …, J_pp)` but not under the full HGBLS pencil.
/// Each pair is also checked for a unitary `Q` fixing every class indicator.
pub fn digraph_offdiagonal_probe(config: &ProbeConfig) -> Result<ProbeReport, SearchError> {
    if config.n == 0 || config.n > 5 {
        return Err(SearchError::Order(config.n));
    }
    let tol = config.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (all, exhaustive) = digraphs(config, &mut rng);

    with_pool(config.jobs, || -> Result<ProbeReport, SearchError> {
        let mut groups: BTreeMap<VertexPartition, Vec<usize>> = BTreeMap::new();
        for (k, d) in all.iter().enumerate() {
            groups.entry(d.degree_partition()).or_default().push(k);
        }
        let mut plans = BTreeMap::new();
        for part in groups.keys() {
            let (diag, full) = relations(part)?;
            plans.insert(
                part.clone(),
                (
                    FingerprintPlan::for_relation(&diag, config.n, &config.pit)?,
                    FingerprintPlan::for_relation(&full, config.n, &config.pit)?,
                ),
            );
        }
        let samples: Vec<Sample> =
            all.par_iter().map(|d| sample(d, &plans[&d.degree_partition()], tol)).collect::<Result<_, _>>()?;

        let mut buckets: BTreeMap<(&VertexPartition, &PencilFingerprint), Vec<usize>> = BTreeMap::new();
        for (k, s) in samples.iter().enumerate() {
            buckets.entry((&s.partition, &s.diagonal)).or_default().push(k);
        }
        let mut report = ProbeReport {
            n: config.n,
            seed: config.seed,
            mode: config.pit.mode,
            exhaustive,
            digraphs: samples.len(),
            buckets: buckets.len(),
            pairs_tested: 0,
            diagonal_equal_pairs: 0,
            full_equal_pairs: 0,
            unitary_found: 0,
            truncated: false,
            candidates: vec![],
            mismatches: vec![],
            permutation_checks: 0,
            permutation_certified: 0,
        };
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for members in buckets.values() {
            let m = members.len() as u64;
            if pairs.len() as u64 + m * m.saturating_sub(1) / 2 > config.pair_budget {
                report.truncated = true;
                break;
            }
            for (x, &i) in members.iter().enumerate() {
                pairs.extend(members[x + 1..].iter().map(|&j| (i, j)));
            }
        }
        let verdicts: Vec<(bool, bool)> = pairs
            .par_iter()
            .map(|&(i, j)| (samples[i].full == samples[j].full, unitary_exists(&samples[i], &samples[j], tol)))
            .collect();
        for (&(i, j), &(full_equal, unitary)) in pairs.iter().zip(&verdicts) {
            let (x, y) = (&samples[i], &samples[j]);
            report.pairs_tested += 1;
            report.diagonal_equal_pairs += 1;
            report.full_equal_pairs += full_equal as u64;
            report.unitary_found += unitary as u64;
            let record = |reverified| ProbeCandidate {
                a: x.digraph.to_digraph6(),
                b: y.digraph.to_digraph6(),
                partition: x.partition.to_string(),
                diagonal_equal: true,
                full_equal,
                unitary_found: unitary,
                reverified,
            };
            if !full_equal {
                report.candidates.push(record(reverify(&x.digraph, &y.digraph, &x.partition)?));
            }
            if full_equal != unitary {
                report.mismatches.push(record(None));
            }
        }

        let checks = config.permutation_checks.min(samples.len());
        for s in &samples[..checks] {
            let perm = class_preserving_permutation(&s.partition, &mut rng);
            let other = sample(&s.digraph.permuted(&perm), &plans[&s.partition], tol)?;
            report.permutation_checks += 1;
            let ok = other.partition == s.partition && other.full == s.full && unitary_exists(s, &other, tol);
            report.permutation_certified += ok as usize;
        }
        Ok(report)
    })?
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_n3() {
        let config = ProbeConfig { budget: 1 << 20, ..ProbeConfig::new(3, 7) };
        let r = digraph_offdiagonal_probe(&config).unwrap();
        assert!(r.exhaustive);
        assert_eq!(r.digraphs, 64);
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
        assert_eq!(r.permutation_certified, r.permutation_checks);
        assert!(r.candidates.iter().all(|c| c.reverified != Some(false)));
    }

    #[test]
    fn sampled_n5_is_deterministic() {
        let config = ProbeConfig { budget: 300, permutation_checks: 20, ..ProbeConfig::new(5, 11) };
        let r1 = digraph_offdiagonal_probe(&config).unwrap();
        let r2 = digraph_offdiagonal_probe(&config).unwrap();
        assert!(!r1.exhaustive);
        assert_eq!(r1, r2);
        assert_eq!(r1.permutation_certified, 20);
    }

    #[test]
    fn class_preserving_permutation_keeps_classes() {
        let part = VertexPartition::new(5, vec![vec![0, 3], vec![1, 2, 4]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let perm = class_preserving_permutation(&part, &mut rng);
        for class in part.classes() {
            let mut image: Vec<usize> = class.iter().map(|&v| perm[v]).collect();
            image.sort_unstable();
            assert_eq!(&image, class);
        }
    }

    #[test]
    fn rejects_large_orders() {
        assert!(digraph_offdiagonal_probe(&ProbeConfig::new(6, 0)).is_err());
    }
}
