use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::SearchError;
use crate::graph::{Graph, VertexPartition};
use crate::pencil::{
    build_pencil, FingerprintPlan, PencilFingerprint, PitMode, PitOptions, SpectrumKind, SpectrumRelation,
};
use crate::similarity::{
    assemble_from_decompositions, eigenblock_decompose_numeric, EigenBlockDecomposition, ExactOutcome, PreparedWalk,
};
use crate::Rational;

use super::{enumerate_graphs, find_isomorphism, with_pool};

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremConfig {
    pub n: usize,
    pub pit: PitOptions,
    /// Largest number of same-partition pairs examined.
    pub pair_budget: u64,
    /// Also examine pairs whose degree partitions differ (`n ≤ 5` only).
    pub cross_partition: bool,
    pub tol: f64,
    pub jobs: usize,
}

impl TheoremConfig {
    pub fn new(n: usize) -> Self {
        TheoremConfig {
            n,
            pit: PitOptions::deterministic(),
            pair_budget: 4_000_000,
            cross_partition: n <= 5,
            tol: crate::similarity::DEFAULT_TOLERANCE,
            jobs: 0,
        }
    }
}

/// A pair on which pencil equality and existence of `Q` disagree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Contradiction {
    pub a: String,
    pub b: String,
    pub partition: String,
    pub pencil_equal: bool,
    pub certified: bool,
    pub path: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TheoremReport {
    pub n: usize,
    pub mode: Option<PitMode>,
    pub seed: u64,
    pub graphs: usize,
    pub partition_groups: usize,
    /// Pairs with identical degree partitions.
    pub pairs_tested: u64,
    pub cross_pairs_tested: u64,
    pub equal_pairs: u64,
    pub certified_pairs: u64,
    pub exact_certificates: u64,
    pub constructive_certificates: u64,
    /// Pairs whose first walk matrix is rank deficient.
    pub rank_deficient_pairs: u64,
    /// Pairs related by a permutation fixing every class.
    pub partition_isomorphic_pairs: u64,
    pub partition_isomorphic_certified: u64,
    /// Exact certificates checked for `ℓ(Q) | d_n(W̃_A)`.
    pub level_checks: u64,
    pub level_violations: u64,
    pub truncated: bool,
    pub contradictions: Vec<Contradiction>,
}

impl TheoremReport {
    fn absorb(&mut self, other: TheoremReport) {
        self.pairs_tested += other.pairs_tested;
        self.cross_pairs_tested += other.cross_pairs_tested;
        self.equal_pairs += other.equal_pairs;
        self.certified_pairs += other.certified_pairs;
        self.exact_certificates += other.exact_certificates;
        self.constructive_certificates += other.constructive_certificates;
        self.rank_deficient_pairs += other.rank_deficient_pairs;
        self.partition_isomorphic_pairs += other.partition_isomorphic_pairs;
        self.partition_isomorphic_certified += other.partition_isomorphic_certified;
        self.level_checks += other.level_checks;
        self.level_violations += other.level_violations;
        self.contradictions.extend(other.contradictions);
    }
}

struct Prepared {
    graph: Graph,
    partition: VertexPartition,
    numeric: DMatrix<f64>,
    walk: PreparedWalk<Rational>,
    decomposition: EigenBlockDecomposition<f64>,
    fingerprint: PencilFingerprint,
}

fn prepare(graph: &Graph, plan: &FingerprintPlan, tol: f64) -> Result<Prepared, SearchError> {
    let partition = graph.degree_partition().canonical();
    let a = graph.adjacency::<Rational>();
    let rel = SpectrumRelation::new(SpectrumKind::GBDLS, Some(partition.clone()))?;
    let numeric = a.to_numeric();
    Ok(Prepared {
        walk: PreparedWalk::new(&a, &partition)?,
        decomposition: eigenblock_decompose_numeric(&numeric, &partition, tol)?,
        fingerprint: plan.fingerprint(&build_pencil(&rel, &a)?)?,
        numeric,
        partition,
        graph: graph.clone(),
    })
}

/// Existence of `Q` with `QᵀAQ = B` fixing the indicators of `A`'s degree
/// partition. Returns `(found, path)` and updates the counters.
fn certificate_exists(
    x: &Prepared,
    y: &Prepared,
    tol: f64,
    report: &mut TheoremReport,
) -> Result<(bool, &'static str), SearchError> {
    if x.walk.has_full_row_rank() {
        let shared;
        let other = if y.partition == x.partition {
            &y.walk
        } else {
            shared = PreparedWalk::new(&y.graph.adjacency::<Rational>(), &x.partition)?;
            &shared
        };
        match x.walk.certify(other, true) {
            ExactOutcome::Certified(c) => {
                report.exact_certificates += 1;
                if let Some(ok) = c.level_divides() {
                    report.level_checks += 1;
                    report.level_violations += (!ok) as u64;
                }
                Ok((true, "exact"))
            }
            _ => Ok((false, "exact")),
        }
    } else {
        report.rank_deficient_pairs += 1;
        let shared;
        let dec = if y.partition == x.partition {
            &y.decomposition
        } else {
            shared = eigenblock_decompose_numeric(&y.numeric, &x.partition, tol)?;
            &shared
        };
        let out = assemble_from_decompositions(&x.numeric, &y.numeric, &x.partition, &x.decomposition, dec, tol);
        let found = out.is_certified();
        report.constructive_certificates += found as u64;
        Ok((found, "constructive"))
    }
}

fn examine(x: &Prepared, y: &Prepared, tol: f64, report: &mut TheoremReport) -> Result<(), SearchError> {
    let same = x.partition == y.partition;
    let equal = same && x.fingerprint == y.fingerprint;
    if same {
        report.pairs_tested += 1;
    } else {
        report.cross_pairs_tested += 1;
    }
    report.equal_pairs += equal as u64;
    let (certified, path) = certificate_exists(x, y, tol, report)?;
    report.certified_pairs += certified as u64;
    if equal && find_isomorphism(&x.graph, &y.graph, Some(&x.partition)).is_some() {
        report.partition_isomorphic_pairs += 1;
        report.partition_isomorphic_certified += certified as u64;
    }
    if equal != certified {
        report.contradictions.push(Contradiction {
            a: x.graph.to_graph6(),
            b: y.graph.to_graph6(),
            partition: x.partition.to_string(),
            pencil_equal: equal,
            certified,
            path: path.into(),
        });
    }
    Ok(())
}

fn pairs_within(items: &[Prepared], tol: f64) -> Result<TheoremReport, SearchError> {
    let parts: Vec<TheoremReport> = (0..items.len())
        .into_par_iter()
        .map(|i| {
            let mut r = TheoremReport::default();
            for j in i + 1..items.len() {
                examine(&items[i], &items[j], tol, &mut r)?;
            }
            Ok(r)
        })
        .collect::<Result<_, SearchError>>()?;
    let mut total = TheoremReport::default();
    parts.into_iter().for_each(|p| total.absorb(p));
    Ok(total)
}

/// Checks, for every pair of labelled graphs whose degree classes coincide
/// as vertex sets,
/// that the GBDLS pencils agree exactly when an orthogonal `Q` with
/// `QᵀA_GQ = A_H` fixing every class indicator exists. The certificate side
/// is exact when `W̃_A` has full row rank and constructive otherwise.
pub fn verify_theorem_equivalence(config: &TheoremConfig) -> Result<TheoremReport, SearchError> {
    let n = config.n;
    let graphs: Vec<Graph> = enumerate_graphs(n)?.collect();
    let mut groups: BTreeMap<VertexPartition, Vec<usize>> = BTreeMap::new();
    for (k, g) in graphs.iter().enumerate() {
        groups.entry(g.degree_partition().canonical()).or_default().push(k);
    }
    let mut report = TheoremReport {
        n,
        mode: Some(config.pit.mode),
        seed: config.pit.seed,
        graphs: graphs.len(),
        partition_groups: groups.len(),
        ..Default::default()
    };
    let cross = config.cross_partition && n <= 5;
    let tol = config.tol;
    with_pool(config.jobs, || -> Result<(), SearchError> {
        let mut kept: Vec<Prepared> = Vec::new();
        let mut budget = config.pair_budget;
        for (part, members) in &groups {
            let m = members.len() as u64;
            let pairs = m * m.saturating_sub(1) / 2;
            if pairs > budget {
                report.truncated = true;
                break;
            }
            budget -= pairs;
            let rel = SpectrumRelation::new(SpectrumKind::GBDLS, Some(part.clone()))?;
            let plan = FingerprintPlan::for_relation(&rel, n, &config.pit)?;
            let prepared: Vec<Prepared> =
                members.par_iter().map(|&k| prepare(&graphs[k], &plan, tol)).collect::<Result<_, _>>()?;
            report.absorb(pairs_within(&prepared, tol)?);
            if cross {
                kept.extend(prepared);
            }
        }
        if cross && !report.truncated {
            let parts: Vec<TheoremReport> = (0..kept.len())
                .into_par_iter()
                .map(|i| {
                    let mut r = TheoremReport::default();
                    for j in i + 1..kept.len() {
                        if kept[i].partition != kept[j].partition {
                            examine(&kept[i], &kept[j], tol, &mut r)?;
                        }
                    }
                    Ok(r)
                })
                .collect::<Result<_, SearchError>>()?;
            parts.into_iter().for_each(|p| report.absorb(p));
        }
        Ok(())
    })??;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders_have_no_contradictions() {
        for n in 1..=4 {
            let r = verify_theorem_equivalence(&TheoremConfig::new(n)).unwrap();
            assert!(r.contradictions.is_empty(), "{:?}", r.contradictions);
            assert_eq!(r.partition_isomorphic_pairs, r.partition_isomorphic_certified);
            let total = (r.graphs as u64) * (r.graphs as u64 - 1) / 2;
            assert_eq!(r.pairs_tested + r.cross_pairs_tested, total);
        }
    }

    #[test]
    fn budget_truncates() {
        let config = TheoremConfig { pair_budget: 3, ..TheoremConfig::new(4) };
        let r = verify_theorem_equivalence(&config).unwrap();
        assert!(r.truncated);
        assert!(r.pairs_tested <= 3);
    }
}
