//! Exhaustive and corpus-driven searches for cospectral mates.

mod iso;
mod probe;
mod theorem;

pub use iso::{find_digraph_isomorphism, find_isomorphism};
pub use probe::{digraph_offdiagonal_probe, ProbeCandidate, ProbeConfig, ProbeReport};
pub use theorem::{verify_theorem_equivalence, Contradiction, TheoremConfig, TheoremReport};

use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::SearchError;
use crate::graph::{parse_graph6, Graph, VertexPartition};
use crate::pencil::{
    build_pencil, pencil_equal, FingerprintPlan, PencilFingerprint, PitOptions, SpectrumKind, SpectrumRelation,
};
use crate::similarity::{reconstruct_q_constructive, reconstruct_q_exact, ConstructiveOutcome, ExactOutcome};
use crate::Rational;

/// Largest order supported by the builtin enumeration.
pub const MAX_BUILTIN_ORDER: usize = 7;

/// All `2^(n(n−1)/2)` labelled graphs on `n` vertices, ordered by edge mask.
pub fn enumerate_graphs(n: usize) -> Result<impl Iterator<Item = Graph>, SearchError> {
    if n == 0 || n > MAX_BUILTIN_ORDER {
        return Err(SearchError::Order(n));
    }
    let pairs = n * (n - 1) / 2;
    Ok((0..1u64 << pairs).map(move |mask| Graph::from_mask(n, mask)))
}

/// One graph6 string per line; blank lines and `#` comments are skipped.
pub fn read_graph6_file(path: &std::path::Path) -> Result<Vec<Graph>, SearchError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| SearchError::Io { path: shown.clone(), source })?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(k, l)| {
            parse_graph6(l.trim()).map_err(|source| SearchError::Parse { path: shown.clone(), line: k + 1, source })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    Builtin,
    Graph6File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Order for the builtin enumeration.
    pub n: usize,
    pub source: GraphSource,
    pub relation: SpectrumKind,
    pub pit: PitOptions,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
    /// Largest number of within-bucket pairs compared.
    pub budget: u64,
    /// Emit only pairs that are not isomorphic as graphs.
    pub non_isomorphic_only: bool,
    /// Attach a `Q` certificate to each emitted record.
    pub certify: bool,
    /// Try the constructive path when the walk matrix is rank deficient.
    pub fallback_constructive: bool,
    pub tol: f64,
}

impl SearchConfig {
    pub fn new(n: usize, relation: SpectrumKind) -> Self {
        SearchConfig {
            n,
            source: GraphSource::Builtin,
            relation,
            pit: PitOptions::default(),
            jobs: 0,
            budget: 1_000_000,
            non_isomorphic_only: false,
            certify: true,
            fallback_constructive: false,
            tol: crate::similarity::DEFAULT_TOLERANCE,
        }
    }
}

/// Outcome of the certificate attempt attached to a mate record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateSummary {
    /// `exact`, `undetermined` (rank-deficient walk matrix) or `constructive`.
    pub path: String,
    pub found: bool,
    pub rank: usize,
    pub level: Option<String>,
    pub walk_divisor: Option<String>,
    pub divides: Option<bool>,
    pub max_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MateRecord {
    pub a: String,
    pub b: String,
    pub relation: SpectrumKind,
    pub isomorphic: bool,
    pub certificate: Option<CertificateSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub n: usize,
    pub source: String,
    pub relation: SpectrumKind,
    pub mode: crate::PitMode,
    pub trials: usize,
    pub seed: u64,
    pub budget: u64,
    pub non_isomorphic_only: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub config: ConfigEcho,
    pub graphs: usize,
    pub buckets: usize,
    pub pairs_tested: u64,
    pub equal_pairs: u64,
    /// Set when the pair budget stopped the search early.
    pub truncated: bool,
    pub mates: Vec<MateRecord>,
    /// Equivalence classes spanned by the emitted records (graph6).
    pub classes: Vec<Vec<String>>,
    /// Equal pairs with a full-rank walk matrix whose exact certificate
    /// failed, which the characterization rules out.
    pub contradictions: Vec<MateRecord>,
}

impl SearchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,relation,isomorphic,path,found,level,walk_divisor,divides\n");
        for m in &self.mates {
            let c = m.certificate.as_ref();
            let opt = |s: Option<String>| s.unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                csv_field(&m.a),
                csv_field(&m.b),
                m.relation,
                m.isomorphic,
                opt(c.map(|c| c.path.clone())),
                opt(c.map(|c| c.found.to_string())),
                opt(c.and_then(|c| c.level.clone())),
                opt(c.and_then(|c| c.walk_divisor.clone())),
                opt(c.and_then(|c| c.divides.map(|d| d.to_string()))),
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Partition whose indicators a certificate must fix, if the relation has one.
fn certificate_partition(kind: SpectrumKind, g: &Graph) -> Option<VertexPartition> {
    match kind {
        SpectrumKind::S | SpectrumKind::HGBLS => None,
        SpectrumKind::GS => Some(VertexPartition::trivial(g.order())),
        _ => Some(g.degree_partition()),
    }
}

pub(crate) fn summarize(outcome: &ExactOutcome<Rational>) -> CertificateSummary {
    match outcome {
        ExactOutcome::RankDeficient { rank, .. } => CertificateSummary {
            path: "undetermined".into(),
            found: false,
            rank: *rank,
            level: None,
            walk_divisor: None,
            divides: None,
            max_residual: None,
        },
        ExactOutcome::Certified(c) => CertificateSummary {
            path: "exact".into(),
            found: true,
            rank: c.q.rows(),
            level: Some(c.level.to_string()),
            walk_divisor: c.walk_divisor.as_ref().map(ToString::to_string),
            divides: c.level_divides(),
            max_residual: Some(0.0),
        },
        ExactOutcome::Rejected { certificate } => CertificateSummary {
            path: "exact".into(),
            found: false,
            rank: certificate.as_ref().map_or(0, |c| c.q.rows()),
            level: None,
            walk_divisor: None,
            divides: None,
            max_residual: None,
        },
    }
}

fn certify(g: &Graph, h: &Graph, config: &SearchConfig) -> Result<Option<CertificateSummary>, SearchError> {
    let Some(part) = certificate_partition(config.relation, g) else {
        return Ok(None);
    };
    let (a, b) = (g.adjacency::<Rational>(), h.adjacency::<Rational>());
    let exact = reconstruct_q_exact(&a, &b, &part)?;
    let mut summary = summarize(&exact);
    if config.fallback_constructive {
        if let ExactOutcome::RankDeficient { .. } = exact {
            let out = reconstruct_q_constructive(&a, &b, &part, config.tol)?;
            summary.path = "constructive".into();
            summary.found = out.is_certified();
            summary.max_residual = out.certificate().map(|c| c.max_residual());
            if let ConstructiveOutcome::ClaimViolated(_) = out {
                summary.max_residual = None;
            }
        }
    }
    Ok(Some(summary))
}

fn load(config: &SearchConfig) -> Result<Vec<Graph>, SearchError> {
    match &config.source {
        GraphSource::Builtin => Ok(enumerate_graphs(config.n)?.collect()),
        GraphSource::Graph6File(p) => read_graph6_file(p),
    }
}

pub(crate) fn with_pool<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> Result<R, SearchError> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| SearchError::Threads(e.to_string()))?;
    Ok(pool.install(f))
}

type BucketKey = (usize, Vec<usize>, PencilFingerprint);

struct BucketResult {
    pairs: u64,
    equal: u64,
    mates: Vec<MateRecord>,
    contradictions: Vec<MateRecord>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Buckets graphs by invariants of the relation and compares the pencils
/// of every pair inside a bucket.
///
/// For partition relations the key holds the degree of every vertex; for
/// all relations it holds residues of the pencil at two random points.
pub fn bucket_and_match(config: &SearchConfig) -> Result<SearchReport, SearchError> {
    if config.relation.is_digraph_kind() {
        return Err(SearchError::Relation("hgbls"));
    }
    let graphs = load(config)?;
    let kind = config.relation;
    with_pool(config.jobs, || -> Result<SearchReport, SearchError> {
        let relation_for = |g: &Graph| -> Result<SpectrumRelation, SearchError> {
            let part = kind.needs_partition().then(|| g.degree_partition());
            Ok(SpectrumRelation::new(kind, part)?)
        };
        let screen_seed = config.pit.seed ^ 0x5eed_0fb0_c4e7;
        let keys: Vec<BucketKey> = graphs
            .par_iter()
            .map(|g| -> Result<BucketKey, SearchError> {
                let rel = relation_for(g)?;
                let plan = FingerprintPlan::probabilistic(g.order(), rel.variable_count(), 2, screen_seed);
                let fp = plan.fingerprint(&build_pencil(&rel, &g.adjacency::<Rational>())?)?;
                let degrees = if kind.needs_partition() { g.degrees() } else { Vec::new() };
                Ok((g.order(), degrees, fp))
            })
            .collect::<Result<_, _>>()?;
        let mut buckets: BTreeMap<&BucketKey, Vec<usize>> = BTreeMap::new();
        for (k, key) in keys.iter().enumerate() {
            buckets.entry(key).or_default().push(k);
        }
        let bucket_count = buckets.len();
        let mut work = Vec::new();
        let mut planned = 0u64;
        let mut truncated = false;
        for members in buckets.into_values().filter(|m| m.len() > 1) {
            let pairs = (members.len() as u64) * (members.len() as u64 - 1) / 2;
            if planned + pairs > config.budget {
                truncated = true;
                break;
            }
            planned += pairs;
            work.push(members);
        }
        let results: Vec<BucketResult> = work
            .par_iter()
            .map(|members| -> Result<BucketResult, SearchError> {
                let mut res = BucketResult { pairs: 0, equal: 0, mates: vec![], contradictions: vec![] };
                let rel = relation_for(&graphs[members[0]])?;
                let pencils = members
                    .iter()
                    .map(|&k| build_pencil(&rel, &graphs[k].adjacency::<Rational>()))
                    .collect::<Result<Vec<_>, _>>()?;
                for x in 0..members.len() {
                    for y in x + 1..members.len() {
                        res.pairs += 1;
                        if !pencil_equal(&pencils[x], &pencils[y], &config.pit)?.equal {
                            continue;
                        }
                        res.equal += 1;
                        let (g, h) = (&graphs[members[x]], &graphs[members[y]]);
                        let isomorphic = find_isomorphism(g, h, None).is_some();
                        if config.non_isomorphic_only && isomorphic {
                            continue;
                        }
                        let certificate = if config.certify { certify(g, h, config)? } else { None };
                        let record =
                            MateRecord { a: g.to_graph6(), b: h.to_graph6(), relation: kind, isomorphic, certificate };
                        let characterized = matches!(kind, SpectrumKind::GS | SpectrumKind::GBDLS | SpectrumKind::GBLS);
                        let refuted = record.certificate.as_ref().is_some_and(|c| c.path == "exact" && !c.found);
                        if characterized && refuted {
                            res.contradictions.push(record.clone());
                        }
                        res.mates.push(record);
                    }
                }
                Ok(res)
            })
            .collect::<Result<_, _>>()?;

        let mut report = SearchReport {
            config: ConfigEcho {
                n: config.n,
                source: match &config.source {
                    GraphSource::Builtin => "builtin".into(),
                    GraphSource::Graph6File(p) => format!("file:{}", p.display()),
                },
                relation: kind,
                mode: config.pit.mode,
                trials: config.pit.trials,
                seed: config.pit.seed,
                budget: config.budget,
                non_isomorphic_only: config.non_isomorphic_only,
            },
            graphs: graphs.len(),
            buckets: bucket_count,
            pairs_tested: 0,
            equal_pairs: 0,
            truncated,
            mates: vec![],
            classes: vec![],
            contradictions: vec![],
        };
        for r in results {
            report.pairs_tested += r.pairs;
            report.equal_pairs += r.equal;
            report.mates.extend(r.mates);
            report.contradictions.extend(r.contradictions);
        }
        report.classes = classes_of(&report.mates);
        Ok(report)
    })?
}

fn classes_of(mates: &[MateRecord]) -> Vec<Vec<String>> {
    let mut names: Vec<&str> = mates.iter().flat_map(|m| [m.a.as_str(), m.b.as_str()]).collect();
    names.sort_unstable();
    names.dedup();
    let index = |s: &str| names.binary_search(&s).expect("name");
    let mut parent: Vec<usize> = (0..names.len()).collect();
    for m in mates {
        let (x, y) = (find(&mut parent, index(&m.a)), find(&mut parent, index(&m.b)));
        parent[x.max(y)] = x.min(y);
    }
    let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (k, name) in names.iter().enumerate() {
        let r = find(&mut parent, k);
        groups.entry(r).or_default().push(name.to_string());
    }
    groups.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_graphs(1).unwrap().count(), 1);
        assert_eq!(enumerate_graphs(2).unwrap().count(), 2);
        assert_eq!(enumerate_graphs(3).unwrap().count(), 8);
        assert_eq!(enumerate_graphs(4).unwrap().count(), 64);
        assert!(enumerate_graphs(8).is_err());
        assert!(enumerate_graphs(0).is_err());
        let all: std::collections::HashSet<Graph> = enumerate_graphs(4).unwrap().collect();
        assert_eq!(all.len(), 64);
    }

    #[test]
    fn n4_spectral_mates_match_all_pairs() {
        let config = SearchConfig { certify: false, ..SearchConfig::new(4, SpectrumKind::S) };
        let report = bucket_and_match(&config).unwrap();
        let graphs: Vec<Graph> = enumerate_graphs(4).unwrap().collect();
        let polys: Vec<_> =
            graphs.iter().map(|g| crate::exact::char_poly(&g.adjacency::<Rational>()).unwrap()).collect();
        let mut oracle = 0u64;
        for x in 0..polys.len() {
            for y in x + 1..polys.len() {
                oracle += (polys[x] == polys[y]) as u64;
            }
        }
        assert_eq!(report.equal_pairs, oracle);
        assert_eq!(report.mates.len() as u64, oracle);
        assert!(!report.truncated);
    }

    #[test]
    fn n5_contains_the_star_pair() {
        let config = SearchConfig { non_isomorphic_only: true, ..SearchConfig::new(5, SpectrumKind::S) };
        let report = bucket_and_match(&config).unwrap();
        let star = Graph::star(4);
        let square = Graph::cycle(4).disjoint_union(&Graph::empty(1));
        let found = report.mates.iter().any(|m| {
            let (a, b) = (parse_graph6(&m.a).unwrap(), parse_graph6(&m.b).unwrap());
            let is = |x: &Graph, y: &Graph| find_isomorphism(x, y, None).is_some();
            (is(&a, &star) && is(&b, &square)) || (is(&a, &square) && is(&b, &star))
        });
        assert!(found);
        assert!(report.mates.iter().all(|m| !m.isomorphic));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let config = SearchConfig { non_isomorphic_only: true, ..SearchConfig::new(5, SpectrumKind::S) };
        let report = bucket_and_match(&config).unwrap();
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), report.mates.len() + 1);
        assert!(csv.starts_with("a,b,relation"));
    }
}
