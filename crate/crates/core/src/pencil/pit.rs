//! Polynomial identity testing for `φ(s; t) = det(tI − Σ sᵢAᵢ)`.
//!
//! Values of `φ` are computed modulo primes `p ≈ 2^62`.
//!
//! * Probabilistic mode evaluates at uniformly random points of `F_p^{k+1}`.
//!   A nonzero difference of total degree `≤ n` vanishes at a random point
//!   with probability `≤ n/p` (Schwartz–Zippel).
//! * Deterministic mode uses that `φ` is homogeneous of degree `n`, so it
//!   is determined by `φ(1, s)`, whose degree in `sᵢ` is at most
//!   `dᵢ = min(n, rank Aᵢ)` and whose total degree is at most `n`. The
//!   exponent set `{a : aᵢ ≤ dᵢ, |a| ≤ n}` is a lower set, and a polynomial
//!   supported on a lower set is determined by its values on the same set
//!   of integer points. Each value is an integer (Gaussian integer) bounded
//!   by Hadamard's inequality; enough primes are used that their product
//!   exceeds the squared bound on a difference, so residues decide equality
//!   exactly.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::PencilError;
use crate::exact::modular::{PrimeField, PRIMES};
use crate::exact::{level, rank};
use crate::matrix::Matrix;
use crate::scalar::ExactScalar;

use super::{build_pencil, Pencil, SpectrumRelation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PitMode {
    #[serde(rename = "det")]
    Deterministic,
    #[serde(rename = "prob")]
    Probabilistic,
}

impl std::str::FromStr for PitMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "det" | "deterministic" => Ok(PitMode::Deterministic),
            "prob" | "probabilistic" => Ok(PitMode::Probabilistic),
            _ => Err(format!("unknown mode `{s}` (expected det|prob)")),
        }
    }
}

impl PitMode {
    pub fn name(self) -> &'static str {
        match self {
            PitMode::Deterministic => "det",
            PitMode::Probabilistic => "prob",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PitOptions {
    pub mode: PitMode,
    /// Random points per comparison in probabilistic mode.
    pub trials: usize,
    pub seed: u64,
    /// Largest number of interpolation nodes deterministic mode may use.
    pub node_budget: u128,
}

impl Default for PitOptions {
    fn default() -> Self {
        PitOptions { mode: PitMode::Probabilistic, trials: 8, seed: 0, node_budget: 2_000_000 }
    }
}

impl PitOptions {
    pub fn deterministic() -> Self {
        PitOptions { mode: PitMode::Deterministic, ..Default::default() }
    }

    pub fn probabilistic(trials: usize, seed: u64) -> Self {
        PitOptions { mode: PitMode::Probabilistic, trials, seed, ..Default::default() }
    }
}

/// Evaluation points shared by every pencil compared under it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FingerprintPlan {
    mode: PitMode,
    order: usize,
    variables: usize,
    fields: Vec<PrimeField>,
    /// `[t, s₁, …, s_k]` per point; residues mod the single prime in
    /// probabilistic mode, small nonnegative integers in deterministic mode.
    points: Vec<Vec<u64>>,
    seed: u64,
}

/// Residues of `φ` at a plan's points (point-major, then prime).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PencilFingerprint {
    values: Vec<u64>,
}

impl PencilFingerprint {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// `(prime, point, value)` triples.
    pub fn evaluations<'a>(&'a self, plan: &'a FingerprintPlan) -> impl Iterator<Item = (u64, &'a [u64], u64)> + 'a {
        let r = plan.fields.len();
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (plan.fields[k % r].modulus(), plan.points[k / r].as_slice(), v))
    }
}

/// Number of exponent vectors `a` with `aᵢ ≤ bounds[i]` and `|a| ≤ total`,
/// saturating at `u128::MAX`.
pub fn lower_set_size(bounds: &[usize], total: usize) -> u128 {
    // ways[s] = number of prefixes with exponent sum s
    let mut ways = vec![0u128; total + 1];
    ways[0] = 1;
    for &b in bounds {
        let mut next = vec![0u128; total + 1];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for a in 0..=b.min(total - s) {
                next[s + a] = next[s + a].saturating_add(w);
            }
        }
        ways = next;
    }
    ways.iter().fold(0u128, |acc, &w| acc.saturating_add(w))
}

fn lower_set(bounds: &[usize], total: usize) -> Vec<Vec<u64>> {
    fn rec(bounds: &[usize], left: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let k = cur.len();
        if k == bounds.len() {
            out.push(cur.clone());
            return;
        }
        for a in 0..=bounds[k].min(left) {
            cur.push(a as u64);
            rec(bounds, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(bounds, total, &mut Vec::with_capacity(bounds.len()), &mut out);
    out
}

impl FingerprintPlan {
    pub fn probabilistic(order: usize, variables: usize, trials: usize, seed: u64) -> Self {
        let field = PrimeField::new(PRIMES[0]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points =
            (0..trials).map(|_| (0..=variables).map(|_| rng.random_range(0..field.modulus())).collect()).collect();
        FingerprintPlan { mode: PitMode::Probabilistic, order, variables, fields: vec![field], points, seed }
    }

    /// `degree_bounds[i]` bounds the degree of `φ` in `sᵢ`; `entry_bounds[i]`
    /// bounds `|Aᵢ(u,v)|`.
    pub fn deterministic(
        order: usize,
        degree_bounds: &[usize],
        entry_bounds: &[f64],
        budget: u128,
    ) -> Result<Self, PencilError> {
        let bounds: Vec<usize> = degree_bounds.iter().map(|&d| d.min(order)).collect();
        let nodes = lower_set_size(&bounds, order);
        if nodes > budget {
            return Err(PencilError::OverBudget { nodes, budget });
        }
        // |entry| ≤ 1 + Σ sᵢ|Aᵢ| with sᵢ ≤ dᵢ and Σ sᵢ ≤ n
        let spread: f64 = bounds.iter().zip(entry_bounds).map(|(&d, &m)| d as f64 * m).sum();
        let widest = entry_bounds.iter().cloned().fold(0.0, f64::max) * order as f64;
        let entry = 1.0 + spread.min(widest);
        let n = order as f64;
        let log_hadamard = if order == 0 { 0.0 } else { n * (0.5 * n.log2() + entry.log2()) };
        // a nonzero difference z of two values has |z|² ≤ 4H²
        let needed = 2.0 * log_hadamard + 3.0;
        let mut fields = Vec::new();
        let mut have = 0.0;
        for &p in PRIMES.iter() {
            if have > needed {
                break;
            }
            fields.push(PrimeField::new(p));
            have += (p as f64).log2();
        }
        assert!(have > needed, "value bound exceeds the available moduli");
        let points =
            lower_set(&bounds, order).into_iter().map(|node| std::iter::once(1).chain(node).collect()).collect();
        Ok(FingerprintPlan {
            mode: PitMode::Deterministic,
            order,
            variables: degree_bounds.len(),
            fields,
            points,
            seed: 0,
        })
    }

    /// Plan for pencils of `relation` whose first coefficient is an
    /// adjacency-type matrix (entries of modulus at most 1).
    pub fn for_relation(relation: &SpectrumRelation, order: usize, opts: &PitOptions) -> Result<Self, PencilError> {
        let k = relation.variable_count();
        match opts.mode {
            PitMode::Probabilistic => Ok(Self::probabilistic(order, k, opts.trials, opts.seed)),
            PitMode::Deterministic => {
                let template = build_pencil::<crate::Rational>(relation, &Matrix::zeros(order, order))?;
                let mut degrees: Vec<usize> = template.matrices().iter().map(rank).collect();
                degrees[0] = order;
                let entries = vec![1.0; k];
                Self::deterministic(order, &degrees, &entries, opts.node_budget)
            }
        }
    }

    pub fn mode(&self) -> PitMode {
        self.mode
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn variable_count(&self) -> usize {
        self.variables
    }

    pub fn points(&self) -> &[Vec<u64>] {
        &self.points
    }

    pub fn primes(&self) -> Vec<u64> {
        self.fields.iter().map(PrimeField::modulus).collect()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `n/p`: chance that one random point misses a nonzero difference.
    pub fn per_trial_error_bound(&self) -> f64 {
        self.order as f64 / self.fields[0].modulus() as f64
    }

    /// Residues of `det(tI − Σ sᵢAᵢ)` at every point of the plan.
    pub fn fingerprint<T: ExactScalar>(&self, pencil: &Pencil<T>) -> Result<PencilFingerprint, PencilError> {
        if pencil.order() != self.order || pencil.variable_count() != self.variables {
            return Err(PencilError::Order(format!(
                "plan is for order {} with {} variables, pencil has order {} with {}",
                self.order,
                self.variables,
                pencil.order(),
                pencil.variable_count()
            )));
        }
        let n = self.order;
        let reduced: Vec<Vec<Vec<u64>>> = self
            .fields
            .iter()
            .map(|f| {
                pencil
                    .matrices()
                    .iter()
                    .map(|m| {
                        m.entries()
                            .iter()
                            .map(|x| x.reduce_mod(f).ok_or(PencilError::Shape))
                            .collect::<Result<Vec<u64>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut values = Vec::with_capacity(self.points.len() * self.fields.len());
        let mut buf = vec![0u64; n * n];
        for point in &self.points {
            for (f, mats) in self.fields.iter().zip(&reduced) {
                buf.iter_mut().for_each(|x| *x = 0);
                let t = point[0] % f.modulus();
                for (&s, m) in point[1..].iter().zip(mats) {
                    let s = s % f.modulus();
                    if s == 0 {
                        continue;
                    }
                    for (b, &a) in buf.iter_mut().zip(m) {
                        if a != 0 {
                            *b = f.add(*b, f.mul(s, a));
                        }
                    }
                }
                for (idx, b) in buf.iter_mut().enumerate() {
                    let diag = if idx / n == idx % n { t } else { 0 };
                    *b = f.sub(diag, *b);
                }
                values.push(f.det_in_place(&mut buf, n));
            }
        }
        Ok(PencilFingerprint { values })
    }
}

/// Outcome of comparing two pencils.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PencilComparison {
    pub equal: bool,
    pub mode: PitMode,
    /// Points evaluated.
    pub trials: usize,
    pub primes: Vec<u64>,
    pub seed: u64,
    /// `n/p`, the single-point miss probability (probabilistic mode only).
    pub per_trial_error_bound: Option<f64>,
}

fn scaled_integral<T: ExactScalar>(p1: &Pencil<T>, p2: &Pencil<T>) -> (Pencil<T>, Pencil<T>) {
    // the same per-variable rescaling on both sides preserves equality
    let mut m1 = Vec::with_capacity(p1.variable_count());
    let mut m2 = Vec::with_capacity(p1.variable_count());
    for (a, b) in p1.matrices().iter().zip(p2.matrices()) {
        let l = num_integer::Integer::lcm(&level(a), &level(b));
        let c = T::from_bigint(l);
        m1.push(a.scale(&c));
        m2.push(b.scale(&c));
    }
    (Pencil { labels: p1.labels.clone(), matrices: m1 }, Pencil { labels: p2.labels.clone(), matrices: m2 })
}

/// Decides `φ_{P1} = φ_{P2}` as polynomials in `(s, t)`.
pub fn pencil_equal<T: ExactScalar>(
    p1: &Pencil<T>,
    p2: &Pencil<T>,
    opts: &PitOptions,
) -> Result<PencilComparison, PencilError> {
    if p1.order() != p2.order() || p1.variable_count() != p2.variable_count() {
        return Err(PencilError::Order(format!(
            "pencils differ in shape: order {} vs {}, {} vs {} variables",
            p1.order(),
            p2.order(),
            p1.variable_count(),
            p2.variable_count()
        )));
    }
    let (a, b) = scaled_integral(p1, p2);
    let n = a.order();
    let plan = match opts.mode {
        PitMode::Probabilistic => FingerprintPlan::probabilistic(n, a.variable_count(), opts.trials, opts.seed),
        PitMode::Deterministic => {
            let degrees: Vec<usize> =
                a.matrices().iter().zip(b.matrices()).map(|(x, y)| rank(x).max(rank(y))).collect();
            let entries: Vec<f64> = a
                .matrices()
                .iter()
                .zip(b.matrices())
                .map(|(x, y)| x.entries().iter().chain(y.entries()).map(ExactScalar::magnitude).fold(0.0, f64::max))
                .collect();
            FingerprintPlan::deterministic(n, &degrees, &entries, opts.node_budget)?
        }
    };
    let equal = plan.fingerprint(&a)? == plan.fingerprint(&b)?;
    Ok(PencilComparison {
        equal,
        mode: opts.mode,
        trials: plan.points.len(),
        primes: plan.primes(),
        seed: plan.seed,
        per_trial_error_bound: (opts.mode == PitMode::Probabilistic).then(|| plan.per_trial_error_bound()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::char_poly;
    use crate::graph::Graph;
    use crate::pencil::{SpectrumKind, SpectrumRelation};
    use crate::{Rational, RationalMatrix};

    #[test]
    fn lower_set_counts() {
        assert_eq!(lower_set_size(&[], 3), 1);
        assert_eq!(lower_set_size(&[3], 3), 4);
        // total degree ≤ 2 in two variables: 6 monomials
        assert_eq!(lower_set_size(&[2, 2], 2), 6);
        assert_eq!(lower_set_size(&[5, 1, 1, 1, 1], 5), 6 + 4 * 5 + 6 * 4 + 4 * 3 + 2);
        assert_eq!(lower_set(&[2, 1], 2).len() as u128, lower_set_size(&[2, 1], 2));
    }

    #[test]
    fn single_variable_fingerprint_matches_char_poly() {
        // φ(s; t) for (A) is t^n χ_A(s/t)·… ; at t = 1, s = x it equals det(I − xA)
        let a: RationalMatrix = Graph::path(3).adjacency();
        let rel = SpectrumRelation::new(SpectrumKind::S, None).unwrap();
        let pen = build_pencil(&rel, &a).unwrap();
        let plan = FingerprintPlan::deterministic(3, &[3], &[1.0], 100).unwrap();
        let fp = plan.fingerprint(&pen).unwrap();
        // det(I − xA) for P3 = 1 − 2x²
        let f = PrimeField::new(plan.primes()[0]);
        let expect: Vec<u64> = (0..=3).map(|x: i64| f.from_i64(1 - 2 * x * x)).collect();
        let got: Vec<u64> = fp.evaluations(&plan).filter(|e| e.0 == plan.primes()[0]).map(|e| e.2).collect();
        assert_eq!(got, expect);
        assert_eq!(char_poly(&a).unwrap()[1], Rational::from_integer((-2).into()));
    }

    #[test]
    fn identical_pencils_are_equal_in_both_modes() {
        let a: RationalMatrix = Graph::cycle(5).adjacency();
        let rel = SpectrumRelation::new(SpectrumKind::GS, None).unwrap();
        let p = build_pencil(&rel, &a).unwrap();
        for opts in [PitOptions::deterministic(), PitOptions::probabilistic(8, 3)] {
            let c = pencil_equal(&p, &p, &opts).unwrap();
            assert!(c.equal);
        }
    }

    #[test]
    fn rational_pencils_are_rescaled() {
        let half = Rational::new(1.into(), 2.into());
        let a = RationalMatrix::from_vec(
            2,
            2,
            vec![Rational::from_integer(0.into()), half.clone(), half.clone(), Rational::from_integer(0.into())],
        );
        let b = RationalMatrix::from_vec(
            2,
            2,
            vec![half.clone(), Rational::from_integer(0.into()), Rational::from_integer(0.into()), -half],
        );
        // both have eigenvalues ±1/2
        let pa = Pencil::new(vec!["x".into()], vec![a]).unwrap();
        let pb = Pencil::new(vec!["x".into()], vec![b]).unwrap();
        assert!(pencil_equal(&pa, &pb, &PitOptions::deterministic()).unwrap().equal);
    }

    #[test]
    fn budget_is_enforced() {
        let a: RationalMatrix = Graph::path(6).adjacency();
        let part = crate::VertexPartition::discrete(6);
        let rel = SpectrumRelation::new(SpectrumKind::GBLS, Some(part)).unwrap();
        let p = build_pencil(&rel, &a).unwrap();
        let opts = PitOptions { node_budget: 1000, ..PitOptions::deterministic() };
        assert!(matches!(pencil_equal(&p, &p, &opts), Err(PencilError::OverBudget { .. })));
    }

    #[test]
    fn probabilistic_points_depend_on_seed() {
        let a = FingerprintPlan::probabilistic(4, 2, 5, 1);
        let b = FingerprintPlan::probabilistic(4, 2, 5, 1);
        let c = FingerprintPlan::probabilistic(4, 2, 5, 2);
        assert_eq!(a, b);
        assert_ne!(a.points(), c.points());
        assert!(a.per_trial_error_bound() < 2f64.powi(-55));
    }
}
