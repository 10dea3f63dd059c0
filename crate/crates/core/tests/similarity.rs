use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spectra_core::matrix::permutation_matrix;
use spectra_core::similarity::{
    extended_walk_matrix, reconstruct_q_constructive, reconstruct_q_exact, verify_claim_diagnostics, ExactOutcome,
    DEFAULT_TOLERANCE,
};
use spectra_core::{Digraph, GaussianRational, Graph, Rational, RationalMatrix, VertexPartition};

fn graph(min: usize, max: usize) -> impl Strategy<Value = Graph> {
    (min..=max).prop_flat_map(|n| (Just(n), 0u64..(1 << (n * (n - 1) / 2)))).prop_map(|(n, m)| Graph::from_mask(n, m))
}

fn digraph(max: usize) -> impl Strategy<Value = Digraph> {
    (2..=max)
        .prop_flat_map(|n| (Just(n), 0u64..(1 << (n * (n - 1)))))
        .prop_map(|(n, code)| Digraph::from_pair_code(n, code))
}

fn class_preserving(part: &VertexPartition, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..part.order()).collect();
    for class in part.classes() {
        let mut image = class.clone();
        image.shuffle(&mut rng);
        for (&v, &w) in class.iter().zip(&image) {
            perm[v] = w;
        }
    }
    perm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn relabelled_graphs_are_certified(g in graph(2, 6), seed in any::<u64>()) {
        let part = g.degree_partition();
        let perm = class_preserving(&part, seed);
        let h = g.permuted(&perm);
        let (a, b) = (g.adjacency::<Rational>(), h.adjacency::<Rational>());
        let p: RationalMatrix = permutation_matrix(&perm);
        prop_assert_eq!(&(&p.transpose() * &a) * &p, b.clone());

        let numeric = reconstruct_q_constructive(&a, &b, &part, DEFAULT_TOLERANCE).unwrap();
        prop_assert!(numeric.is_certified(), "{:?}", numeric);
        match reconstruct_q_exact(&a, &b, &part).unwrap() {
            ExactOutcome::Certified(c) => {
                // W̃ of full rank pins Q down, so it is the relabelling itself
                prop_assert_eq!(&c.q, &p);
                prop_assert_eq!(c.level_divides(), Some(true));
                let q = numeric.certificate().unwrap().q.clone();
                let exact: DMatrix<f64> = p.to_numeric();
                prop_assert!((q - exact).amax() < 1e-6);
            }
            ExactOutcome::RankDeficient { rank, order } => prop_assert!(rank < order),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn relabelled_digraphs_are_certified(d in digraph(5), seed in any::<u64>()) {
        let part = d.degree_partition();
        let perm = class_preserving(&part, seed);
        let e = d.permuted(&perm);
        let (a, b) = (d.hermitian_adjacency::<GaussianRational>(), e.hermitian_adjacency::<GaussianRational>());
        let out = reconstruct_q_constructive(&a, &b, &part, DEFAULT_TOLERANCE).unwrap();
        prop_assert!(out.is_certified(), "{:?}", out);
        let cert = out.certificate().unwrap();
        let qa: DMatrix<Complex<f64>> = cert.q.adjoint() * a.to_numeric() * &cert.q;
        prop_assert!((qa - b.to_numeric()).camax() < 1e-6);
    }

    #[test]
    fn walk_rank_is_bounded(g in graph(1, 6)) {
        let part = g.degree_partition();
        let w = extended_walk_matrix(&g.adjacency::<Rational>(), &part).unwrap();
        prop_assert_eq!(w.columns().shape(), (g.order(), g.order() * part.len()));
        prop_assert!(w.rank() <= g.order());
        let d = w.last_invariant_factor().unwrap();
        prop_assert_eq!(d.sign() == num_bigint::Sign::NoSign, !w.has_full_row_rank());
    }

    #[test]
    fn diagnostics_hold_on_relabelled_graphs(g in graph(2, 6), seed in any::<u64>()) {
        let part = g.degree_partition();
        let h = g.permuted(&class_preserving(&part, seed));
        let report =
            verify_claim_diagnostics(&g.adjacency::<Rational>(), &h.adjacency::<Rational>(), &part, DEFAULT_TOLERANCE)
                .unwrap();
        prop_assert!(report.holds(), "{:?}", report);
    }
}

#[test]
fn cospectral_non_relabelled_pair_is_refused() {
    let star = Graph::star(4);
    let other = Graph::cycle(4).disjoint_union(&Graph::empty(1));
    let part = VertexPartition::trivial(5);
    let out = reconstruct_q_constructive(
        &star.adjacency::<Rational>(),
        &other.adjacency::<Rational>(),
        &part,
        DEFAULT_TOLERANCE,
    )
    .unwrap();
    assert!(!out.is_certified());
}
