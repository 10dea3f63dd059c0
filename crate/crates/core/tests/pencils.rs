use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spectra_core::exact::char_poly;
use spectra_core::pencil::{are_cospectral, PartitionChoice};
use spectra_core::{Graph, PitOptions, Rational, SpectrumKind, VertexPartition};

fn graph() -> impl Strategy<Value = Graph> {
    (2usize..=6).prop_flat_map(|n| (Just(n), 0u64..(1 << (n * (n - 1) / 2)))).prop_map(|(n, m)| Graph::from_mask(n, m))
}

fn relabel(g: &Graph, seed: u64) -> Graph {
    let mut perm: Vec<usize> = (0..g.order()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    g.permuted(&perm)
}

/// A partner of the same order: a relabelling half of the time.
fn pair() -> impl Strategy<Value = (Graph, Graph)> {
    (graph(), any::<u64>(), any::<bool>()).prop_map(|(g, seed, same)| {
        let h = if same {
            relabel(&g, seed)
        } else {
            let pairs = g.order() * (g.order() - 1) / 2;
            Graph::from_mask(g.order(), seed % (1 << pairs))
        };
        (g, h)
    })
}

fn poly(g: &Graph) -> Vec<Rational> {
    char_poly(&g.adjacency::<Rational>()).unwrap()
}

fn equal(g: &Graph, h: &Graph, kind: SpectrumKind, choice: &PartitionChoice, opts: &PitOptions) -> bool {
    are_cospectral(g, h, kind, choice, opts).unwrap().equal
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn adjacency_pencil_matches_char_poly((g, h) in pair(), seed in any::<u64>()) {
        let oracle = poly(&g) == poly(&h);
        for opts in [PitOptions::probabilistic(8, seed), PitOptions::deterministic()] {
            prop_assert_eq!(equal(&g, &h, SpectrumKind::S, &PartitionChoice::Degree, &opts), oracle);
        }
    }

    #[test]
    fn generalized_spectrum_matches_complement_oracle((g, h) in pair()) {
        let oracle = poly(&g) == poly(&h) && poly(&g.complement()) == poly(&h.complement());
        let opts = PitOptions::deterministic();
        prop_assert_eq!(equal(&g, &h, SpectrumKind::GS, &PartitionChoice::Degree, &opts), oracle);
    }

    #[test]
    fn specialization_chain((g, h) in pair(), seed in any::<u64>()) {
        let choice = PartitionChoice::Explicit(g.degree_partition());
        let opts = PitOptions::probabilistic(8, seed);
        let gbls = equal(&g, &h, SpectrumKind::GBLS, &choice, &opts);
        let gbdls = equal(&g, &h, SpectrumKind::GBDLS, &choice, &opts);
        let s = equal(&g, &h, SpectrumKind::S, &choice, &opts);
        prop_assert!(!gbls || gbdls);
        prop_assert!(!gbdls || s);
    }

    #[test]
    fn single_class_block_pencil_is_generalized_spectrum((g, h) in pair()) {
        let trivial = PartitionChoice::Explicit(VertexPartition::trivial(g.order()));
        let opts = PitOptions::deterministic();
        prop_assert_eq!(
            equal(&g, &h, SpectrumKind::GBDLS, &trivial, &opts),
            equal(&g, &h, SpectrumKind::GS, &trivial, &opts)
        );
    }

    #[test]
    fn comparison_is_symmetric((g, h) in pair(), seed in any::<u64>()) {
        let opts = PitOptions::probabilistic(4, seed);
        for kind in [SpectrumKind::S, SpectrumKind::GS, SpectrumKind::GDLS, SpectrumKind::GBDLS, SpectrumKind::GBLS] {
            let choice = PartitionChoice::Explicit(g.degree_partition());
            prop_assert_eq!(equal(&g, &h, kind, &choice, &opts), equal(&h, &g, kind, &choice, &opts));
        }
    }

    #[test]
    fn class_preserving_relabel_is_equal(g in graph(), seed in any::<u64>()) {
        let part = g.degree_partition();
        let mut perm: Vec<usize> = (0..g.order()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for class in part.classes() {
            let mut image = class.clone();
            image.shuffle(&mut rng);
            for (&v, &w) in class.iter().zip(&image) {
                perm[v] = w;
            }
        }
        let h = g.permuted(&perm);
        let opts = PitOptions::probabilistic(4, seed);
        for kind in SpectrumKind::ALL.into_iter().filter(|k| !k.is_digraph_kind()) {
            prop_assert!(equal(&g, &h, kind, &PartitionChoice::Degree, &opts), "{}", kind);
            prop_assert!(equal(&g, &g, kind, &PartitionChoice::Degree, &opts));
        }
    }

    #[test]
    fn modes_agree((g, h) in pair(), seed in any::<u64>()) {
        let choice = PartitionChoice::Explicit(g.degree_partition());
        for kind in [SpectrumKind::GS, SpectrumKind::GBDLS] {
            prop_assert_eq!(
                equal(&g, &h, kind, &choice, &PitOptions::probabilistic(8, seed)),
                equal(&g, &h, kind, &choice, &PitOptions::deterministic())
            );
        }
    }
}

#[test]
fn star_and_square_witness() {
    let star = Graph::star(4);
    let other = Graph::cycle(4).disjoint_union(&Graph::empty(1));
    assert_eq!(poly(&star), poly(&other));
    assert_ne!(poly(&star.complement()), poly(&other.complement()));
    let opts = PitOptions::deterministic();
    assert!(equal(&star, &other, SpectrumKind::S, &PartitionChoice::Degree, &opts));
    assert!(!equal(&star, &other, SpectrumKind::GS, &PartitionChoice::Degree, &opts));
}
