use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use minfill::additive::{canonical_form, is_additive, is_pseudo_additive, oracle_four_point, reconstruct};
use minfill::embed::{induced_lengths, kuratowski_embed, kuratowski_network, linf_distance, mst, sgr};
use minfill::fillings::{mf_value, mpf, SweepOptions};
use minfill::fixtures::{random_rational_space, random_weighted_tree};
use minfill::lp::SignMode;
use minfill::metric::{default_labels, min_perimeter, scale};
use minfill::rational::{frac, half, rat};
use minfill::tours::{enumerate_tours, exactness_report, is_planar, validate_structure, Claim};
use minfill::trees::{binary_count, binary_from_index, TreeTopology};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_topology(r: &mut ChaCha8Rng, n: usize) -> TreeTopology {
    binary_from_index(n, r.gen_range(0..binary_count(n))).into_inner()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn generating_tree_round_trip(seed in any::<u64>(), n in 2usize..=9, signed in any::<bool>()) {
        let w = random_weighted_tree(&mut rng(seed), n, signed);
        let space = w.boundary_space(default_labels(n)).unwrap();
        let g = reconstruct(&space, signed).unwrap();
        let expected = canonical_form(&w);
        prop_assert_eq!(g.tree.topology(), expected.topology());
        prop_assert_eq!(g.tree.weights(), expected.weights());
    }

    #[test]
    fn tree_spaces_satisfy_four_point_rules(seed in any::<u64>(), n in 4usize..=7) {
        let w = random_weighted_tree(&mut rng(seed), n, false);
        let space = w.boundary_space(default_labels(n)).unwrap();
        prop_assert!(is_additive(&space));
        let signed = random_weighted_tree(&mut rng(seed), n, true);
        prop_assert!(is_pseudo_additive(&signed.boundary_space(default_labels(n)).unwrap()));
    }

    #[test]
    fn additive_implies_pseudo_additive(seed in any::<u64>(), n in 4usize..=6) {
        let space = random_rational_space(&mut rng(seed), n);
        prop_assert!(!is_additive(&space) || is_pseudo_additive(&space));
    }

    #[test]
    fn kuratowski_realizes_every_mpf(seed in any::<u64>(), n in 3usize..=6) {
        let mut r = rng(seed);
        let space = random_rational_space(&mut r, n);
        let rows = kuratowski_embed(&space);
        for (i, j) in space.pairs() {
            prop_assert_eq!(&linf_distance(&rows[i], &rows[j]), space.d(i, j));
        }
        let g = mpf(&space, &random_topology(&mut r, n), SignMode::Nonnegative).unwrap().tree;
        let images = kuratowski_network(&space, &g).unwrap();
        prop_assert_eq!(induced_lengths(&g, &images), g.weights().to_vec());
        let vd = g.vertex_distances();
        for u in 0..images.len() {
            for v in u + 1..images.len() {
                prop_assert!(linf_distance(&images[u], &images[v]) <= vd[u][v]);
            }
        }
    }

    #[test]
    fn exactness_agrees_with_the_base(seed in any::<u64>(), n in 3usize..=6) {
        let mut r = rng(seed);
        let space = random_rational_space(&mut r, n);
        let g = mpf(&space, &random_topology(&mut r, n), SignMode::Nonnegative).unwrap().tree;
        let (base, _) = g.base();
        let on_tree = exactness_report(&space, &g).unwrap();
        let on_base = exactness_report(&space, &base).unwrap();
        let t = g.topology();
        let b = base.topology();
        for e in (0..t.edge_count()).filter(|&e| !g.is_degenerate(e)) {
            let split = t.split(e).unwrap();
            let image = (0..b.edge_count()).find(|&f| b.split(f).unwrap() == split).unwrap();
            prop_assert_eq!(on_tree.edges[e], on_base.edges[image]);
        }
    }

    #[test]
    fn binary_tours_are_planar(seed in any::<u64>(), n in 3usize..=8) {
        let t = random_topology(&mut rng(seed), n);
        let tours = enumerate_tours(&t, 10).unwrap();
        prop_assert_eq!(tours.len(), 1 << (n - 3));
        for o in &tours {
            prop_assert!(is_planar(&t, o).unwrap());
        }
    }

    #[test]
    fn mpf_passes_the_structure_checks(seed in any::<u64>(), n in 3usize..=6) {
        let mut r = rng(seed);
        let space = random_rational_space(&mut r, n);
        let g = mpf(&space, &random_topology(&mut r, n), SignMode::Nonnegative).unwrap().tree;
        prop_assert_eq!(validate_structure(&space, &g, Claim::Mpf), vec![]);
    }

    #[test]
    fn filling_bounds(seed in any::<u64>(), n in 2usize..=6) {
        let space = random_rational_space(&mut rng(seed), n);
        let opts = SweepOptions::default();
        let m = mf_value(&space, SignMode::Nonnegative, &opts).unwrap();
        let (tree, _) = mst(&space);
        let (p, _) = min_perimeter(&space, 10).unwrap();
        // half-perimeter ≤ mf ≤ mst, and the half-perimeter exceeds mst/2
        prop_assert!(&p * half() <= m && m <= tree);
        prop_assert!(&p * half() > &tree * half());
        prop_assert!(sgr(&space, &opts).unwrap() > half());
    }

    #[test]
    fn scaling_scales_the_filling(seed in any::<u64>(), n in 3usize..=5, num in 1i64..=9, den in 1i64..=4) {
        let space = random_rational_space(&mut rng(seed), n);
        let lambda = frac(num, den);
        let opts = SweepOptions::default();
        let a = mf_value(&space, SignMode::Nonnegative, &opts).unwrap();
        let b = mf_value(&scale(&space, &lambda).unwrap(), SignMode::Nonnegative, &opts).unwrap();
        prop_assert_eq!(b, a * lambda);
    }

    #[test]
    fn four_point_oracle_matches_the_sweep(seed in any::<u64>()) {
        let space = random_rational_space(&mut rng(seed), 4);
        let o = oracle_four_point(&space).unwrap();
        prop_assert_eq!(o.value.clone(), mf_value(&space, SignMode::Nonnegative, &SweepOptions::default()).unwrap());
        prop_assert_eq!(o.tree.total_weight(), o.value.clone());
        prop_assert!(o.tree.is_filling_of(&space));
    }
}

#[test]
fn simplex_fillings() {
    for n in 2..=7usize {
        let s = minfill::fixtures::simplex(n, rat(2));
        assert_eq!(mf_value(&s, SignMode::Nonnegative, &SweepOptions::default()).unwrap(), rat(n as i64));
    }
}
