use gcatalan_core::analytic::{kms_catalan, perron_frobenius};
use gcatalan_core::combinatorics::{dyck_to_tree, dyck_to_word, enumerate_dyck, tree_to_dyck, word_to_dyck};
use gcatalan_core::dp::{catalan_edge_table, catalan_table, classical_catalan};
use gcatalan_core::fixtures;
use gcatalan_core::series::{series_from_table, PowerSeries};
use gcatalan_core::word::{enumerate_words, reduce, Symbol, Word};
use gcatalan_core::{Budget, EdgeId, Graph};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn graph_from_seed(seed: u64) -> Graph {
    fixtures::random_irreducible(&mut StdRng::seed_from_u64(seed), 3, 5)
}

/// A valid vertex matrix whose columns `i1` and `i2` coincide.
fn twin_columns() -> impl Strategy<Value = (Vec<Vec<u64>>, usize, usize)> {
    (2usize..=4)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(0u64..=2, n * n), 0..n, 0..n))
        .prop_filter("distinct columns", |(_, _, i1, i2)| i1 != i2)
        .prop_map(|(n, flat, i1, i2)| {
            let mut m: Vec<Vec<u64>> = flat.chunks(n).map(|r| r.to_vec()).collect();
            for row in m.iter_mut() {
                row[i2] = row[i1];
            }
            if (0..n).all(|r| m[r][i1] == 0) {
                m[0][i1] += 1;
                m[0][i2] += 1;
            }
            for j in 0..n {
                if j != i1 && j != i2 && m.iter().all(|row| row[j] == 0) {
                    m[j][j] = 1;
                }
            }
            for row in m.iter_mut() {
                if row.iter().all(|&x| x == 0) {
                    row[i1] += 1;
                    row[i2] += 1;
                }
            }
            (m, i1, i2)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn growth_bound(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        let norm = BigUint::from(g.vertex_matrix().column_sum_norm());
        let t = catalan_table(&g, 25);
        for n in 0..=25 {
            let bound = norm.pow(n as u32) * classical_catalan(n);
            for row in &t.per_vertex {
                prop_assert!(row[n] <= bound);
            }
        }
    }

    #[test]
    fn equal_columns_give_equal_counts((m, i1, i2) in twin_columns()) {
        let g = Graph::from_vertex_matrix(&m).unwrap();
        let t = catalan_table(&g, 20);
        prop_assert_eq!(&t.per_vertex[i1], &t.per_vertex[i2]);
    }

    #[test]
    fn edge_form_agrees(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        let t = catalan_table(&g, 15);
        let by_edge = catalan_edge_table(&g, 15);
        for e in g.edge_ids() {
            prop_assert_eq!(&by_edge[e.0], &t.per_vertex[g.source(e).index()]);
        }
    }

    #[test]
    fn weighted_recurrence(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        prop_assume!(g.is_aperiodic().unwrap());
        let t = catalan_table(&g, 12);
        let (data, seq) = kms_catalan(&g, &t, 12, 1e-10).unwrap();
        prop_assert!((seq.totals[0] - 1.0).abs() < 1e-10);
        prop_assert!(data.edge_vector.iter().all(|&x| x > 0.0));
        let a = g.vertex_matrix();
        let c = |k: usize, j: usize| t.per_vertex[j][k].to_f64().unwrap();
        for i in 0..g.num_vertices() {
            for n in 0..12 {
                let rhs: f64 = (0..=n)
                    .map(|k| {
                        let inner: f64 = (0..g.num_vertices()).map(|j| c(k, j) * a.at(j, i) as f64).sum();
                        inner * seq.per_vertex[i][n - k]
                    })
                    .sum();
                let lhs = seq.per_vertex[i][n + 1];
                prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs(), "{} vs {}", lhs, rhs);
            }
        }
    }

    #[test]
    fn bijections_round_trip(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        let budget = Budget::default();
        for n in 1..=3 {
            for w in enumerate_words(&g, n, None, &budget).unwrap() {
                let p = word_to_dyck(&w, &g).unwrap();
                let tree = dyck_to_tree(&p, &g).unwrap();
                let back = tree_to_dyck(&tree, &g).unwrap();
                prop_assert_eq!(&back, &p);
                prop_assert_eq!(dyck_to_word(&back, &g).unwrap(), w);
            }
        }
    }

    #[test]
    fn down_steps_compose(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        for p in enumerate_dyck(&g, 4, None, &Budget::default()).unwrap() {
            prop_assert!(p.down_steps_compose(&g));
        }
    }

    #[test]
    fn reduction_is_multiplicative(seed in any::<u64>(), a in prop::collection::vec((any::<bool>(), 0usize..5), 0..5),
                                   b in prop::collection::vec((any::<bool>(), 0usize..5), 0..5)) {
        let g = graph_from_seed(seed);
        let word = |spec: &[(bool, usize)]| Word(spec.iter().map(|&(star, e)| {
            let e = EdgeId(e % g.num_edges());
            if star { Symbol::star(e) } else { Symbol::plain(e) }
        }).collect());
        let (x, y) = (word(&a), word(&b));
        prop_assert_eq!(reduce(&x.concat(&y), &g), reduce(&x, &g).mul(&reduce(&y, &g), &g));
    }

    #[test]
    fn truncated_products_commute_with_truncation(seed in any::<u64>(), cut in 1usize..10) {
        let g = graph_from_seed(seed);
        let (f, _) = series_from_table(&catalan_table(&g, 12));
        let full: PowerSeries = &f[0] * &f[f.len() - 1];
        let short = &f[0].truncate(cut) * &f[f.len() - 1].truncate(cut);
        prop_assert_eq!(full.truncate(cut), short);
    }
}

#[test]
fn perron_vector_against_dense_eigensolver() {
    let mut rng = StdRng::seed_from_u64(404);
    let mut checked = 0;
    while checked < 10 {
        let g = fixtures::random_irreducible(&mut rng, 4, 7);
        if !g.is_aperiodic().unwrap() {
            continue;
        }
        let d = perron_frobenius(&g, 1e-10).unwrap();
        let spectral = g
            .edge_matrix()
            .to_f64()
            .complex_eigenvalues()
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        assert!((d.r_g - spectral).abs() < 1e-8, "{} vs {}", d.r_g, spectral);
        assert!(d.residual < 1e-10);
        assert!((d.vertex_weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        checked += 1;
    }
}
