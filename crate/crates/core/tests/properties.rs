use cluster_atomic::cluster::{enumerate_exchange_graph, Seed, DEFAULT_CAP};
use cluster_atomic::qp::{build_cluster_rep, qp_mutate, Qp};
use cluster_atomic::rep::{hom_dim, QuiverRepresentation};
use cluster_atomic::{Exponent, ExchangeMatrix, LaurentPoly, Quiver};
use num_bigint::BigInt;
use proptest::prelude::*;

const N: usize = 3;

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-3i32..=3, N), -5i64..=5), 0..6)
        .prop_map(|terms| LaurentPoly::from_terms(N, terms.into_iter().map(|(e, c)| (Exponent::new(e), BigInt::from(c)))))
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn skew(n: usize, max: i64) -> impl Strategy<Value = ExchangeMatrix> {
    prop::collection::vec(-max..=max, n * (n - 1) / 2).prop_map(move |upper| {
        let mut rows = vec![vec![0i64; n]; n];
        let mut it = upper.into_iter();
        for i in 0..n {
            for j in i + 1..n {
                let x = it.next().unwrap();
                rows[i][j] = x;
                rows[j][i] = -x;
            }
        }
        ExchangeMatrix::from_rows(&rows).unwrap()
    })
}

fn a3() -> ExchangeMatrix {
    Quiver::new(3, vec![(0, 1), (1, 2)]).unwrap().to_matrix()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn addition_is_a_commutative_group(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p + &LaurentPoly::zero(N), p.clone());
    }

    #[test]
    fn multiplication_is_commutative_associative_distributive(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &LaurentPoly::one(N), p.clone());
    }

    #[test]
    fn exact_division_inverts_multiplication(p in poly(), q in nonzero_poly()) {
        prop_assert_eq!((&p * &q).div_exact(&q).unwrap(), p);
    }

    #[test]
    fn substitution_is_a_ring_map(p in poly(), q in poly(), images in prop::collection::vec(prop::collection::vec(-2i32..=2, N), N)) {
        let images: Vec<LaurentPoly> = images.into_iter().map(|e| LaurentPoly::x_pow(Exponent::new(e))).collect();
        let s = |x: &LaurentPoly| x.substitute(&images).unwrap();
        prop_assert_eq!(s(&(&p * &q)), &s(&p) * &s(&q));
        prop_assert_eq!(s(&(&p + &q)), &s(&p) + &s(&q));
    }

    #[test]
    fn printing_then_parsing_is_identity(p in poly()) {
        let text = p.to_string();
        prop_assert_eq!(LaurentPoly::parse(&text, N).unwrap(), p);
    }

    #[test]
    fn matrix_mutation_is_an_involution(b in (2usize..=6).prop_flat_map(|n| (skew(n, 4), 0..n))) {
        let (b, k) = b;
        prop_assert_eq!(b.mutate(k).unwrap().mutate(k).unwrap(), b);
    }

    #[test]
    fn seed_mutation_is_an_involution_along_walks(walk in prop::collection::vec(0usize..3, 0..8), k in 0usize..3) {
        let seed = Seed::initial(a3()).mutate_along(&walk).unwrap();
        let back = seed.mutate(k).unwrap().mutate(k).unwrap();
        prop_assert_eq!(back.matrix, seed.matrix);
        prop_assert_eq!(back.cluster, seed.cluster);
    }

    #[test]
    fn qp_mutation_follows_matrix_mutation(walk in prop::collection::vec(0usize..4, 1..12)) {
        let q = Quiver::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut qp = Qp::primitive(q).unwrap();
        for &k in &walk {
            let b = qp.quiver.to_matrix().mutate(k).unwrap();
            qp = qp_mutate(&qp, k).unwrap().result;
            prop_assert_eq!(qp.quiver.to_matrix(), b);
            prop_assert!(qp.has_primitive_support());
        }
    }

    #[test]
    fn cluster_reps_agree_with_seeds(walk in prop::collection::vec(0usize..3, 0..6), k in 0usize..3) {
        let b = a3();
        let seed = Seed::initial(b.clone()).mutate_along(&walk).unwrap();
        let dec = build_cluster_rep(&b, &walk, k).unwrap();
        prop_assert_eq!(dec.cluster_character(&b, 64).unwrap(), seed.cluster[k].clone());
        let twice = dec.mutate(k).unwrap().mutate(k).unwrap();
        prop_assert_eq!(twice.g_vector().unwrap(), dec.g_vector().unwrap());
    }

    #[test]
    fn hom_is_additive(m in 0i64..=2, n in 0i64..=2) {
        let q = Quiver::new(2, vec![(0, 1)]).unwrap();
        let rep = |x: i64| QuiverRepresentation::from_int(q.clone(), vec![1, 1], &[vec![x]]).unwrap();
        let (m, n) = (rep(m), rep(n));
        let s = m.direct_sum(&n).unwrap();
        prop_assert_eq!(
            hom_dim(&s, &m).unwrap(),
            hom_dim(&m, &m).unwrap() + hom_dim(&n, &m).unwrap()
        );
    }
}

#[test]
fn every_edge_of_finite_graphs_is_an_involution() {
    for b in [a3(), Quiver::new(4, vec![(1, 0), (2, 0), (3, 0)]).unwrap().to_matrix()] {
        let g = enumerate_exchange_graph(&b, DEFAULT_CAP).unwrap();
        for (i, c) in g.clusters.iter().enumerate() {
            for (k, &j) in c.neighbors.iter().enumerate() {
                assert!(g.clusters[j].neighbors.contains(&i), "edge {i} -{k}- {j}");
            }
        }
    }
}
