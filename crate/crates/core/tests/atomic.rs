use cluster_atomic::atomic::{proof_inequalities, AtomicVerifier};
use cluster_atomic::cluster::{enumerate_exchange_graph, DEFAULT_CAP};
use cluster_atomic::grassmannian::DEFAULT_PRIME_BUDGET;
use cluster_atomic::qp::build_cluster_rep;
use cluster_atomic::{LaurentPoly, Quiver};

fn a(n: usize) -> Quiver {
    Quiver::new(n, (0..n - 1).map(|i| (i, i + 1)).collect()).unwrap()
}

#[test]
fn differences_of_equal_degree_monomials_are_not_positive() {
    for q in [a(2), a(3)] {
        let g = enumerate_exchange_graph(&q.to_matrix(), DEFAULT_CAP).unwrap();
        let v = AtomicVerifier::new(&g, 2).unwrap();
        let mut pairs = 0;
        for i in 0..v.monomials.len() {
            for j in 0..v.monomials.len() {
                if i == j || v.monomials[i].degree() != v.monomials[j].degree() {
                    continue;
                }
                let r = v.verify(&v.combination(&[(i, 1), (j, -1)])).unwrap();
                assert!(!r.coords_nonneg && !r.is_positive && r.theorem_consistent && !r.residual);
                pairs += 1;
            }
        }
        assert!(pairs > 0);
    }
}

#[test]
fn monomials_record_their_owner_cluster() {
    let g = enumerate_exchange_graph(&a(3).to_matrix(), DEFAULT_CAP).unwrap();
    for m in AtomicVerifier::new(&g, 3).unwrap().monomials {
        let exps = m.exponents(&g);
        assert_eq!(exps.iter().sum::<u32>(), m.degree());
        let rebuilt = g.clusters[m.owner]
            .variables
            .iter()
            .zip(&exps)
            .fold(LaurentPoly::one(3), |acc, (&v, &e)| &acc * &g.variables[v].pow(e));
        assert_eq!(rebuilt, m.expansion);
    }
}

#[test]
fn proof_inequalities_hold_for_every_positive_cluster_rep() {
    for q in [a(2), a(3), a(4)] {
        let b = q.to_matrix();
        let g = enumerate_exchange_graph(&b, DEFAULT_CAP).unwrap();
        let mut checked = 0;
        for c in &g.clusters {
            for k in 0..b.n() {
                let dec = build_cluster_rep(&b, &c.seed.walk, k).unwrap();
                if dec.decoration().iter().any(|&v| v > 0) {
                    continue;
                }
                let r = proof_inequalities(&dec, &b, DEFAULT_PRIME_BUDGET).unwrap();
                assert!(r.violations.is_empty(), "{:?}: {:?}", c.seed.walk, r.violations);
                checked += 1;
            }
        }
        // every non-initial variable shows up in some cluster
        assert!(checked >= g.variables.len() - b.n());
    }
}
