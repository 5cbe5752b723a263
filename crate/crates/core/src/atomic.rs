//! Cluster monomials as an atomic basis: the proper-Laurent-monomial sweep,
//! basis expansion, and positivity versus nonnegative coordinates.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cluster::ExchangeGraph;
use crate::error::{Error, Result};
use crate::grassmannian::euler_characteristics;
use crate::laurent::{Exponent, LaurentPoly};
use crate::linalg::{Matrix, MatrixOps, Rationals};
use crate::matrix::ExchangeMatrix;
use crate::par;
use crate::qp::decorated::DecoratedRep;
use crate::rep::hom_dim;

const Q: Rationals = Rationals;

/// A monomial in the variables of one cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterMonomial {
    /// Least-index cluster containing every factor.
    pub owner: usize,
    /// `(variable index, exponent)` pairs, sorted, exponents positive.
    pub factors: Vec<(usize, u32)>,
    /// Expansion in the initial cluster.
    pub expansion: LaurentPoly,
}

impl ClusterMonomial {
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// Exponent vector over the owner's variables, in their sorted order.
    pub fn exponents(&self, graph: &ExchangeGraph) -> Vec<u32> {
        graph.clusters[self.owner]
            .variables
            .iter()
            .map(|v| self.factors.iter().find(|(w, _)| w == v).map_or(0, |&(_, e)| e))
            .collect()
    }

    /// Human-readable label such as `u3^2*u5`, with 1-based variable
    /// indices into the graph's canonical variable list.
    pub fn label(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|&(v, e)| if e == 1 { format!("u{}", v + 1) } else { format!("u{}^{}", v + 1, e) })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Product of the given expansions of the factors.
    pub fn evaluate(&self, expansions: &[LaurentPoly], nvars: usize) -> LaurentPoly {
        self.factors.iter().fold(LaurentPoly::one(nvars), |acc, &(v, e)| &acc * &expansions[v].pow(e))
    }

    /// Whether every factor belongs to the given sorted variable set.
    pub fn lies_in(&self, vars: &[usize]) -> bool {
        self.factors.iter().all(|(v, _)| vars.binary_search(v).is_ok())
    }
}

fn exponent_vectors(n: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|pre: Vec<u32>| {
                let used: u32 = pre.iter().sum();
                (0..=max_deg - used).map(move |x| [pre.clone(), vec![x]].concat())
            })
            .collect();
    }
    out
}

/// All cluster monomials of total degree at most `max_deg`, one per
/// distinct element, sorted by degree and then by factors.
pub fn enumerate_cluster_monomials(graph: &ExchangeGraph, max_deg: u32) -> Vec<ClusterMonomial> {
    let n = graph.rank();
    let mut owners: BTreeMap<Vec<(usize, u32)>, usize> = BTreeMap::new();
    let exps = exponent_vectors(n, max_deg);
    for (ci, c) in graph.clusters.iter().enumerate() {
        for e in &exps {
            let mut factors: Vec<(usize, u32)> = c.variables.iter().zip(e).filter(|(_, &x)| x > 0).map(|(&v, &x)| (v, x)).collect();
            factors.sort_unstable();
            owners.entry(factors).or_insert(ci);
        }
    }
    let keys: Vec<(Vec<(usize, u32)>, usize)> = owners.into_iter().collect();
    let mut monomials: Vec<ClusterMonomial> = par::map(&keys, |(factors, owner)| {
        let m = ClusterMonomial { owner: *owner, factors: factors.clone(), expansion: LaurentPoly::zero(n) };
        ClusterMonomial { expansion: m.evaluate(&graph.variables, n), ..m }
    });
    monomials.sort_by(|a, b| (a.degree(), &a.factors).cmp(&(b.degree(), &b.factors)));
    // distinct factor multisets give distinct elements; keep the first of
    // any repeated expansion all the same
    let mut seen = BTreeSet::new();
    monomials.retain(|m| seen.insert(m.expansion.clone()));
    monomials
}

/// Expansions of every cluster variable in every cluster, indexed
/// `[cluster][variable]`.
pub fn all_local_expansions(graph: &ExchangeGraph) -> Result<Vec<Vec<LaurentPoly>>> {
    let ids: Vec<usize> = (0..graph.clusters.len()).collect();
    par::try_map(&ids, |&c| graph.local_expansions(c))
}

/// A monomial that failed the lemma in some cluster.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaWitness {
    pub cluster: usize,
    pub monomial: String,
    pub expansion: String,
    pub nonneg: bool,
    pub proper: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub clusters: usize,
    pub monomials: usize,
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<LemmaWitness>,
}

impl LemmaReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every cluster `C` and every monomial not supported on `C`, checks
/// that its expansion in `C` has nonnegative coefficients and only proper
/// Laurent monomials.
pub fn check_proper_lemma(graph: &ExchangeGraph, monomials: &[ClusterMonomial], locals: &[Vec<LaurentPoly>]) -> LemmaReport {
    let n = graph.rank();
    let ids: Vec<usize> = (0..graph.clusters.len()).collect();
    let per_cluster: Vec<(usize, usize, Vec<LemmaWitness>)> = par::map(&ids, |&c| {
        let vars = &graph.clusters[c].variables;
        let (mut checked, mut skipped, mut bad) = (0, 0, Vec::new());
        for m in monomials {
            if m.lies_in(vars) {
                skipped += 1;
                continue;
            }
            checked += 1;
            let p = m.evaluate(&locals[c], n);
            let cls = p.classify();
            if !(cls.is_nonneg && cls.is_proper_sum) {
                bad.push(LemmaWitness {
                    cluster: c,
                    monomial: m.label(),
                    expansion: p.to_string(),
                    nonneg: cls.is_nonneg,
                    proper: cls.is_proper_sum,
                });
            }
        }
        (checked, skipped, bad)
    });
    let mut report = LemmaReport { clusters: ids.len(), monomials: monomials.len(), checked: 0, skipped: 0, violations: vec![] };
    for (c, s, v) in per_cluster {
        report.checked += c;
        report.skipped += s;
        report.violations.extend(v);
    }
    report
}

/// Coordinates of an element in the cluster-monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisExpansion {
    /// `(monomial index, coefficient)`, nonzero coefficients only.
    pub coefficients: Vec<(usize, BigInt)>,
    /// Set when the element is not an integer combination of the given
    /// monomials.
    pub residual: bool,
}

impl BasisExpansion {
    pub fn coords_nonneg(&self) -> bool {
        self.coefficients.iter().all(|(_, c)| !c.is_negative())
    }
}

/// Solves for basis coordinates using the monomial supports in the initial
/// cluster as equations.
#[derive(Clone, Debug)]
pub struct BasisSolver {
    nvars: usize,
    expansions: Vec<LaurentPoly>,
    rows: Vec<Exponent>,
    /// Inverse of the square submatrix on `rows`.
    inverse: Matrix<BigRational>,
}

impl BasisSolver {
    pub fn new(monomials: &[ClusterMonomial], nvars: usize) -> Result<BasisSolver> {
        let expansions: Vec<LaurentPoly> = monomials.iter().map(|m| m.expansion.clone()).collect();
        let mut support: BTreeSet<Exponent> = BTreeSet::new();
        for p in &expansions {
            support.extend(p.terms().map(|(e, _)| e.clone()));
        }
        let support: Vec<Exponent> = support.into_iter().collect();
        let index: HashMap<&Exponent, usize> = support.iter().enumerate().map(|(i, e)| (e, i)).collect();
        // transpose: one row per monomial, one column per exponent
        let mut at = Matrix::filled(expansions.len(), support.len(), BigRational::zero());
        for (i, p) in expansions.iter().enumerate() {
            for (e, c) in p.terms() {
                at.set(i, index[e], BigRational::from_integer(c.clone()));
            }
        }
        let (_, pivots) = MatrixOps::<Rationals>::rref(&at, &Q);
        if pivots.len() != expansions.len() {
            return Err(Error::InvariantViolation("cluster monomial expansions are linearly dependent".into()));
        }
        let square = at.select_columns(&pivots).transpose();
        let ident = MatrixOps::<Rationals>::identity(&Q, pivots.len());
        let inverse = MatrixOps::<Rationals>::solve(&square, &Q, &ident).expect("independent rows");
        let rows = pivots.iter().map(|&p| support[p].clone()).collect();
        Ok(BasisSolver { nvars, expansions, rows, inverse })
    }

    pub fn len(&self) -> usize {
        self.expansions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expansions.is_empty()
    }

    pub fn expand(&self, p: &LaurentPoly) -> BasisExpansion {
        let rhs = Matrix::from_vec(
            self.rows.len(),
            1,
            self.rows.iter().map(|e| BigRational::from_integer(p.coeff(e))).collect(),
        );
        let x = MatrixOps::<Rationals>::mul(&self.inverse, &Q, &rhs);
        let mut coefficients = Vec::new();
        let mut residual = false;
        let mut rebuilt = LaurentPoly::zero(self.nvars);
        for (i, c) in x.data().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.is_integer() {
                residual = true;
                continue;
            }
            let c = c.to_integer();
            rebuilt = &rebuilt + &self.expansions[i].scale(&c);
            coefficients.push((i, c));
        }
        if rebuilt != *p {
            residual = true;
        }
        BasisExpansion { coefficients, residual }
    }
}

/// `p = N / x^m` with `N` a polynomial: substitutes the expansions of the
/// initial variables in each cluster into `N` and divides by the image of
/// `x^m`, checking nonnegativity cluster by cluster.
pub fn is_positive(p: &LaurentPoly, graph: &ExchangeGraph, locals: &[Vec<LaurentPoly>]) -> Result<bool> {
    let n = graph.rank();
    if p.is_zero() {
        return Ok(true);
    }
    let min = p.min_exponent().expect("nonzero");
    let m: Vec<i32> = min.as_slice().iter().map(|&e| (-e).max(0)).collect();
    let numerator = p.shift(&Exponent::new(m.clone()));
    let initial: Vec<usize> = (0..n)
        .map(|i| graph.variable_index(&LaurentPoly::var(n, i)).ok_or_else(|| Error::InvariantViolation("initial variable missing".into())))
        .collect::<Result<_>>()?;
    let ids: Vec<usize> = (0..graph.clusters.len()).collect();
    let verdicts = par::try_map(&ids, |&c| -> Result<bool> {
        let images: Vec<LaurentPoly> = initial.iter().map(|&v| locals[c][v].clone()).collect();
        let num = numerator.substitute(&images)?;
        let den = images.iter().zip(&m).fold(LaurentPoly::one(n), |acc, (l, &k)| &acc * &l.pow(k as u32));
        Ok(num.div_exact(&den)?.is_nonneg())
    })?;
    Ok(verdicts.into_iter().all(|v| v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomicityReport {
    pub is_positive: bool,
    pub coords_nonneg: bool,
    pub theorem_consistent: bool,
    pub residual: bool,
}

/// Positivity in every cluster against nonnegativity of basis coordinates.
pub fn verify_atomicity(
    p: &LaurentPoly,
    graph: &ExchangeGraph,
    solver: &BasisSolver,
    locals: &[Vec<LaurentPoly>],
) -> Result<AtomicityReport> {
    let exp = solver.expand(p);
    let is_positive = is_positive(p, graph, locals)?;
    let coords_nonneg = exp.coords_nonneg();
    Ok(AtomicityReport { is_positive, coords_nonneg, theorem_consistent: is_positive == coords_nonneg, residual: exp.residual })
}

/// Everything needed to run the verifier on one exchange graph at a fixed
/// degree bound.
pub struct AtomicVerifier<'g> {
    pub graph: &'g ExchangeGraph,
    pub max_deg: u32,
    pub monomials: Vec<ClusterMonomial>,
    pub locals: Vec<Vec<LaurentPoly>>,
    pub solver: BasisSolver,
}

impl<'g> AtomicVerifier<'g> {
    pub fn new(graph: &'g ExchangeGraph, max_deg: u32) -> Result<Self> {
        let monomials = enumerate_cluster_monomials(graph, max_deg);
        let locals = all_local_expansions(graph)?;
        let solver = BasisSolver::new(&monomials, graph.rank())?;
        Ok(AtomicVerifier { graph, max_deg, monomials, locals, solver })
    }

    pub fn lemma(&self) -> LemmaReport {
        check_proper_lemma(self.graph, &self.monomials, &self.locals)
    }

    pub fn expand(&self, p: &LaurentPoly) -> BasisExpansion {
        self.solver.expand(p)
    }

    pub fn verify(&self, p: &LaurentPoly) -> Result<AtomicityReport> {
        verify_atomicity(p, self.graph, &self.solver, &self.locals)
    }

    /// `Σ c_i m_i` for `(monomial index, coefficient)` pairs.
    pub fn combination(&self, terms: &[(usize, i64)]) -> LaurentPoly {
        terms.iter().fold(LaurentPoly::zero(self.graph.rank()), |acc, &(i, c)| {
            &acc + &self.monomials[i].expansion.scale(&BigInt::from(c))
        })
    }
}

/// The inequalities behind the lemma, checked on a positive cluster
/// representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofReport {
    pub g_vector: Vec<i64>,
    /// Dimension vectors with nonzero Euler characteristic.
    pub contributing: Vec<Vec<usize>>,
    pub checks: usize,
    pub violations: Vec<String>,
}

pub fn proof_inequalities(dec: &DecoratedRep, b: &ExchangeMatrix, prime_budget: usize) -> Result<ProofReport> {
    if dec.decoration().iter().any(|&v| v != 0) {
        return Err(Error::InvariantViolation("proof inequalities need an undecorated representation".into()));
    }
    let g = dec.g_vector()?;
    let dims = dec.dims().to_vec();
    let dot = |e: &[usize]| e.iter().zip(&g).map(|(&a, &b)| a as i64 * b).sum::<i64>();
    let chis = euler_characteristics(dec.positive_part(), prime_budget)?;
    let mut report = ProofReport { g_vector: g.clone(), contributing: vec![], checks: 0, violations: vec![] };
    let zero_rep = dims.iter().all(|&d| d == 0);
    for (e, chi) in chis {
        if chi.is_zero() {
            continue;
        }
        report.contributing.push(e.clone());
        if !zero_rep {
            // x^{g + Be} is proper
            let be = b.apply(&e.iter().map(|&x| x as i64).collect::<Vec<_>>());
            let exp: Vec<i64> = g.iter().zip(&be).map(|(a, b)| a + b).collect();
            report.checks += 1;
            if exp.iter().all(|&x| x >= 0) {
                report.violations.push(format!("monomial exponent {exp:?} for e = {e:?} is not proper"));
            }
        }
        if e.iter().any(|&x| x > 0) {
            report.checks += 1;
            let s = dot(&e);
            if s >= 0 {
                report.violations.push(format!("e . g = {s} >= 0 for e = {e:?}"));
            }
        }
    }
    if !zero_rep {
        report.checks += 1;
        let s = dot(&dims);
        let h = hom_dim(dec.positive_part(), dec.positive_part())? as i64;
        if s != -h || s >= 0 {
            report.violations.push(format!("dim M . g = {s} but dim End(M) = {h}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{enumerate_exchange_graph, DEFAULT_CAP};
    use crate::grassmannian::DEFAULT_PRIME_BUDGET;
    use crate::matrix::Quiver;
    use crate::qp::decorated::build_cluster_rep;

    fn a2_graph() -> ExchangeGraph {
        enumerate_exchange_graph(&Quiver::new(2, vec![(0, 1)]).unwrap().to_matrix(), DEFAULT_CAP).unwrap()
    }

    fn lp(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, 2).unwrap()
    }

    #[test]
    fn monomial_counts_in_a2() {
        let g = a2_graph();
        assert_eq!(enumerate_cluster_monomials(&g, 0).len(), 1);
        assert_eq!(enumerate_cluster_monomials(&g, 1).len(), 6);
        assert_eq!(enumerate_cluster_monomials(&g, 2).len(), 16);
        assert_eq!(enumerate_cluster_monomials(&g, 0)[0].label(), "1");
    }

    #[test]
    fn lemma_in_a2() {
        let g = a2_graph();
        let v = AtomicVerifier::new(&g, 2).unwrap();
        let r = v.lemma();
        assert!(r.is_clean(), "{:?}", r.violations);
        assert_eq!(r.checked + r.skipped, r.clusters * r.monomials);
        // the initial cluster: x1 x2 is skipped, (x1 + x2 + 1)/(x1 x2) is proper
        let init = g.initial_cluster();
        let target = lp("x1^-1*x2^-1 + x1^-1 + x2^-1");
        let idx = g.variable_index(&target).unwrap();
        let local = &v.locals[init];
        let init_vars = &g.clusters[init].variables;
        assert!(!init_vars.contains(&idx));
        assert!(local[idx].classify().is_proper_sum);
    }

    #[test]
    fn basis_expansions() {
        let g = a2_graph();
        let v = AtomicVerifier::new(&g, 2).unwrap();
        for (i, m) in v.monomials.iter().enumerate() {
            let e = v.expand(&m.expansion);
            assert_eq!(e.coefficients, vec![(i, BigInt::from(1))]);
            assert!(!e.residual);
        }
        // x2 + 1 = x1 · (x2 + 1)/x1
        let e = v.expand(&lp("x2 + 1"));
        let labels: Vec<(String, BigInt)> = e.coefficients.iter().map(|(i, c)| (v.monomials[*i].expansion.to_string(), c.clone())).collect();
        assert_eq!(labels, vec![("1".to_string(), BigInt::from(1)), ("x2".to_string(), BigInt::from(1))]);
        let p = v.combination(&[(3, 3), (7, 2)]);
        let e = v.expand(&p);
        assert_eq!(e.coefficients, vec![(3, BigInt::from(3)), (7, BigInt::from(2))]);
        // outside the span at this degree
        assert!(v.expand(&lp("x1^5")).residual);
    }

    #[test]
    fn atomicity_examples() {
        let g = a2_graph();
        let v = AtomicVerifier::new(&g, 2).unwrap();
        for m in &v.monomials {
            let r = v.verify(&m.expansion).unwrap();
            assert!(r.is_positive && r.coords_nonneg && r.theorem_consistent);
        }
        let r = v.verify(&v.combination(&[(1, 1), (2, -1)])).unwrap();
        assert!(!r.coords_nonneg && !r.is_positive && r.theorem_consistent);
        let r = v.verify(&LaurentPoly::zero(2)).unwrap();
        assert!(r.is_positive && r.coords_nonneg && r.theorem_consistent);
    }

    #[test]
    fn proof_inequalities_for_p1() {
        let b = Quiver::new(2, vec![(0, 1)]).unwrap().to_matrix();
        // (x1 + x2 + 1)/(x1 x2) is reached by the walk [0, 1], slot 1
        let dec = build_cluster_rep(&b, &[0, 1], 1).unwrap();
        assert_eq!(dec.dims(), &[1, 1]);
        let r = proof_inequalities(&dec, &b, DEFAULT_PRIME_BUDGET).unwrap();
        assert_eq!(r.g_vector, vec![0, -1]);
        assert_eq!(r.contributing, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }
}
