//! Decorated representations: g-vectors, F-polynomials, cluster characters
//! and E-invariants, and the representations attached to cluster variables.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::dynkin_components;
use crate::grassmannian::euler_characteristics;
use crate::laurent::{Exponent, LaurentPoly};
use crate::linalg::{Matrix, MatrixOps, Rationals};
use crate::matrix::{ExchangeMatrix, Quiver};
use crate::qp::mutation::{qp_mutate, rep_mutate};
use crate::qp::potential::{jacobian_check, path_sum_action, second_derivative, Qp, QpJson};
use crate::reflection::tau_inverse;
use crate::rep::{hom_dim, FieldTag, QuiverRepresentation, RepresentationJson};

const Q: Rationals = Rationals;

/// A representation of the Jacobian algebra of `qp` together with the
/// dimensions of a decoration space at each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedRep {
    qp: Qp,
    m: QuiverRepresentation,
    v: Vec<usize>,
}

/// The maps around vertex `k`: `α: M_in → M_k`, `β: M_k → M_out`,
/// `γ: M_out → M_in`.
#[derive(Clone, Debug)]
pub struct Triangle {
    /// Arrows ending at `k`, in index order; `M_in` is the sum of their tails.
    pub incoming: Vec<usize>,
    /// Arrows starting at `k`, in index order; `M_out` is the sum of their heads.
    pub outgoing: Vec<usize>,
    pub alpha: Matrix<BigRational>,
    pub beta: Matrix<BigRational>,
    pub gamma: Matrix<BigRational>,
}

/// Builds the triangle at `k` and checks `αγ = 0` and `γβ = 0`.
pub fn triangle(qp: &Qp, m: &QuiverRepresentation, k: usize) -> Result<Triangle> {
    let q = m.quiver();
    let incoming = q.incoming(k);
    let outgoing = q.outgoing(k);
    let dim_in: usize = incoming.iter().map(|&a| m.dim(q.tail(a))).sum();
    let dim_out: usize = outgoing.iter().map(|&b| m.dim(q.head(b))).sum();
    let mut alpha = Matrix::filled(m.dim(k), 0, BigRational::zero());
    for &a in &incoming {
        alpha = alpha.hstack(m.map(a));
    }
    let mut beta = Matrix::filled(0, m.dim(k), BigRational::zero());
    for &b in &outgoing {
        beta = beta.vstack(m.map(b));
    }
    let mut gamma = Matrix::filled(dim_in, dim_out, BigRational::zero());
    let mut r0 = 0;
    for &a in &incoming {
        let ta = q.tail(a);
        let mut c0 = 0;
        for &b in &outgoing {
            let hb = q.head(b);
            let d = second_derivative(&qp.potential, b, a);
            if !d.is_empty() {
                let block = path_sum_action(m, &d, hb, ta);
                for i in 0..block.rows() {
                    for j in 0..block.cols() {
                        gamma.set(r0 + i, c0 + j, block.get(i, j).clone());
                    }
                }
            }
            c0 += m.dim(hb);
        }
        r0 += m.dim(ta);
    }
    if !MatrixOps::<Rationals>::is_zero(&MatrixOps::<Rationals>::mul(&alpha, &Q, &gamma), &Q) {
        return Err(Error::RelationViolation(format!("alpha * gamma != 0 at vertex {}", k + 1)));
    }
    if !MatrixOps::<Rationals>::is_zero(&MatrixOps::<Rationals>::mul(&gamma, &Q, &beta), &Q) {
        return Err(Error::RelationViolation(format!("gamma * beta != 0 at vertex {}", k + 1)));
    }
    Ok(Triangle { incoming, outgoing, alpha, beta, gamma })
}

impl DecoratedRep {
    /// Validates that `m` lives over `qp`'s quiver, is annihilated by the
    /// cyclic derivatives, and satisfies the triangle relations everywhere.
    pub fn new(qp: Qp, m: QuiverRepresentation, v: Vec<usize>) -> Result<DecoratedRep> {
        if m.quiver() != &qp.quiver {
            return Err(Error::QuiverMismatch);
        }
        if m.field() != FieldTag::Rational {
            return Err(Error::FieldMismatch);
        }
        if v.len() != qp.quiver.n() {
            return Err(Error::ShapeMismatch(format!("decoration has {} entries for {} vertices", v.len(), qp.quiver.n())));
        }
        if !jacobian_check(&m, &qp.potential) {
            return Err(Error::RelationViolation("representation is not annihilated by the cyclic derivatives".into()));
        }
        for k in 0..qp.quiver.n() {
            triangle(&qp, &m, k)?;
        }
        Ok(DecoratedRep { qp, m, v })
    }

    /// `S_k^-`: zero representation, one-dimensional decoration at `k`.
    pub fn negative_simple(qp: Qp, k: usize) -> Result<DecoratedRep> {
        let n = qp.quiver.n();
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, n });
        }
        let mut v = vec![0; n];
        v[k] = 1;
        Ok(DecoratedRep { m: QuiverRepresentation::zero(qp.quiver.clone()), qp, v })
    }

    /// Undecorated representation.
    pub fn positive(qp: Qp, m: QuiverRepresentation) -> Result<DecoratedRep> {
        let n = qp.quiver.n();
        Self::new(qp, m, vec![0; n])
    }

    pub fn zero(qp: Qp) -> DecoratedRep {
        let n = qp.quiver.n();
        DecoratedRep { m: QuiverRepresentation::zero(qp.quiver.clone()), qp, v: vec![0; n] }
    }

    pub fn qp(&self) -> &Qp {
        &self.qp
    }

    pub fn positive_part(&self) -> &QuiverRepresentation {
        &self.m
    }

    pub fn decoration(&self) -> &[usize] {
        &self.v
    }

    pub fn dims(&self) -> &[usize] {
        self.m.dims()
    }

    pub fn n(&self) -> usize {
        self.qp.quiver.n()
    }

    pub fn triangle(&self, k: usize) -> Result<Triangle> {
        triangle(&self.qp, &self.m, k)
    }

    /// `g_k = dim ker γ_k − dim M_k + dim V_k`.
    pub fn g_component(&self, k: usize) -> Result<i64> {
        let t = self.triangle(k)?;
        let ker = t.gamma.cols() - MatrixOps::<Rationals>::rank(&t.gamma, &Q);
        Ok(ker as i64 - self.m.dim(k) as i64 + self.v[k] as i64)
    }

    pub fn g_vector(&self) -> Result<Vec<i64>> {
        (0..self.n()).map(|k| self.g_component(k)).collect()
    }

    /// `Σ_e χ(Gr_e(M)) y^e`, as a polynomial in `n` variables.
    pub fn f_polynomial(&self, prime_budget: usize) -> Result<LaurentPoly> {
        let n = self.n();
        let chis = euler_characteristics(&self.m, prime_budget)?;
        Ok(LaurentPoly::from_terms(
            n,
            chis.into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (Exponent::new(e.iter().map(|&x| x as i32).collect()), c)),
        ))
    }

    /// `X_M = F_M(x^{b_1}, …, x^{b_n}) · x^{g_M}` for the columns `b_j` of `b`.
    pub fn cluster_character(&self, b: &ExchangeMatrix, prime_budget: usize) -> Result<LaurentPoly> {
        let n = self.n();
        if b.n() != n {
            return Err(Error::RankMismatch { left: b.n(), right: n });
        }
        let images: Vec<LaurentPoly> = (0..n)
            .map(|j| LaurentPoly::x_pow(Exponent::new(b.column(j).iter().map(|&x| x as i32).collect())))
            .collect();
        let f = self.f_polynomial(prime_budget)?;
        let g = self.g_vector()?;
        Ok(f.substitute(&images)?.shift(&Exponent::new(g.iter().map(|&x| x as i32).collect())))
    }

    pub fn direct_sum(&self, other: &DecoratedRep) -> Result<DecoratedRep> {
        if self.qp != other.qp {
            return Err(Error::QpMismatch);
        }
        Ok(DecoratedRep {
            qp: self.qp.clone(),
            m: self.m.direct_sum(&other.m)?,
            v: self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mutate(&self, k: usize) -> Result<DecoratedRep> {
        rep_mutate(self, k)
    }

    /// Either `M_i = 0` or `V_i = 0` at every vertex.
    pub fn support_condition(&self) -> bool {
        self.m.dims().iter().zip(&self.v).all(|(&m, &v)| m == 0 || v == 0)
    }
}

/// `E^inj(M, N) = dim Hom(M, N) + dim(M) · g_N`.
pub fn e_inj(m: &DecoratedRep, n: &DecoratedRep) -> Result<i64> {
    if m.qp != n.qp {
        return Err(Error::QpMismatch);
    }
    let hom = hom_dim(&m.m, &n.m)? as i64;
    let g = n.g_vector()?;
    Ok(hom + m.dims().iter().zip(&g).map(|(&d, &x)| d as i64 * x).sum::<i64>())
}

/// `E(M) = E^inj(M, M)`.
pub fn e_invariant(m: &DecoratedRep) -> Result<i64> {
    e_inj(m, m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EInvariants {
    pub e_inj: i64,
    pub e_inj_reverse: i64,
    pub e_self_m: i64,
    /// `dim Hom(τ^{-1} N, M)`, when the QP is an acyclic Dynkin quiver with
    /// zero potential and both decorations vanish.
    pub homological: Option<i64>,
}

/// The E-invariants of a pair, cross-checked against `dim Hom(τ^{-1}N, M)`
/// in the hereditary Dynkin case.
pub fn e_invariants(m: &DecoratedRep, n: &DecoratedRep) -> Result<EInvariants> {
    let e = e_inj(m, n)?;
    let r = e_inj(n, m)?;
    let s = e_invariant(m)?;
    let hereditary = m.qp.potential.is_zero()
        && m.qp.quiver.is_acyclic()
        && dynkin_components(&m.qp.quiver).is_some()
        && m.v.iter().chain(&n.v).all(|&x| x == 0);
    let homological = if hereditary {
        let h = hom_dim(&tau_inverse(&n.m)?, &m.m)? as i64;
        if h != e {
            return Err(Error::InvariantViolation(format!("E^inj = {e} but dim Hom(tau^-1 N, M) = {h}")));
        }
        Some(h)
    } else {
        None
    };
    Ok(EInvariants { e_inj: e, e_inj_reverse: r, e_self_m: s, homological })
}

/// `E_A`: ones on the diagonal and `e_kj = −#(arrows k → j)` off it.
pub fn euler_matrix(q: &Quiver) -> Vec<Vec<i64>> {
    let n = q.n();
    let mut e = vec![vec![0i64; n]; n];
    for (i, row) in e.iter_mut().enumerate() {
        row[i] = 1;
    }
    for &(t, h) in q.arrows() {
        e[t][h] -= 1;
    }
    e
}

/// `−E_A · dim M`, the g-vector of a representation of an acyclic quiver.
pub fn hereditary_g_vector(q: &Quiver, dims: &[usize]) -> Vec<i64> {
    euler_matrix(q).iter().map(|row| -row.iter().zip(dims).map(|(&e, &d)| e * d as i64).sum::<i64>()).collect()
}

/// QPs along a walk: `qps[j]` is the QP after the first `j` mutations.
pub fn qp_along_walk(b0: &ExchangeMatrix, walk: &[usize]) -> Result<Vec<Qp>> {
    let mut qps = vec![Qp::primitive(b0.to_quiver())?];
    for &k in walk {
        let next = qp_mutate(qps.last().unwrap(), k)?.result;
        qps.push(next);
    }
    Ok(qps)
}

/// Pulls a decorated representation over the end of the walk back to the
/// initial QP by mutating along the reversed walk.
fn pull_back(mut dec: DecoratedRep, walk: &[usize]) -> Result<DecoratedRep> {
    for &k in walk.iter().rev() {
        dec = rep_mutate(&dec, k)?;
    }
    Ok(dec)
}

fn check_cluster_rep(dec: &DecoratedRep) -> Result<()> {
    let e = e_invariant(dec)?;
    if e != 0 {
        return Err(Error::InvariantViolation(format!("cluster representation has E = {e}")));
    }
    if !dec.support_condition() {
        return Err(Error::InvariantViolation("cluster representation violates the support condition".into()));
    }
    Ok(())
}

/// The decorated representation of the `k`-th cluster variable of the seed
/// reached by `walk`: `S_k^-` at the end of the walk, mutated back to the
/// initial QP.
pub fn build_cluster_rep(b0: &ExchangeMatrix, walk: &[usize], k: usize) -> Result<DecoratedRep> {
    let qps = qp_along_walk(b0, walk)?;
    let start = DecoratedRep::negative_simple(qps.last().unwrap().clone(), k)?;
    let dec = pull_back(start, walk)?;
    check_cluster_rep(&dec)?;
    Ok(dec)
}

/// The decorated representation of the cluster monomial `∏ u_i^{a_i}` at the
/// seed reached by `walk`: the direct sum of the variables' representations.
pub fn build_cluster_monomial(b0: &ExchangeMatrix, walk: &[usize], exponents: &[u32]) -> Result<DecoratedRep> {
    let n = b0.n();
    if exponents.len() != n {
        return Err(Error::RankMismatch { left: exponents.len(), right: n });
    }
    let qps = qp_along_walk(b0, walk)?;
    let end = qps.last().unwrap().clone();
    let mut acc = DecoratedRep::zero(end.clone());
    for (k, &a) in exponents.iter().enumerate() {
        for _ in 0..a {
            acc = acc.direct_sum(&DecoratedRep::negative_simple(end.clone(), k)?)?;
        }
    }
    let dec = pull_back(acc, walk)?;
    check_cluster_rep(&dec)?;
    Ok(dec)
}

/// JSON form of a decorated representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedRepJson {
    pub qp: QpJson,
    pub representation: RepresentationJson,
    pub decoration: Vec<usize>,
}

impl From<&DecoratedRep> for DecoratedRepJson {
    fn from(d: &DecoratedRep) -> Self {
        DecoratedRepJson { qp: (&d.qp).into(), representation: (&d.m).into(), decoration: d.v.clone() }
    }
}

impl TryFrom<&DecoratedRepJson> for DecoratedRep {
    type Error = Error;
    fn try_from(j: &DecoratedRepJson) -> Result<Self> {
        DecoratedRep::new(Qp::try_from(&j.qp)?, QuiverRepresentation::try_from(&j.representation)?, j.decoration.clone())
    }
}

/// Summary of a cluster representation as printed by reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepSummary {
    pub dims: Vec<usize>,
    pub decoration: Vec<usize>,
    pub g_vector: Vec<i64>,
    /// In the variables `y1, …, yn`.
    pub f_polynomial: String,
    pub x: String,
    pub e_invariant: i64,
}

pub fn summarize(dec: &DecoratedRep, b: &ExchangeMatrix, prime_budget: usize) -> Result<RepSummary> {
    Ok(RepSummary {
        dims: dec.dims().to_vec(),
        decoration: dec.decoration().to_vec(),
        g_vector: dec.g_vector()?,
        f_polynomial: dec.f_polynomial(prime_budget)?.to_string().replace('x', "y"),
        x: dec.cluster_character(b, prime_budget)?.to_string(),
        e_invariant: e_invariant(dec)?,
    })
}
