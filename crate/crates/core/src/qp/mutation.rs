//! Mutation of quivers with potential and of their decorated
//! representations.
//!
//! Premutation at `k` reverses the arrows at `k`, adds a composite arrow
//! `[ba]` for every path `a` then `b` through `k`, and replaces the
//! potential by `[S] + Δ_k`. The degree-two terms `λ·c[ba]` this creates are
//! then removed one pair at a time by the substitution
//! `c ↦ c − λW`, `[ba] ↦ [ba] − λU` (with `λ = ±1`), which leaves every other
//! arrow untouched. A representation of the premutation therefore restricts
//! to the reduced quiver without further change.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, MatrixOps, Rationals};
use crate::matrix::Quiver;
use crate::qp::decorated::{triangle, DecoratedRep};
use crate::qp::potential::{cyclic_derivative, CyclicPath, PathSum, Potential, Qp};
use crate::rep::QuiverRepresentation;

const Q: Rationals = Rationals;

/// Longest cycle kept while eliminating degree-two terms; longer terms lie
/// deep in the arrow ideal and are dropped.
pub const REDUCTION_DEGREE_CAP: usize = 12;

const MAX_REDUCTION_ROUNDS: usize = 16;

/// Origin of an arrow of the premutated quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PremutationArrow {
    /// An arrow not incident to `k`.
    Kept(usize),
    /// The reverse of an arrow incident to `k`.
    Reversed(usize),
    /// The composite of `a` into `k` followed by `b` out of `k`.
    Composite { a: usize, b: usize },
}

/// Everything computed while mutating a QP at one vertex.
#[derive(Clone, Debug, Serialize)]
pub struct MutationReport {
    pub k: usize,
    pub premutation_arrows: Vec<(usize, usize)>,
    pub labels: Vec<PremutationArrow>,
    #[serde(skip)]
    pub premutation_potential: Potential,
    /// `(c, [ba], λ)` for each cancelled degree-two term, as premutation
    /// arrow indices.
    pub cancelled: Vec<(usize, usize, i64)>,
    /// New arrow index of each surviving premutation arrow.
    pub survivors: Vec<Option<usize>>,
    #[serde(skip)]
    pub result: Qp,
}

/// Premutation followed by reduction. Fails if `k` is out of range, if a
/// degree-two coefficient is not a unit, or if the outcome disagrees with
/// matrix mutation.
pub fn qp_mutate(qp: &Qp, k: usize) -> Result<MutationReport> {
    let q = &qp.quiver;
    let n = q.n();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    let ins = q.incoming(k);
    let outs = q.outgoing(k);
    if ins.iter().any(|&a| outs.iter().any(|&b| q.head(b) == q.tail(a))) {
        return Err(Error::TwoCycleThroughVertex(k));
    }

    let mut labels = Vec::new();
    let mut arrows = Vec::new();
    let mut old_index = vec![0; q.arrows().len()];
    for (a, &(t, h)) in q.arrows().iter().enumerate() {
        old_index[a] = labels.len();
        if t == k || h == k {
            labels.push(PremutationArrow::Reversed(a));
            arrows.push((h, t));
        } else {
            labels.push(PremutationArrow::Kept(a));
            arrows.push((t, h));
        }
    }
    let mut composite = BTreeMap::new();
    for &a in &ins {
        for &b in &outs {
            composite.insert((a, b), labels.len());
            labels.push(PremutationArrow::Composite { a, b });
            arrows.push((q.tail(a), q.head(b)));
        }
    }

    let mut pot = Potential::zero();
    for (cycle, c) in qp.potential.terms() {
        let w = cycle.arrows();
        let start = (0..w.len()).find(|&i| q.tail(w[i]) != k).expect("cycle leaves k");
        let rotated: Vec<usize> = w[start..].iter().chain(&w[..start]).copied().collect();
        let mut path = Vec::new();
        let mut i = 0;
        while i < rotated.len() {
            let x = rotated[i];
            if q.head(x) == k {
                path.push(composite[&(x, rotated[i + 1])]);
                i += 2;
            } else {
                path.push(old_index[x]);
                i += 1;
            }
        }
        pot.add(CyclicPath::new(path), c);
    }
    for (&(a, b), &ab) in &composite {
        pot.add(CyclicPath::new(vec![old_index[b], old_index[a], ab]), 1);
    }
    let premutation_potential = pot.clone();

    let pairs: Vec<(usize, usize, i64)> = pot
        .degree_two()
        .terms()
        .map(|(cycle, lambda)| {
            let (x, y) = (cycle.arrows()[0], cycle.arrows()[1]);
            if matches!(labels[x], PremutationArrow::Composite { .. }) {
                (y, x, lambda)
            } else {
                (x, y, lambda)
            }
        })
        .collect();
    let mut removed = vec![false; labels.len()];
    for &(c, d, lambda) in &pairs {
        if lambda.abs() != 1 {
            return Err(Error::OutsideFiniteType(format!("degree-two coefficient {lambda}")));
        }
        pot = eliminate_pair(pot, c, d, lambda)?;
        removed[c] = true;
        removed[d] = true;
    }

    let survivors_list: Vec<usize> = (0..labels.len()).filter(|&i| !removed[i]).collect();
    let mut order = survivors_list.clone();
    order.sort_by_key(|&i| (arrows[i], i));
    let mut survivors = vec![None; labels.len()];
    for (pos, &i) in order.iter().enumerate() {
        survivors[i] = Some(pos);
    }
    let new_quiver = Quiver::new(n, order.iter().map(|&i| arrows[i]).collect())?;
    let expected = q.to_matrix().mutate(k)?.to_quiver();
    if new_quiver != expected {
        return Err(Error::InvariantViolation(format!("reduced quiver at vertex {} differs from matrix mutation", k + 1)));
    }
    let potential = pot.relabel(&survivors)?;
    let result = Qp { quiver: new_quiver, potential };
    if !result.has_primitive_support() {
        return Err(Error::InvariantViolation(format!(
            "reduced potential after mutation at {} is not supported on the chordless cycles",
            k + 1
        )));
    }
    Ok(MutationReport { k, premutation_arrows: arrows, labels, premutation_potential, cancelled: pairs, survivors, result })
}

/// Removes the term `λ·cd` and every other occurrence of `c` and `d`.
fn eliminate_pair(mut pot: Potential, c: usize, d: usize, lambda: i64) -> Result<Potential> {
    let cd = CyclicPath::new(vec![c, d]);
    for _ in 0..MAX_REDUCTION_ROUNDS {
        let mut rest = pot.clone();
        rest.add(cd.clone(), -lambda);
        if rest.terms().all(|(cy, _)| !cy.contains(c) && !cy.contains(d)) {
            return Ok(rest);
        }
        let u = cyclic_derivative(&rest, c);
        let w = cyclic_derivative(&rest, d);
        let mut repl: BTreeMap<usize, PathSum> = BTreeMap::new();
        repl.insert(c, minus_times(c, &w, lambda));
        repl.insert(d, minus_times(d, &u, lambda));
        pot = substitute(&pot, &repl, REDUCTION_DEGREE_CAP);
        if pot.coefficient(&cd) != lambda {
            return Err(Error::OutsideFiniteType("degree-two term changed during reduction".into()));
        }
    }
    Err(Error::OutsideFiniteType("reduction did not stabilize".into()))
}

/// `x − λ·s`
fn minus_times(x: usize, s: &PathSum, lambda: i64) -> PathSum {
    let mut out = PathSum::new();
    out.insert(vec![x], 1);
    for (p, &v) in s {
        *out.entry(p.clone()).or_insert(0) -= lambda * v;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Simultaneous substitution of arrows by path sums, dropping cycles longer
/// than `cap`.
fn substitute(pot: &Potential, repl: &BTreeMap<usize, PathSum>, cap: usize) -> Potential {
    let mut out = Potential::zero();
    for (cycle, coeff) in pot.terms() {
        let mut partial: Vec<(Vec<usize>, i64)> = vec![(Vec::new(), coeff)];
        for &a in cycle.arrows() {
            partial = match repl.get(&a) {
                None => partial
                    .into_iter()
                    .map(|(mut p, c)| {
                        p.push(a);
                        (p, c)
                    })
                    .collect(),
                Some(sum) => partial
                    .iter()
                    .flat_map(|(p, c)| {
                        sum.iter().map(move |(q, v)| {
                            let mut np = p.clone();
                            np.extend_from_slice(q);
                            (np, c * v)
                        })
                    })
                    .filter(|(p, _)| p.len() <= cap)
                    .collect(),
            };
        }
        for (p, c) in partial {
            out.add(CyclicPath::new(p), c);
        }
    }
    out
}

/// Mutation of a decorated representation at `k`.
pub fn rep_mutate(dec: &DecoratedRep, k: usize) -> Result<DecoratedRep> {
    let report = qp_mutate(dec.qp(), k)?;
    rep_mutate_with(dec, &report)
}

/// [`rep_mutate`] reusing a mutation report of `dec`'s QP.
pub fn rep_mutate_with(dec: &DecoratedRep, report: &MutationReport) -> Result<DecoratedRep> {
    let k = report.k;
    let m = dec.positive_part();
    let q = m.quiver();
    let tri = triangle(dec.qp(), m, k)?;
    let (alpha, beta, gamma) = (&tri.alpha, &tri.beta, &tri.gamma);
    let dim_in = gamma.rows();
    let dim_out = gamma.cols();

    // im γ ⊆ ker α, extended by a complement inside ker α
    let img_gamma = MatrixOps::<Rationals>::column_space(gamma, &Q);
    let ker_alpha = MatrixOps::<Rationals>::kernel(alpha, &Q);
    let sigma = MatrixOps::<Rationals>::complement_columns(&img_gamma, &Q, &ker_alpha);
    // im β ⊆ ker γ ⊆ M_out, each extended by a complement
    let img_beta = MatrixOps::<Rationals>::column_space(beta, &Q);
    let ker_gamma = MatrixOps::<Rationals>::kernel(gamma, &Q);
    let middle = MatrixOps::<Rationals>::complement_columns(&img_beta, &Q, &ker_gamma);
    let inner = img_beta.hstack(&middle);
    let outer = MatrixOps::<Rationals>::complement_columns(&inner, &Q, &MatrixOps::<Rationals>::identity(&Q, dim_out));
    let out_basis = inner.hstack(&outer);
    let coords = MatrixOps::<Rationals>::solve(&out_basis, &Q, &MatrixOps::<Rationals>::identity(&Q, dim_out))
        .expect("basis of the outgoing space");
    let pi_rho = coords.block(img_beta.cols(), img_beta.cols() + middle.cols(), 0, dim_out);
    let gamma_coords = MatrixOps::<Rationals>::solve(&img_gamma, &Q, gamma).expect("γ lands in its image");

    let (r1, r2, r3) = (img_gamma.cols(), sigma.cols(), middle.cols());
    let v_k = dec.decoration()[k];
    let new_dim = r1 + r2 + r3 + v_k;
    // ᾱ: M_out → M̄_k and β̄: M̄_k → M_in
    let zero = |r, c| Matrix::filled(r, c, BigRational::zero());
    let neg = |x: &Matrix<BigRational>| x.map(|v| -v);
    let alpha_bar = neg(&gamma_coords).vstack(&zero(r2, dim_out)).vstack(&neg(&pi_rho)).vstack(&zero(v_k, dim_out));
    let beta_bar = img_gamma.hstack(&sigma).hstack(&zero(dim_in, r3 + v_k));

    // V̄_k = dim ker β − dim(ker β ∩ im α) = dim(ker β + im α) − rank α
    let ker_beta = MatrixOps::<Rationals>::kernel(beta, &Q);
    let rank_alpha = MatrixOps::<Rationals>::rank(alpha, &Q);
    let new_v_k = MatrixOps::<Rationals>::rank(&ker_beta.hstack(alpha), &Q) - rank_alpha;

    let in_off = block_offsets(m, &tri.incoming, |a| q.tail(a));
    let out_off = block_offsets(m, &tri.outgoing, |b| q.head(b));

    let mut dims = m.dims().to_vec();
    dims[k] = new_dim;
    let mut maps: Vec<Option<Matrix<BigRational>>> = vec![None; report.result.quiver.arrows().len()];
    for (i, label) in report.labels.iter().enumerate() {
        let Some(new_idx) = report.survivors[i] else { continue };
        let mat = match *label {
            PremutationArrow::Kept(x) => m.map(x).clone(),
            PremutationArrow::Reversed(x) => {
                if let Some(pos) = tri.incoming.iter().position(|&a| a == x) {
                    beta_bar.block(in_off[pos], in_off[pos + 1], 0, new_dim)
                } else {
                    let pos = tri.outgoing.iter().position(|&b| b == x).expect("arrow at k");
                    alpha_bar.block(0, new_dim, out_off[pos], out_off[pos + 1])
                }
            }
            PremutationArrow::Composite { a, b } => MatrixOps::<Rationals>::mul(m.map(b), &Q, m.map(a)),
        };
        maps[new_idx] = Some(mat);
    }
    let maps: Vec<Matrix<BigRational>> = maps.into_iter().map(|x| x.expect("every new arrow has a preimage")).collect();
    let new_m = QuiverRepresentation::from_parts_unchecked(report.result.quiver.clone(), dims, maps);
    let mut v = dec.decoration().to_vec();
    v[k] = new_v_k;
    DecoratedRep::new(report.result.clone(), new_m, v)
        .map_err(|e| Error::InvariantViolation(format!("mutation at {} produced an invalid representation: {e}", k + 1)))
}

fn block_offsets(m: &QuiverRepresentation, arrows: &[usize], end: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut off = vec![0];
    for &a in arrows {
        off.push(off.last().unwrap() + m.dim(end(a)));
    }
    off
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qp::potential::chordless_cycles;

    fn qp(n: usize, arrows: &[(usize, usize)]) -> Qp {
        Qp::primitive(Quiver::new(n, arrows.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn a2_mutation_flips_the_arrow() {
        let r = qp_mutate(&qp(2, &[(0, 1)]), 0).unwrap();
        assert_eq!(r.result.quiver, Quiver::new(2, vec![(1, 0)]).unwrap());
        assert!(r.result.potential.is_zero());
        assert!(r.cancelled.is_empty());
    }

    #[test]
    fn triangle_mutation_cancels_the_two_cycle() {
        let t = qp(3, &[(0, 1), (1, 2), (2, 0)]);
        let r = qp_mutate(&t, 0).unwrap();
        // 2 → 1 → 3 in 1-based labels
        assert_eq!(r.result.quiver, Quiver::new(3, vec![(1, 0), (0, 2)]).unwrap());
        assert!(r.result.potential.is_zero());
        assert_eq!(r.cancelled.len(), 1);
        let (c, d, lambda) = r.cancelled[0];
        assert_eq!(lambda, 1);
        assert_eq!(r.labels[c], PremutationArrow::Kept(1));
        assert!(matches!(r.labels[d], PremutationArrow::Composite { a: 2, b: 0 }));
        assert_eq!(r.premutation_potential.degree_two().terms().count(), 1);
    }

    #[test]
    fn double_mutation_restores_the_quiver_and_support() {
        let cases = [
            qp(3, &[(0, 1), (1, 2), (2, 0)]),
            qp(3, &[(0, 1), (1, 2)]),
            qp(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]),
            qp(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]),
        ];
        for start in cases {
            for k in 0..start.quiver.n() {
                let once = qp_mutate(&start, k).unwrap().result;
                let twice = qp_mutate(&once, k).unwrap().result;
                assert_eq!(twice.quiver, start.quiver);
                assert_eq!(twice.potential.support(), start.potential.support());
            }
        }
    }

    #[test]
    fn mutation_class_walks_stay_primitive() {
        // a few hundred steps through the D5 and A5 classes
        for arrows in [vec![(0, 1), (1, 2), (2, 3), (2, 4)], vec![(0, 1), (1, 2), (2, 3), (3, 4)]] {
            let mut cur = qp(5, &arrows);
            let mut b = cur.quiver.to_matrix();
            for step in 0..300usize {
                let k = (step * 7 + step / 5) % 5;
                cur = qp_mutate(&cur, k).unwrap().result;
                b = b.mutate(k).unwrap();
                assert_eq!(cur.quiver.to_matrix(), b);
                assert_eq!(cur.potential.support(), chordless_cycles(&cur.quiver));
            }
        }
    }

    #[test]
    fn rejects_non_unit_degree_two_terms() {
        let mut t = qp(3, &[(0, 1), (1, 2), (2, 0)]);
        t.potential = Potential::from_terms([(vec![0, 1, 2], 2)]);
        assert!(matches!(qp_mutate(&t, 0), Err(Error::OutsideFiniteType(_))));
    }
}
