//! Reflection functors, the Auslander–Reiten translate of a Dynkin quiver,
//! and its indecomposable representations.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::finite::dynkin_components;
use crate::linalg::{Matrix, MatrixOps, Rationals};
use crate::matrix::Quiver;
use crate::rep::{FieldTag, QuiverRepresentation};

const Q: Rationals = Rationals;

/// Direction of a reflection functor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reflection {
    /// At a sink: the new space is the kernel of `⊕ M_{t(a)} → M_k`.
    Plus,
    /// At a source: the new space is the cokernel of `M_k → ⊕ M_{h(b)}`.
    Minus,
}

pub fn reflection_functor(m: &QuiverRepresentation, k: usize, dir: Reflection) -> Result<QuiverRepresentation> {
    if m.field() != FieldTag::Rational {
        return Err(Error::FieldMismatch);
    }
    let q = m.quiver();
    if k >= q.n() {
        return Err(Error::IndexOutOfRange { index: k, n: q.n() });
    }
    match dir {
        Reflection::Plus if q.is_sink(k) => Ok(reflect_plus(m, k)),
        Reflection::Minus if q.is_source(k) => Ok(reflect_minus(m, k)),
        _ => Err(Error::NotSinkOrSource(k)),
    }
}

/// Block offsets of the spaces at the far ends of `arrows`, which all touch `k`.
fn offsets(m: &QuiverRepresentation, arrows: &[usize], k: usize) -> Vec<usize> {
    let q = m.quiver();
    let mut off = vec![0];
    for &a in arrows {
        let (t, h) = q.arrows()[a];
        let other = if t == k { h } else { t };
        off.push(off.last().unwrap() + m.dim(other));
    }
    off
}

fn reflect_plus(m: &QuiverRepresentation, k: usize) -> QuiverRepresentation {
    let q = m.quiver();
    let ins = q.incoming(k);
    let off = offsets(m, &ins, k);
    let total = *off.last().unwrap();
    let mut alpha = Matrix::filled(m.dim(k), 0, BigRational::zero());
    for &a in &ins {
        alpha = alpha.hstack(m.map(a));
    }
    let kernel = if total == 0 { Matrix::filled(0, 0, BigRational::zero()) } else { MatrixOps::<Rationals>::kernel(&alpha, &Q) };
    let new_dim = kernel.cols();
    let (rq, arrow_map) = q.reflect_with_map(k);
    let mut dims = m.dims().to_vec();
    dims[k] = new_dim;
    let maps = (0..q.arrows().len())
        .map(|a| match ins.iter().position(|&x| x == a) {
            Some(i) => kernel.block(off[i], off[i + 1], 0, new_dim),
            None => m.map(a).clone(),
        })
        .collect();
    QuiverRepresentation::relabel(rq, dims, maps, &arrow_map)
}

fn reflect_minus(m: &QuiverRepresentation, k: usize) -> QuiverRepresentation {
    let q = m.quiver();
    let outs = q.outgoing(k);
    let off = offsets(m, &outs, k);
    let total = *off.last().unwrap();
    let mut beta = Matrix::filled(0, m.dim(k), BigRational::zero());
    for &b in &outs {
        beta = beta.vstack(m.map(b));
    }
    let image = MatrixOps::<Rationals>::column_space(&beta, &Q);
    let ident = MatrixOps::<Rationals>::identity(&Q, total);
    let comp = MatrixOps::<Rationals>::complement_columns(&image, &Q, &ident);
    let basis = image.hstack(&comp);
    let coords = MatrixOps::<Rationals>::solve(&basis, &Q, &ident).expect("basis of the ambient space");
    // projection onto the complement coordinates
    let pi = coords.block(image.cols(), total, 0, total);
    let new_dim = comp.cols();
    let (rq, arrow_map) = q.reflect_with_map(k);
    let mut dims = m.dims().to_vec();
    dims[k] = new_dim;
    let maps = (0..q.arrows().len())
        .map(|a| match outs.iter().position(|&x| x == a) {
            Some(i) => pi.block(0, new_dim, off[i], off[i + 1]),
            None => m.map(a).clone(),
        })
        .collect();
    QuiverRepresentation::relabel(rq, dims, maps, &arrow_map)
}

/// `τ^{-1} M`: − reflections at the lowest-index current source until every
/// vertex has been reflected once.
pub fn tau_inverse(m: &QuiverRepresentation) -> Result<QuiverRepresentation> {
    coxeter(m, Reflection::Minus, None)
}

/// `τ M`: + reflections at the lowest-index current sink.
pub fn tau(m: &QuiverRepresentation) -> Result<QuiverRepresentation> {
    coxeter(m, Reflection::Plus, None)
}

/// `τ^{-1} M` along an explicit admissible order of sources.
pub fn tau_inverse_along(m: &QuiverRepresentation, order: &[usize]) -> Result<QuiverRepresentation> {
    coxeter(m, Reflection::Minus, Some(order))
}

fn coxeter(m: &QuiverRepresentation, dir: Reflection, order: Option<&[usize]>) -> Result<QuiverRepresentation> {
    let q = m.quiver();
    if !q.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    let n = q.n();
    let mut done = vec![false; n];
    let mut cur = m.clone();
    for step in 0..n {
        let v = match order {
            Some(o) => *o.get(step).ok_or(Error::NotSinkOrSource(n))?,
            None => (0..n)
                .find(|&v| {
                    !done[v] && if dir == Reflection::Minus { cur.quiver().is_source(v) } else { cur.quiver().is_sink(v) }
                })
                .ok_or(Error::NotAcyclic)?,
        };
        if v >= n || done[v] {
            return Err(Error::NotSinkOrSource(v));
        }
        cur = reflection_functor(&cur, v, dir)?;
        done[v] = true;
    }
    debug_assert_eq!(cur.quiver(), q);
    Ok(cur)
}

/// Paths of an acyclic quiver, as arrow sequences in traversal order,
/// grouped by end vertex.
fn paths_from(q: &Quiver, i: usize) -> Vec<Vec<Vec<usize>>> {
    let mut by_end: Vec<Vec<Vec<usize>>> = vec![Vec::new(); q.n()];
    let mut stack = vec![(i, Vec::new())];
    while let Some((v, path)) = stack.pop() {
        for a in q.outgoing(v) {
            let mut p = path.clone();
            p.push(a);
            stack.push((q.head(a), p));
        }
        by_end[v].push(path);
    }
    for paths in &mut by_end {
        paths.sort();
    }
    by_end
}

/// Indecomposable projective `P_i`: at `j`, the span of paths from `i` to `j`.
pub fn projective(q: &Quiver, i: usize) -> Result<QuiverRepresentation> {
    if !q.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    let paths = paths_from(q, i);
    let dims: Vec<usize> = paths.iter().map(Vec::len).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(t, h))| {
            let mut mat = Matrix::filled(dims[h], dims[t], BigRational::zero());
            for (c, p) in paths[t].iter().enumerate() {
                let mut ext = p.clone();
                ext.push(a);
                let r = paths[h].iter().position(|x| *x == ext).expect("extended path");
                mat.set(r, c, BigRational::one());
            }
            mat
        })
        .collect();
    Ok(QuiverRepresentation::from_parts_unchecked(q.clone(), dims, maps))
}

/// Indecomposable injective `I_i`: at `j`, the dual of the span of paths
/// from `j` to `i`.
pub fn injective(q: &Quiver, i: usize) -> Result<QuiverRepresentation> {
    if !q.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    let paths: Vec<Vec<Vec<usize>>> = (0..q.n()).map(|j| paths_from(q, j).swap_remove(i)).collect();
    let dims: Vec<usize> = paths.iter().map(Vec::len).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(t, h))| {
            let mut mat = Matrix::filled(dims[h], dims[t], BigRational::zero());
            for (c, p) in paths[t].iter().enumerate() {
                if p.first() == Some(&a) {
                    let r = paths[h].iter().position(|x| x[..] == p[1..]).expect("shortened path");
                    mat.set(r, c, BigRational::one());
                }
            }
            mat
        })
        .collect();
    Ok(QuiverRepresentation::from_parts_unchecked(q.clone(), dims, maps))
}

/// One indecomposable per positive root of a Dynkin quiver, ordered by
/// dimension vector. Built from the projectives by iterating `τ^{-1}`.
pub fn enumerate_indecomposables(q: &Quiver) -> Result<Vec<QuiverRepresentation>> {
    let types = dynkin_components(q).ok_or(Error::NotDynkin)?;
    let mut found: Vec<QuiverRepresentation> = Vec::new();
    for i in 0..q.n() {
        let mut m = projective(q, i)?;
        while !m.is_zero() {
            if !found.iter().any(|f| f.dims() == m.dims()) {
                found.push(m.clone());
            }
            m = tau_inverse(&m)?;
        }
    }
    found.sort_by(|a, b| a.dims().cmp(b.dims()));
    let expected: usize = types.iter().map(|t| t.positive_roots()).sum();
    if found.len() != expected {
        return Err(Error::InvariantViolation(format!("found {} indecomposables, expected {}", found.len(), expected)));
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::hom_dim;

    fn a2() -> Quiver {
        Quiver::new(2, vec![(0, 1)]).unwrap()
    }

    fn simple(q: &Quiver, k: usize) -> QuiverRepresentation {
        QuiverRepresentation::simple(q.clone(), k)
    }

    #[test]
    fn minus_reflection_examples() {
        let s1 = reflection_functor(&simple(&a2(), 0), 0, Reflection::Minus).unwrap();
        assert!(s1.is_zero());
        let p1 = projective(&a2(), 0).unwrap();
        let r = reflection_functor(&p1, 0, Reflection::Minus).unwrap();
        assert_eq!(r.quiver(), &Quiver::new(2, vec![(1, 0)]).unwrap());
        assert_eq!(r.dims(), &[0, 1]);
        assert_eq!(reflection_functor(&p1, 1, Reflection::Minus), Err(Error::NotSinkOrSource(1)));
    }

    #[test]
    fn plus_then_minus_is_identity_without_simple_summand() {
        // A3 with sink 1 (0-based): 0 -> 1 <- 2
        let q = Quiver::new(3, vec![(0, 1), (2, 1)]).unwrap();
        for m in enumerate_indecomposables(&q).unwrap() {
            if m.dims() == [0, 1, 0] {
                continue;
            }
            let back = reflection_functor(&reflection_functor(&m, 1, Reflection::Plus).unwrap(), 1, Reflection::Minus).unwrap();
            assert_eq!(back.dims(), m.dims());
            for n in enumerate_indecomposables(&q).unwrap() {
                assert_eq!(hom_dim(&back, &n).unwrap(), hom_dim(&m, &n).unwrap());
            }
        }
    }

    #[test]
    fn tau_inverse_in_a2() {
        let s2 = simple(&a2(), 1);
        let t = tau_inverse(&s2).unwrap();
        assert_eq!(t.dims(), &[1, 0]);
        assert!(tau_inverse(&QuiverRepresentation::zero(a2())).unwrap().is_zero());
        for i in 0..2 {
            assert!(tau_inverse(&injective(&a2(), i).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn tau_inverse_of_injectives_vanishes_in_d4() {
        let q = Quiver::new(4, vec![(0, 1), (2, 1), (1, 3)]).unwrap();
        for i in 0..4 {
            let inj = injective(&q, i).unwrap();
            assert!(tau_inverse(&inj).unwrap().is_zero(), "I_{i}");
            assert_eq!(hom_dim(&inj, &inj).unwrap(), 1);
        }
    }

    #[test]
    fn tau_undoes_tau_inverse_off_injectives() {
        let q = Quiver::new(3, vec![(0, 1), (1, 2)]).unwrap();
        for m in enumerate_indecomposables(&q).unwrap() {
            let t = tau_inverse(&m).unwrap();
            if !t.is_zero() {
                assert_eq!(tau(&t).unwrap().dims(), m.dims());
            }
        }
    }

    #[test]
    fn admissible_orders_agree_on_dimension_vectors() {
        // sources 0 and 2 can go in either order
        let q = Quiver::new(3, vec![(0, 1), (2, 1)]).unwrap();
        for m in enumerate_indecomposables(&q).unwrap() {
            let a = tau_inverse_along(&m, &[0, 2, 1]).unwrap();
            let b = tau_inverse_along(&m, &[2, 0, 1]).unwrap();
            assert_eq!(a.dims(), b.dims());
        }
        let m = simple(&q, 0);
        assert!(tau_inverse_along(&m, &[1, 0, 2]).is_err());
    }

    #[test]
    fn indecomposable_counts() {
        let dims: Vec<Vec<usize>> = enumerate_indecomposables(&a2()).unwrap().iter().map(|m| m.dims().to_vec()).collect();
        assert_eq!(dims, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        let a3 = Quiver::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(enumerate_indecomposables(&a3).unwrap().len(), 6);
        let d4 = Quiver::new(4, vec![(0, 1), (2, 1), (3, 1)]).unwrap();
        let inds = enumerate_indecomposables(&d4).unwrap();
        assert_eq!(inds.len(), 12);
        assert!(inds.iter().any(|m| m.dims() == [1, 2, 1, 1]));
        for m in &inds {
            assert_eq!(hom_dim(m, m).unwrap(), 1);
        }
        let cyc = Quiver::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(enumerate_indecomposables(&cyc).unwrap_err(), Error::NotDynkin);
    }
}
