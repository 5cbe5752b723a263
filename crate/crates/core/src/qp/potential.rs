//! Cyclic paths, potentials and their derivatives.
//!
//! Paths are arrow-index sequences in traversal order: the first arrow is
//! traversed first, so `[a, b]` requires `head(a) = tail(b)`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, MatrixOps, Rationals};
use crate::matrix::Quiver;
use crate::rep::QuiverRepresentation;

/// A cyclic path stored as its lexicographically least rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CyclicPath(Vec<usize>);

impl CyclicPath {
    /// Canonical representative of the rotation class of `arrows`.
    pub fn new(arrows: Vec<usize>) -> CyclicPath {
        let n = arrows.len();
        let best = (0..n)
            .min_by(|&i, &j| arrows[i..].iter().chain(&arrows[..i]).cmp(arrows[j..].iter().chain(&arrows[..j])))
            .unwrap_or(0);
        let mut rotated = arrows[best..].to_vec();
        rotated.extend_from_slice(&arrows[..best]);
        CyclicPath(rotated)
    }

    pub fn arrows(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.contains(&a)
    }

    /// Whether consecutive arrows compose and the path closes up.
    pub fn is_cycle_in(&self, arrows: &[(usize, usize)]) -> bool {
        let n = self.0.len();
        n > 0 && (0..n).all(|i| arrows[self.0[i]].1 == arrows[self.0[(i + 1) % n]].0)
    }

    /// Vertices visited, starting at the tail of the first arrow.
    pub fn vertices(&self, arrows: &[(usize, usize)]) -> Vec<usize> {
        self.0.iter().map(|&a| arrows[a].0).collect()
    }
}

/// Formal linear combination of paths with integer coefficients.
pub type PathSum = BTreeMap<Vec<usize>, i64>;

fn add_term(sum: &mut PathSum, path: Vec<usize>, c: i64) {
    let e = sum.entry(path.clone()).or_insert(0);
    *e += c;
    if *e == 0 {
        sum.remove(&path);
    }
}

/// Finite integer combination of cyclic paths, one entry per rotation class.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Potential {
    terms: BTreeMap<CyclicPath, i64>,
}

impl Potential {
    pub fn zero() -> Potential {
        Potential::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<usize>, i64)>) -> Potential {
        let mut p = Potential::zero();
        for (path, c) in terms {
            p.add(CyclicPath::new(path), c);
        }
        p
    }

    pub fn add(&mut self, cycle: CyclicPath, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(cycle.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&cycle);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CyclicPath, i64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn coefficient(&self, cycle: &CyclicPath) -> i64 {
        self.terms.get(cycle).copied().unwrap_or(0)
    }

    /// Cycles carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<CyclicPath> {
        self.terms.keys().cloned().collect()
    }

    /// Homogeneous component of degree two.
    pub fn degree_two(&self) -> Potential {
        Potential { terms: self.terms.iter().filter(|(k, _)| k.len() == 2).map(|(k, &v)| (k.clone(), v)).collect() }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(CyclicPath::len).max().unwrap_or(0)
    }

    /// Renames arrows; terms mentioning an arrow mapped to `None` must not
    /// exist.
    pub fn relabel(&self, map: &[Option<usize>]) -> Result<Potential> {
        let mut out = Potential::zero();
        for (cycle, c) in self.terms() {
            let arrows = cycle
                .arrows()
                .iter()
                .map(|&a| map[a].ok_or_else(|| Error::InvariantViolation(format!("potential term uses removed arrow {a}"))))
                .collect::<Result<Vec<_>>>()?;
            out.add(CyclicPath::new(arrows), c);
        }
        Ok(out)
    }
}

/// `∂_a S`: for each occurrence of `a` in a cycle, the path that follows it
/// around the cycle back to `a`. The result runs from `head(a)` to `tail(a)`.
pub fn cyclic_derivative(s: &Potential, a: usize) -> PathSum {
    let mut out = PathSum::new();
    for (cycle, c) in s.terms() {
        let w = cycle.arrows();
        for (i, &x) in w.iter().enumerate() {
            if x == a {
                let path: Vec<usize> = w[i + 1..].iter().chain(&w[..i]).copied().collect();
                add_term(&mut out, path, c);
            }
        }
    }
    out
}

/// `∂_{ba} S` for a path `a` then `b`: for each consecutive occurrence, the
/// remainder of the cycle, running from `head(b)` to `tail(a)`.
pub fn second_derivative(s: &Potential, b: usize, a: usize) -> PathSum {
    let mut out = PathSum::new();
    for (cycle, c) in s.terms() {
        let w = cycle.arrows();
        let n = w.len();
        for i in 0..n {
            if w[i] == a && w[(i + 1) % n] == b && n >= 2 {
                let path: Vec<usize> = (2..n).map(|j| w[(i + j) % n]).collect();
                add_term(&mut out, path, c);
            }
        }
    }
    out
}

/// Matrix of a path sum acting on `m`, as a map from the space at `start`
/// to the space at `end`. Empty paths act as the identity.
pub fn path_sum_action(m: &QuiverRepresentation, sum: &PathSum, start: usize, end: usize) -> Matrix<BigRational> {
    let q = Rationals;
    let mut acc = MatrixOps::<Rationals>::zeros(&q, m.dim(end), m.dim(start));
    for (path, &c) in sum {
        let term = if path.is_empty() {
            MatrixOps::<Rationals>::identity(&q, m.dim(start))
        } else {
            m.path_action(path)
        };
        acc = MatrixOps::<Rationals>::add(&acc, &q, &MatrixOps::<Rationals>::scale(&term, &q, &BigRational::from_integer(c.into())));
    }
    acc
}

/// Whether every cyclic derivative of `s` acts as zero on `m`.
pub fn jacobian_check(m: &QuiverRepresentation, s: &Potential) -> bool {
    let q = m.quiver();
    (0..q.arrows().len()).all(|a| {
        let (t, h) = q.arrows()[a];
        let d = cyclic_derivative(s, a);
        d.is_empty() || path_sum_action(m, &d, h, t).data().iter().all(Zero::is_zero)
    })
}

/// All chordless cycles of length at least 3: oriented cycles whose vertex
/// set spans no arrows other than those of the cycle.
pub fn chordless_cycles(q: &Quiver) -> Vec<CyclicPath> {
    let n = q.n();
    let arrows = q.arrows();
    let mut out = Vec::new();
    for start in 0..n {
        // cycles whose least vertex is `start`
        let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(vec![start], vec![])];
        while let Some((verts, path)) = stack.pop() {
            let v = *verts.last().unwrap();
            for a in q.outgoing(v) {
                let w = arrows[a].1;
                if w == start && verts.len() >= 3 {
                    let mut p = path.clone();
                    p.push(a);
                    if induced_arrow_count(q, &verts) == verts.len() {
                        out.push(CyclicPath::new(p));
                    }
                } else if w > start && !verts.contains(&w) {
                    let mut vs = verts.clone();
                    vs.push(w);
                    let mut p = path.clone();
                    p.push(a);
                    stack.push((vs, p));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn induced_arrow_count(q: &Quiver, verts: &[usize]) -> usize {
    q.arrows().iter().filter(|(t, h)| verts.contains(t) && verts.contains(h)).count()
}

/// Sum of all chordless cycles with coefficient 1.
pub fn primitive_potential(q: &Quiver) -> Result<Potential> {
    if q.to_matrix().max_abs_entry() > 1 {
        return Err(Error::OutsideFiniteType("multiple arrows between two vertices".into()));
    }
    Ok(Potential::from_terms(chordless_cycles(q).into_iter().map(|c| (c.0, 1))))
}

/// A quiver together with a potential on its arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Qp {
    pub quiver: Quiver,
    pub potential: Potential,
}

impl Qp {
    /// The quiver with its primitive potential.
    pub fn primitive(quiver: Quiver) -> Result<Qp> {
        let potential = primitive_potential(&quiver)?;
        Ok(Qp { quiver, potential })
    }

    /// Whether the potential is supported exactly on the chordless cycles.
    pub fn has_primitive_support(&self) -> bool {
        self.potential.support() == chordless_cycles(&self.quiver)
    }
}

/// JSON form: 1-based quiver plus `(cycle, coefficient)` pairs with 1-based
/// arrow indices in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QpJson {
    pub quiver: crate::matrix::QuiverJson,
    pub potential: Vec<(Vec<usize>, i64)>,
}

impl From<&Qp> for QpJson {
    fn from(qp: &Qp) -> Self {
        QpJson {
            quiver: (&qp.quiver).into(),
            potential: qp.potential.terms().map(|(c, v)| (c.arrows().iter().map(|a| a + 1).collect(), v)).collect(),
        }
    }
}

impl TryFrom<&QpJson> for Qp {
    type Error = Error;
    fn try_from(j: &QpJson) -> Result<Qp> {
        let quiver = Quiver::try_from(&j.quiver)?;
        let m = quiver.arrows().len();
        let mut potential = Potential::zero();
        for (cycle, c) in &j.potential {
            if cycle.iter().any(|&a| a == 0 || a > m) {
                return Err(Error::Parse("arrow index out of range in potential".into()));
            }
            let path = CyclicPath::new(cycle.iter().map(|a| a - 1).collect());
            if !path.is_cycle_in(quiver.arrows()) {
                return Err(Error::Parse("potential term is not a cycle".into()));
            }
            potential.add(path, *c);
        }
        Ok(Qp { quiver, potential })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_matrix;

    /// 1 → 2 → 3 → 1 with arrows a = 0, b = 1, c = 2 after sorting
    /// ((0,1), (1,2), (2,0)).
    fn triangle() -> Qp {
        Qp::primitive(Quiver::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()).unwrap()
    }

    #[test]
    fn rotation_canonical_form() {
        assert_eq!(CyclicPath::new(vec![2, 0, 1]), CyclicPath::new(vec![0, 1, 2]));
        assert_eq!(CyclicPath::new(vec![1, 2, 0]).arrows(), &[0, 1, 2]);
        assert_ne!(CyclicPath::new(vec![0, 2, 1]), CyclicPath::new(vec![0, 1, 2]));
    }

    #[test]
    fn primitive_potentials() {
        let acyclic = Quiver::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(primitive_potential(&acyclic).unwrap().is_zero());
        let s = triangle().potential;
        assert_eq!(s.terms().collect::<Vec<_>>(), vec![(&CyclicPath::new(vec![0, 1, 2]), 1)]);
        // 4-cycle 0→1→2→3→0 with chord 0→2: only the triangle 0→2→3→0
        let sq = Quiver::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let cycles = chordless_cycles(&sq);
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].vertices(sq.arrows()), vec![0, 2, 3]);
        // two oriented triangles glued along 2→0
        let glued = Quiver::new(4, vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 2)]).unwrap();
        let c2 = chordless_cycles(&glued);
        assert_eq!(c2.len(), 2);
        assert!(c2.iter().all(|c| c.len() == 3));
        let kron = Quiver::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert!(primitive_potential(&kron).is_err());
    }

    #[test]
    fn four_cycle_is_chordless() {
        let q = Quiver::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c = chordless_cycles(&q);
        assert_eq!(c, vec![CyclicPath::new(vec![0, 1, 2, 3])]);
    }

    #[test]
    fn derivatives_of_the_triangle() {
        let s = triangle().potential;
        let (a, b, c) = (0, 1, 2);
        assert_eq!(cyclic_derivative(&s, a), PathSum::from([(vec![b, c], 1)]));
        assert_eq!(second_derivative(&s, b, a), PathSum::from([(vec![c], 1)]));
        let acyclic = Potential::zero();
        assert!(cyclic_derivative(&acyclic, a).is_empty());
        // a occurs nowhere
        let other = Potential::from_terms([(vec![5, 6, 7], 1)]);
        assert!(cyclic_derivative(&other, a).is_empty());
    }

    #[test]
    fn jacobian_examples() {
        let qp = triangle();
        let one = int_matrix(1, 1, &[1]);
        let zero = int_matrix(1, 1, &[0]);
        let m = QuiverRepresentation::new(
            qp.quiver.clone(),
            crate::rep::FieldTag::Rational,
            vec![1, 1, 1],
            vec![one.clone(), one.clone(), zero.clone()],
        )
        .unwrap();
        // ∂_c S = ab acts as the identity
        assert!(!jacobian_check(&m, &qp.potential));
        let ok = QuiverRepresentation::new(qp.quiver.clone(), crate::rep::FieldTag::Rational, vec![1, 1, 1], vec![one, zero.clone(), zero])
            .unwrap();
        assert!(jacobian_check(&ok, &qp.potential));
        assert!(jacobian_check(&QuiverRepresentation::zero(qp.quiver.clone()), &qp.potential));
        assert!(jacobian_check(&m, &Potential::zero()));
    }

    #[test]
    fn qp_json_roundtrip() {
        let qp = triangle();
        let j = QpJson::from(&qp);
        assert_eq!(j.potential, vec![(vec![1, 2, 3], 1)]);
        let back = Qp::try_from(&serde_json::from_str::<QpJson>(&serde_json::to_string(&j).unwrap()).unwrap()).unwrap();
        assert_eq!(back, qp);
    }
}
