//! Exchange matrices, quivers and matrix mutation.
//!
//! Vertices are 0-based throughout the library; the JSON and CLI layers
//! translate to the 1-based labels users write.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Skew-symmetric integer matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExchangeMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl ExchangeMatrix {
    pub fn zero(n: usize) -> Self {
        ExchangeMatrix { n, entries: vec![0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("exchange matrix must be square".into()));
        }
        let entries: Vec<i64> = rows.iter().flatten().copied().collect();
        let m = ExchangeMatrix { n, entries };
        m.check_skew()?;
        Ok(m)
    }

    fn check_skew(&self) -> Result<()> {
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) != -self.get(j, i) {
                    return Err(Error::NotSkewSymmetric);
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or(0)
    }

    /// Matrix mutation in direction `k`.
    pub fn mutate(&self, k: usize) -> Result<ExchangeMatrix> {
        if k >= self.n {
            return Err(Error::IndexOutOfRange { index: k, n: self.n });
        }
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                let b = self.get(i, j);
                let v = if i == k || j == k {
                    -b
                } else {
                    let bik = self.get(i, k);
                    b + bik.signum() * (bik * self.get(k, j)).max(0)
                };
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Simultaneous row/column permutation: entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permute(&self, perm: &[usize]) -> ExchangeMatrix {
        let mut out = ExchangeMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(perm[i], perm[j]));
            }
        }
        out
    }

    /// `B · v`.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn to_quiver(&self) -> Quiver {
        let mut arrows = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                for _ in 0..self.get(i, j).max(0) {
                    arrows.push((j, i));
                }
            }
        }
        Quiver::new(self.n, arrows).expect("skew-symmetric matrices give valid quivers")
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl Serialize for ExchangeMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExchangeMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        ExchangeMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Finite quiver without loops and oriented 2-cycles.
///
/// Arrows are kept sorted by `(tail, head)`, so an arrow's index is a
/// function of the quiver alone; this is what lets potentials and
/// representations refer to arrows by index across mutations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(n: usize, mut arrows: Vec<(usize, usize)>) -> Result<Quiver> {
        for &(t, h) in &arrows {
            if t >= n {
                return Err(Error::IndexOutOfRange { index: t, n });
            }
            if h >= n {
                return Err(Error::IndexOutOfRange { index: h, n });
            }
            if t == h {
                return Err(Error::Loop(t));
            }
        }
        for &(t, h) in &arrows {
            if arrows.contains(&(h, t)) {
                return Err(Error::TwoCycle(t.min(h), t.max(h)));
            }
        }
        arrows.sort_unstable();
        Ok(Quiver { n, arrows })
    }

    pub fn empty(n: usize) -> Quiver {
        Quiver { n, arrows: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn tail(&self, a: usize) -> usize {
        self.arrows[a].0
    }

    pub fn head(&self, a: usize) -> usize {
        self.arrows[a].1
    }

    pub fn find_arrow(&self, tail: usize, head: usize) -> Option<usize> {
        self.arrows.iter().position(|&(t, h)| t == tail && h == head)
    }

    /// Arrows ending at `k`.
    pub fn incoming(&self, k: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].1 == k).collect()
    }

    /// Arrows starting at `k`.
    pub fn outgoing(&self, k: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].0 == k).collect()
    }

    pub fn is_sink(&self, k: usize) -> bool {
        self.arrows.iter().all(|&(t, _)| t != k)
    }

    pub fn is_source(&self, k: usize) -> bool {
        self.arrows.iter().all(|&(_, h)| h != k)
    }

    /// Number of arrows touching each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(t, h) in &self.arrows {
            d[t] += 1;
            d[h] += 1;
        }
        d
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Vertices ordered so every arrow goes forward, if possible.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.n];
        for &(_, h) in &self.arrows {
            indeg[h] += 1;
        }
        let mut ready: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = ready.iter().copied().min() {
            ready.retain(|&x| x != v);
            order.push(v);
            for &(t, h) in &self.arrows {
                if t == v {
                    indeg[h] -= 1;
                    if indeg[h] == 0 {
                        ready.push(h);
                    }
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    pub fn to_matrix(&self) -> ExchangeMatrix {
        let mut b = ExchangeMatrix::zero(self.n);
        for &(t, h) in &self.arrows {
            b.set(h, t, b.get(h, t) + 1);
            b.set(t, h, b.get(t, h) - 1);
        }
        b
    }

    /// The quiver with every arrow incident to `k` reversed.
    pub fn reflect(&self, k: usize) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|&(t, h)| if t == k || h == k { (h, t) } else { (t, h) })
            .collect();
        Quiver::new(self.n, arrows).expect("reflection keeps the quiver valid")
    }

    /// [`Quiver::reflect`] together with the new index of every old arrow.
    pub fn reflect_with_map(&self, k: usize) -> (Quiver, Vec<usize>) {
        let flipped: Vec<(usize, usize)> = self
            .arrows
            .iter()
            .map(|&(t, h)| if t == k || h == k { (h, t) } else { (t, h) })
            .collect();
        let mut order: Vec<usize> = (0..flipped.len()).collect();
        order.sort_by_key(|&a| (flipped[a], a));
        let mut map = vec![0; flipped.len()];
        for (pos, &a) in order.iter().enumerate() {
            map[a] = pos;
        }
        (self.reflect(k), map)
    }
}

/// JSON form of a quiver: 1-based vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub n: usize,
    pub arrows: Vec<[usize; 2]>,
}

impl From<&Quiver> for QuiverJson {
    fn from(q: &Quiver) -> Self {
        QuiverJson { n: q.n, arrows: q.arrows.iter().map(|&(t, h)| [t + 1, h + 1]).collect() }
    }
}

impl TryFrom<&QuiverJson> for Quiver {
    type Error = Error;
    fn try_from(j: &QuiverJson) -> Result<Quiver> {
        let mut arrows = Vec::with_capacity(j.arrows.len());
        for &[t, h] in &j.arrows {
            if t == 0 || h == 0 {
                return Err(Error::IndexOutOfRange { index: 0, n: j.n });
            }
            arrows.push((t - 1, h - 1));
        }
        Quiver::new(j.n, arrows)
    }
}

impl Serialize for Quiver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuiverJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quiver {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = QuiverJson::deserialize(d)?;
        Quiver::try_from(&j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> ExchangeMatrix {
        ExchangeMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn a2_quiver_to_matrix() {
        let q = Quiver::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(q.to_matrix(), m(&[&[0, -1], &[1, 0]]));
        assert_eq!(q.to_matrix().to_quiver(), q);
    }

    #[test]
    fn empty_quiver_is_zero_matrix() {
        assert_eq!(Quiver::empty(3).to_matrix(), ExchangeMatrix::zero(3));
    }

    #[test]
    fn three_cycle_matrix() {
        let q = Quiver::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let b = q.to_matrix();
        assert_eq!((b.get(1, 0), b.get(2, 1), b.get(0, 2)), (1, 1, 1));
        assert_eq!((b.get(0, 1), b.get(1, 2), b.get(2, 0)), (-1, -1, -1));
        assert_eq!(b.to_quiver(), q);
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(Quiver::new(2, vec![(0, 0)]), Err(Error::Loop(0)));
        assert_eq!(Quiver::new(2, vec![(0, 1), (1, 0)]), Err(Error::TwoCycle(0, 1)));
        assert_eq!(ExchangeMatrix::from_rows(&[vec![0, 1], vec![1, 0]]), Err(Error::NotSkewSymmetric));
        assert_eq!(ExchangeMatrix::from_rows(&[vec![1]]), Err(Error::NotSkewSymmetric));
    }

    #[test]
    fn mutation_examples() {
        let a2 = m(&[&[0, -1], &[1, 0]]);
        assert_eq!(a2.mutate(0).unwrap(), m(&[&[0, 1], &[-1, 0]]));
        assert_eq!(a2.mutate(2), Err(Error::IndexOutOfRange { index: 2, n: 2 }));

        let cyc = Quiver::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap().to_matrix();
        let mu = cyc.mutate(0).unwrap();
        // 2 -> 1 -> 3 in 1-based labels
        assert_eq!(mu.to_quiver(), Quiver::new(3, vec![(1, 0), (0, 2)]).unwrap());
        assert_eq!(mu.get(1, 2), 0);
    }

    #[test]
    fn matrix_json_roundtrip() {
        let b = m(&[&[0, -1, 1], &[1, 0, -1], &[-1, 1, 0]]);
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, "[[0,-1,1],[1,0,-1],[-1,1,0]]");
        assert_eq!(serde_json::from_str::<ExchangeMatrix>(&s).unwrap(), b);
    }

    #[test]
    fn quiver_json_is_one_based() {
        let q: Quiver = serde_json::from_str(r#"{"n": 3, "arrows": [[1,2],[2,3],[3,1]]}"#).unwrap();
        assert_eq!(q.arrows(), &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(serde_json::to_string(&q).unwrap(), r#"{"n":3,"arrows":[[1,2],[2,3],[3,1]]}"#);
    }
}
