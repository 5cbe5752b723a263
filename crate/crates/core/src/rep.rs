//! Finite-dimensional quiver representations over ℚ or a prime field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, MatrixOps, PrimeField, Rationals};
use crate::matrix::{Quiver, QuiverJson};

/// Base field of a representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldTag {
    Rational,
    Prime(u64),
}

/// A representation: one vector space per vertex (given by its dimension)
/// and, for each arrow `a: t → h`, a `dim h × dim t` matrix.
///
/// Entries are stored as rationals; over `F_p` they are integers in
/// `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverRepresentation {
    quiver: Quiver,
    field: FieldTag,
    dims: Vec<usize>,
    maps: Vec<Matrix<BigRational>>,
}

impl QuiverRepresentation {
    pub fn new(quiver: Quiver, field: FieldTag, dims: Vec<usize>, maps: Vec<Matrix<BigRational>>) -> Result<Self> {
        if dims.len() != quiver.n() {
            return Err(Error::ShapeMismatch(format!("{} dimensions for {} vertices", dims.len(), quiver.n())));
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::ShapeMismatch(format!("{} matrices for {} arrows", maps.len(), quiver.arrows().len())));
        }
        for (a, m) in maps.iter().enumerate() {
            let (t, h) = quiver.arrows()[a];
            if m.rows() != dims[h] || m.cols() != dims[t] {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {} -> {} needs a {}x{} matrix, got {}x{}",
                    t + 1,
                    h + 1,
                    dims[h],
                    dims[t],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let maps = match field {
            FieldTag::Rational => maps,
            FieldTag::Prime(p) => {
                let f = PrimeField::new(p);
                maps.iter()
                    .map(|m| {
                        m.try_map(|r| f.embed_rational(r).map(|v| BigRational::from_integer(BigInt::from(v))))
                            .ok_or_else(|| Error::ShapeMismatch(format!("entry not defined modulo {p}")))
                    })
                    .collect::<Result<_>>()?
            }
        };
        Ok(QuiverRepresentation { quiver, field, dims, maps })
    }

    /// Builds a rational representation from integer matrices given row-major.
    pub fn from_int(quiver: Quiver, dims: Vec<usize>, maps: &[Vec<i64>]) -> Result<Self> {
        let mats = maps
            .iter()
            .enumerate()
            .map(|(a, v)| {
                let (t, h) = quiver.arrows().get(a).copied().unwrap_or((0, 0));
                let (r, c) = (dims.get(h).copied().unwrap_or(0), dims.get(t).copied().unwrap_or(0));
                if v.len() != r * c {
                    return Err(Error::ShapeMismatch(format!("arrow {} has {} entries, expected {}", a, v.len(), r * c)));
                }
                Ok(crate::linalg::int_matrix(r, c, v))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(quiver, FieldTag::Rational, dims, mats)
    }

    pub fn zero(quiver: Quiver) -> Self {
        let n = quiver.n();
        let maps = vec![Matrix::filled(0, 0, BigRational::zero()); quiver.arrows().len()];
        QuiverRepresentation { quiver, field: FieldTag::Rational, dims: vec![0; n], maps }
    }

    /// Simple representation at `k`.
    pub fn simple(quiver: Quiver, k: usize) -> Self {
        let mut dims = vec![0; quiver.n()];
        dims[k] = 1;
        let maps = quiver
            .arrows()
            .iter()
            .map(|&(t, h)| Matrix::filled(dims[h], dims[t], BigRational::zero()))
            .collect();
        QuiverRepresentation { quiver, field: FieldTag::Rational, dims, maps }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn map(&self, a: usize) -> &Matrix<BigRational> {
        &self.maps[a]
    }

    pub fn maps(&self) -> &[Matrix<BigRational>] {
        &self.maps
    }

    /// Action of a path given in traversal order (first arrow first), as a
    /// `dim(end) × dim(start)` matrix.
    pub fn path_action(&self, path: &[usize]) -> Matrix<BigRational> {
        let f = Rationals;
        let start = self.quiver.tail(path[0]);
        let mut acc = MatrixOps::<Rationals>::identity(&f, self.dims[start]);
        for &a in path {
            acc = MatrixOps::<Rationals>::mul(&self.maps[a], &f, &acc);
        }
        acc
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.quiver != other.quiver {
            return Err(Error::QuiverMismatch);
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| block_diag(a, b))
            .collect();
        Ok(QuiverRepresentation { quiver: self.quiver.clone(), field: self.field, dims, maps })
    }

    /// Same spaces and maps, viewed over `F_p`. Fails if a denominator
    /// vanishes modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Self> {
        if self.field != FieldTag::Rational {
            return Err(Error::FieldMismatch);
        }
        Self::new(self.quiver.clone(), FieldTag::Prime(p), self.dims.clone(), self.maps.clone())
    }

    /// Whether this representation's maps equal `other`'s, dimension by
    /// dimension.
    pub fn same_shape(&self, other: &Self) -> bool {
        self.quiver == other.quiver && self.dims == other.dims
    }

    /// Replaces the quiver by an identical-up-to-relabeling one, permuting
    /// the arrow matrices with `arrow_map[old] = new`.
    pub(crate) fn relabel(quiver: Quiver, dims: Vec<usize>, maps_by_old: Vec<Matrix<BigRational>>, arrow_map: &[usize]) -> Self {
        let mut maps: Vec<Option<Matrix<BigRational>>> = vec![None; maps_by_old.len()];
        for (old, m) in maps_by_old.into_iter().enumerate() {
            maps[arrow_map[old]] = Some(m);
        }
        QuiverRepresentation {
            quiver,
            field: FieldTag::Rational,
            dims,
            maps: maps.into_iter().map(|m| m.expect("arrow map is a bijection")).collect(),
        }
    }

    pub(crate) fn from_parts_unchecked(quiver: Quiver, dims: Vec<usize>, maps: Vec<Matrix<BigRational>>) -> Self {
        debug_assert!(maps.iter().zip(quiver.arrows()).all(|(m, &(t, h))| m.rows() == dims[h] && m.cols() == dims[t]));
        QuiverRepresentation { quiver, field: FieldTag::Rational, dims, maps }
    }
}

fn block_diag(a: &Matrix<BigRational>, b: &Matrix<BigRational>) -> Matrix<BigRational> {
    let mut m = Matrix::filled(a.rows() + b.rows(), a.cols() + b.cols(), BigRational::zero());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
        }
    }
    m
}

/// Dimension of the space of morphisms `M → N`: families `ψ_i: M_i → N_i`
/// with `ψ_h a_M = a_N ψ_t` for every arrow `a: t → h`.
pub fn hom_dim(m: &QuiverRepresentation, n: &QuiverRepresentation) -> Result<usize> {
    if m.quiver != n.quiver {
        return Err(Error::QuiverMismatch);
    }
    if m.field != n.field {
        return Err(Error::FieldMismatch);
    }
    match m.field {
        FieldTag::Rational => Ok(hom_dim_over(&Rationals, m, n)),
        FieldTag::Prime(p) => Ok(hom_dim_over(&PrimeField::new(p), m, n)),
    }
}

fn hom_dim_over<F: Field>(f: &F, m: &QuiverRepresentation, n: &QuiverRepresentation) -> usize
where
    Matrix<F::Elem>: MatrixOps<F>,
{
    let nv = m.quiver.n();
    let mut offset = vec![0; nv + 1];
    for i in 0..nv {
        offset[i + 1] = offset[i] + n.dims[i] * m.dims[i];
    }
    let unknowns = offset[nv];
    if unknowns == 0 {
        return 0;
    }
    let conv = |mat: &Matrix<BigRational>| mat.try_map(|r| f.embed_rational(r)).expect("entries defined over the field");
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (a, &(t, h)) in m.quiver.arrows().iter().enumerate() {
        let am = conv(&m.maps[a]);
        let an = conv(&n.maps[a]);
        // (ψ_h a_M − a_N ψ_t)[r, c] = 0
        for r in 0..n.dims[h] {
            for c in 0..m.dims[t] {
                let mut row = vec![f.zero(); unknowns];
                for s in 0..m.dims[h] {
                    let idx = offset[h] + r * m.dims[h] + s;
                    row[idx] = f.add(&row[idx], am.get(s, c));
                }
                for s in 0..n.dims[t] {
                    let idx = offset[t] + s * m.dims[t] + c;
                    row[idx] = f.sub(&row[idx], an.get(r, s));
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return unknowns;
    }
    let sys = Matrix::from_rows(rows, unknowns);
    unknowns - sys.rank(f)
}

/// JSON form: quiver, field, dimension vector and row-major matrices of
/// rationals written as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub quiver: QuiverJson,
    #[serde(default = "default_field")]
    pub field: FieldTag,
    pub dims: Vec<usize>,
    pub matrices: Vec<Vec<Vec<String>>>,
}

fn default_field() -> FieldTag {
    FieldTag::Rational
}

impl From<&QuiverRepresentation> for RepresentationJson {
    fn from(r: &QuiverRepresentation) -> Self {
        RepresentationJson {
            quiver: QuiverJson::from(&r.quiver),
            field: r.field,
            dims: r.dims.clone(),
            matrices: r
                .maps
                .iter()
                .map(|m| m.row_vecs().into_iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect())
                .collect(),
        }
    }
}

impl TryFrom<&RepresentationJson> for QuiverRepresentation {
    type Error = Error;
    fn try_from(j: &RepresentationJson) -> Result<Self> {
        let quiver = Quiver::try_from(&j.quiver)?;
        let mut maps = Vec::with_capacity(j.matrices.len());
        for (a, rows) in j.matrices.iter().enumerate() {
            let (t, h) = *quiver.arrows().get(a).ok_or_else(|| Error::ShapeMismatch("too many matrices".into()))?;
            let (r, c) = (
                *j.dims.get(h).ok_or(Error::DimensionOutOfRange)?,
                *j.dims.get(t).ok_or(Error::DimensionOutOfRange)?,
            );
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return Err(Error::ShapeMismatch(format!("matrix {} is not {}x{}", a + 1, r, c)));
            }
            let data = rows
                .iter()
                .flatten()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()?;
            maps.push(Matrix::from_vec(r, c, data));
        }
        QuiverRepresentation::new(quiver, j.field, j.dims.clone(), maps)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `1` as a rational, for building small examples.
pub fn one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Quiver {
        Quiver::new(2, vec![(0, 1)]).unwrap()
    }

    fn p1() -> QuiverRepresentation {
        QuiverRepresentation::from_int(a2(), vec![1, 1], &[vec![1]]).unwrap()
    }

    #[test]
    fn build_examples() {
        let p = p1();
        assert_eq!(p.dims(), &[1, 1]);
        let s1 = QuiverRepresentation::from_int(a2(), vec![1, 0], &[vec![]]).unwrap();
        assert_eq!(s1, QuiverRepresentation::simple(a2(), 0));
        let bad = QuiverRepresentation::new(a2(), FieldTag::Rational, vec![1, 1], vec![crate::linalg::int_matrix(2, 1, &[1, 0])]);
        assert!(matches!(bad, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn hom_examples_in_a2() {
        let s1 = QuiverRepresentation::simple(a2(), 0);
        let s2 = QuiverRepresentation::simple(a2(), 1);
        assert_eq!(hom_dim(&s2, &p1()).unwrap(), 1);
        assert_eq!(hom_dim(&s1, &p1()).unwrap(), 0);
        assert_eq!(hom_dim(&p1(), &s1).unwrap(), 1);
        assert_eq!(hom_dim(&p1(), &p1()).unwrap(), 1);
        assert_eq!(hom_dim(&s1, &s1).unwrap(), 1);
    }

    #[test]
    fn hom_is_additive() {
        let s2 = QuiverRepresentation::simple(a2(), 1);
        let sum = p1().direct_sum(&s2).unwrap();
        assert_eq!(hom_dim(&s2, &sum).unwrap(), hom_dim(&s2, &p1()).unwrap() + hom_dim(&s2, &s2).unwrap());
    }

    #[test]
    fn mismatched_inputs() {
        let other = QuiverRepresentation::simple(Quiver::new(2, vec![(1, 0)]).unwrap(), 0);
        assert_eq!(hom_dim(&p1(), &other), Err(Error::QuiverMismatch));
        assert_eq!(hom_dim(&p1(), &p1().reduce_mod(5).unwrap()), Err(Error::FieldMismatch));
    }

    #[test]
    fn json_roundtrip() {
        let j = RepresentationJson::from(&p1());
        let s = serde_json::to_string(&j).unwrap();
        let back: RepresentationJson = serde_json::from_str(&s).unwrap();
        assert_eq!(QuiverRepresentation::try_from(&back).unwrap(), p1());
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
    }
}
