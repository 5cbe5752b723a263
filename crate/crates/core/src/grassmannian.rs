//! Quiver Grassmannians: `F_q`-point counts and Euler characteristics.
//!
//! Points are counted by enumerating, vertex by vertex, the subspaces of
//! each `M_i` in reduced row-echelon form and discarding partial choices
//! that some arrow does not map into the chosen target subspace. Counts at
//! several primes are interpolated to a polynomial whose value at `q = 1` is
//! the Euler characteristic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, PrimeField};
use crate::par;
use crate::rep::{FieldTag, QuiverRepresentation};

/// Default number of primes a single Euler characteristic may consume.
pub const DEFAULT_PRIME_BUDGET: usize = 64;

/// A subspace of `F_q^m`, stored as the rows of its RREF basis.
#[derive(Clone, Debug)]
struct Subspace {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn contains(&self, v: &[u64], f: &PrimeField) -> bool {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p];
            if c != 0 {
                for (x, r) in w.iter_mut().zip(row) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }
}

/// All `e`-dimensional subspaces of `F_q^m`, each exactly once.
fn subspaces(m: usize, e: usize, q: u64) -> Vec<Subspace> {
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(e);
    choose_pivots(m, e, 0, &mut pivots, q, &mut out);
    out
}

fn choose_pivots(m: usize, e: usize, from: usize, pivots: &mut Vec<usize>, q: u64, out: &mut Vec<Subspace>) {
    if pivots.len() == e {
        fill_free_entries(m, pivots, q, out);
        return;
    }
    for c in from..m {
        pivots.push(c);
        choose_pivots(m, e, c + 1, pivots, q, out);
        pivots.pop();
    }
}

fn fill_free_entries(m: usize, pivots: &[usize], q: u64, out: &mut Vec<Subspace>) {
    let free: Vec<(usize, usize)> = pivots
        .iter()
        .enumerate()
        .flat_map(|(i, &p)| ((p + 1)..m).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
        .collect();
    let mut base = vec![vec![0u64; m]; pivots.len()];
    for (i, &p) in pivots.iter().enumerate() {
        base[i][p] = 1;
    }
    let mut digits = vec![0u64; free.len()];
    loop {
        let mut rows = base.clone();
        for (&(i, c), &d) in free.iter().zip(&digits) {
            rows[i][c] = d;
        }
        out.push(Subspace { rows, pivots: pivots.to_vec() });
        // odometer over F_q^free
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return;
            }
            digits[pos] += 1;
            if digits[pos] < q {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

fn apply(m: &Matrix<u64>, v: &[u64], f: &PrimeField) -> Vec<u64> {
    (0..m.rows())
        .map(|i| m.row(i).iter().zip(v).fold(0, |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
        .collect()
}

fn check_dims(m: &QuiverRepresentation, e: &[usize]) -> Result<()> {
    if e.len() != m.dims().len() || e.iter().zip(m.dims()).any(|(a, b)| a > b) {
        return Err(Error::DimensionOutOfRange);
    }
    Ok(())
}

/// Number of subrepresentations of dimension vector `e` of a representation
/// over a prime field.
pub fn point_count(m: &QuiverRepresentation, e: &[usize]) -> Result<u64> {
    let FieldTag::Prime(p) = m.field() else { return Err(Error::NotPrimeField) };
    check_dims(m, e)?;
    let f = PrimeField::new(p);
    let maps: Vec<Matrix<u64>> = m
        .maps()
        .iter()
        .map(|a| a.try_map(|x| f.embed_rational(x)).expect("entries are reduced"))
        .collect();
    let q = m.quiver();
    let n = q.n();
    let degrees = q.degrees();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(degrees[v]), v));
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    // arrows to check once the later of their endpoints is placed
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, &(t, h)) in q.arrows().iter().enumerate() {
        checks[position[t].max(position[h])].push(a);
    }
    let candidates: Vec<Vec<Subspace>> = order.iter().map(|&v| subspaces(m.dim(v), e[v], p)).collect();
    let ctx = CountContext { order: &order, position: &position, checks: &checks, candidates: &candidates, maps: &maps, arrows: q.arrows(), f: &f };
    let mut chosen: Vec<Option<&Subspace>> = vec![None; n];
    Ok(ctx.count(0, &mut chosen))
}

struct CountContext<'a> {
    order: &'a [usize],
    position: &'a [usize],
    checks: &'a [Vec<usize>],
    candidates: &'a [Vec<Subspace>],
    maps: &'a [Matrix<u64>],
    arrows: &'a [(usize, usize)],
    f: &'a PrimeField,
}

impl<'a> CountContext<'a> {
    fn count(&self, depth: usize, chosen: &mut Vec<Option<&'a Subspace>>) -> u64 {
        if depth == self.order.len() {
            return 1;
        }
        let v = self.order[depth];
        let mut total = 0;
        for cand in &self.candidates[depth] {
            chosen[v] = Some(cand);
            if self.checks[depth].iter().all(|&a| self.stable(a, chosen)) {
                total += self.count(depth + 1, chosen);
            }
        }
        chosen[v] = None;
        total
    }

    fn stable(&self, a: usize, chosen: &[Option<&Subspace>]) -> bool {
        let (t, h) = self.arrows[a];
        debug_assert!(self.position[t] < self.order.len() && self.position[h] < self.order.len());
        let (Some(ut), Some(uh)) = (chosen[t], chosen[h]) else { unreachable!("both endpoints placed") };
        ut.rows.iter().all(|u| uh.contains(&apply(&self.maps[a], u, self.f), self.f))
    }
}

/// Point counts at several primes, the interpolated counting polynomial
/// (coefficients from the constant term up) and its value at 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrassmannianCount {
    pub e: Vec<usize>,
    pub counts: Vec<(u64, u64)>,
    #[serde(serialize_with = "ser_rationals")]
    pub polynomial: Vec<BigRational>,
    #[serde(serialize_with = "ser_bigint")]
    pub euler: BigInt,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Primes usable for reducing `m`: no denominator and no nonzero numerator
/// of an entry is divisible by them.
fn good_primes(m: &QuiverRepresentation) -> impl Iterator<Item = u64> + '_ {
    (2u64..).filter(|&p| is_prime(p)).filter(move |&p| {
        let bp = BigInt::from(p);
        m.maps().iter().flat_map(|a| a.data()).all(|x| {
            (x.numer().is_zero() || !(x.numer() % &bp).is_zero()) && !(x.denom() % &bp).is_zero()
        })
    })
}

/// Euler characteristic of `Gr_e(M)` for `M` over ℚ.
///
/// With `D = Σ e_i (dim M_i − e_i)`, counts points over `D + 1` primes,
/// interpolates, and checks the prediction at one further prime.
pub fn euler_characteristic(m: &QuiverRepresentation, e: &[usize], prime_budget: usize) -> Result<GrassmannianCount> {
    if m.field() != FieldTag::Rational {
        return Err(Error::FieldMismatch);
    }
    check_dims(m, e)?;
    if e.iter().all(|&x| x == 0) || e == m.dims() {
        return Ok(GrassmannianCount {
            e: e.to_vec(),
            counts: vec![],
            polynomial: vec![BigRational::one()],
            euler: BigInt::one(),
        });
    }
    let degree: usize = e.iter().zip(m.dims()).map(|(&a, &b)| a * (b - a)).sum();
    let needed = degree + 2;
    if needed > prime_budget {
        return Err(Error::PrimeBudgetExceeded { budget: prime_budget, needed });
    }
    let primes: Vec<u64> = good_primes(m).take(needed).collect();
    let counts: Vec<u64> = par::try_map(&primes, |&p| point_count(&m.reduce_mod(p)?, e))?;
    let points: Vec<(BigRational, BigRational)> = primes[..=degree]
        .iter()
        .zip(&counts)
        .map(|(&p, &c)| (BigRational::from_integer(p.into()), BigRational::from_integer(c.into())))
        .collect();
    let polynomial = interpolate(&points);
    let check = *primes.last().unwrap();
    let predicted = evaluate(&polynomial, &BigRational::from_integer(check.into()));
    let counted = *counts.last().unwrap();
    if predicted != BigRational::from_integer(counted.into()) {
        return Err(Error::InterpolationInconsistent { prime: check, predicted: predicted.to_string(), counted });
    }
    let at_one = evaluate(&polynomial, &BigRational::one());
    if !at_one.is_integer() {
        return Err(Error::InvariantViolation(format!("counting polynomial takes the value {at_one} at 1")));
    }
    Ok(GrassmannianCount { e: e.to_vec(), counts: primes.into_iter().zip(counts).collect(), polynomial, euler: at_one.to_integer() })
}

/// Coefficients (constant term first) of the polynomial of least degree
/// through the given points.
pub fn interpolate(points: &[(BigRational, BigRational)]) -> Vec<BigRational> {
    let n = points.len();
    // Newton divided differences
    let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&points[i].0 - &points[i - j].0);
        }
    }
    // Horner expansion of the Newton form
    let mut coeffs = vec![BigRational::zero(); n.max(1)];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - x_i) + dd[i]
        let xi = &points[i].0;
        let mut next = vec![BigRational::zero(); n.max(1)];
        for k in 0..n {
            if coeffs[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &coeffs[k];
            }
            next[k] -= &coeffs[k] * xi;
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

pub fn evaluate(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// All dimension vectors `0 ≤ e ≤ dims` in lexicographic order.
pub fn dimension_vectors(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &d in dims {
        out = out.into_iter().flat_map(|pre| (0..=d).map(move |x| [pre.clone(), vec![x]].concat())).collect();
    }
    out
}

/// `(e, χ(Gr_e(M)))` for every dimension vector `e ≤ dim M`.
pub fn euler_characteristics(m: &QuiverRepresentation, prime_budget: usize) -> Result<Vec<(Vec<usize>, BigInt)>> {
    let es = dimension_vectors(m.dims());
    let chis = par::try_map(&es, |e| euler_characteristic(m, e, prime_budget).map(|g| g.euler))?;
    Ok(es.into_iter().zip(chis).collect())
}
