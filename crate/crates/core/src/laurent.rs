//! Multivariate Laurent polynomials over the integers.
//!
//! A [`LaurentPoly`] is a finite map from exponent vectors to nonzero
//! [`BigInt`] coefficients. The map is kept in lexicographic order on the
//! exponents, which fixes both the printed form and the total order used to
//! canonicalize clusters.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent vector of a Laurent monomial. Entries may be negative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(Vec<i32>);

impl Exponent {
    pub fn new(entries: Vec<i32>) -> Self {
        Exponent(entries)
    }

    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        Exponent(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// A monomial is proper when some exponent is negative.
    pub fn is_proper(&self) -> bool {
        self.0.iter().any(|&e| e < 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Exponent {
        Exponent(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i32) -> Exponent {
        Exponent(self.0.iter().map(|a| a * k).collect())
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    fn min_with(&mut self, other: &Exponent) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a = (*a).min(*b);
        }
    }
}

impl From<Vec<i32>> for Exponent {
    fn from(v: Vec<i32>) -> Self {
        Exponent(v)
    }
}

impl std::ops::Index<usize> for Exponent {
    type Output = i32;
    fn index(&self, i: usize) -> &i32 {
        &self.0[i]
    }
}

/// Denominator vector `d` of a Laurent polynomial: `d_i` is minus the least
/// exponent of `x_i` over the support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DenominatorVector(pub Vec<i32>);

/// Sign and properness data of a Laurent polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub is_nonneg: bool,
    pub is_proper_sum: bool,
}

/// Exact multivariate Laurent polynomial in `nvars` variables.
///
/// No stored coefficient is zero, so structural equality is equality of
/// polynomials. The derived order compares term lists lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(Exponent::zero(nvars), BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(Exponent::zero(nvars), c.into())
    }

    /// The generator `x_k` (0-based `k`).
    pub fn var(nvars: usize, k: usize) -> Self {
        Self::monomial(Exponent::unit(nvars, k), BigInt::one())
    }

    pub fn monomial(exp: Exponent, coeff: BigInt) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { nvars, terms }
    }

    /// `x^exp` with coefficient one.
    pub fn x_pow(exp: Exponent) -> Self {
        Self::monomial(exp, BigInt::one())
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero)
    /// terms, collecting like monomials.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, BigInt)>) -> Self {
        let mut out = LaurentPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length differs from rank");
            out.add_term(e, c);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(e, c)| e.is_zero() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &BigInt)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Single term with coefficient `±1`.
    pub fn as_unit_monomial(&self) -> Option<(&Exponent, &BigInt)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        (c.abs().is_one()).then_some((e, c))
    }

    pub fn as_monomial(&self) -> Option<(&Exponent, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, e: Exponent, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_rank(&self, other: &LaurentPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::RankMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut out = LaurentPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &Exponent) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.add(shift), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut result = LaurentPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Componentwise minimum of the exponents over the support.
    pub fn min_exponent(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let mut m = it.next()?.clone();
        for e in it {
            m.min_with(e);
        }
        Some(m)
    }

    /// Exact quotient `self / divisor`.
    ///
    /// Both operands are shifted into the ordinary polynomial ring and divided
    /// with respect to the lexicographic order; a nonzero remainder means the
    /// quotient is not a Laurent polynomial.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero(self.nvars));
        }
        let dmin = divisor.min_exponent().expect("nonzero divisor");
        let nmin = self.min_exponent().expect("nonzero dividend");
        let q = divisor.shift(&dmin.neg());
        let mut rem = self.shift(&nmin.neg());
        let (q_lead_e, q_lead_c) = q.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut quotient = LaurentPoly::zero(self.nvars);
        while let Some((lead_e, lead_c)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if !lead_e.dominates(&q_lead_e) {
                return Err(Error::InexactDivision);
            }
            let (t_c, r) = lead_c.div_rem(&q_lead_c);
            if !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            let t_e = lead_e.sub(&q_lead_e);
            for (e, c) in &q.terms {
                rem.add_term(e.add(&t_e), -(c * &t_c));
            }
            debug_assert!(!rem.terms.contains_key(&lead_e));
            quotient.add_term(t_e, t_c);
        }
        Ok(quotient.shift(&nmin.sub(&dmin)))
    }

    /// Simultaneous substitution `x_i ↦ images[i]`.
    ///
    /// A negative power is only allowed for a variable whose image is a unit
    /// monomial `±x^c`.
    pub fn substitute(&self, images: &[LaurentPoly]) -> Result<LaurentPoly> {
        if images.len() != self.nvars {
            return Err(Error::RankMismatch { left: self.nvars, right: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.nvars,
            None => return Ok(self.clone()),
        };
        for img in images {
            if img.nvars != target {
                return Err(Error::RankMismatch { left: target, right: img.nvars });
            }
        }
        let mut powers: Vec<BTreeMap<i32, LaurentPoly>> = vec![BTreeMap::new(); self.nvars];
        let mut out = LaurentPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = LaurentPoly::constant(target, c.clone());
            for (i, &k) in e.as_slice().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !powers[i].contains_key(&k) {
                    let p = power_of(&images[i], k).ok_or(Error::NegativePowerOfNonUnit { var: i + 1 })?;
                    powers[i].insert(k, p);
                }
                term = &term * &powers[i][&k];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    pub fn denominator_vector(&self) -> Result<DenominatorVector> {
        let m = self.min_exponent().ok_or(Error::ZeroPolynomial)?;
        Ok(DenominatorVector(m.as_slice().iter().map(|&e| -e).collect()))
    }

    pub fn classify(&self) -> Classification {
        Classification {
            is_nonneg: self.terms.values().all(|c| !c.is_negative()),
            is_proper_sum: self.terms.keys().all(Exponent::is_proper),
        }
    }

    pub fn is_nonneg(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Parses the text form produced by `Display` in a ring of `nvars`
    /// variables.
    pub fn parse(s: &str, nvars: usize) -> Result<LaurentPoly> {
        Parser { chars: s.chars().collect(), pos: 0, nvars }.poly()
    }
}

fn power_of(p: &LaurentPoly, k: i32) -> Option<LaurentPoly> {
    if k >= 0 {
        return Some(p.pow(k as u32));
    }
    let (e, c) = p.as_unit_monomial()?;
    let inv = LaurentPoly::monomial(e.neg(), c.clone());
    Some(inv.pow((-k) as u32))
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("rank mismatch in Laurent addition")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("rank mismatch in Laurent subtraction")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("rank mismatch in Laurent multiplication")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let factors: Vec<String> = e
                .as_slice()
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(i, &a)| if a == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, a) })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn poly(&mut self) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(self.nvars);
        let mut sign = BigInt::one();
        match self.peek() {
            None => return Err(self.err("empty input")),
            Some('-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            let (e, c) = self.term()?;
            out.add_term(e, c * &sign);
            match self.peek() {
                None => break,
                Some('+') => {
                    sign = BigInt::one();
                    self.pos += 1;
                }
                Some('-') => {
                    sign = -BigInt::one();
                    self.pos += 1;
                }
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Exponent, BigInt)> {
        let mut coeff = BigInt::one();
        let mut exp = vec![0i32; self.nvars];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let digits = self.digits();
                    coeff *= BigInt::from_str(&digits).map_err(|_| self.err("bad integer"))?;
                }
                Some('x') => {
                    self.pos += 1;
                    let idx: usize = self.digits().parse().map_err(|_| self.err("bad variable index"))?;
                    if idx == 0 || idx > self.nvars {
                        return Err(self.err(&format!("variable x{idx} outside rank {}", self.nvars)));
                    }
                    let mut power = 1i32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        let neg = if self.peek() == Some('-') {
                            self.pos += 1;
                            true
                        } else {
                            false
                        };
                        self.skip_ws();
                        power = self.digits().parse().map_err(|_| self.err("bad exponent"))?;
                        if neg {
                            power = -power;
                        }
                    }
                    exp[idx - 1] += power;
                }
                _ => return Err(self.err("expected a coefficient or a variable")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Exponent(exp), coeff))
    }

    fn digits(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> LaurentPoly {
        LaurentPoly::parse(s, n).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = p("x1 + 1", 1);
        let b = p("x1 - 1", 1);
        assert_eq!(&a * &b, p("x1^2 - 1", 1));
    }

    #[test]
    fn add_zero_is_identity() {
        let a = p("3*x1^-2*x2 - x2 + 7", 2);
        assert_eq!(&a + &LaurentPoly::zero(2), a);
    }

    #[test]
    fn monomial_shift() {
        let a = p("x2 + 1", 2);
        let b = p("x1^-1", 2);
        assert_eq!(&a * &b, p("x1^-1*x2 + x1^-1", 2));
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        assert_eq!(
            p("x1", 1).checked_add(&p("x1", 2)),
            Err(Error::RankMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn division_by_a_monomial() {
        let q = p("x2 + 1", 2).div_exact(&p("x1", 2)).unwrap();
        assert_eq!(q, p("x1^-1*x2 + x1^-1", 2));
    }

    #[test]
    fn division_of_a_product() {
        let q = p("x1*x2 + x1 + x2 + 1", 2).div_exact(&p("x1 + 1", 2)).unwrap();
        assert_eq!(q, p("x2 + 1", 2));
        assert_eq!(&q * &p("x1 + 1", 2), p("x1*x2 + x1 + x2 + 1", 2));
    }

    #[test]
    fn inexact_division() {
        assert_eq!(p("x1 + x2", 2).div_exact(&p("x1 + 1", 2)), Err(Error::InexactDivision));
        assert_eq!(p("x1 + 1", 1).div_exact(&p("2", 1)), Err(Error::InexactDivision));
        assert_eq!(p("x1", 1).div_exact(&LaurentPoly::zero(1)), Err(Error::DivisionByZero));
    }

    #[test]
    fn division_with_negative_exponents() {
        let a = p("x1^-3*x2 + x1^-2 + 2*x2^-4", 2);
        let b = p("x1^2*x2^-1 - x2^3 + 5", 2);
        assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
    }

    #[test]
    fn substitute_f_polynomial_at_columns() {
        // 1 + y2 at y1 = x2, y2 = x1^-1
        let f = p("1 + x2", 2);
        let images = vec![p("x2", 2), p("x1^-1", 2)];
        assert_eq!(f.substitute(&images).unwrap(), p("1 + x1^-1", 2));
    }

    #[test]
    fn substitute_identity_and_constant() {
        let f = p("x1^-1*x2^2 - 4*x1*x2^-1 + 2", 2);
        let id = vec![LaurentPoly::var(2, 0), LaurentPoly::var(2, 1)];
        assert_eq!(f.substitute(&id).unwrap(), f);
        let one = LaurentPoly::one(2);
        assert_eq!(one.substitute(&[p("x1 + x2", 2), p("x1^-3", 2)]).unwrap(), one);
    }

    #[test]
    fn substitute_refuses_negative_power_of_non_unit() {
        let f = p("x1^-1", 1);
        assert_eq!(f.substitute(&[p("x1 + 1", 1)]), Err(Error::NegativePowerOfNonUnit { var: 1 }));
        assert_eq!(f.substitute(&[p("-x1^2", 1)]).unwrap(), p("-x1^-2", 1));
    }

    #[test]
    fn denominator_vectors() {
        assert_eq!(p("x1^-1*x2 + x1^-1", 2).denominator_vector().unwrap().0, vec![1, 0]);
        assert_eq!(p("x2", 3).denominator_vector().unwrap().0, vec![0, -1, 0]);
        let e = (&p("x1^-1*x2^-1", 2) * &p("x1 + x2 + 1", 2)).denominator_vector().unwrap();
        assert_eq!(e.0, vec![1, 1]);
        assert_eq!(LaurentPoly::zero(2).denominator_vector(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn classification() {
        let c = p("x1^-1*x2 + x1^-1", 2).classify();
        assert!(c.is_nonneg && c.is_proper_sum);
        let c = p("x1*x2", 2).classify();
        assert!(c.is_nonneg && !c.is_proper_sum);
        let c = p("x1^-1 - x2^-1", 2).classify();
        assert!(!c.is_nonneg && c.is_proper_sum);
        let c = LaurentPoly::zero(2).classify();
        assert!(c.is_nonneg && c.is_proper_sum);
    }

    #[test]
    fn display_format() {
        let v = p("x1^-1*x2^-1 + x1^-1 + x2^-1", 2);
        assert_eq!(v.to_string(), "x1^-1*x2^-1 + x1^-1 + x2^-1");
        assert_eq!(p("-3*x2 + x1 - 1", 2).to_string(), "-1 - 3*x2 + x1");
        assert_eq!(LaurentPoly::zero(3).to_string(), "0");
        assert_eq!(p("2 * x1 ^ -2 * x1", 1).to_string(), "2*x1^-1");
    }

    #[test]
    fn parse_errors() {
        assert!(LaurentPoly::parse("", 2).is_err());
        assert!(LaurentPoly::parse("x3", 2).is_err());
        assert!(LaurentPoly::parse("x1 +", 2).is_err());
        assert!(LaurentPoly::parse("x1 y", 2).is_err());
    }
}
