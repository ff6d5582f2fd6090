//! Exact rational scalars, vectors and matrices.
//!
//! Everything here is exact: [`Rational`] is an arbitrary-precision fraction
//! kept in lowest terms, and the matrix routines (rank, consistent solve,
//! left inverse) never round.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
///
/// Values whose numerator and denominator fit in an `i64` are stored
/// inline and operated on with `i128` intermediates; everything else falls
/// back to [`BigRational`]. The representation is canonical, so derived
/// equality and hashing agree with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// `numer / denom` with `denom > 0`, `gcd = 1` and `numer != i64::MIN`.
    Small(i64, i64),
    Big(BigRational),
}

fn small_part(x: i128) -> Option<i64> {
    i64::try_from(x).ok().filter(|&v| v != i64::MIN)
}

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational::from_big(BigRational::new(numer.into(), denom)))
    }

    /// Builds `numer/denom`; panics on a zero denominator.
    pub fn frac(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "nonzero denominator");
        Rational::from_i128(numer.into(), denom.into())
    }

    /// Reduces `n/d` for `d != 0` and `n, d` well inside the `i128` range.
    fn from_i128(n: i128, d: i128) -> Self {
        let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = n.unsigned_abs().gcd(&d.unsigned_abs()) as i128;
        let (n, d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        match (small_part(n), small_part(d)) {
            (Some(a), Some(b)) => Rational(Repr::Small(a, b)),
            _ => Rational(Repr::Big(BigRational::new_raw(n.into(), d.into()))),
        }
    }

    fn from_big(value: BigRational) -> Self {
        let small = value
            .numer()
            .to_i64()
            .zip(value.denom().to_i64())
            .filter(|&(a, _)| a != i64::MIN);
        match small {
            Some((a, b)) => Rational(Repr::Small(a, b)),
            None => Rational(Repr::Big(value)),
        }
    }

    fn big(&self) -> Cow<'_, BigRational> {
        match &self.0 {
            Repr::Small(a, b) => Cow::Owned(BigRational::new_raw((*a).into(), (*b).into())),
            Repr::Big(v) => Cow::Borrowed(v),
        }
    }

    pub fn from_int(value: impl Into<BigInt>) -> Self {
        Rational::from_big(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(a, _) => (*a).into(),
            Repr::Big(v) => v.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, b) => (*b).into(),
            Repr::Big(v) => v.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(a, _) => *a > 0,
            Repr::Big(v) => v.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(a, _) => *a < 0,
            Repr::Big(v) => v.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, b) => *b == 1,
            Repr::Big(v) => v.is_integer(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(a, b) => {
                assert!(*a != 0, "reciprocal of zero");
                Rational::from_i128((*b).into(), (*a).into())
            }
            Repr::Big(v) => Rational::from_big(v.recip()),
        }
    }

    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small(a, b) => Integer::div_floor(a, b).into(),
            Repr::Big(v) => v.floor().to_integer(),
        }
    }

    pub fn ceil(&self) -> BigInt {
        match &self.0 {
            Repr::Small(a, b) => (-Integer::div_floor(&-a, b)).into(),
            Repr::Big(v) => v.ceil().to_integer(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc *= self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(a, b) => *a as f64 / *b as f64,
            Repr::Big(v) => v.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(a, 1) => Some(*a),
            Repr::Small(..) => None,
            Repr::Big(v) if v.is_integer() => v.numer().to_i64(),
            Repr::Big(_) => None,
        }
    }

    pub fn as_big(&self) -> BigRational {
        self.big().into_owned()
    }

    /// `(⌊q⌋, {q})` with `0 ≤ {q} < 1`.
    pub fn floor_frac(&self) -> (BigInt, Rational) {
        let fl = self.floor();
        let frac = self - &Rational::from_int(fl.clone());
        (fl, frac)
    }

    /// `(⌈q⌉, ⟨q⟩)` with `-1 < ⟨q⟩ ≤ 0`.
    pub fn ceil_frac(&self) -> (BigInt, Rational) {
        let cl = self.ceil();
        let frac = self - &Rational::from_int(cl.clone());
        (cl, frac)
    }

    /// Midpoint of two values.
    pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
        (a + b) / Rational::from(2)
    }

    fn add_ref(&self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, 1), Repr::Small(c, 1)) => {
                Rational::from_i128(*a as i128 + *c as i128, 1)
            }
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rational::from_i128(a * d + c * b, b * d)
            }
            _ => Rational::from_big(self.big().as_ref() + rhs.big().as_ref()),
        }
    }

    fn sub_ref(&self, rhs: &Rational) -> Rational {
        self.add_ref(&-rhs)
    }

    fn mul_ref(&self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.big().as_ref() * rhs.big().as_ref()),
        }
    }

    fn div_ref(&self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                assert!(*c != 0, "division by zero");
                Rational::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => Rational::from_big(self.big().as_ref() / rhs.big().as_ref()),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.big().cmp(&other.big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `(⌊q⌋, {q})`.
pub fn floor_frac(q: &Rational) -> (BigInt, Rational) {
    q.floor_frac()
}

/// `(⌈q⌉, ⟨q⟩)`; the ceiling remainder lies in `(-1, 0]`.
pub fn ceil_frac(q: &Rational) -> (BigInt, Rational) {
    q.ceil_frac()
}

/// Smallest positive rational that is an integer multiple of both inputs.
pub fn rational_lcm(a: &Rational, b: &Rational) -> Result<Rational> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Domain(format!(
            "rational lcm needs positive inputs, got {a} and {b}"
        )));
    }
    let numer = a.numer().lcm(&b.numer());
    let denom = a.denom().gcd(&b.denom());
    Rational::new(numer, denom)
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        match value {
            i64::MIN => Rational::from_int(value),
            v => Rational(Repr::Small(v, 1)),
        }
    }
}

impl From<BigInt> for Rational {
    fn from(value: BigInt) -> Self {
        Rational::from_int(value)
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational::from_big(value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(a, 1) => write!(f, "{a}"),
            Repr::Small(a, b) => write!(f, "{a}/{b}"),
            Repr::Big(v) if v.denom().is_one() => write!(f, "{}", v.numer()),
            Repr::Big(v) => write!(f, "{}/{}", v.numer(), v.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let (negative, body) = if let Some(rest) = trimmed.strip_prefix('-') {
            (true, rest)
        } else if let Some(rest) = trimmed.strip_prefix('\u{2212}') {
            (true, rest)
        } else {
            (false, trimmed.strip_prefix('+').unwrap_or(trimmed))
        };
        let bad = || Error::Parse(format!("malformed rational {s:?}"));
        let digits = |part: &str| -> Result<BigInt> {
            if part.is_empty() || !part.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            part.parse::<BigInt>().map_err(|_| bad())
        };
        let (numer, denom) = match body.split_once('/') {
            Some((n, d)) => (digits(n)?, digits(d)?),
            None => (digits(body)?, BigInt::one()),
        };
        if denom.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        let numer = if negative { -numer } else { numer };
        Rational::new(numer, denom)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                self.$inner(rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$inner(&rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                self.$inner(rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = self.add_ref(rhs);
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = self.add_ref(&rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = self.sub_ref(rhs);
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = self.mul_ref(rhs);
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self.0 {
            Repr::Small(a, b) => Rational(Repr::Small(-a, b)),
            Repr::Big(v) => Rational::from_big(-v),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(a, b) => Rational(Repr::Small(-a, *b)),
            Repr::Big(v) => Rational::from_big(-v),
        }
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Fixed-length vector of rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RationalVector(entries)
    }

    pub fn zeros(len: usize) -> Self {
        RationalVector(vec![Rational::zero(); len])
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        RationalVector(entries.iter().map(|&x| Rational::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        RationalVector(self.0.iter().map(|x| x * factor).collect())
    }

    pub fn sub(&self, other: &RationalVector) -> Self {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &RationalVector) -> Self {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn dot(&self, other: &RationalVector) -> Rational {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rational::is_integer)
    }
}

impl std::ops::Index<usize> for RationalVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl FromIterator<Rational> for RationalVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RationalVector(iter.into_iter().collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
        .expect("rectangular")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[RationalVector]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, RationalVector::len);
        if cols.iter().any(|v| v.len() != r) {
            return Err(Error::Shape("columns of different length".into()));
        }
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..r {
                m[(i, j)] = col[i].clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RationalVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &RationalVector) -> Result<RationalVector> {
        if self.cols != v.len() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} matrix by vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Appends `v` as an extra column.
    pub fn augment(&self, v: &RationalVector) -> Result<Self> {
        if v.len() != self.rows {
            return Err(Error::Shape("augmenting column has wrong length".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            out[(i, self.cols)] = v[i].clone();
        }
        Ok(out)
    }

    /// Appends `row` at the bottom.
    pub fn stack_row(&self, row: &[Rational]) -> Result<Self> {
        if row.len() != self.cols {
            return Err(Error::Shape("stacked row has wrong length".into()));
        }
        let mut data = self.data.clone();
        data.extend(row.iter().cloned());
        Ok(RationalMatrix {
            rows: self.rows + 1,
            cols: self.cols,
            data,
        })
    }

    /// Exact determinant of a square matrix.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] / &pivot;
                for c in col..n {
                    let delta = &factor * &m[(col, c)];
                    m[(r, c)] -= &delta;
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, row);
            let inv = m[(row, col)].recip();
            for c in col..m.cols {
                m[(row, c)] *= &inv;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let delta = &factor * &m[(row, c)];
                    m[(r, c)] -= &delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (reduced, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = reduced[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact rank by fraction-free (Bareiss) elimination.
///
/// Each row is first scaled by the lcm of its denominators, which leaves
/// the rank unchanged and puts the matrix over the integers.
pub fn rank(m: &RationalMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let scale = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
            row.iter()
                .map(|x| x.numer() * (&scale / x.denom()))
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// One particular solution of `A u = b`, or `None` when `b ∉ Col A`.
pub fn solve_consistent(a: &RationalMatrix, b: &RationalVector) -> Result<Option<RationalVector>> {
    if b.len() != a.rows() {
        return Err(Error::Shape(format!(
            "right-hand side has length {} but matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    if rank(&a.augment(b)?) > rank(a) {
        return Ok(None);
    }
    let (reduced, pivots) = a.augment(b)?.rref();
    let mut u = vec![Rational::zero(); a.cols()];
    for (row, &col) in pivots.iter().enumerate() {
        u[col] = reduced[(row, a.cols())].clone();
    }
    Ok(Some(RationalVector::new(u)))
}

/// `(BᵀB)⁻¹Bᵀ` for a matrix of full column rank.
pub fn left_inverse(b: &RationalMatrix) -> Result<RationalMatrix> {
    if rank(b) != b.cols() {
        return Err(Error::RankDeficient);
    }
    let bt = b.transpose();
    bt.mul(b)?.inverse()?.mul(&bt)
}
