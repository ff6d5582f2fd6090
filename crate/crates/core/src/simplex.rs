//! Rational simplices and their determined-set step functions.
//!
//! For a simplex with vertices `α_0..α_n` and denominator `d`, the closed
//! determined set at level `ℓ` is the set of lattice points `Σ u_j α_j` with
//! `0 ≤ u_j < d` and `Σ u_j = ℓ`; the open one uses `0 < v_j ≤ d`. Their
//! cardinalities are step functions of `ℓ`, computed here exactly by
//! enumerating candidate lattice points and solving for the interval of
//! levels each one occupies.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    left_inverse, rank, solve_consistent, Rational, RationalMatrix, RationalVector,
};
use crate::error::{Error, Result};

/// Default cap on the number of candidate lattice vectors enumerated for
/// one simplex.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Closed counts (`tP`) versus relatively open counts (`tP̊`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Closed,
    Open,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Closed => "closed",
            Kind::Open => "open",
        })
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Kind::Closed),
            "open" => Ok(Kind::Open),
            other => Err(Error::Parse(format!("unknown kind {other:?}"))),
        }
    }
}

/// Smallest positive rational `d` with `d·α` integral for every vertex:
/// lcm of coordinate denominators over gcd of nonzero numerators.
///
/// The all-zero vertex set has no such minimum; it gets `d = 1`.
pub fn denominator(vertices: &[RationalVector]) -> Rational {
    let mut lcm = BigInt::one();
    let mut gcd = BigInt::zero();
    for x in vertices.iter().flat_map(RationalVector::iter) {
        lcm = lcm.lcm(&x.denom());
        if !x.is_zero() {
            gcd = gcd.gcd(&x.numer().abs());
        }
    }
    if gcd.is_zero() {
        return Rational::one();
    }
    Rational::new(lcm, gcd).expect("gcd of nonzero numerators is nonzero")
}

/// A rational simplex with affinely independent vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSimplex {
    vertices: Vec<RationalVector>,
    denominator: Rational,
}

impl RationalSimplex {
    pub fn new(vertices: Vec<RationalVector>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::Domain("a simplex needs at least one vertex".into()));
        };
        let ambient = first.len();
        if vertices.iter().any(|v| v.len() != ambient) {
            return Err(Error::Shape("vertices of different dimension".into()));
        }
        let n = vertices.len() - 1;
        if n > ambient {
            return Err(Error::AffinelyDependent);
        }
        if n > 0 {
            let diffs: Vec<_> = vertices[1..].iter().map(|v| v.sub(first)).collect();
            if rank(&RationalMatrix::from_columns(&diffs)?) != n {
                return Err(Error::AffinelyDependent);
            }
        }
        let denominator = denominator(&vertices);
        Ok(RationalSimplex {
            vertices,
            denominator,
        })
    }

    pub fn from_int_vertices(vertices: &[&[i64]]) -> Result<Self> {
        Self::new(
            vertices
                .iter()
                .map(|v| RationalVector::from_ints(v))
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn denominator(&self) -> &Rational {
        &self.denominator
    }

    /// Matrix with the vertices as columns.
    pub fn vertex_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_columns(&self.vertices).expect("vertices share a dimension")
    }

    /// Whether the vertices are linearly (not just affinely) dependent.
    pub fn linearly_dependent(&self) -> bool {
        rank(&self.vertex_matrix()) == self.dim()
    }

    /// Upper end of the level range, `(n+1)·d`.
    pub fn level_span(&self) -> Rational {
        &self.denominator * Rational::from(self.vertices.len() as i64)
    }

    /// Affine coordinates of `p` over the vertices, or `None` when `p` is
    /// off the affine hull.
    pub fn barycentric(&self, p: &RationalVector) -> Result<Option<Vec<Rational>>> {
        if p.len() != self.ambient_dim() {
            return Err(Error::Shape(format!(
                "point has dimension {} but simplex lives in dimension {}",
                p.len(),
                self.ambient_dim()
            )));
        }
        let ones = vec![Rational::one(); self.vertices.len()];
        let system = self.vertex_matrix().stack_row(&ones)?;
        let rhs: RationalVector = p.iter().cloned().chain([Rational::one()]).collect();
        Ok(solve_consistent(&system, &rhs)?.map(|v| v.entries().to_vec()))
    }
}

/// A nonempty interval of rationals; `lo == hi` is allowed only with both
/// ends closed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        let ok = lo < hi || (lo == hi && lo_closed && hi_closed);
        if !ok {
            return Err(Error::Domain(format!(
                "empty interval {}",
                Interval {
                    lo,
                    hi,
                    lo_closed,
                    hi_closed
                }
            )));
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    pub fn closed_open(lo: Rational, hi: Rational) -> Self {
        Self::new(lo, hi, true, false).expect("lo < hi")
    }

    pub fn open_closed(lo: Rational, hi: Rational) -> Self {
        Self::new(lo, hi, false, true).expect("lo < hi")
    }

    pub fn open(lo: Rational, hi: Rational) -> Self {
        Self::new(lo, hi, false, false).expect("lo < hi")
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
            lo_closed: true,
            hi_closed: true,
        }
    }

    /// Whether every element of the interval is smaller than `x`.
    pub fn below(&self, x: &Rational) -> bool {
        self.hi < *x || (self.hi == *x && !self.hi_closed)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed {
            *x >= self.lo
        } else {
            *x > self.lo
        };
        let below = if self.hi_closed {
            *x <= self.hi
        } else {
            *x < self.hi
        };
        above && below
    }

    /// Some point of the interval: the midpoint, or the point itself.
    pub fn representative(&self) -> Rational {
        Rational::midpoint(&self.lo, &self.hi)
    }

    /// Image under `x ↦ c - x`.
    pub fn reflect(&self, c: &Rational) -> Interval {
        Interval {
            lo: c - &self.hi,
            hi: c - &self.lo,
            lo_closed: self.hi_closed,
            hi_closed: self.lo_closed,
        }
    }

    /// Image under `x ↦ x + c`.
    pub fn shift(&self, c: &Rational) -> Interval {
        Interval {
            lo: &self.lo + c,
            hi: &self.hi + c,
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Splits a line segment at sorted distinct breakpoints into alternating
/// points and open gaps. Index `2i` is the point `e_i`, `2i+1` the gap
/// `(e_i, e_{i+1})`.
pub(crate) struct Atoms<'a> {
    pub ends: &'a [Rational],
}

impl Atoms<'_> {
    pub fn len(&self) -> usize {
        2 * self.ends.len() - 1
    }

    pub fn interval(&self, idx: usize) -> Interval {
        if idx.is_multiple_of(2) {
            Interval::point(self.ends[idx / 2].clone())
        } else {
            Interval::open(self.ends[idx / 2].clone(), self.ends[idx / 2 + 1].clone())
        }
    }

    fn position(&self, x: &Rational) -> usize {
        self.ends
            .binary_search(x)
            .expect("endpoint is a breakpoint")
    }

    /// Atom index range `[first, last]` covered by `iv`, or `None` if the
    /// interval covers nothing.
    pub fn span(&self, iv: &Interval) -> Option<(usize, usize)> {
        let lo = 2 * self.position(&iv.lo) + usize::from(!iv.lo_closed);
        let hi = (2 * self.position(&iv.hi)).checked_sub(usize::from(!iv.hi_closed))?;
        (lo <= hi).then_some((lo, hi))
    }
}

/// Sorts and deduplicates.
pub(crate) fn sorted_unique(mut xs: Vec<Rational>) -> Vec<Rational> {
    xs.sort();
    xs.dedup();
    xs
}

/// Joins a contiguous run of atoms `first..=last` into one interval.
pub(crate) fn join(first: &Interval, last: &Interval) -> Interval {
    Interval {
        lo: first.lo.clone(),
        hi: last.hi.clone(),
        lo_closed: first.lo_closed,
        hi_closed: last.hi_closed,
    }
}

/// A nonnegative integer step function: finitely many disjoint intervals
/// carrying positive counts, zero elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction {
    domain: Interval,
    pieces: Vec<(Interval, u64)>,
}

impl StepFunction {
    /// Canonical step function `Σ 1_I` over the given intervals.
    pub fn from_indicators(domain: Interval, intervals: &[Interval]) -> Self {
        Self::from_weighted(domain, intervals.iter().map(|iv| (iv, 1)))
    }

    /// Canonical step function `Σ w·1_I`; every interval must lie in the
    /// domain.
    pub fn from_counts(domain: Interval, pieces: &[(Interval, u64)]) -> Result<Self> {
        let inside = |iv: &Interval| {
            let lo_ok =
                domain.lo < iv.lo || (domain.lo == iv.lo && (domain.lo_closed || !iv.lo_closed));
            let hi_ok =
                iv.hi < domain.hi || (domain.hi == iv.hi && (domain.hi_closed || !iv.hi_closed));
            lo_ok && hi_ok
        };
        if let Some((iv, _)) = pieces.iter().find(|(iv, _)| !inside(iv)) {
            return Err(Error::Domain(format!(
                "piece {iv} lies outside the domain {domain}"
            )));
        }
        Ok(Self::from_weighted(
            domain.clone(),
            pieces.iter().map(|(iv, w)| (iv, *w)),
        ))
    }

    fn from_weighted<'a>(
        domain: Interval,
        intervals: impl Iterator<Item = (&'a Interval, u64)> + Clone,
    ) -> Self {
        let ends = sorted_unique(
            intervals
                .clone()
                .flat_map(|(iv, _)| [iv.lo.clone(), iv.hi.clone()])
                .collect(),
        );
        if ends.is_empty() {
            return StepFunction {
                domain,
                pieces: Vec::new(),
            };
        }
        let atoms = Atoms { ends: &ends };
        let mut diff = vec![0i128; atoms.len() + 1];
        for (iv, w) in intervals {
            if let Some((a, b)) = atoms.span(iv) {
                diff[a] += i128::from(w);
                diff[b + 1] -= i128::from(w);
            }
        }
        let mut pieces: Vec<(Interval, u64)> = Vec::new();
        let mut run: Option<(usize, u64)> = None;
        let mut level = 0i128;
        for (idx, delta) in diff.iter().take(atoms.len()).enumerate() {
            level += delta;
            let count = u64::try_from(level).expect("counts are nonnegative");
            match run {
                Some((_, c)) if c == count => {}
                _ => {
                    if let Some((start, c)) = run.take() {
                        if c > 0 {
                            pieces
                                .push((join(&atoms.interval(start), &atoms.interval(idx - 1)), c));
                        }
                    }
                    run = Some((idx, count));
                }
            }
        }
        if let Some((start, c)) = run {
            if c > 0 {
                pieces.push((
                    join(&atoms.interval(start), &atoms.interval(atoms.len() - 1)),
                    c,
                ));
            }
        }
        StepFunction { domain, pieces }
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn pieces(&self) -> &[(Interval, u64)] {
        &self.pieces
    }

    /// Value at `level`; zero off the pieces.
    pub fn eval(&self, level: &Rational) -> u64 {
        if !self.domain.contains(level) {
            return 0;
        }
        let idx = self.pieces.partition_point(|(iv, _)| iv.below(level));
        match self.pieces.get(idx) {
            Some((iv, c)) if iv.contains(level) => *c,
            _ => 0,
        }
    }

    /// All piece endpoints, sorted and deduplicated.
    pub fn jump_points(&self) -> Vec<Rational> {
        sorted_unique(
            self.pieces
                .iter()
                .flat_map(|(iv, _)| [iv.lo.clone(), iv.hi.clone()])
                .collect(),
        )
    }

    /// The step function `ℓ ↦ f(c - ℓ)`.
    pub fn reflect(&self, c: &Rational) -> StepFunction {
        StepFunction {
            domain: self.domain.reflect(c),
            pieces: self
                .pieces
                .iter()
                .rev()
                .map(|(iv, n)| (iv.reflect(c), *n))
                .collect(),
        }
    }
}

/// Value of a step function at `level`.
pub fn step_eval(f: &StepFunction, level: &Rational) -> u64 {
    f.eval(level)
}

/// `#D(σ, ℓ)` (closed) or `#D̄(σ, ℓ)` (open) as a step function of `ℓ`.
///
/// The open function is the reflection `ℓ ↦ (n+1)d − ℓ` of the closed one.
pub fn determined_sets(simplex: &RationalSimplex, kind: Kind, budget: u64) -> Result<StepFunction> {
    let closed = enumerate_levels(simplex, BoxSide::HalfOpenAbove, budget)?;
    Ok(match kind {
        Kind::Closed => closed,
        Kind::Open => closed.reflect(&simplex.level_span()),
    })
}

/// `#D̄(σ, ℓ)` computed straight from `0 < v_j ≤ d`, without reflection.
pub fn determined_sets_direct_open(simplex: &RationalSimplex, budget: u64) -> Result<StepFunction> {
    enumerate_levels(simplex, BoxSide::HalfOpenBelow, budget)
}

/// Which side of the coefficient box `[0, d]` is excluded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BoxSide {
    /// `0 ≤ u < d`
    HalfOpenAbove,
    /// `0 < u ≤ d`
    HalfOpenBelow,
}

/// Exact fraction over `i128` used in the enumeration hot loop.
#[derive(Clone, Copy, Debug)]
struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    fn new(num: i128, den: i128) -> Frac {
        if den < 0 {
            Frac {
                num: -num,
                den: -den,
            }
        } else {
            Frac { num, den }
        }
    }

    fn cmp(self, other: Frac) -> std::cmp::Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }

    fn to_rational(self) -> Rational {
        Rational::new(self.num, self.den).expect("positive denominator")
    }
}

/// One bound on the level; `None` means unbounded.
#[derive(Clone, Copy, Debug)]
struct Bound {
    at: Frac,
    closed: bool,
}

fn tighter_lower(a: Option<Bound>, b: Bound) -> Option<Bound> {
    match a {
        None => Some(b),
        Some(a) => Some(match a.at.cmp(b.at) {
            std::cmp::Ordering::Less => b,
            std::cmp::Ordering::Greater => a,
            std::cmp::Ordering::Equal => Bound {
                at: a.at,
                closed: a.closed && b.closed,
            },
        }),
    }
}

fn tighter_upper(a: Option<Bound>, b: Bound) -> Option<Bound> {
    match a {
        None => Some(b),
        Some(a) => Some(match a.at.cmp(b.at) {
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Equal => Bound {
                at: a.at,
                closed: a.closed && b.closed,
            },
        }),
    }
}

fn to_i128(x: BigInt) -> Result<i128> {
    x.to_i128()
        .filter(|v| v.abs() < (1i128 << 60))
        .ok_or(Error::Overflow)
}

/// Integer data for the map from pivot coordinates of `b` to the
/// coefficient vector `u`: `D·u_i = Σ_k coef[i][k]·b_P[k] + slope[i]·ℓ`.
struct LevelSystem {
    /// Nonpivot rows `b_i = (Σ_k rows[k]·b_P[k]) / den`; must be integral.
    completions: Vec<(Vec<i128>, i128)>,
    coef: Vec<Vec<i128>>,
    slope: Vec<i128>,
    scale: i128,
    /// `d·scale` as a fraction.
    cap: Frac,
    /// Whether the level is determined by `b` (linearly independent vertices).
    fixed_level: bool,
    ranges: Vec<(i128, i128)>,
}

impl LevelSystem {
    fn build(simplex: &RationalSimplex) -> Result<LevelSystem> {
        let a = simplex.vertex_matrix();
        let d = simplex.denominator();
        let n1 = simplex.dim() + 1;
        let big_n = simplex.ambient_dim();

        // pivot rows: an independent row set spanning the row space of A
        let (_, pivot_rows) = a.transpose().rref();
        let r = pivot_rows.len();
        let a_p =
            RationalMatrix::from_rows(pivot_rows.iter().map(|&i| a.row(i).to_vec()).collect())?;

        // K: b = K·b_P for every b in Col A
        let a_pt = a_p.transpose();
        let mut k = RationalMatrix::zeros(big_n, r);
        for i in 0..big_n {
            if let Some(pos) = pivot_rows.iter().position(|&p| p == i) {
                k[(i, pos)] = Rational::one();
                continue;
            }
            if r == 0 {
                // A = 0, so b = 0
                continue;
            }
            let target: RationalVector = a.row(i).iter().cloned().collect();
            let coeffs = solve_consistent(&a_pt, &target)?.expect("row lies in the row space");
            for pos in 0..r {
                k[(i, pos)] = coeffs[pos].clone();
            }
        }

        let fixed_level = r == n1;
        let (g, h): (RationalMatrix, Vec<Rational>) = if fixed_level {
            (left_inverse(&a)?, vec![Rational::zero(); n1])
        } else {
            let ones = vec![Rational::one(); n1];
            let lb = left_inverse(&a.stack_row(&ones)?)?;
            let mut g = RationalMatrix::zeros(n1, big_n);
            for i in 0..n1 {
                for j in 0..big_n {
                    g[(i, j)] = lb[(i, j)].clone();
                }
            }
            (g, (0..n1).map(|i| lb[(i, big_n)].clone()).collect())
        };
        let m = g.mul(&k)?;

        let scale_big = (0..n1)
            .flat_map(|i| (0..r).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].denom())
            .chain(h.iter().map(|x| x.denom()))
            .fold(BigInt::one(), |acc, x| acc.lcm(&x));
        let scale_q = Rational::from(scale_big.clone());
        let coef = (0..n1)
            .map(|i| {
                (0..r)
                    .map(|j| to_i128((&m[(i, j)] * &scale_q).numer()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let slope = h
            .iter()
            .map(|x| to_i128((x * &scale_q).numer()))
            .collect::<Result<Vec<_>>>()?;

        let completions = (0..big_n)
            .filter(|i| !pivot_rows.contains(i))
            .map(|i| {
                let den = (0..r).fold(BigInt::one(), |acc, j| acc.lcm(&k[(i, j)].denom()));
                let den_q = Rational::from(den.clone());
                let row = (0..r)
                    .map(|j| to_i128((&k[(i, j)] * &den_q).numer()))
                    .collect::<Result<Vec<_>>>()?;
                Ok((row, to_i128(den)?))
            })
            .collect::<Result<Vec<_>>>()?;

        let cap_q = d * &scale_q;
        let cap = Frac::new(to_i128(cap_q.numer())?, to_i128(cap_q.denom())?);

        let ranges = pivot_rows
            .iter()
            .map(|&i| {
                let (mut lo, mut hi) = (Rational::zero(), Rational::zero());
                for x in a.row(i) {
                    let v = x * d;
                    if v.is_negative() {
                        lo += v;
                    } else {
                        hi += v;
                    }
                }
                Ok((to_i128(lo.ceil())?, to_i128(hi.floor())?))
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(LevelSystem {
            completions,
            coef,
            slope,
            scale: to_i128(scale_big.clone())?,
            cap,
            fixed_level,
            ranges,
        })
    }

    fn box_size(&self) -> u128 {
        self.ranges
            .iter()
            .map(|&(lo, hi)| u128::try_from((hi - lo + 1).max(0)).unwrap_or(0))
            .product()
    }

    /// Level interval occupied by the lattice point with pivot coordinates
    /// `bp`, if any.
    fn interval_for(&self, bp: &[i128], side: BoxSide) -> Option<Interval> {
        for (row, den) in &self.completions {
            let v: i128 = row.iter().zip(bp).map(|(a, b)| a * b).sum();
            if v % den != 0 {
                return None;
            }
        }
        let zero = Frac::new(0, 1);
        let (lo_strict, hi_strict) = match side {
            BoxSide::HalfOpenAbove => (false, true),
            BoxSide::HalfOpenBelow => (true, false),
        };
        // 0 ≤ g + s·ℓ < cap  (or 0 < g + s·ℓ ≤ cap), all scaled by `scale`
        let within = |x: Frac| {
            let above = match x.cmp(zero) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Equal => !lo_strict,
                std::cmp::Ordering::Less => false,
            };
            let below = match x.cmp(self.cap) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Equal => !hi_strict,
                std::cmp::Ordering::Greater => false,
            };
            above && below
        };

        if self.fixed_level {
            let mut total = 0i128;
            for coef in &self.coef {
                let g: i128 = coef.iter().zip(bp).map(|(a, b)| a * b).sum();
                if !within(Frac::new(g, 1)) {
                    return None;
                }
                total += g;
            }
            return Some(Interval::point(Frac::new(total, self.scale).to_rational()));
        }

        let mut lower: Option<Bound> = None;
        let mut upper: Option<Bound> = None;
        for (coef, &s) in self.coef.iter().zip(&self.slope) {
            let g: i128 = coef.iter().zip(bp).map(|(a, b)| a * b).sum();
            if s == 0 {
                if !within(Frac::new(g, 1)) {
                    return None;
                }
                continue;
            }
            // g + s·ℓ ≥ 0  ⇔  ℓ ≥ -g/s (s > 0)  or  ℓ ≤ -g/s (s < 0)
            let at_zero = Bound {
                at: Frac::new(-g, s),
                closed: !lo_strict,
            };
            // g + s·ℓ ≤ cap  ⇔  ℓ ≤ (cap - g)/s (s > 0)  or  ℓ ≥ (cap - g)/s (s < 0)
            let at_cap = Bound {
                at: Frac::new(self.cap.num - g * self.cap.den, s * self.cap.den),
                closed: !hi_strict,
            };
            if s > 0 {
                lower = tighter_lower(lower, at_zero);
                upper = tighter_upper(upper, at_cap);
            } else {
                lower = tighter_lower(lower, at_cap);
                upper = tighter_upper(upper, at_zero);
            }
        }
        let (lower, upper) = (
            lower.expect("ℓ is constrained"),
            upper.expect("ℓ is constrained"),
        );
        match lower.at.cmp(upper.at) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Equal if !(lower.closed && upper.closed) => None,
            _ => Some(Interval {
                lo: lower.at.to_rational(),
                hi: upper.at.to_rational(),
                lo_closed: lower.closed,
                hi_closed: upper.closed,
            }),
        }
    }
}

fn enumerate_levels(simplex: &RationalSimplex, side: BoxSide, budget: u64) -> Result<StepFunction> {
    let system = LevelSystem::build(simplex)?;
    let size = system.box_size();
    if size > u128::from(budget) {
        return Err(Error::BudgetExceeded { size, budget });
    }

    let intervals: Vec<Interval> = match system.ranges.split_first() {
        None => system.interval_for(&[], side).into_iter().collect(),
        Some((&(lo0, hi0), rest)) => (lo0..=hi0)
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut found = Vec::new();
                let mut bp: Vec<i128> = std::iter::once(first)
                    .chain(rest.iter().map(|&(lo, _)| lo))
                    .collect();
                if rest.iter().any(|&(lo, hi)| lo > hi) {
                    return found.into_iter();
                }
                loop {
                    if let Some(iv) = system.interval_for(&bp, side) {
                        found.push(iv);
                    }
                    // odometer over the remaining coordinates
                    let mut pos = rest.len();
                    loop {
                        if pos == 0 {
                            return found.into_iter();
                        }
                        let (lo, hi) = rest[pos - 1];
                        if bp[pos] < hi {
                            bp[pos] += 1;
                            break;
                        }
                        bp[pos] = lo;
                        pos -= 1;
                    }
                }
            })
            .collect(),
    };

    let span = simplex.level_span();
    let domain = match side {
        BoxSide::HalfOpenAbove => Interval::closed_open(Rational::zero(), span),
        BoxSide::HalfOpenBelow => Interval::open_closed(Rational::zero(), span),
    };
    Ok(StepFunction::from_indicators(domain, &intervals))
}

/// Per-level brute force straight from the definition: enumerate every
/// candidate `b` in the signed box and solve `[A; 1ᵀ]·u = (b, ℓ)` exactly.
#[cfg(test)]
pub(crate) fn brute_force_level(simplex: &RationalSimplex, level: &Rational, kind: Kind) -> u64 {
    let a = simplex.vertex_matrix();
    let d = simplex.denominator();
    let n1 = simplex.dim() + 1;
    let system = a.stack_row(&vec![Rational::one(); n1]).unwrap();
    let ranges: Vec<(i64, i64)> = (0..a.rows())
        .map(|i| {
            let lo: Rational = a
                .row(i)
                .iter()
                .map(|x| x * d)
                .filter(Rational::is_negative)
                .sum();
            let hi: Rational = a
                .row(i)
                .iter()
                .map(|x| x * d)
                .filter(Rational::is_positive)
                .sum();
            (lo.ceil().to_i64().unwrap(), hi.floor().to_i64().unwrap())
        })
        .collect();
    let mut count = 0;
    let mut b: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    'outer: loop {
        let mut rhs: Vec<Rational> = b.iter().map(|&x| Rational::from(x)).collect();
        rhs.push(level.clone());
        if let Some(u) = solve_consistent(&system, &RationalVector::new(rhs)).unwrap() {
            let ok = u.iter().all(|x| match kind {
                Kind::Closed => !x.is_negative() && x < d,
                Kind::Open => x.is_positive() && x <= d,
            });
            if ok {
                count += 1;
            }
        }
        let mut pos = b.len();
        loop {
            if pos == 0 {
                break 'outer;
            }
            if b[pos - 1] < ranges[pos - 1].1 {
                b[pos - 1] += 1;
                break;
            }
            b[pos - 1] = ranges[pos - 1].0;
            pos -= 1;
        }
    }
    count
}
