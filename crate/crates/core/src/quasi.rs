//! Periodic piecewise polynomials and real Ehrhart quasi-polynomials.
//!
//! A coefficient function `c_k` is stored over one period window as a
//! finite partition into intervals (single points allowed), each carrying
//! an exact polynomial in the reduced argument `t̄ ∈ window`. Evaluating at
//! any rational `t` first reduces `t` into the window by whole periods.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{rational_lcm, Rational};
use crate::error::{Error, Result};
use crate::poly::{binomial_shifted, factorial, symmetric_poly_in_t, Polynomial};
use crate::simplex::{
    determined_sets, join, sorted_unique, Atoms, Interval, Kind, RationalSimplex, StepFunction,
};

/// One period window: `[0, ρ)` for closed counts, `(0, ρ]` for open ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Window {
    #[serde(rename = "[0,p)")]
    ClosedOpen,
    #[serde(rename = "(0,p]")]
    OpenClosed,
}

impl Window {
    pub fn for_kind(kind: Kind) -> Window {
        match kind {
            Kind::Closed => Window::ClosedOpen,
            Kind::Open => Window::OpenClosed,
        }
    }

    /// The window `[0, ρ)` or `(0, ρ]` as an interval.
    pub fn interval(self, period: &Rational) -> Interval {
        match self {
            Window::ClosedOpen => Interval::closed_open(Rational::zero(), period.clone()),
            Window::OpenClosed => Interval::open_closed(Rational::zero(), period.clone()),
        }
    }

    /// `t - m·ρ` landing in the window.
    pub fn reduce(self, t: &Rational, period: &Rational) -> Rational {
        let ratio = t / period;
        let whole = match self {
            Window::ClosedOpen => Rational::from(ratio.floor()),
            Window::OpenClosed => Rational::from(ratio.ceil()) - Rational::one(),
        };
        t - &(whole * period)
    }

    /// The atoms of the window cut at `ends` (which must contain `0` and `ρ`).
    fn atoms(self, ends: &[Rational]) -> Vec<Interval> {
        let atoms = Atoms { ends };
        let range = match self {
            Window::ClosedOpen => 0..atoms.len() - 1,
            Window::OpenClosed => 1..atoms.len(),
        };
        range.map(|i| atoms.interval(i)).collect()
    }
}

/// A periodic function given by polynomials on a partition of one period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicPiecewisePolynomial {
    period: Rational,
    window: Window,
    pieces: Vec<Piece>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub interval: Interval,
    pub poly: Polynomial,
}

impl PeriodicPiecewisePolynomial {
    /// Builds from consecutive atoms partitioning the window, merging
    /// neighbours that carry the same polynomial.
    pub fn from_atoms(
        period: Rational,
        window: Window,
        atoms: Vec<(Interval, Polynomial)>,
    ) -> Self {
        let mut pieces: Vec<Piece> = Vec::new();
        for (interval, poly) in atoms {
            match pieces.last_mut() {
                Some(last) if last.poly == poly => {
                    last.interval = join(&last.interval, &interval);
                }
                _ => pieces.push(Piece { interval, poly }),
            }
        }
        PeriodicPiecewisePolynomial {
            period,
            window,
            pieces,
        }
    }

    /// Validates an externally supplied partition.
    pub fn from_pieces(period: Rational, window: Window, pieces: Vec<Piece>) -> Result<Self> {
        if !period.is_positive() {
            return Err(Error::Domain("period must be positive".into()));
        }
        let whole = window.interval(&period);
        let mut expect_lo = (whole.lo.clone(), whole.lo_closed);
        for p in &pieces {
            let iv = &p.interval;
            if iv.lo != expect_lo.0 || iv.lo_closed != expect_lo.1 {
                return Err(Error::Domain(format!(
                    "pieces do not partition the window at {iv}"
                )));
            }
            expect_lo = (iv.hi.clone(), !iv.hi_closed);
        }
        if expect_lo != (whole.hi.clone(), !whole.hi_closed) {
            return Err(Error::Domain("pieces do not cover the window".into()));
        }
        Ok(PeriodicPiecewisePolynomial {
            period,
            window,
            pieces,
        })
    }

    pub fn constant(period: Rational, window: Window, value: Rational) -> Self {
        let interval = window.interval(&period);
        PeriodicPiecewisePolynomial {
            period,
            window,
            pieces: vec![Piece {
                interval,
                poly: Polynomial::constant(value),
            }],
        }
    }

    pub fn period(&self) -> &Rational {
        &self.period
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Constant functions are periodic for every period.
    pub fn is_constant(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].poly.degree().unwrap_or(0) == 0
    }

    pub fn reduce(&self, t: &Rational) -> Rational {
        self.window.reduce(t, &self.period)
    }

    /// The piece whose interval contains the reduced argument.
    pub fn piece_at(&self, reduced: &Rational) -> &Piece {
        let idx = self.pieces.partition_point(|p| p.interval.below(reduced));
        &self.pieces[idx]
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let r = self.reduce(t);
        self.piece_at(&r).poly.eval(&r)
    }

    /// Piece endpoints plus the window ends.
    pub fn breakpoints(&self) -> Vec<Rational> {
        sorted_unique(
            self.pieces
                .iter()
                .flat_map(|p| [p.interval.lo.clone(), p.interval.hi.clone()])
                .chain([Rational::zero(), self.period.clone()])
                .collect(),
        )
    }

    /// Breakpoints of this function replicated over `[0, period]`.
    fn breakpoints_over(&self, period: &Rational) -> Result<Vec<Rational>> {
        if self.is_constant() {
            return Ok(vec![Rational::zero(), period.clone()]);
        }
        let copies = period / &self.period;
        if !copies.is_integer() || !copies.is_positive() {
            return Err(Error::Domain(format!(
                "period {period} is not a multiple of {}",
                self.period
            )));
        }
        let copies = copies.to_i64().ok_or(Error::Overflow)?;
        let own = self.breakpoints();
        Ok((0..copies)
            .flat_map(|m| {
                let shift = &self.period * Rational::from(m);
                own.iter().map(move |b| b + &shift).collect::<Vec<_>>()
            })
            .collect())
    }

    /// Rewrites the function over a new period (a multiple of the current
    /// one) and window, with the canonical merged partition.
    pub fn rewindow(&self, period: &Rational, window: Window) -> Result<Self> {
        Self::combine(&[(self, Rational::one())], period, window)
    }

    /// `Σ w_i·f_i` expressed over `period` and `window`.
    pub fn combine(
        terms: &[(&PeriodicPiecewisePolynomial, Rational)],
        period: &Rational,
        window: Window,
    ) -> Result<Self> {
        let mut ends = vec![Rational::zero(), period.clone()];
        for (f, _) in terms {
            ends.extend(f.breakpoints_over(period)?);
        }
        let ends = sorted_unique(ends);
        let mut sweeps: Vec<Sweep> = terms.iter().map(|(f, _)| Sweep::new(f, period)).collect();
        let atoms = window
            .atoms(&ends)
            .into_iter()
            .map(|atom| {
                let rep = atom.representative();
                let mut poly = Polynomial::zero();
                for (sweep, (_, w)) in sweeps.iter_mut().zip(terms) {
                    let p = sweep.poly_at(&rep);
                    if p.is_zero() {
                        continue;
                    }
                    poly = if w.is_one() {
                        &poly + p
                    } else {
                        &poly + &p.scale(w)
                    };
                }
                (atom, poly)
            })
            .collect();
        Ok(Self::from_atoms(period.clone(), window, atoms))
    }

    /// Smallest common period of several functions (constants adapt).
    pub fn common_period<'a>(
        funcs: impl IntoIterator<Item = &'a PeriodicPiecewisePolynomial>,
        fallback: &Rational,
    ) -> Result<Rational> {
        let mut acc: Option<Rational> = None;
        for f in funcs {
            if f.is_constant() {
                continue;
            }
            acc = Some(match acc {
                None => f.period.clone(),
                Some(p) => rational_lcm(&p, &f.period)?,
            });
        }
        Ok(acc.unwrap_or_else(|| fallback.clone()))
    }

    /// Equality as functions on the rationals, independent of period and
    /// window representation.
    pub fn same_function(&self, other: &PeriodicPiecewisePolynomial) -> Result<bool> {
        let period = Self::common_period([self, other], &self.period)?;
        Ok(self.rewindow(&period, Window::ClosedOpen)?
            == other.rewindow(&period, Window::ClosedOpen)?)
    }

    /// Polynomials of `self` and `other` on the atoms of their common
    /// refinement, over a common period.
    pub fn aligned<'a>(
        &'a self,
        other: &'a PeriodicPiecewisePolynomial,
    ) -> Result<Vec<(Interval, Polynomial, Polynomial)>> {
        let period = Self::common_period([self, other], &self.period)?;
        let mut ends = vec![Rational::zero(), period.clone()];
        ends.extend(self.breakpoints_over(&period)?);
        ends.extend(other.breakpoints_over(&period)?);
        let ends = sorted_unique(ends);
        let mut mine = Sweep::new(self, &period);
        let mut theirs = Sweep::new(other, &period);
        Ok(self
            .window
            .atoms(&ends)
            .into_iter()
            .map(|atom| {
                let rep = atom.representative();
                let a = mine.poly_at(&rep).clone();
                let b = theirs.poly_at(&rep).clone();
                (atom, a, b)
            })
            .collect())
    }
}

/// Reads a periodic function at increasing points of `[0, span]`, with
/// the polynomial of every visited piece written in the unreduced variable.
struct Sweep<'a> {
    f: &'a PeriodicPiecewisePolynomial,
    /// `(piece index, whole periods m)` for consecutive shifted pieces.
    entries: Vec<(usize, i64)>,
    /// Right end of each shifted piece, computed on first visit.
    ends: Vec<Option<(Rational, bool)>>,
    cache: Vec<Option<Polynomial>>,
    pos: usize,
}

impl<'a> Sweep<'a> {
    fn new(f: &'a PeriodicPiecewisePolynomial, span: &Rational) -> Sweep<'a> {
        let copies = if f.is_constant() {
            0
        } else {
            (span / &f.period).ceil().to_i64().unwrap_or(i64::MAX - 1)
        };
        let entries: Vec<(usize, i64)> = (-1..=copies)
            .flat_map(|m| (0..f.pieces.len()).map(move |i| (i, m)))
            .collect();
        let cache = vec![None; entries.len()];
        let ends = vec![None; entries.len()];
        Sweep {
            f,
            entries,
            ends,
            cache,
            pos: 0,
        }
    }

    fn poly_at(&mut self, x: &Rational) -> &Polynomial {
        if self.f.is_constant() {
            return &self.f.pieces[0].poly;
        }
        let period = &self.f.period;
        loop {
            let (i, m) = self.entries[self.pos];
            let (hi, hi_closed) = self.ends[self.pos].get_or_insert_with(|| {
                let iv = &self.f.pieces[i].interval;
                (&iv.hi + &(period * Rational::from(m)), iv.hi_closed)
            });
            if *hi > *x || (*hi == *x && *hi_closed) {
                break;
            }
            self.pos += 1;
        }
        let (i, m) = self.entries[self.pos];
        let poly = &self.f.pieces[i].poly;
        self.cache[self.pos].get_or_insert_with(|| {
            if m == 0 {
                poly.clone()
            } else {
                poly.shift(&-(period * Rational::from(m)))
            }
        })
    }
}

/// `L(t) = Σ_k c_k(t)·t^k` with periodic piecewise-polynomial `c_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    kind: Kind,
    dim: usize,
    period: Rational,
    coeffs: Vec<PeriodicPiecewisePolynomial>,
}

impl QuasiPolynomial {
    pub fn new(kind: Kind, dim: usize, coeffs: Vec<PeriodicPiecewisePolynomial>) -> Result<Self> {
        if coeffs.len() != dim + 1 {
            return Err(Error::Shape(format!(
                "dimension {dim} needs {} coefficient functions, got {}",
                dim + 1,
                coeffs.len()
            )));
        }
        let period = coeffs[0].period().clone();
        let window = Window::for_kind(kind);
        if coeffs
            .iter()
            .any(|c| c.period() != &period || c.window() != window)
        {
            return Err(Error::Domain(
                "coefficient functions must share one period and window".into(),
            ));
        }
        Ok(QuasiPolynomial {
            kind,
            dim,
            period,
            coeffs,
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn period(&self) -> &Rational {
        &self.period
    }

    pub fn window(&self) -> Window {
        Window::for_kind(self.kind)
    }

    pub fn coeffs(&self) -> &[PeriodicPiecewisePolynomial] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &PeriodicPiecewisePolynomial {
        &self.coeffs[k]
    }

    /// `L(t)` at any rational `t`.
    pub fn eval(&self, t: &Rational) -> Rational {
        let mut power = Rational::one();
        let mut total = Rational::zero();
        for c in &self.coeffs {
            total += c.eval(t) * &power;
            power *= t;
        }
        total
    }

    /// Union of all coefficient breakpoints in `[0, ρ]`.
    pub fn breakpoints(&self) -> Vec<Rational> {
        sorted_unique(self.coeffs.iter().flat_map(|c| c.breakpoints()).collect())
    }

    /// Equality as functions, coefficient by coefficient.
    pub fn same_function(&self, other: &QuasiPolynomial) -> Result<bool> {
        if self.dim != other.dim {
            return Ok(false);
        }
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            if !a.same_function(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Evaluates a quasi-polynomial.
pub fn eval_quasi(q: &QuasiPolynomial, t: &Rational) -> Rational {
    q.eval(t)
}

/// Coefficient functions `c_k(σ, ·)` (closed) or `c_k(σ̊, ·)` (open) of a
/// simplex, built exactly from its determined-set step function.
pub fn simplex_coefficients(
    simplex: &RationalSimplex,
    kind: Kind,
    budget: u64,
) -> Result<QuasiPolynomial> {
    let steps = determined_sets(simplex, kind, budget)?;
    Ok(coefficients_from_steps(simplex, kind, &steps))
}

/// Same as [`simplex_coefficients`] with the step function already known.
pub fn coefficients_from_steps(
    simplex: &RationalSimplex,
    kind: Kind,
    steps: &StepFunction,
) -> QuasiPolynomial {
    let n = simplex.dim();
    let d = simplex.denominator().clone();
    let window = Window::for_kind(kind);

    // level index j and the level offset `d·j + shift` for t̄ in the window
    let (js, level_shift): (Vec<i64>, Rational) = match kind {
        Kind::Closed => ((0..=n as i64).collect(), Rational::zero()),
        Kind::Open => ((1..=n as i64 + 1).collect(), -d.clone()),
    };
    let level_base = |j: i64| &d * Rational::from(j) + &level_shift;

    let mut ends = vec![Rational::zero(), d.clone()];
    for e in steps.jump_points() {
        for &j in &js {
            let r = &e - &level_base(j);
            if !r.is_negative() && r <= d {
                ends.push(r);
            }
        }
    }
    let ends = sorted_unique(ends);

    // s_{n-k}(offsets_j + slope·t̄) for every (j, k); the argument of the
    // symmetric polynomial is l - j - t̄/d (closed) or l - j + 1 - t̄/d (open)
    let slope = -d.recip();
    let sym: Vec<Vec<Polynomial>> = js
        .iter()
        .map(|&j| {
            let offsets: Vec<Rational> = (1..=n as i64)
                .map(|l| match kind {
                    Kind::Closed => Rational::from(l - j),
                    Kind::Open => Rational::from(l - j + 1),
                })
                .collect();
            (0..=n)
                .map(|k| symmetric_poly_in_t(n - k, &offsets, &slope).expect("n - k ≤ n"))
                .collect()
        })
        .collect();
    let scales: Vec<Rational> = (0..=n)
        .map(|k| (factorial(n) * d.pow(k as u32)).recip())
        .collect();

    let mut by_counts: HashMap<Vec<u64>, Vec<Polynomial>> = HashMap::new();
    let mut per_k: Vec<Vec<(Interval, Polynomial)>> = vec![Vec::new(); n + 1];
    for atom in window.atoms(&ends) {
        let rep = atom.representative();
        let counts: Vec<u64> = js
            .iter()
            .map(|&j| steps.eval(&(level_base(j) + &rep)))
            .collect();
        let polys = by_counts.entry(counts).or_insert_with_key(|counts| {
            (0..=n)
                .map(|k| {
                    counts
                        .iter()
                        .zip(&sym)
                        .filter(|(c, _)| **c > 0)
                        .fold(Polynomial::zero(), |acc, (c, s)| {
                            &acc + &s[k].scale(&Rational::from(*c as i64))
                        })
                        .scale(&scales[k])
                })
                .collect()
        });
        for (k, poly) in polys.iter().enumerate() {
            per_k[k].push((atom.clone(), poly.clone()));
        }
    }
    let coeffs = per_k
        .into_iter()
        .map(|atoms| PeriodicPiecewisePolynomial::from_atoms(d.clone(), window, atoms))
        .collect();
    QuasiPolynomial::new(kind, n, coeffs).expect("coefficients share the window")
}

/// `L(σ, t)` or `L(σ̊, t)` from the finite binomial sum over levels, valid
/// for every rational `t` (negative included).
pub fn eval_binomial_formula(
    simplex: &RationalSimplex,
    t: &Rational,
    kind: Kind,
    budget: u64,
) -> Result<Rational> {
    let steps = determined_sets(simplex, kind, budget)?;
    Ok(binomial_sum(simplex, &steps, t, kind))
}

/// The binomial level sum with a precomputed step function.
pub fn binomial_sum(
    simplex: &RationalSimplex,
    steps: &StepFunction,
    t: &Rational,
    kind: Kind,
) -> Rational {
    let n = simplex.dim();
    let d = simplex.denominator();
    let ratio = t / d;
    // closed: a ∈ (t/d − n − 1, t/d];  open: b ∈ [t/d − n − 1, t/d)
    let top = match kind {
        Kind::Closed => Rational::from(ratio.floor()),
        Kind::Open => Rational::from(ratio.ceil()) - Rational::one(),
    };
    (0..=n as i64)
        .map(|i| {
            let a = &top - &Rational::from(i);
            let level = t - &(d * &a);
            let count = steps.eval(&level);
            if count == 0 {
                return Rational::zero();
            }
            binomial_shifted(&a, n) * Rational::from(count as i64)
        })
        .sum()
}

/// Piecewise derivative of one coefficient function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseDerivative {
    pub function: PeriodicPiecewisePolynomial,
    /// Single-point pieces where the derivative was copied from the piece
    /// on their right (cyclically).
    pub conventional_points: Vec<Rational>,
}

/// `d/dt c_k` on every piece; `k` must be below the dimension.
pub fn derivative_piecewise(q: &QuasiPolynomial, k: usize) -> Result<PiecewiseDerivative> {
    if k >= q.dim() {
        return Err(Error::Domain(format!(
            "derivative relation needs k < {}, got {k}",
            q.dim()
        )));
    }
    let c = q.coeff(k);
    let pieces = c.pieces();
    let mut conventional_points = Vec::new();
    let atoms = pieces
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if p.interval.is_point() && pieces.len() > 1 {
                conventional_points.push(p.interval.lo.clone());
                let next = &pieces[(i + 1) % pieces.len()];
                let mut poly = next.poly.derivative();
                if i + 1 == pieces.len() {
                    // wrapped around: the right neighbour lives one period on
                    poly = poly.shift(c.period());
                }
                (p.interval.clone(), poly)
            } else {
                (p.interval.clone(), p.poly.derivative())
            }
        })
        .collect();
    Ok(PiecewiseDerivative {
        function: PeriodicPiecewisePolynomial::from_atoms(c.period().clone(), c.window(), atoms),
        conventional_points,
    })
}

/// Outcome of the leading-coefficient test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingReport {
    pub ok: bool,
    /// `(k, piece interval, found degree, found leading coefficient)`.
    pub failures: Vec<(usize, Interval, Option<usize>, Rational)>,
}

/// Checks that every piece of `c_k` has degree `n − k` and leading
/// coefficient `(−1)^{n−k}·C(n,k)·vol`.
pub fn leading_coefficient_check(q: &QuasiPolynomial, vol: &Rational) -> LeadingReport {
    let n = q.dim();
    let mut failures = Vec::new();
    for (k, c) in q.coeffs().iter().enumerate() {
        let sign = if (n - k).is_multiple_of(2) {
            Rational::one()
        } else {
            -Rational::one()
        };
        let expected = sign * crate::poly::binomial(n, k) * vol;
        for p in c.pieces() {
            let ok = p.poly.degree() == Some(n - k) && p.poly.leading_coefficient() == expected;
            if !ok {
                failures.push((
                    k,
                    p.interval.clone(),
                    p.poly.degree(),
                    p.poly.leading_coefficient(),
                ));
            }
        }
    }
    LeadingReport {
        ok: failures.is_empty(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::DEFAULT_BUDGET;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn poly(cs: &[&str]) -> Polynomial {
        Polynomial::new(cs.iter().map(|s| q(s)).collect())
    }

    fn example() -> RationalSimplex {
        RationalSimplex::from_int_vertices(&[&[0, 0, 0], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1]])
            .unwrap()
    }

    #[test]
    fn window_reduction() {
        let p = q("3/2");
        assert_eq!(Window::ClosedOpen.reduce(&q("3"), &p), q("0"));
        assert_eq!(Window::OpenClosed.reduce(&q("3"), &p), q("3/2"));
        assert_eq!(Window::ClosedOpen.reduce(&q("-1/4"), &p), q("5/4"));
        assert_eq!(Window::OpenClosed.reduce(&q("0"), &p), q("3/2"));
    }

    #[test]
    fn example_closed_coefficients() {
        let quasi = simplex_coefficients(&example(), Kind::Closed, DEFAULT_BUDGET).unwrap();
        assert_eq!(quasi.period(), &q("1"));
        let lo = Interval::closed_open(q("0"), q("1/2"));
        let hi = Interval::closed_open(q("1/2"), q("1"));
        let expect = [
            (
                poly(&["1", "-5/3", "1", "-1/3"]),
                poly(&["1", "-13/6", "3/2", "-1/3"]),
            ),
            (poly(&["5/3", "-2", "1"]), poly(&["13/6", "-3", "1"])),
            (poly(&["1", "-1"]), poly(&["3/2", "-1"])),
        ];
        for (k, (a, b)) in expect.iter().enumerate() {
            let pieces = quasi.coeff(k).pieces();
            assert_eq!(pieces.len(), 2, "c_{k}");
            assert_eq!((&pieces[0].interval, &pieces[0].poly), (&lo, a), "c_{k}");
            assert_eq!((&pieces[1].interval, &pieces[1].poly), (&hi, b), "c_{k}");
        }
        let c3 = quasi.coeff(3).pieces();
        assert_eq!(c3.len(), 1);
        assert_eq!(c3[0].poly, poly(&["1/3"]));
    }

    #[test]
    fn example_open_coefficients() {
        let quasi = simplex_coefficients(&example(), Kind::Open, DEFAULT_BUDGET).unwrap();
        // displayed in x = ⟨t⟩ = t̄ − 1 for t̄ ∈ (0, 1]
        let in_x = |cs: &[&str]| poly(cs).shift(&q("-1"));
        let lo = Interval::open_closed(q("0"), q("1/2"));
        let hi = Interval::open_closed(q("1/2"), q("1"));
        let expect = [
            (
                in_x(&["-1", "-13/6", "-3/2", "-1/3"]),
                in_x(&["-1", "-5/3", "-1", "-1/3"]),
            ),
            (in_x(&["13/6", "3", "1"]), in_x(&["5/3", "2", "1"])),
            (in_x(&["-3/2", "-1"]), in_x(&["-1", "-1"])),
        ];
        for (k, (a, b)) in expect.iter().enumerate() {
            let pieces = quasi.coeff(k).pieces();
            assert_eq!(pieces.len(), 2, "c_{k}");
            assert_eq!((&pieces[0].interval, &pieces[0].poly), (&lo, a), "c_{k}");
            assert_eq!((&pieces[1].interval, &pieces[1].poly), (&hi, b), "c_{k}");
        }
        assert_eq!(quasi.coeff(3).pieces()[0].poly, poly(&["1/3"]));
    }

    #[test]
    fn example_values() {
        let closed = simplex_coefficients(&example(), Kind::Closed, DEFAULT_BUDGET).unwrap();
        let open = simplex_coefficients(&example(), Kind::Open, DEFAULT_BUDGET).unwrap();
        assert_eq!(closed.eval(&q("1")), q("4"));
        assert_eq!(closed.eval(&q("1/2")), q("1"));
        assert_eq!(closed.eval(&q("0")), q("1"));
        assert_eq!(open.eval(&q("1")), q("0"));
        assert_eq!(open.eval(&q("2")), q("1"));
        assert_eq!(open.eval(&q("-1")), q("-4"));
        let s = example();
        assert_eq!(
            eval_binomial_formula(&s, &q("1"), Kind::Closed, DEFAULT_BUDGET).unwrap(),
            q("4")
        );
        assert_eq!(
            eval_binomial_formula(&s, &q("-1"), Kind::Open, DEFAULT_BUDGET).unwrap(),
            q("-4")
        );
        assert_eq!(
            eval_binomial_formula(&s, &q("0"), Kind::Closed, DEFAULT_BUDGET).unwrap(),
            q("1")
        );
    }

    #[test]
    fn unit_segment_coefficients() {
        let s = RationalSimplex::from_int_vertices(&[&[0], &[1]]).unwrap();
        let quasi = simplex_coefficients(&s, Kind::Closed, DEFAULT_BUDGET).unwrap();
        assert_eq!(quasi.coeff(1).pieces().len(), 1);
        assert_eq!(quasi.coeff(1).pieces()[0].poly, poly(&["1"]));
        assert_eq!(quasi.coeff(0).pieces()[0].poly, poly(&["1", "-1"]));
        for (t, expected) in [("0", "1"), ("1/2", "1"), ("7/3", "3"), ("5", "6")] {
            assert_eq!(quasi.eval(&q(t)), q(expected), "t = {t}");
        }
    }

    #[test]
    fn derivative_examples() {
        let quasi = simplex_coefficients(&example(), Kind::Closed, DEFAULT_BUDGET).unwrap();
        let d2 = derivative_piecewise(&quasi, 2).unwrap();
        assert_eq!(d2.function.pieces()[0].poly, poly(&["-1"]));
        let d1 = derivative_piecewise(&quasi, 1).unwrap();
        assert_eq!(d1.function.pieces()[0].poly, poly(&["-2", "2"]));
        assert!(derivative_piecewise(&quasi, 3).is_err());
        assert!(d1.conventional_points.is_empty());
    }

    #[test]
    fn leading_coefficients_example() {
        let quasi = simplex_coefficients(&example(), Kind::Closed, DEFAULT_BUDGET).unwrap();
        let report = leading_coefficient_check(&quasi, &q("1/3"));
        assert!(report.ok, "{:?}", report.failures);
        assert!(!leading_coefficient_check(&quasi, &q("1/2")).ok);
    }

    #[test]
    fn from_pieces_validates_partition() {
        let period = q("1");
        let good = vec![
            Piece {
                interval: Interval::closed_open(q("0"), q("1/2")),
                poly: poly(&["1"]),
            },
            Piece {
                interval: Interval::closed_open(q("1/2"), q("1")),
                poly: poly(&["2"]),
            },
        ];
        assert!(
            PeriodicPiecewisePolynomial::from_pieces(period.clone(), Window::ClosedOpen, good)
                .is_ok()
        );
        let gap = vec![
            Piece {
                interval: Interval::open(q("0"), q("1/2")),
                poly: poly(&["1"]),
            },
            Piece {
                interval: Interval::closed_open(q("1/2"), q("1")),
                poly: poly(&["2"]),
            },
        ];
        assert!(PeriodicPiecewisePolynomial::from_pieces(period, Window::ClosedOpen, gap).is_err());
    }

    #[test]
    fn rewindow_preserves_values() {
        let quasi = simplex_coefficients(&example(), Kind::Open, DEFAULT_BUDGET).unwrap();
        for c in quasi.coeffs() {
            let wide = c.rewindow(&q("3"), Window::ClosedOpen).unwrap();
            assert!(wide.same_function(c).unwrap());
            for i in -12..12 {
                let t = Rational::frac(i, 4);
                assert_eq!(wide.eval(&t), c.eval(&t));
            }
        }
    }
}
