//! Verification suites: brute-force agreement, reciprocity, the derivative
//! relation, periodicity with negative extension, and volume identities.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::Rational;
use crate::error::Result;
use crate::oracle::{count_polytope, random_polytope};
use crate::poly::factorial;
use crate::polytope::{assemble, simplices_volume, Decomposition, RationalPolytope};
use crate::quasi::{
    binomial_sum, coefficients_from_steps, derivative_piecewise, leading_coefficient_check,
    QuasiPolynomial,
};
use crate::simplex::{determined_sets, sorted_unique, Kind, StepFunction};

/// A named polytope under test.
#[derive(Clone, Debug)]
pub struct Case {
    pub name: String,
    pub polytope: RationalPolytope,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.name)?;
        for (i, v) in self.polytope.vertices().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Everything the suites need about one case, computed once.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub case: Case,
    pub decomposition: Decomposition,
    /// Open step functions `#D̄` of every cell.
    pub cell_steps: Vec<StepFunction>,
    pub cell_quasi: Vec<QuasiPolynomial>,
    pub closed: QuasiPolynomial,
    pub open: QuasiPolynomial,
}

impl Prepared {
    pub fn new(case: Case, budget: u64) -> Result<Prepared> {
        let decomposition = case.polytope.triangulate();
        let cell_steps: Vec<StepFunction> = decomposition
            .cells()
            .par_iter()
            .map(|c| determined_sets(&c.simplex, Kind::Open, budget))
            .collect::<Result<_>>()?;
        let cell_quasi: Vec<QuasiPolynomial> = decomposition
            .cells()
            .iter()
            .zip(&cell_steps)
            .map(|(c, s)| coefficients_from_steps(&c.simplex, Kind::Open, s))
            .collect();
        let d = case.polytope.denominator();
        let closed = assemble(&decomposition, &cell_quasi, Kind::Closed, d)?;
        let open = assemble(&decomposition, &cell_quasi, Kind::Open, d)?;
        Ok(Prepared {
            case,
            decomposition,
            cell_steps,
            cell_quasi,
            closed,
            open,
        })
    }

    pub fn quasi(&self, kind: Kind) -> &QuasiPolynomial {
        match kind {
            Kind::Closed => &self.closed,
            Kind::Open => &self.open,
        }
    }

    pub fn dim(&self) -> usize {
        self.closed.dim()
    }

    /// `L(P, t)` or `L(P̊, t)` as a sum of per-cell binomial level sums.
    pub fn binomial_value(&self, t: &Rational, kind: Kind) -> Rational {
        self.decomposition
            .cells()
            .iter()
            .zip(&self.cell_steps)
            .filter(|(c, _)| kind == Kind::Closed || !c.on_boundary)
            .map(|(c, s)| binomial_sum(&c.simplex, s, t, Kind::Open))
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Oracle,
    Reciprocity,
    Derivative,
    Period,
    Volume,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Oracle,
        Suite::Reciprocity,
        Suite::Derivative,
        Suite::Period,
        Suite::Volume,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Reciprocity => "reciprocity",
            Suite::Derivative => "derivative",
            Suite::Period => "period",
            Suite::Volume => "volume",
        }
    }
}

/// Pass and fail counts of one suite, with the first counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn new(suite: Suite) -> SuiteReport {
        SuiteReport {
            suite,
            passed: 0,
            failed: 0,
            skipped: 0,
            first_failure: None,
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    fn fail(&mut self, message: String) {
        self.check(false, || message);
    }

    /// Adds the counts of `other`, keeping the earliest counterexample.
    pub fn merge(&mut self, other: &SuiteReport) {
        self.passed += other.passed;
        self.failed += other.failed;
        self.skipped += other.skipped;
        if self.first_failure.is_none() {
            self.first_failure.clone_from(&other.first_failure);
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} passed, {} failed",
            self.suite.name(),
            if self.ok() { "PASS" } else { "FAIL" },
            self.passed,
            self.failed
        )?;
        if self.skipped > 0 {
            write!(f, ", {} skipped", self.skipped)?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub budget: u64,
    pub t_samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            budget: crate::simplex::DEFAULT_BUDGET,
            t_samples: 8,
            seed: 0,
        }
    }
}

/// Up to `limit` dilation factors in `(0, upper]`: breakpoints of the
/// coefficient functions repeated over whole periods, midpoints between
/// consecutive breakpoints, and integers. Selection is evenly spread over
/// each kind of sample.
pub fn t_grid(q: &QuasiPolynomial, upper: &Rational, limit: usize) -> Vec<Rational> {
    let period = q.period();
    let copies = (upper / period).ceil();
    let base = q.breakpoints();
    let mut breaks = Vec::new();
    let mut m = num_bigint::BigInt::from(0);
    while m < copies {
        let shift = period * Rational::from(m.clone());
        breaks.extend(base.iter().map(|b| b + &shift));
        m += 1;
    }
    let breaks = sorted_unique(breaks);
    let mids: Vec<Rational> = breaks
        .windows(2)
        .map(|w| Rational::midpoint(&w[0], &w[1]))
        .collect();
    let top = upper.floor();
    let mut ints = Vec::new();
    let mut i = num_bigint::BigInt::from(1);
    while i <= top {
        ints.push(Rational::from(i.clone()));
        i += 1;
    }
    let in_range = |v: Vec<Rational>| -> Vec<Rational> {
        v.into_iter()
            .filter(|t| t.is_positive() && t <= upper)
            .collect()
    };
    let groups = [in_range(breaks), in_range(mids), in_range(ints)];
    let mut picked = Vec::new();
    let mut round = 0;
    while picked.len() < limit && groups.iter().any(|g| round < g.len()) {
        for g in &groups {
            if picked.len() >= limit {
                break;
            }
            if let Some(t) = spread_pick(g, round) {
                if !picked.contains(&t) {
                    picked.push(t);
                }
            }
        }
        round += 1;
    }
    sorted_unique(picked)
}

/// The `round`-th element of an order that visits `items` from both ends
/// towards the middle.
fn spread_pick(items: &[Rational], round: usize) -> Option<Rational> {
    if round >= items.len() {
        return None;
    }
    let idx = if round.is_multiple_of(2) {
        round / 2
    } else {
        items.len() - 1 - round / 2
    };
    Some(items[idx].clone())
}

/// `count` reproducible rationals with denominators up to 6 in
/// `[lo, hi]`.
pub fn random_rationals(seed: u64, count: usize, lo: i64, hi: i64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let q = rng.gen_range(1..=6);
            Rational::frac(rng.gen_range(lo * q..=hi * q), q)
        })
        .collect()
}

fn sign(exp: usize) -> Rational {
    if exp.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Quasi-polynomial values against brute-force counts, both kinds.
pub fn check_oracle(prep: &Prepared, ts: &[Rational], budget: u64) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Oracle);
    for t in ts.iter().filter(|t| t.is_positive()) {
        for kind in [Kind::Closed, Kind::Open] {
            match count_polytope(&prep.decomposition, t, kind, budget) {
                Ok(count) => {
                    let value = prep.quasi(kind).eval(t);
                    report.check(value == Rational::from(count as i64), || {
                        format!(
                            "{}: {kind} L({t}) = {value} but brute force counts {count}",
                            prep.case
                        )
                    });
                }
                Err(_) => report.skipped += 1,
            }
        }
    }
    report
}

/// `L(P̊, −t) = (−1)^dim L(P, t)` at `ts`, their negatives and zero, and
/// for simplices also `c_k(σ, −t) = (−1)^{n−k} c_k(σ̊, t)`.
pub fn check_reciprocity(prep: &Prepared, ts: &[Rational]) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Reciprocity);
    let n = prep.dim();
    let mut all: Vec<Rational> = ts.iter().flat_map(|t| [t.clone(), -t]).collect();
    all.push(Rational::zero());
    let all = sorted_unique(all);
    for t in &all {
        let lhs = prep.open.eval(&-t);
        let rhs = &sign(n) * &prep.closed.eval(t);
        report.check(lhs == rhs, || {
            format!(
                "{}: L(P̊, {}) = {lhs} but (−1)^{n}·L(P, {t}) = {rhs}",
                prep.case, -t
            )
        });
        if prep.case.polytope.is_simplex() {
            for k in 0..=n {
                let lhs = prep.closed.coeff(k).eval(&-t);
                let rhs = &sign(n - k) * &prep.open.coeff(k).eval(t);
                report.check(lhs == rhs, || {
                    format!(
                        "{}: c_{k}(σ, {}) = {lhs} but (−1)^{}·c_{k}(σ̊, {t}) = {rhs}",
                        prep.case,
                        -t,
                        n - k
                    )
                });
            }
        }
    }
    report
}

/// `d/dt c_k = −(k+1) c_{k+1}` on every piece interior, both kinds.
pub fn check_derivative(prep: &Prepared) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Derivative);
    for kind in [Kind::Closed, Kind::Open] {
        let q = prep.quasi(kind);
        for k in 0..q.dim() {
            let deriv = match derivative_piecewise(q, k) {
                Ok(d) => d,
                Err(e) => {
                    report.fail(format!("{}: {e}", prep.case));
                    continue;
                }
            };
            let factor = -Rational::from(k as i64 + 1);
            match deriv.function.aligned(q.coeff(k + 1)) {
                Ok(atoms) => {
                    for (atom, d, next) in atoms.iter().filter(|(a, _, _)| !a.is_point()) {
                        let expected = next.scale(&factor);
                        report.check(*d == expected, || {
                            format!(
                                "{}: {kind} d/dt c_{k} = {d} but −{}·c_{} = {expected} on {atom}",
                                prep.case,
                                k + 1,
                                k + 1
                            )
                        });
                    }
                }
                Err(e) => report.fail(format!("{}: {e}", prep.case)),
            }
        }
    }
    report
}

/// `c_k(t + d) = c_k(t)` for `d = d(P)` at `ts`, and agreement of the
/// quasi-polynomials with the binomial level sums at `negatives`.
pub fn check_period(prep: &Prepared, ts: &[Rational], negatives: &[Rational]) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Period);
    let d = prep.case.polytope.denominator();
    for kind in [Kind::Closed, Kind::Open] {
        let q = prep.quasi(kind);
        for t in ts {
            let shifted = t + d;
            for (k, c) in q.coeffs().iter().enumerate() {
                let (a, b) = (c.eval(t), c.eval(&shifted));
                report.check(a == b, || {
                    format!(
                        "{}: {kind} c_{k}({t}) = {a} but c_{k}({shifted}) = {b}",
                        prep.case
                    )
                });
            }
        }
        for t in negatives {
            let (a, b) = (q.eval(t), prep.binomial_value(t, kind));
            report.check(a == b, || {
                format!(
                    "{}: {kind} quasi-polynomial gives {a} at {t} but the binomial sum gives {b}",
                    prep.case
                )
            });
        }
    }
    if let Some(simplex) = prep.case.polytope.as_simplex() {
        let top = prep.decomposition.cells().len() - 1;
        let open_steps = &prep.cell_steps[top];
        let closed_steps = open_steps.reflect(&simplex.level_span());
        for t in negatives {
            for (kind, steps) in [(Kind::Closed, &closed_steps), (Kind::Open, open_steps)] {
                let (a, b) = (
                    prep.quasi(kind).eval(t),
                    binomial_sum(&simplex, steps, t, kind),
                );
                report.check(a == b, || {
                    format!("{}: {kind} quasi-polynomial gives {a} at {t} but the simplex binomial formula gives {b}", prep.case)
                });
            }
        }
    }
    report
}

/// Leading coefficients against the volume for full-dimensional cases,
/// and for simplices the level sums `Σ_j #D(σ, dj + s) = n!·dⁿ·vol(σ)`.
pub fn check_volume(prep: &Prepared, samples_per_period: usize) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Volume);
    let p = &prep.case.polytope;
    let n = p.dim();
    if n == 0 || n < p.ambient_dim() {
        report.skipped += 1;
        return report;
    }
    let vol = match simplices_volume(prep.decomposition.maximal_cells().map(|c| &c.simplex)) {
        Ok(v) => v,
        Err(e) => {
            report.fail(format!("{}: {e}", prep.case));
            return report;
        }
    };
    for kind in [Kind::Closed, Kind::Open] {
        let lead = leading_coefficient_check(prep.quasi(kind), &vol);
        report.check(lead.ok, || {
            let (k, iv, deg, c) = &lead.failures[0];
            format!(
                "{}: {kind} c_{k} on {iv} has degree {deg:?} and leading coefficient {c}, volume {vol}",
                prep.case
            )
        });
    }
    if let Some(simplex) = p.as_simplex() {
        let d = simplex.denominator();
        let expected = factorial(n) * d.pow(n as u32) * &vol;
        let top = prep.decomposition.cells().len() - 1;
        let open_steps = &prep.cell_steps[top];
        let closed_steps = open_steps.reflect(&simplex.level_span());
        for i in 0..samples_per_period {
            let s = d * Rational::frac(i as i64, samples_per_period as i64);
            let closed: u64 = (0..=n as i64)
                .map(|j| closed_steps.eval(&(d * Rational::from(j) + &s)))
                .sum();
            let open_s = d - &s;
            let open: u64 = (1..=n as i64 + 1)
                .map(|j| open_steps.eval(&(d * Rational::from(j - 1) + &open_s)))
                .sum();
            for (kind, sum, at) in [(Kind::Closed, closed, &s), (Kind::Open, open, &open_s)] {
                let sum = Rational::from(sum as i64);
                report.check(sum == expected, || {
                    format!(
                        "{}: {kind} level sum at {at} is {sum}, expected n!·dⁿ·vol = {expected}",
                        prep.case
                    )
                });
            }
        }
    }
    report
}

/// Runs the selected suites on one prepared case.
pub fn run_suites(prep: &Prepared, suites: &[Suite], config: &VerifyConfig) -> Vec<SuiteReport> {
    let d = prep.case.polytope.denominator();
    let upper = d * Rational::from(3);
    let ts = t_grid(&prep.closed, &upper, config.t_samples);
    let hi = upper.ceil().to_string().parse::<i64>().unwrap_or(12).max(1);
    let period_ts = random_rationals(config.seed ^ 0x5eed, 20, -hi, hi);
    let negatives: Vec<Rational> = random_rationals(config.seed ^ 0xface, 20, -hi, -1)
        .into_iter()
        .map(|t| if t.is_zero() { -Rational::one() } else { t })
        .collect();
    suites
        .iter()
        .map(|&suite| match suite {
            Suite::Oracle => check_oracle(prep, &ts, config.budget),
            Suite::Reciprocity => check_reciprocity(prep, &ts),
            Suite::Derivative => check_derivative(prep),
            Suite::Period => check_period(prep, &period_ts, &negatives),
            Suite::Volume => check_volume(prep, 10),
        })
        .collect()
}

/// Reproducible random cases in dimensions `1..=max_ambient`.
pub fn random_cases(
    seed: u64,
    count: usize,
    max_ambient: usize,
    max_vertices: usize,
    coord_bound: i64,
    denom_bound: i64,
) -> Result<Vec<Case>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let ambient = rng.gen_range(1..=max_ambient);
            let case_seed: u64 = rng.gen();
            let polytope = random_polytope(
                case_seed,
                ambient,
                max_vertices.max(1),
                coord_bound,
                denom_bound,
            )?;
            Ok(Case {
                name: format!("random-{seed}-{i}"),
                polytope,
            })
        })
        .collect()
}

/// Sums per-suite reports over many cases, in suite order.
pub fn merge_reports(suites: &[Suite], per_case: &[Vec<SuiteReport>]) -> Vec<SuiteReport> {
    suites
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut total = SuiteReport::new(s);
            for reports in per_case {
                total.merge(&reports[i]);
            }
            total
        })
        .collect()
}
