//! Acceptance gate: prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ehrhart::quasi::Piece;
use ehrhart::verify::{
    check_derivative, check_oracle, check_period, check_reciprocity, check_volume, random_cases,
    random_rationals, t_grid, Case, Prepared, SuiteReport,
};
use ehrhart::{
    determined_sets, oracle, simplex_coefficients, Interval, Kind, Polynomial, Rational,
    RationalPolytope, RationalSimplex, DEFAULT_BUDGET,
};
use rayon::prelude::*;

const SEED: u64 = 20_240_917;
const CASES: usize = 48;
const T_PER_CASE: usize = 6;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn poly(cs: &[&str]) -> Polynomial {
    Polynomial::new(cs.iter().map(|c| q(c)).collect())
}

fn example() -> RationalSimplex {
    RationalSimplex::from_int_vertices(&[&[0, 0, 0], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]).unwrap()
}

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn from_reports(reports: &[SuiteReport], extra: &str) -> Outcome {
        let ok = reports.iter().all(SuiteReport::ok);
        let mut detail = reports
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        if !extra.is_empty() {
            detail = format!("{detail}; {extra}");
        }
        if let Some(f) = reports.iter().find_map(|r| r.first_failure.clone()) {
            detail = format!("{detail}; first counterexample: {f}");
        }
        Outcome { ok, detail }
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    out.detail = format!("{} [{:.2?}]", out.detail, elapsed);
    if let Some(limit) = limit {
        if elapsed > limit {
            out.ok = false;
            out.detail = format!("{} exceeds the {:?} limit", out.detail, limit);
        }
    }
    out
}

fn example_step_functions() -> Outcome {
    let s = example();
    let closed = determined_sets(&s, Kind::Closed, DEFAULT_BUDGET).unwrap();
    let open = determined_sets(&s, Kind::Open, DEFAULT_BUDGET).unwrap();
    let want_closed = vec![
        (Interval::closed_open(q("0"), q("1")), 1),
        (Interval::closed_open(q("3/2"), q("5/2")), 1),
    ];
    let want_open = vec![
        (Interval::open_closed(q("3/2"), q("5/2")), 1),
        (Interval::open_closed(q("3"), q("4")), 1),
    ];
    let ok = closed.pieces() == want_closed.as_slice() && open.pieces() == want_open.as_slice();
    Outcome {
        ok,
        detail: format!("closed {:?}, open {:?}", closed.pieces(), open.pieces()),
    }
}

fn example_quasi_polynomials() -> Outcome {
    let s = example();
    let closed = simplex_coefficients(&s, Kind::Closed, DEFAULT_BUDGET).unwrap();
    let open = simplex_coefficients(&s, Kind::Open, DEFAULT_BUDGET).unwrap();
    let lo = Interval::closed_open(q("0"), q("1/2"));
    let hi = Interval::closed_open(q("1/2"), q("1"));
    let closed_want: Vec<Vec<Piece>> = [
        (
            ["1", "-5/3", "1", "-1/3"].as_slice(),
            ["1", "-13/6", "3/2", "-1/3"].as_slice(),
        ),
        (&["5/3", "-2", "1"], &["13/6", "-3", "1"]),
        (&["1", "-1"], &["3/2", "-1"]),
        (&["1/3"], &["1/3"]),
    ]
    .iter()
    .map(|(a, b)| {
        vec![
            Piece {
                interval: lo.clone(),
                poly: poly(a),
            },
            Piece {
                interval: hi.clone(),
                poly: poly(b),
            },
        ]
    })
    .collect();
    // the open pieces are displayed in x = ⟨t⟩ ∈ (−1, 0], that is x = t̄ − 1
    let in_x = |cs: &[&str]| poly(cs).shift(&q("-1"));
    let olo = Interval::open_closed(q("0"), q("1/2"));
    let ohi = Interval::open_closed(q("1/2"), q("1"));
    let open_want: Vec<Vec<Piece>> = [
        (
            ["-1", "-13/6", "-3/2", "-1/3"].as_slice(),
            ["-1", "-5/3", "-1", "-1/3"].as_slice(),
        ),
        (&["13/6", "3", "1"], &["5/3", "2", "1"]),
        (&["-3/2", "-1"], &["-1", "-1"]),
        (&["1/3"], &["1/3"]),
    ]
    .iter()
    .map(|(a, b)| {
        vec![
            Piece {
                interval: olo.clone(),
                poly: in_x(a),
            },
            Piece {
                interval: ohi.clone(),
                poly: in_x(b),
            },
        ]
    })
    .collect();
    let merge_constant = |mut pieces: Vec<Piece>, window: Interval| {
        if pieces[0].poly == pieces[1].poly {
            pieces = vec![Piece {
                interval: window,
                poly: pieces[0].poly.clone(),
            }];
        }
        pieces
    };
    let mut mismatches = Vec::new();
    for k in 0..=3 {
        let want = merge_constant(
            closed_want[k].clone(),
            Interval::closed_open(q("0"), q("1")),
        );
        if closed.coeff(k).pieces() != want.as_slice() {
            mismatches.push(format!("closed c_{k}"));
        }
        let want = merge_constant(open_want[k].clone(), Interval::open_closed(q("0"), q("1")));
        if open.coeff(k).pieces() != want.as_slice() {
            mismatches.push(format!("open c_{k}"));
        }
    }
    Outcome {
        ok: mismatches.is_empty() && closed.period() == &q("1") && open.period() == &q("1"),
        detail: if mismatches.is_empty() {
            "all closed and open pieces match exactly".into()
        } else {
            format!("mismatch in {}", mismatches.join(", "))
        },
    }
}

fn classical() -> Outcome {
    let square = RationalPolytope::from_int_points(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap();
    let cube_pts: Vec<Vec<i64>> = (0..8)
        .map(|m| vec![m & 1, (m >> 1) & 1, (m >> 2) & 1])
        .collect();
    let cube = RationalPolytope::from_int_points(
        &cube_pts.iter().map(|v| v.as_slice()).collect::<Vec<_>>(),
    )
    .unwrap();
    let simplex = RationalPolytope::new(example().vertices().to_vec()).unwrap();
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, p, formula) in [
        ("square", &square, Some(2u32)),
        ("cube", &cube, Some(3)),
        ("simplex", &simplex, None),
    ] {
        let quasi = ehrhart::polytope_quasi(p, Kind::Closed, DEFAULT_BUDGET).unwrap();
        let decomp = p.triangulate();
        for t in 0..=6i64 {
            let expected = match formula {
                Some(e) => (t + 1).pow(e) as u64,
                None => oracle::count_polytope(
                    &decomp,
                    &Rational::from(t),
                    Kind::Closed,
                    DEFAULT_BUDGET,
                )
                .unwrap(),
            };
            let value = quasi.eval(&Rational::from(t));
            checked += 1;
            if value != Rational::from(expected as i64) {
                failures.push(format!("{name} at t={t}: {value} vs {expected}"));
            }
        }
    }
    Outcome {
        ok: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{checked} values match")
        } else {
            failures.join("; ")
        },
    }
}

struct Prepped {
    cases: Vec<(Prepared, Vec<Rational>)>,
    build_time: Duration,
}

fn prepare() -> Prepped {
    let start = Instant::now();
    let cases = random_cases(SEED, CASES, 3, 5, 3, 4).expect("random cases");
    let cases = cases
        .into_par_iter()
        .map(|case: Case| {
            let prep =
                Prepared::new(case, DEFAULT_BUDGET).expect("quasi-polynomials of a random case");
            let upper = prep.case.polytope.denominator() * Rational::from(3);
            let ts = t_grid(&prep.closed, &upper, T_PER_CASE);
            (prep, ts)
        })
        .collect();
    Prepped {
        cases,
        build_time: start.elapsed(),
    }
}

fn merged(reports: Vec<SuiteReport>) -> SuiteReport {
    let mut total = SuiteReport::new(reports[0].suite);
    for r in &reports {
        total.merge(r);
    }
    total
}

fn oracle_equivalence(p: &Prepped) -> Outcome {
    let report = merged(
        p.cases
            .par_iter()
            .map(|(prep, ts)| check_oracle(prep, ts, 50_000_000))
            .collect(),
    );
    let pairs: usize = p.cases.iter().map(|(_, ts)| ts.len()).sum();
    let mut out = Outcome::from_reports(
        std::slice::from_ref(&report),
        &format!(
            "{} cases, {pairs} (polytope, t) pairs, quasi-polynomials built in {:.2?}",
            p.cases.len(),
            p.build_time
        ),
    );
    if pairs < 200 || report.skipped > 0 || report.passed < 2 * 200 {
        out.ok = false;
        out.detail = format!("{}; fewer than 200 fully checked pairs", out.detail);
    }
    out
}

fn reciprocity(p: &Prepped) -> Outcome {
    let report = merged(
        p.cases
            .par_iter()
            .map(|(prep, ts)| check_reciprocity(prep, ts))
            .collect(),
    );
    let simplices = p
        .cases
        .iter()
        .filter(|(prep, _)| prep.case.polytope.is_simplex())
        .count();
    Outcome::from_reports(
        &[report],
        &format!("{simplices} simplex cases with coefficient checks"),
    )
}

fn derivative(p: &Prepped) -> Outcome {
    let report = merged(
        p.cases
            .par_iter()
            .map(|(prep, _)| check_derivative(prep))
            .collect(),
    );
    Outcome::from_reports(&[report], "")
}

fn volume(p: &Prepped) -> Outcome {
    let report = merged(
        p.cases
            .par_iter()
            .map(|(prep, _)| check_volume(prep, 10))
            .collect(),
    );
    let full = p
        .cases
        .iter()
        .filter(|(prep, _)| prep.case.polytope.dim() == prep.case.polytope.ambient_dim())
        .count();
    let mut out = Outcome::from_reports(
        std::slice::from_ref(&report),
        &format!("{full} full-dimensional cases"),
    );
    if full == 0 || report.passed == 0 {
        out.ok = false;
    }
    out
}

fn periodicity(p: &Prepped) -> Outcome {
    let report = merged(
        p.cases
            .par_iter()
            .enumerate()
            .map(|(i, (prep, _))| {
                let d = prep.case.polytope.denominator();
                let hi = (d * Rational::from(3))
                    .ceil()
                    .to_string()
                    .parse::<i64>()
                    .unwrap();
                let ts = random_rationals(SEED + i as u64, 20, -hi, hi);
                let negatives: Vec<Rational> = random_rationals(SEED + 7919 * i as u64, 20, -hi, 0)
                    .into_iter()
                    .map(|t| {
                        if t.is_negative() {
                            t
                        } else {
                            -Rational::frac(1, 3)
                        }
                    })
                    .collect();
                check_period(prep, &ts, &negatives)
            })
            .collect(),
    );
    Outcome::from_reports(&[report], "20 periodicity and 20 negative samples per case")
}

fn main() -> ExitCode {
    let one_second = Some(Duration::from_secs(1));
    let mut results: Vec<(usize, &str, Outcome)> = vec![
        (
            1,
            "example step functions",
            timed(one_second, example_step_functions),
        ),
        (
            2,
            "example quasi-polynomials",
            timed(one_second, example_quasi_polynomials),
        ),
    ];
    let prepped = prepare();
    let oracle_limit = Some(Duration::from_secs(300).saturating_sub(prepped.build_time));
    results.push((
        3,
        "oracle equivalence",
        timed(oracle_limit, || oracle_equivalence(&prepped)),
    ));
    results.push((4, "reciprocity", timed(None, || reciprocity(&prepped))));
    results.push((
        5,
        "derivative relation",
        timed(None, || derivative(&prepped)),
    ));
    results.push((6, "volume identities", timed(None, || volume(&prepped))));
    results.push((7, "classical specialization", timed(None, classical)));
    results.push((
        8,
        "periodicity and negative extension",
        timed(None, || periodicity(&prepped)),
    ));
    results.sort_by_key(|r| r.0);
    let mut all = true;
    for (n, name, out) in &results {
        all &= out.ok;
        println!(
            "criterion {n} ({name}): {} - {}",
            if out.ok { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
