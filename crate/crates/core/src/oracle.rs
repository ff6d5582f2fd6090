//! Brute-force lattice point counting and random test polytopes.
//!
//! Every integer point of the bounding box of `t·P` is tested for membership
//! through exact barycentric coordinates. The coordinates of a cell are affine
//! functions of the point, so they are compiled once into integer forms and
//! the scan itself runs on machine integers.

use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{left_inverse, Rational, RationalVector};
use crate::error::{Error, Result};
use crate::polytope::{Decomposition, RationalPolytope};
use crate::simplex::{Kind, RationalSimplex};

/// What to count.
#[derive(Clone, Debug)]
pub enum CountTarget {
    Simplex(RationalSimplex),
    Decomposition(Decomposition),
}

/// A lattice point count of `t·target` (closed) or of its relative
/// interior (open).
#[derive(Clone, Debug)]
pub struct CountQuery {
    pub target: CountTarget,
    pub t: Rational,
    pub kind: Kind,
}

impl CountQuery {
    pub fn new(target: CountTarget, t: Rational, kind: Kind) -> Result<Self> {
        match kind {
            Kind::Closed if t.is_negative() => {
                Err(Error::Domain("closed counts need t ≥ 0".into()))
            }
            Kind::Open if !t.is_positive() => Err(Error::Domain("open counts need t > 0".into())),
            _ => Ok(CountQuery { target, t, kind }),
        }
    }
}

/// Affine coordinates of `p` over the vertices of `σ`, or `None` off the
/// affine hull.
pub fn barycentric(simplex: &RationalSimplex, p: &RationalVector) -> Result<Option<Vec<Rational>>> {
    simplex.barycentric(p)
}

/// `u·x + c` with integer coefficients, a positive multiple of an affine
/// function of `x`.
#[derive(Clone, Debug)]
struct Form {
    u: Vec<i128>,
    c: i128,
}

impl Form {
    fn from_row(row: &[Rational]) -> Result<Form> {
        let scale = row
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(&x.denom()));
        let ints: Vec<i128> = row
            .iter()
            .map(|x| {
                (x.numer() * (&scale / x.denom()))
                    .to_i128()
                    .filter(|v| v.unsigned_abs() < 1u128 << 60)
                    .ok_or(Error::Overflow)
            })
            .collect::<Result<_>>()?;
        let (c, u) = ints.split_last().expect("row has a constant column");
        Ok(Form {
            u: u.to_vec(),
            c: *c,
        })
    }

    /// Sign of the form at `p / (a/b)`, scaled by the positive `a`.
    fn sign(&self, p: &[i64], a: i128, b: i128) -> std::cmp::Ordering {
        let dot: i128 = self.u.iter().zip(p).map(|(u, &x)| u * x as i128).sum();
        (b * dot + a * self.c).cmp(&0)
    }
}

/// Membership test for one closed or open simplex.
#[derive(Clone, Debug)]
struct Membership {
    coords: Vec<Form>,
    hull: Vec<Form>,
}

impl Membership {
    fn new(simplex: &RationalSimplex) -> Result<Membership> {
        let ambient = simplex.ambient_dim();
        let ones = vec![Rational::one(); simplex.vertices().len()];
        let system = simplex.vertex_matrix().stack_row(&ones)?;
        let inv = left_inverse(&system)?;
        let mut proj = system.mul(&inv)?;
        for i in 0..=ambient {
            proj[(i, i)] = &proj[(i, i)] - &Rational::one();
        }
        let coords = (0..inv.rows())
            .map(|i| Form::from_row(inv.row(i)))
            .collect::<Result<_>>()?;
        let hull = (0..proj.rows())
            .filter(|&i| proj.row(i).iter().any(|x| !x.is_zero()))
            .map(|i| Form::from_row(proj.row(i)))
            .collect::<Result<_>>()?;
        Ok(Membership { coords, hull })
    }

    fn contains(&self, p: &[i64], a: i128, b: i128, open: bool) -> bool {
        use std::cmp::Ordering::*;
        self.hull.iter().all(|f| f.sign(p, a, b) == Equal)
            && self.coords.iter().all(|f| match f.sign(p, a, b) {
                Greater => true,
                Equal => !open,
                Less => false,
            })
    }
}

/// Counts lattice points for the query; the bounding box of `t·vertices`
/// may hold at most `budget` points.
pub fn brute_count(query: &CountQuery, budget: u64) -> Result<u64> {
    count_target(&query.target, &query.t, query.kind, budget)
}

fn count_target(target: &CountTarget, t: &Rational, kind: Kind, budget: u64) -> Result<u64> {
    let (vertices, inside, outside, open) = match target {
        CountTarget::Simplex(s) => (
            s.vertices().to_vec(),
            vec![Membership::new(s)?],
            Vec::new(),
            kind == Kind::Open,
        ),
        CountTarget::Decomposition(d) => {
            let mut verts: Vec<RationalVector> = d
                .maximal_cells()
                .flat_map(|c| c.simplex.vertices().iter().cloned())
                .collect();
            verts.sort();
            verts.dedup();
            let inside = d
                .maximal_cells()
                .map(|c| Membership::new(&c.simplex))
                .collect::<Result<_>>()?;
            let outside = match kind {
                Kind::Closed => Vec::new(),
                Kind::Open => d
                    .boundary_facets()
                    .map(|c| Membership::new(&c.simplex))
                    .collect::<Result<_>>()?,
            };
            (verts, inside, outside, false)
        }
    };
    if t.is_negative() {
        return Err(Error::Domain("counts need t ≥ 0".into()));
    }
    if t.is_zero() {
        return match kind {
            Kind::Closed => Ok(1),
            Kind::Open => Err(Error::Domain("open counts need t > 0".into())),
        };
    }
    let ambient = vertices[0].len();
    let mut ranges = Vec::with_capacity(ambient);
    let mut size: u128 = 1;
    for i in 0..ambient {
        let scaled: Vec<Rational> = vertices.iter().map(|v| &v[i] * t).collect();
        let lo = scaled.iter().min().expect("nonempty").ceil();
        let hi = scaled.iter().max().expect("nonempty").floor();
        if lo > hi {
            return Ok(0);
        }
        let lo = lo.to_i64().ok_or(Error::Overflow)?;
        let hi = hi.to_i64().ok_or(Error::Overflow)?;
        size = size.saturating_mul((hi - lo + 1) as u128);
        ranges.push((lo, hi));
    }
    if size > budget as u128 {
        return Err(Error::BudgetExceeded { size, budget });
    }
    let a = t.numer().to_i128().ok_or(Error::Overflow)?;
    let b = t.denom().to_i128().ok_or(Error::Overflow)?;
    let hit = |p: &[i64]| {
        inside.iter().any(|m| m.contains(p, a, b, open))
            && !outside.iter().any(|m| m.contains(p, a, b, false))
    };
    if ambient == 0 {
        return Ok(u64::from(hit(&[])));
    }
    let (first_lo, first_hi) = ranges[0];
    let count = (first_lo..=first_hi)
        .into_par_iter()
        .map(|x0| {
            let mut p: Vec<i64> = ranges.iter().map(|r| r.0).collect();
            p[0] = x0;
            let mut count = 0u64;
            loop {
                count += u64::from(hit(&p));
                let mut i = ambient - 1;
                loop {
                    if i == 0 {
                        return count;
                    }
                    if p[i] < ranges[i].1 {
                        p[i] += 1;
                        break;
                    }
                    p[i] = ranges[i].0;
                    i -= 1;
                }
            }
        })
        .sum();
    Ok(count)
}

/// Closed or open lattice point count of `t·P` through its decomposition.
pub fn count_polytope(
    decomp: &Decomposition,
    t: &Rational,
    kind: Kind,
    budget: u64,
) -> Result<u64> {
    brute_count(
        &CountQuery::new(CountTarget::Decomposition(decomp.clone()), t.clone(), kind)?,
        budget,
    )
}

/// Closed or relatively open lattice point count of `t·σ`.
pub fn count_simplex(
    simplex: &RationalSimplex,
    t: &Rational,
    kind: Kind,
    budget: u64,
) -> Result<u64> {
    brute_count(
        &CountQuery::new(CountTarget::Simplex(simplex.clone()), t.clone(), kind)?,
        budget,
    )
}

/// Reproducible random rational polytope in `Q^ambient`: between
/// `min(ambient + 1, max_vertices)` and `max_vertices` generators with
/// coordinates `p/q`, `1 ≤ q ≤ denom_bound`, `|p/q| ≤ coord_bound`.
pub fn random_polytope(
    seed: u64,
    ambient: usize,
    max_vertices: usize,
    coord_bound: i64,
    denom_bound: i64,
) -> Result<RationalPolytope> {
    if max_vertices == 0 || coord_bound <= 0 || denom_bound <= 0 {
        return Err(Error::Domain(
            "random polytope bounds must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range((ambient + 1).min(max_vertices)..=max_vertices);
    let points = (0..count)
        .map(|_| {
            (0..ambient)
                .map(|_| {
                    let q = rng.gen_range(1..=denom_bound);
                    let p = rng.gen_range(-coord_bound * q..=coord_bound * q);
                    Rational::frac(p, q)
                })
                .collect()
        })
        .collect();
    RationalPolytope::new(points)
}

/// Whether the origin lies in `P`.
pub fn contains_origin(decomp: &Decomposition) -> Result<bool> {
    for cell in decomp.maximal_cells() {
        let origin = RationalVector::zeros(cell.simplex.ambient_dim());
        if let Some(lambda) = cell.simplex.barycentric(&origin)? {
            if lambda.iter().all(|l| !l.is_negative()) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
