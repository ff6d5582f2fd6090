//! Rational polytopes, placing triangulations into relatively open cells,
//! and assembly of the polytope quasi-polynomials from cell contributions.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::arith::{left_inverse, rank, Rational, RationalMatrix, RationalVector};
use crate::error::{Error, Result};
use crate::poly::factorial;
use crate::quasi::{simplex_coefficients, PeriodicPiecewisePolynomial, QuasiPolynomial, Window};
use crate::simplex::{denominator, Kind, RationalSimplex};

/// Convex hull of finitely many rational points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolytope {
    points: Vec<RationalVector>,
    vertices: Vec<RationalVector>,
    dim: usize,
    denominator: Rational,
    chart: Chart,
}

/// Affine coordinates on the affine hull of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Chart {
    base: RationalVector,
    inverse: Option<RationalMatrix>,
}

impl Chart {
    fn new(points: &[RationalVector]) -> Result<(Chart, usize)> {
        let base = points[0].clone();
        let diffs: Vec<RationalVector> = points[1..].iter().map(|p| p.sub(&base)).collect();
        if diffs.is_empty() {
            return Ok((
                Chart {
                    base,
                    inverse: None,
                },
                0,
            ));
        }
        let (_, pivots) = RationalMatrix::from_columns(&diffs)?.rref();
        if pivots.is_empty() {
            return Ok((
                Chart {
                    base,
                    inverse: None,
                },
                0,
            ));
        }
        let basis: Vec<RationalVector> = pivots.iter().map(|&j| diffs[j].clone()).collect();
        let inverse = left_inverse(&RationalMatrix::from_columns(&basis)?)?;
        let dim = basis.len();
        Ok((
            Chart {
                base,
                inverse: Some(inverse),
            },
            dim,
        ))
    }

    fn project(&self, p: &RationalVector) -> RationalVector {
        match &self.inverse {
            None => RationalVector::zeros(0),
            Some(inv) => inv
                .mul_vec(&p.sub(&self.base))
                .expect("chart matches ambient dimension"),
        }
    }
}

impl RationalPolytope {
    /// Builds `conv(points)`; repeated points and non-vertex generators are
    /// dropped from the vertex list.
    pub fn new(points: Vec<RationalVector>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Domain("a polytope needs at least one point".into()));
        };
        let ambient = first.len();
        if points.iter().any(|p| p.len() != ambient) {
            return Err(Error::Shape("points of different dimension".into()));
        }
        let unique: Vec<RationalVector> = points
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let (chart, dim) = Chart::new(&unique)?;
        let projected: Vec<RationalVector> = unique.iter().map(|p| chart.project(p)).collect();
        let keep: Vec<bool> = (0..unique.len())
            .into_par_iter()
            .map(|i| is_extreme(&projected, i, dim))
            .collect::<Result<_>>()?;
        let vertices: Vec<RationalVector> = unique
            .into_iter()
            .zip(keep)
            .filter_map(|(p, k)| k.then_some(p))
            .collect();
        let denominator = denominator(&vertices);
        Ok(RationalPolytope {
            points,
            vertices,
            dim,
            denominator,
            chart,
        })
    }

    pub fn from_int_points(points: &[&[i64]]) -> Result<Self> {
        Self::new(
            points
                .iter()
                .map(|p| RationalVector::from_ints(p))
                .collect(),
        )
    }

    /// The generators as supplied.
    pub fn points(&self) -> &[RationalVector] {
        &self.points
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn denominator(&self) -> &Rational {
        &self.denominator
    }

    /// Whether the vertex set is exactly the vertex set of a simplex.
    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim + 1
    }

    pub fn as_simplex(&self) -> Option<RationalSimplex> {
        if self.is_simplex() {
            RationalSimplex::new(self.vertices.clone()).ok()
        } else {
            None
        }
    }

    /// Placing triangulation inserting vertices in lexicographic order.
    pub fn triangulate(&self) -> Decomposition {
        let order: Vec<usize> = (0..self.vertices.len()).collect();
        self.triangulate_with_order(&order)
            .expect("the identity is a valid insertion order")
    }

    /// Placing triangulation with an explicit insertion order, given as a
    /// permutation of vertex indices.
    pub fn triangulate_with_order(&self, order: &[usize]) -> Result<Decomposition> {
        let mut seen = vec![false; self.vertices.len()];
        for &i in order {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Domain(
                    "insertion order is not a permutation of the vertices".into(),
                ));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Domain(
                "insertion order is not a permutation of the vertices".into(),
            ));
        }
        let projected: Vec<RationalVector> = self
            .vertices
            .iter()
            .map(|v| self.chart.project(v))
            .collect();
        let maximal = place(&projected, order, self.dim)?;
        Ok(Decomposition::from_maximal(
            &self.vertices,
            maximal,
            self.dim,
        ))
    }
}

/// Whether `pts[i]` is outside the convex hull of the remaining points.
fn is_extreme(pts: &[RationalVector], i: usize, dim: usize) -> Result<bool> {
    let others: Vec<RationalVector> = pts
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, p)| p.clone())
        .collect();
    if others.is_empty() || affine_rank(&others) < dim {
        return Ok(true);
    }
    let order: Vec<usize> = (0..others.len()).collect();
    for cell in place(&others, &order, dim)? {
        let simplex = RationalSimplex::new(cell.iter().map(|&j| others[j].clone()).collect())?;
        if let Some(lambda) = simplex.barycentric(&pts[i])? {
            if lambda.iter().all(|l| !l.is_negative()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn affine_rank(pts: &[RationalVector]) -> usize {
    if pts.len() < 2 {
        return 0;
    }
    let diffs: Vec<RationalVector> = pts[1..].iter().map(|p| p.sub(&pts[0])).collect();
    RationalMatrix::from_columns(&diffs)
        .map(|m| rank(&m))
        .unwrap_or(0)
}

/// Sign of `det(f_1 − f_0, …, f_{n−1} − f_0, x − f_0)` for a facet `f`.
fn orientation(pts: &[RationalVector], facet: &[usize], x: &RationalVector) -> Result<i8> {
    let f0 = &pts[facet[0]];
    let mut rows: Vec<Vec<Rational>> = facet[1..]
        .iter()
        .map(|&j| pts[j].sub(f0).entries().to_vec())
        .collect();
    rows.push(x.sub(f0).entries().to_vec());
    let det = RationalMatrix::from_rows(rows)?.determinant()?;
    Ok(if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    })
}

/// Maximal simplices (sorted index lists) of the placing triangulation of
/// full-dimensional points in `Q^dim`. Points inside the current hull are
/// skipped.
fn place(pts: &[RationalVector], order: &[usize], dim: usize) -> Result<Vec<Vec<usize>>> {
    let mut init = vec![order[0]];
    let mut rest = Vec::new();
    for &i in &order[1..] {
        if init.len() <= dim {
            let mut trial: Vec<RationalVector> = init.iter().map(|&j| pts[j].clone()).collect();
            trial.push(pts[i].clone());
            if affine_rank(&trial) == init.len() {
                init.push(i);
                continue;
            }
        }
        rest.push(i);
    }
    if init.len() != dim + 1 {
        return Err(Error::Domain(
            "points do not span the expected dimension".into(),
        ));
    }
    init.sort_unstable();
    let mut simplices = vec![init];
    for p in rest {
        let mut facets: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
        for s in &simplices {
            for (skip, &opposite) in s.iter().enumerate() {
                let facet: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                facets
                    .entry(facet)
                    .and_modify(|e| e.0 += 1)
                    .or_insert((1, opposite));
            }
        }
        let mut added = Vec::new();
        for (facet, (count, opposite)) in facets {
            if count != 1 {
                continue;
            }
            let here = orientation(pts, &facet, &pts[p])?;
            let there = orientation(pts, &facet, &pts[opposite])?;
            if here != 0 && here == -there {
                let mut cell = facet;
                cell.push(p);
                cell.sort_unstable();
                added.push(cell);
            }
        }
        simplices.extend(added);
    }
    Ok(simplices)
}

/// A relatively open simplex of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenCell {
    pub simplex: RationalSimplex,
    pub on_boundary: bool,
    /// Indices into the polytope's vertex list.
    pub vertex_indices: Vec<usize>,
}

impl OpenCell {
    pub fn dim(&self) -> usize {
        self.simplex.dim()
    }
}

/// Pairwise disjoint open cells whose union is the polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    cells: Vec<OpenCell>,
    max_dim: usize,
}

impl Decomposition {
    fn from_maximal(
        vertices: &[RationalVector],
        maximal: Vec<Vec<usize>>,
        dim: usize,
    ) -> Decomposition {
        let mut facet_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in &maximal {
            let m = s.len();
            for mask in 1u32..(1 << m) {
                let face: Vec<usize> = (0..m)
                    .filter(|&k| mask & (1 << k) != 0)
                    .map(|k| s[k])
                    .collect();
                if face.len() == m - 1 && m > 1 {
                    *facet_count.entry(face.clone()).or_default() += 1;
                }
                faces.insert(face);
            }
        }
        let boundary_facets: Vec<&Vec<usize>> = facet_count
            .iter()
            .filter_map(|(f, &c)| (c == 1).then_some(f))
            .collect();
        let mut ordered: Vec<Vec<usize>> = faces.into_iter().collect();
        ordered.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let cells = ordered
            .into_iter()
            .map(|face| {
                let on_boundary = face.len() <= dim
                    && boundary_facets
                        .iter()
                        .any(|f| face.iter().all(|v| f.binary_search(v).is_ok()));
                let simplex =
                    RationalSimplex::new(face.iter().map(|&v| vertices[v].clone()).collect())
                        .expect("faces of a triangulation are simplices");
                OpenCell {
                    simplex,
                    on_boundary,
                    vertex_indices: face,
                }
            })
            .collect();
        Decomposition {
            cells,
            max_dim: dim,
        }
    }

    pub fn cells(&self) -> &[OpenCell] {
        &self.cells
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// The top-dimensional cells, whose closures triangulate the polytope.
    pub fn maximal_cells(&self) -> impl Iterator<Item = &OpenCell> {
        self.cells.iter().filter(move |c| c.dim() == self.max_dim)
    }

    /// Boundary cells of dimension `max_dim − 1`; their closures cover the
    /// relative boundary.
    pub fn boundary_facets(&self) -> impl Iterator<Item = &OpenCell> {
        self.cells
            .iter()
            .filter(move |c| c.on_boundary && c.dim() + 1 == self.max_dim)
    }

    /// `Σ (−1)^dim` over all cells; a ball gives 1.
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .map(|c| if c.dim() % 2 == 0 { 1 } else { -1 })
            .sum()
    }
}

/// Placing triangulation of `P` in lexicographic vertex order.
pub fn triangulate(p: &RationalPolytope) -> Decomposition {
    p.triangulate()
}

/// Open-cell quasi-polynomials of every cell, in cell order.
pub fn cell_coefficients(decomp: &Decomposition, budget: u64) -> Result<Vec<QuasiPolynomial>> {
    decomp
        .cells
        .par_iter()
        .map(|c| simplex_coefficients(&c.simplex, Kind::Open, budget))
        .collect()
}

/// Sums precomputed open-cell quasi-polynomials: every cell for the closed
/// count, interior cells only for the open one.
pub fn assemble(
    decomp: &Decomposition,
    cell_quasi: &[QuasiPolynomial],
    kind: Kind,
    fallback_period: &Rational,
) -> Result<QuasiPolynomial> {
    let chosen: Vec<&QuasiPolynomial> = decomp
        .cells
        .iter()
        .zip(cell_quasi)
        .filter(|(c, _)| kind == Kind::Closed || !c.on_boundary)
        .map(|(_, q)| q)
        .collect();
    let period = PeriodicPiecewisePolynomial::common_period(
        chosen.iter().flat_map(|q| q.coeffs().iter()),
        fallback_period,
    )?;
    let window = Window::for_kind(kind);
    let one = Rational::one();
    let coeffs = (0..=decomp.max_dim)
        .into_par_iter()
        .map(|k| {
            let terms: Vec<(&PeriodicPiecewisePolynomial, Rational)> = chosen
                .iter()
                .filter(|q| q.dim() >= k)
                .map(|q| (q.coeff(k), one.clone()))
                .collect();
            if terms.is_empty() {
                return Ok(PeriodicPiecewisePolynomial::constant(
                    period.clone(),
                    window,
                    Rational::zero(),
                ));
            }
            PeriodicPiecewisePolynomial::combine(&terms, &period, window)
        })
        .collect::<Result<Vec<_>>>()?;
    QuasiPolynomial::new(kind, decomp.max_dim, coeffs)
}

/// `L(P, t)` or `L(P̊, t)` as a quasi-polynomial.
pub fn polytope_quasi(p: &RationalPolytope, kind: Kind, budget: u64) -> Result<QuasiPolynomial> {
    let decomp = p.triangulate();
    let cells = cell_coefficients(&decomp, budget)?;
    assemble(&decomp, &cells, kind, p.denominator())
}

/// Both quasi-polynomials from one decomposition, closed first.
pub fn polytope_quasi_pair(
    p: &RationalPolytope,
    budget: u64,
) -> Result<(QuasiPolynomial, QuasiPolynomial)> {
    let decomp = p.triangulate();
    let cells = cell_coefficients(&decomp, budget)?;
    Ok((
        assemble(&decomp, &cells, Kind::Closed, p.denominator())?,
        assemble(&decomp, &cells, Kind::Open, p.denominator())?,
    ))
}

/// Euclidean volume of a full-dimensional polytope.
pub fn volume(p: &RationalPolytope) -> Result<Rational> {
    if p.dim() < p.ambient_dim() {
        return Err(Error::RelativeVolume {
            dim: p.dim(),
            ambient: p.ambient_dim(),
        });
    }
    simplices_volume(p.triangulate().maximal_cells().map(|c| &c.simplex))
}

pub(crate) fn simplices_volume<'a>(
    cells: impl Iterator<Item = &'a RationalSimplex>,
) -> Result<Rational> {
    let mut total = Rational::zero();
    let mut n = 0;
    for s in cells {
        n = s.dim();
        let v = s.vertices();
        let diffs: Vec<RationalVector> = v[1..].iter().map(|x| x.sub(&v[0])).collect();
        if !diffs.is_empty() {
            total += RationalMatrix::from_columns(&diffs)?.determinant()?.abs();
        } else {
            total += Rational::one();
        }
    }
    Ok(total / factorial(n))
}

/// Outcome of checking `L(P̊, −t) = (−1)^dim · L(P, t)` at sample points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReciprocityReport {
    pub checked: usize,
    pub counterexample: Option<ReciprocityFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReciprocityFailure {
    pub t: Rational,
    pub open_at_minus_t: Rational,
    pub closed_at_t: Rational,
}

impl ReciprocityReport {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub fn polytope_reciprocity_check(
    p: &RationalPolytope,
    samples: &[Rational],
    budget: u64,
) -> Result<ReciprocityReport> {
    let (closed, open) = polytope_quasi_pair(p, budget)?;
    Ok(reciprocity_on(&closed, &open, samples))
}

pub(crate) fn reciprocity_on(
    closed: &QuasiPolynomial,
    open: &QuasiPolynomial,
    samples: &[Rational],
) -> ReciprocityReport {
    let sign = if closed.dim().is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    };
    let mut checked = 0;
    for t in samples {
        checked += 1;
        let lhs = open.eval(&-t);
        let rhs = closed.eval(t);
        if lhs != &sign * &rhs {
            return ReciprocityReport {
                checked,
                counterexample: Some(ReciprocityFailure {
                    t: t.clone(),
                    open_at_minus_t: lhs,
                    closed_at_t: rhs,
                }),
            };
        }
    }
    ReciprocityReport {
        checked,
        counterexample: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::DEFAULT_BUDGET;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn square() -> RationalPolytope {
        RationalPolytope::from_int_points(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    fn example() -> RationalPolytope {
        RationalPolytope::from_int_points(&[&[0, 0, 0], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1]])
            .unwrap()
    }

    fn counts_by_dim(d: &Decomposition) -> Vec<(usize, usize, usize)> {
        (0..=d.max_dim())
            .map(|k| {
                let cells: Vec<_> = d.cells().iter().filter(|c| c.dim() == k).collect();
                (
                    k,
                    cells.len(),
                    cells.iter().filter(|c| c.on_boundary).count(),
                )
            })
            .collect()
    }

    #[test]
    fn simplex_decomposes_into_its_faces() {
        let d = example().triangulate();
        assert_eq!(d.cells().len(), 15);
        let interior: Vec<_> = d.cells().iter().filter(|c| !c.on_boundary).collect();
        assert_eq!(interior.len(), 1);
        assert_eq!(interior[0].dim(), 3);
        assert_eq!(d.euler_characteristic(), 1);
    }

    #[test]
    fn square_decomposition() {
        let d = square().triangulate();
        assert_eq!(counts_by_dim(&d), vec![(0, 4, 4), (1, 5, 4), (2, 2, 0)]);
        assert_eq!(d.euler_characteristic(), 1);
    }

    #[test]
    fn single_point() {
        let p = RationalPolytope::from_int_points(&[&[2]]).unwrap();
        let d = p.triangulate();
        assert_eq!(d.cells().len(), 1);
        assert!(!d.cells()[0].on_boundary);
        assert_eq!(p.dim(), 0);
    }

    #[test]
    fn repeated_points_collapse() {
        let p = RationalPolytope::from_int_points(&[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(p.vertices().len(), 1);
        assert_eq!(p.triangulate().cells().len(), 1);
    }

    #[test]
    fn non_vertices_removed() {
        let p = RationalPolytope::from_int_points(&[
            &[0, 0],
            &[4, 0],
            &[0, 4],
            &[1, 1],
            &[2, 0],
            &[2, 2],
        ])
        .unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.denominator(), &q("1/4"));
        let segment = RationalPolytope::new(vec![
            RationalVector::new(vec![q("0")]),
            RationalVector::new(vec![q("1/3")]),
            RationalVector::new(vec![q("1/2")]),
        ])
        .unwrap();
        assert_eq!(segment.vertices().len(), 2);
        assert_eq!(segment.denominator(), &q("2"));
    }

    #[test]
    fn lower_dimensional_triangle_in_space() {
        let p =
            RationalPolytope::from_int_points(&[&[0, 0, 1], &[2, 0, 1], &[0, 2, 1], &[2, 2, 1]])
                .unwrap();
        assert_eq!(p.dim(), 2);
        let d = p.triangulate();
        assert_eq!(counts_by_dim(&d), vec![(0, 4, 4), (1, 5, 4), (2, 2, 0)]);
        assert!(matches!(
            volume(&p),
            Err(Error::RelativeVolume { dim: 2, ambient: 3 })
        ));
    }

    #[test]
    fn volumes() {
        assert_eq!(volume(&example()).unwrap(), q("1/3"));
        assert_eq!(volume(&square()).unwrap(), q("1"));
        let seg = RationalPolytope::new(vec![
            RationalVector::new(vec![q("0")]),
            RationalVector::new(vec![q("1/2")]),
        ])
        .unwrap();
        assert_eq!(volume(&seg).unwrap(), q("1/2"));
    }

    #[test]
    fn simplex_polytope_matches_simplex_coefficients() {
        let p = example();
        let direct =
            simplex_coefficients(&p.as_simplex().unwrap(), Kind::Closed, DEFAULT_BUDGET).unwrap();
        let assembled = polytope_quasi(&p, Kind::Closed, DEFAULT_BUDGET).unwrap();
        assert!(direct.same_function(&assembled).unwrap());
        let direct =
            simplex_coefficients(&p.as_simplex().unwrap(), Kind::Open, DEFAULT_BUDGET).unwrap();
        let assembled = polytope_quasi(&p, Kind::Open, DEFAULT_BUDGET).unwrap();
        assert!(direct.same_function(&assembled).unwrap());
    }

    #[test]
    fn square_counts() {
        let (closed, open) = polytope_quasi_pair(&square(), DEFAULT_BUDGET).unwrap();
        for m in 0..6i64 {
            assert_eq!(
                closed.eval(&Rational::from(m)),
                Rational::from((m + 1) * (m + 1))
            );
        }
        assert_eq!(open.eval(&q("2")), q("1"));
        assert_eq!(closed.eval(&q("3/2")), q("4"));
        assert_eq!(open.eval(&q("-2")), q("9"));
        assert_eq!(open.eval(&q("0")), q("1"));
    }

    #[test]
    fn reciprocity_examples() {
        let samples: Vec<Rational> = ["0", "1", "2", "1/2", "7/3"].iter().map(|s| q(s)).collect();
        assert!(
            polytope_reciprocity_check(&example(), &samples, DEFAULT_BUDGET)
                .unwrap()
                .ok()
        );
        assert!(
            polytope_reciprocity_check(&square(), &samples, DEFAULT_BUDGET)
                .unwrap()
                .ok()
        );
        let (_, open) = polytope_quasi_pair(&example(), DEFAULT_BUDGET).unwrap();
        assert_eq!(open.eval(&q("-1")), q("-4"));
    }

    #[test]
    fn insertion_order_does_not_matter() {
        let p = RationalPolytope::from_int_points(&[&[0, 0], &[3, 0], &[4, 2], &[1, 3], &[-1, 1]])
            .unwrap();
        let a = p.triangulate();
        let b = p.triangulate_with_order(&[4, 2, 0, 3, 1]).unwrap();
        assert_eq!(a.euler_characteristic(), 1);
        assert_eq!(b.euler_characteristic(), 1);
        for kind in [Kind::Closed, Kind::Open] {
            let qa = assemble(
                &a,
                &cell_coefficients(&a, DEFAULT_BUDGET).unwrap(),
                kind,
                p.denominator(),
            )
            .unwrap();
            let qb = assemble(
                &b,
                &cell_coefficients(&b, DEFAULT_BUDGET).unwrap(),
                kind,
                p.denominator(),
            )
            .unwrap();
            assert!(qa.same_function(&qb).unwrap());
        }
        assert!(p.triangulate_with_order(&[0, 1, 2]).is_err());
    }
}
