//! JSON formats. Rationals are always written as strings such as `"-3/2"`.

use serde::{Deserialize, Serialize};

use crate::arith::{Rational, RationalVector};
use crate::error::{Error, Result};
use crate::polytope::{Decomposition, RationalPolytope};
use crate::quasi::{PeriodicPiecewisePolynomial, Piece, QuasiPolynomial, Window};
use crate::simplex::{Interval, Kind, StepFunction};

/// `{"name": ..., "vertices": [[rational-string, ...], ...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeFile {
    #[serde(default)]
    pub name: String,
    pub vertices: Vec<Vec<Rational>>,
}

impl PolytopeFile {
    pub fn from_polytope(name: &str, p: &RationalPolytope) -> Self {
        PolytopeFile {
            name: name.to_string(),
            vertices: p.points().iter().map(|v| v.entries().to_vec()).collect(),
        }
    }

    pub fn to_polytope(&self) -> Result<RationalPolytope> {
        RationalPolytope::new(
            self.vertices
                .iter()
                .cloned()
                .map(RationalVector::new)
                .collect(),
        )
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Parses a polytope file, returning its name and polytope.
pub fn parse_polytope(json: &str) -> Result<(String, RationalPolytope)> {
    let file: PolytopeFile = serde_json::from_str(json).map_err(parse_err)?;
    if file.vertices.is_empty() {
        return Err(Error::Parse("polytope file lists no vertices".into()));
    }
    let p = file
        .to_polytope()
        .map_err(|e| Error::Parse(e.to_string()))?;
    Ok((file.name, p))
}

#[derive(Serialize, Deserialize)]
struct QuasiDoc {
    kind: Kind,
    dim: usize,
    period: Rational,
    coefficients: Vec<CoeffDoc>,
}

#[derive(Serialize, Deserialize)]
struct CoeffDoc {
    k: usize,
    pieces: Vec<Piece>,
}

pub fn quasi_to_json(q: &QuasiPolynomial) -> String {
    let doc = QuasiDoc {
        kind: q.kind(),
        dim: q.dim(),
        period: q.period().clone(),
        coefficients: q
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| CoeffDoc {
                k,
                pieces: c.pieces().to_vec(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("quasi-polynomials serialize")
}

pub fn quasi_from_json(json: &str) -> Result<QuasiPolynomial> {
    let doc: QuasiDoc = serde_json::from_str(json).map_err(parse_err)?;
    let window = Window::for_kind(doc.kind);
    let mut coeffs = doc.coefficients;
    coeffs.sort_by_key(|c| c.k);
    if coeffs.iter().enumerate().any(|(i, c)| c.k != i) {
        return Err(Error::Parse(
            "coefficient indices must be 0..=dim without gaps".into(),
        ));
    }
    let funcs = coeffs
        .into_iter()
        .map(|c| PeriodicPiecewisePolynomial::from_pieces(doc.period.clone(), window, c.pieces))
        .collect::<Result<Vec<_>>>()?;
    QuasiPolynomial::new(doc.kind, doc.dim, funcs)
}

#[derive(Serialize, Deserialize)]
struct StepDoc {
    domain: Interval,
    pieces: Vec<StepPieceDoc>,
}

#[derive(Serialize, Deserialize)]
struct StepPieceDoc {
    #[serde(flatten)]
    interval: Interval,
    count: u64,
}

pub fn steps_to_json(f: &StepFunction) -> String {
    let doc = StepDoc {
        domain: f.domain().clone(),
        pieces: f
            .pieces()
            .iter()
            .map(|(interval, count)| StepPieceDoc {
                interval: interval.clone(),
                count: *count,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("step functions serialize")
}

pub fn steps_from_json(json: &str) -> Result<StepFunction> {
    let doc: StepDoc = serde_json::from_str(json).map_err(parse_err)?;
    let pieces: Vec<(Interval, u64)> = doc
        .pieces
        .into_iter()
        .map(|p| (p.interval, p.count))
        .collect();
    StepFunction::from_counts(doc.domain, &pieces)
}

#[derive(Serialize)]
struct DecompositionDoc<'a> {
    vertices: &'a [RationalVector],
    cells: Vec<CellDoc<'a>>,
}

#[derive(Serialize)]
struct CellDoc<'a> {
    dim: usize,
    vertices: &'a [usize],
    on_boundary: bool,
}

/// Cells as indices into the polytope's vertex list, with boundary flags.
pub fn decomposition_to_json(p: &RationalPolytope, d: &Decomposition) -> String {
    let doc = DecompositionDoc {
        vertices: p.vertices(),
        cells: d
            .cells()
            .iter()
            .map(|c| CellDoc {
                dim: c.dim(),
                vertices: &c.vertex_indices,
                on_boundary: c.on_boundary,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("decompositions serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasi::simplex_coefficients;
    use crate::simplex::{determined_sets, RationalSimplex, DEFAULT_BUDGET};

    const EXAMPLE: &str = r#"{"name": "example", "vertices": [["0","0","0"],["1","1","0"],["1","0","1"],["0","1","1"]]}"#;

    #[test]
    fn polytope_file() {
        let (name, p) = parse_polytope(EXAMPLE).unwrap();
        assert_eq!(name, "example");
        assert_eq!(p.dim(), 3);
        let again = serde_json::to_string(&PolytopeFile::from_polytope(&name, &p)).unwrap();
        assert_eq!(parse_polytope(&again).unwrap().1, p);
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            r#"{"vertices": [["1/0"]]}"#,
            r#"{"vertices": []}"#,
            r#"{"vertices": [["1"], ["1", "2"]]}"#,
            r#"{"vertices": [[1]]}"#,
            "not json",
        ] {
            assert!(matches!(parse_polytope(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn quasi_round_trip() {
        let s =
            RationalSimplex::new(parse_polytope(EXAMPLE).unwrap().1.vertices().to_vec()).unwrap();
        for kind in [Kind::Closed, Kind::Open] {
            let q = simplex_coefficients(&s, kind, DEFAULT_BUDGET).unwrap();
            let text = quasi_to_json(&q);
            assert_eq!(quasi_from_json(&text).unwrap(), q);
            assert_eq!(quasi_to_json(&quasi_from_json(&text).unwrap()), text);
        }
        let q = simplex_coefficients(&s, Kind::Closed, DEFAULT_BUDGET).unwrap();
        let value: serde_json::Value = serde_json::from_str(&quasi_to_json(&q)).unwrap();
        assert_eq!(value["coefficients"][3]["pieces"][0]["poly"][0], "1/3");
        assert_eq!(value["period"], "1");
    }

    #[test]
    fn step_round_trip() {
        let s =
            RationalSimplex::new(parse_polytope(EXAMPLE).unwrap().1.vertices().to_vec()).unwrap();
        let f = determined_sets(&s, Kind::Open, DEFAULT_BUDGET).unwrap();
        let text = steps_to_json(&f);
        assert_eq!(steps_from_json(&text).unwrap(), f);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["pieces"][0]["lo"], "3/2");
        assert_eq!(value["pieces"][0]["count"], 1);
    }

    #[test]
    fn broken_pieces_rejected() {
        let s =
            RationalSimplex::new(parse_polytope(EXAMPLE).unwrap().1.vertices().to_vec()).unwrap();
        let q = simplex_coefficients(&s, Kind::Closed, DEFAULT_BUDGET).unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&quasi_to_json(&q)).unwrap();
        value["coefficients"][0]["pieces"][0]["interval"]["hi"] = "1/3".into();
        assert!(quasi_from_json(&value.to_string()).is_err());
    }
}
