//! Fixed inputs shared by the benchmarks.

use ehrhart::{random_polytope, RationalPolytope, RationalSimplex};

pub fn example_simplex() -> RationalSimplex {
    RationalSimplex::from_int_vertices(&[&[0, 0, 0], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1]])
        .expect("valid simplex")
}

pub fn unit_cube() -> RationalPolytope {
    let corners: Vec<[i64; 3]> = (0..8)
        .map(|m| [m & 1, (m >> 1) & 1, (m >> 2) & 1])
        .collect();
    let refs: Vec<&[i64]> = corners.iter().map(|c| c.as_slice()).collect();
    RationalPolytope::from_int_points(&refs).expect("valid cube")
}

/// Seeded random polytopes in dimension `ambient` with small denominators.
pub fn random_fixtures(ambient: usize, count: u64) -> Vec<RationalPolytope> {
    (0..count)
        .map(|seed| random_polytope(seed, ambient, ambient + 2, 3, 3).expect("generator succeeds"))
        .collect()
}
