//! Exact positive geometry: Plücker coordinates, positivity tests, the
//! amplituhedron map `Y = C Z`, the moment map onto the hypersimplex and
//! canonical forms of polygons.
//!
//! Everything is computed over an exact ordered field, so positivity and
//! vanishing are decided without tolerances.

mod amplituhedron;
mod grassmannian;
mod matrix;
mod random;

use thiserror::Error;

pub use amplituhedron::{
    all_polygon_triangulations, amplituhedron_point, bracket, bracket_signs, jacobian_rank, moment_curve,
    polygon_canonical_form, polygon_triangle_form, validate_polygon_triangulation,
};
pub use grassmannian::{
    hypersimplex_contains, hypersimplex_vertices, is_totally_nonneg, is_totally_positive, moment_map, pluecker,
    PlueckerVector,
};
pub use matrix::{maximal_minors, subsets, Matrix};
pub use random::{random_positive_row, random_tnn};

#[derive(Debug, Error)]
pub enum PosGeomError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix of rank {rank} where rank {expected} is required")]
    RankDeficient { rank: usize, expected: usize },
    #[error("Y = C Z has rank {rank} < {expected}")]
    RankCollapse { rank: usize, expected: usize },
    #[error("Y lies on the boundary line through Z_{i} and Z_{j}")]
    PointOnBoundary { i: usize, j: usize },
    #[error("Y lies on the diagonal through Z_{i} and Z_{j} of the chosen triangulation")]
    SpuriousPole { i: usize, j: usize },
    #[error("not a triangulation of the polygon: {0}")]
    NotATriangulation(String),
    #[error(transparent)]
    Parse(#[from] crate::text::ParseError),
}
