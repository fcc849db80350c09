//! Triangulation 1-skeletons, graph Cheeger constants, and normal-surface
//! synthesis with its cell-count bounds.

mod cheeger;
mod normal;
mod triangulation;

pub use cheeger::{cheeger_exact, cheeger_sweep, CheegerError};
pub use normal::{
    boundary_set, build_surface, claim_bounds_eval, claim_constants, d2_upper_bound_surface,
    enumerate_normal_curve_types, face_parity_check, CellCounts, ClaimConstants, ClaimReport,
    CurveType, DiscCell, NormalSurfaceComplex, ParityReport, SurfaceError, VertexSet,
};
pub use triangulation::{
    FaceGluing, Perm4, SkeletonGraph, Triangulation, TriangulationError, TET_EDGES,
};
