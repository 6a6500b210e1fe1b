//! Triangulations, admissibility, vertex patches and their geometry.

pub mod admissibility;
pub mod geometry;
pub mod patch;
pub mod refine;
pub mod seeds;
pub mod triangulation;

pub use admissibility::{check_admissible, AdmissibilityReport};
pub use geometry::PatchGeometry;
pub use patch::{extract_patch, random_patch, regular_patch, VertexPatch};
pub use refine::refine_uniform;
pub use triangulation::{Edge, MeshFile, Triangulation, DEGENERACY_RTOL};

/// Geometry of a patch; both formulas for `γ±` are kept.
pub fn patch_geometry(patch: &VertexPatch) -> crate::Result<PatchGeometry> {
    PatchGeometry::new(patch)
}
