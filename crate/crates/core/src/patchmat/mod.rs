//! Patch basis functions, the functionals Λ, the Vandermonde matrix `M`,
//! its scaled forms `A` and `B`, known kernel vectors, and a checker for
//! the kernel dimensions.

pub mod basis;
pub mod lemmas;
pub mod matrices;

pub use basis::{edge_bubble, PatchBasis, PatchField};
pub use lemmas::{lemma_report, verify_patch_lemmas, KernelAngles, LemmaReport, KERNEL_ANGLE_TOL};
pub use matrices::{
    assemble_m_closed_form, assemble_m_numeric, b_rows, derived_matrices, kernel_vectors, lambda_apply,
    left_scaling, m_from_basis, right_scaling, scaled_block, KernelVectors, PatchMatrices, SCALED_BLOCK_ZEROS,
};
