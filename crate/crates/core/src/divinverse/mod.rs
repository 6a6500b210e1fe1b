//! Constructive right-inverses of the piecewise divergence: element
//! bubbles, the two-triangle edge construction, whole vertex patches, and
//! the reduced velocity space of Lagrange functions plus normal edge bubbles.

pub mod bubble;
pub mod edge_pair;
pub mod minimal;
pub mod patch_inverse;

pub use bubble::{
    bubble_least_squares, bubble_right_inverse, lambda_defect, project_out_lambda, BubbleBasis, BubbleSolve,
    BUBBLE_RTOL,
};
pub use edge_pair::{
    condition_number, edge_pair_functions, edge_pair_matrix, edge_pair_matrix_closed_form, edge_pair_right_inverse,
    relabel, EdgePair, EdgePairInverse, EdgePairSummary, PairField,
};
pub use patch_inverse::{bubble_lambda_matrix, l2_norm_pw, patch_right_inverse, PatchInverse, PatchVelocity};
pub use minimal::minimal_cr_space;
