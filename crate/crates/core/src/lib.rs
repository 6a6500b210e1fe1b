//! Crouzeix–Raviart finite elements of arbitrary degree in 2D, the vertex
//! patch Vandermonde matrices and their kernels, constructive right-inverses
//! of the piecewise divergence, and numerical inf-sup constants.

pub mod crspace;
pub mod divinverse;
pub mod error;
pub mod geom;
pub mod infsup;
pub mod linalg;
pub mod mesh;
pub mod patchmat;
pub mod poly;
pub mod report;

pub use error::{Error, Result};
