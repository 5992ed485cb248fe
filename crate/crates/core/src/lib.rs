//! Exact computation of relative Hochschild cohomology for monogenic
//! extensions `A = K[x, alpha]/(f)` of a finite-dimensional algebra `K`,
//! together with cup products, Gerstenhaber brackets and closed-form checks.

pub mod closedforms;
pub mod cohomology;
pub mod field;
pub mod instances;
pub mod kalgebra;
pub mod linalg;
pub mod monogenic;
pub mod products;

pub use field::{Field, FieldDescriptor, FieldError, Scalar};
pub use linalg::{Mat, Vector};
