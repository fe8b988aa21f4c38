//! Exact-arithmetic kernel for finite-dimensional Hopf heaps and their
//! relatives, all represented by structure constants over `Q` or `Q(sqrt(d))`.
//!
//! The crate verifies every defining identity of coalgebras, Hopf heaps,
//! Hopf algebras, Hopf trusses and braces, heap modules, and Rota-Baxter
//! operators by exhaustive sparse tensor contraction, and builds the derived
//! objects (heap/algebra conversions, Grunspan maps, trusses, descendent
//! heaps, structure-theorem isomorphisms) with re-verification at every step.
//!
//! Everything is immutable after construction; all checks are exact — there
//! is no floating point anywhere.

pub mod bundle;
pub mod coalg;
pub mod corpus;
pub mod error;
pub mod heap;
pub mod hmodule;
pub mod linalg;
pub mod map;
pub mod poly;
pub mod report;
pub mod rota;
pub mod scalar;
pub mod tensor;
pub mod truss;

pub use error::{Error, Result};
pub use map::{LinearMap, TensorOp};
pub use report::{CheckStatus, VerificationReport, Witness};
pub use scalar::{FieldSpec, Scalar};
pub use tensor::SparseTensor;
