//! Exact Gowers uniformity norms on Z_N, box norms on product sets, and
//! brute-force engines for the linear-forms quantities that control
//! arithmetic progressions in pseudorandom measures.
//!
//! Every engine is an exact finite-`N` evaluator. Brute-force paths are
//! guarded by a [`Budget`] on the number of elementary products.

pub mod apcount;
pub mod budget;
pub mod cli;
pub mod cyclic;
pub mod error;
pub mod genmeasure;
pub mod gowersnorm;
pub mod hypersystem;
pub mod linform;
pub mod report;
pub mod sum;

pub use budget::Budget;
pub use cyclic::{CyclicFn, Measure, ResidueSet, Spectrum};
pub use error::{Error, Result};
pub use gowersnorm::{CubeVertex, EdgeFn};
pub use hypersystem::{HypergraphSystem, WeightedHypergraph};
pub use report::{Check, VerificationReport};
