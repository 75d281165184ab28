//! Gowers uniformity norms on Z_N and box norms on product sets.

mod boxnorm;
mod edge;
mod uniform;

pub use boxnorm::{box_norm_brute, box_power_brute, cube_cost, gcs_cost, gcs_verify};
pub(crate) use boxnorm::cube_average;
pub use edge::{CubeVertex, EdgeFn};
pub(crate) use edge::{advance, strides};
pub use uniform::{u_brute_cost, u_norm_brute, u_norm_fast, u_power_brute, u_power_fast, CLAMP_TOLERANCE};
pub(crate) use uniform::{clamp_cube_average, root};
