//! Brute-force evaluators for the linear-forms quantities over a weighted
//! hypergraph, and checks of the Cauchy-Schwarz chains that bound them.

mod cube;
mod engine;
mod lf2;
mod nuprime;
mod slf;

pub use cube::{binomial_expansion_identity, cube_centered_bound, cube_centered_expectation, cube_expectation, CubePattern};
pub use lf2::{lf2_chain_cost, lf2_chain_verify, lf2_cost, lf2_expectation, lf2_telescoping, lf2_term, Lf2Exponents};
pub use nuprime::{nu_prime, nu_prime_cost, nu_prime_l2_dev};
pub use slf::{
    chain_cost, chain_verify, q_value, slf_cost, slf_lhs, slf_single_chain_cost, slf_single_chain_verify, slf_single_cost,
    slf_single_lhs, slf_single_q_value, slf_single_ybar, ybar_sq_expectation, Cap, SlfInstance, SlfSingleInstance,
    YbarMoments, POINTWISE_SLACK,
};
