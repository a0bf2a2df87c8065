//! Simulation and asymptotic estimation for multivariate renewal risk models
//! whose claims are discounted by a stochastic investment return process.

pub mod cli;
pub mod config;
pub mod dependence;
pub mod engine;
pub mod estimators;
pub mod error;
pub mod heavy_tails;
pub mod montecarlo;
pub mod processes;
pub mod quadrature;
pub mod rare_sets;
pub mod rng;
pub mod ruin;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
