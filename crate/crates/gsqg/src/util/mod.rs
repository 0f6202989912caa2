//! Small numeric utilities shared across the crate: compensated summation,
//! a deterministic RNG for sampled checks, adaptive Gauss–Kronrod
//! quadrature, and a power-tail series engine.

pub mod quad;
pub mod rng;
pub mod series;
pub mod sum;
