//! Airy functions on the real line and Gauss–Legendre quadrature.

mod airy;
mod dd;
mod quadrature;

pub use airy::{airy_ai, airy_ai_prime, airy_pair};
pub use quadrature::{affine_map_rule, gauss_legendre_rule, QuadratureRule};
