//! Numerics for the Airy-kernel resolvent on `(σ, ∞)`, the Tracy–Widom
//! functions derived from it, and the two-time tacnode kernel in both its
//! Airy-resolvent form and its 4×4 Riemann–Hilbert form.
//!
//! The crate is `no_std` with `alloc`. Everything is deterministic: no
//! randomness, no global state, and results do not depend on evaluation
//! order.
//!
//! ```
//! use tacnode_core::{AiryResolvent, Resolution};
//!
//! let r = AiryResolvent::build(0.0, &Resolution::default()).unwrap();
//! assert!((r.det() - 0.969_372_828_355_262_7).abs() < 1e-12);
//! ```

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

mod error;
pub mod gap;
pub mod linalg;
mod math;
pub mod operator;
pub mod rh;
pub mod special;
pub mod tacnode;
pub mod tail;
pub mod tracy_widom;
pub mod verify;

pub use error::{Error, Result};
pub use gap::gap_probability;
pub use operator::{airy_kernel_shifted, fredholm_det_symmetric, AiryResolvent, Resolution};
pub use rh::{ResidueEntries, RhParams, SParam};
pub use special::{airy_ai, airy_ai_prime, airy_pair, gauss_legendre_rule, QuadratureRule};
pub use tacnode::{FvParams, ScriptA, Variant};
pub use tail::TailSpec;
pub use tracy_widom::TwScalars;
pub use verify::CheckReport;
