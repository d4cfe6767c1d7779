//! Signature-6 analogues of the Jacobi elliptic functions.
//!
//! The classical functions sn, cn, dn invert the incomplete integral of
//! F(1/2, 1/2; 1/2; κ²sin²θ). This crate builds the parallel family in
//! Ramanujan's signature 6, replacing the kernel by F(1/6, 5/6; 1/2; κ²sin²θ):
//!
//! ```text
//! u(φ) = ∫₀^φ F(1/6, 5/6; 1/2; κ² sin²θ) dθ,   0 < κ < 1.
//! ```
//!
//! Inverting u ↦ φ and writing sin ψ = κ sin φ yields the frame
//!
//! ```text
//! s = sin φ,  c = cos φ,  d = cos ψ,  ∂ = cos(2ψ/3),  σ = sin(2ψ/3),
//! δ = dφ/du = d/∂,  ∇ = ∂².
//! ```
//!
//! These satisfy the Jacobi-style quadratic relations c² + s² = 1 and
//! d² + κ²s² = 1, a cubic triplication relation 2d² − 1 = 4∂³ − 3∂, and a
//! family of first-order algebraic differential equations; unlike the
//! classical case the family is not elliptic. The crate evaluates the frame
//! on the real line ([`amplitude`]), continues it holomorphically along
//! complex paths ([`flow`]), verifies every identity as a numerical residual
//! ([`verify`]), and exposes the hypergeometric kernel itself ([`hyper6`]).

// Oracle constants and quadrature tables keep their 20-digit
// transcriptions; the extra digits document the offline precision.
#![allow(clippy::excessive_precision)]

pub mod amplitude;
pub mod error;
pub mod flow;
pub mod hyper6;
pub mod verify;

pub use amplitude::{
    forward_u, frame_at, invert_phi, psi_of_phi, quarter_period, Frame, Modulus, Tolerances,
};
pub use error::{Error, Result};
pub use flow::{
    classical_quarter_periods, integrate_path, integrate_segment, monodromy_scan, ClassicalState,
    FlowState, MonodromyReport, PathSpec, SystemKind,
};
pub use verify::{identity_residuals, residual_report, ResidualReport};
