//! Bound states of the radial Dirac equation with a vector Coulomb
//! potential -a1/r and a Lorentz scalar Coulomb potential -a2/r, worked
//! out through the supersymmetric factorization of the second-order
//! radial problem.
//!
//! The crate splits into four layers:
//!
//! - [`spectral`]: couplings, channels and every closed-form scalar —
//!   the effective orbital parameter, the transformed interaction
//!   components, the SUSY-breaking diagnostic a^2, and level energies by
//!   both the explicit formula and the implicit self-consistent form.
//! - [`ladder`]: exact coefficient-level algebra of the eigenfunctions
//!   (polynomial-times-exponential class), the factorization operators,
//!   shape-invariance remainder, parameter-shift ladder, the similarity
//!   transform back to physical components, and closed-form norms.
//! - [`oracle`]: an independent finite-difference eigensolver and a
//!   self-consistent energy solver that never touch the closed forms.
//! - [`numerics`]: log-Gamma, bracketed root finding and Sturm-sequence
//!   tridiagonal eigenvalues shared by the layers above.
//!
//! All public operations are pure functions of their inputs and safe to
//! call concurrently.

// `!(x > 0.0)` rejects NaN along with the out-of-domain values; the
// suggested `x <= 0.0` would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod ladder;
pub mod numerics;
pub mod oracle;
pub mod spectral;

pub use error::{Error, Result};
pub use ladder::{PolyExpFunction, SpinorBasis, SpinorRadialPair};
pub use spectral::{Branch, Channel, Couplings, EnergyLevel, KHat};
