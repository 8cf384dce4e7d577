//! Exact local Morse data (LMD) of permissible smooth divisors.
//!
//! The crate computes the graded local Morse data of smooth divisors on three
//! families of tropical spaces and checks the Riemann–Roch type identities
//! they satisfy:
//!
//! * [`curve`]: metric graphs with infinite leaves, divisors given by
//!   piecewise-linear derivative profiles; `χ(LMD) = deg + χ_top`.
//! * [`torus`]: quadratic divisors on `Rⁿ/Zⁿ`; `χ(LMD) = det M`, plus
//!   Bohr–Sommerfeld lattice counts.
//! * [`toric`]: lattice polytopes, the log-sum-exp potential, its moment map,
//!   Ehrhart polynomials and reciprocity.
//! * [`compose`]: Künneth products, étale covers and symmetric powers.
//!
//! Counting is done in exact integer/rational arithmetic. Floating point is
//! only used to evaluate the toric potential and its derivatives.

pub mod compose;
pub mod curve;
pub mod exact;
pub mod fixtures;
pub mod graded;
pub mod toric;
pub mod torus;

pub use graded::{sym_euler, GradedModule};
