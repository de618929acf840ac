//! Numerical laboratory for self-similar solutions of the one-dimensional
//! reaction-diffusion equation u_t = u_xx + u|u|^{p-1} with 0 < p < 1.
//!
//! Self-similar solutions u = t^{1/(1-p)} w(x/sqrt(t)) reduce the equation
//! to the phase plane x' = y, y' = H(x) - eta y / 2 with the non-Lipschitz
//! reaction H(x) = x/(1-p) - sign(x)|x|^p. Three families live there:
//!
//! * two-sided decaying profiles from seeds inside the critical level set
//!   of V(x, y) = y^2/2 - x^2/(2(1-p)) + |x|^{1+p}/(1+p)   ([`homoclinic`]),
//! * a front connecting the origin to the equilibrium (1-p)^{1/(1-p)},
//!   pinned by shooting in the initial speed                ([`heteroclinic`]),
//! * periodic orbits of the eta-independent core system     ([`periodic`]).
//!
//! [`pde`] closes the loop, checking the reconstructed space-time fields
//! against the reaction-diffusion equation itself; [`sweep`] distributes
//! parameter studies over threads without giving up reproducibility.

pub mod error;
pub mod fit;
pub mod heteroclinic;
pub mod homoclinic;
pub mod integrator;
pub mod kernels;
pub mod pde;
pub mod periodic;
pub mod quad;
pub mod rk;
pub mod sweep;

pub use error::{Result, SimError};
pub use kernels::ProblemParams;
