//! Supersymmetric partner of a PT-symmetric square well with purely
//! imaginary, spatially antisymmetric strength `i g sign(x)` on `|x| < l`,
//! inside a Dirichlet box `(-L, L)`.
//!
//! * [`model`]: parameters, regions, `V^(+)` and the `κ = s + i t` split.
//! * [`spectrum`]: eigenvalues from exact transfer matrices, PT-breaking
//!   detection and the critical coupling.
//! * [`susy`]: ground state, superpotential, partner potential and its jumps.
//! * [`partner`]: eigenfunctions of the partner Hamiltonian.
//! * [`oracle`]: finite-difference eigensolver and ODE residuals used as the
//!   independent reference.
//! * [`verify`]: the full check battery.

pub mod error;
pub mod limits;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod partner;
pub mod report;
pub mod spectrum;
pub mod susy;
pub mod verify;

pub use error::{Error, Result};
pub use model::{decompose_kappa, eval_vplus, make_problem, ComplexSample, EnergyLevel, ProblemParams, Region, RegionTag};
pub use report::{CheckItem, VerificationReport};
pub use spectrum::{critical_coupling, secular_function, solve_spectrum, Regime, SpectrumReport};
