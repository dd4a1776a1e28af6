//! Quantum speed limits for two-qubit states under local Hamiltonians.
//!
//! Pure and mixed two-qubit states evolve under `H = H_A ⊗ 1 + 1 ⊗ H_B`.
//! The crate computes the first fidelity minimum of the evolution, the
//! energy moments of the state, and the ratio between the actual time to
//! reach that fidelity and the speed-limit bound
//! `max(α(F) π/(2E), β(F) π/(2ΔE))`. Entanglement is measured by the
//! concurrence, so the ratio can be studied as a function of it.
//!
//! Units: `ħ = ε = 1`, time is the dimensionless phase `Ω = t ε / ħ`.

pub mod config;
pub mod dynamics;
pub mod experiments;
pub mod families;
pub mod fidelity;
pub mod linalg;
pub mod minima;
pub mod qsl;
pub mod sampling;
pub mod search;
pub mod states;
pub mod validate;

pub use dynamics::{LocalHamiltonian, TwoQubitState};
pub use linalg::ComplexMatrix;
pub use qsl::{qsl_time, AlphaTable, Branch, QslBound};
pub use sampling::RandomStream;
pub use states::{DensityMatrix2Q, PureState2Q};
