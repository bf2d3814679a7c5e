//! Pure-dephasing dynamics of one and two qubits coupled to a mean-field
//! Ising / transverse-Ising spin bath.
//!
//! The crate is organised bottom-up:
//!
//! * [`mean_field`] solves the order-parameter self-consistency `Θ/J = tanh(Θ/2T)`.
//! * [`su2`] holds closed-form exponentials and traces of `aσx + bσz`.
//! * [`dephasing`] evaluates the coherence factor `r(t)` and the two-qubit
//!   coefficients `A(t)`, `B(t)`, either at finite bath size or in the
//!   large-bath Gaussian limit.
//! * [`two_qubit`] assembles the reduced two-qubit density matrix.
//! * [`entanglement`] computes the Wootters concurrence.
//! * [`oracle`] brute-forces the full system+bath evolution at small bath size.
//!
//! Conventions: spin operators are `S = σ/2`; the computational basis state
//! `|0⟩` is the `S^z = +1/2` eigenstate; two-qubit matrices use the ordering
//! `|00⟩, |01⟩, |10⟩, |11⟩` with `ρ_ij = ψ_i ψ_j*`.

pub mod dephasing;
pub mod entanglement;
mod error;
pub mod linalg;
pub mod mean_field;
pub mod oracle;
pub mod su2;
pub mod two_qubit;

pub use num_complex::Complex64;

pub use dephasing::{CoeffMode, DephasingCoeffs, SystemParams};
pub use entanglement::ConcurrenceValue;
pub use error::{Error, Result};
pub use mean_field::{BathParams, OrderSolution, Phase};
pub use su2::{Complex2x2, TracelessXZ};
pub use two_qubit::{PureState2Q, TwoQubitDensity};
