//! Teleportation of arbitrary two-qubit states over four-qubit entangled
//! channels.
//!
//! A four-qubit state shared between Alice (qubits 3, 4) and Bob (qubits
//! 5, 6) can serve as the resource for teleporting an unknown two-qubit
//! state held by Alice on qubits 1, 2. Alice measures the pairs (1,3) and
//! (2,4) in the Bell basis; each of the sixteen outcomes leaves Bob's pair
//! in a state obtained from the input by one of sixteen 4x4 *transformation
//! operators*. Whether those operators are unitary, invertible, or singular
//! decides whether teleportation over the channel is perfect, probabilistic,
//! or impossible.
//!
//! The crate provides:
//!
//! * [`qmath`] — dense complex linear algebra for up to seven qubits:
//!   Kronecker products, partial inner products over labelled qubits, and
//!   4x4 matrix analysis (determinant, inverse, singular values, unitary
//!   dilation).
//! * [`bellkit`] — the Bell basis, the sixteen four-qubit product states
//!   built from it, and the Pauli factors connecting the transformation
//!   operators.
//! * [`channel`] — the channel catalog, a plain-text file format, and
//!   seeded random channels.
//! * [`transform`] — extraction of the sixteen operators from a channel and
//!   the perfect/probabilistic/impossible classification.
//! * [`protocol`] — end-to-end simulation of the protocol on the full
//!   six-qubit state vector, including the conclusive filter for
//!   probabilistic channels and seeded Monte Carlo runs.
//!
//! ```
//! use teleport4::channel::{catalog, CatalogName};
//! use teleport4::transform::{analyze, Verdict};
//!
//! let channel = catalog(&CatalogName::YeoChua).unwrap();
//! let report = analyze(&channel).unwrap();
//! assert_eq!(report.classification.verdict, Verdict::Perfect);
//! ```

pub mod bellkit;
pub mod channel;
pub mod protocol;
pub mod qmath;
pub mod transform;

#[cfg(doctest)]
mod book;

pub use bellkit::BellIndex;
pub use channel::{catalog, CatalogName, Channel};
pub use protocol::InputState;
pub use qmath::{c64, Complex64};
pub use transform::{analyze, classify, AnalysisReport, Classification, Verdict};
