// SPDX-License-Identifier: Apache-2.0

//! Secure exact-repair regenerating codes.
//!
//! * [`field`] and [`matrix`]: exact arithmetic over `F_p` and `F_{p^m}`.
//! * [`code`] and [`constructions`]: linear codes over file and key
//!   symbols, with explicit repair plans.
//! * [`verifier`] and [`enumeration`]: reconstruction, exact-repair and
//!   Type-I/Type-II secrecy checks, by rank and by brute force.
//! * [`entropy`]: entropies of small joint distributions.
//! * [`tradeoff`]: secure storage vs. repair-bandwidth bounds and regions.
//! * [`sim`]: value-level failure, repair and eavesdropping runs.
//! * [`descriptor`]: JSON code descriptors and reports.

pub mod code;
pub mod constructions;
pub mod descriptor;
pub mod entropy;
pub mod enumeration;
pub mod field;
pub mod matrix;
pub mod sim;
pub mod tradeoff;
pub mod verifier;

pub use code::{Attack, DssParams, LinearDssCode, NodeRepair, RepairPlan};
pub use field::FiniteField;
pub use matrix::FieldMatrix;
