//! Computations around small elements of cosets of small multiplicative
//! subgroups modulo a prime, and exhaustive checks of the bounds they obey.
//!
//! * [`modp`]: residue-field arithmetic and the integer and rational heights.
//! * [`smooth`]: smooth-number counts, the Dickman function, `Φ̃`, rank.
//! * [`coset`]: the sets `U(k,t,a)`, `V(k,t,a)` and their bounds.
//! * [`congruence`]: two monomial congruences in a box, Weyl sums, discrepancy.
//! * [`fixed_points`]: solutions of `g^h ≡ h (mod p)`.
//! * [`sweep`]: parallel parameter sweeps producing [`report::BoundReport`] rows.

pub mod arith;
pub mod coset;
pub mod congruence;
pub mod error;
pub mod fixed_points;
pub mod modp;
pub mod report;
pub mod smooth;
pub mod sweep;

pub use error::{Error, Result};
pub use modp::{CosetSpec, HeightWitness, PrimeContext};
pub use report::{BoundReport, CheckId, Params, Relation, Summary, Verdict};
