//! Computing functions of distributed classical sources over
//! classical-quantum multiple access channels with nested coset codes.
//!
//! The crate is organized bottom-up:
//!
//! - [`field`]: exact arithmetic and linear algebra over prime fields;
//! - [`quantum`]: density operators, entropies, typical projectors and the
//!   square-root measurement;
//! - [`channels`]: CQ point-to-point and multiple-access channel models and
//!   the induced sum ensemble;
//! - [`coding`]: nested coset codes, their CQ decoders, Körner–Marton source
//!   codes and the two-sender message-sum code;
//! - [`rates`]: entropies, message-sum rates, optimization and the
//!   OR-over-a-ternary-field worked example;
//! - [`sim`]: exact error probabilities and Monte Carlo verifiers.

#![allow(
    clippy::needless_range_loop,
    clippy::too_many_arguments,
    clippy::should_implement_trait,
    clippy::neg_cmp_op_on_partial_ord
)]

pub mod channels;
pub mod coding;
pub mod error;
pub mod field;
pub mod limits;
pub mod pmf;
pub mod quantum;
pub mod rates;
pub mod rng;
pub mod sim;
pub mod typicality;

pub use error::{Error, Result};
pub use limits::{Limits, Tolerances};
