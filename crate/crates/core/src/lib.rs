//! Canonical liftings modulo `p^2` in exact arithmetic.
//!
//! Length-2 Witt vectors, Frobenius splittings of Calabi–Yau hypersurfaces,
//! the lifted equations they determine, the crystalline Frobenius of elliptic
//! curves over `Z/p^2`, canonical coordinates for ordinary Frobenius lifts on
//! truncated power series, and quasi-F-splittings.

// dense matrix code indexes rows and columns explicitly
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod canlift;
pub mod crysfrob;
pub mod exactring;
pub mod frobord;
pub mod fsplit;
pub mod qfsplit;
pub mod suite;
pub mod witt;

pub use error::{Error, Result};
