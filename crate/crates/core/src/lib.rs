//! Grothendieck rings of the Verlinde categories `Ver_{p^n}` and the
//! `SL_2` representation theory in characteristic `p` behind them.

pub mod char_ring;
pub mod error;
pub mod frobenius_limit;
pub mod prime;
pub mod sl2_modp;
pub mod verify_suite;
pub mod verlinde_ring;

pub use error::{Error, Result};
pub use prime::Prime;
