//! Exact Frobenius-trace computations for the characteristic-2 Airy sheaves
//! and their descents, full-field trace censuses, moment bounds, and the
//! primitive-prime-divisor arithmetic of Suzuki and Ree tori.

pub mod airy;
pub mod census;
pub mod error;
pub mod exactnum;
pub mod gf2m;
pub mod linalg;
pub mod moments;
pub mod ntheory;
pub mod ppd;
pub mod vdgvv;
pub mod verify;
pub mod witt2;

pub use error::{Error, Result};
pub use exactnum::{ClearedValue, GaussInt};
pub use gf2m::{FieldCtx, FqElt};
pub use witt2::{W2F2, Witt2};
