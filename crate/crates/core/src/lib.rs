//! Quotients of the `p`-adic group ring `Z_p G`, `G` cyclic of order `p`.
//!
//! Every rank-one module `A = L/M` over `L = Z_p G` is classified: finite
//! ones by the invariants `(r, s, t)`, infinite ones by one of five types.
//! The crate computes canonical presentations, extracts invariants,
//! computes Tate cohomology directly, enumerates submodules by brute force
//! and checks the submodule-counting zeta series.

pub mod census;
pub mod classify;
pub mod cohomology;
pub mod error;
pub mod gmodule;
pub mod howell;
pub mod padic;
pub mod residue;
pub mod smith;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};
