//! Truncated arithmetic in `Z_p`, in `O = Z_p[zeta]` and in `L = Z_p G`.

mod cyclo;
mod group_ring;
mod int;

pub use cyclo::{epsilon_unit, power_commutator_identity, CycloElt};
pub use group_ring::GroupRingElt;
pub use int::{PadicInt, Valuation};
