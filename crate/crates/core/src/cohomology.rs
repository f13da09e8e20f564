//! Tate cohomology of finite `G`-modules, computed from kernels and images.
//!
//! For `G` cyclic, `H^0 = A^G / NA` and `H^1 = ker N / (g-1)A`, and every
//! other degree repeats one of these.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gmodule::{extract_invariants, FiniteGModule, Invariants};
use crate::howell::HowellForm;
use crate::residue::ResidueRing;
use crate::smith::local_smith;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyResult {
    #[serde(rename = "h0")]
    pub h0_order_exponent: u32,
    #[serde(rename = "h1")]
    pub h1_order_exponent: u32,
}

impl CohomologyResult {
    pub fn is_trivial(&self) -> bool {
        self.h0_order_exponent == 0 && self.h1_order_exponent == 0
    }
}

/// The four subgroups behind the two cohomology groups, as `log_p` orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormData {
    pub fixed: u32,
    pub norm_image: u32,
    pub norm_kernel: u32,
    pub commutator: u32,
}

pub fn norm_data<R: ResidueRing>(a: &FiniteGModule<R>) -> NormData {
    let n = a.norm();
    NormData {
        fixed: a.subgroup_order(&a.fixed_points()),
        norm_image: a.subgroup_order(&a.image(&n)),
        norm_kernel: a.subgroup_order(&a.kernel(&n)),
        commutator: a.subgroup_order(&a.commutator()),
    }
}

pub fn tate_cohomology<R: ResidueRing>(a: &FiniteGModule<R>) -> CohomologyResult {
    let d = norm_data(a);
    CohomologyResult {
        h0_order_exponent: d.fixed - d.norm_image,
        h1_order_exponent: d.norm_kernel - d.commutator,
    }
}

/// Whether `invariants` predict a cohomologically trivial module:
/// `t != 0` when `r, s >= 1`, and `s = 0` when the action is trivial.
pub fn ct_from_invariants(inv: &Invariants) -> bool {
    if inv.r >= 1 && inv.s >= 1 {
        inv.t != 0
    } else {
        inv.s == 0
    }
}

/// `H^0(G, A) = 0`, checked against the `t`-criterion.
pub fn is_ct<R: ResidueRing>(a: &FiniteGModule<R>) -> Result<bool> {
    let ct = tate_cohomology(a).h0_order_exponent == 0;
    let inv = extract_invariants(a, &a.unit_generator())?;
    if ct != ct_from_invariants(&inv) {
        return Err(Error::ClassificationMismatch(format!(
            "cohomology says ct={ct} but invariants are {inv:?}"
        )));
    }
    Ok(ct)
}

/// Whether the finite-index submodule `M` of `L`, given by its image in
/// `(Z/p^K)^p` with `p^K L` inside `M`, is free over `L`.
///
/// `M` is free iff `M = xL` for some `x`, and then `x` can be taken from
/// any generating set, here the Howell rows together with `p^K`. A
/// candidate works iff `[L : xL]` equals `[L : M]`, and the index of `xL`
/// is read off the local Smith form of the integer circulant of a lift of `x`.
pub fn is_free<R: ResidueRing>(m: &HowellForm<R>) -> bool {
    let n = m.index_exponent();
    if n == 0 {
        return true;
    }
    let ring = m.ring();
    let p = ring.prime();
    let mut p_k = vec![BigInt::from(0); m.ncols()];
    p_k[0] = BigInt::from(p).pow(ring.exponent());
    let lifts = m
        .rows()
        .iter()
        .map(|row| row.iter().map(|c| BigInt::from(ring.to_biguint(c))).collect::<Vec<_>>());
    lifts.chain(std::iter::once(p_k)).any(|lift| {
        let circulant: Vec<Vec<BigInt>> = (0..lift.len())
            .map(|i| (0..lift.len()).map(|j| lift[(j + lift.len() - i) % lift.len()].clone()).collect())
            .collect();
        let s = local_smith(&circulant, lift.len(), p);
        s.rank == lift.len() && s.torsion_exponent() == n
    })
}

/// `M` is free iff `L/M` is cohomologically trivial.
pub fn free_iff_ct_check<R: ResidueRing>(m: &HowellForm<R>) -> Result<bool> {
    let a = FiniteGModule::new(m.clone())?;
    let ct = tate_cohomology(&a).h0_order_exponent == 0;
    Ok(ct == is_free(m))
}
