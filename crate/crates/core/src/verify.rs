//! Self-test suite over all classes and submodules up to a given order.

use num_bigint::BigInt;

use crate::census::{census, EnumerationOptions};
use crate::classify::classify_quotient;
use crate::cohomology::{ct_from_invariants, tate_cohomology};
use crate::error::Result;
use crate::gmodule::{
    canonical_presentation, finite_classes, guard_precision, norm_identity_check, FiniteGModule, InvariantExtractor,
    Invariants, ModuleClass,
};
use crate::padic::GroupRingElt;
use crate::residue::{ResidueRing, SmallZpk};
use crate::zeta::{b_hat, c_hat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub checked: usize,
    /// First counterexample, if any.
    pub witness: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

struct Tally {
    name: &'static str,
    checked: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            witness: None,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn done(self) -> PropertyResult {
        PropertyResult {
            name: self.name,
            checked: self.checked,
            witness: self.witness,
        }
    }
}

/// Exact integer lifts of the residues of `gens`.
pub fn lift_to_integers(gens: &[GroupRingElt]) -> Vec<Vec<BigInt>> {
    gens.iter()
        .map(|g| g.residues().iter().map(|c| BigInt::from(c.clone())).collect())
        .collect()
}

/// The module `L/M` for the canonical `M` of `inv`, at guard precision.
pub fn canonical_module(p: u64, inv: Invariants) -> Result<FiniteGModule<SmallZpk>> {
    let k = guard_precision(inv.order_exponent(), p);
    let gens = canonical_presentation(&ModuleClass::Finite(inv), p, k)?;
    FiniteGModule::from_group_ring(SmallZpk::new(p, k).expect("small modulus"), &gens)
}

/// Checks every property for all modules of order at most `p^depth`.
pub fn verify(p: u64, depth: u32, opts: &EnumerationOptions) -> Result<Vec<PropertyResult>> {
    let mut round_trip = Tally::new("round-trip");
    let mut ct_agreement = Tally::new("ct-agreement");
    let mut herbrand = Tally::new("herbrand");
    let mut norm_identity = Tally::new("norm-identity");
    let mut t_independence = Tally::new("t-independence");
    let mut counts = Tally::new("census-counts");
    let mut free_ct = Tally::new("free-iff-ct");

    for n in 0..=depth {
        for inv in finite_classes(p, n) {
            let cls = ModuleClass::Finite(inv);
            let k = guard_precision(n, p);
            let gens = lift_to_integers(&canonical_presentation(&cls, p, k)?);
            let got = classify_quotient(&gens, p, None);
            round_trip.check(got.as_ref() == Ok(&cls), || format!("{cls}: classified as {got:?}"));

            let a = canonical_module(p, inv)?;
            let coh = tate_cohomology(&a);
            let ct = coh.h0_order_exponent == 0;
            ct_agreement.check(ct == ct_from_invariants(&inv), || format!("{cls}: cohomology {coh:?}"));
            herbrand.check(coh.h0_order_exponent == coh.h1_order_exponent, || format!("{cls}: {coh:?}"));

            if inv.r >= 1 {
                for j in 1..=inv.s {
                    let ok = norm_identity_check(&a, &a.unit_generator(), j);
                    norm_identity.check(ok == Ok(true), || format!("{cls}, j={j}: {ok:?}"));
                }
            }

            let ex = InvariantExtractor::new(&a)?;
            for x in a.elements().filter(|x| ex.is_generator(x)) {
                let got = ex.extract(&x);
                t_independence.check(got == Ok(inv), || {
                    let x: Vec<String> = x.iter().map(|c| a.ring().to_biguint(c).to_string()).collect();
                    format!("{cls}, generator [{}]: {got:?}", x.join(","))
                });
            }
        }

        let report = census(p, n, opts)?;
        let nb = n as u64;
        counts.check(
            report.total == b_hat(p, nb).try_into().unwrap_or(usize::MAX)
                && report.free_count == c_hat(p, nb).try_into().unwrap_or(usize::MAX),
            || format!("n={n}: {}", report.summary()),
        );
        for row in &report.rows {
            free_ct.check(row.free == row.ct, || {
                format!("n={n}, Finite({}, {}, {}): free={} ct={}", row.r, row.s, row.t, row.free, row.ct)
            });
        }
    }

    Ok([round_trip, ct_agreement, herbrand, norm_identity, t_independence, counts, free_ct]
        .into_iter()
        .map(Tally::done)
        .collect())
}
