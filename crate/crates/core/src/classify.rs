//! Classification of `L/M` for `M` given by exact integer generators.
//!
//! The `Z_p`-structure of `L/M` comes from a local Smith form of the
//! shifts of the generators. A finite quotient is realized over `Z/p^K`
//! and its invariants extracted; an infinite one is one of five types,
//! told apart by whether `M` lies in `I_G` or in `NL`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::cohomology::{ct_from_invariants, tate_cohomology, CohomologyResult};
use crate::error::{Error, Result};
use crate::gmodule::{extract_invariants, guard_precision, FiniteGModule, Invariants, ModuleClass};
use crate::padic::{CycloElt, Valuation};
use crate::residue::{is_prime, BigZpk, ResidueRing, SmallZpk, MAX_PRIME};
use crate::smith::{divide_by_x_minus_one, local_smith, min_valuation};

/// Precision ceiling used when none is configured.
pub const DEFAULT_PRECISION_CEILING: u32 = 1024;

/// Class of `L/M` together with its cohomology when finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: ModuleClass,
    pub cohomology: Option<CohomologyResult>,
    pub ct: bool,
}

impl Classification {
    pub fn to_json(&self) -> Value {
        let mut v = json!({ "class": self.class.name() });
        match self.class {
            ModuleClass::Finite(Invariants { r, s, t }) => {
                v["r"] = json!(r);
                v["s"] = json!(s);
                v["t"] = json!(t);
                v["order_exponent"] = json!(r + s);
                if let Some(c) = self.cohomology {
                    v["h0"] = json!(c.h0_order_exponent);
                    v["h1"] = json!(c.h1_order_exponent);
                }
            }
            ModuleClass::TorsionOverFixed(n) | ModuleClass::TorsionOverAug(n) => v["n"] = json!(n),
            _ => {}
        }
        v["ct"] = json!(self.ct);
        v
    }
}

pub fn check_prime(p: u64) -> Result<()> {
    if p > MAX_PRIME || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

fn rotations(gens: &[Vec<BigInt>], p: usize) -> Vec<Vec<BigInt>> {
    let mut rows = Vec::with_capacity(gens.len() * p);
    for x in gens {
        for i in 0..p {
            rows.push((0..p).map(|j| x[(j + p - i) % p].clone()).collect());
        }
    }
    rows
}

pub fn classify_quotient(gens: &[Vec<BigInt>], p: u64, ceiling: Option<u32>) -> Result<ModuleClass> {
    classify_detailed(gens, p, ceiling).map(|c| c.class)
}

pub fn classify_detailed(gens: &[Vec<BigInt>], p: u64, ceiling: Option<u32>) -> Result<Classification> {
    check_prime(p)?;
    let pu = p as usize;
    if let Some(x) = gens.iter().find(|x| x.len() != pu) {
        return Err(Error::ParameterMismatch(format!(
            "generator has {} coefficients, expected {pu}",
            x.len()
        )));
    }
    let smith = local_smith(&rotations(gens, pu), pu, p);
    let n = smith.torsion_exponent();
    let ceiling = ceiling.unwrap_or(DEFAULT_PRECISION_CEILING);

    if smith.rank == 0 {
        return Ok(Classification {
            class: ModuleClass::FreeL,
            cohomology: None,
            ct: true,
        });
    }
    if smith.rank == pu {
        let k = guard_precision(n, p);
        if k > ceiling {
            return Err(Error::PrecisionExhausted {
                needed: k,
                available: ceiling,
            });
        }
        let (inv, coh) = match SmallZpk::new(p, k) {
            Some(ring) => finite_details(ring, gens, n)?,
            None => finite_details(BigZpk::new(p, k), gens, n)?,
        };
        return Ok(Classification {
            class: ModuleClass::Finite(inv),
            cohomology: Some(coh),
            ct: coh.h0_order_exponent == 0,
        });
    }

    let nonzero: Vec<&Vec<BigInt>> = gens.iter().filter(|x| x.iter().any(|c| !c.is_zero())).collect();
    let class = if nonzero.iter().all(|x| x.iter().sum::<BigInt>().is_zero()) {
        let v = aug_valuation(&nonzero, p, ceiling)?;
        check_torsion(v, n)?;
        if v == 0 {
            ModuleClass::TrivialZp
        } else {
            ModuleClass::TorsionOverAug(v)
        }
    } else if nonzero.iter().all(|x| x.iter().all(|c| *c == x[0])) {
        let heads: Vec<BigInt> = nonzero.iter().map(|x| x[0].clone()).collect();
        let v = min_valuation(&heads, p).expect("non-zero generators");
        check_torsion(v, n)?;
        if v == 0 {
            ModuleClass::AugmentationIdeal
        } else {
            ModuleClass::TorsionOverFixed(v)
        }
    } else {
        return Err(Error::ClassificationMismatch(format!(
            "quotient has Z_p-rank {} but M lies in neither I_G nor NL",
            pu - smith.rank
        )));
    };
    Ok(Classification {
        class,
        cohomology: None,
        ct: false,
    })
}

fn check_torsion(v: u32, n: u32) -> Result<()> {
    if v != n {
        return Err(Error::ClassificationMismatch(format!(
            "torsion has order p^{n} but the generators give p^{v}"
        )));
    }
    Ok(())
}

/// For `M = (g-1) U`, the `P`-adic valuation of the image of `U` in `O`,
/// raising the precision until it is exact.
fn aug_valuation(gens: &[&Vec<BigInt>], p: u64, ceiling: u32) -> Result<u32> {
    let mut best: Option<u32> = None;
    for x in gens {
        let u = divide_by_x_minus_one(x).expect("augmentation is zero");
        let mut k = 4.min(ceiling);
        let v = loop {
            match CycloElt::from_bigints(&u, p, k).pi_valuation() {
                Valuation::Exact(v) => break v,
                Valuation::AtLeast(_) if k >= ceiling => {
                    return Err(Error::PrecisionExhausted {
                        needed: k + 1,
                        available: ceiling,
                    })
                }
                Valuation::AtLeast(_) => k = (2 * k).min(ceiling),
            }
        };
        best = Some(best.map_or(v, |b| b.min(v)));
    }
    Ok(best.expect("non-zero generators"))
}

fn finite_details<R: ResidueRing>(ring: R, gens: &[Vec<BigInt>], n: u32) -> Result<(Invariants, CohomologyResult)> {
    let residues: Vec<Vec<R::Elem>> = gens
        .iter()
        .map(|x| x.iter().map(|c| ring.from_bigint(c)).collect())
        .collect();
    let a = FiniteGModule::from_generators(ring, &residues);
    if a.order_exponent() != n {
        return Err(Error::ClassificationMismatch(format!(
            "Smith form gives |A| = p^{n}, residues give p^{}",
            a.order_exponent()
        )));
    }
    let inv = extract_invariants(&a, &a.unit_generator())?;
    let coh = tate_cohomology(&a);
    if coh.h0_order_exponent != coh.h1_order_exponent || (coh.h0_order_exponent == 0) != ct_from_invariants(&inv) {
        return Err(Error::ClassificationMismatch(format!(
            "cohomology {coh:?} disagrees with invariants {inv:?}"
        )));
    }
    Ok((inv, coh))
}

/// Text description of a quotient: a header `p=<prime> K=<ceiling|auto>`
/// followed by one generator per line as `p` comma-separated integers.
/// Blank lines and lines starting with `#` are ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descriptor {
    pub p: u64,
    pub precision: Option<u32>,
    pub gens: Vec<Vec<BigInt>>,
}

impl Descriptor {
    pub fn classify(&self) -> Result<Classification> {
        classify_detailed(&self.gens, self.p, self.precision)
    }
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty descriptor".into()))?;
        let mut p = None;
        let mut precision = None;
        for tok in header.split_whitespace() {
            match tok.split_once('=') {
                Some(("p", v)) => p = Some(v.parse::<u64>().map_err(|_| Error::Parse(format!("bad prime '{v}'")))?),
                Some(("K", "auto")) => precision = None,
                Some(("K", v)) => {
                    let k = v.parse::<u32>().map_err(|_| Error::Parse(format!("bad precision '{v}'")))?;
                    if k == 0 {
                        return Err(Error::Parse("precision must be at least 1".into()));
                    }
                    precision = Some(k);
                }
                _ => return Err(Error::Parse(format!("unexpected header token '{tok}'"))),
            }
        }
        let p = p.ok_or_else(|| Error::Parse("header lacks p=<prime>".into()))?;
        check_prime(p)?;
        let gens = lines
            .map(|(i, line)| {
                let row = line
                    .split(',')
                    .map(|c| c.trim().parse::<BigInt>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
                if row.len() != p as usize {
                    return Err(Error::Parse(format!(
                        "line {}: {} coefficients, expected {p}",
                        i + 1,
                        row.len()
                    )));
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Descriptor { p, precision, gens })
    }
}
