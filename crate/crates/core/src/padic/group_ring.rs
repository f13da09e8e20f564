//! The group ring `L = Z_p G` of `G = <g>` cyclic of order `p`, modulo `p^K`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::cyclo::{epsilon_unit, CycloElt};
use super::int::{modulus, PadicInt};
use crate::error::{Error, Result};

/// `sum a_i g^i`, coefficients stored least power of `g` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupRingElt {
    prime: u64,
    precision: u32,
    coeffs: Vec<BigUint>,
}

impl GroupRingElt {
    pub fn from_bigints(coeffs: &[BigInt], prime: u64, precision: u32) -> Self {
        let p = prime as usize;
        let mut folded = vec![BigInt::zero(); p];
        for (i, c) in coeffs.iter().enumerate() {
            folded[i % p] += c;
        }
        GroupRingElt {
            prime,
            precision,
            coeffs: folded
                .iter()
                .map(|c| PadicInt::new(c, prime, precision).residue().clone())
                .collect(),
        }
    }

    pub fn from_ints(coeffs: &[i64], prime: u64, precision: u32) -> Self {
        let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
        Self::from_bigints(&c, prime, precision)
    }

    pub fn from_padics(coeffs: &[PadicInt]) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty coefficient list".into()))?;
        for c in coeffs {
            first.check_compatible(c)?;
        }
        if coeffs.len() != first.prime() as usize {
            return Err(Error::ParameterMismatch(format!(
                "expected {} coefficients, got {}",
                first.prime(),
                coeffs.len()
            )));
        }
        Ok(GroupRingElt {
            prime: first.prime(),
            precision: first.precision(),
            coeffs: coeffs.iter().map(|c| c.residue().clone()).collect(),
        })
    }

    /// Parses base-10 residues, least power of `g` first.
    pub fn from_residue_strings(strs: &[&str], prime: u64, precision: u32) -> Result<Self> {
        if strs.len() != prime as usize {
            return Err(Error::Parse(format!(
                "expected {} residues, got {}",
                prime,
                strs.len()
            )));
        }
        let c = strs
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("bad residue {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bigints(&c, prime, precision))
    }

    pub fn to_residue_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn zero(prime: u64, precision: u32) -> Self {
        Self::from_ints(&[], prime, precision)
    }

    pub fn one(prime: u64, precision: u32) -> Self {
        Self::from_ints(&[1], prime, precision)
    }

    pub fn constant(c: i64, prime: u64, precision: u32) -> Self {
        Self::from_ints(&[c], prime, precision)
    }

    pub fn g(prime: u64, precision: u32) -> Self {
        Self::from_ints(&[0, 1], prime, precision)
    }

    pub fn g_minus_one(prime: u64, precision: u32) -> Self {
        Self::from_ints(&[-1, 1], prime, precision)
    }

    /// The norm element `N = 1 + g + ... + g^(p-1)`.
    pub fn norm(prime: u64, precision: u32) -> Self {
        Self::from_ints(&vec![1; prime as usize], prime, precision)
    }

    /// `eps^e`, pushed from `O` to `L` by sending `zeta^i` to `g^i`.
    ///
    /// Only the action on the augmentation ideal is meaningful: there `L`
    /// acts through `L/NL = O`, so the choice of lift does not matter.
    pub fn epsilon_power(e: u32, prime: u64, precision: u32) -> Self {
        Self::lift(&epsilon_unit(prime, precision).pow(e))
    }

    /// Lifts `sum c_i zeta^i` to `sum c_i g^i`.
    pub fn lift(x: &CycloElt) -> Self {
        let mut coeffs = x.residues().to_vec();
        coeffs.push(BigUint::zero());
        GroupRingElt {
            prime: x.prime(),
            precision: x.precision(),
            coeffs,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn coeffs(&self) -> Vec<PadicInt> {
        self.coeffs
            .iter()
            .map(|c| PadicInt::from_biguint(c, self.prime, self.precision))
            .collect()
    }

    pub fn residues(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime || self.precision != other.precision {
            return Err(Error::ParameterMismatch(format!(
                "(p={}, K={}) vs (p={}, K={})",
                self.prime, self.precision, other.prime, other.precision
            )));
        }
        Ok(())
    }

    fn modulus(&self) -> BigUint {
        modulus(self.prime, self.precision)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.modulus();
        Ok(GroupRingElt {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a + b) % &m)
                .collect(),
            ..self.clone()
        })
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        GroupRingElt {
            coeffs: self.coeffs.iter().map(|a| (&m - a) % &m).collect(),
            ..self.clone()
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    /// Convolution over the cyclic group.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.prime as usize;
        let m = self.modulus();
        let mut out = vec![BigUint::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = (i + j) % p;
                out[k] = (&out[k] + a * b) % &m;
            }
        }
        Ok(GroupRingElt {
            coeffs: out,
            ..self.clone()
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn scale(&self, c: &PadicInt) -> Self {
        let m = self.modulus();
        GroupRingElt {
            coeffs: self.coeffs.iter().map(|a| (a * c.residue()) % &m).collect(),
            ..self.clone()
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.prime, self.precision);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Sum of the coefficients; `x` lies in the augmentation ideal iff this vanishes.
    pub fn augmentation(&self) -> PadicInt {
        let m = self.modulus();
        let s = self.coeffs.iter().fold(BigUint::zero(), |s, c| (s + c) % &m);
        PadicInt::from_biguint(&s, self.prime, self.precision)
    }

    pub fn in_augmentation_ideal(&self) -> bool {
        self.augmentation().is_zero()
    }

    /// The quotient map `L -> L/NL = O`, `g -> zeta`.
    pub fn cyclo_project(&self) -> CycloElt {
        let c: Vec<BigInt> = self.coeffs.iter().map(|c| BigInt::from(c.clone())).collect();
        CycloElt::from_bigints(&c, self.prime, self.precision)
    }

    /// Same element at a lower precision.
    pub fn truncate(&self, precision: u32) -> Self {
        assert!(precision <= self.precision);
        let m = modulus(self.prime, precision);
        GroupRingElt {
            prime: self.prime,
            precision,
            coeffs: self.coeffs.iter().map(|c| c % &m).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }
}

impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_residue_strings().join(", "))
    }
}

impl Serialize for GroupRingElt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_residue_strings().serialize(s)
    }
}
