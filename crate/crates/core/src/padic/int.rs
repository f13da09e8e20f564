use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::residue::biguint_valuation;

/// Valuation of a truncated element. A residue that vanishes at the working
/// precision only tells us a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    pub fn exact(self) -> Option<u32> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }
}

/// An element of `Z_p` known modulo `p^K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicInt {
    residue: BigUint,
    prime: u64,
    precision: u32,
}

pub(crate) fn modulus(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

impl PadicInt {
    pub fn new(value: &BigInt, prime: u64, precision: u32) -> Self {
        let m = BigInt::from_biguint(Sign::Plus, modulus(prime, precision));
        let residue = value.mod_floor(&m).to_biguint().expect("non-negative");
        PadicInt {
            residue,
            prime,
            precision,
        }
    }

    pub fn from_biguint(value: &BigUint, prime: u64, precision: u32) -> Self {
        PadicInt {
            residue: value % modulus(prime, precision),
            prime,
            precision,
        }
    }

    pub fn from_i64(value: i64, prime: u64, precision: u32) -> Self {
        Self::new(&BigInt::from(value), prime, precision)
    }

    pub fn zero(prime: u64, precision: u32) -> Self {
        PadicInt {
            residue: BigUint::zero(),
            prime,
            precision,
        }
    }

    pub fn one(prime: u64, precision: u32) -> Self {
        Self::from_biguint(&BigUint::one(), prime, precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> BigUint {
        modulus(self.prime, self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        match biguint_valuation(&self.residue, self.prime) {
            Some(v) => Valuation::Exact(v),
            None => Valuation::AtLeast(self.precision),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Exact(0)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotInvertible);
        }
        let m = BigInt::from_biguint(Sign::Plus, self.modulus());
        let a = BigInt::from_biguint(Sign::Plus, self.residue.clone());
        let e = a.extended_gcd(&m);
        Ok(Self::new(&e.x, self.prime, self.precision))
    }

    pub fn pow(&self, e: u32) -> Self {
        PadicInt {
            residue: self.residue.modpow(&BigUint::from(e), &self.modulus()),
            prime: self.prime,
            precision: self.precision,
        }
    }

    /// Drops precision to `precision <= self.precision()`.
    pub fn truncate(&self, precision: u32) -> Self {
        assert!(precision <= self.precision);
        Self::from_biguint(&self.residue, self.prime, precision)
    }

    /// Exact quotient by `p^v`; the result is known modulo `p^(K-v)` and
    /// is returned at that lower precision.
    pub fn div_p_pow(&self, v: u32) -> Result<Self> {
        match self.valuation() {
            Valuation::Exact(w) if w < v => Err(Error::NotDivisible),
            _ if v > self.precision => Err(Error::PrecisionExhausted {
                needed: v,
                available: self.precision,
            }),
            _ => Ok(Self::from_biguint(
                &(&self.residue / BigUint::from(self.prime).pow(v)),
                self.prime,
                self.precision - v,
            )),
        }
    }

    /// Symmetric lift into `(-p^K/2, p^K/2]`.
    pub fn to_bigint_symmetric(&self) -> BigInt {
        let m = self.modulus();
        let r = BigInt::from_biguint(Sign::Plus, self.residue.clone());
        if &self.residue * 2u32 > m {
            r - BigInt::from_biguint(Sign::Plus, m)
        } else {
            r
        }
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime || self.precision != other.precision {
            return Err(Error::ParameterMismatch(format!(
                "(p={}, K={}) vs (p={}, K={})",
                self.prime, self.precision, other.prime, other.precision
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, f: impl Fn(&BigUint, &BigUint, &BigUint) -> BigUint) -> Self {
        if let Err(e) = self.check_compatible(other) {
            panic!("{e}");
        }
        let m = self.modulus();
        PadicInt {
            residue: f(&self.residue, &other.residue, &m),
            prime: self.prime,
            precision: self.precision,
        }
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Add for &PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: &PadicInt) -> PadicInt {
        self.combine(rhs, |a, b, m| (a + b) % m)
    }
}

impl Sub for &PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: &PadicInt) -> PadicInt {
        self.combine(rhs, |a, b, m| (a + m - b) % m)
    }
}

impl Mul for &PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: &PadicInt) -> PadicInt {
        self.combine(rhs, |a, b, m| (a * b) % m)
    }
}

impl Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        let m = self.modulus();
        PadicInt {
            residue: (&m - &self.residue) % &m,
            prime: self.prime,
            precision: self.precision,
        }
    }
}
