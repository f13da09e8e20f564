//! Residue rings `Z/p^k`, the coefficient rings of every finite computation.
//!
//! `Z/p^k` is a chain ring: every element is `p^v * u` with `u` a unit, and
//! the ideals are exactly `p^v Z/p^k`. The linear algebra in [`crate::howell`]
//! only needs the operations of [`ResidueRing`], so it runs unchanged on the
//! word-sized backend and on the arbitrary-precision one.

use std::fmt;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Largest prime accepted on the command line.
pub const MAX_PRIME: u64 = 97;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[allow(clippy::wrong_self_convention)]
pub trait ResidueRing: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync;

    fn prime(&self) -> u64;
    /// The exponent `k` of the modulus `p^k`.
    fn exponent(&self) -> u32;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, x: u64) -> Self::Elem;
    fn from_biguint(&self, x: &BigUint) -> Self::Elem;
    fn to_biguint(&self, x: &Self::Elem) -> BigUint;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// `p`-adic valuation of the residue; `k` for zero.
    fn valuation(&self, a: &Self::Elem) -> u32;
    /// Inverse of a unit. The caller guarantees `valuation(a) == 0`.
    fn unit_inverse(&self, a: &Self::Elem) -> Self::Elem;
    /// `p^v` reduced modulo `p^k` (zero once `v >= k`).
    fn p_pow(&self, v: u32) -> Self::Elem;
    /// Quotient and remainder of the canonical representative by `p^v`.
    fn div_rem_p_pow(&self, a: &Self::Elem, v: u32) -> (Self::Elem, Self::Elem);

    fn from_bigint(&self, x: &BigInt) -> Self::Elem {
        let m = BigInt::from(self.modulus());
        let r = x.mod_floor(&m);
        self.from_biguint(&r.to_biguint().expect("non-negative after mod_floor"))
    }

    fn modulus(&self) -> BigUint {
        BigUint::from(self.prime()).pow(self.exponent())
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }
}

/// `Z/p^k` with `p^k < 2^63`, residues held in a `u64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallZpk {
    p: u64,
    k: u32,
    modulus: u64,
}

impl SmallZpk {
    /// Returns `None` when `p^k` does not fit the word-sized backend.
    pub fn new(p: u64, k: u32) -> Option<Self> {
        let mut m: u64 = 1;
        for _ in 0..k {
            m = m.checked_mul(p)?;
            if m >= 1 << 63 {
                return None;
            }
        }
        Some(SmallZpk { p, k, modulus: m })
    }

    pub fn modulus_u64(&self) -> u64 {
        self.modulus
    }
}

impl ResidueRing for SmallZpk {
    type Elem = u64;

    fn prime(&self) -> u64 {
        self.p
    }

    fn exponent(&self) -> u32 {
        self.k
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.modulus
    }

    fn from_u64(&self, x: u64) -> u64 {
        x % self.modulus
    }

    fn from_biguint(&self, x: &BigUint) -> u64 {
        (x % self.modulus).to_u64().expect("reduced below the modulus")
    }

    fn to_biguint(&self, x: &u64) -> BigUint {
        BigUint::from(*x)
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn valuation(&self, a: &u64) -> u32 {
        if *a == 0 {
            return self.k;
        }
        let mut x = *a;
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    fn unit_inverse(&self, a: &u64) -> u64 {
        let (mut old_r, mut r) = (*a as i128, self.modulus as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert!(old_r == 1 || self.modulus == 1, "not a unit");
        old_s.rem_euclid(self.modulus as i128) as u64
    }

    fn p_pow(&self, v: u32) -> u64 {
        if v >= self.k {
            0
        } else {
            self.p.pow(v)
        }
    }

    fn div_rem_p_pow(&self, a: &u64, v: u32) -> (u64, u64) {
        if v >= self.k {
            return (0, *a);
        }
        let d = self.p.pow(v);
        (a / d, a % d)
    }
}

/// `Z/p^k` for arbitrary `k`, residues held in a [`BigUint`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigZpk {
    p: u64,
    k: u32,
    modulus: BigUint,
}

impl BigZpk {
    pub fn new(p: u64, k: u32) -> Self {
        BigZpk {
            p,
            k,
            modulus: BigUint::from(p).pow(k),
        }
    }
}

impl ResidueRing for BigZpk {
    type Elem = BigUint;

    fn prime(&self) -> u64 {
        self.p
    }

    fn exponent(&self) -> u32 {
        self.k
    }

    fn modulus(&self) -> BigUint {
        self.modulus.clone()
    }

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }

    fn one(&self) -> BigUint {
        BigUint::one() % &self.modulus
    }

    fn from_u64(&self, x: u64) -> BigUint {
        BigUint::from(x) % &self.modulus
    }

    fn from_biguint(&self, x: &BigUint) -> BigUint {
        x % &self.modulus
    }

    fn to_biguint(&self, x: &BigUint) -> BigUint {
        x.clone()
    }

    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.modulus {
            s - &self.modulus
        } else {
            s
        }
    }

    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &self.modulus - b
        }
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.modulus
    }

    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }

    fn valuation(&self, a: &BigUint) -> u32 {
        biguint_valuation(a, self.p).unwrap_or(self.k)
    }

    fn unit_inverse(&self, a: &BigUint) -> BigUint {
        let a = BigInt::from_biguint(Sign::Plus, a.clone());
        let m = BigInt::from_biguint(Sign::Plus, self.modulus.clone());
        let e = a.extended_gcd(&m);
        debug_assert!(e.gcd.is_one() || self.modulus.is_one(), "not a unit");
        e.x.mod_floor(&m).to_biguint().expect("non-negative")
    }

    fn p_pow(&self, v: u32) -> BigUint {
        if v >= self.k {
            BigUint::zero()
        } else {
            BigUint::from(self.p).pow(v)
        }
    }

    fn div_rem_p_pow(&self, a: &BigUint, v: u32) -> (BigUint, BigUint) {
        if v >= self.k {
            return (BigUint::zero(), a.clone());
        }
        a.div_rem(&BigUint::from(self.p).pow(v))
    }
}

/// `p`-adic valuation of a non-zero natural number, `None` for zero.
pub fn biguint_valuation(a: &BigUint, p: u64) -> Option<u32> {
    if a.is_zero() {
        return None;
    }
    let p = BigUint::from(p);
    let mut x = a.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        x = q;
        v += 1;
    }
}

/// `p`-adic valuation of a non-zero integer, `None` for zero.
pub fn bigint_valuation(a: &BigInt, p: u64) -> Option<u32> {
    biguint_valuation(a.magnitude(), p)
}
