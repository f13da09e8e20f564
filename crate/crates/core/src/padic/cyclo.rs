//! The cyclotomic ring `O = Z_p[zeta]`, truncated modulo `p^K`.
//!
//! Elements are polynomials in `zeta` of degree `< p - 1`, i.e. reduced
//! modulo `Phi_p(zeta) = 1 + zeta + ... + zeta^(p-1)`. Since `p O = P^(p-1)`
//! with `P = (zeta - 1) O`, working modulo `p^K` means working modulo
//! `P^((p-1)K)`. For `p = 2` the ring degenerates to `Z_2` with `zeta = -1`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::int::{modulus, PadicInt, Valuation};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElt {
    prime: u64,
    precision: u32,
    coeffs: Vec<BigUint>,
    /// The element is known modulo `P^pi_precision`.
    pi_precision: u32,
}

/// Folds a polynomial into `Z[x]/(x^p - 1)` and then into `Z[x]/(Phi_p)`.
fn reduce_poly(p: u64, coeffs: &[BigInt]) -> Vec<BigInt> {
    let p = p as usize;
    let mut cyc = vec![BigInt::zero(); p];
    for (i, c) in coeffs.iter().enumerate() {
        cyc[i % p] += c;
    }
    let top = cyc.pop().expect("p >= 2");
    cyc.iter_mut().for_each(|c| *c -= &top);
    cyc
}

impl CycloElt {
    /// Builds `sum c_i zeta^i` from exact integer coefficients of any length.
    pub fn from_bigints(coeffs: &[BigInt], prime: u64, precision: u32) -> Self {
        let reduced = reduce_poly(prime, coeffs);
        let coeffs = reduced
            .iter()
            .map(|c| PadicInt::new(c, prime, precision).residue().clone())
            .collect();
        CycloElt {
            prime,
            precision,
            coeffs,
            pi_precision: (prime as u32 - 1) * precision,
        }
    }

    pub fn from_ints(coeffs: &[i64], prime: u64, precision: u32) -> Self {
        let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
        Self::from_bigints(&c, prime, precision)
    }

    /// From `p - 1` residues (any extra length is folded as in [`Self::from_bigints`]).
    pub fn from_padics(coeffs: &[PadicInt], prime: u64, precision: u32) -> Self {
        let c: Vec<BigInt> = coeffs.iter().map(|x| BigInt::from(x.residue().clone())).collect();
        Self::from_bigints(&c, prime, precision)
    }

    pub fn zero(prime: u64, precision: u32) -> Self {
        Self::from_ints(&[], prime, precision)
    }

    pub fn one(prime: u64, precision: u32) -> Self {
        Self::from_ints(&[1], prime, precision)
    }

    pub fn zeta(prime: u64, precision: u32) -> Self {
        Self::from_ints(&[0, 1], prime, precision)
    }

    /// The uniformizer `zeta - 1`.
    pub fn pi(prime: u64, precision: u32) -> Self {
        Self::from_ints(&[-1, 1], prime, precision)
    }

    pub fn constant(c: &PadicInt) -> Self {
        Self::from_padics(std::slice::from_ref(c), c.prime(), c.precision())
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn pi_precision(&self) -> u32 {
        self.pi_precision
    }

    /// Coefficients of `1, zeta, ..., zeta^(p-2)`.
    pub fn coeffs(&self) -> Vec<PadicInt> {
        self.coeffs
            .iter()
            .map(|c| PadicInt::from_biguint(c, self.prime, self.precision))
            .collect()
    }

    pub(crate) fn residues(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn modulus(&self) -> BigUint {
        modulus(self.prime, self.precision)
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

    fn with_coeffs(&self, coeffs: Vec<BigUint>, pi_precision: u32) -> Self {
        CycloElt {
            prime: self.prime,
            precision: self.precision,
            coeffs,
            pi_precision,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other).unwrap_or_else(|e| panic!("{e}"));
        let m = self.modulus();
        let c = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % &m)
            .collect();
        self.with_coeffs(c, self.pi_precision.min(other.pi_precision))
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        let c = self.coeffs.iter().map(|a| (&m - a) % &m).collect();
        self.with_coeffs(c, self.pi_precision)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other).unwrap_or_else(|e| panic!("{e}"));
        let p = self.prime as usize;
        let m = self.modulus();
        let mut cyc = vec![BigUint::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = (i + j) % p;
                cyc[k] = (&cyc[k] + a * b) % &m;
            }
        }
        let top = cyc.pop().expect("p >= 2");
        let c = cyc.into_iter().map(|c| (c + &m - &top) % &m).collect();
        self.with_coeffs(c, self.pi_precision.min(other.pi_precision))
    }

    pub fn scale(&self, c: &PadicInt) -> Self {
        self.mul(&Self::constant(c))
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

    /// Image under `O -> O/pO`, evaluated at `zeta = 1`: the sum of the coefficients.
    fn value_at_one(&self) -> BigUint {
        let m = self.modulus();
        self.coeffs.iter().fold(BigUint::zero(), |s, c| (s + c) % &m)
    }

    /// Exact division by `zeta - 1`.
    ///
    /// Synthetic division gives `x = x(1) + (zeta - 1) q(zeta)`, and the
    /// constant `x(1) = p m` is divided using the identity
    /// `p / (zeta - 1) = -sum_{j < p-1} (p - 1 - j) zeta^j`.
    /// The quotient is known to one fewer `P`-adic digit than `x`.
    pub fn divide_by_pi(&self) -> Result<Self> {
        if self.pi_precision == 0 {
            return Err(Error::PrecisionExhausted {
                needed: 1,
                available: 0,
            });
        }
        let p = self.prime;
        let m = self.modulus();
        let at_one = self.value_at_one();
        if !(&at_one % p).is_zero() {
            return Err(Error::NotDivisible);
        }
        let d = self.coeffs.len();
        let mut q = vec![BigUint::zero(); d];
        // q_{i-1} = a_i + q_i, from the top down.
        for i in (1..d).rev() {
            let next = if i < d - 1 { q[i].clone() } else { BigUint::zero() };
            q[i - 1] = (&self.coeffs[i] + next) % &m;
        }
        let multiple = at_one / p;
        for (j, qj) in q.iter_mut().enumerate() {
            let sub = (&multiple * (p - 1 - j as u64)) % &m;
            *qj = (&*qj + &m - sub) % &m;
        }
        Ok(self.with_coeffs(q, self.pi_precision - 1))
    }

    /// `P`-adic valuation, where `P = (zeta - 1) O`.
    pub fn pi_valuation(&self) -> Valuation {
        let mut cur = self.clone();
        let mut v = 0;
        loop {
            if cur.pi_precision == 0 {
                return Valuation::AtLeast(v);
            }
            if !(&cur.value_at_one() % self.prime).is_zero() {
                return Valuation::Exact(v);
            }
            cur = cur.divide_by_pi().expect("divisibility checked");
            v += 1;
        }
    }

    /// Same element at a lower precision.
    pub fn truncate(&self, precision: u32) -> Self {
        assert!(precision <= self.precision);
        let m = modulus(self.prime, precision);
        CycloElt {
            prime: self.prime,
            precision,
            coeffs: self.coeffs.iter().map(|c| c % &m).collect(),
            pi_precision: self.pi_precision.min((self.prime as u32 - 1) * precision),
        }
    }

    /// Equality modulo `P^e`, `e` the smaller of the two tracked precisions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        matches!(self.sub(other).pi_valuation(), Valuation::AtLeast(_))
    }

    /// Equality of the residues (ignores the tracked `P`-adic precision).
    pub fn same_residues(&self, other: &Self) -> bool {
        self.prime == other.prime && self.precision == other.precision && self.coeffs == other.coeffs
    }
}

impl fmt::Display for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// The unit `eps` of `O` with `p = eps * (zeta - 1)^(p-1)`.
///
/// From `p = Phi_p(1) = prod_{i=1}^{p-1} (1 - zeta^i)` and
/// `1 - zeta^i = (1 - zeta)(1 + zeta + ... + zeta^(i-1))` we get
/// `eps = (-1)^(p-1) prod_{i=1}^{p-1} (1 + zeta + ... + zeta^(i-1))`,
/// which has integer coefficients.
pub fn epsilon_unit(p: u64, precision: u32) -> CycloElt {
    let mut eps = CycloElt::one(p, precision);
    for i in 1..p {
        let partial: Vec<i64> = vec![1; i as usize];
        eps = eps.mul(&CycloElt::from_ints(&partial, p, precision));
    }
    if (p - 1) % 2 == 1 {
        eps = eps.neg();
    }
    eps
}

/// Checks `p^j c = eps^j (zeta - 1)^(j(p-1)) c` at the precision of `c`.
pub fn power_commutator_identity(j: u32, c: &CycloElt) -> Result<bool> {
    let (p, k) = (c.prime(), c.precision());
    if j >= k {
        // both sides vanish modulo p^K
        return Err(Error::PrecisionExhausted {
            needed: j + 1,
            available: k,
        });
    }
    let pj = PadicInt::from_i64(p as i64, p, k).pow(j);
    let lhs = c.scale(&pj);
    let rhs = epsilon_unit(p, k)
        .pow(j)
        .mul(&CycloElt::pi(p, k).pow(j * (p as u32 - 1)))
        .mul(c);
    Ok(lhs.same_residues(&rhs))
}
