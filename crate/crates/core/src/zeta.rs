//! Submodule-counting series of `L` in the variable `u = p^(-s)`.
//!
//! `b_n` counts submodules of index `p^n` and `c_n` the free ones among
//! them: `b_0 = b_1 = 1`, `b_n = 1 + p(n-1)`, `c_0 = 1`, `c_1 = 0`,
//! `c_n = (p-1)(n-1)`. As rational functions,
//! `sum b_n u^n = (1 - u + p u^2) / (1 - u)^2`, and the closed form for the
//! free count has numerator `(p-1) u^2`; with the opposite sign `(1-p) u^2`
//! every coefficient from `n = 2` on is negated. Neither closed form for
//! `c` has the constant term `c_0 = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::census::{census, EnumerationOptions};
use crate::error::{Error, Result};
use crate::residue::is_prime;

/// Coefficients of `u^0, ..., u^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigInt>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least a constant term");
        PowerSeries { coeffs }
    }

    /// A polynomial truncated to order `order`.
    pub fn polynomial(coeffs: &[i64], order: usize) -> Self {
        let mut c: Vec<BigInt> = coeffs.iter().take(order + 1).map(|&x| BigInt::from(x)).collect();
        c.resize(order + 1, BigInt::zero());
        PowerSeries { coeffs: c }
    }

    /// `(1 - u)^(-2) = sum (k+1) u^k`.
    pub fn inverse_square_of_one_minus_u(order: usize) -> Self {
        PowerSeries {
            coeffs: (0..=order).map(|k| BigInt::from(k + 1)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    /// Product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut c = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                c[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: c }
    }

    pub fn neg(&self) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

fn check(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

pub fn b_hat(p: u64, n: u64) -> BigInt {
    if n <= 1 {
        BigInt::one()
    } else {
        BigInt::from(1) + BigInt::from(p) * BigInt::from(n - 1)
    }
}

pub fn c_hat(p: u64, n: u64) -> BigInt {
    match n {
        0 => BigInt::one(),
        _ => BigInt::from(p - 1) * BigInt::from(n - 1),
    }
}

pub fn zeta_coefficients(p: u64, order: usize) -> Result<PowerSeries> {
    check(p)?;
    Ok(PowerSeries::new((0..=order as u64).map(|n| b_hat(p, n)).collect()))
}

pub fn zeta_ct_coefficients(p: u64, order: usize) -> Result<PowerSeries> {
    check(p)?;
    Ok(PowerSeries::new((0..=order as u64).map(|n| c_hat(p, n)).collect()))
}

/// The same coefficients counted by brute force.
pub fn census_coefficients(p: u64, order: usize, opts: &EnumerationOptions) -> Result<(PowerSeries, PowerSeries)> {
    let mut b = Vec::with_capacity(order + 1);
    let mut c = Vec::with_capacity(order + 1);
    for n in 0..=order as u32 {
        let report = census(p, n, opts)?;
        b.push(BigInt::from(report.total));
        c.push(BigInt::from(report.free_count));
    }
    Ok((PowerSeries::new(b), PowerSeries::new(c)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RationalForm {
    /// `(1 - u + p u^2) / (1 - u)^2`
    Total,
    /// `(1 - p) u^2 / (1 - u)^2`
    FreeAsPrinted,
    /// `(p - 1) u^2 / (1 - u)^2`
    FreeCorrected,
}

pub fn expand_rational(form: RationalForm, p: u64, order: usize) -> Result<PowerSeries> {
    check(p)?;
    let p = p as i64;
    let numerator = match form {
        RationalForm::Total => [1, -1, p],
        RationalForm::FreeAsPrinted => [0, 0, 1 - p],
        RationalForm::FreeCorrected => [0, 0, p - 1],
    };
    Ok(PowerSeries::polynomial(&numerator, order).mul(&PowerSeries::inverse_square_of_one_minus_u(order)))
}

/// `c_N / b_N`, which increases to `1 - 1/p`.
pub fn density(p: u64, n: u64) -> Result<BigRational> {
    check(p)?;
    if n < 2 {
        return Err(Error::InvalidArgument("density needs N >= 2".into()));
    }
    Ok(BigRational::new(c_hat(p, n), b_hat(p, n)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaRow {
    pub n: usize,
    pub b: BigInt,
    pub c: BigInt,
    pub rational_b: BigInt,
    pub rational_c: BigInt,
    pub flag_b: &'static str,
    pub flag_c: &'static str,
}

impl ZetaRow {
    pub fn is_mismatch(&self) -> bool {
        self.flag_b == "MISMATCH" || self.flag_c == "MISMATCH"
    }
}

/// Formula coefficients side by side with the rational expansions.
///
/// `flag_c` is `const-term` at `n = 0`, where no closed form for the free
/// count has the constant term, and `sign` where the as-printed form gives
/// exactly the negated count.
pub fn zeta_table(p: u64, order: usize, as_printed: bool) -> Result<Vec<ZetaRow>> {
    let b = zeta_coefficients(p, order)?;
    let c = zeta_ct_coefficients(p, order)?;
    let rb = expand_rational(RationalForm::Total, p, order)?;
    let form = if as_printed { RationalForm::FreeAsPrinted } else { RationalForm::FreeCorrected };
    let rc = expand_rational(form, p, order)?;
    Ok((0..=order)
        .map(|n| {
            let flag_b = if b.coeff(n) == rb.coeff(n) { "ok" } else { "MISMATCH" };
            let flag_c = if n == 0 {
                "const-term"
            } else if c.coeff(n) == rc.coeff(n) {
                "ok"
            } else if as_printed && *c.coeff(n) == -rc.coeff(n) {
                "sign"
            } else {
                "MISMATCH"
            };
            ZetaRow {
                n,
                b: b.coeff(n).clone(),
                c: c.coeff(n).clone(),
                rational_b: rb.coeff(n).clone(),
                rational_c: rc.coeff(n).clone(),
                flag_b,
                flag_c,
            }
        })
        .collect())
}
