//! Diagonalization over the local PID `Z_p` of integer relation matrices.
//!
//! Entries stay exact integers. Pivots are chosen by minimal `p`-adic
//! valuation, and rows/columns are only ever scaled by integers prime to
//! `p`, which are units of `Z_p`, so the `Z_p`-row span is preserved.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::residue::bigint_valuation;

/// `Z_p`-structure of `Z_p^m / rowspan`: `Z_p^(m - rank) + sum Z/p^v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSmith {
    pub rank: usize,
    /// Valuations of the non-zero diagonal entries, ascending.
    pub valuations: Vec<u32>,
}

impl LocalSmith {
    /// `log_p` of the order of the torsion part of the quotient.
    pub fn torsion_exponent(&self) -> u32 {
        self.valuations.iter().sum()
    }
}

fn strip_unit_content(row: &mut [BigInt], p: u64) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return;
    }
    let pb = BigInt::from(p);
    let mut unit = g;
    while (&unit % &pb).is_zero() {
        unit /= &pb;
    }
    if !unit.is_one() {
        row.iter_mut().for_each(|x| *x /= &unit);
    }
}

pub fn local_smith(rows: &[Vec<BigInt>], ncols: usize, p: u64) -> LocalSmith {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut valuations = Vec::new();
    let mut col_done = vec![false; ncols];
    let pb = BigInt::from(p);

    while !m.is_empty() {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if col_done[j] {
                    continue;
                }
                if let Some(v) = bigint_valuation(x, p) {
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, v)) = best else { break };
        let pivot_row = m.swap_remove(pi);
        let unit = &pivot_row[pj] / pb.pow(v);
        for row in m.iter_mut() {
            if row[pj].is_zero() {
                continue;
            }
            let q = &row[pj] / pb.pow(v);
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &unit - &q * y;
            }
            debug_assert!(row[pj].is_zero());
            strip_unit_content(row, p);
        }
        // Column operations clear the rest of the pivot row without
        // touching the other rows, whose pivot-column entries are now zero.
        col_done[pj] = true;
        valuations.push(v);
        m.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    valuations.sort_unstable();
    LocalSmith {
        rank: valuations.len(),
        valuations,
    }
}

/// Exact division of an integer polynomial by `x - 1`. Returns `None`
/// when the coefficient sum is non-zero.
pub(crate) fn divide_by_x_minus_one(coeffs: &[BigInt]) -> Option<Vec<BigInt>> {
    let sum: BigInt = coeffs.iter().sum();
    if !sum.is_zero() {
        return None;
    }
    let d = coeffs.len();
    if d <= 1 {
        return Some(vec![]);
    }
    let mut q = vec![BigInt::zero(); d - 1];
    q[d - 2] = coeffs[d - 1].clone();
    for i in (1..d - 1).rev() {
        q[i - 1] = &coeffs[i] + &q[i];
    }
    debug_assert!((&coeffs[0] + &q[0]).is_zero());
    Some(q)
}

pub(crate) fn min_valuation(xs: &[BigInt], p: u64) -> Option<u32> {
    xs.iter().filter_map(|x| bigint_valuation(&x.abs(), p)).min()
}
