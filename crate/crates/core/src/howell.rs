//! Howell normal form of subgroups of `(Z/p^k)^m`.
//!
//! Over `Z/p^k` the Hermite form is not canonical because the ring has zero
//! divisors. The Howell form adds the closure rows `p^(k-v) * row` while
//! echelonizing, which makes the row span of the rows with pivot column
//! `>= c` equal to the intersection of the subgroup with the coordinates
//! `c..m`. With pivots normalized to `p^v` and entries above each pivot
//! reduced into `[0, p^v)` the form is unique, so subgroup equality is
//! equality of forms.

use crate::residue::ResidueRing;

#[derive(Clone, Debug)]
pub struct HowellForm<R: ResidueRing> {
    ring: R,
    ncols: usize,
    rows: Vec<Vec<R::Elem>>,
    /// `(column, valuation)` of the pivot of each row.
    pivots: Vec<(usize, u32)>,
}

impl<R: ResidueRing> PartialEq for HowellForm<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ncols == other.ncols && self.rows == other.rows
    }
}

impl<R: ResidueRing> Eq for HowellForm<R> {}

impl<R: ResidueRing> HowellForm<R> {
    /// Howell form of the subgroup generated by `generators`.
    pub fn new<I>(ring: &R, ncols: usize, generators: I) -> Self
    where
        I: IntoIterator<Item = Vec<R::Elem>>,
    {
        let mut pool: Vec<Vec<R::Elem>> = generators
            .into_iter()
            .inspect(|g| assert_eq!(g.len(), ncols, "generator has wrong length"))
            .filter(|g| g.iter().any(|x| !ring.is_zero(x)))
            .collect();
        let k = ring.exponent();
        let mut rows: Vec<Vec<R::Elem>> = Vec::new();
        let mut pivots = Vec::new();

        for c in 0..ncols {
            let best = pool
                .iter()
                .enumerate()
                .filter(|(_, r)| !ring.is_zero(&r[c]))
                .min_by_key(|(_, r)| ring.valuation(&r[c]))
                .map(|(i, _)| i);
            let Some(best) = best else { continue };
            let mut piv = pool.swap_remove(best);
            let v = ring.valuation(&piv[c]);
            let (unit, _) = ring.div_rem_p_pow(&piv[c], v);
            let inv = ring.unit_inverse(&unit);
            for x in piv.iter_mut().skip(c) {
                *x = ring.mul(x, &inv);
            }
            debug_assert_eq!(piv[c], ring.p_pow(v));

            for row in pool.iter_mut() {
                if ring.is_zero(&row[c]) {
                    continue;
                }
                let (q, rem) = ring.div_rem_p_pow(&row[c], v);
                debug_assert!(ring.is_zero(&rem));
                axpy(ring, row, &q, &piv, c);
            }
            if v > 0 {
                let scale = ring.p_pow(k - v);
                let sat: Vec<R::Elem> = piv.iter().map(|x| ring.mul(x, &scale)).collect();
                if sat.iter().any(|x| !ring.is_zero(x)) {
                    pool.push(sat);
                }
            }
            pool.retain(|r| r.iter().any(|x| !ring.is_zero(x)));
            rows.push(piv);
            pivots.push((c, v));
        }

        // Reduce the entries above each pivot.
        for (i, &(c, v)) in pivots.iter().enumerate() {
            for j in 0..i {
                let (q, _) = ring.div_rem_p_pow(&rows[j][c], v);
                if !ring.is_zero(&q) {
                    let (head, tail) = rows.split_at_mut(i);
                    axpy(ring, &mut head[j], &q, &tail[0], c);
                }
            }
        }

        HowellForm {
            ring: ring.clone(),
            ncols,
            rows,
            pivots,
        }
    }

    pub fn zero(ring: &R, ncols: usize) -> Self {
        Self::new(ring, ncols, std::iter::empty())
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<R::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    /// `log_p` of the order of the subgroup.
    pub fn order_exponent(&self) -> u32 {
        let k = self.ring.exponent();
        self.pivots.iter().map(|&(_, v)| k - v).sum()
    }

    /// `log_p` of the index of the subgroup in `(Z/p^k)^m`.
    pub fn index_exponent(&self) -> u32 {
        self.ncols as u32 * self.ring.exponent() - self.order_exponent()
    }

    /// Canonical representative of `v` modulo the subgroup.
    pub fn reduce(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(v.len(), self.ncols);
        let mut x = v.to_vec();
        for (row, &(c, val)) in self.rows.iter().zip(&self.pivots) {
            let (q, _) = self.ring.div_rem_p_pow(&x[c], val);
            if !self.ring.is_zero(&q) {
                axpy(&self.ring, &mut x, &q, row, c);
            }
        }
        x
    }

    pub fn contains(&self, v: &[R::Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.ring.is_zero(x))
    }

    pub fn contains_all(&self, other: &Self) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// The subgroup generated by `self` and `extra`.
    pub fn extend<I>(&self, extra: I) -> Self
    where
        I: IntoIterator<Item = Vec<R::Elem>>,
    {
        Self::new(
            &self.ring,
            self.ncols,
            self.rows.iter().cloned().chain(extra),
        )
    }

    /// Iterates over the canonical representatives of `(Z/p^k)^m / self`,
    /// one per coset.
    pub fn transversal(&self) -> impl Iterator<Item = Vec<R::Elem>> + '_ {
        let k = self.ring.exponent();
        let p = self.ring.prime();
        let mut ranges = vec![k; self.ncols];
        for &(c, v) in &self.pivots {
            ranges[c] = v;
        }
        let radix: Vec<u64> = ranges.iter().map(|&e| p.pow(e)).collect();
        let total: u128 = radix.iter().map(|&r| r as u128).product();
        (0..total).map(move |mut idx| {
            radix
                .iter()
                .map(|&r| {
                    let digit = (idx % r as u128) as u64;
                    idx /= r as u128;
                    self.ring.from_u64(digit)
                })
                .collect()
        })
    }
}

/// `row -= q * pivot`, touching only the columns from `start` on.
fn axpy<R: ResidueRing>(ring: &R, row: &mut [R::Elem], q: &R::Elem, pivot: &[R::Elem], start: usize) {
    for (x, y) in row.iter_mut().zip(pivot).skip(start) {
        if !ring.is_zero(y) {
            *x = ring.sub(x, &ring.mul(q, y));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::{BigZpk, SmallZpk};
    use num_bigint::BigUint;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn span_set(ring: &SmallZpk, ncols: usize, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
        let mut set = BTreeSet::new();
        set.insert(vec![0; ncols]);
        let mut frontier = vec![vec![0; ncols]];
        while let Some(v) = frontier.pop() {
            for g in gens {
                let w: Vec<u64> = v.iter().zip(g).map(|(a, b)| ring.add(a, b)).collect();
                if set.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        set
    }

    #[test]
    fn pivots_are_prime_powers_and_reduced_above() {
        let r = SmallZpk::new(2, 3).unwrap();
        let h = HowellForm::new(&r, 2, vec![vec![6, 3], vec![4, 2]]);
        for (row, &(c, v)) in h.rows().iter().zip(h.pivots()) {
            assert_eq!(row[c], 2u64.pow(v));
        }
        assert_eq!(h.order_exponent() as usize, span_set(&r, 2, &[vec![6, 3], vec![4, 2]]).len().trailing_zeros() as usize);
    }

    #[test]
    fn saturation_row_is_added() {
        // <(2, 1)> in (Z/4)^2 contains 2*(2,1) = (0, 2); the plain echelon
        // form would miss that the subgroup has order 4 with no pivot row at column 1.
        let r = SmallZpk::new(2, 2).unwrap();
        let h = HowellForm::new(&r, 2, vec![vec![2, 1]]);
        assert_eq!(h.rows(), &[vec![2, 1], vec![0, 2]]);
        assert!(h.contains(&[0, 2]));
        assert!(!h.contains(&[0, 1]));
        assert_eq!(h.order_exponent(), 2);
    }

    #[test]
    fn transversal_enumerates_each_coset_once() {
        let r = SmallZpk::new(3, 2).unwrap();
        let gens = vec![vec![3, 1, 0], vec![0, 3, 6]];
        let h = HowellForm::new(&r, 3, gens.clone());
        let reps: Vec<Vec<u64>> = h.transversal().collect();
        assert_eq!(reps.len() as u32, 3u32.pow(h.index_exponent()));
        let canon: BTreeSet<Vec<u64>> = reps.iter().map(|v| h.reduce(v)).collect();
        assert_eq!(canon.len(), reps.len());
        for v in &reps {
            assert_eq!(&h.reduce(v), v);
        }
    }

    #[test]
    fn big_backend_matches_small() {
        let small = SmallZpk::new(5, 3).unwrap();
        let big = BigZpk::new(5, 3);
        let gens = vec![vec![10u64, 3, 7], vec![25, 0, 50], vec![5, 5, 5]];
        let hs = HowellForm::new(&small, 3, gens.clone());
        let hb = HowellForm::new(
            &big,
            3,
            gens.iter()
                .map(|g| g.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>()),
        );
        let as_big: Vec<Vec<BigUint>> = hs
            .rows()
            .iter()
            .map(|r| r.iter().map(|&x| BigUint::from(x)).collect())
            .collect();
        assert_eq!(as_big, hb.rows());
    }

    fn gen_set() -> impl Strategy<Value = Vec<Vec<u64>>> {
        prop::collection::vec(prop::collection::vec(0u64..8, 3), 0..5)
    }

    proptest! {
        #[test]
        fn idempotent(gens in gen_set()) {
            let r = SmallZpk::new(2, 3).unwrap();
            let h = HowellForm::new(&r, 3, gens);
            let again = HowellForm::new(&r, 3, h.rows().to_vec());
            prop_assert_eq!(h, again);
        }

        #[test]
        fn canonical_under_change_of_generators(gens in gen_set(), mix in prop::collection::vec(0u64..8, 0..5)) {
            let r = SmallZpk::new(2, 3).unwrap();
            let h = HowellForm::new(&r, 3, gens.clone());
            // Append combinations of the original generators.
            let mut more = gens.clone();
            for (i, &m) in mix.iter().enumerate() {
                if gens.is_empty() { break; }
                let a = &gens[i % gens.len()];
                let b = &gens[(i + 1) % gens.len()];
                more.push(a.iter().zip(b).map(|(x, y)| r.add(&r.mul(&m, x), y)).collect());
            }
            more.reverse();
            prop_assert_eq!(h, HowellForm::new(&r, 3, more));
        }

        #[test]
        fn agrees_with_explicit_span(gens in prop::collection::vec(prop::collection::vec(0u64..9, 2), 0..4)) {
            let r = SmallZpk::new(3, 2).unwrap();
            let h = HowellForm::new(&r, 2, gens.clone());
            let span = span_set(&r, 2, &gens);
            prop_assert_eq!(span.len() as u64, 3u64.pow(h.order_exponent()));
            for a in 0..9u64 {
                for b in 0..9u64 {
                    prop_assert_eq!(h.contains(&[a, b]), span.contains(&vec![a, b]));
                }
            }
        }
    }
}
