//! Set-based oracles: modules as explicit sets of vectors over `Z/p^k`,
//! and the unit `eps` from a rational linear solve.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_rational::Rational64;
use num_traits::{One, Zero};

pub type Vector = Vec<u64>;

pub fn all_vectors(p: u64, k: u32, len: usize) -> Vec<Vector> {
    let m = p.pow(k);
    let total = m.pow(len as u32);
    (0..total)
        .map(|mut i| {
            (0..len)
                .map(|_| {
                    let d = i % m;
                    i /= m;
                    d
                })
                .collect()
        })
        .collect()
}

pub fn shift(v: &[u64]) -> Vector {
    let p = v.len();
    (0..p).map(|i| v[(i + p - 1) % p]).collect()
}

/// The smallest set containing `gens` closed under addition and the shift.
pub fn invariant_span(p: u64, k: u32, gens: &[Vector]) -> HashSet<Vector> {
    let m = p.pow(k);
    let mut gen_set: Vec<Vector> = Vec::new();
    for g in gens {
        let mut cur: Vector = g.iter().map(|x| x % m).collect();
        for _ in 0..p {
            let next = shift(&cur);
            gen_set.push(cur);
            cur = next;
        }
    }
    let zero = vec![0; p as usize];
    let mut seen: HashSet<Vector> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(v) = queue.pop_front() {
        for g in &gen_set {
            let w: Vector = v.iter().zip(g).map(|(a, b)| (a + b) % m).collect();
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// `A = (Z/p^k)^p / W` with every subgroup held as an explicit set.
pub struct SetModule {
    pub p: u64,
    pub k: u32,
    pub w: HashSet<Vector>,
    pub all: Vec<Vector>,
}

impl SetModule {
    pub fn new(p: u64, k: u32, gens: &[Vector]) -> Self {
        SetModule {
            p,
            k,
            w: invariant_span(p, k, gens),
            all: all_vectors(p, k, p as usize),
        }
    }

    fn m(&self) -> u64 {
        self.p.pow(self.k)
    }

    /// `x * v` with `x = sum x_i g^i`.
    pub fn act(&self, x: &[u64], v: &[u64]) -> Vector {
        let p = self.p as usize;
        let m = self.m() as u128;
        let mut out = vec![0u128; p];
        for i in 0..p {
            for j in 0..p {
                out[(i + j) % p] = (out[(i + j) % p] + x[i] as u128 * v[j] as u128) % m;
            }
        }
        out.into_iter().map(|c| c as u64).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vector {
        let m = self.m();
        a.iter().zip(b).map(|(x, y)| (x + y) % m).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vector {
        let m = self.m();
        a.iter().zip(b).map(|(x, y)| (x + m - y) % m).collect()
    }

    pub fn is_zero(&self, v: &[u64]) -> bool {
        self.w.contains(v)
    }

    fn log_p(&self, mut size: usize) -> u32 {
        let mut e = 0;
        while size > 1 {
            assert_eq!(size % self.p as usize, 0);
            size /= self.p as usize;
            e += 1;
        }
        e
    }

    pub fn order_exponent(&self) -> u32 {
        self.log_p(self.all.len() / self.w.len())
    }

    /// `log_p |{a in A : x a = 0}|`.
    pub fn kernel_exponent(&self, x: &[u64]) -> u32 {
        let count = self.all.iter().filter(|v| self.is_zero(&self.act(x, v))).count();
        self.log_p(count / self.w.len())
    }

    /// `log_p |x A|`.
    pub fn image_exponent(&self, x: &[u64]) -> u32 {
        let images: HashSet<Vector> = self.all.iter().map(|v| self.act(x, v)).collect();
        let gens: Vec<Vector> = images.into_iter().chain(self.w.iter().cloned()).collect();
        let sum = invariant_span(self.p, self.k, &gens);
        self.log_p(sum.len() / self.w.len())
    }

    pub fn g_minus_one(&self) -> Vector {
        let mut x = vec![0; self.p as usize];
        x[0] = self.m() - 1;
        x[1 % self.p as usize] = (x[1 % self.p as usize] + 1) % self.m();
        x
    }

    pub fn norm(&self) -> Vector {
        vec![1; self.p as usize]
    }

    /// `(h0, h1)` as `log_p` orders.
    pub fn cohomology(&self) -> (u32, u32) {
        let g1 = self.g_minus_one();
        let n = self.norm();
        (
            self.kernel_exponent(&g1) - self.image_exponent(&n),
            self.kernel_exponent(&n) - self.image_exponent(&g1),
        )
    }

    pub fn unit_generator(&self) -> Vector {
        let mut e = vec![0; self.p as usize];
        e[0] = 1;
        e
    }

    pub fn poly_pow(&self, x: &[u64], e: u32) -> Vector {
        let mut acc = self.unit_generator();
        for _ in 0..e {
            acc = self.act(&acc, x);
        }
        acc
    }

    /// `(r, s, t)` straight from the defining relation
    /// `p^s a = eps^s (g-1)^(s(p-1)) a + t (g-1)^r a`.
    pub fn invariants(&self, a: &[u64]) -> (u32, u32, u64) {
        let g1 = self.g_minus_one();
        let r = self.image_exponent(&g1);
        let s = self.order_exponent() - r;
        if r == 0 || s == 0 {
            return (r, s, 0);
        }
        let p = self.p;
        let m = self.m();
        let eps = epsilon_rational(p);
        let eps: Vector = eps
            .iter()
            .map(|&c| c.rem_euclid(m as i64) as u64)
            .chain(std::iter::once(0))
            .collect();
        let eps_s = self.poly_pow(&eps, s);
        let lhs = self.act(&self.poly_pow(&self.const_poly(p), s), a);
        let known = self.act(&self.act(&eps_s, &self.poly_pow(&g1, s * (p as u32 - 1))), a);
        let tb = self.act(&self.poly_pow(&g1, r), a);
        let hits: Vec<u64> = (0..p)
            .filter(|&t| {
                let tv: Vector = tb.iter().map(|x| x * t % m).collect();
                self.is_zero(&self.sub(&self.sub(&lhs, &known), &tv))
            })
            .collect();
        assert_eq!(hits.len(), 1, "t is not unique: {hits:?}");
        (r, s, hits[0])
    }

    pub fn const_poly(&self, c: u64) -> Vector {
        let mut x = vec![0; self.p as usize];
        x[0] = c % self.m();
        x
    }

    /// Elements not in `(g-1)A + pA`.
    pub fn generators(&self) -> Vec<Vector> {
        let g1 = self.g_minus_one();
        let mut gens: Vec<Vector> = self.all.iter().map(|v| self.act(&g1, v)).collect();
        gens.extend(self.all.iter().map(|v| self.act(&self.const_poly(self.p), v)));
        gens.extend(self.w.iter().cloned());
        let max = invariant_span(self.p, self.k, &gens);
        let mut seen = HashSet::new();
        self.all
            .iter()
            .filter(|v| !max.contains(*v))
            .filter(|v| {
                // one representative per coset of W
                let key = self.w.iter().map(|w| self.add(v, w)).min().expect("W contains 0");
                seen.insert(key)
            })
            .cloned()
            .collect()
    }
}

/// Every `G`-invariant subgroup of `(Z/p^n)^p` of index `p^n`, found as the
/// kernels of all surjections onto abelian groups of order `p^n`.
pub fn invariant_subgroups_by_kernels(p: u64, n: u32) -> BTreeSet<BTreeSet<Vector>> {
    let vectors = all_vectors(p, n, p as usize);
    let mut found = BTreeSet::new();
    for parts in partitions(n, p as usize) {
        // Q = sum Z/p^(a_i); an element is a vector of residues.
        let moduli: Vec<u64> = parts.iter().map(|&a| p.pow(a)).collect();
        let q_size: u64 = moduli.iter().product();
        let q_elems: Vec<Vector> = (0..q_size)
            .map(|mut i| {
                moduli
                    .iter()
                    .map(|&m| {
                        let d = i % m;
                        i /= m;
                        d
                    })
                    .collect()
            })
            .collect();
        // A homomorphism is the image of each basis vector.
        let homs = (q_size as usize).pow(p as u32);
        for mut h in 0..homs {
            let images: Vec<&Vector> = (0..p)
                .map(|_| {
                    let e = &q_elems[h % q_size as usize];
                    h /= q_size as usize;
                    e
                })
                .collect();
            let phi = |v: &Vector| -> Vector {
                moduli
                    .iter()
                    .enumerate()
                    .map(|(c, &m)| v.iter().zip(&images).map(|(x, img)| x * img[c]).sum::<u64>() % m)
                    .collect()
            };
            let mut kernel = BTreeSet::new();
            let mut image = HashSet::new();
            for v in &vectors {
                let y = phi(v);
                if y.iter().all(|&c| c == 0) {
                    kernel.insert(v.clone());
                }
                image.insert(y);
            }
            if image.len() as u64 != q_size {
                continue;
            }
            if kernel.iter().all(|v| kernel.contains(&shift(v))) {
                found.insert(kernel);
            }
        }
    }
    found
}

/// Partitions of `n` into at most `max_parts` positive parts.
fn partitions(n: u32, max_parts: usize) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        if parts == 0 {
            return;
        }
        for a in (1..=max.min(n)).rev() {
            cur.push(a);
            go(n - a, a, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, max_parts, &mut Vec::new(), &mut out);
    out
}

/// `eps` in the basis `1, zeta, ..., zeta^(p-2)`, solving
/// `eps (zeta - 1)^(p-1) = p` over the rationals.
pub fn epsilon_rational(p: u64) -> Vec<i64> {
    let d = p as usize - 1;
    // multiplication by zeta in the power basis, zeta^(p-1) = -(1 + ... + zeta^(p-2))
    let times_zeta = |v: &[Rational64]| -> Vec<Rational64> {
        let top = v[d - 1];
        let mut out = vec![Rational64::zero(); d];
        out[1..d].copy_from_slice(&v[..d - 1]);
        for x in out.iter_mut() {
            *x -= top;
        }
        out
    };
    let times_pi = |v: &[Rational64]| -> Vec<Rational64> {
        times_zeta(v).iter().zip(v).map(|(a, b)| a - b).collect()
    };
    // columns: images of the basis vectors
    let cols: Vec<Vec<Rational64>> = (0..d)
        .map(|j| {
            let mut v = vec![Rational64::zero(); d];
            v[j] = Rational64::one();
            for _ in 0..d {
                v = times_pi(&v);
            }
            v
        })
        .collect();
    let mut aug: Vec<Vec<Rational64>> = (0..d)
        .map(|i| {
            let mut row: Vec<Rational64> = cols.iter().map(|c| c[i]).collect();
            row.push(if i == 0 { Rational64::from_integer(p as i64) } else { Rational64::zero() });
            row
        })
        .collect();
    for c in 0..d {
        let piv = (c..d).find(|&r| !aug[r][c].is_zero()).expect("invertible");
        aug.swap(c, piv);
        let inv = aug[c][c].recip();
        for x in aug[c].iter_mut() {
            *x *= inv;
        }
        for r in 0..d {
            if r != c && !aug[r][c].is_zero() {
                let f = aug[r][c];
                let row_c = aug[c].clone();
                for (x, y) in aug[r].iter_mut().zip(&row_c) {
                    *x -= f * y;
                }
            }
        }
    }
    aug.iter()
        .map(|row| {
            let x = row[d];
            assert!(x.is_integer(), "eps has integer coefficients");
            x.to_integer()
        })
        .collect()
}
