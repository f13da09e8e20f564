//! Finite rank-one `Z_p G`-modules and their invariants `(r, s, t)`.
//!
//! A finite quotient `A = L/M` with `|A| = p^n` is annihilated by `p^n`,
//! so it is realized exactly as `(Z/p^K)^p / W` for any `K >= n`, where `W`
//! is the image of `M`. The group element `g` acts as the cyclic shift of
//! coordinates and `W` is shift-invariant.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::howell::HowellForm;
use crate::padic::{GroupRingElt, PadicInt};
use crate::residue::{is_prime, ResidueRing};

/// Working precision for modules of order `p^n`: `n + p + 2`.
pub fn guard_precision(n: u32, p: u64) -> u32 {
    n + p as u32 + 2
}

/// `p^r = |[A,G]|`, `p^s = |A^G|`, and `t` in `F_p` (zero when `rs = 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Invariants {
    pub r: u32,
    pub s: u32,
    pub t: u64,
}

impl Invariants {
    pub fn new(p: u64, r: u32, s: u32, t: u64) -> Result<Self> {
        let inv = Invariants { r, s, t };
        inv.validate(p)?;
        Ok(inv)
    }

    pub fn zero() -> Self {
        Invariants { r: 0, s: 0, t: 0 }
    }

    /// `s = 0` exactly for the zero module, and `t` lives in `F_p` and
    /// vanishes whenever `rs = 0`.
    pub fn validate(&self, p: u64) -> Result<()> {
        let ok = self.t < p && (self.s >= 1 || (self.r == 0 && self.t == 0)) && (self.r >= 1 || self.t == 0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInvariants {
                p,
                r: self.r,
                s: self.s,
                t: self.t,
            })
        }
    }

    pub fn order_exponent(&self) -> u32 {
        self.r + self.s
    }
}

/// Isomorphism type of a rank-one quotient of `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModuleClass {
    Finite(Invariants),
    FreeL,
    AugmentationIdeal,
    TrivialZp,
    /// `L / p^n L^G`
    TorsionOverFixed(u32),
    /// `L / (g-1)^n I_G`
    TorsionOverAug(u32),
}

impl ModuleClass {
    pub fn name(&self) -> &'static str {
        match self {
            ModuleClass::Finite(_) => "Finite",
            ModuleClass::FreeL => "FreeL",
            ModuleClass::AugmentationIdeal => "AugmentationIdeal",
            ModuleClass::TrivialZp => "TrivialZp",
            ModuleClass::TorsionOverFixed(_) => "TorsionOverFixed",
            ModuleClass::TorsionOverAug(_) => "TorsionOverAug",
        }
    }

    pub fn validate(&self, p: u64) -> Result<()> {
        match *self {
            ModuleClass::Finite(inv) => inv.validate(p),
            ModuleClass::TorsionOverFixed(0) | ModuleClass::TorsionOverAug(0) => Err(
                Error::InvalidArgument("torsion exponent must be at least 1".into()),
            ),
            _ => Ok(()),
        }
    }

    /// `log_p |A|` for finite modules.
    pub fn order_exponent(&self) -> Option<u32> {
        match self {
            ModuleClass::Finite(inv) => Some(inv.order_exponent()),
            _ => None,
        }
    }

    /// `log_p |T(A)|`.
    pub fn torsion_exponent(&self) -> u32 {
        match *self {
            ModuleClass::Finite(inv) => inv.order_exponent(),
            ModuleClass::TorsionOverFixed(n) | ModuleClass::TorsionOverAug(n) => n,
            _ => 0,
        }
    }
}

impl fmt::Display for ModuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleClass::Finite(i) => write!(f, "Finite({}, {}, {})", i.r, i.s, i.t),
            ModuleClass::TorsionOverFixed(n) => write!(f, "TorsionOverFixed({n})"),
            ModuleClass::TorsionOverAug(n) => write!(f, "TorsionOverAug({n})"),
            other => f.write_str(other.name()),
        }
    }
}

/// All isomorphism types of rank-one modules of order `p^n`.
pub fn finite_classes(p: u64, n: u32) -> Vec<Invariants> {
    if n == 0 {
        return vec![Invariants::zero()];
    }
    let mut out = vec![Invariants { r: 0, s: n, t: 0 }];
    for r in 1..n {
        for t in 0..p {
            out.push(Invariants { r, s: n - r, t });
        }
    }
    out
}

/// Generators of the unique `M` with `L/M` in the class `cls`, at precision `k`.
pub fn canonical_presentation(cls: &ModuleClass, p: u64, k: u32) -> Result<Vec<GroupRingElt>> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    cls.validate(p)?;
    let g1 = GroupRingElt::g_minus_one(p, k);
    let p_pow = |e: u32| GroupRingElt::one(p, k).scale(&PadicInt::from_i64(p as i64, p, k).pow(e));
    let gens = match *cls {
        ModuleClass::Finite(inv) => {
            let needed = guard_precision(inv.order_exponent(), p);
            if k < needed {
                return Err(Error::PrecisionExhausted { needed, available: k });
            }
            let Invariants { r, s, t } = inv;
            if s == 0 {
                vec![GroupRingElt::one(p, k)]
            } else if r == 0 {
                vec![g1, p_pow(s)]
            } else {
                let eps_term = GroupRingElt::epsilon_power(s, p, k).mul(&g1.pow(s * (p as u32 - 1)));
                let t_term = g1.pow(r).scale(&PadicInt::from_i64(t as i64, p, k));
                vec![g1.pow(r + 1), p_pow(s).sub(&eps_term).sub(&t_term)]
            }
        }
        ModuleClass::FreeL => vec![],
        ModuleClass::AugmentationIdeal => vec![GroupRingElt::norm(p, k)],
        ModuleClass::TrivialZp => vec![g1],
        ModuleClass::TorsionOverFixed(n) => vec![GroupRingElt::norm(p, k).mul(&p_pow(n))],
        ModuleClass::TorsionOverAug(n) => vec![g1.pow(n + 1)],
    };
    Ok(gens)
}

/// `A = (Z/p^K)^p / W` with `g` acting by the cyclic shift.
#[derive(Clone, Debug)]
pub struct FiniteGModule<R: ResidueRing> {
    ring: R,
    relations: HowellForm<R>,
}

impl<R: ResidueRing> FiniteGModule<R> {
    /// Wraps a relation subgroup, checking that it is `g`-invariant.
    pub fn new(relations: HowellForm<R>) -> Result<Self> {
        let ring = relations.ring().clone();
        if relations.ncols() != ring.prime() as usize {
            return Err(Error::ParameterMismatch(format!(
                "relation vectors have length {}, expected {}",
                relations.ncols(),
                ring.prime()
            )));
        }
        let m = FiniteGModule { ring, relations };
        if !m.relations.rows().iter().all(|w| m.relations.contains(&m.shift(w))) {
            return Err(Error::NotInvariant);
        }
        Ok(m)
    }

    /// `L / (p^K L + L x_1 + ... + L x_m)`.
    pub fn from_generators(ring: R, gens: &[Vec<R::Elem>]) -> Self {
        let p = ring.prime() as usize;
        let mut all = Vec::with_capacity(gens.len() * p);
        for x in gens {
            let mut cur = x.clone();
            for _ in 0..p {
                let next = shift(&cur);
                all.push(cur);
                cur = next;
            }
        }
        let relations = HowellForm::new(&ring, p, all);
        FiniteGModule { ring, relations }
    }

    pub fn from_group_ring(ring: R, gens: &[GroupRingElt]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|x| poly_in(&ring, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_generators(ring, &gens))
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn prime(&self) -> u64 {
        self.ring.prime()
    }

    pub fn relations(&self) -> &HowellForm<R> {
        &self.relations
    }

    /// `log_p |A|`.
    pub fn order_exponent(&self) -> u32 {
        self.relations.index_exponent()
    }

    /// `log_p` of the order of the image in `A` of a subgroup containing `W`.
    pub fn subgroup_order(&self, h: &HowellForm<R>) -> u32 {
        h.order_exponent() - self.relations.order_exponent()
    }

    /// The image of `1 in L`.
    pub fn unit_generator(&self) -> Vec<R::Elem> {
        let mut e = vec![self.ring.zero(); self.prime() as usize];
        e[0] = self.ring.one();
        e
    }

    /// Converts a group ring element to a coefficient vector in this ring.
    pub fn poly(&self, x: &GroupRingElt) -> Result<Vec<R::Elem>> {
        poly_in(&self.ring, x)
    }

    pub fn shift(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        shift(v)
    }

    /// `x * v` for `x = sum x_i g^i`.
    pub fn act(&self, x: &[R::Elem], v: &[R::Elem]) -> Vec<R::Elem> {
        let p = v.len();
        let mut out = vec![self.ring.zero(); p];
        for (i, xi) in x.iter().enumerate() {
            if self.ring.is_zero(xi) {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                let k = (i + j) % p;
                out[k] = self.ring.add(&out[k], &self.ring.mul(xi, vj));
            }
        }
        out
    }

    pub fn scale(&self, c: &R::Elem, v: &[R::Elem]) -> Vec<R::Elem> {
        v.iter().map(|x| self.ring.mul(c, x)).collect()
    }

    pub fn sub(&self, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        a.iter().zip(b).map(|(x, y)| self.ring.sub(x, y)).collect()
    }

    pub fn is_zero(&self, v: &[R::Elem]) -> bool {
        self.relations.contains(v)
    }

    pub fn equal(&self, a: &[R::Elem], b: &[R::Elem]) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    /// `x A`, as the subgroup of `(Z/p^K)^p` lying over it.
    pub fn image(&self, x: &[R::Elem]) -> HowellForm<R> {
        let p = self.prime() as usize;
        let cols = (0..p).map(|j| {
            let mut e = vec![self.ring.zero(); p];
            e[j] = self.ring.one();
            self.act(x, &e)
        });
        self.relations.extend(cols)
    }

    /// `{a in A : x a = 0}`, as the subgroup of `(Z/p^K)^p` lying over it.
    ///
    /// Row-reduces `[x e_j | e_j]` together with `[w | 0]`, `w in W`; by the
    /// Howell property the rows with vanishing left half span all pairs
    /// `(0, v)` with `x v in W`.
    pub fn kernel(&self, x: &[R::Elem]) -> HowellForm<R> {
        let p = self.prime() as usize;
        let zero = self.ring.zero();
        let mut rows = Vec::with_capacity(p + self.relations.rows().len());
        for j in 0..p {
            let mut e = vec![zero.clone(); p];
            e[j] = self.ring.one();
            let mut row = self.act(x, &e);
            row.extend(e);
            rows.push(row);
        }
        for w in self.relations.rows() {
            let mut row = w.clone();
            row.extend(std::iter::repeat_n(zero.clone(), p));
            rows.push(row);
        }
        let h = HowellForm::new(&self.ring, 2 * p, rows);
        let lifted = h
            .rows()
            .iter()
            .zip(h.pivots())
            .filter(|(_, &(c, _))| c >= p)
            .map(|(r, _)| r[p..].to_vec());
        HowellForm::new(&self.ring, p, lifted)
    }

    pub fn g_minus_one(&self) -> Vec<R::Elem> {
        poly_in(&self.ring, &GroupRingElt::g_minus_one(self.prime(), self.ring.exponent())).expect("same precision")
    }

    pub fn norm(&self) -> Vec<R::Elem> {
        poly_in(&self.ring, &GroupRingElt::norm(self.prime(), self.ring.exponent())).expect("same precision")
    }

    /// `A^G = ker(g - 1)`.
    pub fn fixed_points(&self) -> HowellForm<R> {
        self.kernel(&self.g_minus_one())
    }

    /// `[A, G] = (g - 1) A`.
    pub fn commutator(&self) -> HowellForm<R> {
        self.image(&self.g_minus_one())
    }

    /// `m A = (g - 1) A + p A`.
    pub fn max_ideal_image(&self) -> HowellForm<R> {
        let p = self.prime() as usize;
        let pe = self.ring.p_pow(1);
        let extra = (0..p).map(|j| {
            let mut e = vec![self.ring.zero(); p];
            e[j] = pe.clone();
            e
        });
        self.commutator().extend(extra)
    }

    /// `r(A) = dim_{F_p} A / mA`.
    pub fn rank(&self) -> u32 {
        self.order_exponent() - self.subgroup_order(&self.max_ideal_image())
    }

    /// Canonical representatives of all elements of `A`.
    pub fn elements(&self) -> impl Iterator<Item = Vec<R::Elem>> + '_ {
        self.relations.transversal()
    }

    /// `|[A,G]|, |[A,G,G]|, ...` down to the trivial group, as `log_p` orders.
    pub fn commutator_series_orders(&self) -> Vec<u32> {
        let g1 = self.g_minus_one();
        let mut out = Vec::new();
        let mut x = g1.clone();
        loop {
            let o = self.subgroup_order(&self.image(&x));
            out.push(o);
            if o == 0 {
                return out;
            }
            x = self.act(&g1, &x);
        }
    }
}

fn shift<T: Clone>(v: &[T]) -> Vec<T> {
    let p = v.len();
    (0..p).map(|i| v[(i + p - 1) % p].clone()).collect()
}

fn poly_in<R: ResidueRing>(ring: &R, x: &GroupRingElt) -> Result<Vec<R::Elem>> {
    if x.prime() != ring.prime() {
        return Err(Error::ParameterMismatch(format!(
            "element over p={} used in a module over p={}",
            x.prime(),
            ring.prime()
        )));
    }
    if x.precision() < ring.exponent() {
        return Err(Error::PrecisionExhausted {
            needed: ring.exponent(),
            available: x.precision(),
        });
    }
    Ok(x.residues().iter().map(|c| ring.from_biguint(c)).collect())
}

/// Precomputed structure of `A` for extracting `(r, s, t)` from many
/// generators: `mA` and the filtration `B = B_0 > B_1 > ... > B_r = 0`,
/// `B_j = (g-1)^j [A,G]`.
pub struct InvariantExtractor<'a, R: ResidueRing> {
    module: &'a FiniteGModule<R>,
    max_ideal: HowellForm<R>,
    filtration: Vec<HowellForm<R>>,
    r: u32,
    s: u32,
    g_minus_one: Vec<R::Elem>,
    /// `p^s - eps^s (g-1)^(s(p-1))`; applied to `a` it gives
    /// `p^s a - eps^s (zeta-1)^(s(p-1)-1) b`.
    defect: Vec<R::Elem>,
    p_pow_s: Vec<R::Elem>,
}

impl<'a, R: ResidueRing> InvariantExtractor<'a, R> {
    pub fn new(module: &'a FiniteGModule<R>) -> Result<Self> {
        let rank = module.rank();
        if rank > 1 {
            return Err(Error::RankExceeded(rank));
        }
        let n = module.order_exponent();
        let g1 = module.g_minus_one();
        let mut filtration = vec![module.commutator()];
        let mut x = g1.clone();
        while module.subgroup_order(filtration.last().expect("non-empty")) > 0 {
            x = module.act(&g1, &x);
            filtration.push(module.image(&x));
        }
        let r = module.subgroup_order(&filtration[0]);
        let s = n - r;
        let fixed = module.subgroup_order(&module.fixed_points());
        if fixed != s {
            return Err(Error::ClassificationMismatch(format!(
                "|A| = p^{n}, |[A,G]| = p^{r} but |A^G| = p^{fixed}"
            )));
        }
        let (p, k) = (module.prime(), module.ring().exponent());
        let p_pow_s = GroupRingElt::one(p, k).scale(&PadicInt::from_i64(p as i64, p, k).pow(s));
        let eps_term = GroupRingElt::epsilon_power(s, p, k)
            .mul(&GroupRingElt::g_minus_one(p, k).pow(s * (p as u32 - 1)));
        let defect = module.poly(&p_pow_s.sub(&eps_term))?;
        Ok(InvariantExtractor {
            module,
            max_ideal: module.max_ideal_image(),
            filtration,
            r,
            s,
            g_minus_one: g1,
            defect,
            p_pow_s: module.poly(&p_pow_s)?,
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn is_generator(&self, a: &[R::Elem]) -> bool {
        self.module.order_exponent() == 0 || !self.max_ideal.contains(a)
    }

    pub fn extract(&self, a: &[R::Elem]) -> Result<Invariants> {
        let m = self.module;
        if m.order_exponent() == 0 {
            return Ok(Invariants::zero());
        }
        if !self.is_generator(a) {
            return Err(Error::NotAGenerator);
        }
        let (r, s) = (self.r, self.s);
        let b_sub = &self.filtration[0];
        // A/B is cyclic of order p^s generated by a.
        let ps_a = m.act(&self.p_pow_s, a);
        let ring = m.ring();
        let ps1_a = m.scale(&ring.p_pow(s - 1), a);
        if !b_sub.contains(&ps_a) || (s > 0 && b_sub.contains(&ps1_a)) {
            return Err(Error::ClassificationMismatch(format!(
                "p^{s} is not the order of a modulo [A,G]"
            )));
        }
        if r == 0 || s == 0 {
            return Ok(Invariants { r, s, t: 0 });
        }

        // Expand the defect in the basis (g-1)^j b of B with digits in [0, p).
        let b = m.act(&self.g_minus_one, a);
        let mut rest = m.act(&self.defect, a);
        let mut basis = b;
        let mut digits = Vec::with_capacity(r as usize);
        for j in 0..r as usize {
            let next = &self.filtration[j + 1];
            let digit = (0..m.prime()).find(|&c| {
                let trial = m.sub(&rest, &m.scale(&ring.from_u64(c), &basis));
                next.contains(&trial)
            });
            let Some(c) = digit else {
                return Err(Error::ClassificationMismatch(format!(
                    "defect has no digit at (g-1)^{j} b"
                )));
            };
            rest = m.sub(&rest, &m.scale(&ring.from_u64(c), &basis));
            basis = m.act(&self.g_minus_one, &basis);
            digits.push(c);
        }
        if digits[..r as usize - 1].iter().any(|&c| c != 0) {
            return Err(Error::ClassificationMismatch(format!(
                "non-zero defect digits below (g-1)^(r-1) b: {digits:?}"
            )));
        }
        Ok(Invariants {
            r,
            s,
            t: digits[r as usize - 1],
        })
    }
}

/// `(r, s, t)` of `A` computed from the generator `a`.
pub fn extract_invariants<R: ResidueRing>(module: &FiniteGModule<R>, a: &[R::Elem]) -> Result<Invariants> {
    InvariantExtractor::new(module)?.extract(a)
}

/// Checks `N p^j a = p^(j+1) a - eps^(j+1) (zeta-1)^((j+1)(p-1)-1) b` in `A`,
/// with `b = (g-1) a`.
pub fn norm_identity_check<R: ResidueRing>(module: &FiniteGModule<R>, a: &[R::Elem], j: u32) -> Result<bool> {
    if j == 0 {
        return Err(Error::InvalidArgument("j must be at least 1".into()));
    }
    if module.order_exponent() > 0 && module.max_ideal_image().contains(a) {
        return Err(Error::NotAGenerator);
    }
    let (p, k) = (module.prime(), module.ring().exponent());
    let pp = PadicInt::from_i64(p as i64, p, k);
    let lhs = GroupRingElt::norm(p, k).scale(&pp.pow(j));
    let rhs = GroupRingElt::one(p, k).scale(&pp.pow(j + 1)).sub(
        &GroupRingElt::epsilon_power(j + 1, p, k)
            .mul(&GroupRingElt::g_minus_one(p, k).pow((j + 1) * (p as u32 - 1))),
    );
    let lhs = module.act(&module.poly(&lhs)?, a);
    let rhs = module.act(&module.poly(&rhs)?, a);
    Ok(module.equal(&lhs, &rhs))
}
