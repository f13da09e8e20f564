//! Brute-force enumeration of the `G`-invariant subgroups of index `p^n`.
//!
//! A submodule `M` of index `p^n` contains `p^n L`, so it is a subgroup of
//! `(Z/p^n)^p`. Such lattices are in bijection with upper-triangular Hermite
//! bases with diagonal `p^(e_0), ..., p^(e_(p-1))`, `sum e_c = n`, and
//! off-diagonal entries reduced modulo the diagonal below them. Bases are
//! built from the last row up and pruned as soon as the partial lattice
//! cannot be shift-invariant.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cohomology::{is_free, tate_cohomology};
use crate::error::{Error, Result};
use crate::gmodule::{canonical_presentation, extract_invariants, finite_classes, guard_precision, FiniteGModule, Invariants, ModuleClass};
use crate::howell::HowellForm;
use crate::residue::{is_prime, ResidueRing, SmallZpk};

/// Default cap on the number of candidate partial bases.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A subgroup of `(Z/p^n)^p`, held in Howell form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    howell: HowellForm<SmallZpk>,
}

fn ring_for(p: u64, n: u32) -> Result<SmallZpk> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    SmallZpk::new(p, n).ok_or_else(|| Error::InvalidArgument(format!("{p}^{n} does not fit in 63 bits")))
}

fn shift(v: &[u64]) -> Vec<u64> {
    let p = v.len();
    (0..p).map(|i| v[(i + p - 1) % p]).collect()
}

impl Submodule {
    /// The subgroup of `(Z/p^n)^p` generated by `gens`, which must be shift-invariant.
    pub fn new(p: u64, n: u32, gens: Vec<Vec<u64>>) -> Result<Self> {
        let ring = ring_for(p, n)?;
        let howell = HowellForm::new(&ring, p as usize, gens.into_iter().map(|g| g.iter().map(|&x| ring.from_u64(x)).collect()));
        Self::from_howell(howell)
    }

    pub fn from_howell(howell: HowellForm<SmallZpk>) -> Result<Self> {
        let sub = Submodule { howell };
        if !sub.is_invariant() {
            return Err(Error::NotInvariant);
        }
        Ok(sub)
    }

    pub fn p(&self) -> u64 {
        self.howell.ring().prime()
    }

    /// Exponent `n` of the ambient `(Z/p^n)^p`.
    pub fn modulus_exponent(&self) -> u32 {
        self.howell.ring().exponent()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        self.howell.rows()
    }

    pub fn howell(&self) -> &HowellForm<SmallZpk> {
        &self.howell
    }

    pub fn index_exponent(&self) -> u32 {
        self.howell.index_exponent()
    }

    pub fn is_invariant(&self) -> bool {
        self.howell.rows().iter().all(|r| self.howell.contains(&shift(r)))
    }

    /// `L/M` as a finite module.
    pub fn quotient(&self) -> FiniteGModule<SmallZpk> {
        FiniteGModule::new(self.howell.clone()).expect("submodules are invariant")
    }

    /// First 16 hex digits of the SHA-256 of the canonical basis.
    pub fn hash_hex(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("p={} n={}", self.p(), self.modulus_exponent()));
        for row in self.basis() {
            let s: Vec<String> = row.iter().map(u64::to_string).collect();
            h.update(format!(";{}", s.join(",")));
        }
        h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerationOptions {
    pub budget: u64,
    /// Worker threads; `1` runs on the calling thread.
    pub jobs: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            budget: DEFAULT_BUDGET,
            jobs: 1,
        }
    }
}

struct Search<'a> {
    ring: SmallZpk,
    p: usize,
    n: u32,
    budget: u64,
    visited: &'a AtomicU64,
}

/// Rows `c..p` of a Hermite basis, with the Howell form of their span.
#[derive(Clone)]
struct Node {
    c: usize,
    used: u32,
    /// `e_j` for `j >= c`.
    exps: Vec<u32>,
    span: HowellForm<SmallZpk>,
}

impl Search<'_> {
    fn tick(&self) -> Result<()> {
        if self.visited.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn root(&self) -> Node {
        Node {
            c: self.p,
            used: 0,
            exps: vec![0; self.p],
            span: HowellForm::zero(&self.ring, self.p),
        }
    }

    /// Children of `node`: every admissible row `c - 1`.
    fn children(&self, node: &Node) -> Result<Vec<Node>> {
        let c = node.c - 1;
        let pp = self.ring.prime();
        let free: Vec<usize> = (c + 1..self.p).collect();
        let radix: Vec<u64> = free.iter().map(|&j| pp.pow(node.exps[j])).collect();
        let combos: u64 = radix.iter().product();
        let exps: Vec<u32> = if c == 0 {
            vec![self.n - node.used]
        } else {
            (0..=self.n - node.used).collect()
        };
        let mut out = Vec::new();
        for e in exps {
            for mut idx in 0..combos {
                self.tick()?;
                let mut row = vec![0u64; self.p];
                row[c] = self.ring.p_pow(e);
                for (&j, &r) in free.iter().zip(&radix) {
                    row[j] = idx % r;
                    idx /= r;
                }
                let span = node.span.extend([row]);
                if self.admissible(&span, &node.span, c) {
                    let mut exps = node.exps.clone();
                    exps[c] = e;
                    out.push(Node {
                        c,
                        used: node.used + e,
                        exps,
                        span,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Necessary condition for invariance given rows `c..p`: every `v` in
    /// the span with `v_(p-1) = 0` shifts into the span of rows `c+1..p`.
    /// At `c = 0` this is replaced by full invariance.
    fn admissible(&self, span: &HowellForm<SmallZpk>, below: &HowellForm<SmallZpk>, c: usize) -> bool {
        if c == 0 {
            return span.rows().iter().all(|r| span.contains(&shift(r)));
        }
        let last = self.p - 1;
        let permute = |v: &Vec<u64>| -> Vec<u64> { std::iter::once(v[last]).chain(v[..last].iter().copied()).collect() };
        let permuted = HowellForm::new(&self.ring, self.p, span.rows().iter().map(permute));
        permuted
            .rows()
            .iter()
            .zip(permuted.pivots())
            .filter(|(_, &(col, _))| col > 0)
            .all(|(r, _)| {
                let mut v: Vec<u64> = r[1..].to_vec();
                v.push(r[0]);
                below.contains(&shift(&v))
            })
    }

    fn dfs(&self, node: Node, out: &mut Vec<HowellForm<SmallZpk>>) -> Result<()> {
        if node.c == 0 {
            out.push(node.span);
            return Ok(());
        }
        for child in self.children(&node)? {
            self.dfs(child, out)?;
        }
        Ok(())
    }
}

/// All `G`-invariant subgroups of `(Z/p^n)^p` of index `p^n`, sorted by basis.
pub fn enumerate_submodules(p: u64, n: u32, opts: &EnumerationOptions) -> Result<Vec<Submodule>> {
    let ring = ring_for(p, n)?;
    let visited = AtomicU64::new(0);
    let search = Search {
        ring,
        p: p as usize,
        n,
        budget: opts.budget,
        visited: &visited,
    };
    // Expand the last rows sequentially to get independent subtrees.
    let mut frontier = vec![search.root()];
    while frontier.len() < 64 && frontier.iter().all(|nd| nd.c > 0) {
        let mut next = Vec::new();
        for nd in &frontier {
            next.extend(search.children(nd)?);
        }
        frontier = next;
    }
    let run = || -> Result<Vec<HowellForm<SmallZpk>>> {
        let parts: Vec<Vec<HowellForm<SmallZpk>>> = frontier
            .into_par_iter()
            .map(|nd| {
                let mut out = Vec::new();
                search.dfs(nd, &mut out)?;
                Ok(out)
            })
            .collect::<Result<_>>()?;
        Ok(parts.into_iter().flatten().collect())
    };
    let forms = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?
        .install(run)?;
    let mut subs: Vec<Submodule> = forms.into_iter().map(|howell| Submodule { howell }).collect();
    subs.sort_by(|a, b| a.basis().cmp(b.basis()));
    debug_assert!(subs.windows(2).all(|w| w[0] != w[1]));
    Ok(subs)
}

/// Howell forms of the canonical presentations of all classes of order `p^n`.
pub struct CanonicalTable {
    p: u64,
    n: u32,
    table: HashMap<Vec<Vec<u64>>, Invariants>,
}

impl CanonicalTable {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        let ring = ring_for(p, n)?;
        let k = guard_precision(n, p);
        let mut table = HashMap::new();
        for inv in finite_classes(p, n) {
            let gens = canonical_presentation(&ModuleClass::Finite(inv), p, k)?;
            let a = FiniteGModule::from_group_ring(ring.clone(), &gens.iter().map(|g| g.truncate(n)).collect::<Vec<_>>())?;
            if let Some(prev) = table.insert(a.relations().rows().to_vec(), inv) {
                return Err(Error::ClassificationMismatch(format!(
                    "classes {prev:?} and {inv:?} have the same presentation"
                )));
            }
        }
        Ok(CanonicalTable { p, n, table })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn lookup(&self, sub: &Submodule) -> Result<ModuleClass> {
        if sub.p() != self.p || sub.modulus_exponent() != self.n {
            return Err(Error::ParameterMismatch(format!(
                "table for p={} n={}, submodule over p={} n={}",
                self.p,
                self.n,
                sub.p(),
                sub.modulus_exponent()
            )));
        }
        if sub.index_exponent() != self.n {
            return Err(Error::IndexMismatch {
                expected: self.n,
                actual: sub.index_exponent(),
            });
        }
        self.table.get(sub.basis()).map(|&inv| ModuleClass::Finite(inv)).ok_or(Error::NoMatch)
    }
}

/// The class whose canonical presentation, reduced mod `p^n`, is `sub`.
pub fn match_canonical(sub: &Submodule) -> Result<ModuleClass> {
    CanonicalTable::new(sub.p(), sub.modulus_exponent())?.lookup(sub)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: u32,
    pub r: u32,
    pub s: u32,
    pub t: u64,
    pub ct: bool,
    pub free: bool,
    pub howell_basis_hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub p: u64,
    pub n: u32,
    pub total: usize,
    pub free_count: usize,
    pub class_list: Vec<ModuleClass>,
    pub rows: Vec<CensusRow>,
}

impl CensusReport {
    pub fn summary(&self) -> String {
        format!("total={} ct={}", self.total, self.free_count)
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().from_writer(w);
        out.write_record(["n", "r", "s", "t", "ct", "howell_basis_hash"])
            .and_then(|_| {
                self.rows.iter().try_for_each(|row| {
                    out.write_record([
                        row.n.to_string(),
                        row.r.to_string(),
                        row.s.to_string(),
                        row.t.to_string(),
                        row.ct.to_string(),
                        row.howell_basis_hash.clone(),
                    ])
                })
            })
            .and_then(|_| out.flush().map_err(csv::Error::from))
            .map_err(|e| Error::InvalidArgument(format!("writing CSV: {e}")))
    }
}

/// Enumerates, classifies and computes the cohomology of every submodule of
/// index `p^n`. Every class must be hit exactly once.
pub fn census(p: u64, n: u32, opts: &EnumerationOptions) -> Result<CensusReport> {
    let subs = enumerate_submodules(p, n, opts)?;
    let table = CanonicalTable::new(p, n)?;
    let mut rows = Vec::with_capacity(subs.len());
    for sub in &subs {
        let ModuleClass::Finite(inv) = table.lookup(sub)? else {
            unreachable!("the table holds finite classes only")
        };
        let a = sub.quotient();
        let extracted = extract_invariants(&a, &a.unit_generator())?;
        if extracted != inv {
            return Err(Error::ClassificationMismatch(format!(
                "submodule {} matches {inv:?} but has invariants {extracted:?}",
                sub.hash_hex()
            )));
        }
        rows.push(CensusRow {
            n,
            r: inv.r,
            s: inv.s,
            t: inv.t,
            ct: tate_cohomology(&a).h0_order_exponent == 0,
            free: is_free(sub.howell()),
            howell_basis_hash: sub.hash_hex(),
        });
    }
    rows.sort_by_key(|r| (r.r, r.s, r.t));
    if rows.len() != table.len() || rows.windows(2).any(|w| (w[0].r, w[0].s, w[0].t) == (w[1].r, w[1].s, w[1].t)) {
        return Err(Error::ClassificationMismatch(format!(
            "{} submodules for {} classes",
            rows.len(),
            table.len()
        )));
    }
    Ok(CensusReport {
        p,
        n,
        total: rows.len(),
        free_count: rows.iter().filter(|r| r.ct).count(),
        class_list: rows
            .iter()
            .map(|r| ModuleClass::Finite(Invariants { r: r.r, s: r.s, t: r.t }))
            .collect(),
        rows,
    })
}
