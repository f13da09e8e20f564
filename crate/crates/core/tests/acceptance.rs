//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zpg::census::{census, enumerate_submodules, CensusReport, EnumerationOptions};
use zpg::classify::classify_quotient;
use zpg::cohomology::tate_cohomology;
use zpg::gmodule::{
    canonical_presentation, finite_classes, guard_precision, norm_identity_check, FiniteGModule, InvariantExtractor,
    Invariants, ModuleClass,
};
use zpg::padic::{epsilon_unit, power_commutator_identity, CycloElt, GroupRingElt, PadicInt};
use zpg::residue::SmallZpk;
use zpg::verify::{canonical_module, lift_to_integers};
use zpg::zeta::{c_hat, density, expand_rational, zeta_coefficients, zeta_ct_coefficients, RationalForm};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const CENSUS_RANGE: [(u64, u32); 2] = [(2, 8), (3, 5)];
const GRID_PRIMES: [u64; 3] = [2, 3, 5];
const GRID_ORDER: u32 = 5;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn grid() -> impl Iterator<Item = (u64, Invariants)> {
    GRID_PRIMES
        .into_iter()
        .flat_map(|p| (0..=GRID_ORDER).flat_map(move |n| finite_classes(p, n).into_iter().map(move |i| (p, i))))
}

fn module(p: u64, inv: Invariants) -> Result<FiniteGModule<SmallZpk>, String> {
    canonical_module(p, inv).map_err(|e| format!("p={p} {inv:?}: {e}"))
}

fn census_reports(p: u64, max_n: u32) -> Result<Vec<CensusReport>, String> {
    (0..=max_n)
        .map(|n| census(p, n, &EnumerationOptions::default()).map_err(|e| format!("census p={p} n={n}: {e}")))
        .collect()
}

fn census_counts() -> Outcome {
    let expected: [(u64, &[usize]); 2] = [(2, &[1, 1, 3, 5, 7, 9, 11, 13, 15]), (3, &[1, 1, 4, 7, 10, 13])];
    let mut slowest = Duration::ZERO;
    for (p, counts) in expected {
        for (n, &want) in counts.iter().enumerate() {
            let start = Instant::now();
            let got = enumerate_submodules(p, n as u32, &EnumerationOptions::default())
                .map_err(|e| format!("p={p} n={n}: {e}"))?
                .len();
            let elapsed = start.elapsed();
            slowest = slowest.max(elapsed);
            ensure(got == want, || format!("p={p} n={n}: {got} submodules, expected {want}"))?;
            ensure(elapsed < Duration::from_secs(60), || format!("p={p} n={n} took {elapsed:?}"))?;
        }
    }
    Ok(format!("p=2 n<=8, p=3 n<=5; slowest case {slowest:.2?}"))
}

fn census_ct_counts() -> Outcome {
    for (p, max_n) in CENSUS_RANGE {
        for r in census_reports(p, max_n)? {
            let want = c_hat(p, r.n as u64);
            ensure(BigInt::from(r.free_count) == want, || {
                format!("p={p} n={}: {} CT quotients, expected {want}", r.n, r.free_count)
            })?;
        }
    }
    Ok("CT counts equal (p-1)(n-1), with 1 at n=0 and 0 at n=1".into())
}

fn round_trip() -> Outcome {
    let mut checked = 0;
    for (p, inv) in grid() {
        let cls = ModuleClass::Finite(inv);
        let k = guard_precision(inv.order_exponent(), p);
        let gens = canonical_presentation(&cls, p, k).map_err(|e| format!("{cls}: {e}"))?;
        let got = classify_quotient(&lift_to_integers(&gens), p, None);
        ensure(got.as_ref() == Ok(&cls), || format!("p={p} {cls}: classified as {got:?}"))?;
        checked += 1;
    }
    let mut bijections = 0;
    for (p, max_n) in [(2u64, GRID_ORDER), (3, GRID_ORDER), (5, 3)] {
        for r in census_reports(p, max_n)? {
            let listed: BTreeSet<ModuleClass> = r.class_list.iter().copied().collect();
            let valid: BTreeSet<ModuleClass> = finite_classes(p, r.n).into_iter().map(ModuleClass::Finite).collect();
            ensure(listed == valid && r.class_list.len() == valid.len(), || {
                format!("p={p} n={}: census classes differ from the valid classes", r.n)
            })?;
            bijections += 1;
        }
    }
    Ok(format!("{checked} classes round-trip; census bijection on {bijections} (p, n) pairs"))
}

fn ct_iff_t() -> Outcome {
    let mut checked = 0;
    for (p, inv) in grid() {
        let a = module(p, inv)?;
        let ct = tate_cohomology(&a).h0_order_exponent == 0;
        let predicted = if inv.r >= 1 && inv.s >= 1 { inv.t != 0 } else { inv.s == 0 };
        ensure(ct == predicted, || format!("p={p} {inv:?}: cohomologically trivial = {ct}"))?;
        checked += 1;
    }
    Ok(format!("{checked} modules"))
}

fn norm_identity() -> Outcome {
    let mut checked = 0;
    for (p, inv) in grid().filter(|(_, i)| i.r >= 1 && i.s >= 1) {
        let a = module(p, inv)?;
        for j in 1..=inv.s {
            let ok = norm_identity_check(&a, &a.unit_generator(), j);
            ensure(ok == Ok(true), || format!("p={p} {inv:?} j={j}: {ok:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (module, j) pairs"))
}

fn generator_sweep() -> Outcome {
    let mut generators = 0;
    for p in GRID_PRIMES {
        for n in 0..=4 {
            for inv in finite_classes(p, n) {
                let a = module(p, inv)?;
                let ex = InvariantExtractor::new(&a).map_err(|e| format!("p={p} {inv:?}: {e}"))?;
                for x in a.elements().filter(|x| ex.is_generator(x)) {
                    let got = ex.extract(&x);
                    ensure(got == Ok(inv), || format!("p={p} {inv:?}, generator {x:?}: {got:?}"))?;
                    generators += 1;
                }
            }
        }
    }
    Ok(format!("{generators} generators of modules of order <= p^4, p in {{2,3,5}}"))
}

fn herbrand() -> Outcome {
    let mut checked = 0;
    for (p, inv) in grid() {
        let c = tate_cohomology(&module(p, inv)?);
        ensure(c.h0_order_exponent == c.h1_order_exponent, || format!("p={p} {inv:?}: {c:?}"))?;
        checked += 1;
    }
    for (p, max_n) in CENSUS_RANGE {
        for n in 0..=max_n {
            for sub in enumerate_submodules(p, n, &EnumerationOptions::default()).map_err(|e| e.to_string())? {
                let c = tate_cohomology(&sub.quotient());
                ensure(c.h0_order_exponent == c.h1_order_exponent, || {
                    format!("p={p} n={n} submodule {}: {c:?}", sub.hash_hex())
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} finite modules"))
}

fn free_iff_ct() -> Outcome {
    let mut checked = 0;
    for p in [2u64, 3] {
        for r in census_reports(p, 4)? {
            for row in &r.rows {
                ensure(row.free == row.ct, || {
                    format!("p={p} n={} ({}, {}, {}): free={} ct={}", r.n, row.r, row.s, row.t, row.free, row.ct)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} submodules of index <= p^4"))
}

fn zeta_expansions() -> Outcome {
    let order = 50;
    let mut sign_flips = 0;
    for p in [2u64, 3, 5, 7] {
        let e = |r: zpg::Result<_>| r.map_err(|e: zpg::Error| e.to_string());
        let b = e(zeta_coefficients(p, order))?;
        let c = e(zeta_ct_coefficients(p, order))?;
        let total = e(expand_rational(RationalForm::Total, p, order))?;
        let corrected = e(expand_rational(RationalForm::FreeCorrected, p, order))?;
        let printed = e(expand_rational(RationalForm::FreeAsPrinted, p, order))?;
        ensure(b == total, || format!("p={p}: (1-u+pu^2)/(1-u)^2 differs from b_n"))?;
        for n in 1..=order {
            ensure(corrected.coeff(n) == c.coeff(n), || format!("p={p} n={n}: corrected form differs from c_n"))?;
            if n >= 2 {
                ensure(*printed.coeff(n) == -c.coeff(n), || format!("p={p} n={n}: printed form is not -c_n"))?;
                sign_flips += 1;
            }
        }
    }
    println!("    discrepancy: numerator (1-p)u^2 gives -c_n at all {sign_flips} checked (p, n) with n >= 2; (p-1)u^2 gives c_n");
    Ok("n <= 50, p in {2,3,5,7}".into())
}

fn density_limit() -> Outcome {
    let start = Instant::now();
    let n = 1_000_000;
    let tol = BigRational::new(1.into(), 100_000.into());
    for p in [2u64, 3, 5] {
        let d = density(p, n).map_err(|e| e.to_string())?;
        let limit = BigRational::new((p - 1).into(), p.into());
        let gap = &limit - &d;
        ensure(gap > BigRational::from_integer(0.into()) && gap < tol, || format!("p={p}: gap {gap}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("N = 10^6, computed in {elapsed:.2?}"))
}

fn infinite_dispatch() -> Outcome {
    let mut checked = 0;
    for p in GRID_PRIMES {
        let k = 16;
        let exact = |g: &GroupRingElt| -> Vec<BigInt> { g.coeffs().iter().map(PadicInt::to_bigint_symmetric).collect() };
        let mut cases = vec![
            (vec![], ModuleClass::FreeL),
            (vec![exact(&GroupRingElt::norm(p, k))], ModuleClass::AugmentationIdeal),
            (vec![exact(&GroupRingElt::g_minus_one(p, k))], ModuleClass::TrivialZp),
        ];
        for n in 1..=3 {
            let pn = PadicInt::from_i64(p.pow(n) as i64, p, k);
            cases.push((vec![exact(&GroupRingElt::norm(p, k).scale(&pn))], ModuleClass::TorsionOverFixed(n)));
            cases.push((vec![exact(&GroupRingElt::g_minus_one(p, k).pow(n + 1))], ModuleClass::TorsionOverAug(n)));
        }
        for (gens, want) in cases {
            let got = classify_quotient(&gens, p, None);
            ensure(got.as_ref() == Ok(&want), || format!("p={p}: expected {want}, got {got:?}"))?;
            ensure(want.torsion_exponent() == got.as_ref().map(|c| c.torsion_exponent()).unwrap_or(u32::MAX), || {
                format!("p={p} {want}: torsion exponent")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} generator sets"))
}

fn epsilon_self_test() -> Outcome {
    for p in [2u64, 3, 5, 7] {
        let lhs = epsilon_unit(p, 8).mul(&CycloElt::pi(p, 8).pow(p as u32 - 1));
        let rhs = CycloElt::from_ints(&[p as i64], p, 8);
        ensure(lhs.same_residues(&rhs), || format!("p={p}: eps (zeta-1)^(p-1) = {lhs}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    for p in [2u64, 3, 5, 7] {
        for _ in 0..25 {
            let coeffs: Vec<i64> = (0..p - 1).map(|_| rng.gen_range(-1000..1000)).collect();
            let c = CycloElt::from_ints(&coeffs, p, 8);
            for j in 1..=3 {
                let ok = power_commutator_identity(j, &c);
                ensure(ok == Ok(true), || format!("p={p} j={j} c={coeffs:?}: {ok:?}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("eps exact at K=8; p^j c = eps^j (zeta-1)^(j(p-1)) c for {checked} random cases"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("census counts equal 1 + p(n-1)", census_counts),
        ("CT counts equal (p-1)(n-1)", census_ct_counts),
        ("canonical presentations round-trip", round_trip),
        ("CT iff t != 0", ct_iff_t),
        ("norm identity N p^j a", norm_identity),
        ("t independent of the generator", generator_sweep),
        ("Herbrand quotient one", herbrand),
        ("free iff CT", free_iff_ct),
        ("zeta expansions", zeta_expansions),
        ("density limit", density_limit),
        ("infinite quotient dispatch", infinite_dispatch),
        ("eps self-test", epsilon_self_test),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("[PASS] criterion {}: {name} ({detail}) [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failures += 1;
                println!("[FAIL] criterion {}: {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
