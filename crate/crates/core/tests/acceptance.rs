//! Acceptance gate: one `PASS`/`FAIL` line per criterion, then a single
//! assertion over all of them. Every comparison is exact unless a tolerance
//! below says otherwise.

// a NaN timing has to fail a check, so `!(a < b)` stays as written
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::time::Instant;

use destab::complexes::{build_c_complex, build_d_complex, compare_d_to_c, ses_of_complexes_d, SingerComplex};
use destab::gf2::{BitVec, Matrix};
use destab::library;
use destab::module::{is_module_map, phi, suspend, Connectivity, RealizedModule};
use destab::oracle::cache::{OracleCache, Query};
use destab::oracle::{derived_destab_oracle, derived_loops_oracle, OracleTable};
use destab::poly::Poly;
use destab::presentation::{parse_presentation, realize};
use destab::singer::SingerModule;
use destab::steenrod::{adem_normalize, basis_of_degree, SteenrodElement};
use destab::unstable::{destabilize, free_unstable, instability_submodule, omega, omega1};

/// Wall-clock budget for the cold crosscheck suite.
const RUNTIME_BUDGET_SECS: f64 = 600.0;
/// Minimum cold/warm ratio for the oracle jobs once cached.
const CACHE_SPEEDUP_MIN: f64 = 5.0;
/// Window for the library-wide runs.
const HI: i32 = 16;
const S_MAX: usize = 3;
const T_MAX: usize = 3;

type Verdict = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !($cond) {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T>(r: destab::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn question(hi: i32) -> RealizedModule {
    let text = include_str!("../../../modules/question.mod");
    let p = parse_presentation(text).unwrap();
    let mut m = realize(&p, 1, hi).unwrap();
    m.declare_unstable(true);
    m
}

fn destab_samples() -> Vec<RealizedModule> {
    vec![
        library::f(),
        library::sigma_f(1),
        library::sigma_f(-1),
        library::sigma_f(-2),
        library::sigma_f(2),
        library::a_mod_sq1(HI).unwrap(),
        library::phat(HI),
        library::fu(HI),
        library::fu_truncated(3),
        library::free_a(-1, HI).unwrap(),
        free_unstable(1, HI).unwrap(),
        question(HI),
    ]
}

fn unstable_samples() -> Vec<RealizedModule> {
    vec![
        library::f(),
        library::sigma_f(1),
        library::sigma_f(2),
        library::sigma_f(3),
        library::fu(HI),
        library::fu_truncated(4),
        free_unstable(1, HI).unwrap(),
        free_unstable(2, HI).unwrap(),
        question(HI),
    ]
}

/// Complexes shared between criteria.
struct Lab {
    destab: Vec<(RealizedModule, SingerComplex)>,
    loops: Vec<(RealizedModule, Vec<SingerComplex>)>,
}

impl Lab {
    fn new() -> Self {
        let destab = destab_samples().into_iter().map(|m| {
            let d = build_d_complex(&m, S_MAX, HI).unwrap();
            (m, d)
        });
        let loops = unstable_samples().into_iter().map(|n| {
            let cs = (0..=T_MAX).map(|t| build_c_complex(&n, t, HI).unwrap()).collect();
            (n, cs)
        });
        Lab { destab: destab.collect(), loops: loops.collect() }
    }
}

fn conn(m: &RealizedModule) -> i64 {
    m.connectivity().lower_bound()
}

fn rank_of_polys(rows: &[Poly]) -> usize {
    let mut index = BTreeMap::new();
    for p in rows {
        for t in p.terms() {
            let k = index.len();
            index.entry(t.clone()).or_insert(k);
        }
    }
    let vs = rows.iter().map(|p| BitVec::from_indices(index.len(), p.terms().map(|t| index[t]))).collect();
    Matrix::from_rows(index.len(), vs).rank()
}

/// Milnor basis count: sequences `r` with `Σ r_i (2^i - 1) = n`.
fn milnor_count(n: u32) -> usize {
    fn rec(n: u32, i: u32) -> usize {
        let w = (1u32 << i) - 1;
        if w > n {
            return usize::from(n == 0);
        }
        (0..=n / w).map(|r| rec(n - r * w, i + 1)).sum()
    }
    rec(n, 1)
}

fn c1_adem() -> Verdict {
    for n in 0..=20 {
        let b = ok(basis_of_degree(n))?;
        ensure!(b.len() == milnor_count(n), "dim A^{n}: {} admissibles, {} Milnor monomials", b.len(), milnor_count(n));
        for m in &b {
            ensure!(adem_normalize(&m.0) == SteenrodElement::from_monomial(m.clone()), "{m} not fixed by normalization");
        }
    }
    // a test class on which A^n acts faithfully for n ≤ 16
    let x = Poly::monomial(vec![1, 1, 1, 1, 3, 3, 7, 7]);
    let act = |e: &SteenrodElement| {
        let mut out = Poly::zero(8);
        for m in e.terms() {
            out.add_assign(&x.sq_word(&m.0));
        }
        out
    };
    for n in 0..=16 {
        let b = ok(basis_of_degree(n))?;
        let rows: Vec<Poly> = b.iter().map(|m| x.sq_word(&m.0)).collect();
        ensure!(rank_of_polys(&rows) == b.len(), "action on F[u1..u8] not faithful in degree {n}");
    }
    // words against their normal forms and each other
    let mut words: Vec<Vec<u32>> = Vec::new();
    for a in 0..=8u32 {
        for b in 0..=8u32 {
            for c in 0..=4u32 {
                if a + b + c <= 16 {
                    words.push(vec![a, b, c]);
                }
            }
        }
    }
    let forms: Vec<SteenrodElement> = words.iter().map(|w| adem_normalize(w)).collect();
    let images: Vec<Poly> = words.iter().map(|w| x.sq_word(w)).collect();
    for (i, w) in words.iter().enumerate() {
        ensure!(act(&forms[i]) == images[i], "normal form of {w:?} acts differently");
    }
    let mut pairs = 0;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let deg = |w: &[u32]| w.iter().sum::<u32>();
            if deg(&words[i]) != deg(&words[j]) {
                continue;
            }
            ensure!((forms[i] == forms[j]) == (images[i] == images[j]), "equality disagrees for {:?} and {:?}", words[i], words[j]);
            pairs += 1;
        }
    }
    Ok(format!("dims n ≤ 20, faithful n ≤ 16, {} words, {pairs} equal-degree pairs", words.len()))
}

fn c2_d_squared(lab: &Lab) -> Verdict {
    let wanted = ["F", "Σ^1 F", "Σ^-1 F", "A/ASq1", "P^"];
    let mut n = 0;
    for (m, d) in &lab.destab {
        if wanted.contains(&m.name()) {
            ensure!(d.complex.len() == S_MAX + 2, "{}: {} terms", m.name(), d.complex.len());
            ensure!(d.complex.d_squared_zero(), "d² ≠ 0 on 𝔇({})", m.name());
            n += 1;
        }
    }
    ensure!(n == wanted.len(), "only {n} of the 𝔇 samples found");
    let mut targets = vec![library::f(), library::sigma_f(1), library::sigma_f(2), library::sigma_f(3), free_unstable(1, HI).unwrap()];
    targets.push(library::fu_truncated(4));
    for m in &targets {
        for t in 0..=T_MAX {
            let c = ok(build_c_complex(m, t, HI))?;
            ensure!(c.complex.d_squared_zero(), "d² ≠ 0 on 𝔠{t}({})", m.name());
        }
    }
    Ok(format!("𝔇 for {n} modules through s = 4, 𝔠^t for {} modules, t ≤ {T_MAX}, degrees ≤ {HI}", targets.len()))
}

fn c3_h0(lab: &Lab) -> Verdict {
    for (m, d) in &lab.destab {
        let (dm, _) = destabilize(m);
        let b = instability_submodule(m);
        let v = d.complex.valid_hi(0);
        for n in m.degrees().filter(|&n| n <= v) {
            ensure!(d.complex.homology_dim(0, n) == dm.dim(n), "{} degree {n}", m.name());
            ensure!(d.complex.dim(0, n) == m.dim(n), "𝔇_0({}) differs from the module in degree {n}", m.name());
            ensure!(d.complex.boundaries_at(0, n) == b[&n], "image of d_1 is not BM for {} in degree {n}", m.name());
        }
    }
    Ok(format!("{} modules; image of d_1 equals the instability submodule", lab.destab.len()))
}

fn c4_first_derived() -> Verdict {
    let d = ok(build_d_complex(&library::sigma_f(-1), 1, 18))?;
    ensure!(d.complex.valid_hi(1) >= 18, "validity {}", d.complex.valid_hi(1));
    for n in 0..=18 {
        let h = d.complex.homology_dim(1, n);
        ensure!(h == 1, "D_1(Σ^-1 F) has dimension {h} in degree {n}");
    }
    let d = ok(build_d_complex(&library::f(), 1, 18))?;
    for n in 0..=18 {
        let h = d.complex.homology_dim(1, n);
        ensure!(h == usize::from(n >= 1), "D_1(F) has dimension {h} in degree {n}");
    }
    Ok("D_1(Σ^-1 F) = F[u] in 0..18, D_1 F = ΣF[u] in 1..18".into())
}

fn c5_projectives() -> Verdict {
    let mut cells = 0;
    for t in 0..=2 {
        let m = ok(library::free_a(t, 14))?;
        let d = ok(build_d_complex(&m, 2, 14))?;
        for s in 1..=2 {
            for n in d.complex.lo()..=d.complex.valid_hi(s) {
                ensure!(d.complex.homology_dim(s, n) == 0, "H_{s}(𝔇 Σ^{t} A) ≠ 0 in degree {n}");
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} cells zero"))
}

fn c6_lannes_zarati() -> Verdict {
    for m in [library::f(), library::fu_truncated(3)] {
        for s in 1..=3 {
            let d = ok(build_d_complex(&suspend(&m, 1 - s as i32), s, HI))?;
            let r = ok(SingerModule::rs(&m, s, HI - 1))?;
            for n in d.complex.lo()..=d.complex.valid_hi(s) {
                let want = r.module().dim(n - 1);
                let got = d.complex.homology_dim(s, n);
                ensure!(got == want, "D_{s}(Σ^{} {}) = {got}, ΣR_{s} = {want} in degree {n}", 1 - s as i32, m.name());
            }
        }
    }
    let d = ok(build_d_complex(&library::sigma_f(-1), 2, 14))?;
    for n in 0..=14 {
        let want = (0..=n).filter(|&b| 3 * b < n && (n - 1 - 3 * b) % 2 == 0).count();
        ensure!(d.complex.homology_dim(2, n) == want, "D_2(Σ^-1 F) ≠ ΣD(2) in degree {n}");
    }
    Ok("M ∈ {F, F[u]/u^4}, s ≤ 3; ΣD(2) through 14".into())
}

struct Suite {
    compared: usize,
    mismatches: Vec<String>,
    complex_secs: f64,
    oracle_secs: f64,
}

fn oracle_jobs(cache: &OracleCache) -> (Vec<(String, OracleTable)>, f64) {
    let start = Instant::now();
    let mut out = Vec::new();
    for m in destab_samples() {
        let q = Query { functor: "destab", fingerprint: m.fingerprint(), t: 0, s_max: S_MAX, hi: HI };
        let (o, _) = cache.get_or_compute(&q, || derived_destab_oracle(&m, S_MAX, HI)).unwrap();
        out.push((format!("D {}", m.name()), o));
    }
    for n in unstable_samples() {
        for t in 0..=T_MAX {
            let q = Query { functor: "loops", fingerprint: n.fingerprint(), t, s_max: S_MAX, hi: HI };
            let (o, _) = cache.get_or_compute(&q, || derived_loops_oracle(&n, t, S_MAX, HI)).unwrap();
            out.push((format!("Ω{t} {}", n.name()), o));
        }
    }
    (out, start.elapsed().as_secs_f64())
}

fn crosscheck_suite(cache: &OracleCache) -> Suite {
    let start = Instant::now();
    let lab = Lab::new();
    let complex_secs = start.elapsed().as_secs_f64();
    let (tables, oracle_secs) = oracle_jobs(cache);
    let mut complexes: Vec<&destab::complexes::ChainComplex> = lab.destab.iter().map(|(_, d)| &d.complex).collect();
    for (_, cs) in &lab.loops {
        complexes.extend(cs.iter().map(|c| &c.complex));
    }
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for (c, (name, o)) in complexes.into_iter().zip(&tables) {
        for s in 0..=S_MAX {
            let v = c.valid_hi(s).min(o.valid_hi[s]);
            for n in c.lo().min(o.lo)..=v {
                compared += 1;
                if c.homology_dim(s, n) != o.dim(s, n) {
                    mismatches.push(format!("{name} s = {s} degree {n}: {} vs {}", c.homology_dim(s, n), o.dim(s, n)));
                }
            }
        }
    }
    Suite { compared, mismatches, complex_secs, oracle_secs }
}

fn c7_oracle(cold: &Suite) -> Verdict {
    ensure!(cold.mismatches.is_empty(), "{} mismatches, first {}", cold.mismatches.len(), cold.mismatches[0]);
    ensure!(cold.compared > 1000, "only {} cells compared", cold.compared);
    Ok(format!("{} cells over {} destabilization and {} loop jobs", cold.compared, destab_samples().len(), unstable_samples().len() * (T_MAX + 1)))
}

fn c8_ses(lab: &Lab) -> Verdict {
    let hi = 14;
    let small = [library::f(), library::sigma_f(-1), library::fu_truncated(3), library::a_mod_sq1(hi).unwrap(), question(hi)];
    for m in &small {
        for s in 1..=3 {
            let mid = ok(SingerModule::rs(m, s, hi))?;
            let left = ok(SingerModule::rs(&suspend(m, 1), s, hi + 1))?;
            let right = ok(SingerModule::rs(m, s - 1, hi))?;
            let inc = ok(left.omega_inclusion(&mid))?;
            let rho = ok(mid.rho(&right))?;
            let p = phi(right.module());
            ensure!(is_module_map(mid.module(), &p, &rho), "ρ not A-linear on R_{s}({})", m.name());
            for n in mid.module().degrees() {
                let (a, c) = (left.module().dim(n + 1), p.dim(n));
                ensure!(mid.module().dim(n) == a + c, "R_{s}({}) degree {n}", m.name());
                if let (Some(i), Some(r)) = (inc.get(&(n + 1)), rho.get(&n)) {
                    ensure!(i.rank() == a && r.rank() == c && i.then(r).is_zero(), "R_{s}({}) not exact in degree {n}", m.name());
                }
            }
            for t in s..=3 {
                let mid = ok(SingerModule::rs_trunc(m, s, t, hi))?;
                let left = ok(SingerModule::rs_trunc(&suspend(m, 1), s, t - 1, hi + 1))?;
                let right = phi(ok(SingerModule::rs_trunc(m, s - 1, t - 1, hi))?.module());
                for n in mid.module().degrees().filter(|&n| n < hi) {
                    let (a, c) = (left.module().dim(n + 1), right.dim(n));
                    ensure!(mid.module().dim(n) == a + c, "R_{s}/{t}({}) degree {n}", m.name());
                }
            }
        }
    }
    // D_s(Σ^{-1} M) against Ω D_s M and Ω_1 D_{s-1} M
    let mut cells = 0;
    for m in [library::f(), library::sigma_f(1), library::fu_truncated(3), question(HI), library::a_mod_sq1(HI).unwrap()] {
        let dm = ok(build_d_complex(&m, S_MAX, HI))?;
        let dl = ok(build_d_complex(&suspend(&m, -1), S_MAX, HI))?;
        for s in 0..=S_MAX {
            let h = ok(dm.complex.homology(s))?;
            let a = ok(omega(&h))?;
            let b = if s == 0 { None } else { Some(ok(omega1(&ok(dm.complex.homology(s - 1))?))?) };
            let v = [dl.complex.valid_hi(s), a.valid_hi(), b.as_ref().map_or(HI, |b| b.valid_hi())].into_iter().min().unwrap();
            for n in dl.complex.lo()..=v {
                let want = a.dim(n) + b.as_ref().map_or(0, |b| b.dim(n));
                ensure!(dl.complex.homology_dim(s, n) == want, "D_{s}(Σ^-1 {}) degree {n}", m.name());
                cells += 1;
            }
        }
        let ses = ok(ses_of_complexes_d(&m, 2, 12))?;
        ensure!(ses.exact_terms() && ses.chain_maps(), "𝔇 sequence of complexes for {}", m.name());
        for n in ses.mid.degrees() {
            ensure!(ok(ses.long_exact(n))?, "long exact sequence for {} in degree {n}", m.name());
        }
    }
    // Ω^{t+1}_s N against Ω Ω^t_s N and Ω_1 Ω^t_{s-1} N
    for (n, cs) in &lab.loops {
        for t in 0..T_MAX {
            for s in 0..=t + 1 {
                let next = &cs[t + 1].complex;
                let a = if s <= t { Some(ok(omega(&ok(cs[t].complex.homology(s))?))?) } else { None };
                let b = if s >= 1 { Some(ok(omega1(&ok(cs[t].complex.homology(s - 1))?))?) } else { None };
                let v = [next.valid_hi(s), a.as_ref().map_or(HI, |a| a.valid_hi()), b.as_ref().map_or(HI, |b| b.valid_hi())]
                    .into_iter()
                    .min()
                    .unwrap();
                for k in next.lo()..=v {
                    let want = a.as_ref().map_or(0, |a| a.dim(k)) + b.as_ref().map_or(0, |b| b.dim(k));
                    ensure!(next.homology_dim(s, k) == want, "Ω^{}_{s}({}) degree {k}", t + 1, n.name());
                    cells += 1;
                }
            }
        }
    }
    Ok(format!("R_s and R_s/t on {} modules; {cells} cells for the two derived sequences", small.len()))
}

fn c9_loop_laws(lab: &Lab) -> Verdict {
    for n in unstable_samples() {
        for t in 0..T_MAX {
            let o = ok(derived_loops_oracle(&n, t, T_MAX, HI))?;
            for s in t + 1..=T_MAX {
                for k in o.lo..=o.valid_hi[s] {
                    ensure!(o.dim(s, k) == 0, "Ω^{t}_{s}({}) ≠ 0 in degree {k}", n.name());
                }
            }
        }
    }
    // Ω^t_t = (Ω_1)^t on bounded samples
    for (n, cs) in lab.loops.iter().filter(|(n, _)| n.bounded()) {
        let mut iter = n.clone();
        for (t, c) in cs.iter().enumerate().skip(1) {
            iter = ok(omega1(&iter))?;
            let c = &c.complex;
            let v = c.valid_hi(t).min(iter.valid_hi());
            for k in c.lo()..=v {
                ensure!(c.homology_dim(t, k) == iter.dim(k), "Ω^{t}_{t}({}) ≠ Ω_1^{t} in degree {k}", n.name());
            }
        }
    }
    for k in 1..=4 {
        let c = ok(build_c_complex(&library::sigma_f(k), 1, HI))?;
        for d in c.complex.lo()..=c.complex.valid_hi(1) {
            ensure!(c.complex.homology_dim(1, d) == usize::from(d == 2 * k - 1), "Ω_1(Σ^{k} F) in degree {d}");
        }
    }
    for (n, _) in &lab.loops {
        for k in 2..=3 {
            let c = ok(build_c_complex(&suspend(n, k), 1, HI))?;
            for d in c.complex.lo()..=c.complex.valid_hi(0).min(n.valid_hi() + k - 1) {
                ensure!(c.complex.homology_dim(0, d) == n.dim(d - k + 1), "Ω(Σ^{k} {}) in degree {d}", n.name());
            }
        }
    }
    Ok(format!("vanishing for s > t, Ω^t_t = Ω_1^t, Ω_1 Σ^k F for k ≤ 4, Ω Σ^k N on {} modules", lab.loops.len()))
}

fn c10_connectivity(lab: &Lab) -> Verdict {
    let mut checked = 0;
    for (m, d) in &lab.destab {
        let c = conn(m);
        for s in 0..=S_MAX {
            let bound = (c + s as i64) * (1 << s);
            let top = bound.min(d.complex.valid_hi(s) as i64);
            for n in d.complex.lo() as i64..=top {
                ensure!(d.complex.homology_dim(s, n as i32) == 0, "H_{s}(𝔇 {}) ≠ 0 in degree {n} ≤ {bound}", m.name());
                checked += 1;
            }
        }
        let p = phi(m);
        ensure!(p.connectivity() == Connectivity::Exactly(2 * c as i32 + 1), "conn Φ{} = {:?}, conn = {c}", m.name(), p.connectivity());
    }
    Ok(format!("{checked} cells below the bound, Φ on {} modules", lab.destab.len()))
}

fn c11_comparison() -> Verdict {
    let hi = 14;
    let mut ranged = 0;
    for n in unstable_samples() {
        for t in 0..=T_MAX {
            let cmp = ok(compare_d_to_c(&n, t, hi))?;
            ensure!(cmp.surjective && cmp.commutes, "comparison for {} at t = {t}", n.name());
            let o = ok(derived_loops_oracle(&n, t, t, hi))?;
            let iso_top = 2 * (conn(&n) - t as i64 + 1) + t as i64;
            for s in 0..=t {
                let (dc, cc) = (&cmp.d.complex, &cmp.c.complex);
                let v = dc.valid_hi(s).min(cc.valid_hi(s)).min(o.valid_hi[s]);
                for k in dc.lo().max(cc.lo())..=v {
                    let r = cmp.induced_rank(s, k);
                    let (a, b) = (dc.homology_dim(s, k), cc.homology_dim(s, k));
                    ensure!(b == o.dim(s, k), "H_{s}(𝔠{t} {}) vs oracle in degree {k}", n.name());
                    ensure!(r <= a.min(b), "rank {r} exceeds dims {a}, {b}");
                    if (k as i64) <= iso_top {
                        ensure!(r == a && r == b, "D_{s} → Ω^{t}_{s} for {} not iso in degree {k}: rank {r}, dims {a}, {b}", n.name());
                        ranged += 1;
                    }
                }
            }
        }
    }
    Ok(format!("surjective chain maps for t ≤ {T_MAX}; isomorphism in {ranged} cells of the stable range"))
}

/// Deep resolutions, where the cache matters: `(cold, warm)` seconds.
fn heavy_jobs(cache: &OracleCache) -> (f64, f64) {
    let (hi, s_max) = (28, 4);
    let run = || {
        let start = Instant::now();
        for m in [library::f(), library::sigma_f(-1), library::a_mod_sq1(hi).unwrap()] {
            let q = Query { functor: "destab", fingerprint: m.fingerprint(), t: 0, s_max, hi };
            cache.get_or_compute(&q, || derived_destab_oracle(&m, s_max, hi)).unwrap();
        }
        let n = free_unstable(1, hi).unwrap();
        let q = Query { functor: "loops", fingerprint: n.fingerprint(), t: 2, s_max, hi };
        cache.get_or_compute(&q, || derived_loops_oracle(&n, 2, s_max, hi)).unwrap();
        start.elapsed().as_secs_f64()
    };
    let cold = run();
    (cold, run())
}

fn c12_runtime(cold: &Suite, warm: &Suite, heavy: (f64, f64)) -> Verdict {
    let total = cold.complex_secs + cold.oracle_secs;
    ensure!(total < RUNTIME_BUDGET_SECS, "cold suite took {total:.1} s");
    ensure!(warm.mismatches.is_empty(), "warm run disagrees");
    let suite = cold.oracle_secs / warm.oracle_secs.max(1e-9);
    let deep = heavy.0 / heavy.1.max(1e-9);
    ensure!(deep >= CACHE_SPEEDUP_MIN, "cache speedup {deep:.1}× on deep resolutions");
    ensure!(suite >= CACHE_SPEEDUP_MIN, "cache speedup {suite:.1}× on the suite's oracle jobs");
    Ok(format!(
        "cold suite {total:.2} s (complexes {:.2} s, oracle {:.2} s); cached oracle jobs {suite:.0}× faster, deep resolutions {:.2} s → {:.3} s ({deep:.0}×)",
        cold.complex_secs, cold.oracle_secs, heavy.0, heavy.1
    ))
}

#[test]
fn acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let cache = OracleCache::new(dir.path());
    let cold = crosscheck_suite(&cache);
    let warm = crosscheck_suite(&cache);
    let heavy = heavy_jobs(&cache);
    let lab = Lab::new();
    let results: Vec<(u32, &str, Verdict)> = vec![
        (1, "Adem engine", c1_adem()),
        (2, "d² = 0", c2_d_squared(&lab)),
        (3, "H_0 = D", c3_h0(&lab)),
        (4, "first derived functors", c4_first_derived()),
        (5, "vanishing on projectives", c5_projectives()),
        (6, "Lannes–Zarati identification", c6_lannes_zarati()),
        (7, "oracle equivalence", c7_oracle(&cold)),
        (8, "structure sequences", c8_ses(&lab)),
        (9, "loop-functor laws", c9_loop_laws(&lab)),
        (10, "connectivity bounds", c10_connectivity(&lab)),
        (11, "comparison map", c11_comparison()),
        (12, "runtime and cache", c12_runtime(&cold, &warm, heavy)),
    ];
    let mut failed = Vec::new();
    for (id, name, r) in &results {
        match r {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail}"),
            Err(why) => {
                println!("FAIL {id:>2} {name}: {why}");
                failed.push(*id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
