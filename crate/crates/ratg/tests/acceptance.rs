//! Acceptance run: one PASS/FAIL line per criterion, each checked against an
//! oracle written independently of the library, with the time limit next to
//! the measured time. Exits with status 1 when any criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratg::parse::parse_expr;
use ratg_core::automata::{compile, enumerate, image, preimage_finite_kernel, pump, GroupHom};
use ratg_core::groups::{Group, GroupElement, GroupSpec, Word};
use ratg_core::presburger::{cooper_qe, decide_empty, decide_equal, decide_inclusion, Formula, QeConfig, SetExpr, Term, Var};
use ratg_core::semilinear::{hilbert_basis, HilbertConfig, LinearSet, SemilinearSet};
use ratg_core::witnesses::{
    heisenberg_diagonal, metabelian_r1r4, polycyclic_orbit, HeisenbergConfig, MetabelianConfig, OrbitConfig,
    Verdict, WitnessReport,
};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: 1, title: "semilinear boolean algebra vs box oracle, 200 pairs", limit: Some(Duration::from_secs(60)), run: semilinear_pairs },
        Criterion { id: 2, title: "Hilbert bases vs brute force on [0,8]^n, 50 systems", limit: Some(Duration::from_secs(30)), run: hilbert_systems },
        Criterion { id: 3, title: "Cooper QE vs direct evaluation on [-20,20]^2, 100 formulas", limit: Some(Duration::from_secs(30)), run: cooper_formulas },
        Criterion { id: 4, title: "pumping on a 30-expression corpus over Z^2", limit: None, run: pumping_corpus },
        Criterion { id: 5, title: "Heisenberg diagonal witness, defaults, N=8", limit: Some(Duration::from_secs(10)), run: heisenberg_witness },
        Criterion { id: 6, title: "metabelian R1-R4 witness, f=(2,-3) and (3,1,-1)", limit: Some(Duration::from_secs(30)), run: metabelian_witness },
        Criterion { id: 7, title: "polycyclic orbit witness, order 4 and hyperbolic", limit: None, run: orbit_witness },
        Criterion { id: 8, title: "image/preimage round trip, Z x Z2 -> Z", limit: None, run: image_preimage },
        Criterion { id: 9, title: "group axioms and faithful models, 10^4 samples per backend", limit: Some(Duration::from_secs(20)), run: group_axioms },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(c.run).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let over = c.limit.is_some_and(|l| elapsed > l);
        let limit = c.limit.map_or("no limit".to_string(), |l| format!("limit {} s", l.as_secs()));
        let (status, detail) = match &outcome {
            Ok(d) if !over => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("time limit exceeded; {d}")),
            Err(e) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("{status} {}  {}  [{:.2} s, {limit}]  {detail}", c.id, c.title, elapsed.as_secs_f64());
    }
    if failures > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn small(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("small integer")).collect()
}

// ---------------------------------------------------------------------------
// 1. Semilinear sets
// ---------------------------------------------------------------------------

/// Linear set kept as plain integers for the oracle.
#[derive(Clone, Debug)]
struct Lin {
    base: Vec<i64>,
    periods: Vec<Vec<i64>>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A weight `u` with `u·p ≥ 1` for every period. It bounds the number of
/// period steps needed to reach a point `v`: `Σnᵢ ≤ u·(v − c)`.
fn pointing(periods: &[Vec<i64>], r: usize) -> Option<Vec<i64>> {
    for span in [1i64, 2, 3] {
        let side = (2 * span + 1) as usize;
        for code in 0..side.pow(r as u32) {
            let u: Vec<i64> = (0..r).map(|i| (code / side.pow(i as u32) % side) as i64 - span).collect();
            if periods.iter().all(|p| dot(&u, p) >= 1) {
                return Some(u);
            }
        }
    }
    None
}

/// All points of `L(c; P)` inside `[−R, R]ʳ`, by enumerating coefficient
/// vectors under the budget given by a pointing weight.
fn lin_points(l: &Lin, radius: i64, out: &mut HashSet<Vec<i64>>) -> Result<(), String> {
    let r = l.base.len();
    let u = pointing(&l.periods, r).ok_or_else(|| format!("oracle: periods {:?} are not pointed", l.periods))?;
    let budget = u.iter().map(|x| x.abs() * radius).sum::<i64>() - dot(&u, &l.base);
    fn go(l: &Lin, u: &[i64], i: usize, v: &mut Vec<i64>, budget: i64, radius: i64, out: &mut HashSet<Vec<i64>>) {
        if i == l.periods.len() {
            if v.iter().all(|x| x.abs() <= radius) {
                out.insert(v.clone());
            }
            return;
        }
        let step = dot(u, &l.periods[i]);
        let mut n = 0;
        while n * step <= budget {
            go(l, u, i + 1, v, budget - n * step, radius, out);
            for (x, p) in v.iter_mut().zip(&l.periods[i]) {
                *x += p;
            }
            n += 1;
        }
        for (x, p) in v.iter_mut().zip(&l.periods[i]) {
            *x -= n * p;
        }
    }
    if budget >= 0 {
        go(l, &u, 0, &mut l.base.clone(), budget, radius, out);
    }
    Ok(())
}

fn set_points(s: &[Lin], radius: i64) -> Result<HashSet<Vec<i64>>, String> {
    let mut out = HashSet::new();
    for l in s {
        lin_points(l, radius, &mut out)?;
    }
    Ok(out)
}

fn to_library(s: &[Lin], r: usize) -> SemilinearSet {
    let comps = s
        .iter()
        .map(|l| LinearSet::new(big(&l.base), l.periods.iter().map(|p| big(p)).collect()).unwrap())
        .collect();
    SemilinearSet::new(r, comps).unwrap()
}

fn from_library(s: &SemilinearSet) -> Vec<Lin> {
    s.components()
        .iter()
        .map(|c| Lin { base: small(c.base()), periods: c.periods().iter().map(|p| small(p)).collect() })
        .collect()
}

fn random_lin(rng: &mut ChaCha8Rng, r: usize) -> Lin {
    let u: Vec<i64> = (0..r).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let base = (0..r).map(|_| rng.gen_range(-4..=4)).collect();
    let k = rng.gen_range(0..=2);
    let mut periods = Vec::new();
    while periods.len() < k {
        let p: Vec<i64> = (0..r).map(|_| rng.gen_range(-2..=2)).collect();
        if dot(&u, &p) >= 1 {
            periods.push(p);
        }
    }
    Lin { base, periods }
}

fn random_set(rng: &mut ChaCha8Rng, r: usize) -> Vec<Lin> {
    (0..rng.gen_range(1..=2)).map(|_| random_lin(rng, r)).collect()
}

/// Pairs of four kinds: independent sets, `B = A ∪ C` (so `A ⊆ B`),
/// `B = A` plus a redundant component (equal sets), and `B ⊆ A` obtained by
/// doubling a period.
fn random_pair(rng: &mut ChaCha8Rng, i: usize) -> (usize, Vec<Lin>, Vec<Lin>) {
    let r = 1 + i % 3;
    let a = random_set(rng, r);
    let b = match i % 4 {
        0 => random_set(rng, r),
        1 => {
            let mut b = a.clone();
            b.extend(random_set(rng, r));
            b
        }
        2 => {
            let mut b = a.clone();
            let l = &a[0];
            let mut base = l.base.clone();
            for p in &l.periods {
                for (x, y) in base.iter_mut().zip(p) {
                    *x += y;
                }
            }
            b.push(Lin { base, periods: l.periods.iter().skip(1).cloned().collect() });
            b
        }
        _ => a
            .iter()
            .map(|l| Lin {
                base: l.base.clone(),
                periods: l.periods.iter().enumerate().map(|(j, p)| if j == 0 { p.iter().map(|x| 2 * x).collect() } else { p.clone() }).collect(),
            })
            .collect(),
    };
    (r, a, b)
}

fn semilinear_pairs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cfg = QeConfig::default();
    let mut included = 0;
    let mut equal = 0;
    for i in 0..200 {
        let (r, a, b) = random_pair(&mut rng, i);
        let (la, lb) = (to_library(&a, r), to_library(&b, r));
        // Intersection: box contents agree exactly.
        let lc = la.intersect(&lb).map_err(|e| format!("pair {i}: intersect failed: {e}"))?;
        let pa = set_points(&a, 15)?;
        let pb = set_points(&b, 15)?;
        let pc = set_points(&from_library(&lc), 15)?;
        let expected: HashSet<Vec<i64>> = pa.intersection(&pb).cloned().collect();
        ensure(pc == expected, || format!("pair {i}: intersection differs on the box ({} vs {} points)", pc.len(), expected.len()))?;
        // Inclusion and equality: the box answer on [-15,15]^r, refined on a
        // wider box so that counterexamples just outside are not missed.
        let wide = if r == 3 { 30 } else { 45 };
        let (wa, wb) = (set_points(&a, wide)?, set_points(&b, wide)?);
        let sub_ab = pa.is_subset(&pb) && wa.is_subset(&wb);
        let sub_ba = pb.is_subset(&pa) && wb.is_subset(&wa);
        let lib_ab = decide_inclusion(&la, &lb, &cfg).map_err(|e| format!("pair {i}: {e}"))?;
        let lib_eq = decide_equal(&la, &lb, &cfg).map_err(|e| format!("pair {i}: {e}"))?;
        ensure(lib_ab == sub_ab, || format!("pair {i} (r={r}): decide_inclusion={lib_ab}, oracle={sub_ab}; A={la}; B={lb}"))?;
        ensure(lib_eq == (sub_ab && sub_ba), || format!("pair {i} (r={r}): decide_equal={lib_eq}, oracle={}; A={la}; B={lb}", sub_ab && sub_ba))?;
        // The difference through quantifier elimination alone, without the
        // component shortcuts of decide_inclusion.
        let diff = SetExpr::diff(SetExpr::set(la.clone()), SetExpr::set(lb.clone()));
        let empty = decide_empty(&diff, &cfg).map_err(|e| format!("pair {i}: {e}"))?;
        ensure(empty == sub_ab, || format!("pair {i} (r={r}): A∖B empty={empty}, oracle={sub_ab}; A={la}; B={lb}"))?;
        included += usize::from(sub_ab);
        equal += usize::from(sub_ab && sub_ba);
    }
    Ok(format!("200 pairs agree (inclusions {included}, equalities {equal}, every difference also decided by QE alone)"))
}

// ---------------------------------------------------------------------------
// 2. Hilbert bases
// ---------------------------------------------------------------------------

fn hilbert_systems() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cfg = HilbertConfig::default();
    let mut total_basis = 0;
    let mut unchecked_outside = 0;
    for s in 0..50 {
        let rows = rng.gen_range(1..=3);
        let n = rng.gen_range(2..=5);
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let basis = hilbert_basis(&a, &cfg).map_err(|e| format!("system {s}: {e}"))?;
        let solves = |v: &[i64]| a.iter().all(|row| dot(row, v) == 0);
        // Brute force over [0,8]^n.
        let mut box_solutions: Vec<Vec<i64>> = Vec::new();
        for code in 1..9usize.pow(n as u32) {
            let v: Vec<i64> = (0..n).map(|i| (code / 9usize.pow(i as u32) % 9) as i64).collect();
            if solves(&v) {
                box_solutions.push(v);
            }
        }
        let leq = |x: &[i64], y: &[i64]| x.iter().zip(y).all(|(p, q)| p <= q);
        let minimal: BTreeSet<Vec<i64>> = box_solutions
            .iter()
            .filter(|v| !box_solutions.iter().any(|w| w != *v && leq(w, v)))
            .cloned()
            .collect();
        let basis: Vec<Vec<i64>> = basis.iter().map(|h| h.iter().map(|&x| x as i64).collect()).collect();
        total_basis += basis.len();
        for h in &basis {
            ensure(solves(h) && h.iter().any(|&x| x != 0), || format!("system {s}: {h:?} is not a nonzero solution"))?;
            ensure(!basis.iter().any(|g| g != h && leq(g, h)), || format!("system {s}: {h:?} is not minimal in the basis"))?;
            if h.iter().all(|&x| x <= 8) {
                ensure(minimal.contains(h), || format!("system {s}: {h:?} is not a minimal solution"))?;
            } else {
                // Outside the box: search below h directly when that is small.
                let cells: u64 = h.iter().map(|&x| x as u64 + 1).product();
                if cells > 2_000_000 {
                    unchecked_outside += 1;
                    continue;
                }
                for code in 1..cells {
                    let mut rest = code;
                    let v: Vec<i64> = h
                        .iter()
                        .map(|&x| {
                            let d = rest % (x as u64 + 1);
                            rest /= x as u64 + 1;
                            d as i64
                        })
                        .collect();
                    ensure(v == *h || !solves(&v), || format!("system {s}: {v:?} is a smaller solution than {h:?}"))?;
                }
            }
        }
        // Completeness: every minimal box solution is in the basis, and every
        // box solution is a sum of basis vectors.
        let set: BTreeSet<&Vec<i64>> = basis.iter().collect();
        for m in &minimal {
            ensure(set.contains(m), || format!("system {s}: minimal solution {m:?} missing from the basis"))?;
        }
        let mut decomposable: HashSet<Vec<i64>> = HashSet::from([vec![0; n]]);
        let mut sorted = box_solutions.clone();
        sorted.sort_by_key(|v| v.iter().sum::<i64>());
        for v in &sorted {
            let ok = basis.iter().any(|h| {
                leq(h, v) && decomposable.contains(&v.iter().zip(h).map(|(x, y)| x - y).collect::<Vec<_>>())
            });
            ensure(ok, || format!("system {s}: solution {v:?} is not a sum of basis vectors"))?;
            decomposable.insert(v.clone());
        }
    }
    Ok(format!("50 systems, {total_basis} basis vectors checked, {unchecked_outside} large vectors outside the box not re-searched"))
}

// ---------------------------------------------------------------------------
// 3. Cooper quantifier elimination
// ---------------------------------------------------------------------------

const NVARS: usize = 4;
const GUARD: i64 = 10;

fn term_value(t: &Term, env: &[i64; NVARS]) -> i64 {
    t.coeffs().fold(t.constant_part().to_i64().unwrap(), |acc, (v, a)| acc + a.to_i64().unwrap() * env[v.0 as usize])
}

/// Direct evaluation over ℤ. A quantifier over a quantifier-free body is
/// decided exactly: outside the hull of the roots of its linear atoms the
/// body is periodic with the lcm of its moduli, so scanning the hull widened
/// by one period on each side suffices. A quantifier over a quantified body
/// only occurs with the guard `|v| ≤ GUARD`, so that window is exact too.
fn oracle(f: &Formula, env: &mut [i64; NVARS]) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Le(t) => term_value(t, env) <= 0,
        Formula::Eq(t) => term_value(t, env) == 0,
        Formula::Divides(d, t) => term_value(t, env).rem_euclid(d.to_i64().unwrap()) == 0,
        Formula::Not(g) => !oracle(g, env),
        Formula::And(items) => items.iter().all(|g| oracle(g, env)),
        Formula::Or(items) => items.iter().any(|g| oracle(g, env)),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let want = matches!(f, Formula::Exists(..));
            let i = v.0 as usize;
            let (lo, hi) = if g.is_quantifier_free() { scan_range(g, i, env) } else { (-GUARD - 1, GUARD + 1) };
            let saved = env[i];
            let mut result = !want;
            for x in lo..=hi {
                env[i] = x;
                if oracle(g, env) == want {
                    result = want;
                    break;
                }
            }
            env[i] = saved;
            result
        }
    }
}

fn scan_range(body: &Formula, i: usize, env: &[i64; NVARS]) -> (i64, i64) {
    let mut period: i64 = 1;
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    let mut rest = *env;
    rest[i] = 0;
    let mut stack = vec![body];
    while let Some(f) = stack.pop() {
        match f {
            Formula::Le(t) | Formula::Eq(t) => {
                let a = t.coeff(Var(i as u32)).to_i64().unwrap();
                if a != 0 {
                    let root = Integer::div_floor(&-term_value(t, &rest), &a);
                    lo = lo.min(root);
                    hi = hi.max(root);
                }
            }
            Formula::Divides(d, t) => {
                if !t.coeff(Var(i as u32)).is_zero() {
                    period = period.lcm(&d.to_i64().unwrap());
                }
            }
            Formula::Not(g) => stack.push(g),
            Formula::And(items) | Formula::Or(items) => stack.extend(items),
            _ => unreachable!("quantifier-free body"),
        }
    }
    if lo > hi {
        (lo, hi) = (0, 0);
    }
    (lo - period - 2, hi + period + 2)
}

fn random_term(rng: &mut ChaCha8Rng, vars: &[usize]) -> Term {
    let mut t = Term::constant(rng.gen_range(-6..=6));
    for &v in vars {
        if rng.gen_bool(0.7) {
            t = t.add(&Term::monomial(Var(v as u32), rng.gen_range(-3..=3)));
        }
    }
    t
}

fn random_atom(rng: &mut ChaCha8Rng, vars: &[usize]) -> Formula {
    let t = random_term(rng, vars);
    match rng.gen_range(0..20) {
        0..=11 => Formula::Le(t),
        12..=14 => Formula::Eq(t),
        _ => Formula::divides(rng.gen_range(2..=4), t),
    }
}

fn random_qf(rng: &mut ChaCha8Rng, vars: &[usize], depth: u32) -> Formula {
    if depth == 0 {
        return random_atom(rng, vars);
    }
    match rng.gen_range(0..6) {
        0 | 1 => Formula::and(vec![random_qf(rng, vars, depth - 1), random_qf(rng, vars, depth - 1)]),
        2 | 3 => Formula::or(vec![random_qf(rng, vars, depth - 1), random_qf(rng, vars, depth - 1)]),
        4 => Formula::not(random_qf(rng, vars, depth - 1)),
        _ => random_atom(rng, vars),
    }
}

fn quantify(rng: &mut ChaCha8Rng, v: usize, body: Formula) -> Formula {
    if rng.gen_bool(0.5) {
        Formula::exists(Var(v as u32), body)
    } else {
        Formula::forall(Var(v as u32), body)
    }
}

/// Free variables 0 and 1; up to two quantifiers, alone, side by side, or
/// nested under a guard.
fn random_formula(rng: &mut ChaCha8Rng, i: usize) -> Formula {
    match i % 4 {
        0 => random_qf(rng, &[0, 1], 2),
        1 => {
            let body = random_qf(rng, &[0, 1, 2], 2);
            quantify(rng, 2, body)
        }
        2 => {
            let b1 = random_qf(rng, &[0, 1, 2], 2);
            let b2 = random_qf(rng, &[0, 1, 3], 2);
            let (q1, q2) = (quantify(rng, 2, b1), quantify(rng, 3, b2));
            let q2 = if rng.gen_bool(0.3) { Formula::not(q2) } else { q2 };
            if rng.gen_bool(0.5) {
                Formula::and(vec![q1, q2])
            } else {
                Formula::or(vec![q1, q2])
            }
        }
        _ => {
            let body = random_qf(rng, &[0, 1, 2, 3], 2);
            let inner = quantify(rng, 3, body);
            let z = Term::var(Var(2));
            let guard = Formula::and(vec![
                Formula::le(&Term::constant(-GUARD), &z),
                Formula::le(&z, &Term::constant(GUARD)),
            ]);
            if rng.gen_bool(0.5) {
                Formula::exists(Var(2), Formula::and(vec![guard, inner]))
            } else {
                Formula::forall(Var(2), Formula::implies(guard, inner))
            }
        }
    }
}

fn cooper_formulas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut qe_time = Duration::ZERO;
    let mut assignments = 0usize;
    for i in 0..100 {
        let f = random_formula(&mut rng, i);
        let start = Instant::now();
        let qf = cooper_qe(&f).map_err(|e| format!("formula {i}: {e}"))?;
        qe_time += start.elapsed();
        ensure(qf.is_quantifier_free(), || format!("formula {i}: result is not quantifier-free"))?;
        for x in -20..=20i64 {
            for y in -20..=20i64 {
                let mut env = [x, y, 0, 0];
                let direct = oracle(&f, &mut env);
                let start = Instant::now();
                let got = qf
                    .eval(&|v: Var| match v.0 {
                        0 => Some(BigInt::from(x)),
                        1 => Some(BigInt::from(y)),
                        _ => None,
                    })
                    .map_err(|e| format!("formula {i}: {e}"))?;
                qe_time += start.elapsed();
                ensure(got == direct, || format!("formula {i} at x={x}, y={y}: QE gives {got}, direct evaluation {direct}: {f}"))?;
                assignments += 1;
            }
        }
    }
    Ok(format!("{assignments} assignments agree; elimination and evaluation took {:.2} s", qe_time.as_secs_f64()))
}

// ---------------------------------------------------------------------------
// 4. Pumping
// ---------------------------------------------------------------------------

const INFINITE: [&str; 20] = [
    "e1*",
    "(e1^-1)* . e2",
    "(e1 e2)* . e1^3",
    "(e1^2 | e2^3)*",
    "e2 . (e1 e2^-1)* . e2",
    "(e1 | e2)* . (e1^-1 e2^-1)",
    "((e1^2)* . e2)*",
    "(e1 e2^2 | e1^-1)* . e2^-1",
    "e1^5 | (e2^-2)*",
    "(e1 . e2 . e1)*",
    "((e1 e2) | (e1 e2^-1))* . e1^-3",
    "(e1^3)* . (e2^3)* . e1 e2",
    "e1 e2 . (e1^0)* | (e2 e1)*",
    "(e1^-1 e2)* . (e1 e2^-1)*",
    "(e1 | ε)* . e2^4",
    "(e1^2 e2^-1 | e1^-2 e2)* . e1",
    "((e1 | e2) . (e1 | e2))*",
    "e1^7 . (e2^5 | e1^-5)* . e2^-7",
    "((e1 e2)^2)* | e1^-1",
    "(e1 . e1^-1)* . e2* . e1^5",
];

const FINITE: [&str; 10] = [
    "∅",
    "ε",
    "e1",
    "e1 | e2",
    "e1 . e2 . e1^-1",
    "(e1 | e2) . (e1^2 | e2^-1)",
    "(e1 e1^-1)*",
    "(e1 . e1^-1 | e2 . e2^-1)* . (e1 | e2)",
    "((e1 . e1^-1) | ε)* . e2^3",
    "∅* . e1 | ∅ . e2*",
];

fn pumping_corpus() -> Outcome {
    let group = Group::new(GroupSpec::free_abelian(2)).unwrap();
    for text in INFINITE {
        let aut = compile(&parse_expr(text).unwrap(), &group).map_err(|e| e.to_string())?;
        let w = pump(&aut, 12).map_err(|e| e.to_string())?.ok_or_else(|| format!("`{text}`: no pumping witness"))?;
        ensure(!group.is_identity(&w.q), || format!("`{text}`: q is the identity"))?;
        let set = SemilinearSet::from_automaton(&aut).map_err(|e| e.to_string())?;
        for n in 0..=10u64 {
            let g = w.instance(&group, n).map_err(|e| e.to_string())?;
            let v = g.as_abelian().unwrap().to_vec();
            ensure(set.member(&v).unwrap(), || format!("`{text}`: a·q^{n}·b = {g} is not in the set {set}"))?;
        }
    }
    for text in FINITE {
        let aut = compile(&parse_expr(text).unwrap(), &group).map_err(|e| e.to_string())?;
        let w = pump(&aut, 12).map_err(|e| e.to_string())?;
        ensure(w.is_none(), || format!("`{text}`: unexpected pumping witness {w:?}"))?;
    }
    Ok("20 infinite expressions pump for n ≤ 10, 10 finite ones give no witness".into())
}

// ---------------------------------------------------------------------------
// 5. Heisenberg witness
// ---------------------------------------------------------------------------

type H3 = (i64, i64, i64);

/// Unitriangular product `(α,β,γ)(α',β',γ') = (α+α', β+β', γ+γ'+αβ')`.
fn h_mul(a: H3, b: H3) -> H3 {
    (a.0 + b.0, a.1 + b.1, a.2 + b.2 + a.0 * b.1)
}

fn h_inv(a: H3) -> H3 {
    (-a.0, -a.1, -a.2 + a.0 * a.1)
}

fn h_pow(a: H3, n: i64) -> H3 {
    let base = if n < 0 { h_inv(a) } else { a };
    (0..n.abs()).fold((0, 0, 0), |acc, _| h_mul(acc, base))
}

fn h_str(a: H3) -> String {
    format!("({},{},{})", a.0, a.1, a.2)
}

fn set_of(evidence: &str) -> BTreeSet<String> {
    let inner = evidence.trim_start_matches('{').trim_end_matches('}');
    inner.split("),").filter(|s| !s.is_empty()).map(|s| if s.ends_with(')') { s.to_string() } else { format!("{s})") }).collect()
}

fn fact_value<'a>(report: &'a WitnessReport, id: &str, key: &str) -> Result<&'a str, String> {
    report.fact(id).and_then(|f| f.get(key)).ok_or_else(|| format!("missing {id}.{key}"))
}

fn heisenberg_witness() -> Outcome {
    let n_max = 8i64;
    let report = heisenberg_diagonal(&HeisenbergConfig::default()).map_err(|e| e.to_string())?;
    let (w, g, f) = ((1, 0, 0), (0, 0, 1), (0, 1, 0));
    let r_expected: BTreeSet<String> =
        (0..=n_max).map(|n| h_str(h_mul(h_mul(h_pow(w, n), h_pow(g, n)), h_pow(f, n)))).collect();
    let s_expected: BTreeSet<String> = (0..=n_max).map(|n| h_str(h_mul(h_pow(w, n), h_pow(f, n)))).collect();
    ensure(set_of(fact_value(&report, "R-window", "elements")?) == r_expected, || "R-window differs from {wⁿgⁿfⁿ}".into())?;
    ensure(set_of(fact_value(&report, "S-window", "elements")?) == s_expected, || "S-window differs from {wⁿfⁿ}".into())?;
    let mut pairs = 0;
    for n in 0..=n_max {
        for m in 0..=n_max {
            if n == m {
                continue;
            }
            let a = h_mul(h_pow(w, n), h_pow(f, n));
            let aq = h_mul(h_pow(w, m), h_pow(f, m));
            let q = h_mul(h_inv(a), aq);
            let aq2 = h_mul(aq, q);
            // S = {wᵗfᵗ = (t, t, t²) : t ≥ 0}, exactly.
            let in_s = aq2.0 == aq2.1 && aq2.0 >= 0 && aq2.2 == aq2.0 * aq2.0;
            let wd = h_pow(w, m - n);
            let commutes = h_mul(f, wd) == h_mul(wd, f);
            ensure(!in_s && !commutes, || format!("oracle: pair ({n},{m}) pumps or commutes"))?;
            let id = format!("pair-{n}-{m}");
            ensure(fact_value(&report, &id, "aq2")? == h_str(aq2), || format!("{id}: aq² differs"))?;
            ensure(fact_value(&report, &id, "aq2_in_S")? == "false", || format!("{id}: aq² reported in S"))?;
            ensure(fact_value(&report, &id, "commutes")? == "false", || format!("{id}: commutation reported"))?;
            pairs += 1;
        }
    }
    ensure(report.verdict() == Verdict::ConsistentWithPaper, || "library verdict is violation-found".into())?;
    let out = Command::new(env!("CARGO_BIN_EXE_ratg")).args(["witness", "heisenberg_diagonal", "--param", "N=8"]).output().unwrap();
    ensure(out.status.code() == Some(0), || format!("binary exit code {:?}", out.status.code()))?;
    ensure(String::from_utf8_lossy(&out.stdout).ends_with("verdict consistent-with-paper\n"), || "binary verdict line missing".into())?;
    Ok(format!("R and S windows of 9 elements, {pairs} pairs fail to pump and do not commute, exit code 0"))
}

// ---------------------------------------------------------------------------
// 6. Metabelian witness
// ---------------------------------------------------------------------------

/// Laurent polynomial over ℤ as exponent → coefficient.
type Laurent = BTreeMap<i64, BigInt>;

/// `f` (coefficients, highest degree first) divides `p` in `ℚ[x, x⁻¹]`.
fn divides(f: &[i64], p: &Laurent) -> bool {
    let terms: Vec<(i64, BigRational)> =
        p.iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (*e, BigRational::from_integer(c.clone()))).collect();
    if terms.is_empty() {
        return true;
    }
    let lo = terms[0].0;
    let deg = (terms.last().unwrap().0 - lo) as usize;
    let mut r = vec![BigRational::zero(); deg + 1];
    for (e, c) in terms {
        r[(e - lo) as usize] = c;
    }
    let m = f.len() - 1;
    let lead = BigRational::from_integer(f[0].into());
    // r[i] is the coefficient of x^i; reduce from the top.
    for top in (m..=deg).rev() {
        if r[top].is_zero() {
            continue;
        }
        let k = &r[top] / &lead;
        for (j, &q) in f.iter().enumerate() {
            r[top - j] -= &k * BigRational::from_integer(q.into());
        }
    }
    r.iter().all(|c| c.is_zero())
}

/// `xᵏ·a^{P}` with `(k, P)(k', P') = (k + k', x^{k'}P + P')`.
#[derive(Clone)]
struct Meta {
    k: i64,
    p: Laurent,
}

fn meta_mul(a: &Meta, b: &Meta) -> Meta {
    let mut p: Laurent = a.p.iter().map(|(e, c)| (e + b.k, c.clone())).collect();
    for (e, c) in &b.p {
        *p.entry(*e).or_insert_with(BigInt::zero) += c;
    }
    p.retain(|_, c| !c.is_zero());
    Meta { k: a.k + b.k, p }
}

fn meta_inv(a: &Meta) -> Meta {
    Meta { k: -a.k, p: a.p.iter().map(|(e, c)| (e - a.k, -c)).collect() }
}

fn meta_a(e: i64) -> Meta {
    Meta { k: 0, p: BTreeMap::from([(0, BigInt::from(e))]) }
}

fn meta_x(k: i64) -> Meta {
    Meta { k, p: BTreeMap::new() }
}

fn meta_eq(f: &[i64], a: &Meta, b: &Meta) -> bool {
    let mut diff = a.p.clone();
    for (e, c) in &b.p {
        *diff.entry(*e).or_insert_with(BigInt::zero) -= c;
    }
    a.k == b.k && divides(f, &diff)
}

/// Searches `u⁻ⁱ·c₁y·…·cᵢy` with `cⱼ ∈ choices` for the target, where
/// `R = (u⁻¹)*({c}·y)*` and the x-exponents force the same count on both
/// sides.
fn in_r(f: &[i64], u: &Meta, choices: [&Meta; 2], y: &Meta, target: &Meta, max: usize) -> bool {
    for i in 0..=max {
        let head = (0..i).fold(meta_x(0), |acc, _| meta_mul(&acc, &meta_inv(u)));
        for mask in 0..(1usize << i) {
            let mut acc = head.clone();
            for j in 0..i {
                acc = meta_mul(&meta_mul(&acc, choices[(mask >> j) & 1]), y);
            }
            if meta_eq(f, &acc, target) {
                return true;
            }
        }
    }
    false
}

fn metabelian_witness() -> Outcome {
    let mut summary = Vec::new();
    for f in [vec![2i64, -3], vec![3, 1, -1]] {
        let cfg = MetabelianConfig::new(&f);
        let report = metabelian_r1r4(&cfg).map_err(|e| e.to_string())?;
        let d = 38i64;
        let p = f.len() as i64 + 1;
        let n_max = 4i64;
        ensure(report.bounds.iter().any(|(k, v)| k == "p" && *v == p.to_string()), || format!("f={f:?}: p is not m+2"))?;
        // Memberships a^{x^{±kp}} ∈ Rᵢ ∩ Rⱼ, searched independently.
        let (one, a) = (meta_a(0), meta_a(1));
        let (ad, ad1) = (meta_a(d), meta_a(d + 1));
        for k in 1..=n_max {
            let up = meta_mul(&meta_mul(&meta_x(-k * p), &a), &meta_x(k * p));
            let down = meta_mul(&meta_mul(&meta_x(k * p), &a), &meta_x(-k * p));
            let max = (k + 1) as usize;
            let r1 = in_r(&f, &meta_mul(&ad, &meta_x(p)), [&ad, &ad1], &meta_x(p), &up, max);
            let r2 = in_r(&f, &meta_x(p), [&one, &a], &meta_x(p), &up, max);
            let r3 = in_r(&f, &meta_mul(&ad, &meta_x(-p)), [&ad, &ad1], &meta_x(-p), &down, max);
            let r4 = in_r(&f, &meta_x(-p), [&one, &a], &meta_x(-p), &down, max);
            ensure(r1 && r2 && r3 && r4, || format!("f={f:?}, k={k}: oracle membership {r1} {r2} {r3} {r4}"))?;
            for id in [format!("member-R1R2-k{k}"), format!("member-R3R4-k{k}")] {
                ensure(report.fact(&id).is_some_and(|x| x.pass), || format!("f={f:?}: {id} fails"))?;
            }
        }
        // Every instance of the four families is a sum Σ cᵢ x^{eᵢ} in the
        // module; it is the identity exactly when f divides it.
        let mut instances = BTreeMap::new();
        for (id, shapes_nk) in [("up-d-block", true), ("up-eps-down-d", false), ("down-d-block", true), ("up-d-down-eps", false)] {
            let mut count = 0usize;
            let mut identities = 0usize;
            for n in 1..=n_max {
                let seconds: Vec<i64> = if shapes_nk { (1..=n).collect() } else { (0..=n_max).collect() };
                for s in seconds {
                    for code in 0..3i64.pow(n as u32) {
                        let eps: Vec<i64> = (0..n).map(|i| (code / 3i64.pow(i as u32)) % 3 - 1).collect();
                        let mut poly = Laurent::new();
                        let mut add = |e: i64, c: i64| *poly.entry(e).or_insert_with(BigInt::zero) += c;
                        match id {
                            "up-d-block" => {
                                for i in 1..=n {
                                    add(i * p, eps[(i - 1) as usize] + if i <= s { d } else { 0 });
                                }
                            }
                            "up-eps-down-d" => {
                                for i in 1..=n {
                                    add(i * p, eps[(i - 1) as usize]);
                                }
                                for j in 0..=s {
                                    add(-j * p, -d);
                                }
                            }
                            "down-d-block" => {
                                for i in 1..=n {
                                    add(-i * p, eps[(i - 1) as usize] + if i <= s { d } else { 0 });
                                }
                            }
                            _ => {
                                for j in 0..=s {
                                    add(j * p, -d);
                                }
                                for i in 1..=n {
                                    add(-i * p, eps[(i - 1) as usize]);
                                }
                            }
                        }
                        count += 1;
                        identities += usize::from(divides(&f, &poly));
                    }
                }
            }
            ensure(identities == 0, || format!("f={f:?}: oracle finds {identities} identities in {id}"))?;
            ensure(fact_value(&report, id, "instances")? == count.to_string(), || format!("f={f:?}: {id} instance count differs"))?;
            ensure(fact_value(&report, id, "identities")? == "0", || format!("f={f:?}: {id} reports identities"))?;
            instances.insert(id, count);
        }
        ensure(report.verdict() == Verdict::ConsistentWithPaper, || format!("f={f:?}: verdict violation-found"))?;
        let spec = format!("group kind=metabelian f=[{}]", f.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
        let out = Command::new(env!("CARGO_BIN_EXE_ratg")).args(["--spec", &spec, "witness", "metabelian_r1r4"]).output().unwrap();
        ensure(out.status.code() == Some(0), || format!("f={f:?}: binary exit code {:?}", out.status.code()))?;
        summary.push(format!("f={f:?}: {} instances, no identity", instances.values().sum::<usize>()));
    }
    Ok(summary.join("; "))
}

// ---------------------------------------------------------------------------
// 7. Orbit witness
// ---------------------------------------------------------------------------

type M2 = [[i128; 2]; 2];

fn m_mul(a: M2, b: M2) -> M2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn orbit_witness() -> Outcome {
    // Rotation: M⁴ = 1 and no smaller power is 1.
    let rot: M2 = [[0, -1], [1, 0]];
    let powers: Vec<M2> = (0..=4).scan([[1, 0], [0, 1]], |acc, _| {
        let cur = *acc;
        *acc = m_mul(*acc, rot);
        Some(cur)
    }).collect();
    let order = (1..=4).find(|&k| powers[k] == [[1, 0], [0, 1]]).unwrap();
    let spec = GroupSpec::semidirect(&[&[0, -1], &[1, 0]]).unwrap();
    let report = polycyclic_orbit(&OrbitConfig { spec, x: big(&[1, 0]), bound: 8 }).map_err(|e| e.to_string())?;
    ensure(fact_value(&report, "orbit-repetition", "gap")? == order.to_string(), || "rotation: gap is not the order".into())?;
    ensure(report.fact("commutation").is_some_and(|f| f.pass), || "rotation: commutation fails".into())?;
    ensure(fact_value(&report, "commutation", "commutator")? == "(0,0)·h^0", || "rotation: [x,h⁴] is not the identity".into())?;
    ensure(report.verdict() == Verdict::ConsistentWithPaper, || "rotation: violation-found".into())?;

    // Hyperbolic: Mⁿx for |n| ≤ 8 pairwise distinct.
    let m: M2 = [[2, 1], [1, 1]];
    let m_inv: M2 = [[1, -1], [-1, 2]];
    let mut orbit = BTreeSet::new();
    for n in -8i64..=8 {
        let base = if n < 0 { m_inv } else { m };
        let p = (0..n.abs()).fold([[1, 0], [0, 1]], |acc, _| m_mul(acc, base));
        orbit.insert((p[0][0], p[1][0]));
    }
    let spec = GroupSpec::semidirect(&[&[2, 1], &[1, 1]]).unwrap();
    let report = polycyclic_orbit(&OrbitConfig { spec, x: big(&[1, 0]), bound: 8 }).map_err(|e| e.to_string())?;
    ensure(orbit.len() == 17, || "oracle: hyperbolic orbit is not injective".into())?;
    ensure(fact_value(&report, "orbit-injective", "distinct")? == "17", || "hyperbolic: orbit not reported injective".into())?;
    ensure(report.fact("orbit-repetition").is_none(), || "hyperbolic: repetition reported".into())?;
    ensure(report.verdict() == Verdict::ConsistentWithPaper, || "hyperbolic: violation-found".into())?;
    Ok("rotation: repetition gap 4 with [x,h⁴] = 1; hyperbolic: 17 distinct conjugates".into())
}

// ---------------------------------------------------------------------------
// 8. Image and preimage
// ---------------------------------------------------------------------------

fn image_preimage() -> Outcome {
    let src = Group::new(GroupSpec::FreeAbelian { rank: 1, torsion: vec![2.into()] }).unwrap();
    let tgt = Group::new(GroupSpec::free_abelian(1)).unwrap();
    let images = [("e1".to_string(), GroupElement::abelian(&[1])), ("c1".to_string(), tgt.identity())];
    let kernel = vec![src.identity(), src.generator("c1").unwrap()];
    let section = [("e1".to_string(), src.generator("e1").unwrap())];
    let hom = GroupHom::new(src.clone(), tgt.clone(), images).and_then(|h| h.with_finite_kernel(kernel, section)).map_err(|e| e.to_string())?;
    let cfg = QeConfig::default();
    let key = |g: &GroupElement| small(g.as_abelian().unwrap());
    let mut checked = 0;
    // Target sets: image(preimage(T)) = T exactly, and the preimage window
    // is the lifted window times the kernel.
    for text in ["(e1^2)* . (e1^-2)*", "e1^3 | (e1^-1)*", "(e1^5 | e1^-3)* . e1", "∅", "ε", "(e1^2)* . e1"] {
        let aut = compile(&parse_expr(text).unwrap(), &tgt).map_err(|e| e.to_string())?;
        let pre = preimage_finite_kernel(&aut, &hom).map_err(|e| e.to_string())?;
        let back = image(&pre, &hom).map_err(|e| e.to_string())?;
        let (s1, s2) = (SemilinearSet::from_automaton(&aut).unwrap(), SemilinearSet::from_automaton(&back).unwrap());
        ensure(decide_equal(&s1, &s2, &cfg).unwrap(), || format!("`{text}`: image(preimage(T)) = {s2} differs from T = {s1}"))?;
        for bound in 0..=5 {
            let lifted: BTreeSet<Vec<i64>> = enumerate(&pre, bound + 1).unwrap().iter().map(key).collect();
            let expected: BTreeSet<Vec<i64>> = enumerate(&aut, bound)
                .unwrap()
                .iter()
                .flat_map(|t| {
                    let v = key(t)[0];
                    [vec![v, 0], vec![v, 1]]
                })
                .collect();
            ensure(lifted == expected, || format!("`{text}`: preimage window at {bound} differs"))?;
            for v in &lifted {
                ensure(s1.member(&big(&v[..1])).unwrap(), || format!("`{text}`: preimage element {v:?} maps outside T"))?;
            }
        }
        checked += 1;
    }
    // Source sets: preimage(image(S)) = S·K on every window.
    for text in ["(e1^2 c1)* | e1^-1", "(c1 . e1)*", "e1 c1 . (e1^-2)*", "c1"] {
        let aut = compile(&parse_expr(text).unwrap(), &src).map_err(|e| e.to_string())?;
        let img = image(&aut, &hom).map_err(|e| e.to_string())?;
        let pre = preimage_finite_kernel(&img, &hom).map_err(|e| e.to_string())?;
        for bound in 0..=5 {
            let window: BTreeSet<Vec<i64>> = enumerate(&aut, bound).unwrap().iter().map(key).collect();
            let mapped: BTreeSet<Vec<i64>> = enumerate(&img, bound).unwrap().iter().map(key).collect();
            let expected_img: BTreeSet<Vec<i64>> = window.iter().map(|v| vec![v[0]]).collect();
            ensure(mapped == expected_img, || format!("`{text}`: image window at {bound} differs"))?;
            let got: BTreeSet<Vec<i64>> = enumerate(&pre, bound + 1).unwrap().iter().map(key).collect();
            let expected: BTreeSet<Vec<i64>> = window.iter().flat_map(|v| [vec![v[0], 0], vec![v[0], 1]]).collect();
            ensure(got == expected, || format!("`{text}`: preimage(image(S)) window at {bound} differs from S·K"))?;
        }
        checked += 1;
    }
    Ok(format!("{checked} round trips, windows up to 6 edges"))
}

// ---------------------------------------------------------------------------
// 9. Group axioms against faithful models
// ---------------------------------------------------------------------------

/// Independent model of each backend, built from words letter by letter.
#[derive(Clone, PartialEq, Debug)]
enum Model {
    Abelian(Vec<i64>),
    /// `[[M⁻ᵏ, v], [0, 1]]` together with `k`.
    Affine(Vec<Vec<i128>>, i64),
    Heis(H3),
    /// Configuration mod μ and lamp position.
    Lamp(BTreeMap<i64, i64>, i64),
    Meta(i64, Vec<(i64, i64)>),
}

struct Backend {
    name: &'static str,
    specs: Vec<GroupSpec>,
}

fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn identity_mat(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn model_of(spec: &GroupSpec, word: &[(String, i64)]) -> Model {
    match spec {
        GroupSpec::FreeAbelian { rank, torsion } => {
            let mut v = vec![0i64; rank + torsion.len()];
            for (name, e) in word {
                let idx: usize = name[1..].parse::<usize>().unwrap() - 1;
                if name.starts_with('e') {
                    v[idx] += e;
                } else {
                    let n = torsion[idx].to_i64().unwrap();
                    v[rank + idx] = (v[rank + idx] + e).rem_euclid(n);
                }
            }
            Model::Abelian(v)
        }
        GroupSpec::Semidirect { matrix } => {
            let r = matrix.dim();
            let m: Vec<Vec<i128>> = matrix.rows().iter().map(|row| row.iter().map(|x| x.to_i128().unwrap()).collect()).collect();
            // Integer inverse of a unimodular 2×2 matrix.
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let m_inv = vec![vec![m[1][1] * det, -m[0][1] * det], vec![-m[1][0] * det, m[0][0] * det]];
            let mut acc = identity_mat(r + 1);
            let mut k = 0;
            for (name, e) in word {
                let mut step = identity_mat(r + 1);
                if name == "h" {
                    let base = if *e >= 0 { &m_inv } else { &m };
                    let mut block = identity_mat(r);
                    for _ in 0..e.abs() {
                        block = mat_mul(&block, base);
                    }
                    for i in 0..r {
                        step[i][..r].copy_from_slice(&block[i]);
                    }
                    k += e;
                } else {
                    let idx: usize = name[1..].parse::<usize>().unwrap() - 1;
                    step[idx][r] = *e as i128;
                }
                acc = mat_mul(&acc, &step);
            }
            Model::Affine(acc, k)
        }
        GroupSpec::Heisenberg => Model::Heis(word.iter().fold((0, 0, 0), |acc, (name, e)| {
            let step = match name.as_str() {
                "g" => (*e, 0, 0),
                "f" => (0, *e, 0),
                _ => (0, 0, *e),
            };
            h_mul(acc, step)
        })),
        GroupSpec::Lamplighter { modulus } => {
            let mu = modulus.to_i64().unwrap();
            let mut config: BTreeMap<i64, i64> = BTreeMap::new();
            let mut k = 0;
            for (name, e) in word {
                if name == "t" {
                    k += e;
                } else {
                    let c = config.entry(k).or_insert(0);
                    *c = (*c + e).rem_euclid(mu);
                }
            }
            config.retain(|_, c| *c != 0);
            Model::Lamp(config, k)
        }
        GroupSpec::Metabelian { .. } => {
            let mut acc = meta_x(0);
            for (name, e) in word {
                let step = if name == "x" { meta_x(*e) } else { meta_a(*e) };
                acc = meta_mul(&acc, &step);
            }
            Model::Meta(acc.k, acc.p.iter().map(|(e, c)| (*e, c.to_i64().unwrap())).collect())
        }
    }
}

/// The library element expressed in the model, for comparison.
fn model_from_element(spec: &GroupSpec, g: &GroupElement) -> Model {
    match (spec, g) {
        (GroupSpec::FreeAbelian { .. }, GroupElement::Abelian(v)) => Model::Abelian(small(v)),
        (GroupSpec::Semidirect { .. }, GroupElement::Semidirect { v, k }) => {
            let r = v.len();
            let k = k.to_i64().unwrap();
            // Rebuild [[M⁻ᵏ, v], [0, 1]] from the word e^v·h^k.
            let mut word: Vec<(String, i64)> = small(v).iter().enumerate().map(|(i, x)| (format!("e{}", i + 1), *x)).collect();
            word.push(("h".into(), k));
            let Model::Affine(mat, _) = model_of(spec, &word) else { unreachable!() };
            debug_assert_eq!(mat.len(), r + 1);
            Model::Affine(mat, k)
        }
        (GroupSpec::Heisenberg, GroupElement::Heisenberg { alpha, beta, gamma }) => {
            Model::Heis((alpha.to_i64().unwrap(), beta.to_i64().unwrap(), gamma.to_i64().unwrap()))
        }
        (GroupSpec::Lamplighter { .. }, GroupElement::Lamplighter { support, k }) => Model::Lamp(
            support.iter().map(|(p, v)| (p.to_i64().unwrap(), v.to_i64().unwrap())).collect(),
            k.to_i64().unwrap(),
        ),
        (GroupSpec::Metabelian { .. }, GroupElement::Metabelian { k, m }) => {
            Model::Meta(k.to_i64().unwrap(), m.terms().map(|(e, c)| (e, c.to_i64().unwrap())).collect())
        }
        _ => panic!("element does not match the spec"),
    }
}

fn models_equal(spec: &GroupSpec, a: &Model, b: &Model) -> bool {
    match (spec, a, b) {
        (GroupSpec::Metabelian { f }, Model::Meta(k1, p1), Model::Meta(k2, p2)) => {
            let f: Vec<i64> = f.iter().map(|c| c.to_i64().unwrap()).collect();
            let to = |p: &[(i64, i64)]| Meta { k: 0, p: p.iter().map(|(e, c)| (*e, BigInt::from(*c))).collect() };
            k1 == k2 && meta_eq(&f, &to(p1), &to(p2))
        }
        _ => a == b,
    }
}

fn random_word(rng: &mut ChaCha8Rng, gens: &[String]) -> Vec<(String, i64)> {
    (0..rng.gen_range(0..=6)).map(|_| (gens[rng.gen_range(0..gens.len())].clone(), rng.gen_range(-3..=3))).collect()
}

fn group_axioms() -> Outcome {
    let backends = [
        Backend { name: "free_abelian", specs: vec![GroupSpec::free_abelian(3), GroupSpec::FreeAbelian { rank: 1, torsion: vec![2.into()] }] },
        Backend { name: "semidirect", specs: vec![GroupSpec::semidirect(&[&[2, 1], &[1, 1]]).unwrap(), GroupSpec::semidirect(&[&[0, -1], &[1, 0]]).unwrap()] },
        Backend { name: "heisenberg", specs: vec![GroupSpec::Heisenberg] },
        Backend { name: "lamplighter", specs: vec![GroupSpec::lamplighter(2), GroupSpec::lamplighter(3)] },
        Backend { name: "metabelian", specs: vec![GroupSpec::metabelian(&[2, -3]), GroupSpec::metabelian(&[3, 1, -1])] },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let samples = 10_000;
    for b in &backends {
        let groups: Vec<Group> = b.specs.iter().map(|s| Group::new(s.clone()).unwrap()).collect();
        for i in 0..samples {
            let grp = &groups[i % groups.len()];
            let spec = grp.spec();
            let gens = grp.base_generators();
            let words: Vec<Vec<(String, i64)>> = (0..3).map(|_| random_word(&mut rng, &gens)).collect();
            let lib: Vec<GroupElement> = words
                .iter()
                .map(|w| grp.eval_word(&Word::from_pairs(w.iter().map(|(n, e)| (n.as_str(), *e)))).unwrap())
                .collect();
            let (a, bb, c) = (&lib[0], &lib[1], &lib[2]);
            let ctx = || format!("{} sample {i}: words {words:?}", b.name);
            // The library element of each word matches the model.
            for (w, g) in words.iter().zip(&lib) {
                ensure(models_equal(spec, &model_from_element(spec, g), &model_of(spec, w)), ctx)?;
            }
            // Products match the model of the concatenated word.
            let ab = grp.mul(a, bb).unwrap();
            let concat: Vec<(String, i64)> = words[0].iter().chain(&words[1]).cloned().collect();
            ensure(models_equal(spec, &model_from_element(spec, &ab), &model_of(spec, &concat)), ctx)?;
            // Axioms.
            let ab_c = grp.mul(&ab, c).unwrap();
            let a_bc = grp.mul(a, &grp.mul(bb, c).unwrap()).unwrap();
            ensure(ab_c == a_bc, ctx)?;
            let e = grp.identity();
            ensure(grp.mul(a, &e).unwrap() == *a && grp.mul(&e, a).unwrap() == *a, ctx)?;
            let ai = grp.inv(a).unwrap();
            ensure(grp.is_identity(&grp.mul(a, &ai).unwrap()) && grp.is_identity(&grp.mul(&ai, a).unwrap()), ctx)?;
            let inverse_word: Vec<(String, i64)> = words[0].iter().rev().map(|(n, e)| (n.clone(), -e)).collect();
            ensure(models_equal(spec, &model_from_element(spec, &ai), &model_of(spec, &inverse_word)), ctx)?;
        }
    }
    Ok(format!("{} backends × {samples} samples, zero failures", backends.len()))
}
