use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Fact, WitnessReport};
use crate::automata::{compile, member_bounded, Membership, RatExpr};
use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement, GroupSpec, Word};

/// Largest number of ε-vectors checked exhaustively per window shape; larger
/// shapes are sampled with the configured seed.
pub const EPSILON_WINDOW_CAP: usize = 1 << 12;

/// The group `⟨a, x | [a, a^{xⁱ}], a^{f(x)}⟩` and the parameters of the
/// sets `R₁, …, R₄`.
#[derive(Debug, Clone)]
pub struct MetabelianConfig {
    /// Coefficients of `f`, highest degree first.
    pub f: Vec<BigInt>,
    pub d: BigInt,
    /// Defaults to `deg f + 2`.
    pub p: Option<i64>,
    /// Window: `k ≤ N` for memberships, `n, l ≤ N` for the equalities.
    pub bound: usize,
    /// Seed for sampling ε-vectors beyond [`EPSILON_WINDOW_CAP`].
    pub seed: u64,
}

impl MetabelianConfig {
    pub fn new(f: &[i64]) -> MetabelianConfig {
        MetabelianConfig {
            f: f.iter().map(|&c| c.into()).collect(),
            d: 38.into(),
            p: None,
            bound: 4,
            seed: 0,
        }
    }
}

struct Ctx {
    group: Group,
    a: GroupElement,
    x: GroupElement,
    p: i64,
}

impl Ctx {
    /// `(a^c)^{x^e}`
    fn conj(&self, c: &BigInt, e: i64) -> Result<GroupElement> {
        self.group.conj(&self.group.pow(&self.a, c)?, &self.group.pow_i64(&self.x, e)?)
    }

    /// Product of `(a^{cᵢ})^{x^{eᵢ}}` in the given order.
    fn product(&self, terms: &[(BigInt, i64)]) -> Result<GroupElement> {
        let mut acc = self.group.identity();
        for (c, e) in terms {
            acc = self.group.mul(&acc, &self.conj(c, *e)?)?;
        }
        Ok(acc)
    }

    fn xp(&self, sign: i64) -> Result<GroupElement> {
        self.group.pow_i64(&self.x, sign * self.p)
    }

    /// `a^c·x^{sign·p}`
    fn ax(&self, c: &BigInt, sign: i64) -> Result<GroupElement> {
        self.group.mul(&self.group.pow(&self.a, c)?, &self.xp(sign)?)
    }
}

/// A family of equalities indexed by a window shape `(n, k)` or `(n, l)`
/// and an ε-vector of length `n`.
struct Family {
    id: &'static str,
    description: &'static str,
    second: &'static str,
    shapes: Vec<(i64, i64)>,
}

pub fn metabelian_r1r4(cfg: &MetabelianConfig) -> Result<WitnessReport> {
    let group = Group::new(GroupSpec::Metabelian { f: cfg.f.clone() })?;
    let m = (cfg.f.len() - 1) as i64;
    if cfg.f[0].abs().is_one() && cfg.f[cfg.f.len() - 1].abs().is_one() {
        return Err(Error::NotApplicable("polycyclic case, |q0| = |qm| = 1".into()));
    }
    let p = cfg.p.unwrap_or(m + 2);
    if p <= 0 {
        return Err(Error::InvalidParameter("p must be positive".into()));
    }
    if cfg.d <= BigInt::from(0) {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    let n_max = i64::try_from(cfg.bound).map_err(|_| Error::InstanceTooLarge("bound".into()))?;
    let ctx = Ctx { a: group.generator("a")?, x: group.generator("x")?, group, p };
    let d = &cfg.d;
    let d1 = d + 1;
    let one = BigInt::one();

    let mut report = WitnessReport::new("metabelian_r1r4");
    report.bound("N", cfg.bound);
    report.bound("d", d);
    report.bound("p", p);
    if p <= m + 1 {
        report.note(format!("p = {p} does not satisfy p > deg f + 1"));
    }

    // R₁ … R₄ as automata; each bracketed word is a single edge label.
    let w = |pairs: &[(&str, &BigInt)]| RatExpr::word(Word::from_pairs(pairs.iter().map(|(n, e)| (*n, (*e).clone()))));
    let (pp, mp) = (BigInt::from(p), BigInt::from(-p));
    let md = -d;
    let sets = [
        // ((a^d x^p)^-1)* (a^d x^p | a^{d+1} x^p)*
        RatExpr::concat(
            RatExpr::star(w(&[("x", &mp), ("a", &md)])),
            RatExpr::star(RatExpr::union(w(&[("a", d), ("x", &pp)]), w(&[("a", &d1), ("x", &pp)]))),
        ),
        // (x^-p)* (x^p | a x^p)*
        RatExpr::concat(
            RatExpr::star(w(&[("x", &mp)])),
            RatExpr::star(RatExpr::union(w(&[("x", &pp)]), w(&[("a", &one), ("x", &pp)]))),
        ),
        // ((a^d x^-p)^-1)* (a^d x^-p | a^{d+1} x^-p)*
        RatExpr::concat(
            RatExpr::star(w(&[("x", &pp), ("a", &md)])),
            RatExpr::star(RatExpr::union(w(&[("a", d), ("x", &mp)]), w(&[("a", &d1), ("x", &mp)]))),
        ),
        // (x^p)* (x^-p | a x^-p)*
        RatExpr::concat(
            RatExpr::star(w(&[("x", &pp)])),
            RatExpr::star(RatExpr::union(w(&[("x", &mp)]), w(&[("a", &one), ("x", &mp)]))),
        ),
    ];
    let auts = sets.iter().map(|e| compile(e, &ctx.group)).collect::<Result<Vec<_>>>()?;

    // (i) a^{x^{±kp}} ∈ Rᵢ ∩ Rⱼ through the explicit factorizations.
    for k in 1..=n_max {
        for (sign, i, j) in [(1i64, 0usize, 1usize), (-1, 2, 3)] {
            let target = ctx.conj(&one, sign * k * p)?;
            let u = ctx.ax(d, sign)?;
            let via_d = ctx.group.product([
                &ctx.group.pow_i64(&u, -k)?,
                &ctx.ax(&d1, sign)?,
                &ctx.group.pow_i64(&u, k - 1)?,
            ])?;
            let xs = ctx.xp(sign)?;
            let via_x = ctx.group.product([
                &ctx.group.pow_i64(&xs, -k)?,
                &ctx.ax(&one, sign)?,
                &ctx.group.pow_i64(&xs, k - 1)?,
            ])?;
            let edges = 2 * k as usize;
            let in_i = member_bounded(&auts[i], &target, edges)? == Membership::Yes;
            let in_j = member_bounded(&auts[j], &target, edges)? == Membership::Yes;
            let pass = via_d == target && via_x == target && in_i && in_j;
            let exp = if sign > 0 { "" } else { "-" };
            report.push(
                Fact::new(
                    format!("member-R{}R{}-k{k}", i + 1, j + 1),
                    format!("a^(x^({exp}{k}p)) ∈ R{} ∩ R{}", i + 1, j + 1),
                    pass,
                )
                .with("factorization_d", via_d == target)
                .with("factorization_x", via_x == target)
                .with(&format!("in_R{}", i + 1), in_i)
                .with(&format!("in_R{}", j + 1), in_j)
                .with("max_edges", edges),
            );
        }
    }

    // (ii) the four equality families, none of which may hold.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let nk_shapes = || -> Vec<(i64, i64)> { (1..=n_max).flat_map(|n| (1..=n).map(move |k| (n, k))).collect() };
    let nl_shapes = || -> Vec<(i64, i64)> { (1..=n_max).flat_map(|n| (0..=n_max).map(move |l| (n, l))).collect() };
    let families = [
        Family { id: "up-d-block", description: "Π_{i=n..k+1} (a^εᵢ)^(x^{ip}) · Π_{i=k..1} (a^{d+εᵢ})^(x^{ip}) ≠ 1", second: "k", shapes: nk_shapes() },
        Family { id: "up-eps-down-d", description: "Π_{i=n..1} (a^εᵢ)^(x^{ip}) · Π_{j=0..l} (a^-d)^(x^{-jp}) ≠ 1", second: "l", shapes: nl_shapes() },
        Family { id: "down-d-block", description: "Π_{i=1..k} (a^{d+εᵢ})^(x^{-ip}) · Π_{i=k+1..n} (a^εᵢ)^(x^{-ip}) ≠ 1", second: "k", shapes: nk_shapes() },
        Family { id: "up-d-down-eps", description: "Π_{j=l..0} (a^-d)^(x^{jp}) · Π_{i=1..n} (a^εᵢ)^(x^{-ip}) ≠ 1", second: "l", shapes: nl_shapes() },
    ];
    for family in &families {
        let mut checked = 0usize;
        let mut sampled = false;
        let mut identities: Vec<String> = Vec::new();
        for &(n, second) in &family.shapes {
            for eps in epsilon_vectors(n as usize, &mut rng, &mut sampled) {
                let terms = family_terms(family.id, n, second, &eps, d, p);
                checked += 1;
                if ctx.group.is_identity(&ctx.product(&terms)?) {
                    let eps: Vec<String> = eps.iter().map(|e| format!("{e}")).collect();
                    identities.push(format!("n={n},{}={second},eps=[{}]", family.second, eps.join(",")));
                }
            }
        }
        let mut fact = Fact::new(family.id, family.description, identities.is_empty())
            .with("instances", checked)
            .with("identities", identities.len())
            .with("sampled", sampled);
        if let Some(first) = identities.first() {
            fact = fact.with("first_identity", first);
        }
        report.push(fact);
    }
    report.note(
        "up-eps-down-d ends with the factor (a^-d)^(x^{-lp}); \
         up-d-down-eps uses the full run (a^ε1)^(x^-p) … (a^εn)^(x^{-np})",
    );
    report.note("ε ranges over {-1,0,1}, which contains the {0,1} windows of the set descriptions");

    // (iii) power identities for 1 ≤ n ≤ N.
    let mut failures = Vec::new();
    for n in 1..=n_max {
        let cases: [(i64, i64, Vec<(BigInt, i64)>); 4] = [
            // (a^d x^p)^n = x^{np} (a^d)^{x^{np}} … (a^d)^{x^p}
            (1, n, (1..=n).rev().map(|i| (d.clone(), i * p)).collect()),
            // (a^d x^p)^-n = x^{-np} (a^-d)^{x^{-(n-1)p}} … (a^-d)^{x^-p} a^-d
            (1, -n, (0..n).rev().map(|i| (-d, -i * p)).collect()),
            // (a^d x^-p)^n = x^{-np} (a^d)^{x^{-np}} … (a^d)^{x^-p}
            (-1, n, (1..=n).rev().map(|i| (d.clone(), -i * p)).collect()),
            // (a^d x^-p)^-n = x^{np} (a^-d)^{x^{(n-1)p}} … (a^-d)^{x^p} a^-d
            (-1, -n, (0..n).rev().map(|i| (-d, i * p)).collect()),
        ];
        for (sign, e, terms) in cases {
            let lhs = ctx.group.pow_i64(&ctx.ax(d, sign)?, e)?;
            let rhs = ctx.group.mul(&ctx.group.pow_i64(&ctx.x, sign * e * p)?, &ctx.product(&terms)?)?;
            if lhs != rhs {
                failures.push(format!("sign={sign},n={e}"));
            }
        }
    }
    let mut fact = Fact::new(
        "power-identities",
        "(a^d x^±p)^±n equals the stated product of conjugates",
        failures.is_empty(),
    )
    .with("checked", 4 * n_max)
    .with("failures", failures.len());
    if let Some(first) = failures.first() {
        fact = fact.with("first_failure", first);
    }
    report.push(fact);
    report.note("irreducibility of f is assumed, not verified");
    Ok(report)
}

/// `(exponent of a, exponent of x)` pairs of one instance, left to right.
fn family_terms(id: &str, n: i64, second: i64, eps: &[i64], d: &BigInt, p: i64) -> Vec<(BigInt, i64)> {
    let e = |i: i64| BigInt::from(eps[(i - 1) as usize]);
    let mut out = Vec::new();
    match id {
        "up-d-block" => {
            let k = second;
            for i in (k + 1..=n).rev() {
                out.push((e(i), i * p));
            }
            for i in (1..=k).rev() {
                out.push((d + e(i), i * p));
            }
        }
        "up-eps-down-d" => {
            let l = second;
            for i in (1..=n).rev() {
                out.push((e(i), i * p));
            }
            for j in 0..=l {
                out.push((-d, -j * p));
            }
        }
        "down-d-block" => {
            let k = second;
            for i in 1..=k {
                out.push((d + e(i), -i * p));
            }
            for i in k + 1..=n {
                out.push((e(i), -i * p));
            }
        }
        _ => {
            let l = second;
            for j in (0..=l).rev() {
                out.push((-d, j * p));
            }
            for i in 1..=n {
                out.push((e(i), -i * p));
            }
        }
    }
    out
}

/// All of `{-1,0,1}^len` when that fits under the cap, otherwise a seeded
/// sample of cap size.
fn epsilon_vectors(len: usize, rng: &mut ChaCha8Rng, sampled: &mut bool) -> Vec<Vec<i64>> {
    let total = 3usize.checked_pow(len as u32).filter(|&t| t <= EPSILON_WINDOW_CAP);
    match total {
        Some(total) => (0..total)
            .map(|mut idx| {
                let mut v = vec![0i64; len];
                for slot in v.iter_mut() {
                    *slot = (idx % 3) as i64 - 1;
                    idx /= 3;
                }
                v
            })
            .collect(),
        None => {
            *sampled = true;
            (0..EPSILON_WINDOW_CAP).map(|_| (0..len).map(|_| rng.gen_range(-1..=1)).collect()).collect()
        }
    }
}
