//! Exact arithmetic in the concrete group backends.
//!
//! | kind           | elements                    | generators        |
//! |----------------|-----------------------------|-------------------|
//! | `free_abelian` | `ℤʳ × ℤ_{n₁} × …`           | `e1..er`, `c1..`  |
//! | `semidirect`   | `v·hᵏ`, `h⁻¹vh = Mv`        | `e1..er`, `h`     |
//! | `heisenberg`   | `UT₃(ℤ)` as `(α, β, γ)`     | `g`, `f`, `z`     |
//! | `lamplighter`  | `ℤ_μ wr ℤ`, config `· tᵏ`   | `a`, `t`          |
//! | `metabelian`   | `xᵏ·a^{m(x)}`               | `a`, `x`          |
//!
//! Every backend uses arbitrary precision integers. Extra names can be bound
//! to elements with [`Group::set_alias`]; the Heisenberg backend starts with
//! `w = z`.

mod laurent;
mod matrix;
mod word;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use laurent::{laurent_equal, LaurentClass, Modulus};
pub use matrix::IntMatrix;
pub use word::{Letter, Word};

use crate::error::{Error, Result};

/// Number of conjugates `t^i a t^-i` (resp. `a^{x^i}`) checked when the
/// defining relations of the lamplighter (resp. metabelian) backend are
/// tested on a homomorphism.
pub const LAMPLIGHTER_RELATION_WINDOW: i64 = 4;
pub const METABELIAN_RELATION_WINDOW: i64 = 6;

/// Description of a concrete group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    /// `ℤʳ`, optionally times finite cyclic factors `ℤ_{n}` (each `n ≥ 2`).
    FreeAbelian { rank: usize, torsion: Vec<BigInt> },
    /// `ℤʳ ⋊ ⟨h⟩` where conjugation by `h` acts through a unimodular matrix.
    Semidirect { matrix: IntMatrix },
    Heisenberg,
    Lamplighter { modulus: BigInt },
    /// `⟨a, x | [a, a^{xⁱ}], a^{f(x)}⟩`, coefficients of `f` highest degree
    /// first.
    Metabelian { f: Vec<BigInt> },
}

impl GroupSpec {
    pub fn free_abelian(rank: usize) -> Self {
        GroupSpec::FreeAbelian { rank, torsion: Vec::new() }
    }

    pub fn semidirect(rows: &[&[i64]]) -> Result<Self> {
        Ok(GroupSpec::Semidirect { matrix: IntMatrix::from_i64(rows)? })
    }

    pub fn lamplighter(modulus: i64) -> Self {
        GroupSpec::Lamplighter { modulus: modulus.into() }
    }

    pub fn metabelian(f: &[i64]) -> Self {
        GroupSpec::Metabelian { f: f.iter().map(|&c| c.into()).collect() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GroupSpec::FreeAbelian { .. } => "free_abelian",
            GroupSpec::Semidirect { .. } => "semidirect",
            GroupSpec::Heisenberg => "heisenberg",
            GroupSpec::Lamplighter { .. } => "lamplighter",
            GroupSpec::Metabelian { .. } => "metabelian",
        }
    }

    /// `Some(r)` when the group is exactly `ℤʳ`.
    pub fn abelian_rank(&self) -> Option<usize> {
        match self {
            GroupSpec::FreeAbelian { rank, torsion } if torsion.is_empty() => Some(*rank),
            _ => None,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[BigInt]| {
            let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("[{}]", items.join(","))
        };
        match self {
            GroupSpec::FreeAbelian { rank, torsion } if torsion.is_empty() => {
                write!(f, "group kind=free_abelian rank={rank}")
            }
            GroupSpec::FreeAbelian { rank, torsion } => {
                write!(f, "group kind=free_abelian rank={rank} torsion={}", list(torsion))
            }
            GroupSpec::Semidirect { matrix } => {
                write!(f, "group kind=semidirect rank={} matrix={matrix}", matrix.dim())
            }
            GroupSpec::Heisenberg => f.write_str("group kind=heisenberg"),
            GroupSpec::Lamplighter { modulus } => write!(f, "group kind=lamplighter mod={modulus}"),
            GroupSpec::Metabelian { f: coeffs } => {
                write!(f, "group kind=metabelian f={}", list(coeffs))
            }
        }
    }
}

/// Normal form of an element of one of the backends.
///
/// Equality is semantic: for the metabelian backend it is the divisibility
/// predicate on the `LaurentClass`, for the others it is field equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupElement {
    Abelian(Vec<BigInt>),
    /// `v·hᵏ`
    Semidirect { v: Vec<BigInt>, k: BigInt },
    /// Unitriangular matrix with superdiagonal `α, β` and corner `γ`.
    Heisenberg { alpha: BigInt, beta: BigInt, gamma: BigInt },
    /// Finitely supported configuration (no zero residues stored) times `tᵏ`.
    Lamplighter { support: BTreeMap<BigInt, BigInt>, k: BigInt },
    /// `xᵏ·a^{m}`
    Metabelian { k: BigInt, m: LaurentClass },
}

/// Total order compatible with group equality, used for deduplication and
/// deterministic output.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ElementKey {
    Ints(Vec<BigInt>),
    Lamp(BigInt, Vec<(BigInt, BigInt)>),
    Meta(BigInt, Vec<BigRational>),
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vec = |f: &mut fmt::Formatter<'_>, v: &[BigInt]| -> fmt::Result {
            f.write_str("(")?;
            for (i, x) in v.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        };
        match self {
            GroupElement::Abelian(v) => vec(f, v),
            GroupElement::Semidirect { v, k } => {
                vec(f, v)?;
                write!(f, "·h^{k}")
            }
            GroupElement::Heisenberg { alpha, beta, gamma } => {
                write!(f, "({alpha},{beta},{gamma})")
            }
            GroupElement::Lamplighter { support, k } => {
                f.write_str("{")?;
                for (i, (pos, val)) in support.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{pos}:{val}")?;
                }
                write!(f, "}}·t^{k}")
            }
            GroupElement::Metabelian { k, m } => write!(f, "x^{k}·a^({m})"),
        }
    }
}

/// A validated group together with its generator aliases.
#[derive(Debug, Clone)]
pub struct Group {
    spec: GroupSpec,
    backend: Backend,
    aliases: BTreeMap<String, GroupElement>,
}

#[derive(Debug, Clone)]
enum Backend {
    Abelian { rank: usize, torsion: Vec<BigInt> },
    Semidirect { matrix: IntMatrix, inverse: IntMatrix },
    Heisenberg,
    Lamplighter { modulus: BigInt },
    Metabelian { modulus: Modulus },
}

fn bigint_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Group> {
        let backend = match &spec {
            GroupSpec::FreeAbelian { rank, torsion } => {
                if *rank == 0 && torsion.is_empty() {
                    return Err(Error::InvalidSpec("rank must be positive".into()));
                }
                if let Some(n) = torsion.iter().find(|n| **n < BigInt::from(2)) {
                    return Err(Error::InvalidSpec(format!("torsion order {n} must be ≥ 2")));
                }
                Backend::Abelian { rank: *rank, torsion: torsion.clone() }
            }
            GroupSpec::Semidirect { matrix } => {
                let inverse = matrix.unimodular_inverse()?;
                Backend::Semidirect { matrix: matrix.clone(), inverse }
            }
            GroupSpec::Heisenberg => Backend::Heisenberg,
            GroupSpec::Lamplighter { modulus } => {
                if *modulus < BigInt::from(2) {
                    return Err(Error::InvalidSpec("lamplighter modulus must be ≥ 2".into()));
                }
                Backend::Lamplighter { modulus: modulus.clone() }
            }
            GroupSpec::Metabelian { f } => {
                if f.len() < 2 {
                    return Err(Error::InvalidSpec("f must have degree ≥ 1".into()));
                }
                if f[0].is_zero() || f[f.len() - 1].is_zero() {
                    return Err(Error::InvalidSpec(
                        "leading and constant coefficients of f must be nonzero".into(),
                    ));
                }
                let content = f.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
                if !content.is_one() {
                    return Err(Error::InvalidSpec(format!(
                        "f must be primitive (content is {content})"
                    )));
                }
                Backend::Metabelian { modulus: f.clone().into() }
            }
        };
        let mut group = Group { spec, backend, aliases: BTreeMap::new() };
        if matches!(group.spec, GroupSpec::Heisenberg) {
            let z = group.generator("z")?;
            group.aliases.insert("w".into(), z);
        }
        Ok(group)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Binds `name` to `element`; aliases shadow nothing in the base
    /// alphabet.
    pub fn set_alias(&mut self, name: &str, element: GroupElement) -> Result<()> {
        if self.base_generators().iter().any(|g| g == name) {
            return Err(Error::InvalidParameter(format!(
                "`{name}` is a base generator and cannot be aliased"
            )));
        }
        self.check(&element)?;
        self.aliases.insert(name.into(), element);
        Ok(())
    }

    pub fn aliases(&self) -> &BTreeMap<String, GroupElement> {
        &self.aliases
    }

    /// The fixed generator alphabet of the backend.
    pub fn base_generators(&self) -> Vec<String> {
        match &self.backend {
            Backend::Abelian { rank, torsion } => (1..=*rank)
                .map(|i| format!("e{i}"))
                .chain((1..=torsion.len()).map(|i| format!("c{i}")))
                .collect(),
            Backend::Semidirect { matrix, .. } => (1..=matrix.dim())
                .map(|i| format!("e{i}"))
                .chain(core::iter::once("h".into()))
                .collect(),
            Backend::Heisenberg => vec!["g".into(), "f".into(), "z".into()],
            Backend::Lamplighter { .. } => vec!["a".into(), "t".into()],
            Backend::Metabelian { .. } => vec!["a".into(), "x".into()],
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.backend {
            Backend::Abelian { rank, torsion } => {
                GroupElement::Abelian(vec![BigInt::zero(); rank + torsion.len()])
            }
            Backend::Semidirect { matrix, .. } => GroupElement::Semidirect {
                v: vec![BigInt::zero(); matrix.dim()],
                k: BigInt::zero(),
            },
            Backend::Heisenberg => GroupElement::Heisenberg {
                alpha: BigInt::zero(),
                beta: BigInt::zero(),
                gamma: BigInt::zero(),
            },
            Backend::Lamplighter { .. } => {
                GroupElement::Lamplighter { support: BTreeMap::new(), k: BigInt::zero() }
            }
            Backend::Metabelian { modulus } => {
                GroupElement::Metabelian { k: BigInt::zero(), m: LaurentClass::zero(modulus.clone()) }
            }
        }
    }

    /// Checks that `g` is a well-formed element of this group.
    pub fn check(&self, g: &GroupElement) -> Result<()> {
        let ok = match (&self.backend, g) {
            (Backend::Abelian { rank, torsion }, GroupElement::Abelian(v)) => {
                v.len() == rank + torsion.len()
                    && torsion
                        .iter()
                        .zip(&v[*rank..])
                        .all(|(n, x)| !x.is_negative() && x < n)
            }
            (Backend::Semidirect { matrix, .. }, GroupElement::Semidirect { v, .. }) => {
                v.len() == matrix.dim()
            }
            (Backend::Heisenberg, GroupElement::Heisenberg { .. }) => true,
            (Backend::Lamplighter { modulus }, GroupElement::Lamplighter { support, .. }) => {
                support.values().all(|x| x.is_positive() && x < modulus)
            }
            (Backend::Metabelian { modulus }, GroupElement::Metabelian { m, .. }) => {
                m.modulus() == modulus
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.check(g).is_ok()
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        self.mul_unchecked(a, b)
    }

    fn mul_unchecked(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        Ok(match (&self.backend, a, b) {
            (Backend::Abelian { rank, torsion }, GroupElement::Abelian(x), GroupElement::Abelian(y)) => {
                let mut v: Vec<BigInt> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                reduce_torsion(&mut v[*rank..], torsion);
                GroupElement::Abelian(v)
            }
            (
                Backend::Semidirect { .. },
                GroupElement::Semidirect { v, k },
                GroupElement::Semidirect { v: v2, k: k2 },
            ) => {
                // (v hᵏ)(v' hᵏ') = (v + hᵏ v' h⁻ᵏ) hᵏ⁺ᵏ' and hᵏ v' h⁻ᵏ = M⁻ᵏ v'
                let moved = self.act(&(-k), v2);
                GroupElement::Semidirect {
                    v: v.iter().zip(moved).map(|(p, q)| p + q).collect(),
                    k: k + k2,
                }
            }
            (
                Backend::Heisenberg,
                GroupElement::Heisenberg { alpha, beta, gamma },
                GroupElement::Heisenberg { alpha: a2, beta: b2, gamma: g2 },
            ) => GroupElement::Heisenberg {
                alpha: alpha + a2,
                beta: beta + b2,
                gamma: gamma + g2 + alpha * b2,
            },
            (
                Backend::Lamplighter { modulus },
                GroupElement::Lamplighter { support, k },
                GroupElement::Lamplighter { support: s2, k: k2 },
            ) => {
                let mut out = support.clone();
                for (pos, val) in s2 {
                    add_lamp(&mut out, pos + k, val, modulus);
                }
                GroupElement::Lamplighter { support: out, k: k + k2 }
            }
            (
                Backend::Metabelian { .. },
                GroupElement::Metabelian { k, m },
                GroupElement::Metabelian { k: k2, m: m2 },
            ) => {
                // xᵏ a^m xᵏ' a^m' = xᵏ⁺ᵏ' a^{xᵏ'·m + m'}
                GroupElement::Metabelian { k: k + k2, m: m.shift(k2)?.add(m2) }
            }
            _ => return Err(Error::SpecMismatch),
        })
    }

    /// `M^e v` in the semidirect backend (negative `e` uses the inverse).
    fn act(&self, e: &BigInt, v: &[BigInt]) -> Vec<BigInt> {
        let Backend::Semidirect { matrix, inverse } = &self.backend else {
            unreachable!("act is only used by the semidirect backend");
        };
        if e.is_zero() {
            return v.to_vec();
        }
        let base = if e.is_negative() { inverse } else { matrix };
        base.pow(&e.abs()).mul_vec(v)
    }

    pub fn inv(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(match (&self.backend, g) {
            (Backend::Abelian { rank, torsion }, GroupElement::Abelian(v)) => {
                let mut out: Vec<BigInt> = v.iter().map(|x| -x).collect();
                reduce_torsion(&mut out[*rank..], torsion);
                GroupElement::Abelian(out)
            }
            (Backend::Semidirect { .. }, GroupElement::Semidirect { v, k }) => {
                let moved = self.act(k, v);
                GroupElement::Semidirect { v: moved.into_iter().map(|x| -x).collect(), k: -k }
            }
            (Backend::Heisenberg, GroupElement::Heisenberg { alpha, beta, gamma }) => {
                GroupElement::Heisenberg {
                    alpha: -alpha,
                    beta: -beta,
                    gamma: alpha * beta - gamma,
                }
            }
            (Backend::Lamplighter { modulus }, GroupElement::Lamplighter { support, k }) => {
                let mut out = BTreeMap::new();
                for (pos, val) in support {
                    add_lamp(&mut out, pos - k, &-val, modulus);
                }
                GroupElement::Lamplighter { support: out, k: -k }
            }
            (Backend::Metabelian { .. }, GroupElement::Metabelian { k, m }) => {
                GroupElement::Metabelian { k: -k, m: m.shift(&-k)?.neg() }
            }
            _ => return Err(Error::SpecMismatch),
        })
    }

    /// `gⁿ` by repeated squaring.
    pub fn pow(&self, g: &GroupElement, n: &BigInt) -> Result<GroupElement> {
        self.check(g)?;
        let mut base = if n.is_negative() { self.inv(g)? } else { g.clone() };
        let mag = n.magnitude();
        let bits = mag.bits();
        let mut acc = self.identity();
        for i in 0..bits {
            if mag.bit(i) {
                acc = self.mul_unchecked(&acc, &base)?;
            }
            if i + 1 < bits {
                base = self.mul_unchecked(&base, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn pow_i64(&self, g: &GroupElement, n: i64) -> Result<GroupElement> {
        self.pow(g, &BigInt::from(n))
    }

    /// Product of a sequence of elements.
    pub fn product<'a, I>(&self, items: I) -> Result<GroupElement>
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        let mut acc = self.identity();
        for g in items {
            acc = self.mul(&acc, g)?;
        }
        Ok(acc)
    }

    /// `g^h = h⁻¹ g h`
    pub fn conj(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        let hi = self.inv(h)?;
        self.mul(&self.mul(&hi, g)?, h)
    }

    /// `[g, h] = g⁻¹ h⁻¹ g h`
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        let gi = self.inv(g)?;
        let hi = self.inv(h)?;
        self.product([&gi, &hi, g, h])
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }

    pub fn equal(&self, a: &GroupElement, b: &GroupElement) -> bool {
        a == b
    }

    /// Element denoted by a generator or alias name.
    pub fn generator(&self, name: &str) -> Result<GroupElement> {
        if let Some(g) = self.aliases.get(name) {
            return Ok(g.clone());
        }
        let unknown = || Error::UnknownGenerator(name.into());
        let one = BigInt::one;
        let zero = BigInt::zero;
        Ok(match &self.backend {
            Backend::Abelian { rank, torsion } => {
                let n = rank + torsion.len();
                let idx = if let Some(i) = name.strip_prefix('e').and_then(|s| s.parse::<usize>().ok()) {
                    (1..=*rank).contains(&i).then(|| i - 1)
                } else if let Some(i) = name.strip_prefix('c').and_then(|s| s.parse::<usize>().ok()) {
                    (1..=torsion.len()).contains(&i).then(|| rank + i - 1)
                } else {
                    None
                }
                .ok_or_else(unknown)?;
                let mut v = vec![zero(); n];
                v[idx] = one();
                GroupElement::Abelian(v)
            }
            Backend::Semidirect { matrix, .. } => {
                let r = matrix.dim();
                if name == "h" {
                    GroupElement::Semidirect { v: vec![zero(); r], k: one() }
                } else {
                    let i = name
                        .strip_prefix('e')
                        .and_then(|s| s.parse::<usize>().ok())
                        .filter(|i| (1..=r).contains(i))
                        .ok_or_else(unknown)?;
                    let mut v = vec![zero(); r];
                    v[i - 1] = one();
                    GroupElement::Semidirect { v, k: zero() }
                }
            }
            Backend::Heisenberg => {
                let (alpha, beta, gamma) = match name {
                    "g" => (one(), zero(), zero()),
                    "f" => (zero(), one(), zero()),
                    "z" => (zero(), zero(), one()),
                    _ => return Err(unknown()),
                };
                GroupElement::Heisenberg { alpha, beta, gamma }
            }
            Backend::Lamplighter { .. } => match name {
                "a" => GroupElement::Lamplighter {
                    support: BTreeMap::from([(zero(), one())]),
                    k: zero(),
                },
                "t" => GroupElement::Lamplighter { support: BTreeMap::new(), k: one() },
                _ => return Err(unknown()),
            },
            Backend::Metabelian { modulus } => match name {
                "a" => GroupElement::Metabelian {
                    k: zero(),
                    m: LaurentClass::monomial(modulus.clone(), one(), 0),
                },
                "x" => GroupElement::Metabelian { k: one(), m: LaurentClass::zero(modulus.clone()) },
                _ => return Err(unknown()),
            },
        })
    }

    /// Left-to-right product of generator powers.
    pub fn eval_word(&self, word: &Word) -> Result<GroupElement> {
        let mut acc = self.identity();
        for letter in word.letters() {
            let g = self.generator(&letter.name)?;
            let p = self.pow(&g, &letter.exp)?;
            acc = self.mul_unchecked(&acc, &p)?;
        }
        Ok(acc)
    }

    /// A word in the base alphabet evaluating to `g`.
    pub fn normal_word(&self, g: &GroupElement) -> Result<Word> {
        self.check(g)?;
        let mut w = Word::empty();
        match g {
            GroupElement::Abelian(v) => {
                for (name, x) in self.base_generators().iter().zip(v) {
                    w.push(name, x.clone());
                }
            }
            GroupElement::Semidirect { v, k } => {
                for (i, x) in v.iter().enumerate() {
                    w.push(&format!("e{}", i + 1), x.clone());
                }
                w.push("h", k.clone());
            }
            GroupElement::Heisenberg { alpha, beta, gamma } => {
                w.push("g", alpha.clone());
                w.push("f", beta.clone());
                w.push("z", gamma - alpha * beta);
            }
            GroupElement::Lamplighter { support, k } => {
                for (pos, val) in support {
                    w.push("t", pos.clone());
                    w.push("a", val.clone());
                    w.push("t", -pos);
                }
                w.push("t", k.clone());
            }
            GroupElement::Metabelian { k, m } => {
                w.push("x", k.clone());
                for (e, c) in m.terms() {
                    w.push("x", BigInt::from(-e));
                    w.push("a", c.clone());
                    w.push("x", BigInt::from(e));
                }
            }
        }
        Ok(w)
    }

    /// Ordering key: equal elements have equal keys.
    pub fn key(&self, g: &GroupElement) -> ElementKey {
        match g {
            GroupElement::Abelian(v) => ElementKey::Ints(v.clone()),
            GroupElement::Semidirect { v, k } => {
                let mut out = v.clone();
                out.push(k.clone());
                ElementKey::Ints(out)
            }
            GroupElement::Heisenberg { alpha, beta, gamma } => {
                ElementKey::Ints(vec![alpha.clone(), beta.clone(), gamma.clone()])
            }
            GroupElement::Lamplighter { support, k } => ElementKey::Lamp(
                k.clone(),
                support.iter().map(|(p, v)| (p.clone(), v.clone())).collect(),
            ),
            GroupElement::Metabelian { k, m } => ElementKey::Meta(k.clone(), m.rational_coordinates()),
        }
    }

    /// Words that must evaluate to the identity in any quotient: the
    /// defining relations of the backend (for the infinitely presented
    /// backends, the relations up to the documented window).
    pub fn relations(&self) -> Vec<Word> {
        let comm = |u: &Word, v: &Word| u.inverse().concat(&v.inverse()).concat(u).concat(v);
        let mut rels = Vec::new();
        match &self.backend {
            Backend::Abelian { torsion, .. } => {
                let gens = self.base_generators();
                for i in 0..gens.len() {
                    for j in i + 1..gens.len() {
                        rels.push(comm(&Word::gen(&gens[i]), &Word::gen(&gens[j])));
                    }
                }
                for (i, n) in torsion.iter().enumerate() {
                    rels.push(Word::power(&format!("c{}", i + 1), n.clone()));
                }
            }
            Backend::Semidirect { matrix, .. } => {
                let r = matrix.dim();
                for i in 1..=r {
                    for j in i + 1..=r {
                        rels.push(comm(&Word::gen(&format!("e{i}")), &Word::gen(&format!("e{j}"))));
                    }
                }
                for j in 0..r {
                    // h⁻¹ e_j h = M e_j = Σ_i M[i][j] e_i
                    let mut image = Word::empty();
                    for i in 0..r {
                        image.push(&format!("e{}", i + 1), matrix.entry(i, j).clone());
                    }
                    let lhs = Word::from_pairs([("h", -1), (format!("e{}", j + 1).as_str(), 1), ("h", 1)]);
                    rels.push(lhs.concat(&image.inverse()));
                }
            }
            Backend::Heisenberg => {
                let (g, f, z) = (Word::gen("g"), Word::gen("f"), Word::gen("z"));
                rels.push(comm(&g, &z));
                rels.push(comm(&f, &z));
                rels.push(comm(&g, &f).concat(&z.inverse()));
            }
            Backend::Lamplighter { modulus } => {
                rels.push(Word::power("a", modulus.clone()));
                let a = Word::gen("a");
                for i in 1..=LAMPLIGHTER_RELATION_WINDOW {
                    let conj = Word::from_pairs([("t", i), ("a", 1), ("t", -i)]);
                    rels.push(comm(&a, &conj));
                }
            }
            Backend::Metabelian { modulus } => {
                let a = Word::gen("a");
                for i in 1..=METABELIAN_RELATION_WINDOW {
                    let conj = Word::from_pairs([("x", -i), ("a", 1), ("x", i)]);
                    rels.push(comm(&a, &conj));
                }
                rels.push(self.f_relation(modulus));
            }
        }
        rels
    }

    /// `a^{f(x)} = (a^{xᵐ})^{q₀} (a^{xᵐ⁻¹})^{q₁} … a^{q_m}`.
    fn f_relation(&self, f: &[BigInt]) -> Word {
        let m = (f.len() - 1) as i64;
        let mut w = Word::empty();
        for (i, q) in f.iter().enumerate() {
            let e = m - i as i64;
            w.push("x", BigInt::from(-e));
            w.push("a", q.clone());
            w.push("x", BigInt::from(e));
        }
        w
    }

    /// The subgroup `A ≅ ℤʳ` of the semidirect backend, as a membership test.
    pub fn in_base_subgroup(&self, g: &GroupElement) -> bool {
        match g {
            GroupElement::Semidirect { k, .. } => k.is_zero(),
            GroupElement::Lamplighter { k, .. } | GroupElement::Metabelian { k, .. } => k.is_zero(),
            GroupElement::Heisenberg { alpha, .. } => alpha.is_zero(),
            GroupElement::Abelian(_) => true,
        }
    }
}

fn reduce_torsion(v: &mut [BigInt], torsion: &[BigInt]) {
    for (x, n) in v.iter_mut().zip(torsion) {
        *x = x.mod_floor(n);
    }
}

fn add_lamp(support: &mut BTreeMap<BigInt, BigInt>, pos: BigInt, val: &BigInt, modulus: &BigInt) {
    let cur = support.remove(&pos).unwrap_or_default();
    let next = (cur + val).mod_floor(modulus);
    if !next.is_zero() {
        support.insert(pos, next);
    }
}

/// Neutral element of the group described by `spec`.
pub fn identity(spec: &GroupSpec) -> Result<GroupElement> {
    Ok(Group::new(spec.clone())?.identity())
}

impl GroupElement {
    pub fn abelian(v: &[i64]) -> Self {
        GroupElement::Abelian(bigint_vec(v))
    }

    pub fn heisenberg(alpha: i64, beta: i64, gamma: i64) -> Self {
        GroupElement::Heisenberg { alpha: alpha.into(), beta: beta.into(), gamma: gamma.into() }
    }

    pub fn semidirect(v: &[i64], k: i64) -> Self {
        GroupElement::Semidirect { v: bigint_vec(v), k: k.into() }
    }

    pub fn lamplighter(support: &[(i64, i64)], k: i64) -> Self {
        GroupElement::Lamplighter {
            support: support
                .iter()
                .filter(|(_, v)| *v != 0)
                .map(|&(p, v)| (BigInt::from(p), BigInt::from(v)))
                .collect(),
            k: k.into(),
        }
    }

    /// Coordinates of an element of `ℤʳ`.
    pub fn as_abelian(&self) -> Option<&[BigInt]> {
        match self {
            GroupElement::Abelian(v) => Some(v),
            _ => None,
        }
    }
}
