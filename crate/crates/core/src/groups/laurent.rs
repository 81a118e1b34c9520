//! The module `ℤ[x, 1/x] / (f)`.
//!
//! A class is stored through any Laurent polynomial representing it. Equality
//! is the divisibility predicate: `p ≡ q` iff `xˢ(p − q)` is divisible by `f`
//! in `ℤ[x]`, where `s` clears the negative exponents. Because `f` is
//! primitive the quotient of an exact division over `ℚ` is integral, so the
//! long division below can run over the integers.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficients `(q₀, …, q_m)` of `f = q₀xᵐ + … + q_m`, highest degree first.
pub type Modulus = Arc<[BigInt]>;

#[derive(Debug, Clone)]
pub struct LaurentClass {
    terms: BTreeMap<i64, BigInt>,
    modulus: Modulus,
}

impl LaurentClass {
    pub fn zero(modulus: Modulus) -> Self {
        LaurentClass { terms: BTreeMap::new(), modulus }
    }

    /// The class of `c·xᵉ`.
    pub fn monomial(modulus: Modulus, coeff: BigInt, exp: i64) -> Self {
        let mut class = LaurentClass::zero(modulus);
        class.add_term(exp, coeff);
        class
    }

    pub fn from_terms<I>(modulus: Modulus, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigInt)>,
    {
        let mut class = LaurentClass::zero(modulus);
        for (e, c) in terms {
            class.add_term(e, c);
        }
        class
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// Nonzero terms of the stored representative, by increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero_poly(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &LaurentClass) -> LaurentClass {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentClass {
        LaurentClass {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            modulus: self.modulus.clone(),
        }
    }

    pub fn sub(&self, other: &LaurentClass) -> LaurentClass {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> LaurentClass {
        if k.is_zero() {
            return LaurentClass::zero(self.modulus.clone());
        }
        LaurentClass {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
            modulus: self.modulus.clone(),
        }
    }

    /// Multiplication by `xᵏ`, the action of conjugation by `x^{±k}`.
    pub fn shift(&self, k: &BigInt) -> Result<LaurentClass> {
        let k = i64::try_from(k).map_err(|_| Error::ExponentOverflow)?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let ne = e.checked_add(k).ok_or(Error::ExponentOverflow)?;
            terms.insert(ne, c.clone());
        }
        Ok(LaurentClass { terms, modulus: self.modulus.clone() })
    }

    /// `xˢ·p` as a dense coefficient vector (lowest degree first) with `s`
    /// chosen so the lowest exponent becomes zero.
    fn cleared(&self) -> Vec<BigInt> {
        let Some((&lo, _)) = self.terms.iter().next() else {
            return Vec::new();
        };
        let (&hi, _) = self.terms.iter().next_back().unwrap();
        let span = (hi - lo) as usize;
        let mut dense = vec![BigInt::zero(); span + 1];
        for (e, c) in &self.terms {
            dense[(e - lo) as usize] = c.clone();
        }
        dense
    }

    /// Canonical coordinates of the class in `ℚ[x]/(f)` (the remainder of
    /// the class modulo `f`, degree below `m`). Equal classes have equal
    /// coordinates; this is used as an ordering key, not as the definition of
    /// equality.
    pub fn rational_coordinates(&self) -> Vec<BigRational> {
        let reducer = Reducer::new(&self.modulus);
        let mut acc = vec![BigRational::zero(); reducer.degree];
        for (e, c) in &self.terms {
            let xe = reducer.pow_x(*e);
            let c = BigRational::from_integer(c.clone());
            for (a, b) in acc.iter_mut().zip(xe) {
                *a += &c * b;
            }
        }
        acc
    }
}

/// `true` iff `p` and `q` represent the same class.
pub fn laurent_equal(p: &LaurentClass, q: &LaurentClass) -> bool {
    debug_assert_eq!(p.modulus, q.modulus);
    let diff = p.sub(q);
    divisible_by(&diff.cleared(), &p.modulus)
}

/// Exact divisibility of `poly` (lowest degree first) by `f` (highest degree
/// first) in `ℤ[x]`.
fn divisible_by(poly: &[BigInt], f: &[BigInt]) -> bool {
    let mut rem: Vec<BigInt> = poly.to_vec();
    while rem.last().is_some_and(|c| c.is_zero()) {
        rem.pop();
    }
    let m = f.len() - 1;
    let lead = &f[0];
    while !rem.is_empty() {
        let deg = rem.len() - 1;
        if deg < m {
            return false;
        }
        let top = rem[deg].clone();
        let (quot, r) = top.div_rem(lead);
        if !r.is_zero() {
            return false;
        }
        // rem -= quot · x^{deg-m} · f
        for (i, q) in f.iter().enumerate() {
            let idx = deg - i;
            rem[idx] -= &quot * q;
        }
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
    }
    true
}

impl PartialEq for LaurentClass {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && laurent_equal(self, other)
    }
}

impl Eq for LaurentClass {}

/// Arithmetic in `ℚ[x]/(f)` on dense residues of length `m`.
struct Reducer {
    degree: usize,
    /// `xᵐ ≡ Σ tail[i]·xⁱ`
    tail: Vec<BigRational>,
    /// `x⁻¹ ≡ Σ inv_x[i]·xⁱ`
    inv_x: Vec<BigRational>,
}

impl Reducer {
    fn new(f: &[BigInt]) -> Self {
        let m = f.len() - 1;
        let lead = BigRational::from_integer(f[0].clone());
        // f = q0 x^m + q1 x^{m-1} + ... + qm ; coefficient of x^i is f[m - i]
        let tail = (0..m)
            .map(|i| -BigRational::from_integer(f[m - i].clone()) / &lead)
            .collect();
        // x (q0 x^{m-1} + ... + q_{m-1}) = f - qm  ⇒  x⁻¹ ≡ -(q0 x^{m-1} + … + q_{m-1}) / qm
        let qm = BigRational::from_integer(f[m].clone());
        let inv_x = (0..m)
            .map(|i| -BigRational::from_integer(f[m - 1 - i].clone()) / &qm)
            .collect();
        Reducer { degree: m, tail, inv_x }
    }

    fn one(&self) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree];
        if self.degree > 0 {
            v[0] = BigRational::one();
        }
        v
    }

    fn x(&self) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree];
        if self.degree == 1 {
            v[0] = self.tail[0].clone();
        } else {
            v[1] = BigRational::one();
        }
        v
    }

    fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let m = self.degree;
        let mut prod = vec![BigRational::zero(); 2 * m];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for d in (m..2 * m).rev() {
            let c = core::mem::replace(&mut prod[d], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for (i, t) in self.tail.iter().enumerate() {
                prod[d - m + i] += &c * t;
            }
        }
        prod.truncate(m);
        prod
    }

    fn pow_x(&self, e: i64) -> Vec<BigRational> {
        let mut base = if e >= 0 { self.x() } else { self.inv_x.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

impl fmt::Display for LaurentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mag = c.abs();
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{mag}x")?,
                (e, true) => write!(f, "x^{e}")?,
                (e, false) => write!(f, "{mag}x^{e}")?,
            }
        }
        Ok(())
    }
}
