use alloc::collections::BTreeMap;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer-valued variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Linear term `Σ aᵢxᵢ + c`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Term {
    coeffs: BTreeMap<Var, BigInt>,
    constant: BigInt,
}

impl Term {
    pub fn constant(c: impl Into<BigInt>) -> Term {
        Term { coeffs: BTreeMap::new(), constant: c.into() }
    }

    pub fn var(v: Var) -> Term {
        Term::monomial(v, BigInt::one())
    }

    pub fn monomial(v: Var, a: impl Into<BigInt>) -> Term {
        let mut t = Term::default();
        t.add_coeff(v, &a.into());
        t
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (Var, &BigInt)> {
        self.coeffs.iter().map(|(v, a)| (*v, a))
    }

    pub fn coeff(&self, v: Var) -> BigInt {
        self.coeffs.get(&v).cloned().unwrap_or_default()
    }

    pub fn constant_part(&self) -> &BigInt {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.coeffs.contains_key(&v)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.coeffs.keys().copied()
    }

    fn add_coeff(&mut self, v: Var, a: &BigInt) {
        let entry = self.coeffs.entry(v).or_default();
        *entry += a;
        if entry.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn add(&self, other: &Term) -> Term {
        let mut t = self.clone();
        for (v, a) in &other.coeffs {
            t.add_coeff(*v, a);
        }
        t.constant += &other.constant;
        t
    }

    pub fn sub(&self, other: &Term) -> Term {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Term {
        self.scale(&-BigInt::one())
    }

    pub fn scale(&self, k: &BigInt) -> Term {
        if k.is_zero() {
            return Term::default();
        }
        Term {
            coeffs: self.coeffs.iter().map(|(v, a)| (*v, a * k)).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn add_constant(&self, c: &BigInt) -> Term {
        let mut t = self.clone();
        t.constant += c;
        t
    }

    /// The term with the `v` part removed.
    pub fn without(&self, v: Var) -> Term {
        let mut t = self.clone();
        t.coeffs.remove(&v);
        t
    }

    /// Replaces `v` by `value`.
    pub fn substitute(&self, v: Var, value: &Term) -> Term {
        match self.coeffs.get(&v) {
            None => self.clone(),
            Some(a) => self.without(v).add(&value.scale(a)),
        }
    }

    /// Renames `from` to `to`, which must not occur in the term.
    pub fn rename(&self, from: Var, to: Var) -> Term {
        match self.coeffs.get(&from) {
            None => self.clone(),
            Some(a) => {
                let mut t = self.without(from);
                t.add_coeff(to, a);
                t
            }
        }
    }

    /// Replaces the coefficient of `v` by `a`.
    pub fn with_coeff(&self, v: Var, a: &BigInt) -> Term {
        let mut t = self.without(v);
        t.add_coeff(v, a);
        t
    }

    /// Gcd of the variable coefficients (zero for a constant term).
    pub fn coeff_gcd(&self) -> BigInt {
        self.coeffs.values().fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    /// Exact division of every coefficient and the constant by `k`.
    pub(crate) fn div_exact(&self, k: &BigInt) -> Term {
        Term {
            coeffs: self.coeffs.iter().map(|(v, a)| (*v, a / k)).collect(),
            constant: &self.constant / k,
        }
    }

    /// Reduces coefficients and constant modulo `d`, dropping zeros.
    pub(crate) fn reduce_mod(&self, d: &BigInt) -> Term {
        let mut t = Term::constant(self.constant.mod_floor(d));
        for (v, a) in &self.coeffs {
            t.add_coeff(*v, &a.mod_floor(d));
        }
        t
    }

    pub(crate) fn with_constant(&self, c: BigInt) -> Term {
        Term { coeffs: self.coeffs.clone(), constant: c }
    }

    /// Value under an assignment; `None` when a variable is unassigned.
    pub fn eval<F>(&self, mut value: F) -> Option<BigInt>
    where
        F: FnMut(Var) -> Option<BigInt>,
    {
        let mut acc = self.constant.clone();
        for (v, a) in &self.coeffs {
            acc += a * value(*v)?;
        }
        Some(acc)
    }

    pub(crate) fn leading_sign_negative(&self) -> bool {
        self.coeffs.values().next().is_some_and(|a| a.is_negative())
    }
}

impl fmt::Display for Term {
    /// `2*x0 - x1 + 3`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, a) in &self.coeffs {
            let mag = a.abs();
            if first {
                if a.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if a.is_negative() { " - " } else { " + " })?;
            }
            if mag.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{mag}*{v}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant.is_zero() {
            Ok(())
        } else if self.constant.is_negative() {
            write!(f, " - {}", -&self.constant)
        } else {
            write!(f, " + {}", self.constant)
        }
    }
}
