use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// One factor `name^exp` of a word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub name: String,
    pub exp: BigInt,
}

/// A product of generator powers, read left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(name: &str) -> Self {
        Word::power(name, BigInt::one())
    }

    pub fn power(name: &str, exp: impl Into<BigInt>) -> Self {
        let exp = exp.into();
        if exp.is_zero() {
            return Word::empty();
        }
        Word(alloc::vec![Letter { name: name.into(), exp }])
    }

    /// Builds a word from `(name, exp)` pairs, dropping zero exponents.
    pub fn from_pairs<'a, I, E>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, E)>,
        E: Into<BigInt>,
    {
        let mut w = Word::empty();
        for (name, exp) in pairs {
            w.push(name, exp.into());
        }
        w
    }

    /// Appends `name^exp`, merging with the last letter when the names agree.
    pub fn push(&mut self, name: &str, exp: BigInt) {
        if exp.is_zero() {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.name == name {
                last.exp += exp;
                if last.exp.is_zero() {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push(Letter { name: name.into(), exp });
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for l in &other.0 {
            w.push(&l.name, l.exp.clone());
        }
        w
    }

    /// Reversed word with negated exponents.
    pub fn inverse(&self) -> Word {
        let mut w = Word::empty();
        for l in self.0.iter().rev() {
            w.push(&l.name, -l.exp.clone());
        }
        w
    }

    /// `selfⁿ` for any integer `n`.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::empty();
        for _ in 0..n.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if l.exp.is_one() {
                f.write_str(&l.name)?;
            } else {
                write!(f, "{}^{}", l.name, l.exp)?;
            }
        }
        Ok(())
    }
}
