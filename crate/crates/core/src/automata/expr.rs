use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::groups::Word;

/// Rational expression over the words of a group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RatExpr {
    Empty,
    Singleton(Word),
    Union(Box<RatExpr>, Box<RatExpr>),
    Concat(Box<RatExpr>, Box<RatExpr>),
    Star(Box<RatExpr>),
}

impl RatExpr {
    pub fn word(w: Word) -> Self {
        RatExpr::Singleton(w)
    }

    pub fn union(a: RatExpr, b: RatExpr) -> Self {
        RatExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn concat(a: RatExpr, b: RatExpr) -> Self {
        RatExpr::Concat(Box::new(a), Box::new(b))
    }

    pub fn star(a: RatExpr) -> Self {
        RatExpr::Star(Box::new(a))
    }

    /// `{1}` as `∅*`.
    pub fn epsilon() -> Self {
        RatExpr::star(RatExpr::Empty)
    }

    /// Left-nested union of all items; `∅` when there are none.
    pub fn union_all<I: IntoIterator<Item = RatExpr>>(items: I) -> Self {
        items.into_iter().reduce(RatExpr::union).unwrap_or(RatExpr::Empty)
    }

    /// Left-nested product of all items; `{1}` when there are none.
    pub fn concat_all<I: IntoIterator<Item = RatExpr>>(items: I) -> Self {
        items.into_iter().reduce(RatExpr::concat).unwrap_or_else(RatExpr::epsilon)
    }

    /// Expression for the set of inverses.
    pub fn inverse(&self) -> RatExpr {
        match self {
            RatExpr::Empty => RatExpr::Empty,
            RatExpr::Singleton(w) => RatExpr::Singleton(w.inverse()),
            RatExpr::Union(a, b) => RatExpr::union(a.inverse(), b.inverse()),
            RatExpr::Concat(a, b) => RatExpr::concat(b.inverse(), a.inverse()),
            RatExpr::Star(a) => RatExpr::star(a.inverse()),
        }
    }

    pub fn nullable(&self) -> bool {
        match self {
            RatExpr::Empty | RatExpr::Singleton(_) => false,
            RatExpr::Union(a, b) => a.nullable() || b.nullable(),
            RatExpr::Concat(a, b) => a.nullable() && b.nullable(),
            RatExpr::Star(_) => true,
        }
    }

    /// Distinct singleton words, in order.
    pub fn words(&self) -> Vec<Word> {
        let mut out = Vec::new();
        self.collect_words(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_words(&self, out: &mut Vec<Word>) {
        match self {
            RatExpr::Empty => {}
            RatExpr::Singleton(w) => out.push(w.clone()),
            RatExpr::Union(a, b) | RatExpr::Concat(a, b) => {
                a.collect_words(out);
                b.collect_words(out);
            }
            RatExpr::Star(a) => a.collect_words(out),
        }
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn prec(e: &RatExpr) -> u8 {
            match e {
                RatExpr::Union(..) => 0,
                RatExpr::Concat(..) => 1,
                _ => 2,
            }
        }
        fn sub(f: &mut fmt::Formatter<'_>, e: &RatExpr, min: u8) -> fmt::Result {
            if prec(e) < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            RatExpr::Empty => f.write_str("∅"),
            RatExpr::Singleton(w) if w.letters().len() > 1 => write!(f, "({w})"),
            RatExpr::Singleton(w) => write!(f, "{w}"),
            RatExpr::Union(a, b) => {
                sub(f, a, 0)?;
                f.write_str(" | ")?;
                sub(f, b, 1)
            }
            RatExpr::Concat(a, b) => {
                sub(f, a, 1)?;
                f.write_str(" . ")?;
                sub(f, b, 2)
            }
            RatExpr::Star(a) => {
                sub(f, a, 2)?;
                f.write_str("*")
            }
        }
    }
}
