use ratg_core::automata::RatExpr;
use ratg_core::groups::Word;

use super::word::letters;
use super::{Cursor, ParseError};

/// Parses a rational expression.
///
/// ```text
/// union   := concat ('|' concat)*
/// concat  := postfix ('.'? postfix)*
/// postfix := primary ('*' | '^' int)*
/// primary := '∅' | 'ε' | '1' | '(' union ')' | word
/// ```
///
/// A word is a maximal run of `name^exp` tokens and is one element of the
/// set, so `e1 e2*` is the star of the single element `e1 e2`. `(E)^k`
/// repeats `E` k times; a negative `k` repeats the inverse.
pub fn parse_expr(input: &str) -> Result<RatExpr, ParseError> {
    let mut c = Cursor::new(input);
    let e = union(&mut c)?;
    c.finish()?;
    Ok(e)
}

fn union(c: &mut Cursor<'_>) -> Result<RatExpr, ParseError> {
    let mut e = concat(c)?;
    while c.eat("|") {
        e = RatExpr::union(e, concat(c)?);
    }
    Ok(e)
}

fn starts_primary(c: &mut Cursor<'_>) -> bool {
    c.skip_ws();
    matches!(c.peek(), Some('(' | '∅' | 'ε' | '1')) || c.starts_ident()
}

fn concat(c: &mut Cursor<'_>) -> Result<RatExpr, ParseError> {
    let mut e = postfix(c)?;
    loop {
        if c.eat(".") || starts_primary(c) {
            e = RatExpr::concat(e, postfix(c)?);
        } else {
            return Ok(e);
        }
    }
}

fn postfix(c: &mut Cursor<'_>) -> Result<RatExpr, ParseError> {
    let mut e = primary(c)?;
    loop {
        if c.eat("*") {
            e = RatExpr::star(e);
        } else if c.eat("^") {
            let k = c.integer()?;
            let k: i64 = i64::try_from(&k).map_err(|_| c.error("repetition count out of range"))?;
            e = repeat(e, k).ok_or_else(|| c.error("repetition count too large"))?;
        } else {
            return Ok(e);
        }
    }
}

fn repeat(e: RatExpr, k: i64) -> Option<RatExpr> {
    if k.unsigned_abs() > 4096 {
        return None;
    }
    Some(match e {
        RatExpr::Singleton(w) => RatExpr::Singleton(w.pow(k)),
        other => {
            let base = if k < 0 { other.inverse() } else { other };
            RatExpr::concat_all((0..k.unsigned_abs()).map(|_| base.clone()))
        }
    })
}

fn primary(c: &mut Cursor<'_>) -> Result<RatExpr, ParseError> {
    c.skip_ws();
    if c.eat("∅") {
        return Ok(RatExpr::Empty);
    }
    if c.eat("ε") || c.eat("1") {
        return Ok(RatExpr::Singleton(Word::empty()));
    }
    if c.eat("(") {
        let e = union(c)?;
        c.expect(")")?;
        return Ok(e);
    }
    match letters(c)? {
        Some(w) => Ok(RatExpr::Singleton(w)),
        None => Err(c.error("expected a word, `(`, `ε` or `∅`")),
    }
}
