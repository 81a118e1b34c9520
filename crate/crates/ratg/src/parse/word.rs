use ratg_core::groups::Word;

use super::{Cursor, ParseError};

/// Parses a whitespace separated word such as `e1^2 h^-1 e2`; `ε` or `1`
/// denotes the empty word.
pub fn parse_word(input: &str) -> Result<Word, ParseError> {
    let mut c = Cursor::new(input);
    if c.eat("ε") {
        c.finish()?;
        return Ok(Word::empty());
    }
    if c.rest().trim() == "1" {
        return Ok(Word::empty());
    }
    let w = letters(&mut c)?;
    if w.is_none() {
        return Err(c.error("expected a word"));
    }
    c.finish()?;
    Ok(w.unwrap_or_default())
}

/// Consumes a maximal run of `name` / `name^exp` tokens. Returns `None` when
/// the input does not start with a name.
pub(crate) fn letters(c: &mut Cursor<'_>) -> Result<Option<Word>, ParseError> {
    let mut word = Word::empty();
    let mut any = false;
    while c.starts_ident() {
        let name = c.ident()?;
        let exp = if c.peek() == Some('^') {
            c.bump();
            c.integer()?
        } else {
            1.into()
        };
        word.push(name, exp);
        any = true;
    }
    Ok(any.then_some(word))
}
