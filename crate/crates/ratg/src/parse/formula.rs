use num_bigint::BigInt;
use ratg_core::presburger::{Formula, Term, Var};

use super::{Cursor, ParseError};

/// A formula together with the source names of its variables: `names[i]`
/// is `Var(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedFormula {
    pub formula: Formula,
    pub names: Vec<String>,
}

/// Parses a Presburger formula.
///
/// ```text
/// formula := ('E' | 'A' | '∃' | '∀') name (','? name)* '.' formula
///          | disj ('->' formula)?
/// disj    := conj (('|' | '∨') conj)*
/// conj    := unary (('&' | '∧') unary)*
/// unary   := ('~' | '!' | '¬') unary | '(' formula ')' | 'true' | 'false'
///          | quantified formula | atom
/// atom    := term rel term (rel term)* | int '|' term
/// rel     := '<=' | '<' | '>=' | '>' | '=' | '!=' | '≤' | '≥' | '≠'
/// term    := ['-'] mono (('+' | '-') mono)*
/// mono    := int ['*'] [name] | name
/// ```
///
/// An integer literal directly followed by `|` in atom position is read as
/// divisibility, so `2 | x` means "2 divides x". Chained relations such as
/// `0 <= x < 5` are conjunctions. Variables are numbered in order of first
/// appearance; `E` and `A` are reserved.
pub fn parse_formula(input: &str) -> Result<ParsedFormula, ParseError> {
    let mut p = Parser { c: Cursor::new(input), names: Vec::new() };
    let formula = p.formula()?;
    p.c.finish()?;
    Ok(ParsedFormula { formula, names: p.names })
}

struct Parser<'a> {
    c: Cursor<'a>,
    names: Vec<String>,
}

const RESERVED: [&str; 4] = ["E", "A", "true", "false"];

impl Parser<'_> {
    fn var(&mut self, name: &str) -> Var {
        let i = self.names.iter().position(|n| n == name).unwrap_or_else(|| {
            self.names.push(name.to_string());
            self.names.len() - 1
        });
        Var(i as u32)
    }

    fn var_name(&mut self) -> Result<Var, ParseError> {
        let name = self.c.ident()?;
        if RESERVED.contains(&name) {
            return Err(self.c.error(format!("`{name}` is reserved")));
        }
        Ok(self.var(name))
    }

    /// Consumes a quantifier keyword when one starts here.
    fn quantifier(&mut self) -> Option<bool> {
        self.c.skip_ws();
        if self.c.eat("∃") {
            return Some(true);
        }
        if self.c.eat("∀") {
            return Some(false);
        }
        let save = self.c.pos;
        if let Ok(kw @ ("E" | "A")) = self.c.ident() {
            if self.c.starts_ident() {
                return Some(kw == "E");
            }
        }
        self.c.pos = save;
        None
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if let Some(exists) = self.quantifier() {
            let mut vars = vec![self.var_name()?];
            loop {
                if self.c.eat(".") {
                    break;
                }
                self.c.eat(",");
                vars.push(self.var_name()?);
            }
            let body = self.formula()?;
            return Ok(vars.into_iter().rev().fold(body, |acc, v| {
                if exists {
                    Formula::exists(v, acc)
                } else {
                    Formula::forall(v, acc)
                }
            }));
        }
        let lhs = self.disj()?;
        if self.c.eat("->") || self.c.eat("→") {
            return Ok(Formula::implies(lhs, self.formula()?));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.conj()?];
        while self.c.eat("|") || self.c.eat("∨") {
            items.push(self.conj()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap_or(Formula::False) } else { Formula::or(items) })
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.unary()?];
        while self.c.eat("&") || self.c.eat("∧") {
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap_or(Formula::True) } else { Formula::and(items) })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        self.c.skip_ws();
        if self.c.rest().starts_with("!=") {
            return Err(self.c.error("expected a formula"));
        }
        if self.c.eat("~") || self.c.eat("!") || self.c.eat("¬") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.c.eat("(") {
            let f = self.formula()?;
            self.c.expect(")")?;
            return Ok(f);
        }
        let save = self.c.pos;
        if self.quantifier().is_some() {
            self.c.pos = save;
            return self.formula();
        }
        if self.c.starts_ident() {
            match self.c.ident()? {
                "true" => return Ok(Formula::True),
                "false" => return Ok(Formula::False),
                _ => self.c.pos = save,
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let first = self.term()?;
        if first.is_constant() && !self.c.rest().trim_start().starts_with("||") && self.c.eat("|") {
            let d = first.constant_part().clone();
            return Ok(Formula::divides(d, self.term()?));
        }
        let mut parts = Vec::new();
        let mut lhs = first;
        while let Some(rel) = self.relation() {
            let rhs = self.term()?;
            parts.push(match rel {
                "<=" => Formula::le(&lhs, &rhs),
                "<" => Formula::lt(&lhs, &rhs),
                ">=" => Formula::le(&rhs, &lhs),
                ">" => Formula::lt(&rhs, &lhs),
                "=" => Formula::eq(&lhs, &rhs),
                _ => Formula::not(Formula::eq(&lhs, &rhs)),
            });
            lhs = rhs;
        }
        match parts.len() {
            0 => Err(self.c.error("expected a relation")),
            1 => Ok(parts.pop().unwrap_or(Formula::True)),
            _ => Ok(Formula::and(parts)),
        }
    }

    fn relation(&mut self) -> Option<&'static str> {
        for (text, rel) in [
            ("<=", "<="),
            ("≤", "<="),
            (">=", ">="),
            ("≥", ">="),
            ("!=", "!="),
            ("≠", "!="),
            ("<", "<"),
            (">", ">"),
            ("=", "="),
        ] {
            if self.c.eat(text) {
                return Some(rel);
            }
        }
        None
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut negate = self.c.eat("-");
        let mut t = Term::constant(0);
        loop {
            let mono = self.mono()?;
            t = if negate { t.sub(&mono) } else { t.add(&mono) };
            self.c.skip_ws();
            if self.c.rest().starts_with("->") {
                return Ok(t);
            }
            if self.c.eat("+") {
                negate = false;
            } else if self.c.eat("-") {
                negate = true;
            } else {
                return Ok(t);
            }
        }
    }

    fn mono(&mut self) -> Result<Term, ParseError> {
        self.c.skip_ws();
        if self.c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
            let k: BigInt = self.c.integer()?;
            let star = self.c.eat("*");
            let save = self.c.pos;
            if self.c.starts_ident() && self.quantifier().is_none() {
                let v = self.var_name()?;
                return Ok(Term::monomial(v, k));
            }
            self.c.pos = save;
            if star {
                return Err(self.c.error("expected a variable after `*`"));
            }
            return Ok(Term::constant(k));
        }
        if self.c.starts_ident() {
            let v = self.var_name()?;
            return Ok(Term::var(v));
        }
        Err(self.c.error("expected a term"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ratg_core::presburger::decide;

    fn sentence(s: &str) -> bool {
        let p = parse_formula(s).unwrap();
        decide(&p.formula).unwrap()
    }

    #[test]
    fn sentences() {
        assert!(sentence("A x. E y. x = 2y | x = 2y + 1"));
        assert!(!sentence("E x. 2x = 1"));
        assert!(sentence("A x. 2 | x -> ~(2 | x + 1)"));
        assert!(sentence("∀x. ∃y. x < y"));
        assert!(sentence("E x y. 0 <= x < y <= 1"));
        assert!(!sentence("E x, y. 0 <= x < y < 1"));
        assert!(sentence("A x. x != 0 | x = 0"));
        assert!(sentence("true & !false"));
        assert!(sentence("E x. 3*x - 2 = 7 & x >= 3"));
        assert!(sentence("A x. 2 | x | 2 | x + 1"));
    }

    #[test]
    fn variables_in_order_of_appearance() {
        let p = parse_formula("y <= x & E z. z = y").unwrap();
        assert_eq!(p.names, vec!["y", "x", "z"]);
        assert_eq!(p.formula.free_vars().len(), 2);
    }

    #[test]
    fn display_round_trips() {
        for s in ["A x. E y. x = 2y | x = 2y + 1", "E x. ~(3 | x - 1) & x > -4", "x = 1 -> y >= 2"] {
            let p = parse_formula(s).unwrap();
            let again = parse_formula(&p.formula.to_string()).unwrap();
            assert_eq!(again.formula, p.formula, "{s}");
        }
    }

    #[test]
    fn malformed() {
        for s in ["", "x", "x <=", "E x x = 1", "(x = 1", "x = 1 &", "E . x = 1", "2* = x", "E = 1"] {
            assert!(parse_formula(s).is_err(), "{s}");
        }
    }
}
