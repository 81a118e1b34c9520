use std::collections::BTreeMap;

use num_bigint::BigInt;
use ratg_core::groups::{IntMatrix, GroupSpec};

use super::{int_list, Cursor, ParseError};

/// Parses `group kind=<kind> key=value ...`.
///
/// | kind           | keys                                   |
/// |----------------|----------------------------------------|
/// | `free_abelian` | `rank`, optional `torsion=[n1,..]`     |
/// | `semidirect`   | `matrix=[[..],..]`, optional `rank`    |
/// | `heisenberg`   | none                                   |
/// | `lamplighter`  | `mod`                                  |
/// | `metabelian`   | `f=[q0,..,qm]`                         |
pub fn parse_spec(input: &str) -> Result<GroupSpec, ParseError> {
    let mut c = Cursor::new(input);
    if c.ident()? != "group" {
        return Err(ParseError { message: "a spec starts with `group`".into(), column: 1, input: input.into() });
    }
    let mut values: BTreeMap<&str, (usize, Value)> = BTreeMap::new();
    while !c.at_end() {
        let key = c.ident()?;
        let column = c.error("").column;
        c.expect("=")?;
        c.skip_ws();
        let value = match c.peek() {
            Some('[') if c.peek_second() == Some('[') => Value::Matrix(matrix(&mut c)?),
            Some('[') => Value::List(int_list(&mut c)?),
            Some(ch) if ch.is_ascii_digit() || ch == '-' => Value::Int(c.integer()?),
            _ => Value::Name(c.ident()?.to_string()),
        };
        if values.insert(key, (column, value)).is_some() {
            return Err(c.error(format!("duplicate key `{key}`")));
        }
    }
    let err = |message: String, column: usize| ParseError { message, column, input: input.into() };
    let mut take = |key: &str| values.remove(key);
    let kind = match take("kind") {
        Some((_, Value::Name(k))) => k,
        Some((col, _)) => return Err(err("kind must be a name".into(), col)),
        None => return Err(err("missing `kind`".into(), 1)),
    };
    let int = |v: Option<(usize, Value)>, key: &str| -> Result<Option<BigInt>, ParseError> {
        match v {
            None => Ok(None),
            Some((_, Value::Int(n))) => Ok(Some(n)),
            Some((col, _)) => Err(err(format!("`{key}` must be an integer"), col)),
        }
    };
    let list = |v: Option<(usize, Value)>, key: &str| -> Result<Option<Vec<BigInt>>, ParseError> {
        match v {
            None => Ok(None),
            Some((_, Value::List(l))) => Ok(Some(l)),
            Some((col, _)) => Err(err(format!("`{key}` must be a list like [1,2]"), col)),
        }
    };
    let spec = match kind.as_str() {
        "free_abelian" => {
            let rank = int(take("rank"), "rank")?.ok_or_else(|| err("missing `rank`".into(), 1))?;
            let rank = usize::try_from(rank).map_err(|_| err("rank out of range".into(), 1))?;
            let torsion = list(take("torsion"), "torsion")?.unwrap_or_default();
            GroupSpec::FreeAbelian { rank, torsion }
        }
        "semidirect" => {
            let rank = int(take("rank"), "rank")?;
            let rows = match take("matrix") {
                Some((_, Value::Matrix(m))) => m,
                Some((col, _)) => return Err(err("`matrix` must look like [[2,1],[1,1]]".into(), col)),
                None => return Err(err("missing `matrix`".into(), 1)),
            };
            if let Some(r) = rank {
                if r != BigInt::from(rows.len()) {
                    return Err(err(format!("rank {r} does not match a {}×{} matrix", rows.len(), rows.len()), 1));
                }
            }
            let matrix = IntMatrix::new(rows).map_err(|e| err(e.to_string(), 1))?;
            GroupSpec::Semidirect { matrix }
        }
        "heisenberg" => GroupSpec::Heisenberg,
        "lamplighter" => {
            let modulus = int(take("mod"), "mod")?.ok_or_else(|| err("missing `mod`".into(), 1))?;
            GroupSpec::Lamplighter { modulus }
        }
        "metabelian" => {
            let f = list(take("f"), "f")?.ok_or_else(|| err("missing `f`".into(), 1))?;
            GroupSpec::Metabelian { f }
        }
        other => return Err(err(format!("unknown kind `{other}`"), 1)),
    };
    if let Some((key, (col, _))) = values.into_iter().next() {
        return Err(err(format!("key `{key}` does not apply to kind {kind}"), col));
    }
    Ok(spec)
}

enum Value {
    Int(BigInt),
    Name(String),
    List(Vec<BigInt>),
    Matrix(Vec<Vec<BigInt>>),
}

fn matrix(c: &mut Cursor<'_>) -> Result<Vec<Vec<BigInt>>, ParseError> {
    c.expect("[")?;
    let mut rows = vec![int_list(c)?];
    while !c.eat("]") {
        c.expect(",")?;
        rows.push(int_list(c)?);
    }
    Ok(rows)
}
