use ratg_core::semilinear::{LinearSet, SemilinearSet};

use super::{int_tuple, Cursor, ParseError};

/// Parses `∅` or a union of linear sets written `L((c1,..); (p1,..), ..)`,
/// joined by `∪` or `U`. The dimension is taken from the vectors, or from
/// `dim` for the empty set.
pub fn parse_semilinear(input: &str, dim: Option<usize>) -> Result<SemilinearSet, ParseError> {
    let mut c = Cursor::new(input);
    if c.eat("∅") {
        c.finish()?;
        return dim.map(SemilinearSet::empty).ok_or_else(|| c.error("the dimension of ∅ is not known here"));
    }
    let mut components = Vec::new();
    let mut dimension = dim;
    loop {
        let start = c.error("");
        c.expect("L")?;
        c.expect("(")?;
        let base = int_tuple(&mut c)?;
        let mut periods = Vec::new();
        if c.eat(";") {
            periods.push(int_tuple(&mut c)?);
            while c.eat(",") {
                periods.push(int_tuple(&mut c)?);
            }
        }
        c.expect(")")?;
        let d = *dimension.get_or_insert(base.len());
        if base.len() != d || periods.iter().any(|p| p.len() != d) {
            return Err(ParseError { message: format!("expected vectors of dimension {d}"), ..start });
        }
        components.push(LinearSet::new(base, periods).map_err(|e| ParseError { message: e.to_string(), ..start.clone() })?);
        if !(c.eat("∪") || c.eat("U")) {
            break;
        }
    }
    c.finish()?;
    let d = dimension.unwrap_or(0);
    SemilinearSet::new(d, components).map_err(|e| c.error(e.to_string()))
}
