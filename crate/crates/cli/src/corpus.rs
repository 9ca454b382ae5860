use std::path::Path;

use fraclim::FuncExpr;

use crate::failure::Failure;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub function: FuncExpr,
    pub a: f64,
}

/// One `<expr> @ <a>` per line. `#` starts a comment, blank lines are skipped.
pub fn parse(text: &str) -> Result<Vec<Entry>, Failure> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let field = format!("corpus line {line}");
        let (expr, a) = body
            .rsplit_once('@')
            .ok_or_else(|| Failure::parse(&field, "expected `<expr> @ <a>`"))?;
        let function = expr
            .trim()
            .parse::<FuncExpr>()
            .map_err(|e| Failure::parse(&field, e))?;
        let a = a
            .trim()
            .parse::<f64>()
            .map_err(|e| Failure::parse(&field, format!("base point {:?}: {e}", a.trim())))?;
        if !a.is_finite() {
            return Err(Failure::parse(&field, "base point must be finite"));
        }
        out.push(Entry { line, function, a });
    }
    if out.is_empty() {
        return Err(Failure::parse("--corpus", "no entries"));
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Vec<Entry>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::parse("--corpus", format!("{}: {e}", path.display())))?;
    parse(&text)
}
