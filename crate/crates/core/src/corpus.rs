//! Named polynomial lists: one polynomial per line, optional `name:` prefix,
//! `#` comments and blank lines ignored.

use crate::poly::{parse_poly, PolyError};
use crate::QPoly;

pub const DEFAULT_CORPUS: &str = include_str!("../corpus/default.txt");

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub source: String,
    pub poly: QPoly,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {err}")]
pub struct CorpusError {
    pub line: usize,
    pub err: PolyError,
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, source) = match line.split_once(':') {
            Some((n, s)) => (n.trim().to_string(), s.trim().to_string()),
            None => (format!("poly-{}", out.len() + 1), line.to_string()),
        };
        let poly = parse_poly(&source).map_err(|err| CorpusError { line: i + 1, err })?;
        out.push(CorpusEntry { name, source, poly });
    }
    Ok(out)
}

pub fn default_corpus() -> Vec<CorpusEntry> {
    parse_corpus(DEFAULT_CORPUS).expect("shipped corpus parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_corpus() {
        let c = default_corpus();
        assert_eq!(c.len(), 20);
        assert_eq!(c[0].name, "cusp");
    }

    #[test]
    fn unnamed_and_errors() {
        let c = parse_corpus("x*y\n\n# note\nq: y^2").unwrap();
        assert_eq!((c[0].name.as_str(), c[1].name.as_str()), ("poly-1", "q"));
        assert_eq!(parse_corpus("a: x +").unwrap_err().line, 1);
    }
}
