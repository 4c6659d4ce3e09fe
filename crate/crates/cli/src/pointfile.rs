//! Text point-set files.
//!
//! ```text
//! # any comment
//! pointset q=3 n=2 field=3,1,3
//! 0,0
//! 1,1
//! ```
//!
//! Blank lines and `#` comments are ignored. The header must come first.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use dirdet::pg::aff_rank;
use dirdet::span::PointSet;
use dirdet::{Elem, Field, FieldSpec};

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

pub fn parse(text: &str) -> Result<PointSet, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let Some((hline, header)) = lines.next() else {
        return Err(err(0, "missing header"));
    };
    let mut words = header.split_whitespace();
    if words.next() != Some("pointset") {
        return Err(err(hline, "header must start with `pointset`"));
    }
    let (mut q, mut n, mut spec) = (None, None, None);
    for w in words {
        let (key, value) = w.split_once('=').ok_or_else(|| err(hline, format!("malformed header field {w:?}")))?;
        match key {
            "q" => q = Some(value.parse::<u32>().map_err(|_| err(hline, "bad q"))?),
            "n" => n = Some(value.parse::<usize>().map_err(|_| err(hline, "bad n"))?),
            "field" => spec = Some(value.parse::<FieldSpec>().map_err(|e| err(hline, e.to_string()))?),
            _ => return Err(err(hline, format!("unknown header field {key:?}"))),
        }
    }
    let q = q.ok_or_else(|| err(hline, "header lacks q"))?;
    let n = n.ok_or_else(|| err(hline, "header lacks n"))?;
    let field = match spec {
        Some(s) if s.q != q => return Err(err(hline, format!("field order {} does not match q={q}", s.q))),
        Some(s) => Field::with_modulus(s.p, s.h, s.modulus_encoding()),
        None => Field::of_order(q),
    }
    .map_err(|e| err(hline, e.to_string()))?;
    let field = Arc::new(field);
    PointSet::empty(field.clone(), n).map_err(|e| err(hline, e.to_string()))?;
    let mut ranks = BTreeSet::new();
    for (i, line) in lines {
        let coords: Vec<Elem> = line
            .split(',')
            .map(|c| c.trim().parse::<Elem>().map_err(|_| err(i, format!("bad coordinate {c:?}"))))
            .collect::<Result<_, _>>()?;
        if coords.len() != n {
            return Err(err(i, format!("expected {n} coordinates, got {}", coords.len())));
        }
        if let Some(c) = coords.iter().find(|&&c| c >= q) {
            return Err(err(i, format!("coordinate {c} is not below q={q}")));
        }
        if !ranks.insert(aff_rank(q, &coords)) {
            return Err(err(i, "duplicate point"));
        }
    }
    PointSet::from_ranks(field, n, ranks).map_err(|e| err(hline, e.to_string()))
}

pub fn serialize(u: &PointSet, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "pointset q={} n={} field={}", u.q(), u.n(), u.field().spec());
    for p in u.points() {
        let row: Vec<String> = p.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}
