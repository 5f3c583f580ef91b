//! Line-oriented text format for monoids and recognisers.
//!
//! ```text
//! # counting a's
//! elements: b a 0
//! unit: b
//! table:
//!   b a 0
//!   a a 0
//!   0 0 0
//! order: 0<a
//! sharp: b->b a->0 0->0
//! letters: a->a b->b
//! ideal: 0
//! ```
//!
//! Loading only checks shape. Axioms are left to `validate_axioms`.

use crate::algebra::{ElemId, ElemSet, StabilisationMonoid};
use crate::error::{Error, Result};
use crate::recogniser::Recogniser;

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Drops a `#` comment that starts a line or follows whitespace.
fn strip_comment(line: &str) -> &str {
    let b = line.as_bytes();
    for (i, &c) in b.iter().enumerate() {
        if c == b'#' && (i == 0 || b[i - 1].is_ascii_whitespace()) {
            return &line[..i];
        }
    }
    line
}

#[derive(Default)]
struct Raw {
    elements: Option<(usize, Vec<String>)>,
    unit: Option<(usize, String)>,
    rows: Vec<(usize, Vec<String>)>,
    table_at: Option<usize>,
    order: Vec<(usize, String, String)>,
    sharp: Vec<(usize, String, String)>,
    letters: Option<(usize, Vec<(String, String)>)>,
    ideal: Option<(usize, Vec<String>)>,
}

fn arrows(line: usize, body: &str) -> Result<Vec<(String, String)>> {
    body.split_whitespace()
        .map(|tok| {
            tok.split_once("->")
                .filter(|(a, b)| !a.is_empty() && !b.is_empty())
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .ok_or_else(|| err(line, format!("expected `x->y`, found `{tok}`")))
        })
        .collect()
}

fn read_raw(src: &str) -> Result<Raw> {
    let mut raw = Raw::default();
    let mut pending_rows = 0usize;
    for (i, full) in src.lines().enumerate() {
        let ln = i + 1;
        let line = strip_comment(full).trim();
        if line.is_empty() {
            continue;
        }
        if pending_rows > 0 {
            raw.rows.push((ln, line.split_whitespace().map(String::from).collect()));
            pending_rows -= 1;
            continue;
        }
        let (key, body) = line
            .split_once(':')
            .ok_or_else(|| err(ln, format!("expected `key: ...`, found `{line}`")))?;
        let body = body.trim();
        let once = |present: bool| {
            if present {
                Err(err(ln, format!("`{key}` given twice")))
            } else {
                Ok(())
            }
        };
        match key.trim() {
            "elements" => {
                once(raw.elements.is_some())?;
                raw.elements = Some((ln, body.split_whitespace().map(String::from).collect()));
            }
            "unit" => {
                once(raw.unit.is_some())?;
                raw.unit = Some((ln, body.to_string()));
            }
            "table" => {
                once(raw.table_at.is_some())?;
                let m = raw
                    .elements
                    .as_ref()
                    .ok_or_else(|| err(ln, "`table:` before `elements:`"))?
                    .1
                    .len();
                if !body.is_empty() {
                    return Err(err(ln, "table rows go on the following lines"));
                }
                raw.table_at = Some(ln);
                pending_rows = m;
            }
            "order" => {
                for tok in body.split_whitespace() {
                    let (a, b) = tok
                        .split_once('<')
                        .filter(|(a, b)| !a.is_empty() && !b.is_empty())
                        .ok_or_else(|| err(ln, format!("expected `x<y`, found `{tok}`")))?;
                    raw.order.push((ln, a.to_string(), b.to_string()));
                }
            }
            "sharp" => {
                for (a, b) in arrows(ln, body)? {
                    raw.sharp.push((ln, a, b));
                }
            }
            "letters" => {
                once(raw.letters.is_some())?;
                raw.letters = Some((ln, arrows(ln, body)?));
            }
            "ideal" => {
                once(raw.ideal.is_some())?;
                raw.ideal = Some((ln, body.split_whitespace().map(String::from).collect()));
            }
            other => return Err(err(ln, format!("unknown key `{other}`"))),
        }
    }
    if pending_rows > 0 {
        return Err(err(
            src.lines().count(),
            format!("table is missing {pending_rows} row(s)"),
        ));
    }
    Ok(raw)
}

fn build_monoid(raw: &Raw) -> Result<StabilisationMonoid> {
    let (_, names) = raw.elements.clone().ok_or_else(|| err(0, "missing `elements:`"))?;
    let idx = |ln: usize, s: &str| -> Result<ElemId> {
        names
            .iter()
            .position(|n| n == s)
            .map(ElemId::new)
            .ok_or_else(|| err(ln, format!("unknown element `{s}`")))
    };
    let (uln, u) = raw.unit.as_ref().ok_or_else(|| err(0, "missing `unit:`"))?;
    let unit = idx(*uln, u)?;
    let tln = raw.table_at.ok_or_else(|| err(0, "missing `table:`"))?;
    let m = names.len();
    let mut table = Vec::with_capacity(m);
    for (ln, row) in &raw.rows {
        if row.len() != m {
            return Err(err(*ln, format!("table row has {} entries, expected {m}", row.len())));
        }
        table.push(row.iter().map(|s| idx(*ln, s)).collect::<Result<Vec<_>>>()?);
    }
    if table.len() != m {
        return Err(err(tln, "incomplete table"));
    }
    let order = raw
        .order
        .iter()
        .map(|(ln, a, b)| Ok((idx(*ln, a)?, idx(*ln, b)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut sharp = vec![None; m];
    for (ln, a, b) in &raw.sharp {
        let (a, b) = (idx(*ln, a)?, idx(*ln, b)?);
        if table[a.index()][a.index()] != a {
            return Err(err(
                *ln,
                format!("sharp given for non-idempotent `{}`", names[a.index()]),
            ));
        }
        if sharp[a.index()].replace(b).is_some() {
            return Err(err(*ln, format!("sharp of `{}` given twice", names[a.index()])));
        }
    }
    StabilisationMonoid::from_order_pairs(names.clone(), unit, table, &order, sharp)
}

pub fn parse_monoid(src: &str) -> Result<StabilisationMonoid> {
    let raw = read_raw(src)?;
    if let Some((ln, _)) = raw.letters.as_ref() {
        return Err(err(*ln, "`letters:` belongs in a recogniser file"));
    }
    if let Some((ln, _)) = raw.ideal.as_ref() {
        return Err(err(*ln, "`ideal:` belongs in a recogniser file"));
    }
    build_monoid(&raw)
}

pub fn parse_recogniser(src: &str) -> Result<Recogniser> {
    let raw = read_raw(src)?;
    let m = build_monoid(&raw)?;
    let (lln, letters) = raw.letters.clone().ok_or_else(|| err(0, "missing `letters:`"))?;
    let (iln, ideal) = raw.ideal.clone().unwrap_or((0, Vec::new()));
    let find = |ln: usize, s: &str| m.elem(s).ok_or_else(|| err(ln, format!("unknown element `{s}`")));
    let mut alphabet = Vec::new();
    let mut h = Vec::new();
    for (a, x) in &letters {
        alphabet.push(a.clone());
        h.push(find(lln, x)?);
    }
    let ideal = ideal.iter().map(|s| find(iln, s)).collect::<Result<ElemSet>>()?;
    Recogniser::new(m, alphabet, h, ideal)
}

/// Covering pairs of the order, enough to regenerate it.
fn hasse(m: &StabilisationMonoid) -> Vec<(ElemId, ElemId)> {
    let strict = m.order_pairs();
    strict
        .iter()
        .copied()
        .filter(|&(a, b)| !m.elements().any(|c| c != a && c != b && m.leq(a, c) && m.leq(c, b)))
        .collect()
}

pub fn write_monoid(m: &StabilisationMonoid) -> String {
    let mut out = String::new();
    out.push_str(&format!("elements: {}\n", m.names().join(" ")));
    out.push_str(&format!("unit: {}\n", m.name(m.unit())));
    out.push_str("table:\n");
    let width = m.names().iter().map(|n| n.chars().count()).max().unwrap_or(1);
    for a in m.elements() {
        let row: Vec<String> = m
            .elements()
            .map(|b| format!("{:<width$}", m.name(m.mul(a, b))))
            .collect();
        out.push_str(&format!("  {}\n", row.join(" ").trim_end()));
    }
    let order = hasse(m);
    if !order.is_empty() {
        let pairs: Vec<String> = order
            .iter()
            .map(|&(a, b)| format!("{}<{}", m.name(a), m.name(b)))
            .collect();
        out.push_str(&format!("order: {}\n", pairs.join(" ")));
    }
    let sharp: Vec<String> = m
        .elements()
        .filter_map(|e| m.sharp(e).map(|s| format!("{}->{}", m.name(e), m.name(s))))
        .collect();
    if !sharp.is_empty() {
        out.push_str(&format!("sharp: {}\n", sharp.join(" ")));
    }
    out
}

pub fn write_recogniser(r: &Recogniser) -> String {
    let m = &r.monoid;
    let mut out = write_monoid(m);
    let letters: Vec<String> = r
        .alphabet
        .iter()
        .zip(&r.h)
        .map(|(a, &x)| format!("{a}->{}", m.name(x)))
        .collect();
    out.push_str(&format!("letters: {}\n", letters.join(" ")));
    let ideal: Vec<&str> = r.ideal.members().iter().map(|x| m.name(x)).collect();
    if ideal.is_empty() {
        out.push_str("ideal:\n");
    } else {
        out.push_str(&format!("ideal: {}\n", ideal.join(" ")));
    }
    out
}
