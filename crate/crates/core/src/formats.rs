//! Line-based text formats.
//!
//! Every format starts with a `<kind> v1` header. Blank lines are ignored and
//! `#` starts a comment. Syntax problems, unknown references and duplicates are
//! reported as [`Error::Parse`](crate::error::Error::Parse) with the offending line; semantic problems
//! (an unclosed selection, a missing weight) keep their own error codes.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::complex::{CellComplex, ComplexBuilder, Subcomplex};
use crate::error::{ParseError, Result};
use crate::flatends::IntMatrix;
use crate::linalg::{zero_vec, Rational};

type Line<'a> = (usize, Vec<&'a str>);

fn significant(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(ParseError::new(line, msg).into())
}

fn header<'a>(lines: &mut impl Iterator<Item = Line<'a>>, kind: &str) -> Result<usize> {
    match lines.next() {
        Some((n, t)) if t.len() == 2 && t[0] == kind && t[1] == "v1" => Ok(n),
        Some((n, t)) if t[0] == kind => err(n, format!("unsupported {kind} version `{}`", t[1..].join(" "))),
        Some((n, _)) => err(n, format!("expected header `{kind} v1`")),
        None => err(1, format!("empty input, expected header `{kind} v1`")),
    }
}

fn arity(n: usize, t: &[&str], want: usize, usage: &str) -> Result<()> {
    if t.len() != want {
        return err(n, format!("expected `{usage}`"));
    }
    Ok(())
}

fn number<T: FromStr>(n: usize, s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| ParseError::new(n, format!("invalid {what} `{s}`")).into())
}

fn lookup(n: usize, x: &CellComplex, id: &str) -> Result<(usize, usize)> {
    x.locate(id).ok_or_else(|| ParseError::new(n, format!("unknown cell id `{id}`")).into())
}

fn ensure_unique<'a>(n: usize, seen: &mut HashSet<&'a str>, id: &'a str) -> Result<()> {
    if !seen.insert(id) {
        return err(n, format!("duplicate id `{id}`"));
    }
    Ok(())
}

/// Parses a `cellcomplex v1` document. Faces must be declared before the `bd`
/// line that uses them. The result is not validated.
pub fn parse_complex(text: &str) -> Result<CellComplex> {
    let mut lines = significant(text);
    let head = header(&mut lines, "cellcomplex")?;
    let mut top: Option<usize> = None;
    let mut dims: HashMap<&str, usize> = HashMap::new();
    let mut with_boundary: HashSet<&str> = HashSet::new();
    let mut builder = ComplexBuilder::new();
    let mut last = head;
    for (n, t) in lines {
        last = n;
        match t[0] {
            "dim" => {
                arity(n, &t, 2, "dim <n>")?;
                if top.is_some() {
                    return err(n, "repeated `dim` line");
                }
                let d = number(n, t[1], "dimension")?;
                builder.top_dim(d);
                top = Some(d);
            }
            "cell" => {
                arity(n, &t, 3, "cell <id> <k>")?;
                let Some(top) = top else {
                    return err(n, "`cell` before `dim`");
                };
                let id = t[1];
                if !id.is_ascii() {
                    return err(n, format!("cell id `{id}` is not ASCII"));
                }
                let k: usize = number(n, t[2], "cell dimension")?;
                if k > top {
                    return err(n, format!("cell `{id}` has dimension {k} above the declared {top}"));
                }
                if dims.insert(id, k).is_some() {
                    return err(n, format!("duplicate id `{id}`"));
                }
                builder.cell(id, k, &[])?;
            }
            "bd" => {
                if t.len() < 2 {
                    return err(n, "expected `bd <id> <coef>:<face> ...`");
                }
                let id = t[1];
                let Some(&k) = dims.get(id) else {
                    return err(n, format!("unknown cell id `{id}`"));
                };
                if k == 0 {
                    return err(n, format!("0-cell `{id}` cannot have a boundary"));
                }
                if !with_boundary.insert(id) {
                    return err(n, format!("second `bd` line for `{id}`"));
                }
                let mut chain = Vec::with_capacity(t.len() - 2);
                for term in &t[2..] {
                    let Some((coef, face)) = term.split_once(':') else {
                        return err(n, format!("expected `<coef>:<face>`, found `{term}`"));
                    };
                    let coef: i64 = number(n, coef, "coefficient")?;
                    match dims.get(face) {
                        None => return err(n, format!("unknown cell id `{face}`")),
                        Some(&fk) if fk + 1 != k => {
                            return err(n, format!("face `{face}` has dimension {fk}, expected {}", k - 1))
                        }
                        Some(_) => chain.push((coef, face.to_string())),
                    }
                }
                builder.set_boundary(id, chain)?;
            }
            other => return err(n, format!("unknown directive `{other}`")),
        }
    }
    if top.is_none() {
        return err(last, "missing `dim` line");
    }
    builder.build()
}

pub fn write_complex(x: &CellComplex) -> String {
    let mut out = format!("cellcomplex v1\ndim {}\n", x.top_dim());
    for k in 0..=x.top_dim() {
        for id in x.ids(k) {
            let _ = writeln!(out, "cell {id} {k}");
        }
    }
    for k in 1..=x.top_dim() {
        for (i, id) in x.ids(k).iter().enumerate() {
            out.push_str("bd ");
            out.push_str(id);
            for (f, c) in x.faces(k, i) {
                let _ = write!(out, " {c}:{}", x.id(k - 1, *f));
            }
            out.push('\n');
        }
    }
    out
}

/// Parses a `subcomplex v1` selection of cells of `x`. The selection must be closed.
pub fn parse_subcomplex(text: &str, x: &CellComplex) -> Result<Subcomplex> {
    let mut lines = significant(text);
    header(&mut lines, "subcomplex")?;
    let mut seen = HashSet::new();
    let mut ids = Vec::new();
    for (n, t) in lines {
        match t[0] {
            "sel" => {
                arity(n, &t, 2, "sel <id>")?;
                lookup(n, x, t[1])?;
                ensure_unique(n, &mut seen, t[1])?;
                ids.push(t[1]);
            }
            other => return err(n, format!("unknown directive `{other}`")),
        }
    }
    Subcomplex::from_ids(x, &ids)
}

pub fn write_subcomplex(x: &CellComplex, s: &Subcomplex) -> String {
    let mut out = String::from("subcomplex v1\n");
    for id in s.ids(x) {
        let _ = writeln!(out, "sel {id}");
    }
    out
}

/// Parses a `weights v1` document into a map from cell id to weight.
pub fn parse_weights(text: &str, x: &CellComplex) -> Result<HashMap<String, Rational>> {
    let mut lines = significant(text);
    header(&mut lines, "weights")?;
    let mut map = HashMap::new();
    for (n, t) in lines {
        match t[0] {
            "w" => {
                arity(n, &t, 3, "w <id> <p>/<q>")?;
                lookup(n, x, t[1])?;
                let w: Rational = number(n, t[2], "weight")?;
                if !w.is_positive() {
                    return err(n, format!("weight `{}` is not positive", t[2]));
                }
                if map.insert(t[1].to_string(), w).is_some() {
                    return err(n, format!("duplicate id `{}`", t[1]));
                }
            }
            other => return err(n, format!("unknown directive `{other}`")),
        }
    }
    Ok(map)
}

pub fn write_weights(x: &CellComplex, weights: &[Vec<Rational>]) -> String {
    let mut out = String::from("weights v1\n");
    for (k, ws) in weights.iter().enumerate() {
        for (id, w) in x.ids(k).iter().zip(ws) {
            let _ = writeln!(out, "w {id} {w}");
        }
    }
    out
}

/// Parses a `glz v1` document: the rank and the generator matrices.
pub fn parse_group(text: &str) -> Result<(usize, Vec<IntMatrix>)> {
    let mut lines = significant(text).peekable();
    header(&mut lines, "glz")?;
    let m = match lines.next() {
        Some((n, t)) if t[0] == "rank" => {
            arity(n, &t, 2, "rank <m>")?;
            number(n, t[1], "rank")?
        }
        Some((n, _)) => return err(n, "expected `rank <m>`"),
        None => return err(1, "missing `rank` line"),
    };
    let mut gens = Vec::new();
    while let Some((n, t)) = lines.next() {
        if t[0] != "gen" || t.len() != 1 {
            return err(n, "expected `gen`");
        }
        let mut entries = Vec::with_capacity(m * m);
        for row in 0..m {
            let Some((rn, rt)) = lines.next() else {
                return err(n, format!("generator has {row} of {m} rows"));
            };
            if rt.len() != m {
                return err(rn, format!("expected {m} integers, found {}", rt.len()));
            }
            for s in rt {
                entries.push(number::<i64>(rn, s, "integer")?);
            }
        }
        gens.push(IntMatrix::new(m, entries)?);
    }
    Ok((m, gens))
}

pub fn write_group(m: usize, gens: &[IntMatrix]) -> String {
    let mut out = format!("glz v1\nrank {m}\n");
    for g in gens {
        out.push_str("gen\n");
        for row in g.entries().chunks(m.max(1)).take(m) {
            let row: Vec<String> = row.iter().map(i64::to_string).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

/// Parses a `cochain v1` document: `deg <k>` followed by `c <id> <value>` lines
/// naming `k`-cells. Unlisted cells are 0.
pub fn parse_cochain(text: &str, x: &CellComplex) -> Result<(usize, Vec<Rational>)> {
    let mut lines = significant(text);
    header(&mut lines, "cochain")?;
    let k: usize = match lines.next() {
        Some((n, t)) if t[0] == "deg" => {
            arity(n, &t, 2, "deg <k>")?;
            let k = number(n, t[1], "degree")?;
            if k > x.top_dim() {
                return err(n, format!("degree {k} exceeds the complex dimension {}", x.top_dim()));
            }
            k
        }
        Some((n, _)) => return err(n, "expected `deg <k>`"),
        None => return err(1, "missing `deg` line"),
    };
    let mut v = zero_vec(x.num_cells(k));
    let mut seen = HashSet::new();
    for (n, t) in lines {
        match t[0] {
            "c" => {
                arity(n, &t, 3, "c <id> <value>")?;
                let (ck, i) = lookup(n, x, t[1])?;
                if ck != k {
                    return err(n, format!("cell `{}` has dimension {ck}, expected {k}", t[1]));
                }
                ensure_unique(n, &mut seen, t[1])?;
                v[i] = number(n, t[2], "value")?;
            }
            other => return err(n, format!("unknown directive `{other}`")),
        }
    }
    Ok((k, v))
}

pub fn write_cochain(x: &CellComplex, k: usize, v: &[Rational]) -> String {
    let mut out = format!("cochain v1\ndeg {k}\n");
    for (id, c) in x.ids(k).iter().zip(v) {
        if !c.is_zero() {
            let _ = writeln!(out, "c {id} {c}");
        }
    }
    out
}
