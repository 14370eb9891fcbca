use std::fmt::Write;

use num_traits::{One, Signed, Zero};

use super::{parse_number, Labels};
use crate::cones::CIConstraint;
use crate::error::{Error, Result};
use crate::polyhedra::{InequalitySystem, LinearInequality, Rational, Sense};
use crate::sets::SubsetIndex;

/// An inequality system together with the names used to print it.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityFile {
    pub system: InequalitySystem,
    pub labels: Labels,
    /// Free-form description of where the rows came from.
    pub source: Option<String>,
}

impl InequalityFile {
    pub fn new(system: InequalitySystem) -> Self {
        let labels = Labels::default_for(system.n());
        InequalityFile {
            system,
            labels,
            source: None,
        }
    }
}

/// A single row in the inequality-file syntax.
pub fn format_row(row: &LinearInequality, labels: &Labels) -> String {
    let mut out = String::new();
    for (k, &(s, c)) in row.terms().iter().enumerate() {
        let sign = if c < 0 { "-" } else { "+" };
        if k == 0 {
            if c < 0 {
                out.push('-');
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        let _ = write!(out, "{}*H({})", c.unsigned_abs(), labels.format_subset(s));
    }
    out.push_str(match row.sense() {
        Sense::GreaterEq => " >= 0",
        Sense::Equal => " == 0",
    });
    out
}

/// One row per line after `#` header comments giving `n`, labels, coordinate order and
/// source.
pub fn emit_inequalities(file: &InequalityFile) -> String {
    let labels = &file.labels;
    let mut out = String::new();
    let _ = writeln!(out, "# entropic inequalities");
    let _ = writeln!(out, "# n: {}", file.system.n());
    let _ = writeln!(out, "# labels: {}", labels.names().join(" "));
    let coords: Vec<String> = file
        .system
        .coordinates()
        .iter()
        .map(|s| if s.is_empty() { "{}".to_string() } else { labels.format_subset(*s) })
        .collect();
    let _ = writeln!(out, "# coordinates: {}", coords.join(" "));
    if let Some(src) = &file.source {
        let _ = writeln!(out, "# source: {}", src.replace('\n', " "));
    }
    let _ = writeln!(out, "# rows: {}", file.system.len());
    for row in file.system.rows() {
        let _ = writeln!(out, "{}", format_row(row, labels));
    }
    out
}

/// Parses `c*H(S) ± c*H(T) ... >= 0` (or `==`, `<=`). Terms may sit on both sides; a
/// missing coefficient means 1 and the `*` is optional.
fn parse_row(text: &str, labels: &Labels) -> std::result::Result<LinearInequality, String> {
    let (lhs, rhs, sense, flip) = if let Some((l, r)) = text.split_once(">=") {
        (l, r, Sense::GreaterEq, false)
    } else if let Some((l, r)) = text.split_once("<=") {
        (l, r, Sense::GreaterEq, true)
    } else if let Some((l, r)) = text.split_once("==").or_else(|| text.split_once('=')) {
        (l, r, Sense::Equal, false)
    } else {
        return Err("missing relation (>=, <= or ==)".to_string());
    };
    let mut terms = parse_side(lhs, labels)?;
    terms.extend(parse_side(rhs, labels)?.into_iter().map(|(s, c)| (s, -c)));
    if flip {
        for t in &mut terms {
            t.1 = -t.1.clone();
        }
    }
    LinearInequality::from_rational(terms, sense).map_err(|e| e.to_string())
}

fn parse_side(text: &str, labels: &Labels) -> std::result::Result<Vec<(SubsetIndex, Rational)>, String> {
    let mut terms: Vec<(SubsetIndex, Rational)> = Vec::new();
    let mut rest = text.trim();
    if let Ok((v, _)) = parse_number(rest) {
        return if v.is_zero() {
            Ok(terms)
        } else {
            Err(format!("constant term {rest:?}; rows must be homogeneous"))
        };
    }
    while !rest.is_empty() {
        let (negative, after) = match rest.as_bytes()[0] {
            b'+' => (false, &rest[1..]),
            b'-' => (true, &rest[1..]),
            _ if terms.is_empty() => (false, rest),
            _ => return Err(format!("expected + or - before {rest:?}")),
        };
        let after = after.trim_start();
        let h = after.find("H(").ok_or_else(|| format!("expected H(...) in {after:?}"))?;
        let coef_text = after[..h].trim().trim_end_matches('*').trim();
        let coef = if coef_text.is_empty() {
            Rational::one()
        } else {
            parse_number(coef_text)?.0
        };
        let close = after[h..].find(')').ok_or("unclosed H(")? + h;
        let subset = labels.parse_subset(&after[h + 2..close])?;
        terms.push((subset, if negative { -coef } else { coef }));
        rest = after[close + 1..].trim_start();
    }
    if terms.is_empty() {
        return Err("empty side".to_string());
    }
    Ok(terms)
}

pub fn parse_inequalities(text: &str) -> Result<InequalityFile> {
    let mut n: Option<usize> = None;
    let mut label_names: Option<Vec<String>> = None;
    let mut coord_text: Option<(usize, String)> = None;
    let mut source = None;
    let mut body: Vec<(usize, &str)> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once(':') {
                let value = value.trim();
                match key.trim() {
                    "n" => {
                        n = Some(value.parse().map_err(|_| Error::parse(k + 1, "bad n"))?)
                    }
                    "labels" => {
                        label_names = Some(value.split_whitespace().map(str::to_string).collect())
                    }
                    "coordinates" => coord_text = Some((k + 1, value.to_string())),
                    "source" => source = Some(value.to_string()),
                    _ => {}
                }
            }
            continue;
        }
        if !line.is_empty() {
            body.push((k + 1, line));
        }
    }
    let given = label_names
        .map(Labels::new)
        .transpose()
        .map_err(|e| Error::parse(1, e.to_string()))?;
    // rows are parsed against the widest default naming until n is known
    let reading = given
        .clone()
        .unwrap_or_else(|| Labels::default_for(n.unwrap_or(crate::sets::ENCODING_MAX_N)));
    let mut rows = Vec::with_capacity(body.len());
    for (line, t) in body {
        rows.push(parse_row(t, &reading).map_err(|m| Error::parse(line, m))?);
    }
    let coords: Vec<SubsetIndex> = match coord_text {
        Some((line, t)) => t
            .split_whitespace()
            .map(|c| match c {
                "{}" => Ok(SubsetIndex::EMPTY),
                c => reading.parse_subset(c).map_err(|m| Error::parse(line, m)),
            })
            .collect::<Result<_>>()?,
        None => {
            let mut c: Vec<SubsetIndex> = rows.iter().flat_map(|r| r.support()).collect();
            c.sort();
            c.dedup();
            c
        }
    };
    let n = n
        .or(given.as_ref().map(Labels::n))
        .unwrap_or_else(|| coords.iter().filter_map(|s| s.elements().last()).max().unwrap_or(1));
    let labels = given.unwrap_or_else(|| Labels::default_for(n));
    let system = InequalitySystem::new(n, coords, rows)?;
    Ok(InequalityFile {
        system,
        labels,
        source,
    })
}

fn porta_coef(c: &Rational) -> String {
    let sign = if c.is_negative() { '-' } else { '+' };
    let a = c.abs();
    if a.is_one() {
        sign.to_string()
    } else {
        format!("{sign}{a}")
    }
}

/// PORTA `.ieq` layout. Variable `x_k` is the `k`-th coordinate of the system.
pub fn emit_porta(system: &InequalitySystem) -> String {
    let mut out = String::new();
    let dim = system.coordinates().len();
    let _ = writeln!(out, "DIM = {dim}");
    let _ = writeln!(out);
    let _ = writeln!(out, "VALID");
    let _ = writeln!(out, "{}", vec!["0"; dim].join(" "));
    let _ = writeln!(out);
    let _ = writeln!(out, "INEQUALITIES_SECTION");
    let width = system.len().to_string().len();
    for (k, row) in system.rows().iter().enumerate() {
        let mut line = format!("({:>width$}) ", k + 1);
        for &(s, c) in row.terms() {
            let x = system.coordinate_position(s).expect("supported") + 1;
            let c = match row.sense() {
                Sense::GreaterEq => -c,
                Sense::Equal => c,
            };
            let _ = write!(line, "{}x{x}", porta_coef(&Rational::from_integer(c.into())));
        }
        line.push_str(match row.sense() {
            Sense::GreaterEq => " <= 0",
            Sense::Equal => " == 0",
        });
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "END");
    out
}

/// Reads a PORTA `.ieq` file whose `x_k` is `coordinates[k-1]`. Right-hand sides must
/// be zero.
pub fn parse_porta(text: &str, n: usize, coordinates: &[SubsetIndex]) -> Result<InequalitySystem> {
    let mut coords = coordinates.to_vec();
    coords.sort();
    let mut dim = None;
    let mut in_section = false;
    let mut rows = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let line_no = k + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(d) = line.strip_prefix("DIM") {
            let d = d.trim().trim_start_matches('=').trim();
            dim = Some(d.parse::<usize>().map_err(|_| Error::parse(line_no, "bad DIM"))?);
            continue;
        }
        match line {
            "INEQUALITIES_SECTION" => {
                in_section = true;
                continue;
            }
            "END" => break,
            "VALID" | "LOWER_BOUNDS" | "UPPER_BOUNDS" | "ELIMINATION_ORDER" => {
                in_section = false;
                continue;
            }
            _ => {}
        }
        if !in_section {
            continue;
        }
        let body = match line.strip_prefix('(') {
            Some(r) => r.split_once(')').ok_or_else(|| Error::parse(line_no, "unclosed row number"))?.1,
            None => line,
        };
        let (lhs, rhs, sense, flip) = if let Some((l, r)) = body.split_once("<=") {
            (l, r, Sense::GreaterEq, true)
        } else if let Some((l, r)) = body.split_once(">=") {
            (l, r, Sense::GreaterEq, false)
        } else if let Some((l, r)) = body.split_once("==") {
            (l, r, Sense::Equal, false)
        } else {
            return Err(Error::parse(line_no, "missing relation"));
        };
        if !parse_number(rhs).map(|v| v.0.is_zero()).unwrap_or(false) {
            return Err(Error::parse(line_no, "right-hand side must be 0"));
        }
        let mut terms = Vec::new();
        let compact: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let x = rest.find('x').ok_or_else(|| Error::parse(line_no, "expected a variable"))?;
            let coef_text = &rest[..x];
            let coef = match coef_text {
                "" | "+" => Rational::one(),
                "-" => -Rational::one(),
                t => parse_number(t).map_err(|m| Error::parse(line_no, m))?.0,
            };
            let digits = rest[x + 1..].find(|c: char| !c.is_ascii_digit()).map_or(rest.len(), |e| e + x + 1);
            let index: usize = rest[x + 1..digits]
                .parse()
                .map_err(|_| Error::parse(line_no, "bad variable index"))?;
            let s = *coords
                .get(index.wrapping_sub(1))
                .ok_or_else(|| Error::parse(line_no, format!("variable x{index} out of range")))?;
            terms.push((s, if flip { -coef } else { coef }));
            rest = &rest[digits..];
        }
        rows.push(LinearInequality::from_rational(terms, sense)?);
    }
    if let Some(d) = dim {
        if d != coords.len() {
            return Err(Error::parse(1, format!("DIM = {d} but {} coordinates given", coords.len())));
        }
    }
    InequalitySystem::new(n, coords, rows)
}

/// One `I(S:T|R)=0` per line.
pub fn emit_ci(constraints: &[CIConstraint], labels: &Labels) -> String {
    let mut out = String::new();
    for c in constraints {
        let (s, t, r) = (
            labels.format_subset(c.s()),
            labels.format_subset(c.t()),
            labels.format_subset(c.r()),
        );
        if c.r().is_empty() {
            let _ = writeln!(out, "I({s}:{t})=0");
        } else {
            let _ = writeln!(out, "I({s}:{t}|{r})=0");
        }
    }
    out
}

/// Lines `I(S:T|R)=0` or `I(S:T)=0`; blank lines and `#` comments are skipped.
pub fn parse_ci(text: &str, labels: &Labels) -> Result<Vec<CIConstraint>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: String| Error::parse(k + 1, m);
        let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("I(")
            .and_then(|r| r.strip_suffix(")=0"))
            .ok_or_else(|| err("expected I(S:T|R)=0".to_string()))?;
        let (st, r) = inner.split_once('|').unwrap_or((inner, ""));
        let (s, t) = st.split_once(':').ok_or_else(|| err("missing ':'".to_string()))?;
        let s = labels.parse_subset(s).map_err(err)?;
        let t = labels.parse_subset(t).map_err(err)?;
        let r = labels.parse_subset(r).map_err(err)?;
        out.push(CIConstraint::new(s, t, r).map_err(|e| err(e.to_string()))?);
    }
    Ok(out)
}
