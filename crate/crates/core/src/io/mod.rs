//! Text and JSON file formats.
//!
//! Variables are named by labels (`A1`..`An` unless a file says otherwise). Subsets are
//! written as their members' labels joined without separators, e.g. `A1A3`.

mod json;
mod text;

pub use json::{
    emit_bayes_net, emit_distribution, emit_model, emit_partial, emit_partial_f64, emit_scenario,
    parse_bayes_net, parse_distribution, parse_model, parse_model_with, parse_partial, parse_partial_with,
    parse_scenario, BayesNetFile, DistributionFile, ModelFile, PartialVectorFile, ScenarioFile,
};
pub use text::{
    emit_ci, emit_inequalities, emit_porta, format_row, parse_ci, parse_inequalities, parse_porta,
    InequalityFile,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyhedra::Rational;
use crate::sets::SubsetIndex;

/// Names of the ground elements `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labels {
    names: Vec<String>,
}

const RESERVED: &[char] = &['(', ')', ':', '|', ',', '*', '+', '-', '=', '#', '"', '/', '<', '>', '[', ']', '{', '}'];

impl Labels {
    /// `A1`, ..., `An`.
    pub fn default_for(n: usize) -> Self {
        Labels {
            names: (1..=n).map(|i| format!("A{i}")).collect(),
        }
    }

    pub fn new(names: Vec<String>) -> Result<Self> {
        for (k, name) in names.iter().enumerate() {
            if name.is_empty()
                || name.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c))
            {
                return Err(Error::domain(format!("invalid label {name:?}")));
            }
            if names[..k].contains(name) {
                return Err(Error::domain(format!("duplicate label {name:?}")));
            }
        }
        Ok(Labels { names })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn is_default(&self) -> bool {
        *self == Self::default_for(self.n())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Label of element `i` (1-based).
    pub fn name(&self, i: usize) -> &str {
        &self.names[i - 1]
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.names.iter().position(|n| n == label).map(|k| k + 1)
    }

    pub fn format_subset(&self, s: SubsetIndex) -> String {
        s.elements().map(|i| self.name(i)).collect()
    }

    /// Splits joined labels by longest match; commas and whitespace are ignored.
    pub fn parse_subset(&self, text: &str) -> std::result::Result<SubsetIndex, String> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace() && *c != ',').collect();
        let mut rest = compact.as_str();
        let mut out = SubsetIndex::EMPTY;
        while !rest.is_empty() {
            let hit = self
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            match hit {
                Some((k, n)) => {
                    out = out.with(k + 1);
                    rest = &rest[n.len()..];
                }
                None => return Err(format!("no label matches {rest:?}")),
            }
        }
        Ok(out)
    }
}

/// Terminating decimal expansion, when the denominator has no prime factors besides 2
/// and 5.
pub fn format_decimal(r: &Rational) -> Option<String> {
    let mut d = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut places = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        places.0 += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        places.1 += 1;
    }
    if !d.is_one() {
        return None;
    }
    let k = places.0.max(places.1);
    let scaled = r * Rational::from_integer(num_traits::pow(BigInt::from(10), k));
    let digits = scaled.to_integer().magnitude().to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    if k == 0 {
        return Some(format!("{sign}{digits}.0"));
    }
    let padded = format!("{digits:0>width$}", width = k + 1);
    let (int, frac) = padded.split_at(padded.len() - k);
    Some(format!("{sign}{int}.{frac}"))
}

const MAX_DECIMAL_SCALE: i64 = 4096;

/// Parses `p/q`, an integer, or a decimal with optional exponent. The flag is `false`
/// for decimal notation.
pub fn parse_number(text: &str) -> std::result::Result<(Rational, bool), String> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in {t:?}"))?;
        let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in {t:?}"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in {t:?}"));
        }
        return Ok((Rational::new(p, q), true));
    }
    if let Ok(i) = t.parse::<BigInt>() {
        return Ok((Rational::from_integer(i), true));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(k) => (
            &t[..k],
            t[k + 1..].parse::<i32>().map_err(|_| format!("bad exponent in {t:?}"))?,
        ),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(d) => (true, d),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(format!("not a number: {t:?}"));
    }
    let all: BigInt = format!("0{int}{frac}").parse().expect("digits");
    let scale = i64::from(exponent) - frac.len() as i64;
    if scale.abs() > MAX_DECIMAL_SCALE {
        return Err(format!("exponent out of range in {t:?}"));
    }
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(all);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    if negative {
        value = -value;
    }
    Ok((value, false))
}
