use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::{format_decimal, parse_number, Labels};
use crate::cones::BayesNet;
use crate::entropy::{JointDistribution, MarginalModel, PartialRankVector};
use crate::error::{Error, Result};
use crate::polyhedra::Rational;
use crate::sets::{Scenario, SubsetIndex};

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(e.line(), e.to_string())
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::parse(0, msg)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// A ground element given by label or by 1-based index.
#[derive(Deserialize, Clone, Debug)]
#[serde(untagged)]
enum Element {
    Index(usize),
    Label(String),
}

impl Element {
    fn resolve(&self, labels: &Labels) -> Result<usize> {
        match self {
            Element::Index(i) if (1..=labels.n()).contains(i) => Ok(*i),
            Element::Index(i) => Err(invalid(format!("index {i} outside 1..={}", labels.n()))),
            Element::Label(l) => labels
                .index(l)
                .ok_or_else(|| invalid(format!("unknown label {l:?}"))),
        }
    }
}

fn resolve_set(elems: &[Element], labels: &Labels) -> Result<SubsetIndex> {
    let mut s = SubsetIndex::EMPTY;
    for e in elems {
        s = s.with(e.resolve(labels)?);
    }
    Ok(s)
}

/// Probability or value given as a JSON number or a string.
#[derive(Deserialize, Clone, Debug)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    fn value(&self) -> Result<(Rational, bool)> {
        match self {
            Number::Int(i) => Ok((Rational::from_integer((*i).into()), true)),
            // shortest round-trip decimal of the float, read exactly
            Number::Float(f) => parse_number(&format!("{f:e}")).map_err(invalid),
            Number::Text(t) => parse_number(t).map_err(invalid),
        }
    }
}

fn labels_for(n: usize, names: Option<Vec<String>>) -> Result<Labels> {
    match names {
        None => Ok(Labels::default_for(n)),
        Some(names) if names.len() == n => Labels::new(names).map_err(|e| invalid(e.to_string())),
        Some(names) => Err(invalid(format!("{} labels for n = {n}", names.len()))),
    }
}

fn label_list(s: SubsetIndex, labels: &Labels) -> Value {
    Value::Array(s.elements().map(|i| json!(labels.name(i))).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioFile {
    pub scenario: Scenario,
    pub labels: Labels,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    n: usize,
    labels: Option<Vec<String>>,
    generators: Vec<Vec<Element>>,
}

impl RawScenario {
    fn build(self) -> Result<ScenarioFile> {
        let labels = labels_for(self.n, self.labels)?;
        let gens = self
            .generators
            .iter()
            .map(|g| resolve_set(g, &labels))
            .collect::<Result<Vec<_>>>()?;
        let scenario = Scenario::downward_close(&gens, self.n)?;
        Ok(ScenarioFile { scenario, labels })
    }
}

/// `{"n": .., "labels": [..], "generators": [[..], ..]}`; generators are downward closed.
pub fn parse_scenario(text: &str) -> Result<ScenarioFile> {
    serde_json::from_str::<RawScenario>(text)
        .map_err(json_error)?
        .build()
}

fn scenario_value(scenario: &Scenario, labels: &Labels) -> Value {
    let mut m = Map::new();
    m.insert("n".into(), json!(scenario.n()));
    m.insert("labels".into(), json!(labels.names()));
    m.insert(
        "generators".into(),
        Value::Array(scenario.generators().iter().map(|g| label_list(*g, labels)).collect()),
    );
    Value::Object(m)
}

pub fn emit_scenario(file: &ScenarioFile) -> String {
    pretty(&scenario_value(&file.scenario, &file.labels))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVariable {
    label: Element,
    alphabet: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    variables: Vec<RawVariable>,
    table: Vec<(Vec<String>, Number)>,
}

impl RawTable {
    fn build(&self, labels: &Labels) -> Result<JointDistribution> {
        let mut vars: Vec<(usize, &Vec<String>, usize)> = Vec::new();
        for (pos, v) in self.variables.iter().enumerate() {
            let i = v.label.resolve(labels)?;
            if vars.iter().any(|w| w.0 == i) {
                return Err(invalid(format!("variable {} listed twice", labels.name(i))));
            }
            let mut seen = v.alphabet.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != v.alphabet.len() {
                return Err(invalid(format!("repeated symbol in the alphabet of {}", labels.name(i))));
            }
            vars.push((i, &v.alphabet, pos));
        }
        vars.sort();
        let support = vars.iter().fold(SubsetIndex::EMPTY, |s, v| s.with(v.0));
        let mut exact = true;
        let mut entries = Vec::with_capacity(self.table.len());
        for (outcome, p) in &self.table {
            if outcome.len() != vars.len() {
                return Err(invalid(format!("outcome {outcome:?} has the wrong length")));
            }
            let tuple = vars
                .iter()
                .map(|(i, alphabet, pos)| {
                    alphabet
                        .iter()
                        .position(|a| *a == outcome[*pos])
                        .map(|k| k as u32)
                        .ok_or_else(|| {
                            invalid(format!("{:?} is not in the alphabet of {}", outcome[*pos], labels.name(*i)))
                        })
                })
                .collect::<Result<Vec<u32>>>()?;
            let (value, is_exact) = p.value()?;
            exact &= is_exact;
            entries.push((tuple, value));
        }
        let mut keys: Vec<&Vec<u32>> = entries.iter().map(|e| &e.0).collect();
        keys.sort();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("an outcome is listed twice"));
        }
        let alphabets = vars.iter().map(|v| v.1.clone()).collect();
        JointDistribution::new(support, alphabets, entries, exact)
    }
}

/// Tables read from decimals are written back as decimals, so they stay inexact.
fn table_value(dist: &JointDistribution, labels: &Labels) -> Value {
    let variables: Vec<Value> = dist
        .support()
        .elements()
        .zip(dist.alphabets())
        .map(|(i, a)| json!({"label": labels.name(i), "alphabet": a}))
        .collect();
    let table: Vec<Value> = dist
        .entries()
        .map(|(outcome, p)| {
            let symbols: Vec<&str> = outcome
                .iter()
                .zip(dist.alphabets())
                .map(|(k, a)| a[*k as usize].as_str())
                .collect();
            let text = if dist.is_exact() { None } else { format_decimal(p) };
            json!([symbols, text.unwrap_or_else(|| p.to_string())])
        })
        .collect();
    let mut m = Map::new();
    m.insert("variables".into(), Value::Array(variables));
    m.insert("table".into(), Value::Array(table));
    Value::Object(m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistributionFile {
    pub distribution: JointDistribution,
    pub labels: Labels,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDistribution {
    n: Option<usize>,
    labels: Option<Vec<String>>,
    variables: Vec<RawVariable>,
    table: Vec<(Vec<String>, Number)>,
}

/// `{"n": .., "labels": [..], "variables": [{"label": .., "alphabet": [..]}, ..],
/// "table": [[[symbols..], "p/q"], ..]}`. Without `n` and `labels` the variables must be
/// named `A1`, `A2`, ... or by index.
pub fn parse_distribution(text: &str) -> Result<DistributionFile> {
    let raw: RawDistribution = serde_json::from_str(text).map_err(json_error)?;
    let n = match (raw.n, &raw.labels) {
        (Some(n), _) => n,
        (None, Some(l)) => l.len(),
        (None, None) => raw
            .variables
            .iter()
            .map(|v| match &v.label {
                Element::Index(i) => Ok(*i),
                Element::Label(l) => l
                    .strip_prefix('A')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|i| *i >= 1)
                    .ok_or_else(|| invalid(format!("label {l:?} needs an explicit labels list"))),
            })
            .try_fold(0, |m, i| i.map(|i| m.max(i)))?,
    };
    let labels = labels_for(n, raw.labels)?;
    let table = RawTable {
        variables: raw.variables,
        table: raw.table,
    };
    let distribution = table.build(&labels)?;
    Ok(DistributionFile {
        distribution,
        labels,
    })
}

pub fn emit_distribution(file: &DistributionFile) -> String {
    let mut m = Map::new();
    m.insert("n".into(), json!(file.labels.n()));
    m.insert("labels".into(), json!(file.labels.names()));
    if let Value::Object(t) = table_value(&file.distribution, &file.labels) {
        m.extend(t);
    }
    pretty(&Value::Object(m))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    pub model: MarginalModel,
    pub labels: Labels,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScenarioRef {
    Inline(RawScenario),
    Path(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    scenario: ScenarioRef,
    tables: Vec<RawTable>,
}

/// `{"scenario": {..}, "tables": [..]}` with one table per generator; the scenario may be
/// inline. Path references are rejected; see [`parse_model_with`].
pub fn parse_model(text: &str) -> Result<ModelFile> {
    parse_model_with(text, |p| Err(invalid(format!("cannot resolve scenario path {p:?}"))))
}

/// Like [`parse_model`], loading `"scenario": "<path>"` through `load`.
pub fn parse_model_with(text: &str, load: impl Fn(&str) -> Result<String>) -> Result<ModelFile> {
    let raw: RawModel = serde_json::from_str(text).map_err(json_error)?;
    let ScenarioFile { scenario, labels } = match raw.scenario {
        ScenarioRef::Inline(s) => s.build()?,
        ScenarioRef::Path(p) => parse_scenario(&load(&p)?)?,
    };
    let mut by_support: BTreeMap<SubsetIndex, JointDistribution> = BTreeMap::new();
    for t in &raw.tables {
        let d = t.build(&labels)?;
        let s = d.support();
        if !scenario.generators().contains(&s) {
            return Err(invalid(format!(
                "table over {} is not a generator of the scenario",
                labels.format_subset(s)
            )));
        }
        if by_support.insert(s, d).is_some() {
            return Err(invalid(format!("two tables over {}", labels.format_subset(s))));
        }
    }
    let tables = scenario
        .generators()
        .iter()
        .map(|g| {
            by_support
                .remove(g)
                .ok_or_else(|| invalid(format!("no table for {}", labels.format_subset(*g))))
        })
        .collect::<Result<Vec<_>>>()?;
    let model = MarginalModel::from_generators(scenario, tables)?;
    Ok(ModelFile { model, labels })
}

pub fn emit_model(file: &ModelFile) -> String {
    let scenario = file.model.scenario();
    let tables: Vec<Value> = scenario
        .generators()
        .iter()
        .map(|g| table_value(file.model.table(*g).expect("member"), &file.labels))
        .collect();
    let mut m = Map::new();
    m.insert("scenario".into(), scenario_value(scenario, &file.labels));
    m.insert("tables".into(), Value::Array(tables));
    pretty(&Value::Object(m))
}

/// A partial vector read from a file; `exact` is false when any value was a decimal.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialVectorFile {
    pub vector: PartialRankVector<Rational>,
    pub labels: Labels,
    pub exact: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPartial {
    scenario: ScenarioRef,
    values: Map<String, Value>,
}

/// `{"scenario": {..}, "values": {"A1": "1", "A1A2": "3/2", ..}}`, one value for every
/// nonempty member.
pub fn parse_partial(text: &str) -> Result<PartialVectorFile> {
    parse_partial_with(text, |p| Err(invalid(format!("cannot resolve scenario path {p:?}"))))
}

pub fn parse_partial_with(text: &str, load: impl Fn(&str) -> Result<String>) -> Result<PartialVectorFile> {
    let raw: RawPartial = serde_json::from_str(text).map_err(json_error)?;
    let ScenarioFile { scenario, labels } = match raw.scenario {
        ScenarioRef::Inline(s) => s.build()?,
        ScenarioRef::Path(p) => parse_scenario(&load(&p)?)?,
    };
    let mut values: BTreeMap<SubsetIndex, Rational> = BTreeMap::new();
    let mut exact = true;
    for (key, v) in raw.values {
        let s = labels.parse_subset(&key).map_err(invalid)?;
        if !scenario.contains(s) {
            return Err(invalid(format!("{key:?} is not a member of the scenario")));
        }
        let number: Number = serde_json::from_value(v).map_err(json_error)?;
        let (x, e) = number.value()?;
        exact &= e;
        if values.insert(s, x).is_some() {
            return Err(invalid(format!("two values for {key:?}")));
        }
    }
    values.entry(SubsetIndex::EMPTY).or_insert_with(|| Rational::from_integer(0.into()));
    if let Some(missing) = scenario.members().iter().find(|s| !values.contains_key(s)) {
        return Err(invalid(format!("no value for {}", labels.format_subset(*missing))));
    }
    let vector = PartialRankVector::from_fn(scenario, |s| values[&s].clone())?;
    Ok(PartialVectorFile {
        vector,
        labels,
        exact,
    })
}

fn partial_value(scenario: &Scenario, labels: &Labels, values: impl Iterator<Item = (SubsetIndex, Value)>) -> String {
    let mut vals = Map::new();
    for (s, v) in values {
        if !s.is_empty() {
            vals.insert(labels.format_subset(s), v);
        }
    }
    let mut m = Map::new();
    m.insert("scenario".into(), scenario_value(scenario, labels));
    m.insert("values".into(), Value::Object(vals));
    pretty(&Value::Object(m))
}

/// Exact values as `p/q` strings.
pub fn emit_partial(vector: &PartialRankVector<Rational>, labels: &Labels) -> String {
    partial_value(
        vector.scenario(),
        labels,
        vector.iter().map(|(s, v)| (s, json!(v.to_string()))),
    )
}

/// Entropy values as shortest round-trip decimals.
pub fn emit_partial_f64(vector: &PartialRankVector<f64>, labels: &Labels) -> String {
    partial_value(
        vector.scenario(),
        labels,
        vector.iter().map(|(s, v)| (s, json!(format!("{v:?}")))),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct BayesNetFile {
    pub net: BayesNet,
    pub labels: Labels,
    pub observed: SubsetIndex,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNet {
    n: usize,
    labels: Option<Vec<String>>,
    edges: Vec<(Element, Element)>,
    observed: Vec<Element>,
}

/// `{"n": .., "labels": [..], "edges": [[u, v], ..], "observed": [..]}`.
pub fn parse_bayes_net(text: &str) -> Result<BayesNetFile> {
    let raw: RawNet = serde_json::from_str(text).map_err(json_error)?;
    let labels = labels_for(raw.n, raw.labels)?;
    let edges = raw
        .edges
        .iter()
        .map(|(u, v)| Ok((u.resolve(&labels)?, v.resolve(&labels)?)))
        .collect::<Result<Vec<_>>>()?;
    let net = BayesNet::new(raw.n, edges)?;
    let observed = resolve_set(&raw.observed, &labels)?;
    Ok(BayesNetFile {
        net,
        labels,
        observed,
    })
}

pub fn emit_bayes_net(file: &BayesNetFile) -> String {
    let l = &file.labels;
    let edges: Vec<Value> = file
        .net
        .edges()
        .iter()
        .map(|(u, v)| json!([l.name(*u), l.name(*v)]))
        .collect();
    let mut m = Map::new();
    m.insert("n".into(), json!(file.net.n()));
    m.insert("labels".into(), json!(l.names()));
    m.insert("edges".into(), Value::Array(edges));
    m.insert("observed".into(), label_list(file.observed, l));
    pretty(&Value::Object(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{fzy_fixture, realize_zy_model, trianglebox};
    use crate::polyhedra::ratio;

    #[test]
    fn scenario_round_trip() {
        let text = r#"{"n": 3, "generators": [["A1", "A2"], [2, 3], ["A1", "A3"]]}"#;
        let f = parse_scenario(text).unwrap();
        assert_eq!(f.scenario, Scenario::cycle(3).unwrap());
        assert_eq!(parse_scenario(&emit_scenario(&f)).unwrap(), f);
        assert!(parse_scenario(r#"{"n": 2, "generators": [["A3"]]}"#).is_err());
        assert!(parse_scenario(r#"{"n": 2, "generators": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn distribution_round_trip() {
        let text = r#"{"variables": [{"label": "A2", "alphabet": ["a", "b"]},
                                     {"label": "A1", "alphabet": ["x"]}],
                       "table": [[["a", "x"], "1/4"], [["b", "x"], 0.75]]}"#;
        let f = parse_distribution(text).unwrap();
        assert_eq!(f.labels.n(), 2);
        assert!(!f.distribution.is_exact());
        assert_eq!(f.distribution.probability(&[0, 1]), ratio(3, 4));
        let again = parse_distribution(&emit_distribution(&f)).unwrap();
        assert_eq!(again, f);
        assert!(emit_distribution(&f).contains(r#""0.25""#));
        assert!(parse_distribution(r#"{"variables": [{"label": "A1", "alphabet": ["a"]}], "table": [[["a"], "1/2"]]}"#).is_err());
    }

    #[test]
    fn model_round_trip() {
        for model in [trianglebox(), realize_zy_model()] {
            let n = model.scenario().n();
            let f = ModelFile { model, labels: Labels::default_for(n) };
            let text = emit_model(&f);
            assert_eq!(parse_model(&text).unwrap(), f);
        }
    }

    #[test]
    fn partial_round_trip() {
        let v = fzy_fixture();
        let labels = Labels::new(["w", "x", "y", "z"].iter().map(|s| s.to_string()).collect()).unwrap();
        let text = emit_partial(&v, &labels);
        assert!(text.contains("\"wx\": \"4\""));
        let f = parse_partial(&text).unwrap();
        assert_eq!((f.vector, f.labels, f.exact), (v, labels, true));
    }

    #[test]
    fn bayes_net_round_trip() {
        let text = r#"{"n": 3, "edges": [["A1", "A2"], [2, 3]], "observed": ["A1", "A3"]}"#;
        let f = parse_bayes_net(text).unwrap();
        assert_eq!(f.observed, SubsetIndex::of(&[1, 3]));
        assert_eq!(parse_bayes_net(&emit_bayes_net(&f)).unwrap(), f);
        assert!(parse_bayes_net(r#"{"n": 2, "edges": [[1, 2], [2, 1]], "observed": []}"#).is_err());
    }
}
