use std::fmt::{Display, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use entropic::cones::{
    extend_partial, local_markov_constraints, project_cone_with, prove_all, CIConstraint,
    Extension, ShannonVerdict,
};
use entropic::entropy::{
    marginal_entropy_vector, marginal_lp as solve_marginal_lp, verify_marginal_lp,
    MarginalLpVerdict, PartialRankVector,
};
use entropic::io::{
    emit_distribution, emit_inequalities, emit_partial, emit_partial_f64, emit_porta, format_row,
    parse_bayes_net, parse_ci, parse_distribution, parse_inequalities, parse_model_with,
    parse_partial_with, parse_porta, parse_scenario, BayesNetFile, DistributionFile,
    InequalityFile, Labels, ModelFile, PartialVectorFile, ScenarioFile,
};
use entropic::polyhedra::{
    InequalitySystem, LinearInequality, ProjectOptions, RankValue, Rational, Redundancy, Sense,
};
use entropic::{Scenario, SubsetIndex};
use num_traits::{FromPrimitive, Zero};
use serde_json::{json, Value};

pub struct Config {
    pub json: bool,
    pub tolerance: f64,
    pub budget: u64,
    pub redundancy: Redundancy,
}

/// What to print, and whether the command found what it was asked to rule out.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

impl Outcome {
    fn new(text: String, pass: bool) -> Self {
        Outcome { text, pass }
    }

    fn json(value: Value, pass: bool) -> Self {
        let mut text = serde_json::to_string_pretty(&value).expect("serializable report");
        text.push('\n');
        Outcome { text, pass }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Scenario references inside model and partial-vector files resolve next to the file.
fn loader(path: &Path) -> impl Fn(&str) -> entropic::Result<String> {
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    move |rel: &str| {
        fs::read_to_string(base.join(rel)).map_err(|e| entropic::Error::Parse {
            line: 0,
            message: format!("scenario {rel:?}: {e}"),
        })
    }
}

enum Input {
    Scenario(ScenarioFile),
    Net(BayesNetFile),
    Model(ModelFile),
    Partial(PartialVectorFile),
    Distribution(DistributionFile),
}

impl Input {
    fn kind(&self) -> &'static str {
        match self {
            Input::Scenario(_) => "scenario",
            Input::Net(_) => "Bayes-net",
            Input::Model(_) => "model",
            Input::Partial(_) => "partial-vector",
            Input::Distribution(_) => "distribution",
        }
    }
}

fn load(path: &Path) -> Result<Input> {
    let text = read(path)?;
    let value: Value =
        serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    let has = |k: &str| value.get(k).is_some();
    let ctx = || format!("parsing {}", path.display());
    Ok(if has("generators") {
        Input::Scenario(parse_scenario(&text).with_context(ctx)?)
    } else if has("edges") {
        Input::Net(parse_bayes_net(&text).with_context(ctx)?)
    } else if has("tables") {
        Input::Model(parse_model_with(&text, loader(path)).with_context(ctx)?)
    } else if has("values") {
        Input::Partial(parse_partial_with(&text, loader(path)).with_context(ctx)?)
    } else if has("table") {
        Input::Distribution(parse_distribution(&text).with_context(ctx)?)
    } else {
        bail!("{}: not a scenario, Bayes-net, model, partial-vector or distribution file", path.display())
    })
}

fn load_ineq(path: &Path) -> Result<InequalityFile> {
    parse_inequalities(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Labels for `[n]`, keeping the given names and naming the rest `A<k>`.
fn widen(labels: &Labels, n: usize) -> Result<Labels> {
    if n <= labels.n() {
        return Ok(labels.clone());
    }
    let mut names = labels.names().to_vec();
    names.extend((labels.n() + 1..=n).map(|k| format!("A{k}")));
    Ok(Labels::new(names)?)
}

fn ground_set(given: Option<usize>, needed: usize) -> Result<usize> {
    match given {
        Some(n) if n < needed => bail!("--n {n} is smaller than the input's ground set {needed}"),
        Some(n) => Ok(n),
        None => Ok(needed),
    }
}

fn load_ci(path: Option<&Path>, labels: &Labels) -> Result<Vec<CIConstraint>> {
    match path {
        None => Ok(Vec::new()),
        Some(p) => parse_ci(&read(p)?, labels).with_context(|| format!("parsing {}", p.display())),
    }
}

fn describe_scenario(s: &Scenario, labels: &Labels) -> String {
    let gens: Vec<String> = s.generators().iter().map(|g| subset_name(*g, labels)).collect();
    format!("{{{}}}", gens.join(", "))
}

fn subset_name(s: SubsetIndex, labels: &Labels) -> String {
    if s.is_empty() {
        "{}".to_string()
    } else {
        labels.format_subset(s)
    }
}

pub fn project(
    cfg: &Config,
    input: &Path,
    n: Option<usize>,
    ci: Option<&Path>,
    output: Option<&Path>,
    porta: bool,
) -> Result<Outcome> {
    let (scenario, labels, mut constraints) = match load(input)? {
        Input::Scenario(f) => (f.scenario, f.labels, Vec::new()),
        Input::Net(f) => {
            let scenario = Scenario::downward_close(&[f.observed], f.net.n())?;
            (scenario, f.labels, local_markov_constraints(&f.net))
        }
        other => bail!("project expects a scenario or Bayes-net file, got a {} file", other.kind()),
    };
    let n = ground_set(n, labels.n())?;
    let labels = widen(&labels, n)?;
    constraints.extend(load_ci(ci, &labels)?);
    let opts = ProjectOptions {
        step: cfg.redundancy,
        last: cfg.redundancy,
        budget: Some(cfg.budget),
        ..ProjectOptions::default()
    };
    let projection = project_cone_with(n, &scenario, &constraints, &opts)?;
    let system = projection.system;
    let file = InequalityFile {
        source: Some(format!(
            "projection of Gamma_{n} onto {}{}",
            describe_scenario(&scenario, &labels),
            if constraints.is_empty() { String::new() } else { format!(" under {} CI constraints", constraints.len()) }
        )),
        labels,
        system,
    };
    let text = emit_inequalities(&file);
    let mut written: Vec<PathBuf> = Vec::new();
    if let Some(out) = output {
        write(out, &text)?;
        written.push(out.to_path_buf());
        if porta {
            let ieq = out.with_extension("ieq");
            write(&ieq, &emit_porta(&file.system))?;
            written.push(ieq);
        }
    }
    if cfg.json {
        let stats = &projection.stats;
        return Ok(Outcome::json(
            json!({
                "command": "project",
                "n": n,
                "coordinates": file.system.coordinates().iter().map(|s| subset_name(*s, &file.labels)).collect::<Vec<_>>(),
                "rows": file.system.rows().iter().map(|r| format_row(r, &file.labels)).collect::<Vec<_>>(),
                "constraints": constraints.len(),
                "derived_pairs": stats.derived,
                "peak_rows": stats.peak_rows,
                "written": written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            }),
            true,
        ));
    }
    if written.is_empty() {
        return Ok(Outcome::new(text, true));
    }
    let mut out = String::new();
    for p in &written {
        let _ = writeln!(out, "wrote {} rows to {}", file.system.len(), p.display());
    }
    Ok(Outcome::new(out, true))
}

enum Values {
    Exact(PartialRankVector<Rational>),
    Approx(PartialRankVector<f64>),
}

fn distribution_entropies(f: &DistributionFile) -> Result<PartialRankVector<f64>> {
    let scenario = Scenario::downward_close(&[f.distribution.support()], f.labels.n())?;
    let values = scenario
        .members()
        .iter()
        .map(|m| f.distribution.entropy_of(*m))
        .collect::<entropic::Result<Vec<f64>>>()?;
    Ok(PartialRankVector::new(scenario, values)?)
}

/// Rational partial vectors are taken as given; everything else is an entropy.
fn load_values(path: &Path) -> Result<(Values, Labels)> {
    Ok(match load(path)? {
        Input::Partial(f) if f.exact => (Values::Exact(f.vector), f.labels),
        Input::Partial(f) => (Values::Approx(f.vector.map(RankValue::to_f64)), f.labels),
        Input::Model(f) => (Values::Approx(marginal_entropy_vector(&f.model)?), f.labels),
        Input::Distribution(f) => {
            let v = distribution_entropies(&f)?;
            (Values::Approx(v), f.labels)
        }
        other => bail!("expected a model, partial-vector or distribution file, got a {} file", other.kind()),
    })
}

fn evaluate<T: RankValue + Display>(
    cfg: &Config,
    file: &InequalityFile,
    v: &PartialRankVector<T>,
    tolerance: f64,
) -> Result<Outcome> {
    let labels = &file.labels;
    let mut rows = Vec::new();
    for (i, row) in file.system.rows().iter().enumerate() {
        let Some(value) = v.evaluate(row) else {
            let missing = row.support().find(|s| !v.scenario().contains(*s)).expect("some term is off-scenario");
            bail!(
                "coordinate mismatch: row {} uses H({}), which the input does not define",
                i + 1,
                subset_name(missing, labels)
            );
        };
        let violated = match row.sense() {
            Sense::GreaterEq => value.below(tolerance),
            Sense::Equal => !value.near_zero(tolerance),
        };
        rows.push((row, value, violated));
    }
    let bad = rows.iter().filter(|r| r.2).count();
    let verdict = if bad == 0 { "PASSES" } else { "CONTEXTUAL" };
    if cfg.json {
        return Ok(Outcome::json(
            json!({
                "command": "check",
                "verdict": verdict,
                "tolerance": tolerance,
                "rows": rows.iter().enumerate().map(|(i, (row, value, violated))| json!({
                    "index": i + 1,
                    "row": format_row(row, labels),
                    "value": value.to_string(),
                    "violated": violated,
                })).collect::<Vec<_>>(),
                "violations": rows.iter().enumerate().filter(|r| r.1 .2).map(|r| r.0 + 1).collect::<Vec<_>>(),
            }),
            bad == 0,
        ));
    }
    let mut out = String::new();
    let _ = if tolerance == 0.0 { writeln!(out, "# {} rows, exact", rows.len()) } else { writeln!(out, "# {} rows, tolerance {tolerance:e}", rows.len()) };
    for (i, (row, value, violated)) in rows.iter().enumerate() {
        let mark = if *violated { "VIOLATED" } else { "ok" };
        let _ = writeln!(out, "{:>4} {mark:<8} {value:>24}  {}", i + 1, format_row(row, labels));
    }
    if bad == 0 {
        let _ = writeln!(out, "verdict: PASSES");
    } else {
        let _ = writeln!(out, "verdict: CONTEXTUAL ({bad} of {} rows violated)", rows.len());
        for (i, (row, value, _)) in rows.iter().enumerate().filter(|r| r.1 .2) {
            let _ = writeln!(out, "  row {}: slack {value}  {}", i + 1, format_row(row, labels));
        }
    }
    Ok(Outcome::new(out, bad == 0))
}

pub fn check(cfg: &Config, input: &Path, inequalities: &Path) -> Result<Outcome> {
    let file = load_ineq(inequalities)?;
    match load_values(input)?.0 {
        Values::Exact(v) => evaluate(cfg, &file, &v, 0.0),
        Values::Approx(v) => evaluate(cfg, &file, &v, cfg.tolerance),
    }
}

fn to_rational(x: f64) -> Result<Rational> {
    Rational::from_f64(x).with_context(|| format!("value {x} is not finite"))
}

pub fn extend(cfg: &Config, input: &Path, n: Option<usize>, ci: Option<&Path>) -> Result<Outcome> {
    let (values, labels) = load_values(input)?;
    let (partial, exact) = match values {
        Values::Exact(v) => (v, true),
        Values::Approx(v) => {
            let vals = v.values().iter().map(|x| to_rational(*x)).collect::<Result<Vec<_>>>()?;
            (PartialRankVector::new(v.scenario().clone(), vals)?, false)
        }
    };
    let n = ground_set(n, labels.n())?;
    let labels = widen(&labels, n)?;
    let constraints = load_ci(ci, &labels)?;
    let result = extend_partial(&partial, n, &constraints)?;
    let feasible = matches!(result, Extension::Feasible(_));
    let verdict = if feasible { "FEASIBLE" } else { "INFEASIBLE" };
    let note = (!exact).then_some("input values are floating point; checked as exact binary fractions");
    let mut out = String::new();
    let mut report = json!({ "command": "extend", "verdict": verdict, "n": n });
    if let Some(note) = note {
        report["note"] = json!(note);
        let _ = writeln!(out, "# {note}");
    }
    let _ = writeln!(out, "verdict: {verdict}");
    match result {
        Extension::Feasible(full) => {
            let full = full.restrict(&Scenario::full(n)?)?;
            let text = emit_partial(&full, &labels);
            report["extension"] = serde_json::from_str(&text).expect("emitted JSON");
            let _ = writeln!(out, "extension:");
            out.push_str(&text);
        }
        Extension::Infeasible { violated } => {
            let value = partial.evaluate(&violated).expect("row lives on the scenario");
            report["violated"] = json!(format_row(&violated, &labels));
            report["value"] = json!(value.to_string());
            let _ = writeln!(out, "violated: {}", format_row(&violated, &labels));
            let _ = writeln!(out, "value: {value}");
        }
    }
    Ok(if cfg.json { Outcome::json(report, feasible) } else { Outcome::new(out, feasible) })
}

fn certificate_lines(system: &InequalitySystem, multipliers: &[Rational], labels: &Labels) -> Vec<String> {
    system
        .rows()
        .iter()
        .zip(multipliers)
        .filter(|(_, m)| !m.is_zero())
        .map(|(row, m)| format!("{m} * [{}]", format_row(row, labels)))
        .collect()
}

fn ray_lines(ray: &entropic::entropy::RankVector<Rational>, labels: &Labels) -> Vec<String> {
    ray.iter()
        .filter(|(s, v)| !s.is_empty() && !v.is_zero())
        .map(|(s, v)| format!("H({}) = {v}", labels.format_subset(s)))
        .collect()
}

pub fn prove(cfg: &Config, inequalities: &Path, n: Option<usize>, ci: Option<&Path>) -> Result<Outcome> {
    let file = load_ineq(inequalities)?;
    let n = ground_set(n, file.system.n())?;
    let labels = widen(&file.labels, n)?;
    let constraints = load_ci(ci, &labels)?;
    let rows = file.system.rows();
    let verdicts = prove_all(rows, n, &constraints)?;
    let proved = verdicts.iter().filter(|v| v.is_provable()).count();
    let all = proved == rows.len();
    let mut out = String::new();
    let mut reports = Vec::new();
    for (i, (row, verdict)) in rows.iter().zip(&verdicts).enumerate() {
        let verified = verdict.verify(row, n, &constraints);
        let _ = writeln!(out, "row {}: {}", i + 1, format_row(row, &labels));
        match verdict {
            ShannonVerdict::Provable { system, multipliers } => {
                let lines = certificate_lines(system, multipliers, &labels);
                let _ = writeln!(out, "  PROVABLE (certificate verified: {verified})");
                for l in &lines {
                    let _ = writeln!(out, "    {l}");
                }
                reports.push(json!({
                    "row": format_row(row, &labels),
                    "verdict": "PROVABLE",
                    "verified": verified,
                    "certificate": lines,
                }));
            }
            ShannonVerdict::NotProvable { ray } => {
                let value = ray.evaluate(row).expect("full vector");
                let lines = ray_lines(ray, &labels);
                let _ = writeln!(out, "  NOT PROVABLE (counterexample verified: {verified}, value {value})");
                for l in &lines {
                    let _ = writeln!(out, "    {l}");
                }
                reports.push(json!({
                    "row": format_row(row, &labels),
                    "verdict": "NOT PROVABLE",
                    "verified": verified,
                    "value": value.to_string(),
                    "counterexample": lines,
                }));
            }
        }
    }
    let _ = writeln!(out, "summary: {proved} of {} rows provable over Gamma_{n}", rows.len());
    if cfg.json {
        return Ok(Outcome::json(
            json!({ "command": "prove", "n": n, "constraints": constraints.len(), "rows": reports }),
            all,
        ));
    }
    Ok(Outcome::new(out, all))
}

fn mixed_radix(sizes: &[usize], mut k: usize) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        out[i] = k % sizes[i];
        k /= sizes[i];
    }
    out
}

pub fn marginal_lp(cfg: &Config, path: &Path, cap: u64) -> Result<Outcome> {
    let ModelFile { model, labels } = match load(path)? {
        Input::Model(f) => f,
        other => bail!("marginal-lp expects a model file, got a {} file", other.kind()),
    };
    let verdict = solve_marginal_lp(&model, cap as u128)?;
    let verified = verify_marginal_lp(&model, &verdict);
    let mut out = String::new();
    let report = match &verdict {
        MarginalLpVerdict::NonContextual { joint } => {
            let text = emit_distribution(&DistributionFile { distribution: joint.clone(), labels: labels.clone() });
            let _ = writeln!(out, "verdict: NON-CONTEXTUAL (joint verified: {verified})");
            let _ = writeln!(out, "joint distribution:");
            out.push_str(&text);
            json!({
                "command": "marginal-lp",
                "verdict": "NON-CONTEXTUAL",
                "verified": verified,
                "joint": serde_json::from_str::<Value>(&text).expect("emitted JSON"),
            })
        }
        MarginalLpVerdict::Contextual { farkas } => {
            let _ = writeln!(out, "verdict: CONTEXTUAL (certificate verified: {verified})");
            let _ = writeln!(out, "farkas weights on marginal probabilities:");
            let mut weights = Vec::new();
            for (g, ys) in model.scenario().generators().iter().zip(farkas) {
                let alphabets: Vec<&[String]> =
                    g.elements().map(|e| model.alphabet(e).expect("observed variable")).collect();
                let sizes: Vec<usize> = alphabets.iter().map(|a| a.len()).collect();
                for (k, y) in ys.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                    let outcome: Vec<&str> = mixed_radix(&sizes, k)
                        .iter()
                        .zip(&alphabets)
                        .map(|(&o, a)| a[o].as_str())
                        .collect();
                    let name = labels.format_subset(*g);
                    let _ = writeln!(out, "  P_{name}({}) : {y}", outcome.join(","));
                    weights.push(json!({ "marginal": name, "outcome": outcome, "weight": y.to_string() }));
                }
            }
            json!({
                "command": "marginal-lp",
                "verdict": "CONTEXTUAL",
                "verified": verified,
                "farkas": weights,
            })
        }
    };
    let pass = !verdict.is_contextual();
    Ok(if cfg.json { Outcome::json(report, pass) } else { Outcome::new(out, pass) })
}

pub fn entropy(_cfg: &Config, path: &Path) -> Result<Outcome> {
    let (v, labels) = match load(path)? {
        Input::Distribution(f) => (distribution_entropies(&f)?, f.labels),
        Input::Model(f) => (marginal_entropy_vector(&f.model)?, f.labels),
        other => bail!("entropy expects a distribution or model file, got a {} file", other.kind()),
    };
    Ok(Outcome::new(emit_partial_f64(&v, &labels), true))
}

pub fn convert(
    input: &Path,
    to_porta: bool,
    n: Option<usize>,
    scenario: Option<&Path>,
    output: Option<&Path>,
) -> Result<Outcome> {
    let text = read(input)?;
    let file = if input.extension().is_some_and(|e| e == "ieq") {
        let (coords, labels) = match scenario {
            Some(p) => {
                let f = parse_scenario(&read(p)?).with_context(|| format!("parsing {}", p.display()))?;
                (f.scenario.nonempty_members().to_vec(), f.labels)
            }
            None => {
                let Some(n) = n else { bail!("a PORTA input needs --n or --scenario") };
                let coords: Vec<SubsetIndex> = SubsetIndex::all(n).into_iter().filter(|s| !s.is_empty()).collect();
                (coords, Labels::default_for(n))
            }
        };
        let n = ground_set(n, labels.n())?;
        let system = parse_porta(&text, n, &coords).with_context(|| format!("parsing {}", input.display()))?;
        InequalityFile { system, labels: widen(&labels, n)?, source: None }
    } else {
        parse_inequalities(&text).with_context(|| format!("parsing {}", input.display()))?
    };
    let rendered = if to_porta { emit_porta(&file.system) } else { emit_inequalities(&file) };
    match output {
        Some(p) => {
            write(p, &rendered)?;
            Ok(Outcome::new(format!("wrote {} rows to {}\n", file.system.len(), p.display()), true))
        }
        None => Ok(Outcome::new(rendered, true)),
    }
}

/// A single row as an inequality file over all nonempty subsets of `[n]`.
pub fn inequality_text(row: LinearInequality, n: usize, source: &str) -> Result<String> {
    let coords: Vec<SubsetIndex> = SubsetIndex::all(n).into_iter().filter(|s| !s.is_empty()).collect();
    let system = InequalitySystem::new(n, coords, vec![row])?;
    Ok(emit_inequalities(&InequalityFile {
        system,
        labels: Labels::default_for(n),
        source: Some(source.to_string()),
    }))
}
