use anyhow::{bail, Result};
use entropic::analytic::{
    commoninfo, commoninfo2, cycle_contextual_model, cycle_inequalities, figure_baynet,
    figure_baynet_listed_constraints, fzy_fixture, local_basic_inequalities, realize_zy_model,
    triangle_correlated, triangle_puc, trianglebox, zhang_yeung, FIGURE_BAYNET_OBSERVED,
};
use entropic::cones::{elemental_system, local_markov_constraints};
use entropic::entropy::MarginalModel;
use entropic::io::{
    emit_bayes_net, emit_ci, emit_inequalities, emit_model, emit_partial, emit_scenario,
    BayesNetFile, InequalityFile, Labels, ModelFile, ScenarioFile,
};
use entropic::polyhedra::InequalitySystem;
use entropic::{Scenario, SubsetIndex};

use crate::commands::{inequality_text, Outcome};

const NAMES: &[(&str, &str)] = &[
    ("trianglebox", "model: three coins, two pairs equal, one pair opposite"),
    ("triangle-puc", "model: three coins, two pairs equal, one pair independent"),
    ("triangle-correlated", "model: three perfectly correlated coins"),
    ("cycle-model", "model on C_n (--n, default 3) violating the i = n cycle row"),
    ("realize-zy", "model whose entropies are the fzy vector"),
    ("fzy", "partial vector on the Zhang-Yeung scenario"),
    ("zhang-yeung", "inequality: the Zhang-Yeung inequality"),
    ("cycle-inequalities", "inequalities: the n cycle rows on C_n (--n, default 3)"),
    ("local-basic", "inequalities: local basic rows on C_n (--n, default 3)"),
    ("elemental", "inequalities: elemental system of Gamma_n (--n, default 3)"),
    ("cycle-scenario", "scenario: the n-cycle (--n, default 3)"),
    ("zy-scenario", "scenario: {A1A3A4, A2A3A4, A1A2}"),
    ("figure-baynet", "Bayes net: hidden 2, 4, 6 feeding observed 1, 3, 5"),
    ("figure-baynet-ci", "CI constraints: local Markov conditions of figure-baynet"),
    ("figure-baynet-listed-ci", "CI constraints: six pairwise consequences of them"),
    ("commoninfo", "inequality: 2 H(A1A3A5) >= H(A1) + H(A3) + H(A5)"),
    ("commoninfo2", "inequality: the sharper common-information bound on figure-baynet"),
];

fn model(m: MarginalModel) -> String {
    let n = m.scenario().n();
    emit_model(&ModelFile { model: m, labels: Labels::default_for(n) })
}

fn scenario(s: Scenario) -> String {
    let n = s.n();
    emit_scenario(&ScenarioFile { scenario: s, labels: Labels::default_for(n) })
}

fn system(sys: InequalitySystem, source: &str) -> String {
    let mut file = InequalityFile::new(sys);
    file.source = Some(source.to_string());
    emit_inequalities(&file)
}

pub fn emit(name: &str, n: Option<usize>) -> Result<Outcome> {
    let size = n.unwrap_or(3);
    let text = match name {
        "list" => NAMES.iter().map(|(k, d)| format!("{k:<24} {d}\n")).collect(),
        "trianglebox" => model(trianglebox()),
        "triangle-puc" | "trianglePuc" => model(triangle_puc()),
        "triangle-correlated" => model(triangle_correlated()),
        "cycle-model" => model(cycle_contextual_model(size)?),
        "realize-zy" => model(realize_zy_model()),
        "fzy" => emit_partial(&fzy_fixture(), &Labels::default_for(4)),
        "zhang-yeung" => {
            let coords = Scenario::zhang_yeung().nonempty_members().to_vec();
            system(InequalitySystem::new(4, coords, vec![zhang_yeung()])?, "Zhang-Yeung inequality")
        }
        "cycle-inequalities" => system(cycle_inequalities(size)?, &format!("cycle inequalities, n = {size}")),
        "local-basic" => system(local_basic_inequalities(size)?, &format!("local basic inequalities, n = {size}")),
        "elemental" => system(elemental_system(size)?, &format!("elemental inequalities, n = {size}")),
        "cycle-scenario" => scenario(Scenario::cycle(size)?),
        "zy-scenario" => scenario(Scenario::zhang_yeung()),
        "figure-baynet" => emit_bayes_net(&BayesNetFile {
            net: figure_baynet(),
            labels: Labels::default_for(6),
            observed: SubsetIndex::of(&FIGURE_BAYNET_OBSERVED),
        }),
        "figure-baynet-ci" => emit_ci(&local_markov_constraints(&figure_baynet()), &Labels::default_for(6)),
        "figure-baynet-listed-ci" => emit_ci(&figure_baynet_listed_constraints(), &Labels::default_for(6)),
        "commoninfo" => inequality_text(commoninfo(), 6, "common information bound")?,
        "commoninfo2" => inequality_text(commoninfo2(), 6, "sharpened common information bound")?,
        other => bail!("unknown fixture {other:?}; try `entropic fixture list`"),
    };
    if n.is_some() && !matches!(name, "cycle-model" | "cycle-inequalities" | "local-basic" | "elemental" | "cycle-scenario") {
        bail!("fixture {name:?} takes no --n");
    }
    Ok(Outcome { text, pass: true })
}
