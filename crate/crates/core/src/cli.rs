//! Command-line front end: scenario files, pipeline orchestration, and
//! deterministic report emission.
//!
//! A scenario file carries the branch data of both covers, the generator
//! images of the twisting automorphism, an optional certificate reference,
//! and an optional block of expected values. Each expected value becomes an
//! oracle check in the report; the process exits nonzero when any check
//! fails. Output is byte-identical across runs, in plain-table or
//! schema-versioned JSON form. Builtin scenarios are `surface1` through
//! `surface4` and `scan`; `surfaceN_lambda0` selects surface N at λ = 0.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::chars::{decompose, CharError, Irrep};
use crate::covers::{
    builtin_canonical_decomposition, canonical_character, genus_rh, validate_cover, BranchDatum,
    CoverDescriptor, CoverError,
};
use crate::exactnum::rat;
use crate::forms::{
    check_table_basis, invariant_tensors, table_basis, verify_homomorphism, FormsError,
    TensorForm, Which,
};
use crate::group::{
    automorphism_from_images, named_automorphism, FiniteGroup, GElem, GroupAutomorphism,
    GroupError, GROUP_ORDER,
};
use crate::intersect::{
    alternate_certificate, builtin_certificate, degree_from_certificate, parse_certificate,
    validate_certificate, verify_component_table, IntersectError,
};
use crate::prodquot::{
    pg_by_characters, scan_automorphisms, singularity_profile, surface_invariants, LambdaRegime,
    ProdError, SurfaceSpec,
};

/// Version stamp of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Errors from scenario loading and pipeline execution.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read scenario '{path}': {reason}")]
    ScenarioRead { path: String, reason: String },
    #[error("scenario parse failure: {0}")]
    Parse(String),
    #[error("scenario '{0}' declares no automorphism, which this command needs")]
    MissingPsi(String),
    #[error("cannot read certificate '{path}': {reason}")]
    CertificateRead { path: String, reason: String },
    #[error("group: {0}")]
    Group(#[from] GroupError),
    #[error("covers: {0}")]
    Cover(#[from] CoverError),
    #[error("characters: {0}")]
    Chars(#[from] CharError),
    #[error("surface: {0}")]
    Prod(#[from] ProdError),
    #[error("forms: {0}")]
    Forms(#[from] FormsError),
    #[error("intersection: {0}")]
    Intersect(#[from] IntersectError),
}

/// The pipeline commands, declared in dependency order.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    VerifyActions,
    Genus,
    Characters,
    Forms,
    Invariants,
    Degree,
    Scan,
}

impl CommandKind {
    fn name(self) -> &'static str {
        match self {
            CommandKind::VerifyActions => "verify-actions",
            CommandKind::Genus => "genus",
            CommandKind::Characters => "characters",
            CommandKind::Forms => "forms",
            CommandKind::Invariants => "invariants",
            CommandKind::Degree => "degree",
            CommandKind::Scan => "scan",
        }
    }
}

/// Report rendering format.
#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

/// One pipeline invocation.
#[derive(Clone, Debug)]
pub struct JobConfig {
    /// Builtin scenario name or path to a scenario file.
    pub scenario: String,
    /// Commands to run; `None` picks the scenario's full command set.
    pub commands: Option<Vec<CommandKind>>,
    pub format: OutputFormat,
    pub lambda: LambdaRegime,
}

/// Expected values a scenario declares; each becomes an oracle check.
#[derive(Clone, Debug, Default, Deserialize)]
pub struct Expected {
    pub genus: Option<[u64; 2]>,
    pub node_count: Option<u64>,
    pub only_nodes: Option<bool>,
    pub k_squared: Option<i64>,
    pub chi: Option<i64>,
    pub p_g: Option<i64>,
    pub q: Option<i64>,
    pub invariant_forms: Option<usize>,
    pub degree_generic: Option<i64>,
    pub degree_lambda0: Option<i64>,
    pub correction_generic: Option<i64>,
    pub correction_lambda0: Option<i64>,
    pub automorphisms: Option<usize>,
    pub only_nodes_rows: Option<usize>,
}

/// A loaded scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub description: Option<String>,
    /// 1..=4 when the scenario is one of the builtin surfaces.
    pub builtin_index: Option<usize>,
    pub c1: CoverDescriptor,
    pub c2: CoverDescriptor,
    pub psi: Option<GroupAutomorphism>,
    pub certificate_path: Option<String>,
    pub expected: Expected,
}

#[derive(Deserialize)]
struct ScenarioFile {
    name: String,
    #[serde(default)]
    description: Option<String>,
    curve1: CurveSection,
    curve2: CurveSection,
    #[serde(default)]
    psi: Option<PsiSection>,
    #[serde(default)]
    certificate: Option<String>,
    #[serde(default)]
    expected: Expected,
}

#[derive(Deserialize)]
struct CurveSection {
    name: String,
    branches: Vec<BranchRow>,
}

#[derive(Deserialize)]
struct BranchRow {
    label: String,
    gen: [i64; 4],
    m: u32,
    orbit: u64,
}

#[derive(Deserialize)]
struct PsiSection {
    sigma: [i64; 4],
    tau: [i64; 4],
    e1: [i64; 4],
    e2: [i64; 4],
}

fn gelem(raw: [i64; 4]) -> GElem {
    GElem::new(raw[0], raw[1], raw[2], raw[3])
}

fn build_cover(section: &CurveSection) -> Result<CoverDescriptor, CliError> {
    let mut branches = Vec::new();
    for row in &section.branches {
        let datum = BranchDatum::new(row.label.clone(), gelem(row.gen), row.orbit);
        if datum.m != row.m {
            return Err(CliError::Parse(format!(
                "branch '{}' declares order {}, but its generator has order {}",
                row.label, row.m, datum.m
            )));
        }
        branches.push(datum);
    }
    Ok(CoverDescriptor {
        name: section.name.clone(),
        group_order: GROUP_ORDER as u64,
        branches,
    })
}

/// Parses scenario text.
pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let c1 = build_cover(&file.curve1)?;
    let c2 = build_cover(&file.curve2)?;
    let psi = match &file.psi {
        None => None,
        Some(p) => Some(automorphism_from_images(
            FiniteGroup::builtin(),
            gelem(p.sigma),
            gelem(p.tau),
            gelem(p.e1),
            gelem(p.e2),
        )?),
    };
    let builtin_index = file
        .name
        .strip_prefix("surface")
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|n| (1..=4).contains(n));
    Ok(Scenario {
        name: file.name,
        description: file.description,
        builtin_index,
        c1,
        c2,
        psi,
        certificate_path: file.certificate,
        expected: file.expected,
    })
}

/// Loads a builtin scenario by name, or any scenario file by path.
pub fn load_scenario(name_or_path: &str) -> Result<Scenario, CliError> {
    let text = match name_or_path {
        "surface1" => include_str!("../data/scenarios/surface1.toml").to_string(),
        "surface2" => include_str!("../data/scenarios/surface2.toml").to_string(),
        "surface3" => include_str!("../data/scenarios/surface3.toml").to_string(),
        "surface4" => include_str!("../data/scenarios/surface4.toml").to_string(),
        "scan" => include_str!("../data/scenarios/scan.toml").to_string(),
        path => std::fs::read_to_string(path).map_err(|e| CliError::ScenarioRead {
            path: path.into(),
            reason: e.to_string(),
        })?,
    };
    parse_scenario(&text)
}

/// One expected-vs-actual comparison.
#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// Output of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub command: String,
    pub lines: Vec<(String, String)>,
    pub checks: Vec<OracleCheck>,
}

impl Section {
    fn new(command: CommandKind) -> Self {
        Section { command: command.name().into(), lines: Vec::new(), checks: Vec::new() }
    }

    fn line(&mut self, key: impl Into<String>, value: impl std::fmt::Display) {
        self.lines.push((key.into(), value.to_string()));
    }

    fn check(
        &mut self,
        label: impl Into<String>,
        expected: impl std::fmt::Display,
        actual: impl std::fmt::Display,
    ) {
        let expected = expected.to_string();
        let actual = actual.to_string();
        let pass = expected == actual;
        self.checks.push(OracleCheck { label: label.into(), expected, actual, pass });
    }
}

/// The five-column row of the main table: number, automorphism, basis,
/// projective canonical map, degree.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub number: Option<usize>,
    pub psi: String,
    pub basis: Vec<String>,
    pub map: Vec<String>,
    pub degree: i64,
}

/// A full pipeline report.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub scenario: String,
    pub lambda: String,
    pub sections: Vec<Section>,
    pub table_row: Option<TableRow>,
}

/// True when every oracle check in the report passed.
pub fn report_passes(report: &Report) -> bool {
    report.sections.iter().all(|s| s.checks.iter().all(|c| c.pass))
}

fn lambda_name(lambda: LambdaRegime) -> &'static str {
    match lambda {
        LambdaRegime::Generic => "generic",
        LambdaRegime::Zero => "zero",
    }
}

fn make_spec(scenario: &Scenario, lambda: LambdaRegime) -> Result<SurfaceSpec, CliError> {
    let psi = scenario.psi.clone().ok_or_else(|| CliError::MissingPsi(scenario.name.clone()))?;
    Ok(SurfaceSpec {
        name: scenario.name.clone(),
        c1: scenario.c1.clone(),
        c2: scenario.c2.clone(),
        psi,
        lambda_regime: lambda,
    })
}

fn psi_string(psi: &GroupAutomorphism) -> String {
    if *psi == GroupAutomorphism::identity() {
        return "Id".into();
    }
    let [s, t, e1, e2] = psi.generator_images();
    format!("σ↦{s}, τ↦{t}, e1↦{e1}, e2↦{e2}")
}

fn decomposition_string(decomp: &[(Irrep, u64)]) -> String {
    let mut parts = Vec::new();
    for (irrep, mult) in decomp {
        if *mult == 1 {
            parts.push(irrep.label());
        } else {
            parts.push(format!("{mult}·{}", irrep.label()));
        }
    }
    parts.join(" + ")
}

fn join_list<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn run_verify_actions(scenario: &Scenario) -> Section {
    let mut s = Section::new(CommandKind::VerifyActions);
    for c in [&scenario.c1, &scenario.c2] {
        match validate_cover(c) {
            Ok(report) => {
                s.line(format!("{} orbit lengths", c.name), join_list(report.orbit_lengths));
                s.line(format!("{} genus", c.name), report.genus);
                s.check(format!("{} cover data", c.name), "valid", "valid");
                s.line(
                    format!("{} spherical generators", c.name),
                    join_list(report.spherical.iter()),
                );
                s.check(
                    format!("{} spherical realization", c.name),
                    "found",
                    if report.spherical.is_empty() { "missing" } else { "found" },
                );
            }
            Err(e) => s.check(format!("{} cover data", c.name), "valid", e),
        }
    }
    for which in [Which::C1, Which::C2] {
        let verdict = match verify_homomorphism(which) {
            Ok(()) => "ok".to_string(),
            Err(e) => e.to_string(),
        };
        s.check(format!("action matrices on {which}"), "ok", verdict);
    }
    let verdict = match verify_component_table() {
        Ok(()) => "ok".to_string(),
        Err(e) => e.to_string(),
    };
    s.check("component pairing table", "ok", verdict);
    s
}

fn run_genus(scenario: &Scenario) -> Result<Section, CliError> {
    let mut s = Section::new(CommandKind::Genus);
    let g1 = genus_rh(&scenario.c1)?;
    let g2 = genus_rh(&scenario.c2)?;
    s.line(format!("{} genus", scenario.c1.name), g1);
    s.line(format!("{} genus", scenario.c2.name), g2);
    if let Some([e1, e2]) = scenario.expected.genus {
        s.check(format!("{} genus", scenario.c1.name), e1, g1);
        s.check(format!("{} genus", scenario.c2.name), e2, g2);
    }
    Ok(s)
}

fn run_characters(scenario: &Scenario) -> Result<Section, CliError> {
    let mut s = Section::new(CommandKind::Characters);
    for c in [&scenario.c1, &scenario.c2] {
        let chi = canonical_character(c)?;
        let decomp = decompose(&chi, FiniteGroup::builtin())?;
        let dim: u64 = decomp.iter().map(|(irrep, mult)| irrep.dim() * mult).sum();
        s.line(format!("χ_can({})", c.name), decomposition_string(&decomp));
        s.line(format!("dim χ_can({})", c.name), dim);
        if let Some(reference) = builtin_canonical_decomposition(&c.name) {
            s.check(
                format!("χ_can({}) decomposition", c.name),
                "matches the reference table",
                if decomp == reference {
                    "matches the reference table".to_string()
                } else {
                    decomposition_string(&decomp)
                },
            );
        }
    }
    Ok(s)
}

fn run_forms(
    scenario: &Scenario,
    lambda: LambdaRegime,
) -> Result<(Section, Vec<TensorForm>), CliError> {
    let spec = make_spec(scenario, lambda)?;
    let mut s = Section::new(CommandKind::Forms);
    let invariants = invariant_tensors(&spec.psi)?;
    s.line("invariant 2-forms", invariants.len());
    if let Some(expected) = scenario.expected.invariant_forms {
        s.check("invariant 2-form count", expected, invariants.len());
    }
    let basis = match scenario.builtin_index {
        Some(n) => {
            let claimed = table_basis(n);
            let verdict = match check_table_basis(&spec.psi, &claimed) {
                Ok(()) => "verified".to_string(),
                Err(e) => e.to_string(),
            };
            s.check("published basis", "verified", verdict);
            claimed
        }
        None => invariants,
    };
    for (k, form) in basis.iter().enumerate() {
        s.line(format!("form {}", k + 1), form.six_index_string());
        s.line(format!("form {} as monomials", k + 1), form.monomial_string());
    }
    Ok((s, basis))
}

fn run_invariants(scenario: &Scenario, lambda: LambdaRegime) -> Result<Section, CliError> {
    let spec = make_spec(scenario, lambda)?;
    let mut s = Section::new(CommandKind::Invariants);
    let profile = singularity_profile(&spec);
    s.line("node count", profile.node_count);
    s.line("only nodes", profile.only_nodes);
    if !profile.only_nodes {
        s.line("offending elements", join_list(profile.offending_elements.iter()));
    }
    let inv = surface_invariants(&spec)?;
    let pg_dual = pg_by_characters(&spec)?;
    s.line("K²", inv.k_squared);
    s.line("χ(O)", &inv.chi);
    s.line("p_g", inv.p_g);
    s.line("q", inv.q);
    s.line("p_g via characters", pg_dual);
    let e = &scenario.expected;
    if let Some(x) = e.node_count {
        s.check("node count", x, profile.node_count);
    }
    if let Some(x) = e.only_nodes {
        s.check("only nodes", x, profile.only_nodes);
    }
    if let Some(x) = e.k_squared {
        s.check("K²", x, inv.k_squared);
    }
    if let Some(x) = e.chi {
        s.check("χ(O)", rat(x), &inv.chi);
    }
    if let Some(x) = e.p_g {
        s.check("p_g", x, inv.p_g);
    }
    if let Some(x) = e.q {
        s.check("q", x, inv.q);
    }
    s.check("p_g dual route", inv.p_g, pg_dual);
    Ok(s)
}

fn run_degree(
    scenario: &Scenario,
    lambda: LambdaRegime,
) -> Result<(Section, i64), CliError> {
    let spec = make_spec(scenario, lambda)?;
    let mut s = Section::new(CommandKind::Degree);
    let cert = match &scenario.certificate_path {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::CertificateRead {
                    path: path.clone(),
                    reason: e.to_string(),
                })?;
            parse_certificate(&text)?
        }
        None => builtin_certificate(&spec.name, lambda)?,
    };
    let validation = validate_certificate(&spec, &cert)?;
    let report = degree_from_certificate(&spec, &cert)?;
    s.line("certificate", &cert.name);
    for (label, cls) in &validation.divisor_classes {
        s.line(format!("class({label})"), cls);
    }
    for (label, correction) in &validation.family_corrections {
        s.line(format!("correction[{label}]"), correction);
    }
    for (x, y, contribution, pairing) in &validation.pairwise {
        s.line(format!("{x}·{y} local/numerical"), format!("{contribution}/{pairing}"));
    }
    s.line("T²", report.t_squared);
    s.line("total correction", report.total_correction);
    s.line("M̂²", report.m_hat_squared);
    s.line("degree", report.degree);
    if let Some(alt) = alternate_certificate(&spec.name, lambda) {
        match degree_from_certificate(&spec, &alt) {
            Ok(r) => s.line(
                format!("alternate reading ({})", alt.name),
                format!("correction {}, degree {}", r.total_correction, r.degree),
            ),
            Err(e) => s.line(format!("alternate reading ({})", alt.name), format!("invalid: {e}")),
        }
    }
    let e = &scenario.expected;
    let (expected_degree, expected_correction) = match lambda {
        LambdaRegime::Generic => (e.degree_generic, e.correction_generic),
        LambdaRegime::Zero => (e.degree_lambda0, e.correction_lambda0),
    };
    if let Some(x) = expected_degree {
        s.check("degree", x, report.degree);
    }
    if let Some(x) = expected_correction {
        s.check("total correction", x, report.total_correction);
    }
    s.check(
        "degree·54 + correction",
        report.t_squared,
        report.degree * 54 + report.total_correction,
    );
    Ok((s, report.degree))
}

fn run_scan(scenario: &Scenario) -> Result<Section, CliError> {
    let mut s = Section::new(CommandKind::Scan);
    let scan = scan_automorphisms(&scenario.c1, &scenario.c2);
    s.line("automorphisms", scan.rows.len());
    s.line("only-nodes rows", scan.only_nodes_rows.len());
    for row in &scan.rows {
        let [sig, tau, e1, e2] = row.images;
        s.line(
            format!("#{:03}", row.index),
            format!(
                "σ↦{sig}, τ↦{tau}, e1↦{e1}, e2↦{e2} | nodes={}{} | p_g={}",
                row.node_count,
                if row.only_nodes { " (only nodes)" } else { "" },
                row.p_g
            ),
        );
    }
    let e = &scenario.expected;
    if let Some(x) = e.automorphisms {
        s.check("automorphism count", x, scan.rows.len());
    }
    if let Some(x) = e.only_nodes_rows {
        s.check("only-nodes count", x, scan.only_nodes_rows.len());
    }
    for n in 1..=4usize {
        let images = named_automorphism(n).generator_images();
        let actual = scan
            .rows
            .iter()
            .find(|r| r.images == images)
            .map(|r| {
                if r.only_nodes && r.p_g == 3 {
                    "only nodes, p_g 3".to_string()
                } else {
                    format!("nodes {} only_nodes {} p_g {}", r.node_count, r.only_nodes, r.p_g)
                }
            })
            .unwrap_or_else(|| "missing from scan".into());
        s.check(format!("twist {n} in the scan"), "only nodes, p_g 3", actual);
    }
    Ok(s)
}

fn table_row(scenario: &Scenario, basis: &[TensorForm], degree: i64) -> Option<TableRow> {
    let psi = scenario.psi.as_ref()?;
    Some(TableRow {
        number: scenario.builtin_index,
        psi: psi_string(psi),
        basis: basis.iter().map(|f| f.six_index_string()).collect(),
        map: basis.iter().map(|f| f.monomial_string()).collect(),
        degree,
    })
}

/// Executes the requested commands in dependency order and assembles the
/// report. The scenario name `surfaceN_lambda0` is shorthand for the
/// builtin surface N at λ = 0.
pub fn run_pipeline(cfg: &JobConfig) -> Result<Report, CliError> {
    let (name, lambda) = match cfg.scenario.strip_suffix("_lambda0") {
        Some(stem) if matches!(stem, "surface1" | "surface2" | "surface3" | "surface4") => {
            (stem.to_string(), LambdaRegime::Zero)
        }
        _ => (cfg.scenario.clone(), cfg.lambda),
    };
    let scenario = load_scenario(&name)?;
    let mut commands = match &cfg.commands {
        Some(list) => list.clone(),
        None => {
            if scenario.psi.is_some() {
                vec![
                    CommandKind::VerifyActions,
                    CommandKind::Genus,
                    CommandKind::Characters,
                    CommandKind::Forms,
                    CommandKind::Invariants,
                    CommandKind::Degree,
                ]
            } else {
                vec![CommandKind::Scan]
            }
        }
    };
    commands.sort_unstable();
    commands.dedup();
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        scenario: scenario.name.clone(),
        lambda: lambda_name(lambda).into(),
        sections: Vec::new(),
        table_row: None,
    };
    let mut basis: Option<Vec<TensorForm>> = None;
    let mut degree: Option<i64> = None;
    for cmd in commands {
        let section = match cmd {
            CommandKind::VerifyActions => run_verify_actions(&scenario),
            CommandKind::Genus => run_genus(&scenario)?,
            CommandKind::Characters => run_characters(&scenario)?,
            CommandKind::Forms => {
                let (s, b) = run_forms(&scenario, lambda)?;
                basis = Some(b);
                s
            }
            CommandKind::Invariants => run_invariants(&scenario, lambda)?,
            CommandKind::Degree => {
                let (s, d) = run_degree(&scenario, lambda)?;
                degree = Some(d);
                s
            }
            CommandKind::Scan => run_scan(&scenario)?,
        };
        report.sections.push(section);
    }
    if let (Some(basis), Some(degree)) = (basis, degree) {
        report.table_row = table_row(&scenario, &basis, degree);
    }
    Ok(report)
}

/// Renders a report. Table output is plain aligned text; JSON output is
/// schema-versioned and loss-free.
pub fn emit(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut text =
                serde_json::to_string_pretty(report).expect("report serializes");
            text.push('\n');
            text
        }
        OutputFormat::Table => {
            let mut out = String::new();
            out.push_str(&format!(
                "scenario {} (λ = {})\n",
                report.scenario, report.lambda
            ));
            let mut passed = 0usize;
            let mut failed = 0usize;
            for section in &report.sections {
                out.push_str(&format!("\n[{}]\n", section.command));
                for (key, value) in &section.lines {
                    out.push_str(&format!("  {key}: {value}\n"));
                }
                for check in &section.checks {
                    if check.pass {
                        passed += 1;
                        out.push_str(&format!("  ok   {} = {}\n", check.label, check.actual));
                    } else {
                        failed += 1;
                        out.push_str(&format!(
                            "  FAIL {}: expected {}, got {}\n",
                            check.label, check.expected, check.actual
                        ));
                    }
                }
            }
            if let Some(row) = &report.table_row {
                out.push_str("\n[table row]\n");
                let number =
                    row.number.map(|n| n.to_string()).unwrap_or_else(|| "-".into());
                out.push_str(&format!("  no.    : {number}\n"));
                out.push_str(&format!("  Ψ      : {}\n", row.psi));
                out.push_str(&format!("  basis  : {}\n", row.basis.join(" ; ")));
                out.push_str(&format!("  Φ      : ({})\n", row.map.join(" : ")));
                out.push_str(&format!("  degree : {}\n", row.degree));
            }
            out.push_str(&format!("\nchecks: {passed} passed, {failed} failed\n"));
            out
        }
    }
}
