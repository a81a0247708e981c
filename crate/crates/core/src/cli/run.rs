//! Command drivers. Each returns a [`RunReport`]; input and precondition
//! problems come back as [`CliError`].

use std::path::Path;

use super::catalog;
use super::format::{
    repair_genericity, KnotFile, KnotMetadata, LoadedKnot, PatternFile, PatternMetadata,
};
use super::report::{emit_plot_data, Check, InputSummary, RunReport, TrunkEntry, Verdict};
use super::CliError;
use crate::geometry::{
    connected_sum_presentation, embed_pattern, sweep_profile, tube_mesh, ClosedPolyline,
    SolidTorusEmbedding, TubeMesh,
};
use crate::levelset::{level_table, verify_prop34, LevelReport};
use crate::pattern::PatternCurve;
use crate::spherelemma::exhaustive_check;

/// Construction parameters shared by the satellite commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Extra full twists of the framing.
    pub twist: i64,
    pub longitudinal_res: usize,
    pub meridional_res: usize,
    /// Satellite vertices per pattern edge.
    pub samples_per_edge: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            twist: 0,
            longitudinal_res: 64,
            meridional_res: 16,
            samples_per_edge: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoadedPattern {
    pub name: String,
    pub curve: PatternCurve,
    pub metadata: PatternMetadata,
}

/// Loads a knot from a file, or from the catalog when no file of that name
/// exists.
pub fn resolve_knot(arg: &str) -> Result<LoadedKnot, CliError> {
    let path = Path::new(arg);
    if path.exists() {
        return KnotFile::read(path)?.load();
    }
    match catalog::knot(arg) {
        Some(file) => file.load(),
        None => Err(CliError::Io {
            path: arg.into(),
            message: format!(
                "no such file, and not a catalog knot ({})",
                catalog::KNOT_NAMES.join(", ")
            ),
        }),
    }
}

pub fn resolve_pattern(arg: &str) -> Result<LoadedPattern, CliError> {
    let path = Path::new(arg);
    let file = if path.exists() {
        PatternFile::read(path)?
    } else {
        catalog::pattern(arg).ok_or_else(|| CliError::Io {
            path: arg.into(),
            message: format!(
                "no such file, and not a catalog pattern ({})",
                catalog::PATTERN_NAMES.join(", ")
            ),
        })?
    };
    Ok(LoadedPattern {
        name: file.name.clone(),
        curve: file.load()?,
        metadata: file.metadata.clone(),
    })
}

fn geometry_error(e: impl std::fmt::Display) -> CliError {
    CliError::Invariant {
        invariant: "geometric construction".into(),
        detail: e.to_string(),
    }
}

fn knot_input(role: &str, knot: &LoadedKnot) -> InputSummary {
    InputSummary {
        role: role.into(),
        name: knot.name.clone(),
        vertices: knot.curve.len(),
        repair: knot.repair.clone(),
    }
}

fn pattern_input(pattern: &LoadedPattern) -> InputSummary {
    InputSummary {
        role: "pattern".into(),
        name: pattern.name.clone(),
        vertices: pattern.curve.len(),
        repair: None,
    }
}

fn trunk_entry(label: &str, curve: &ClosedPolyline) -> Result<TrunkEntry, CliError> {
    let profile = sweep_profile(curve).map_err(geometry_error)?;
    Ok(TrunkEntry {
        label: label.into(),
        trunk: profile.max_count(),
        profile: profile.interval_counts,
    })
}

/// Tube, satellite and boundary mesh for a companion and pattern.
pub struct SatelliteBuild {
    pub torus: SolidTorusEmbedding,
    pub satellite: ClosedPolyline,
    pub mesh: TubeMesh,
}

pub fn build_satellite(
    companion: &ClosedPolyline,
    pattern: &PatternCurve,
    options: &PipelineOptions,
) -> Result<SatelliteBuild, CliError> {
    let torus =
        SolidTorusEmbedding::new(companion.clone(), None, options.twist).map_err(geometry_error)?;
    let satellite =
        embed_pattern(&torus, pattern, options.samples_per_edge).map_err(geometry_error)?;
    let mesh = tube_mesh(&torus, options.longitudinal_res, options.meridional_res)
        .map_err(geometry_error)?;
    Ok(SatelliteBuild {
        torus,
        satellite,
        mesh,
    })
}

pub fn run_trunk(command: Vec<String>, knot: &LoadedKnot) -> Result<RunReport, CliError> {
    let mut report = RunReport::new(command);
    report.inputs.push(knot_input("knot", knot));
    let entry = trunk_entry(&knot.name, &knot.curve)?;
    report.checks.push(Check::new(
        "even level counts",
        entry.profile.iter().all(|c| c % 2 == 0),
        format!("profile {:?}", entry.profile),
    ));
    if let Some(known) = knot.metadata.known_trunk {
        report.checks.push(Check::new(
            "embedding bounds the known trunk",
            entry.trunk as u64 >= known,
            format!("{} >= {known}", entry.trunk),
        ));
    }
    report.trunks.push(entry);
    Ok(report)
}

pub fn run_pattern_norm(command: Vec<String>, pattern: &LoadedPattern) -> RunReport {
    let mut report = RunReport::new(command);
    report.inputs.push(pattern_input(pattern));
    let bounds = pattern.curve.norm_bounds();
    report.winding_number = Some(pattern.curve.winding_number());
    if let Some(n) = pattern.metadata.norm {
        report.checks.push(Check::new(
            "recorded norm within bounds",
            bounds.contains(n),
            format!("{} <= {n} <= {}", bounds.lower, bounds.upper),
        ));
    }
    report.norm_bounds = Some(bounds);
    report
}

pub fn run_satellite(
    command: Vec<String>,
    companion: &LoadedKnot,
    pattern: &LoadedPattern,
    options: &PipelineOptions,
    out: Option<&Path>,
) -> Result<RunReport, CliError> {
    let mut report = RunReport::new(command);
    report.inputs.push(knot_input("companion", companion));
    report.inputs.push(pattern_input(pattern));
    let torus = SolidTorusEmbedding::new(companion.curve.clone(), None, options.twist)
        .map_err(geometry_error)?;
    let satellite =
        embed_pattern(&torus, &pattern.curve, options.samples_per_edge).map_err(geometry_error)?;
    report
        .trunks
        .push(trunk_entry(&companion.name, &companion.curve)?);
    let label = format!("{}({})", pattern.name, companion.name);
    report.trunks.push(trunk_entry(&label, &satellite)?);
    report.winding_number = Some(pattern.curve.winding_number());
    report.norm_bounds = Some(pattern.curve.norm_bounds());
    if let Some(path) = out {
        KnotFile::from_curve(&label, &satellite, KnotMetadata::default()).write(path)?;
        report.outputs.push(path.display().to_string());
    }
    Ok(report)
}

fn level_checks(levels: &LevelReport, nontrivial: Option<bool>) -> Vec<Check> {
    let mut checks = vec![
        Check::new(
            "levels sectioned",
            levels.skipped.is_empty(),
            format!(
                "{} regular levels, {} skipped",
                levels.rows.len(),
                levels.skipped.len()
            ),
        ),
        Check::new(
            "satellite inside the solid torus",
            levels.outside_hits() == 0,
            format!("{} level points outside", levels.outside_hits()),
        ),
        Check::new(
            "even principal counts",
            levels.parity_holds(),
            "principal components and essential curves come in even numbers".to_string(),
        ),
        Check::new(
            "section classes",
            levels.homology_holds(),
            "classes sum to zero and essential curves are parallel at every level".to_string(),
        ),
    ];
    let violations = levels.far_side_violations();
    let detail =
        format!("{violations} essential boundaries without an essential component beyond them");
    checks.push(match nontrivial {
        Some(true) => Check::new("far-side components", violations == 0, detail),
        _ => Check::with_verdict("far-side components", Verdict::Info, detail),
    });
    checks
}

/// Per-level section table, without any precondition on the pattern norm.
pub fn run_levels(
    command: Vec<String>,
    companion: &LoadedKnot,
    pattern: &LoadedPattern,
    options: &PipelineOptions,
    plot: Option<&Path>,
) -> Result<RunReport, CliError> {
    let mut report = RunReport::new(command);
    report.inputs.push(knot_input("companion", companion));
    report.inputs.push(pattern_input(pattern));
    let build = build_satellite(&companion.curve, &pattern.curve, options)?;
    let bounds = pattern.curve.norm_bounds();
    let levels = level_table(&build.satellite, &build.mesh, bounds.lower);
    report.checks = level_checks(&levels, companion.metadata.nontrivial);
    report.norm_bounds = Some(bounds);
    report.levels = Some(levels);
    if let Some(path) = plot {
        emit_plot_data(&report, path)?;
        report.outputs.push(path.display().to_string());
    }
    Ok(report)
}

/// The trunk inequality for a satellite: the per-level bound at every
/// regular level, and the comparison of the satellite's trunk with the
/// companion's.
pub fn run_verify_inequality(
    command: Vec<String>,
    companion: &LoadedKnot,
    pattern: &LoadedPattern,
    options: &PipelineOptions,
    plot: Option<&Path>,
) -> Result<RunReport, CliError> {
    if companion.metadata.nontrivial != Some(true) {
        return Err(CliError::Precondition {
            precondition: "nontrivial companion".into(),
            detail: format!(
                "companion '{}' is not marked nontrivial; the inequality is false without it \
                 (a Whitehead double of the unknot is again the unknot, of trunk 2, while N = 1)",
                companion.name
            ),
        });
    }
    let known_trunk = companion
        .metadata
        .known_trunk
        .ok_or_else(|| CliError::Precondition {
            precondition: "known companion trunk".into(),
            detail: format!("companion '{}' has no known_trunk metadata", companion.name),
        })?;

    let mut report = RunReport::new(command);
    report.inputs.push(knot_input("companion", companion));
    report.inputs.push(pattern_input(pattern));
    let build = build_satellite(&companion.curve, &pattern.curve, options)?;
    let bounds = pattern.curve.norm_bounds();
    report.norm_bounds = Some(bounds);
    report
        .trunks
        .push(trunk_entry(&companion.name, &companion.curve)?);
    let label = format!("{}({})", pattern.name, companion.name);
    let satellite_trunk = trunk_entry(&label, &build.satellite)?;
    let trunk = satellite_trunk.trunk as u64;
    report.trunks.push(satellite_trunk);

    if bounds.lower == 0 {
        report.checks.push(Check::with_verdict(
            "per-level bound",
            Verdict::Vacuous,
            "norm lower bound is 0; the bound needs a positive norm",
        ));
        report.checks.push(Check::with_verdict(
            "trunk comparison",
            Verdict::Vacuous,
            format!("{trunk} > 0 * {known_trunk}"),
        ));
        return Ok(report);
    }

    let levels = verify_prop34(&build.satellite, &build.mesh, bounds.lower).map_err(|e| {
        CliError::Precondition {
            precondition: "positive norm".into(),
            detail: e.to_string(),
        }
    })?;
    report.checks.push(Check::new(
        "per-level bound",
        levels.all_pass(),
        format!(
            "count > {} * principal at {} of {} levels with principal components",
            bounds.lower,
            levels
                .rows
                .iter()
                .filter(|r| !r.vacuous && r.passes)
                .count(),
            levels.non_vacuous()
        ),
    ));
    report.checks.push(Check::new(
        "per-level chain",
        levels.chain_holds(),
        "count >= sum over principal components of (N + 2 - n_j) > N * principal".to_string(),
    ));
    report.checks.extend(level_checks(&levels, Some(true)));
    report.checks.push(Check::new(
        "trunk comparison",
        trunk > bounds.lower * known_trunk,
        format!("{trunk} > {} * {known_trunk}", bounds.lower),
    ));
    report.levels = Some(levels);
    if let Some(path) = plot {
        emit_plot_data(&report, path)?;
        report.outputs.push(path.display().to_string());
    }
    Ok(report)
}

pub fn run_lemma_check(command: Vec<String>, max_circles: usize) -> Result<RunReport, CliError> {
    let lemma = exhaustive_check(max_circles).map_err(|e| CliError::Precondition {
        precondition: "circle count".into(),
        detail: e.to_string(),
    })?;
    let mut report = RunReport::new(command);
    report.checks.push(Check::new(
        "no counterexamples",
        lemma.counterexamples.is_empty(),
        format!("{} counterexamples", lemma.counterexamples.len()),
    ));
    report.checks.push(Check::new(
        "euler characteristic sum",
        lemma.euler_failures.is_empty(),
        format!("{} configurations off", lemma.euler_failures.len()),
    ));
    report.checks.push(Check::new(
        "every surface touched",
        lemma.case2_violations.is_empty(),
        format!(
            "{} of {} configurations below 2",
            lemma.case2_violations.len(),
            lemma.case_counts[1]
        ),
    ));
    report.checks.push(Check::new(
        "all circles essential",
        lemma.case1_gap_violations.is_empty(),
        format!(
            "{} of {} configurations with a gap bounded by one circle",
            lemma.case1_gap_violations.len(),
            lemma.case_counts[0]
        ),
    ));
    report.lemma = Some(lemma);
    Ok(report)
}

pub fn run_sum(
    command: Vec<String>,
    a: &LoadedKnot,
    b: &LoadedKnot,
    out: Option<&Path>,
) -> Result<RunReport, CliError> {
    let mut report = RunReport::new(command);
    report.inputs.push(knot_input("summand", a));
    report.inputs.push(knot_input("summand", b));
    let sum = connected_sum_presentation(&a.curve, &b.curve).map_err(geometry_error)?;
    let (sum, _) = repair_genericity(sum)?;
    let ta = trunk_entry(&a.name, &a.curve)?;
    let tb = trunk_entry(&b.name, &b.curve)?;
    let label = format!("{}#{}", a.name, b.name);
    let ts = trunk_entry(&label, &sum)?;
    report.checks.push(Check::new(
        "sum trunk is the larger trunk",
        ts.trunk == ta.trunk.max(tb.trunk),
        format!("{} = max({}, {})", ts.trunk, ta.trunk, tb.trunk),
    ));
    report.trunks.extend([ta, tb, ts]);
    if let Some(path) = out {
        let metadata = KnotMetadata {
            known_trunk: None,
            nontrivial: match (a.metadata.nontrivial, b.metadata.nontrivial) {
                (Some(x), Some(y)) => Some(x || y),
                _ => None,
            },
        };
        KnotFile::from_curve(&label, &sum, metadata).write(path)?;
        report.outputs.push(path.display().to_string());
    }
    Ok(report)
}

/// Writes every catalog fixture into `dir`.
pub fn export_catalog(command: Vec<String>, dir: &Path) -> Result<RunReport, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut report = RunReport::new(command);
    for name in catalog::KNOT_NAMES {
        let path = dir.join(format!("{name}.knot"));
        catalog::knot(name).expect("catalog knot").write(&path)?;
        report.outputs.push(path.display().to_string());
    }
    for name in catalog::PATTERN_NAMES {
        let path = dir.join(format!("{name}.pattern"));
        catalog::pattern(name)
            .expect("catalog pattern")
            .write(&path)?;
        report.outputs.push(path.display().to_string());
    }
    Ok(report)
}
