//! One function per CLI verb. Each returns a [`Report`]; printing and exit codes are left
//! to the binary.

use epsilon_stability::bounds::*;
use epsilon_stability::combinatorics::{
    component_decomposition_check, pair_count, penrose_identity_check, penrose_partition_check,
    product_expansion_check, EdgeWeights,
};
use epsilon_stability::sampler::{
    metropolis_run_model, oracle_two_body, ChainSettings, OracleSettings, SampleStats, TwoBodyMoments,
};
use epsilon_stability::{Error as CoreError, FreeMeasure, GibbsModel64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::report::{BoundEntry, Provenance, Report, Table};
use crate::scenario::{Scenario, ScenarioFile};
use crate::units::{parse_quantity, Dimension};

/// Identity residuals above this fail `verify`.
pub const IDENTITY_THRESHOLD: f64 = 1e-10;

fn scenario_report(command: &str, file: &ScenarioFile, seed: Option<u64>) -> Report {
    let mut prov = Provenance::new(seed);
    prov.inputs.insert(file.origin.clone(), file.sha256.clone());
    let mut r = Report::new(command, prov);
    r.input = Some(file.echo().parse().expect("echo is valid TOML"));
    r.setting("scenario", file.name.as_str());
    r.setting("kind", file.scenario.kind().name());
    r
}

fn core(file: &ScenarioFile, e: CoreError) -> CliError {
    CliError::from_core(&file.name, e)
}

#[derive(Serialize)]
struct SimilarSummary {
    a: f64,
    a_bar: f64,
    /// `A < 1/5`, where the bound stays below `2A`.
    below_one_fifth: bool,
    twice_a: f64,
}

#[derive(Serialize)]
struct CountSummary {
    eps_target: f64,
    n_max: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<BoundEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<String>,
}

impl CountSummary {
    fn new(eps: f64, m: &MaxCount<f64>) -> Self {
        Self {
            eps_target: eps,
            n_max: m.n,
            bound: m.bound.as_ref().map(BoundEntry::from),
            diagnostic: m.diagnostic.clone(),
        }
    }
}

#[derive(Serialize)]
struct ClassRow {
    class: u32,
    expected_bodies: f64,
    /// Pair bound within the class.
    w_same_class: f64,
}

#[derive(Serialize)]
struct CollisionRow {
    index: i32,
    margin: f64,
    controlled: bool,
}

#[derive(Serialize)]
struct Constants {
    c1: f64,
    c2: f64,
    c3: f64,
}

#[derive(Serialize)]
struct Verdict {
    eps_target: f64,
    form: &'static str,
    bound_met: bool,
    collisions_controlled: bool,
    stable: bool,
}

#[derive(Serialize)]
struct MassSummary {
    eps_target: f64,
    form: &'static str,
    max_mass: f64,
    ratio_to_star: f64,
    binding: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_collision_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<String>,
}

fn form_name(form: BoundForm) -> &'static str {
    match form {
        BoundForm::Closed => "closed",
        BoundForm::Explicit => "explicit",
    }
}

/// The `A` at which `A L e^A = 1`.
pub fn divergence_wall(classes: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * classes * mid.exp() < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn run_bound(file: &ScenarioFile, eps: Option<f64>) -> CliResult<Report> {
    let mut r = scenario_report("bound", file, None);
    if let Some(e) = eps {
        if e.is_nan() || e <= 0.0 {
            return Err(CliError::Input(format!("--eps must be positive, got {e}")));
        }
        r.setting("eps", e);
    }
    match &file.scenario {
        Scenario::Similar(p) => {
            let (a, a_bar) = similar_a(p).map_err(|e| core(file, e))?;
            let b = similar_epsilon_bound(a, a_bar);
            r.set("bound", &BoundEntry::from(&b));
            r.set(
                "belt",
                &SimilarSummary {
                    a,
                    a_bar,
                    below_one_fifth: a < 0.2,
                    twice_a: 2.0 * a,
                },
            );
            if b.is_diverged() {
                r.flag(format!("the series diverges at A = {a}"));
            }
            if let Some(e) = eps {
                let m = similar_max_n(p, e).map_err(|e| core(file, e))?;
                r.set("max_count", &CountSummary::new(e, &m));
            }
        }
        Scenario::PowerLaw(p) => {
            let b = powerlaw_epsilon_bound(p).map_err(|e| core(file, e))?;
            r.set("bound", &BoundEntry::from(&b));
            let a = b.get("A").expect("recorded");
            r.set("bodies_per_unit_a", &(p.n as f64 / a));
            let classes: Vec<ClassRow> = (1..=p.classes)
                .map(|l| {
                    Ok(ClassRow {
                        class: l,
                        expected_bodies: powerlaw_class_size(p.n as f64, l)?,
                        w_same_class: powerlaw_w(l, l, p)?,
                    })
                })
                .collect::<Result<_, CoreError>>()
                .map_err(|e| core(file, e))?;
            r.set("classes", &classes);
            let wall = divergence_wall(p.classes as f64);
            r.set("divergence_wall_a", &wall);
            r.notes.push(format!(
                "The closed form is finite only while A L e^A < 1, i.e. A < {wall:.4} at L = {}. \
                 A requirement such as A <= 1/4 {} this limit, so any count derived from it \
                 should be read against the wall.",
                p.classes,
                if 0.25 < wall { "lies inside" } else { "lies beyond" }
            ));
            if b.is_diverged() {
                r.flag(format!("the series diverges at A = {a}"));
            }
            if let Some(e) = eps {
                let m = powerlaw_max_n(p, e).map_err(|e| core(file, e))?;
                r.set("max_count", &CountSummary::new(e, &m));
            }
        }
        Scenario::Planets(s) => planets_report(file, s, eps.unwrap_or(1.0), &mut r)?,
        Scenario::Custom(_) => {
            return Err(CliError::Input(format!(
                "{}: `bound` needs a similar, powerlaw or planets scenario",
                file.name
            )))
        }
    }
    Ok(r)
}

fn planets_report(file: &ScenarioFile, s: &crate::scenario::PlanetScenario, eps: f64, r: &mut Report) -> CliResult<()> {
    let p = &s.params;
    let k = planet_constants(p).map_err(|e| core(file, e))?;
    r.set(
        "constants",
        &Constants {
            c1: k.c1,
            c2: k.c2,
            c3: k.c3,
        },
    );

    let mut chosen = None;
    match planets_epsilon_bar(p) {
        Ok(b) => {
            r.set("bound_closed", &BoundEntry::from(&b));
            if s.form == BoundForm::Closed {
                chosen = Some(b);
            }
        }
        Err(CoreError::Precondition(m)) => r.notes.push(format!("closed form unavailable: {m}")),
        Err(e) => return Err(core(file, e)),
    }
    let explicit = planets_epsilon_bar_explicit(p).map_err(|e| core(file, e))?;
    r.set("bound_explicit", &BoundEntry::from(&explicit));
    if s.form == BoundForm::Explicit {
        chosen = Some(explicit);
    }

    let collisions: Vec<CollisionRow> = (p.i_min..p.i_max)
        .map(|i| {
            collision_condition(p, i).map(|m| CollisionRow {
                index: i,
                margin: m,
                controlled: m > 0.0,
            })
        })
        .collect::<Result<_, _>>()
        .map_err(|e| core(file, e))?;
    let collisions_controlled = collisions.iter().all(|c| c.controlled);
    r.set("collisions", &collisions);

    let bound_met = chosen.as_ref().is_some_and(|b| b.certifies(eps));
    if chosen.is_none() {
        r.flag(format!(
            "the {} form is unavailable for these parameters",
            form_name(s.form)
        ));
    }
    r.set(
        "verdict",
        &Verdict {
            eps_target: eps,
            form: form_name(s.form),
            bound_met,
            collisions_controlled,
            stable: bound_met && collisions_controlled,
        },
    );

    let m = planets_max_mass(p, eps, s.form).map_err(|e| core(file, e))?;
    r.set(
        "max_mass",
        &MassSummary {
            eps_target: eps,
            form: form_name(s.form),
            max_mass: m.mass,
            ratio_to_star: m.ratio_to_star,
            binding: m.binding,
            epsilon: m.bound.as_ref().and_then(|b| b.finite()),
            min_collision_margin: m.min_margin,
            diagnostic: m.diagnostic.clone(),
        },
    );
    Ok(())
}

/// `<xi_i^2>` of body `i` under the free measure alone.
pub fn free_second_moment(model: &GibbsModel64, i: usize) -> CliResult<f64> {
    let g = model.gammas()[i];
    match model.free_measure() {
        FreeMeasure::Gaussian => Ok(1.0 / (g * g)),
        FreeMeasure::Truncated { upper } => {
            truncated_second_moment(g, upper[i]).map_err(|e| CliError::Computation(e.to_string()))
        }
    }
}

#[derive(Serialize)]
struct SampleSummary {
    chains: usize,
    samples_per_chain: u64,
    acceptance_rate: f64,
    converged: bool,
    hard_core_rejections: u64,
    support_rejections: u64,
    second_moment: Vec<f64>,
    second_moment_se: Vec<f64>,
    mean_xi: Vec<f64>,
    mean_xi_se: Vec<f64>,
    variance_xi: Vec<f64>,
    autocorrelation_time: Vec<f64>,
    proposal_scale: Vec<f64>,
    free_second_moment: Vec<f64>,
    /// `<xi^2> / <xi^2>_free - 1` per body.
    epsilon: Vec<f64>,
    epsilon_se: Vec<f64>,
}

#[derive(Serialize)]
struct Comparison {
    bound_kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<f64>,
    max_epsilon: f64,
    /// Largest `epsilon - 3 SE` over the bodies.
    max_epsilon_lower: f64,
    consistent: bool,
}

#[derive(Serialize)]
struct OracleComparison {
    oracle_second_moment: Vec<f64>,
    /// `(sampled - oracle) / SE` per body.
    deviation_in_se: Vec<f64>,
    within_three_se: bool,
}

/// Chain settings the CLI fills from flags, with the seed already fixed.
pub fn sample_settings(steps: u64, burn_in: Option<u64>, chains: usize, seed: u64) -> ChainSettings {
    ChainSettings {
        steps,
        burn_in: burn_in.unwrap_or(steps / 10),
        seed,
        n_chains: chains,
        ..ChainSettings::default()
    }
}

pub fn run_sample(file: &ScenarioFile, settings: &ChainSettings) -> CliResult<Report> {
    let mut r = scenario_report("sample", file, Some(settings.seed));
    r.setting("steps", settings.steps as i64);
    r.setting("burn_in", settings.burn_in as i64);
    r.setting("thinning", settings.thinning as i64);
    r.setting("chains", settings.n_chains as i64);
    r.setting("proposal_sigma_xi", settings.proposal_sigma_xi);
    let model = file.scenario.model()?;
    let stats = metropolis_run_model(&model, settings).map_err(|e| core(file, e))?;
    let summary = sample_summary(&model, &stats)?;
    if !stats.converged {
        r.flag(format!(
            "chains not converged: autocorrelation times {:?} over {} recorded sweeps per chain",
            stats.autocorrelation_time, stats.samples_per_chain
        ));
    }

    let lower = summary
        .epsilon
        .iter()
        .zip(&summary.epsilon_se)
        .map(|(e, s)| e - 3.0 * s)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_eps = summary.epsilon.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let analytic = match &file.scenario {
        Scenario::Similar(p) => {
            let (a, ab) = similar_a(p).map_err(|e| core(file, e))?;
            Some(("similar-belt", similar_epsilon_bound(a, ab).finite()))
        }
        Scenario::Planets(s) => {
            let b = match s.form {
                BoundForm::Closed => planets_epsilon_bar(&s.params).ok(),
                BoundForm::Explicit => planets_epsilon_bar_explicit(&s.params).ok(),
            };
            Some((
                if s.form == BoundForm::Closed {
                    "planets-closed"
                } else {
                    "planets-explicit"
                },
                b.and_then(|b| b.finite()),
            ))
        }
        _ => None,
    };
    if let Some((kind, bound)) = analytic {
        r.set(
            "comparison",
            &Comparison {
                bound_kind: kind,
                bound,
                max_epsilon: max_eps,
                max_epsilon_lower: lower,
                consistent: bound.is_none_or(|b| lower <= b),
            },
        );
    }
    if model.n() == 2 {
        let oracle = oracle_two_body(&model, &OracleSettings::default()).map_err(|e| core(file, e))?;
        let dev: Vec<f64> = (0..2)
            .map(|i| (summary.second_moment[i] - oracle.second_moment[i]) / summary.second_moment_se[i])
            .collect();
        r.set(
            "oracle",
            &OracleComparison {
                oracle_second_moment: oracle.second_moment.to_vec(),
                within_three_se: dev.iter().all(|d| d.abs() < 3.0),
                deviation_in_se: dev,
            },
        );
    }
    r.set("sample", &summary);
    Ok(r)
}

fn sample_summary(model: &GibbsModel64, s: &SampleStats<f64>) -> CliResult<SampleSummary> {
    let free: Vec<f64> = (0..model.n())
        .map(|i| free_second_moment(model, i))
        .collect::<CliResult<_>>()?;
    Ok(SampleSummary {
        chains: s.chains,
        samples_per_chain: s.samples_per_chain,
        acceptance_rate: s.acceptance_rate,
        converged: s.converged,
        hard_core_rejections: s.hard_core_rejections,
        support_rejections: s.support_rejections,
        epsilon: s.second_moment.iter().zip(&free).map(|(m, f)| m / f - 1.0).collect(),
        epsilon_se: s.second_moment_se.iter().zip(&free).map(|(se, f)| se / f).collect(),
        second_moment: s.second_moment.clone(),
        second_moment_se: s.second_moment_se.clone(),
        mean_xi: s.mean_xi.clone(),
        mean_xi_se: s.mean_xi_se.clone(),
        variance_xi: s.variance_xi.clone(),
        autocorrelation_time: s.autocorrelation_time.clone(),
        proposal_scale: s.proposal_scale.clone(),
        free_second_moment: free,
    })
}

#[derive(Serialize)]
struct OracleSummary {
    second_moment: Vec<f64>,
    free_second_moment: Vec<f64>,
    epsilon: Vec<f64>,
    partition: f64,
    rel_tol: f64,
}

pub fn run_oracle(file: &ScenarioFile, rel_tol: f64) -> CliResult<Report> {
    let mut r = scenario_report("oracle", file, None);
    r.setting("rel_tol", rel_tol);
    let model = file.scenario.model()?;
    let settings = OracleSettings {
        rel_tol,
        ..OracleSettings::default()
    };
    let m: TwoBodyMoments<f64> = oracle_two_body(&model, &settings).map_err(|e| core(file, e))?;
    let free = [free_second_moment(&model, 0)?, free_second_moment(&model, 1)?];
    r.set(
        "oracle",
        &OracleSummary {
            second_moment: m.second_moment.to_vec(),
            free_second_moment: free.to_vec(),
            epsilon: (0..2).map(|i| m.second_moment[i] / free[i] - 1.0).collect(),
            partition: m.partition,
            rel_tol,
        },
    );
    Ok(r)
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub n: usize,
    pub draws: usize,
    pub product_expansion: f64,
    pub component_decomposition: f64,
    pub penrose_identity: f64,
    /// The breadth-first map partitions the connected graphs into intervals, for every root.
    pub partition_scheme: bool,
    pub threshold: f64,
    pub passed: bool,
}

/// Largest residual of each identity over `draws` random bond weights in `[-1, 1]`.
/// The Penrose identity is rooted at `draw mod n`, so every root is exercised.
pub fn verify_identities(n: usize, seed: u64, draws: usize) -> CliResult<VerifySummary> {
    let core_err = |e| CliError::from_core("verify", e);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut product, mut components, mut penrose) = (0.0f64, 0.0f64, 0.0f64);
    for d in 0..draws {
        let bonds: Vec<f64> = (0..pair_count(n)).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let w = EdgeWeights::from_bonds(n, bonds).map_err(core_err)?;
        product = product.max(product_expansion_check(&w).map_err(core_err)?);
        components = components.max(component_decomposition_check(&w).map_err(core_err)?);
        penrose = penrose.max(penrose_identity_check(&w, d % n).map_err(core_err)?);
    }
    if draws == 0 {
        // still enforce the cap
        product_expansion_check(&EdgeWeights::from_fn(n, |_, _| 0.0)).map_err(core_err)?;
    }
    let partition_scheme = (0..n).all(|root| penrose_partition_check(n, root));
    let passed = partition_scheme && product.max(components).max(penrose) <= IDENTITY_THRESHOLD;
    Ok(VerifySummary {
        n,
        draws,
        product_expansion: product,
        component_decomposition: components,
        penrose_identity: penrose,
        partition_scheme,
        threshold: IDENTITY_THRESHOLD,
        passed,
    })
}

pub fn run_verify(n: usize, seed: u64, draws: usize) -> CliResult<Report> {
    let mut r = Report::new("verify", Provenance::new(Some(seed)));
    r.setting("n", n as i64);
    r.setting("draws", draws as i64);
    let v = verify_identities(n, seed, draws)?;
    if !v.passed {
        r.flag(format!("identity check failed at n = {n}"));
    }
    r.set("verify", &v);
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum AxisKind {
    Count,
    Plain,
    Quantity(Dimension),
}

fn axes(kind: crate::scenario::Kind) -> &'static [(&'static str, AxisKind)] {
    use crate::scenario::Kind;
    use AxisKind::*;
    match kind {
        Kind::Similar => &[
            ("n", Count),
            ("gamma", Plain),
            ("density_ratio", Plain),
            ("size", Quantity(Dimension::Length)),
            ("orbit_radius", Quantity(Dimension::Length)),
        ],
        Kind::PowerLaw => &[
            ("n", Count),
            ("gamma", Plain),
            ("density_ratio", Plain),
            ("classes", Count),
            ("orbit_radius", Quantity(Dimension::Length)),
        ],
        Kind::Planets => &[
            ("gamma", Plain),
            ("k_typical", Plain),
            ("max_mass", Quantity(Dimension::Mass)),
        ],
        Kind::Custom => &[],
    }
}

/// A parameter range to sweep, with endpoints as written on the command line.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepAxis {
    pub name: String,
    pub from: String,
    pub to: String,
    pub points: usize,
    pub log: bool,
}

fn axis_values(file: &ScenarioFile, axis: &SweepAxis) -> CliResult<(AxisKind, Vec<f64>)> {
    let list = axes(file.scenario.kind());
    let Some(&(_, kind)) = list.iter().find(|(n, _)| *n == axis.name) else {
        let names: Vec<&str> = list.iter().map(|(n, _)| *n).collect();
        return Err(CliError::Input(if names.is_empty() {
            format!("{} scenarios have no sweepable parameters", file.scenario.kind().name())
        } else {
            format!("unknown axis `{}`; sweepable: {}", axis.name, names.join(", "))
        }));
    };
    let parse = |s: &str| -> CliResult<f64> {
        match kind {
            AxisKind::Quantity(dim) => parse_quantity(s, dim, &file.units),
            _ => s.trim().parse().map_err(|_| format!("`{s}` is not a number")),
        }
        .map_err(|e| CliError::Input(format!("--{} {e}", axis.name)))
    };
    let (a, b) = (parse(&axis.from)?, parse(&axis.to)?);
    if axis.log && !(a > 0.0 && b > 0.0) {
        return Err(CliError::Input("a log-spaced sweep needs positive endpoints".into()));
    }
    let values = (0..axis.points)
        .map(|k| {
            let t = if axis.points == 1 {
                0.0
            } else {
                k as f64 / (axis.points - 1) as f64
            };
            let v = if axis.log {
                (a.ln() + t * (b.ln() - a.ln())).exp()
            } else {
                a + t * (b - a)
            };
            if kind == AxisKind::Count {
                v.round().max(1.0)
            } else {
                v
            }
        })
        .collect();
    Ok((kind, values))
}

fn status_of(b: &CliResult<EpsilonBound<f64>>) -> String {
    match b {
        Ok(b) if b.is_diverged() => "diverged".into(),
        Ok(_) => "finite".into(),
        Err(CliError::Computation(m)) if m.contains("precondition") => "precondition".into(),
        Err(e) => format!("error: {e}"),
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn run_sweep(file: &ScenarioFile, axis: &SweepAxis) -> CliResult<Report> {
    let mut r = scenario_report("sweep", file, None);
    r.setting("axis", axis.name.as_str());
    r.setting("from", axis.from.as_str());
    r.setting("to", axis.to.as_str());
    r.setting("points", axis.points as i64);
    r.setting("log", axis.log);
    let (kind, values) = axis_values(file, axis)?;

    let names: &[&str] = match file.scenario.kind() {
        crate::scenario::Kind::Similar => &["A", "A_bar", "ratio"],
        crate::scenario::Kind::PowerLaw => &["A", "L", "ratio"],
        _ => &["c1", "c2", "c3"],
    };
    let mut header = vec![axis.name.clone(), "status".into(), "epsilon".into()];
    header.extend(names.iter().map(|s| s.to_string()));
    let planets = matches!(file.scenario, Scenario::Planets(_));
    if planets {
        header.push("min_collision_margin".into());
    }

    let rows: Vec<Vec<String>> = values
        .par_iter()
        .map(|&v| {
            let (bound, margin) = sweep_point(file, &axis.name, v);
            let mut row = vec![
                if kind == AxisKind::Count {
                    format!("{}", v as u64)
                } else {
                    v.to_string()
                },
                status_of(&bound),
                cell(bound.as_ref().ok().and_then(|b| b.finite())),
            ];
            row.extend(names.iter().map(|n| cell(bound.as_ref().ok().and_then(|b| b.get(n)))));
            if planets {
                row.push(cell(margin));
            }
            row
        })
        .collect();

    let count = |s: &str| rows.iter().filter(|row| row[1] == s).count();
    r.set(
        "sweep",
        &SweepSummary {
            axis: axis.name.clone(),
            rows: rows.len(),
            finite: count("finite"),
            diverged: count("diverged"),
        },
    );
    r.table = Some(Table { header, rows });
    Ok(r)
}

#[derive(Serialize)]
struct SweepSummary {
    axis: String,
    rows: usize,
    finite: usize,
    diverged: usize,
}

fn sweep_point(file: &ScenarioFile, axis: &str, v: f64) -> (CliResult<EpsilonBound<f64>>, Option<f64>) {
    let wrap = |e| CliError::from_core(&file.name, e);
    match &file.scenario {
        Scenario::Similar(p) => {
            let mut p = *p;
            match axis {
                "n" => p.n = v as u64,
                "gamma" => p.gamma = v,
                "density_ratio" => p.density_ratio = v,
                "size" => p.size = v,
                _ => p.orbit_radius = v,
            }
            (
                similar_a(&p).map(|(a, ab)| similar_epsilon_bound(a, ab)).map_err(wrap),
                None,
            )
        }
        Scenario::PowerLaw(p) => {
            let mut p = *p;
            match axis {
                "n" => p.n = v as u64,
                "gamma" => p.gamma = v,
                "density_ratio" => p.density_ratio = v,
                "classes" => p.classes = v as u32,
                _ => p.orbit_radius = v,
            }
            (powerlaw_epsilon_bound(&p).map_err(wrap), None)
        }
        Scenario::Planets(s) => {
            let mut p = s.params.clone();
            match axis {
                "gamma" => p.gamma = v,
                "k_typical" => p.k_typical = v,
                _ => {
                    let scale = v / p.max_mass();
                    p.masses.iter_mut().for_each(|m| *m *= scale);
                }
            }
            let bound = match s.form {
                BoundForm::Closed => planets_epsilon_bar(&p),
                BoundForm::Explicit => planets_epsilon_bar_explicit(&p),
            }
            .map_err(wrap);
            let margin = (p.i_min..p.i_max)
                .map(|i| collision_condition(&p, i).ok())
                .try_fold(f64::INFINITY, |acc, m| m.map(|m| acc.min(m)));
            (bound, margin)
        }
        Scenario::Custom(_) => unreachable!("no sweepable axes"),
    }
}
