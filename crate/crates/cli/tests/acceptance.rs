//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use epsilon_stability::bounds::*;
use epsilon_stability::combinatorics::*;
use epsilon_stability::quadrature::{integrate, QuadratureSettings};
use epsilon_stability::sampler::*;
use epsilon_stability::GibbsModel;
use epstab::commands::{run_bound, run_sample, verify_identities, IDENTITY_THRESHOLD};
use epstab::scenario::{open_scenario, Scenario, ScenarioFile};

type Check = Result<String, String>;

/// Name, runtime limit in seconds, and the check itself.
type Criterion = (&'static str, Option<u64>, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_factor(value: f64, target: f64, factor: f64) -> bool {
    value > target / factor && value < target * factor
}

fn lookup<'a>(t: &'a toml::Table, path: &str) -> Result<&'a toml::Value, String> {
    let mut parts = path.split('.');
    let first = parts.next().unwrap();
    let mut v = t.get(first).ok_or_else(|| format!("no `{path}` in the report"))?;
    for p in parts {
        v = v.get(p).ok_or_else(|| format!("no `{path}` in the report"))?;
    }
    Ok(v)
}

fn number(t: &toml::Table, path: &str) -> Result<f64, String> {
    let v = lookup(t, path)?;
    v.as_float()
        .or_else(|| v.as_integer().map(|i| i as f64))
        .ok_or_else(|| format!("`{path}` is not a number"))
}

fn boolean(t: &toml::Table, path: &str) -> Result<bool, String> {
    lookup(t, path)?
        .as_bool()
        .ok_or_else(|| format!("`{path}` is not a boolean"))
}

fn combinatorial_identity() -> Check {
    let mut worst = 0.0f64;
    for n in 1..=5 {
        let v = verify_identities(n, 1000 + n as u64, 100).map_err(|e| e.to_string())?;
        let r = v.product_expansion.max(v.component_decomposition);
        ensure(r <= 1e-10, || format!("n = {n}: residual {r:e}"))?;
        worst = worst.max(r);
    }
    Ok(format!("max residual {worst:.1e} over n = 1..5, 100 draws each"))
}

fn penrose_scheme() -> Check {
    let mut worst = 0.0f64;
    for n in 1..=5 {
        for root in 0..n {
            ensure(penrose_partition_check(n, root), || {
                format!("n = {n}, root {root}: not a partition")
            })?;
        }
        let v = verify_identities(n, 2000 + n as u64, 100).map_err(|e| e.to_string())?;
        ensure(v.penrose_identity <= IDENTITY_THRESHOLD, || {
            format!("n = {n}: residual {:e}", v.penrose_identity)
        })?;
        worst = worst.max(v.penrose_identity);
    }
    let scheme = PartitionScheme::build(5, 0).map_err(|e| e.to_string())?;
    let covered: u64 = scheme.intervals().map(|(_, extra)| 1u64 << extra.edge_count()).sum();
    let connected = enumerate_connected_graphs(5).map_err(|e| e.to_string())?.count();
    ensure(covered == 728 && connected == 728, || {
        format!("n = 5: intervals cover {covered}, {connected} connected graphs")
    })?;
    Ok(format!(
        "intervals cover all 728 connected graphs at n = 5, max residual {worst:.1e}"
    ))
}

/// Connectivity by union-find over the edge list, independent of the library's search.
fn connected_by_union_find(g: &LabeledGraph) -> bool {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, j) in g.edges() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        parent[a] = b;
    }
    let r = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == r)
}

fn enumeration_counts() -> Check {
    for n in 1..=7usize {
        let expected = if n == 1 { 1 } else { (n as u64).pow(n as u32 - 2) };
        let got = enumerate_trees(n).map_err(|e| e.to_string())?.count() as u64;
        ensure(got == expected, || {
            format!("trees at n = {n}: {got}, expected {expected}")
        })?;
    }
    for (n, expected) in (1..=5).zip([1usize, 1, 4, 38, 728]) {
        let filtered = enumerate_graphs(n)
            .map_err(|e| e.to_string())?
            .filter(connected_by_union_find)
            .count();
        let got = enumerate_connected_graphs(n).map_err(|e| e.to_string())?.count();
        ensure(got == expected && filtered == expected, || {
            format!("connected at n = {n}: {got}, filter {filtered}, expected {expected}")
        })?;
    }
    Ok("trees n^(n-2) for n <= 7, connected 1, 1, 4, 38, 728".into())
}

fn twice_a() -> Check {
    let mut worst = 0.0f64;
    for k in 1..=1000 {
        let a = 0.2 * k as f64 / 1000.0;
        let b = similar_epsilon_bound(a, 0.8 * a)
            .finite()
            .ok_or_else(|| format!("diverged at A = {a}"))?;
        ensure(b <= 2.0 * a, || format!("A = {a}: bound {b} > {}", 2.0 * a))?;
        worst = worst.max(b / a);
    }
    Ok(format!("largest bound / A on the grid {worst:.4}"))
}

fn chain_settings(steps: u64, seed: u64) -> ChainSettings {
    ChainSettings {
        steps,
        burn_in: steps / 10,
        seed,
        n_chains: 4,
        ..ChainSettings::default()
    }
}

fn two_body_cross_check() -> Check {
    let mut worst = 0.0f64;
    for k in 0..5 {
        let coupling = 1e-4 * 10f64.powf(0.75 * k as f64);
        let model =
            GibbsModel::new(vec![100.0; 2], vec![1.0; 2], vec![0.01; 2], &[coupling]).map_err(|e| e.to_string())?;
        let oracle = oracle_two_body(&model, &OracleSettings::default()).map_err(|e| e.to_string())?;
        let stats = metropolis_run_model(&model, &chain_settings(1_000_000, 500 + k)).map_err(|e| e.to_string())?;
        ensure(stats.converged, || format!("coupling {coupling:e}: not converged"))?;
        for i in 0..2 {
            let dev = (stats.second_moment[i] - oracle.second_moment[i]) / stats.second_moment_se[i];
            ensure(dev.abs() < 3.0, || {
                format!(
                    "coupling {coupling:e}, body {i}: {} vs oracle {} ({dev:.2} SE)",
                    stats.second_moment[i], oracle.second_moment[i]
                )
            })?;
            worst = worst.max(dev.abs());
        }
    }
    Ok(format!("5 couplings in [1e-4, 1e-1], largest deviation {worst:.2} SE"))
}

fn free_measure_recovery() -> Check {
    let mut worst = 0.0f64;
    for n in [1usize, 2, 5, 10] {
        let gamma: Vec<f64> = (0..n).map(|k| 40.0 + 10.0 * k as f64).collect();
        let orbits: Vec<f64> = (0..n).map(|k| 1.0 + 0.2 * k as f64).collect();
        let model = GibbsModel::new(gamma.clone(), orbits, vec![1e-3; n], &vec![0.0; pair_count(n)])
            .map_err(|e| e.to_string())?;
        let stats =
            metropolis_run_model(&model, &chain_settings(200_000, 600 + n as u64)).map_err(|e| e.to_string())?;
        for (i, g) in gamma.iter().enumerate() {
            let dev = (stats.second_moment[i] - 1.0 / (g * g)) / stats.second_moment_se[i];
            ensure(dev.abs() < 3.0, || {
                format!("N = {n}, body {i}: {dev:.2} SE from 1/gamma^2")
            })?;
            worst = worst.max(dev.abs());
        }
    }
    Ok(format!("N = 1, 2, 5, 10, largest deviation {worst:.2} SE"))
}

fn similar_belt_scenario(size: f64) -> String {
    format!(
        "schema_version = 1\nkind = \"similar\"\nname = \"five_body_belt\"\n\n[params]\n\
         n = 5\nsize = {size:e}\ngamma = 50.0\ndensity_ratio = 2.0\norbit_radius = 100.0\nstar_radius = 1.0\n"
    )
}

fn empirical_vs_analytic() -> Check {
    let probe = ScenarioFile::parse(&similar_belt_scenario(1.0), "probe").map_err(|e| e.to_string())?;
    let Scenario::Similar(p) = probe.scenario else {
        unreachable!()
    };
    let (a1, _) = similar_a(&p).map_err(|e| e.to_string())?;
    let size = (0.05 / a1).sqrt();
    let file = ScenarioFile::parse(&similar_belt_scenario(size), "five_body_belt").map_err(|e| e.to_string())?;
    let Scenario::Similar(p) = &file.scenario else {
        unreachable!()
    };
    let (a, _) = similar_a(p).map_err(|e| e.to_string())?;
    ensure((a - 0.05).abs() < 1e-9, || format!("A = {a}"))?;

    let report = run_sample(&file, &chain_settings(200_000, 700)).map_err(|e| e.to_string())?;
    ensure(report.flagged.is_none(), || {
        format!("run flagged: {:?}", report.flagged)
    })?;
    let r = &report.results;
    let bound = number(r, "comparison.bound")?;
    let lower = number(r, "comparison.max_epsilon_lower")?;
    let eps = number(r, "comparison.max_epsilon")?;
    ensure(boolean(r, "comparison.consistent")? && lower <= bound, || {
        format!("epsilon - 3 SE = {lower:.4} exceeds the bound {bound:.4}")
    })?;
    Ok(format!(
        "largest epsilon {eps:.4} (minus 3 SE: {lower:.4}) <= bound {bound:.4}"
    ))
}

fn main_belt() -> Check {
    let report =
        run_bound(&open_scenario("main_belt").map_err(|e| e.to_string())?, Some(1.0)).map_err(|e| e.to_string())?;
    let r = &report.results;
    let coefficient = 1.0 / number(r, "bodies_per_unit_a")?;
    let n_max = number(r, "max_count.n_max")?;
    ensure(within_factor(coefficient, 1.0 / 5e5, 10.0), || {
        format!("A / N = {coefficient:e}, not within a factor 10 of 2e-6")
    })?;
    ensure(within_factor(n_max, 1e5, 10.0), || {
        format!("N_max = {n_max}, not within a factor 10 of 1e5")
    })?;
    ensure(!report.notes.is_empty(), || {
        "the divergence wall is not reported".into()
    })?;
    Ok(format!(
        "A = N x {coefficient:.3e}, N_max = {n_max}, wall at A = {:.4}",
        number(r, "divergence_wall_a")?
    ))
}

fn planet_mass_cap() -> Check {
    let file = open_scenario("solar_planets").map_err(|e| e.to_string())?;
    let report = run_bound(&file, Some(1.0)).map_err(|e| e.to_string())?;
    let ratio = number(&report.results, "max_mass.ratio_to_star")?;
    ensure(within_factor(ratio, 3e-6, 10.0), || {
        format!("max mass {ratio:e} M, not within a factor 10 of 3e-6 M")
    })?;
    Ok(format!("max mass {ratio:.3e} M"))
}

fn galilean() -> Check {
    let file = open_scenario("galilean_satellites").map_err(|e| e.to_string())?;
    let Scenario::Planets(s) = &file.scenario else {
        unreachable!()
    };
    let mut p = s.params.clone();
    ensure(p.count() == 4 && p.offset == 0.0, || {
        "expected four satellites with zero offset".into()
    })?;
    p.masses = vec![1e-4 * p.star_mass; 4];
    let bound = planets_epsilon_bar_explicit(&p).map_err(|e| e.to_string())?;
    let eps = bound.finite().ok_or("the bound diverges")?;
    ensure(eps <= 1.0, || format!("bound {eps} > 1"))?;
    let mut margin = f64::INFINITY;
    for i in p.i_min..p.i_max {
        let m = collision_condition(&p, i).map_err(|e| e.to_string())?;
        ensure(m > 0.0, || format!("collision {i} not controlled: margin {m}"))?;
        margin = margin.min(m);
    }
    Ok(format!("bound {eps:.4}, smallest collision margin {margin:.2}"))
}

fn sampled_variance_ratio(gamma: f64, seed: u64) -> Result<f64, String> {
    let draws = sample_free_truncated(gamma, 1.0, 1_000_000, seed).map_err(|e| e.to_string())?;
    let n = draws.len() as f64;
    let mean = draws.iter().map(|d| d.0).sum::<f64>() / n;
    let var = draws.iter().map(|d| (d.0 - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(var * gamma * gamma)
}

fn truncated_measure() -> Check {
    let z = truncated_partition(500.0, 1.0).map_err(|e| e.to_string())?;
    let limit = TAU * TAU.sqrt() / 500.0;
    let rel = (z - limit).abs() / limit;
    ensure(rel <= 1e-3, || {
        format!("Z = {z} vs Gaussian limit {limit}, rel {rel:e}")
    })?;
    let at50 = sampled_variance_ratio(50.0, 1100)?;
    ensure((0.2..=2.5).contains(&at50), || {
        format!("variance ratio {at50} at gamma = 50")
    })?;
    let at500 = sampled_variance_ratio(500.0, 1101)?;
    ensure((at500 - 1.0).abs() <= 0.01, || {
        format!("variance ratio {at500} at gamma = 500")
    })?;
    Ok(format!(
        "Z rel {rel:.1e}, variance ratio {at50:.4} at gamma 50, {at500:.4} at gamma 500"
    ))
}

fn pair_sum_by_quadrature(n1: f64, nu: f64, a_min: f64) -> Result<f64, String> {
    let a_max = n1.powf(1.0 / nu);
    let inner = QuadratureSettings::with_tolerances(0.0, 1e-12);
    let outer = QuadratureSettings::with_tolerances(0.0, 1e-10);
    integrate(
        |a: f64| {
            let tail = integrate(|b: f64| Ok(b.powf(-nu - 1.0) / b), a, a_max, &inner)?.value;
            Ok(n1 * n1 * nu * nu * a.powf(-nu - 1.0) * a.powi(3) * tail)
        },
        a_min,
        a_max,
        &outer,
    )
    .map(|r| r.value)
    .map_err(|e| e.to_string())
}

fn small_asteroids() -> Check {
    let coupling = 1e-8;
    let mut worst = 0.0f64;
    for nu in [1.5, 2.0, 2.5] {
        for (n1, a_min) in [(100.0, 1.0), (1e4, 0.5), (1e6, 0.1)] {
            let closed = small_asteroid_tail_bound(n1, nu, a_min, small_asteroid_prefactor(coupling, n1, nu))
                .map_err(|e| e.to_string())?;
            let direct = coupling * pair_sum_by_quadrature(n1, nu, a_min)?;
            let rel = (closed - direct).abs() / direct;
            ensure(rel <= 1e-6, || format!("nu {nu}, N1 {n1}: {closed} vs {direct}"))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("largest relative difference {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("combinatorial identity", Some(10), combinatorial_identity),
        ("penrose scheme and identity", Some(60), penrose_scheme),
        ("enumeration counts", None, enumeration_counts),
        ("bound below 2A for A <= 1/5", None, twice_a),
        ("two-body chain vs quadrature", Some(300), two_body_cross_check),
        ("free measure recovery", None, free_measure_recovery),
        ("empirical epsilon below the bound", None, empirical_vs_analytic),
        ("main belt", None, main_belt),
        ("planet mass cap", None, planet_mass_cap),
        ("galilean satellites", None, galilean),
        ("truncated measure", None, truncated_measure),
        ("small asteroid closed form", None, small_asteroids),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if let (Ok(_), Some(s)) = (&outcome, limit) {
            if took > Duration::from_secs(*s) {
                outcome = Err(format!("took {took:.1?}, limit {s} s"));
            }
        }
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail} [{took:.2?}]", k + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
