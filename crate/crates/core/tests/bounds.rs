use epsilon_stability::bounds::*;
use epsilon_stability::quadrature::{integrate, QuadratureSettings};
use epsilon_stability::Error;
use proptest::prelude::*;

/// Orders bound outcomes with divergence and unmet preconditions at infinity.
fn as_number(b: epsilon_stability::Result<EpsilonBound<f64>>) -> f64 {
    match b {
        Ok(b) => b.finite().unwrap_or(f64::INFINITY),
        Err(Error::Precondition(_)) => f64::INFINITY,
        Err(e) => panic!("unexpected error {e}"),
    }
}

fn similar(n: u64, size: f64, gamma: f64, rho: f64) -> SimilarBeltParams<f64> {
    SimilarBeltParams {
        n,
        size,
        gamma,
        density_ratio: rho,
        orbit_radius: 100.0,
        star_radius: 1.0,
    }
}

fn similar_bound(p: &SimilarBeltParams<f64>) -> f64 {
    let (a, ab) = similar_a(p).unwrap();
    as_number(Ok(similar_epsilon_bound(a, ab)))
}

fn powerlaw(n: u64, gamma: f64, rho: f64, orbit: f64) -> PowerLawBeltParams<f64> {
    PowerLawBeltParams {
        n,
        nu: 2.0,
        classes: 10,
        gamma,
        density_ratio: rho,
        orbit_radius: orbit,
        star_radius: 7e5,
        unit_length: 1.0,
    }
}

fn chain(gamma: f64, mass_scale: f64) -> PlanetChainParams<f64> {
    PlanetChainParams {
        offset: 0.0,
        scale: 1.0,
        ratio: 1.8,
        i_min: 0,
        i_max: 3,
        gamma,
        k_typical: 5.0,
        masses: vec![
            1e-6 * mass_scale,
            2e-6 * mass_scale,
            0.5e-6 * mass_scale,
            1.5e-6 * mass_scale,
        ],
        planet_radii: vec![1e-5; 4],
        star_mass: 1.0,
        c2_override: None,
    }
}

#[test]
fn closed_form_stays_below_twice_a() {
    for k in 1..=1000 {
        let a = 0.2 * k as f64 / 1000.0;
        let b = similar_epsilon_bound(a, 0.8 * a);
        let v = b.finite().expect("finite below A = 1/5");
        assert!(v <= 2.0 * a, "A = {a}: bound {v}");
    }
}

/// Integrates the pair sum over the size distribution, both integrals done numerically.
fn pair_sum_by_quadrature(n1: f64, nu: f64, a_min: f64) -> f64 {
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
    .unwrap()
    .value
}

#[test]
fn small_asteroid_closed_form_matches_quadrature() {
    let coupling = 3.7e-9;
    for nu in [1.5, 2.0, 2.5] {
        for (n1, a_min) in [(100.0, 1.0), (1e4, 0.5), (50.0, 2.0)] {
            let prefactor = small_asteroid_prefactor(coupling, n1, nu);
            let closed = small_asteroid_tail_bound(n1, nu, a_min, prefactor).unwrap();
            let direct = coupling * pair_sum_by_quadrature(n1, nu, a_min);
            let rel = (closed - direct).abs() / direct;
            assert!(rel <= 1e-6, "nu {nu}, N1 {n1}, a_min {a_min}: {closed} vs {direct}");
        }
    }
}

#[test]
fn small_asteroid_log_branch_is_the_limit() {
    let p = small_asteroid_prefactor(1.0f64, 100.0, 3.0);
    let at = small_asteroid_tail_bound(100.0, 3.0, 1.0, p).unwrap();
    let near =
        small_asteroid_tail_bound(100.0, 3.0 + 1e-6, 1.0, small_asteroid_prefactor(1.0, 100.0, 3.0 + 1e-6)).unwrap();
    assert!((at - near).abs() / at < 1e-4);
    let direct = pair_sum_by_quadrature(100.0, 3.0, 1.0);
    assert!((at - direct).abs() / direct < 1e-6);
}

#[test]
fn tree_sum_never_exceeds_the_geometric_series() {
    for n in 2..=6usize {
        for k in 1..=40 {
            let a = 0.25 * k as f64 / 40.0;
            let closed = similar_epsilon_bound(a, 0.8 * a);
            let Some(closed) = closed.finite() else { continue };
            // every body sees the others through the same pair bound, summing to A_bar
            let vbar = 0.8 * a / n as f64;
            let tree = tree_bound_uniform(vbar, n, 0).unwrap();
            assert!(tree <= closed, "n {n}, A {a}: tree {tree} > {closed}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn similar_bound_is_monotone(
        n in 1u64..2000, size in 1e-3f64..0.1, gamma in 1.0f64..200.0, rho in 0.1f64..5.0, f in 1.0f64..3.0,
    ) {
        let base = similar_bound(&similar(n, size, gamma, rho));
        prop_assert!(similar_bound(&similar((n as f64 * f) as u64, size, gamma, rho)) >= base);
        prop_assert!(similar_bound(&similar(n, size * f, gamma, rho)) >= base);
        prop_assert!(similar_bound(&similar(n, size, gamma * f, rho)) >= base);
        prop_assert!(similar_bound(&similar(n, size, gamma, rho * f)) >= base);
    }

    #[test]
    fn powerlaw_bound_is_monotone(
        n in 1u64..1_000_000, gamma in 1.0f64..200.0, rho in 0.1f64..5.0, orbit in 1e7f64..1e9, f in 1.0f64..3.0,
    ) {
        let b = |p: PowerLawBeltParams<f64>| as_number(powerlaw_epsilon_bound(&p));
        let base = b(powerlaw(n, gamma, rho, orbit));
        prop_assert!(b(powerlaw((n as f64 * f) as u64, gamma, rho, orbit)) >= base);
        prop_assert!(b(powerlaw(n, gamma * f, rho, orbit)) >= base);
        prop_assert!(b(powerlaw(n, gamma, rho * f, orbit)) >= base);
        prop_assert!(b(powerlaw(n, gamma, rho, orbit * f)) >= base);
        let mut more = powerlaw(n, gamma, rho, orbit);
        more.classes = 11;
        prop_assert!(b(more) >= base);
    }

    #[test]
    fn planet_bounds_grow_with_mass(gamma in 50.0f64..400.0, scale in 0.01f64..50.0, f in 1.0f64..3.0) {
        let closed = |p: PlanetChainParams<f64>| as_number(planets_epsilon_bar(&p));
        let explicit = |p: PlanetChainParams<f64>| as_number(planets_epsilon_bar_explicit(&p));
        prop_assert!(closed(chain(gamma, scale * f)) >= closed(chain(gamma, scale)));
        prop_assert!(explicit(chain(gamma, scale * f)) >= explicit(chain(gamma, scale)));
    }

    #[test]
    fn planet_bounds_grow_with_gamma_past_twice_the_band(gamma in 40.0f64..400.0, f in 1.0f64..3.0) {
        // c3 grows like gamma^2 / (c gamma - 2k(c + b)), increasing once gamma >= 4k(c + b)/c = 20
        let closed = |g: f64| as_number(planets_epsilon_bar(&chain(g, 1.0)));
        prop_assert!(closed(gamma * f) >= closed(gamma));
    }

    #[test]
    fn reevaluation_is_bit_exact(
        n in 1u64..10_000_000, gamma in 1.0f64..200.0, rho in 0.1f64..5.0, scale in 0.01f64..5.0,
    ) {
        let (a, ab) = similar_a(&similar(n, 0.01, gamma, rho)).unwrap();
        let b = similar_epsilon_bound(a, ab);
        prop_assert_eq!(b.reevaluate().unwrap(), b.value);

        let b = powerlaw_epsilon_bound(&powerlaw(n, gamma, rho, 4e8)).unwrap();
        prop_assert_eq!(b.reevaluate().unwrap(), b.value);

        let p = chain(gamma.max(20.5), scale);
        if let Ok(b) = planets_epsilon_bar(&p) {
            prop_assert_eq!(b.reevaluate().unwrap(), b.value);
        }
        let b = planets_epsilon_bar_explicit(&p).unwrap();
        prop_assert_eq!(b.reevaluate().unwrap(), b.value);
    }

    #[test]
    fn max_n_is_the_edge(size in 1e-3f64..0.1, gamma in 1.0f64..200.0, eps in 0.01f64..5.0) {
        let p = similar(1, size, gamma, 2.0);
        let r = similar_max_n(&p, eps).unwrap();
        let ok = |n: u64| n > 0 && {
            let (a, ab) = similar_a(&p.with_n(n)).unwrap();
            similar_epsilon_bound(a, ab).certifies(eps)
        };
        prop_assert!(r.n == 0 || ok(r.n));
        prop_assert!(!ok(r.n + 1));
    }

    #[test]
    fn tree_bound_is_monotone_in_every_pair(n in 2usize..=5, seed in any::<u64>(), slot in 0usize..10, bump in 0.0f64..0.1) {
        let pairs = n * (n - 1) / 2;
        let v: Vec<f64> = (0..pairs).map(|k| ((seed >> (k * 6 % 58)) & 0x3f) as f64 / 200.0).collect();
        let mut w = v.clone();
        let s = slot % pairs;
        w[s] = (w[s] + bump).min(0.5);
        prop_assert!(tree_bound_small_n(&w, n, 0).unwrap() >= tree_bound_small_n(&v, n, 0).unwrap());
    }
}
