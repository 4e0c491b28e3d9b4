use std::f64::consts::{PI, TAU};

use epsilon_stability::model::{gaussian_exponent, Configuration};
use epsilon_stability::{pair_coupling, Body, CentralField, GibbsModel, GRAVITATIONAL_CONSTANT};
use proptest::prelude::*;

/// Three bodies on separated rings, so small radial deviations never collide.
fn rings(coupling: f64) -> GibbsModel<f64> {
    GibbsModel::new(
        vec![50.0, 80.0, 120.0],
        vec![1.0, 1.5, 2.2],
        vec![1e-4; 3],
        &[coupling; 3],
    )
    .unwrap()
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn hamiltonian_ignores_a_global_rotation(
        xi in prop::array::uniform3(-0.05f64..0.05),
        theta in prop::array::uniform3(0.0f64..TAU),
        phi in 0.0f64..TAU,
        coupling in 1e-4f64..0.5,
    ) {
        let m = rings(coupling);
        let h = m.hamiltonian(&Configuration::new(xi.to_vec(), theta.to_vec()).unwrap()).unwrap();
        let turned: Vec<f64> = theta.iter().map(|t| t + phi).collect();
        let h2 = m.hamiltonian(&Configuration::new(xi.to_vec(), turned).unwrap()).unwrap();
        prop_assert!((h - h2).abs() <= 1e-12 * h.abs().max(1e-300), "{} vs {}", h, h2);
    }

    #[test]
    fn closer_pairs_have_lower_energy(
        xi in prop::array::uniform2(-0.05f64..0.05),
        near in 0.01f64..PI,
        f in 0.0f64..1.0,
        coupling in 1e-4f64..0.5,
    ) {
        let m = GibbsModel::new(vec![60.0, 60.0], vec![1.0, 1.3], vec![1e-4; 2], &[coupling]).unwrap();
        let far = near + f * (PI - near);
        let h = |gap: f64| m.hamiltonian(&Configuration::new(xi.to_vec(), vec![0.0, gap]).unwrap()).unwrap();
        prop_assert!(h(near) <= h(far));
    }

    #[test]
    fn coupling_scales_with_the_pair_of_masses(
        m1 in 1e15f64..1e25, m2 in 1e15f64..1e25, r1 in 1e10f64..1e12, r2 in 1e10f64..1e12,
        g1 in 1.0f64..500.0, g2 in 1.0f64..500.0, lambda in 1e-3f64..1e3,
    ) {
        let star = 2e30;
        let c = |s: f64, big: f64| {
            let a = Body::new(0, m1 * s, 1e3, r1, g1).unwrap();
            let b = Body::new(1, m2 * s, 1e3, r2, g2).unwrap();
            pair_coupling(&a, &b, big).unwrap().gamma_ij
        };
        let base = c(1.0, star);
        // degree one in the two masses with the star fixed
        let rel = (c(lambda, star) - lambda * base).abs() / (lambda * base);
        prop_assert!(rel < 1e-12, "{}", rel);
        // scaling the star as well leaves the coupling unchanged
        let rel = (c(lambda, lambda * star) - base).abs() / base;
        prop_assert!(rel < 1e-12, "{}", rel);
    }

    #[test]
    fn gaussian_exponent_is_beta_times_harmonic_part(
        xi in -0.5f64..0.5, r in 1e9f64..1e13, m in 1e15f64..1e27, gamma in 1.0f64..1000.0,
    ) {
        let f = CentralField::new(GRAVITATIONAL_CONSTANT, 1.98841e30).unwrap();
        let lhs = gaussian_exponent(xi, gamma);
        let rhs = f.beta_free(r, m, gamma).unwrap() * f.harmonic_potential(xi, r, m);
        prop_assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs(), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn position_round_trips(xi in -0.9f64..5.0, theta in 0.0f64..TAU, r in 1e-3f64..1e12) {
        let b = Body::new(0, 1.0, 1e-6, r, 10.0).unwrap();
        let (x2, t2) = b.state_of(b.position(xi, theta).unwrap());
        prop_assert!((x2 - xi).abs() <= 1e-12 * (1.0 + xi.abs()));
        prop_assert!(angle_gap(t2, theta) <= 1e-12);
    }
}
