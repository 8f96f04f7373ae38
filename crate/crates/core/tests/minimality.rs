//! Minimality of the two families under seeded random perturbations: every
//! perturbed driver costs at least the minimal energy for the point its tip
//! reaches and for the pair it welds.

use loewner_lab::drivers::{emw_xi, wang_lambda_down};
use loewner_lab::energy::{emw_energy, energy_quadrature, wang_energy};
use loewner_lab::loewner_flow::{tip_point, Driver};
use loewner_lab::welding::welded_pair_at;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_3, PI};

/// `base + Σ a_k sin(kπt/T)` with the matching derivative.
fn perturbed(base: &Driver, coeffs: Vec<f64>) -> Driver {
    let t_end = base.horizon();
    let (b, bd) = (base.clone(), base.clone());
    let c2 = coeffs.clone();
    Driver::new("perturbed", t_end, move |t: f64| {
        b.eval(t)
            + coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| a * ((k + 1) as f64 * PI * t / t_end).sin())
                .sum::<f64>()
    })
    .with_derivative(move |t: f64| {
        bd.slope_estimate(t)
            + c2.iter()
                .enumerate()
                .map(|(k, a)| {
                    a * (k + 1) as f64 * PI / t_end * ((k + 1) as f64 * PI * t / t_end).cos()
                })
                .sum::<f64>()
    })
}

fn random_coeffs(rng: &mut ChaCha8Rng, scale: f64) -> Vec<f64> {
    (0..4).map(|_| rng.gen_range(-scale..scale)).collect()
}

#[test]
fn perturbed_welding_minimizer_costs_more() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let base = emw_xi(-1.0, 2.0).unwrap();
    let t_end = base.horizon();
    let base_energy = energy_quadrature(&base, t_end, 64).unwrap().value;
    let (x, y) = welded_pair_at(&base, t_end, 2000).unwrap();
    assert!((base_energy - emw_energy(-x / y).unwrap()).abs() < 1e-6 * base_energy.max(1e-3));
    for _ in 0..20 {
        let d = perturbed(&base, random_coeffs(&mut rng, 0.05));
        let e = energy_quadrature(&d, t_end, 64).unwrap().value;
        let (x, y) = welded_pair_at(&d, t_end, 2000).unwrap();
        let bound = emw_energy(-x / y).unwrap();
        assert!(
            e >= bound - 1e-9,
            "energy {e} below minimal {bound} for pair ({x}, {y})"
        );
    }
}

#[test]
fn perturbed_point_minimizer_costs_more() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let base = wang_lambda_down(FRAC_PI_3).unwrap();
    let t_end = base.horizon();
    let tip = tip_point(&base, t_end, 2000).unwrap();
    assert!(
        (tip - num_complex::Complex64::from_polar(1.0, FRAC_PI_3)).norm() < 1e-6,
        "{tip}"
    );
    for _ in 0..20 {
        let d = perturbed(&base, random_coeffs(&mut rng, 0.05));
        let e = energy_quadrature(&d, t_end, 64).unwrap().value;
        let z = tip_point(&d, t_end, 2000).unwrap();
        let bound = wang_energy(z.arg()).unwrap();
        assert!(
            e >= bound - 1e-9,
            "energy {e} below minimal {bound} at tip {z}"
        );
    }
}

#[test]
fn perturbations_are_seed_deterministic() {
    let a = random_coeffs(&mut ChaCha8Rng::seed_from_u64(7), 1.0);
    let b = random_coeffs(&mut ChaCha8Rng::seed_from_u64(7), 1.0);
    assert_eq!(a, b);
}
