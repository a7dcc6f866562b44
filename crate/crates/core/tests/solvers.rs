mod common;

use common::{max_diff, random_qp};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shellvi::solver::{
    brute_force_oracle, complementarity_residual, solve_active_set, solve_psor, ActiveSetOptions, PsorOptions,
};
use shellvi::ObstacleQP;

#[test]
fn iterative_solvers_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let qp = random_qp(&mut rng);
        let oracle = brute_force_oracle(&qp).unwrap();
        let psor = solve_psor(&qp, &PsorOptions::default()).unwrap();
        let pdas = solve_active_set(&qp, &ActiveSetOptions::default()).unwrap();
        for r in [&psor, &pdas] {
            assert!(r.converged);
            assert!(max_diff(&r.x, &oracle.x) <= 1e-8);
            assert!(r.complementarity_residual <= 1e-10);
            assert!(r.energy >= oracle.energy - 1e-10);
        }
    }
}

#[test]
fn tridiagonal_instance_agrees_across_methods() {
    let a = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.0, 1.0, 4.0, 1.0, 0.0, 1.0, 4.0]);
    let qp = ObstacleQP::from_dense(&a, vec![1.0, -6.0, 1.0], &[true; 3]).unwrap();
    let oracle = brute_force_oracle(&qp).unwrap();
    assert_eq!(oracle.active_set, vec![1]);
    assert_eq!(oracle.x[0], 0.25);
    let psor = solve_psor(&qp, &PsorOptions { tol: 1e-12, ..Default::default() }).unwrap();
    let pdas = solve_active_set(&qp, &ActiveSetOptions::default()).unwrap();
    assert!(max_diff(&psor.x, &oracle.x) <= 1e-10);
    assert!(max_diff(&pdas.x, &oracle.x) <= 1e-10);
}

#[test]
fn residual_measures_bound_violation() {
    let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
    let qp = ObstacleQP::from_dense(&a, vec![2.0, -2.0], &[true, true]).unwrap();
    assert!(complementarity_residual(&qp, &[1.0, 0.0]) <= 1e-14);
    // unconstrained minimiser (1, -1) violates the second bound by 1
    assert_eq!(complementarity_residual(&qp, &[1.0, -1.0]), 1.0);
}

#[test]
fn residual_grows_linearly_under_free_perturbation() {
    let a = DMatrix::from_row_slice(3, 3, &[5.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]);
    let qp = ObstacleQP::from_dense(&a, vec![1.0, -2.0, 3.0], &[false, true, false]).unwrap();
    let mut x = brute_force_oracle(&qp).unwrap().x;
    x[0] += 1e-3;
    let r = complementarity_residual(&qp, &x);
    assert!((r - 5.0e-3).abs() <= 1e-12, "{r}");
}

#[test]
fn psor_energy_never_increases() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let qp = random_qp(&mut rng);
        let r = solve_psor(&qp, &PsorOptions { record_energy: true, ..Default::default() }).unwrap();
        for w in r.energy_history.windows(2) {
            assert!(w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solution_does_not_depend_on_start(seed in any::<u64>(), shift in 0.0f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let qp = random_qp(&mut rng);
        let start: Vec<f64> = (0..qp.dim()).map(|i| shift * (1.0 + (i % 3) as f64)).collect();
        let cold = solve_psor(&qp, &PsorOptions::default()).unwrap();
        let warm = solve_psor(&qp, &PsorOptions { initial: Some(start.clone()), ..Default::default() }).unwrap();
        let pdas = solve_active_set(&qp, &ActiveSetOptions { initial: Some(start), ..Default::default() }).unwrap();
        prop_assert!(max_diff(&cold.x, &warm.x) <= 1e-8);
        prop_assert!(max_diff(&cold.x, &pdas.x) <= 1e-8);
    }

    #[test]
    fn returned_points_are_feasible(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let qp = random_qp(&mut rng);
        for r in [solve_psor(&qp, &PsorOptions::default()).unwrap(),
                  solve_active_set(&qp, &ActiveSetOptions::default()).unwrap()] {
            for i in qp.constrained() {
                prop_assert!(r.x[i] >= qp.lower[i] - 1e-12);
            }
            for &i in &r.active_set {
                prop_assert!(qp.is_constrained(i));
            }
        }
    }
}
