use std::f64::consts::PI;

use modica_core::exact::ThetaFamily;
use modica_core::minimize::{build_test_function, multistart, reduced_energy};
use modica_core::sweep::{defect_sign_map, eps_convergence_study, theta_threshold_scan};
use modica_core::verify::{extend, ode_residual, verify};
use modica_core::{run, HalfCellField, SolverConfig};

#[test]
fn minimizer_beats_every_tested_competitor() {
    for eps in [0.0, 0.1, 0.5] {
        let cfg = SolverConfig::new(0.1, eps, 1025);
        let r = run(&cfg).unwrap();
        assert!(r.outcome.newton_converged);
        let grid = cfg.grid().unwrap();
        let pot = cfg.potential().unwrap();
        let fam = ThetaFamily::new(0.1).unwrap();
        let zero = reduced_energy(&HalfCellField::zeros(&grid), &grid, &pot).unwrap();
        let plateau = reduced_energy(&build_test_function(&grid).unwrap(), &grid, &pot).unwrap();
        let gl =
            reduced_energy(&HalfCellField::from_fn(&grid, |x| fam.u(x).0), &grid, &pot).unwrap();
        let e = r.outcome.energy;
        assert!((zero - PI / 0.8).abs() < 1e-12);
        assert!(
            e <= zero && e <= plateau && e <= gl + 1e-15,
            "eps {eps}: {e} {zero} {plateau} {gl}"
        );
        assert!(r.outcome.grad_inf_norm <= cfg.newton_tol);
    }
}

#[test]
fn gl_solution_defect_close_to_closed_form() {
    let cfg = SolverConfig::new(0.1, 0.0, 1025);
    let r = run(&cfg).unwrap();
    let h = cfg.grid().unwrap().h();
    let c = ThetaFamily::new(0.1).unwrap().defect_constant();
    assert!((r.report.defect_min - c).abs() <= 10.0 * h * h);
}

#[test]
fn certificate_survives_refinement() {
    let coarse = run(&SolverConfig::new(0.1, 0.01, 1025)).unwrap();
    let fine = run(&SolverConfig::new(0.1, 0.01, 2049)).unwrap();
    assert!(coarse.certified());
    assert!(fine.certified());
}

#[test]
fn converged_solution_diagnostics() {
    let cfg = SolverConfig::new(0.1, 0.1, 1025);
    let r = run(&cfg).unwrap();
    let h = cfg.grid().unwrap().h();
    let rep = &r.report;
    assert!(rep.ode_residual_inf <= h * h);
    assert!(rep.max_modulus_sq > 0.0 && rep.max_modulus_sq < 1.0);
    assert!(rep.hamiltonian_within_bound);
    assert_eq!(rep.sym1_residual, 0.0);
    assert_eq!(rep.sym2_residual, 0.0);
    assert!(r.outcome.positive);
}

#[test]
fn perturbed_solution_is_never_certified() {
    let cfg = SolverConfig::new(0.1, 0.01, 1025);
    let r = run(&cfg).unwrap();
    let grid = cfg.grid().unwrap();
    let pot = cfg.potential().unwrap();
    for (k, amp) in [1e-3, 1e-5].into_iter().enumerate() {
        let mut vals = r.outcome.field.values().to_vec();
        for (i, v) in vals.iter_mut().enumerate().take(1024) {
            *v += amp * (((i * 7919 + k * 31) % 17) as f64 / 8.0 - 1.0);
        }
        let v = HalfCellField::new(vals, &grid).unwrap();
        let (sol, rep) = verify(&v, &grid, &pot).unwrap();
        assert!(rep.defect_max > 0.0);
        assert!(ode_residual(&sol, &pot) > rep.ode_residual_tol);
        assert!(!rep.counterexample_certified, "amp {amp}");
    }
}

#[test]
fn extension_of_non_stationary_field_has_large_residual() {
    let cfg = SolverConfig::new(0.1, 0.1, 513);
    let grid = cfg.grid().unwrap();
    let pot = cfg.potential().unwrap();
    let v = build_test_function(&grid).unwrap();
    let sol = extend(&v, &grid, &pot).unwrap();
    assert!(ode_residual(&sol, &pot) > 0.1);
    let rep = modica_core::VerificationReport::compute(&sol, Default::default()).unwrap();
    assert!(rep.hamiltonian_spread > 0.1);
}

#[test]
fn multistart_with_epsilon_forms_one_cluster() {
    let cfg = SolverConfig::new(0.1, 0.1, 513).with_seed(7);
    let rep = multistart(&cfg, 20).unwrap();
    assert_eq!(rep.converged_runs, 20);
    assert!(rep.energy_spread_rel < 1e-8, "{}", rep.energy_spread_rel);
    assert!(rep.max_pairwise_distance < 1e-6);
    assert!(rep.outcomes.iter().all(|o| o.positive));
}

#[test]
fn eps_study_defect_approaches_closed_form() {
    let eps = [0.2, 0.1, 0.05, 0.025];
    let t = eps_convergence_study(0.1, &eps, 513).unwrap();
    let c = ThetaFamily::new(0.1).unwrap().defect_constant();
    let gaps: Vec<f64> = t.rows.iter().map(|r| (r.defect_min - c).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert_eq!(t.monotone_decreasing, Some(true));
    let again = eps_convergence_study(0.1, &eps, 513).unwrap();
    assert_eq!(t, again);
}

#[test]
fn small_theta_is_nontrivial_for_large_epsilon() {
    let t = theta_threshold_scan(&[0.05, 0.1, 0.2], 0.5, 513, 11).unwrap();
    for row in &t.rows {
        assert!(
            row.nontrivial,
            "theta {}: {} vs {}",
            row.theta, row.best_energy, row.trivial_energy
        );
        assert_eq!(row.converged_runs, 5);
        assert!((row.trivial_energy - PI / (8.0 * row.theta)).abs() < 1e-15);
    }
    assert_eq!(t.last_nontrivial_theta, Some(0.2));
    assert_eq!(t.first_trivial_theta, None);
    assert_eq!(
        t,
        theta_threshold_scan(&[0.05, 0.1, 0.2], 0.5, 513, 11).unwrap()
    );
}

#[test]
fn defect_map_counterexample_regime() {
    let t = defect_sign_map(&[0.1], &[0.01], 513).unwrap();
    assert!(t.cells[0].defect_min > 0.0);
    assert!(t.cells[0].certified);
}
