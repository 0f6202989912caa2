//! Cross-resolution and cross-module checks on the spectral solver:
//! grid convergence against a fine reference, and the measured velocity
//! supremum tracked by the Hölder-based ceiling over a whole run.

use gsqg::bounds::velocity_sup_bound;
use gsqg::sim::{run, velocity, InitialData, SimConfig};

fn elliptic_cfg(n: usize, dt: f64) -> SimConfig {
    SimConfig {
        beta: 1.5,
        n,
        dt,
        t_end: 0.5,
        dealias: 2.0 / 3.0,
        initial_data: InitialData::Elliptic { a0: 1.0, b0: 2.0, amp: 1.0, scale: 0.2 },
        sigma: 0.5,
        level_values: (0.3, 0.6),
        diag_every: 1_000_000, // initial + final records only
        box_length: 2.0 * std::f64::consts::PI,
        cfl_max: 0.5,
        angle_epsilon: 0.05,
    }
}

/// Sup-norm difference on the coarse grid's nodes, which coincide with
/// every (fine_n/coarse_n)-th node of the fine grid.
fn coarse_fine_gap(coarse: &gsqg::sim::ScalarField, fine: &gsqg::sim::ScalarField) -> f64 {
    let ratio = fine.n / coarse.n;
    let mut worst = 0.0_f64;
    for ix in 0..coarse.n {
        for iy in 0..coarse.n {
            let d = (coarse.at(ix, iy) - fine.at(ix * ratio, iy * ratio)).abs();
            worst = worst.max(d);
        }
    }
    worst
}

#[test]
fn refining_the_grid_collapses_the_error_spectrally() {
    // One shared time step, CFL-safe on the finest grid, so the runs
    // differ only in spatial resolution.
    let probe = gsqg::sim::make_initial_field(&elliptic_cfg(512, 1.0)).unwrap();
    let (u1, u2) = velocity(&probe, 1.5);
    let umax = u1
        .values
        .iter()
        .zip(&u2.values)
        .fold(0.0_f64, |m, (a, b)| m.max(a.hypot(*b)));
    let dt = 0.8 * 0.5 * probe.box_length / (512.0 * umax);

    let reference = run(&elliptic_cfg(512, dt), |_| {}).unwrap();
    let mid = run(&elliptic_cfg(256, dt), |_| {}).unwrap();
    let coarse = run(&elliptic_cfg(128, dt), |_| {}).unwrap();

    let err_mid = coarse_fine_gap(&mid, &reference);
    let err_coarse = coarse_fine_gap(&coarse, &reference);
    println!("grid error: n=128 → {err_coarse:.3e}, n=256 → {err_mid:.3e}");
    assert!(err_coarse < 1e-2, "coarse run did not converge: {err_coarse}");
    assert!(err_mid < 1e-5, "mid run should be near-resolved: {err_mid}");
    assert!(
        err_coarse >= 10.0 * err_mid,
        "doubling resolution must cut the error ≥ 10×: {err_coarse} vs {err_mid}"
    );
}

#[test]
fn velocity_sup_stays_under_the_calibrated_holder_ceiling() {
    // The ceiling is the (ε, k)-split bound with the Hölder norm measured
    // on the grid at the same instant; the unit-prefactor constant is
    // calibrated once at t = 0 and must keep working (×2 slack) as the
    // saddle evolves.
    let cfg = SimConfig {
        beta: 1.5,
        n: 128,
        dt: 0.01,
        t_end: 0.4,
        dealias: 2.0 / 3.0,
        initial_data: InitialData::Saddle {
            alpha0: 0.1,
            delta0: 0.1,
            amp: 0.5,
            rho_scale: 0.3,
            cutoff_radius: 2.5,
            offset: 0.5,
        },
        sigma: 0.9, // the split bound needs λ ∈ (β−1, 1)
        level_values: (0.475, 0.525),
        diag_every: 5,
        box_length: 2.0 * std::f64::consts::PI,
        cfl_max: 0.5,
        angle_epsilon: 0.05,
    };
    let eps = cfg.box_length / cfg.n as f64;
    let ceiling = |sup: f64, semi: f64| {
        velocity_sup_bound(cfg.beta, cfg.sigma, sup + semi, sup, eps, 1.0).unwrap()
    };

    let mut records = Vec::new();
    run(&cfg, |r| records.push(r.clone())).unwrap();
    assert!(records.len() >= 5);

    let first = &records[0];
    let calibration = first.sup_velocity / ceiling(first.sup_theta, first.holder_seminorm);
    assert!(calibration.is_finite() && calibration > 0.0);

    for r in &records {
        let allowed = 2.0 * calibration * ceiling(r.sup_theta, r.holder_seminorm);
        assert!(
            r.sup_velocity <= allowed,
            "t = {}: sup |u| = {} exceeds calibrated ceiling {allowed}",
            r.time,
            r.sup_velocity
        );
    }
}
