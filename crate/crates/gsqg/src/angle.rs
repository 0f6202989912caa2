//! Opening-angle dynamics: the scalar envelope ODEs dγ/dt = f(γ) that
//! bracket the contour opening angle, an adaptive embedded Runge–Kutta
//! integrator with floor detection, and the blow-up time lower bound
//! T = (1/C)·∫₀^{γ₀} γ^{β−2}/|ln γ| dγ evaluated through two independent
//! desingularizing substitutions.

use crate::error::{Error, Result};
use crate::util::quad::{integrate_segments, QuadControl};

/// One accepted integration point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleState {
    pub t: f64,
    pub gamma: f64,
}

/// Result of an envelope integration.
#[derive(Debug, Clone)]
pub struct AngleTrajectory {
    /// Accepted steps, strictly increasing in t, non-increasing in γ.
    pub samples: Vec<AngleState>,
    /// Time at which γ reached the floor, if it did before t_max.
    pub vanish_time: Option<f64>,
    /// The floor the integration was run against.
    pub gamma_floor: f64,
    /// Set when the step size underflowed against a hard vanish: the
    /// dynamics reach γ = 0 in a time interval smaller than the floating
    /// point resolution of t, so `vanish_time` is the stall point (its
    /// distance to the true vanish time is below time resolution).
    pub step_underflow: bool,
}

/// Integrator tuning. `dt_init`/`dt_max` default to an automatic choice
/// (1% of the initial decay scale) and "uncapped".
#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rel_tol: f64,
    pub dt_init: Option<f64>,
    pub dt_max: Option<f64>,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { rel_tol: 1e-10, dt_init: None, dt_max: None }
    }
}

/// Lower-envelope rate: dγ/dt = −c̃·γ^{2−β} + c₃·γ.
/// The linear term can stall the decay; the integrator refuses initial
/// data on the growing side of the balance point.
pub fn lower_envelope_rhs(gamma: f64, c_tilde: f64, c3: f64, beta: f64) -> f64 {
    -c_tilde * gamma.powf(2.0 - beta) + c3 * gamma
}

/// Upper-envelope rate: dγ/dt = −c̃₂·γ^{2−β}·|ln γ|, for γ ∈ (0, 1/2).
/// At β = 1 the logarithm keeps γ positive forever (double-exponential
/// decay); for β > 1 the angle vanishes in finite time.
pub fn upper_envelope_rhs(gamma: f64, c2_tilde: f64, beta: f64) -> Result<f64> {
    if !(beta >= 1.0 && beta < 2.0) {
        return Err(Error::Domain(format!(
            "upper_envelope_rhs: β = {beta} outside [1,2)"
        )));
    }
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(Error::Domain(format!(
            "upper_envelope_rhs: γ = {gamma} outside (0, 1/2)"
        )));
    }
    Ok(-c2_tilde * gamma.powf(2.0 - beta) * (-gamma.ln()))
}

// Cash–Karp 5(4) tableau.
const A2: f64 = 0.2;
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [0.3, -0.9, 1.2];
const A5: [f64; 4] = [-11.0 / 54.0, 2.5, -70.0 / 27.0, 35.0 / 27.0];
const A6: [f64; 5] = [
    1631.0 / 55296.0,
    175.0 / 512.0,
    575.0 / 13824.0,
    44275.0 / 110592.0,
    253.0 / 4096.0,
];
const B5: [f64; 6] = [37.0 / 378.0, 0.0, 250.0 / 621.0, 125.0 / 594.0, 0.0, 512.0 / 1771.0];
const B4: [f64; 6] = [
    2825.0 / 27648.0,
    0.0,
    18575.0 / 48384.0,
    13525.0 / 55296.0,
    277.0 / 14336.0,
    0.25,
];

/// One embedded step from y over dt. None when a stage leaves the rate's
/// domain (argument ≤ 0 or a Domain error) — the caller shrinks dt.
fn ck_step(rhs: &impl Fn(f64) -> Result<f64>, y: f64, dt: f64) -> Option<(f64, f64)> {
    let eval = |g: f64| -> Option<f64> {
        if g > 0.0 && g.is_finite() {
            rhs(g).ok()
        } else {
            None
        }
    };
    let k1 = eval(y)?;
    let k2 = eval(y + dt * A2 * k1)?;
    let k3 = eval(y + dt * (A3[0] * k1 + A3[1] * k2))?;
    let k4 = eval(y + dt * (A4[0] * k1 + A4[1] * k2 + A4[2] * k3))?;
    let k5 = eval(y + dt * (A5[0] * k1 + A5[1] * k2 + A5[2] * k3 + A5[3] * k4))?;
    let k6 = eval(
        y + dt * (A6[0] * k1 + A6[1] * k2 + A6[2] * k3 + A6[3] * k4 + A6[4] * k5),
    )?;
    let y5 = y + dt * (B5[0] * k1 + B5[2] * k3 + B5[3] * k4 + B5[5] * k6);
    let y4 = y + dt * (B4[0] * k1 + B4[2] * k3 + B4[3] * k4 + B4[4] * k5 + B4[5] * k6);
    Some((y5, (y5 - y4).abs()))
}

/// Integrate dγ/dt = rhs(γ) from γ₀ until t_max or until γ hits the
/// floor, whichever comes first.
///
/// * Initial data with rhs(γ₀) > 0 is rejected — the envelopes are
///   decay bounds, and a growing start means the parameters are outside
///   the regime the bound was derived for.
/// * A floor crossing is located by bisection over the step size, so
///   `vanish_time` is resolved to the step tolerance, not the step size.
/// * If the decay is so steep that no representable step advances t
///   (hard vanish below time resolution), the trajectory terminates at
///   the stall point with `step_underflow` set.
pub fn integrate_angle(
    rhs: impl Fn(f64) -> Result<f64>,
    gamma0: f64,
    t_max: f64,
    step: &StepControl,
    gamma_floor: f64,
) -> Result<AngleTrajectory> {
    if !(gamma0.is_finite() && gamma_floor > 0.0 && gamma_floor < gamma0) {
        return Err(Error::Domain(format!(
            "integrate_angle: need 0 < floor < γ₀, got floor = {gamma_floor}, γ₀ = {gamma0}"
        )));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Domain(format!("integrate_angle: t_max = {t_max} must be > 0")));
    }
    if !(step.rel_tol > 0.0) {
        return Err(Error::Domain(format!(
            "integrate_angle: rel_tol = {} must be > 0",
            step.rel_tol
        )));
    }
    let r0 = rhs(gamma0)?;
    if r0 > 0.0 {
        return Err(Error::Domain(format!(
            "integrate_angle: rate {r0} > 0 at γ₀ = {gamma0} — not a decaying envelope"
        )));
    }

    let mut samples = vec![AngleState { t: 0.0, gamma: gamma0 }];
    if r0 == 0.0 {
        // Stationary point: nothing ever moves.
        samples.push(AngleState { t: t_max, gamma: gamma0 });
        return Ok(AngleTrajectory {
            samples,
            vanish_time: None,
            gamma_floor,
            step_underflow: false,
        });
    }

    let dt_cap = step.dt_max.unwrap_or(f64::INFINITY);
    let mut dt = step
        .dt_init
        .unwrap_or(0.01 * gamma0 / r0.abs())
        .min(dt_cap)
        .min(t_max);
    let mut t = 0.0;
    let mut y = gamma0;
    let mut vanish = None;
    let mut underflow = false;

    'march: while t < t_max {
        if t_max - t <= 4.0 * f64::EPSILON * t_max {
            break; // within time resolution of the horizon
        }
        dt = dt.min(dt_cap).min(t_max - t);
        let (y5, err) = loop {
            if t + dt == t {
                // The remaining dynamics happen below time resolution.
                underflow = true;
                vanish = Some(t);
                break 'march;
            }
            match ck_step(&rhs, y, dt) {
                Some(pair) => break pair,
                None => dt *= 0.5,
            }
        };
        let allowed = step.rel_tol * y;
        if err > allowed {
            dt *= (0.9 * (allowed / err).powf(0.2)).clamp(0.2, 1.0);
            continue;
        }
        if y5 <= gamma_floor {
            // Bisect the crossing over the step size.
            let (mut lo, mut hi) = (0.0, dt);
            for _ in 0..200 {
                if hi - lo <= 1e-12 * dt {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let crossed = match ck_step(&rhs, y, mid) {
                    Some((ym, _)) => ym <= gamma_floor,
                    None => true, // left the domain even earlier
                };
                if crossed {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let tc = t + 0.5 * (lo + hi);
            vanish = Some(tc);
            samples.push(AngleState { t: tc, gamma: gamma_floor });
            break;
        }
        t += dt;
        y = y5.min(y); // non-increase invariant against roundoff
        samples.push(AngleState { t, gamma: y });
        dt *= (0.9 * (allowed / err).powf(0.2)).clamp(0.2, 5.0);
    }

    Ok(AngleTrajectory {
        samples,
        vanish_time: vanish,
        gamma_floor,
        step_underflow: underflow,
    })
}

/// Exact vanish time of the pure power decay dγ/dt = −c·γ^{2−β}:
/// T = γ₀^{β−1} / (c·(β−1)).
pub fn power_ode_exact_vanish_time(beta: f64, gamma0: f64, c: f64) -> Result<f64> {
    if !(beta > 1.0 && beta < 2.0) {
        return Err(Error::Domain(format!(
            "power_ode_exact_vanish_time: β = {beta} outside (1,2)"
        )));
    }
    if !(gamma0 > 0.0 && c > 0.0) {
        return Err(Error::Domain(
            "power_ode_exact_vanish_time: γ₀ and c must be > 0".into(),
        ));
    }
    Ok(gamma0.powf(beta - 1.0) / (c * (beta - 1.0)))
}

fn check_blowup_args(op: &str, beta: f64, gamma0: f64, c: f64) -> Result<()> {
    if !(beta > 1.0 && beta < 2.0) {
        return Err(Error::Domain(format!("{op}: β = {beta} outside (1,2)")));
    }
    if !(gamma0 > 0.0 && gamma0 < 0.5) {
        return Err(Error::Domain(format!("{op}: γ₀ = {gamma0} outside (0, 1/2)")));
    }
    if !(c > 0.0) {
        return Err(Error::Domain(format!("{op}: C = {c} must be > 0")));
    }
    Ok(())
}

/// Endpoints fixed, interior log-spaced: breakpoints hugging the
/// integrable endpoint singularity structure at 0.
fn log_ladder(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (lo.ln(), hi.ln());
    let mut pts = vec![0.0];
    for k in 0..n {
        pts.push((la + (lb - la) * k as f64 / n as f64).exp());
    }
    pts.push(hi);
    pts
}

/// Blow-up time lower bound
/// T = (1/C)·∫₀^{γ₀} γ^{β−2}/|ln γ| dγ,
/// evaluated through u = γ^{β−1}, which flattens the integrand to
/// T = (1/C)·∫₀^{u₀} du/(−ln u) with u₀ = γ₀^{β−1}.
///
/// The u-integrand is continuous at 0, and the log ladder of breakpoints
/// resolves its steep approach; the truncated head below 10⁻⁶⁰ is under
/// 10⁻⁶², far below any tolerance in use.
pub fn blowup_time_lower_bound(
    beta: f64,
    gamma0: f64,
    c: f64,
    ctrl: &QuadControl,
) -> Result<f64> {
    check_blowup_args("blowup_time_lower_bound", beta, gamma0, c)?;
    let u0 = gamma0.powf(beta - 1.0);
    let pts = log_ladder(1e-60, u0, 16);
    let f = |u: f64| 1.0 / (-u.ln());
    let (v, _) = integrate_segments(f, &pts, ctrl.abs_tol * c, ctrl.max_subdivisions)?;
    Ok(v / c)
}

/// Independent route to [`blowup_time_lower_bound`] through γ = w^s with
/// s = ⌈3/(β−1)⌉:
/// T = (1/C)·∫₀^{w₀} w^{s(β−1)−1}/(−ln w) dw, w₀ = γ₀^{1/s}.
/// The exponent s(β−1)−1 ≥ 2 makes the integrand C¹ at the origin.
pub fn blowup_time_lower_bound_alt(
    beta: f64,
    gamma0: f64,
    c: f64,
    ctrl: &QuadControl,
) -> Result<f64> {
    check_blowup_args("blowup_time_lower_bound_alt", beta, gamma0, c)?;
    let s = (3.0 / (beta - 1.0)).ceil();
    let w0 = gamma0.powf(1.0 / s);
    let p = s * (beta - 1.0) - 1.0;
    let pts = log_ladder(1e-30, w0, 12);
    let f = |w: f64| {
        if w == 0.0 {
            0.0
        } else {
            w.powf(p) / (-w.ln())
        }
    };
    let (v, _) = integrate_segments(f, &pts, ctrl.abs_tol * c, ctrl.max_subdivisions)?;
    Ok(v / c)
}

/// Separation needed for two level values under a Hölder seminorm:
/// two contours at values c₁ ≠ c₂ of a C^σ function stay at least
/// (|c₁−c₂|/[θ]_{C^σ})^{1/σ} apart.
pub fn holder_distance_bound(c1: f64, c2: f64, seminorm: f64, sigma: f64) -> Result<f64> {
    if !(seminorm > 0.0) {
        return Err(Error::Domain(format!(
            "holder_distance_bound: seminorm = {seminorm} must be > 0"
        )));
    }
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::Domain(format!(
            "holder_distance_bound: σ = {sigma} outside (0, 1]"
        )));
    }
    if c1 == c2 {
        return Err(Error::Domain(
            "holder_distance_bound: level values must be distinct".into(),
        ));
    }
    Ok(((c1 - c2).abs() / seminorm).powf(1.0 / sigma))
}

/// Opening angle of the saddle zero set ρ = (αx₁+x₂)(δx₁−x₂) = 0 at the
/// origin: the wedge between the lines x₂ = −αx₁ and x₂ = δx₁.
///
/// Returns (exact, small-slope approximation α+δ). The exact value is
/// the branch-corrected arctan((α+δ)/(1−αδ)), i.e. arctan α + arctan δ,
/// which the tangent addition form degenerates to at αδ = 1
/// (perpendicular branches) — that input is rejected.
pub fn saddle_angle(alpha: f64, delta: f64) -> Result<(f64, f64)> {
    if !(alpha.is_finite() && delta.is_finite()) {
        return Err(Error::Domain(format!(
            "saddle_angle: slopes must be finite, got ({alpha}, {delta})"
        )));
    }
    if (alpha * delta - 1.0).abs() < 1e-12 {
        return Err(Error::Domain(
            "saddle_angle: αδ = 1 degenerate (perpendicular branches)".into(),
        ));
    }
    Ok((alpha.atan() + delta.atan(), alpha + delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rng::SplitMix64;

    fn qc() -> QuadControl {
        QuadControl { abs_tol: 1e-10, ..QuadControl::default() }
    }

    #[test]
    fn rate_functions_pinned() {
        // Pure power branch: −1·0.04^{1/2}.
        assert_eq!(lower_envelope_rhs(0.04, 1.0, 0.0, 1.5), -0.2);
        // Log-weighted branch: −1·0.01^{1/2}·|ln 0.01|.
        let v = upper_envelope_rhs(0.01, 1.0, 1.5).unwrap();
        assert!((v - (-0.460_517_018_598_809_18)).abs() < 1e-15);
        assert!(upper_envelope_rhs(0.6, 1.0, 1.5).is_err());
        assert!(upper_envelope_rhs(-0.1, 1.0, 1.5).is_err());
        // β = 1 is inside the contract (log-only decay).
        assert!(upper_envelope_rhs(0.3, 1.0, 1.0).is_ok());
    }

    #[test]
    fn exact_power_vanish_time_pinned() {
        let t = power_ode_exact_vanish_time(1.9, 0.01, 1.0).unwrap();
        assert!((t - 0.017_609_924_360_679_039).abs() < 1e-16);
        // Linear in 1/c.
        let t2 = power_ode_exact_vanish_time(1.9, 0.01, 2.0).unwrap();
        assert!((2.0 * t2 - t).abs() < 1e-16);
    }

    #[test]
    fn integrator_is_high_order_on_smooth_decay() {
        // dγ/dt = −γ against the exponential.
        let traj = integrate_angle(|g| Ok(-g), 0.4, 1.0, &StepControl::default(), 1e-12).unwrap();
        assert!(traj.vanish_time.is_none());
        let last = traj.samples.last().unwrap();
        assert!((last.t - 1.0).abs() < 1e-12);
        let want = 0.4 * (-last.t).exp();
        assert!(
            (last.gamma - want).abs() < 1e-9 * want,
            "γ(1) = {} vs {want}",
            last.gamma
        );
    }

    #[test]
    fn trajectory_invariants() {
        let traj = integrate_angle(
            |g| upper_envelope_rhs(g, 1.0, 1.5),
            0.45,
            50.0,
            &StepControl::default(),
            1e-12,
        )
        .unwrap();
        for w in traj.samples.windows(2) {
            assert!(w[1].t > w[0].t, "time not increasing");
            assert!(w[1].gamma <= w[0].gamma, "γ not monotone");
        }
        // β = 1.5 with c = 1 vanishes well before t = 50.
        let tv = traj.vanish_time.expect("should vanish");
        assert!(tv < 50.0);
        assert_eq!(traj.samples.last().unwrap().gamma, 1e-12);
    }

    #[test]
    fn random_power_decays_match_exact_times() {
        // Mirrors the acceptance sweep with a different seed: the
        // envelope integrator against the closed-form vanish time, with
        // the floor far below anything dynamically relevant.
        let mut rng = SplitMix64::new(0x0a11_5eed_0001);
        for k in 0..20 {
            let beta = rng.range(1.15, 1.9);
            let gamma0 = rng.range(0.05, 0.45);
            let c = rng.range(0.5, 2.0);
            let exact = power_ode_exact_vanish_time(beta, gamma0, c).unwrap();
            let traj = integrate_angle(
                |g| Ok(-c * g.powf(2.0 - beta)),
                gamma0,
                2.0 * exact,
                &StepControl::default(),
                1e-60,
            )
            .unwrap();
            let got = traj.vanish_time.expect("finite-time vanish");
            assert!(
                (got - exact).abs() <= 1e-6 * exact,
                "instance {k} (β={beta}, γ₀={gamma0}, c={c}): {got} vs {exact}"
            );
        }
    }

    #[test]
    fn hard_vanish_sets_underflow_flag() {
        // With the floor at 1e−60, the final 30 decades of decay happen
        // below time resolution: the march stalls and says so, and the
        // stall point still pins the true vanish time.
        let exact = power_ode_exact_vanish_time(1.5, 0.3, 1.0).unwrap();
        let traj = integrate_angle(
            |g| Ok(-g.powf(0.5)),
            0.3,
            2.0 * exact,
            &StepControl::default(),
            1e-60,
        )
        .unwrap();
        assert!(traj.step_underflow);
        let tv = traj.vanish_time.unwrap();
        assert!((tv - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn soft_floor_is_crossed_without_underflow() {
        // A 1e−12 floor is far above time resolution: clean bisected
        // crossing, no stall.
        let traj = integrate_angle(
            |g| upper_envelope_rhs(g, 0.003, 1.5),
            0.45,
            1e4,
            &StepControl::default(),
            1e-12,
        )
        .unwrap();
        assert!(!traj.step_underflow);
        assert!(traj.vanish_time.is_some());
    }

    #[test]
    fn refinement_stability_of_vanish_time() {
        let exact = power_ode_exact_vanish_time(1.5, 0.3, 1.0).unwrap();
        let run = |tol: f64| {
            integrate_angle(
                |g| Ok(-g.powf(0.5)),
                0.3,
                2.0 * exact,
                &StepControl { rel_tol: tol, ..StepControl::default() },
                1e-30,
            )
            .unwrap()
            .vanish_time
            .unwrap()
        };
        let coarse = run(1e-8);
        let fine = run(1e-9);
        assert!(
            (coarse - fine).abs() < 1e-8 * exact,
            "vanish time moved {} under refinement",
            (coarse - fine).abs()
        );
    }

    #[test]
    fn growing_initial_data_is_rejected() {
        // Above the balance point γ* = (c̃/c₃)^{1/(β−1)} the linear term
        // wins and the rate is positive.
        let r = integrate_angle(
            |g| Ok(lower_envelope_rhs(g, 1.0, 4.0, 1.5)),
            0.3, // γ* = 1/16, and 0.3 > γ*
            1.0,
            &StepControl::default(),
            1e-12,
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn lower_envelope_matches_closed_form_with_linear_term() {
        // At β = 3/2 the substitution v = √γ turns the rate into a
        // linear ODE with exact vanish time
        // t = (2/c₃)·ln[(c̃/c₃ − √floor)/(c̃/c₃ − √γ₀)].
        let (c_t, c3, g0, floor) = (1.0_f64, 0.5_f64, 0.2_f64, 1e-12_f64);
        let ratio = c_t / c3;
        let exact =
            (2.0 / c3) * ((ratio - floor.sqrt()) / (ratio - g0.sqrt())).ln();
        let traj = integrate_angle(
            |g| Ok(lower_envelope_rhs(g, c_t, c3, 1.5)),
            g0,
            2.0 * exact,
            &StepControl::default(),
            floor,
        )
        .unwrap();
        let got = traj.vanish_time.expect("vanish");
        assert!(
            (got - exact).abs() < 1e-7 * exact,
            "vanish {got} vs closed form {exact}"
        );
    }

    #[test]
    fn log_decay_never_vanishes_at_beta_one() {
        // β = 1: γ(t) = exp(ln γ₀ · e^{ct}) — checked at three horizons.
        let (c, g0) = (0.003, 0.45);
        for &t_max in &[10.0, 100.0, 1000.0] {
            let traj = integrate_angle(
                |g| upper_envelope_rhs(g, c, 1.0),
                g0,
                t_max,
                &StepControl::default(),
                1e-12,
            )
            .unwrap();
            assert!(traj.vanish_time.is_none(), "vanished by t = {t_max}");
            let last = traj.samples.last().unwrap();
            let want = (g0.ln() * (c * last.t).exp()).exp();
            assert!(
                (last.gamma - want).abs() < 1e-6 * want,
                "γ({t_max}) = {} vs {want}",
                last.gamma
            );
        }
    }

    #[test]
    fn blowup_time_frozen_and_routes_agree() {
        // Frozen: (β=1.5, γ₀=0.01, C=1) → ∫ collapses to the
        // exponential-integral value 0.0323897895932910…
        let t = blowup_time_lower_bound(1.5, 0.01, 1.0, &qc()).unwrap();
        assert!(
            (t - 0.032_389_789_593_291_022).abs() < 1e-9,
            "blow-up bound = {t}"
        );
        for &beta in &[1.1, 1.5, 1.9] {
            for &g0 in &[0.01, 0.45] {
                let a = blowup_time_lower_bound(beta, g0, 1.0, &qc()).unwrap();
                let b = blowup_time_lower_bound_alt(beta, g0, 1.0, &qc()).unwrap();
                assert!(
                    (a - b).abs() < 1e-9 * (1.0 + a.abs()),
                    "(β={beta}, γ₀={g0}): routes {a} vs {b}"
                );
            }
        }
        // The bound diverges as β → 1⁺ (the log era stretches out).
        let slow = blowup_time_lower_bound(1.05, 0.01, 1.0, &qc()).unwrap();
        assert!(slow > 10.0 * t, "β→1 divergence missing: {slow} vs {t}");
    }

    #[test]
    fn envelope_vanish_equals_time_integral_with_floor_correction() {
        // The upper envelope saturates its own bound exactly:
        // vanish(γ₀→floor) = T(γ₀) − T(floor). The floor tail is a ~1%
        // effect at β = 1.1, so the identity must be tested with the
        // correction, not without it.
        let c = 0.003;
        let floor = 1e-12;
        for &beta in &[1.1, 1.5, 1.9] {
            let traj = integrate_angle(
                |g| upper_envelope_rhs(g, c, beta),
                0.45,
                1e4,
                &StepControl::default(),
                floor,
            )
            .unwrap();
            let vanish = traj.vanish_time.expect("vanish");
            let t_full = blowup_time_lower_bound(beta, 0.45, c, &qc()).unwrap();
            let t_tail = blowup_time_lower_bound(beta, floor, c, &qc()).unwrap();
            assert!(
                (vanish + t_tail - t_full).abs() < 1e-6 * t_full,
                "β={beta}: vanish {vanish} + tail {t_tail} vs {t_full}"
            );
            // The envelope can't beat the bound (up to integration error:
            // at β = 1.9 the floor tail is ~5e−10 of t_full, smaller than
            // the time accumulated by the stepper).
            assert!(vanish <= t_full * (1.0 + 1e-6));
        }
        // Frozen anchors for the two ends of the β grid.
        let t11 = blowup_time_lower_bound(1.1, 0.45, c, &qc()).unwrap();
        assert!((t11 - 676.221_567_270_900_04).abs() < 1e-6 * t11);
        let t19 = blowup_time_lower_bound(1.9, 0.45, c, &qc()).unwrap();
        assert!((t19 - 120.275_783_463_415_9).abs() < 1e-6 * t19);
    }

    #[test]
    fn holder_distance_pinned() {
        let d = holder_distance_bound(0.5, 1.0, 2.0, 0.5).unwrap();
        assert_eq!(d, 0.0625); // (0.5/2)² exactly
        let d1 = holder_distance_bound(0.3, 0.7, 2.0, 1.0).unwrap();
        assert!((d1 - 0.2).abs() < 1e-16);
        assert!(holder_distance_bound(0.5, 0.5, 2.0, 0.5).is_err());
        assert!(holder_distance_bound(0.5, 1.0, 0.0, 0.5).is_err());
        assert!(holder_distance_bound(0.5, 1.0, 2.0, 1.5).is_err());
    }

    #[test]
    fn saddle_angle_pinned_and_symmetric() {
        let (exact, approx) = saddle_angle(0.1, 0.1).unwrap();
        assert!((exact - 0.199_337_304_982_324_05).abs() < 1e-15);
        assert!((approx - 0.2).abs() < 1e-16);
        let (e2, _) = saddle_angle(0.05, 0.05).unwrap();
        assert!((e2 - 0.099_916_791_443_885_523).abs() < 1e-15);
        // Small-slope error is cubic.
        for &(a, d) in &[(0.05, 0.05), (0.1, 0.1), (0.2, 0.1)] {
            let (exact, approx) = saddle_angle(a, d).unwrap();
            assert!((exact - approx).abs() <= (a + d).powi(3));
        }
        // Symmetric in the two slopes; degenerate axes give zero.
        let (x, _) = saddle_angle(0.3, 0.07).unwrap();
        let (y, _) = saddle_angle(0.07, 0.3).unwrap();
        assert_eq!(x, y);
        assert_eq!(saddle_angle(0.0, 0.0).unwrap(), (0.0, 0.0));
        assert!(saddle_angle(2.0, 0.5).is_err()); // αδ = 1
        assert!(saddle_angle(f64::NAN, 0.5).is_err());
    }
}
