//! `gsqg` — command-line driver for the toolkit: identity verification
//! suites, explicit bound evaluation, opening-angle envelope ODEs,
//! collapse-time quadrature, the singular-kernel 2-D quadrature oracle,
//! and the periodic transport simulator.
//!
//! Exit codes: 0 success, 1 internal assertion/check failure,
//! 2 usage or configuration error. CSV goes to standard output unless
//! `--out` names a file (simulate writes into a directory); summaries
//! go to standard error.

mod plot;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsqg::bounds::{self, BoundContext, Norms};
use gsqg::kernel::{self, KernelSpec};
use gsqg::sim::{self, DiagRecord, SimConfig};
use gsqg::util::quad::QuadControl;
use gsqg::util::series::SeriesControl;
use gsqg::{angle, specfun, Error, Result};

#[derive(Parser)]
#[command(
    name = "gsqg",
    version,
    about = "Singular-kernel transport toolkit: constants, envelopes, oracles, simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cross-check the closed-form identities against slow oracles.
    Verify(VerifyArgs),
    /// Evaluate the explicit constants and stream-difference bounds.
    Bounds(BoundsArgs),
    /// Integrate an opening-angle envelope ODE and emit the trajectory.
    Angle(AngleArgs),
    /// Collapse-time lower bound via exponential-integral quadrature.
    BlowupTime(BlowupArgs),
    /// Adaptive 2-D quadrature of the kernel over one annulus.
    Oracle(OracleArgs),
    /// Run the periodic transport solver and emit diagnostics.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict every identity family to this β (default: built-in grids).
    #[arg(long)]
    beta: Option<f64>,
    /// Restrict the geometric parameter (circle radius r or annulus outer
    /// radius L; series identities have none and are dropped).
    #[arg(long = "L")]
    l: Option<f64>,
    /// Multiply each closed form by 1.001 so drift detection can be observed.
    #[arg(long)]
    perturb: bool,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    beta: f64,
    /// Hölder exponent σ ∈ (0, β−1).
    #[arg(long)]
    sigma: f64,
    /// Far-field remainder constant K.
    #[arg(long = "K")]
    k: f64,
    /// sup over time of ‖θ‖_{C^σ}.
    #[arg(long = "Nsigma", default_value_t = 1.0)]
    nsigma: f64,
    /// inf over time of |θ(0, t)|.
    #[arg(long = "theta0", default_value_t = 1.0)]
    theta0: f64,
    /// Annulus cut radius (default: 2, or twice the admissibility threshold).
    #[arg(long = "L")]
    l: Option<f64>,
    /// Evaluation separation τ (default: the extremal 2r).
    #[arg(long)]
    tau: Option<f64>,
    /// Kernel normalization C_β (default: the Riesz value for this β).
    #[arg(long)]
    c_beta: Option<f64>,
    /// ‖θ‖_∞ for the upper bound (default: theta0).
    #[arg(long)]
    sup: Option<f64>,
    /// ‖θ‖_{L²} for the upper bound (default: theta0).
    #[arg(long)]
    l2: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Envelope {
    Lower,
    Upper,
}

#[derive(Args)]
struct AngleArgs {
    /// Which envelope rate to integrate.
    #[arg(long, value_enum)]
    envelope: Envelope,
    #[arg(long)]
    beta: f64,
    /// Initial opening angle γ₀.
    #[arg(long)]
    gamma0: f64,
    /// Rate constant C̃₂ of the upper envelope −C̃₂ γ^{2−β} |ln γ|.
    #[arg(long = "C2")]
    c2: Option<f64>,
    /// Power coefficient C̃ of the lower envelope −C̃ γ^{2−β} + C₃ γ.
    #[arg(long = "Ctilde")]
    c_tilde: Option<f64>,
    /// Linear coefficient C₃ of the lower envelope (default 0).
    #[arg(long = "C3")]
    c3: Option<f64>,
    /// Integration horizon.
    #[arg(long, default_value_t = 10.0)]
    t_max: f64,
    /// Stop when γ falls to this floor.
    #[arg(long, default_value_t = 1e-12)]
    gamma_floor: f64,
    /// Per-step relative tolerance of the embedded 5(4) pair.
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BlowupArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    gamma0: f64,
    /// Rate constant C of dγ/dt = −C γ^{2−β} |ln γ|.
    #[arg(long = "C")]
    c: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    beta: f64,
    /// Offset direction (must be unit length together with --v2).
    #[arg(long, default_value_t = 1.0)]
    v1: f64,
    #[arg(long, default_value_t = 0.0)]
    v2: f64,
    #[arg(long)]
    r_in: f64,
    #[arg(long)]
    r_out: f64,
    /// Absolute tolerance handed to the adaptive quadrature.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Run configuration file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for diagnostics.csv (and plots/snapshot).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Echo the effective configuration (file + overrides) and exit.
    #[arg(long)]
    dump_config: bool,
    /// Also render line plots of the tracked quantities.
    #[arg(long)]
    plot: bool,
    /// Also write the final field as a flat binary snapshot.
    #[arg(long)]
    snapshot: bool,
    // Per-key overrides; a flag set here wins over the file.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    dealias: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    diag_every: Option<usize>,
    #[arg(long)]
    box_length: Option<f64>,
    #[arg(long)]
    cfl_max: Option<f64>,
    #[arg(long)]
    angle_epsilon: Option<f64>,
    /// Tracked contour levels as `a,b`.
    #[arg(long)]
    levels: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Angle(a) => cmd_angle(a),
        Command::BlowupTime(a) => cmd_blowup(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Simulate(a) => cmd_simulate(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("gsqg: {e}");
            ExitCode::from(code_for(&e))
        }
    }
}

/// Domain/config/IO problems are usage errors (2); everything else is a
/// failed internal check (1).
fn code_for(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Config(_) | Error::Io(_) => 2,
        _ => 1,
    }
}

fn emit(out: Option<&PathBuf>, csv: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, csv).map_err(Error::from),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

struct VerifyRow {
    identity: &'static str,
    beta: f64,
    l: Option<f64>,
    closed: f64,
    oracle: f64,
    tol: f64,
    /// Oracle could not reach its own tolerance: fail regardless of diff.
    forced_fail: bool,
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let sctrl = SeriesControl::default();
    let qctrl = QuadControl::default();
    let series_grid: Vec<f64> = match a.beta {
        Some(b) => vec![b],
        None => (11..=19).map(|k| k as f64 / 10.0).collect(),
    };
    let geom_grid: Vec<f64> = match a.beta {
        Some(b) => vec![b],
        None => vec![1.2, 1.5, 1.8],
    };
    let not_one = |x: f64| (x - 1.0).abs() > 1e-9;
    let radii: Vec<f64> = match a.l {
        Some(l) if not_one(l) => vec![l],
        Some(_) => vec![],
        None => vec![0.5, 2.0],
    };
    let inner_on = a.l.is_none_or(|l| !not_one(l));
    let outer_ls: Vec<f64> = match a.l {
        Some(l) if l > 1.0 => vec![l],
        Some(_) => vec![],
        None => vec![2.0],
    };

    let quad_oracle = |res: Result<(f64, f64)>| -> Result<(f64, bool)> {
        match res {
            Ok((v, _)) => Ok((v, false)),
            Err(Error::Accuracy { value, .. }) => Ok((value, true)),
            Err(e) => Err(e),
        }
    };

    let mut rows: Vec<VerifyRow> = Vec::new();
    if a.l.is_none() {
        for &b in &series_grid {
            rows.push(VerifyRow {
                identity: "series_a",
                beta: b,
                l: None,
                closed: specfun::a_beta(b)?,
                oracle: specfun::series_a(b, &sctrl)?,
                tol: 1e-8,
                forced_fail: false,
            });
            rows.push(VerifyRow {
                identity: "series_soma",
                beta: b,
                l: None,
                closed: specfun::a_beta(b)? / (b - 2.0),
                oracle: specfun::series_soma(b, &sctrl)?,
                tol: 1e-6,
                forced_fail: false,
            });
        }
    }
    for &b in &geom_grid {
        for &r in &radii {
            let (oracle, forced_fail) = quad_oracle(kernel::angular_quadrature(r, b, &qctrl))?;
            rows.push(VerifyRow {
                identity: "angular",
                beta: b,
                l: Some(r),
                closed: kernel::angular_integral(r, b, &sctrl)?,
                oracle,
                tol: 1e-8,
                forced_fail,
            });
        }
        if inner_on {
            let spec = KernelSpec::new(b, [1.0, 0.0], 0.0, 1.0)?;
            let closed = kernel::annulus_inner(b)?;
            let (oracle, forced_fail) = quad_oracle(kernel::quad_kernel_annulus(&spec, &qctrl))?;
            rows.push(VerifyRow {
                identity: "annulus_inner",
                beta: b,
                l: Some(1.0),
                closed,
                oracle,
                tol: 1e-5 * (1.0 + closed.abs()),
                forced_fail,
            });
        }
        for &l in &outer_ls {
            let spec = KernelSpec::new(b, [1.0, 0.0], 1.0, l)?;
            let closed = kernel::annulus_outer(b, l, &sctrl)?;
            let (oracle, forced_fail) = quad_oracle(kernel::quad_kernel_annulus(&spec, &qctrl))?;
            rows.push(VerifyRow {
                identity: "annulus_outer",
                beta: b,
                l: Some(l),
                closed,
                oracle,
                tol: 1e-5 * (1.0 + closed.abs()),
                forced_fail,
            });
        }
    }

    let mut csv = String::from("identity,beta,L,closed_form,oracle,abs_diff,pass\n");
    let mut failed = 0usize;
    for r in &rows {
        let closed = if a.perturb { r.closed * 1.001 } else { r.closed };
        let diff = (closed - r.oracle).abs();
        let pass = !r.forced_fail && diff <= r.tol;
        if !pass {
            failed += 1;
        }
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            r.identity,
            r.beta,
            r.l.map(|v| v.to_string()).unwrap_or_default(),
            closed,
            r.oracle,
            diff,
            pass
        );
    }
    emit(a.out.as_ref(), &csv)?;
    if failed > 0 {
        eprintln!("verify: {failed} of {} identity checks failed", rows.len());
        Ok(1)
    } else {
        eprintln!("verify: all {} identity checks passed", rows.len());
        Ok(0)
    }
}

fn cmd_bounds(a: BoundsArgs) -> Result<u8> {
    let sctrl = SeriesControl::default();
    let c_beta = match a.c_beta {
        Some(c) => c,
        None => bounds::c_beta_norm_default(a.beta)?,
    };
    let threshold = bounds::admissible_l(a.beta, a.k)?;
    let l = a.l.unwrap_or(if threshold < 2.0 { 2.0 } else { 2.0 * threshold });
    let ctx = BoundContext::new(a.beta, a.sigma, a.k, l, a.nsigma, a.theta0, c_beta, &sctrl)?;
    let tau = a.tau.unwrap_or(2.0 * ctx.r);
    let norms = Norms {
        sup_norm: a.sup.unwrap_or(a.theta0),
        l2_norm: a.l2.unwrap_or(a.theta0),
    };
    let rep = bounds::stream_report(&ctx, tau, &norms)?;

    let mut csv = String::from(
        "beta,sigma,K_const,L_threshold,L,A_beta,C_betaL,D_betaL,r_admissible,tau,lower,upper,i2,i3,i4\n",
    );
    let _ = writeln!(
        csv,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        a.beta,
        a.sigma,
        a.k,
        threshold,
        l,
        specfun::a_beta(a.beta)?,
        bounds::c_beta_l(a.beta, l, &sctrl)?,
        bounds::d_beta_l(a.beta, l, &sctrl)?,
        ctx.r,
        rep.tau,
        rep.lower,
        rep.upper,
        rep.i2_bound,
        rep.i3_bound,
        rep.i4_bound
    );
    emit(a.out.as_ref(), &csv)?;
    Ok(0)
}

fn cmd_angle(a: AngleArgs) -> Result<u8> {
    let step = angle::StepControl { rel_tol: a.rel_tol, ..Default::default() };
    let traj = match a.envelope {
        Envelope::Upper => {
            let c2 = a.c2.ok_or_else(|| {
                Error::Config("angle: --C2 is required for the upper envelope".into())
            })?;
            let beta = a.beta;
            angle::integrate_angle(
                move |g| angle::upper_envelope_rhs(g, c2, beta),
                a.gamma0,
                a.t_max,
                &step,
                a.gamma_floor,
            )?
        }
        Envelope::Lower => {
            let c_tilde = a.c_tilde.ok_or_else(|| {
                Error::Config("angle: --Ctilde is required for the lower envelope".into())
            })?;
            if !(a.beta > 1.0 && a.beta < 2.0) {
                return Err(Error::Domain(format!(
                    "angle: β = {} outside (1,2) for the lower envelope",
                    a.beta
                )));
            }
            let (c3, beta) = (a.c3.unwrap_or(0.0), a.beta);
            angle::integrate_angle(
                move |g| Ok(angle::lower_envelope_rhs(g, c_tilde, c3, beta)),
                a.gamma0,
                a.t_max,
                &step,
                a.gamma_floor,
            )?
        }
    };

    let mut csv = String::from("t,gamma\n");
    for s in &traj.samples {
        let _ = writeln!(csv, "{},{}", s.t, s.gamma);
    }
    emit(a.out.as_ref(), &csv)?;
    match traj.vanish_time {
        Some(v) => eprintln!(
            "angle: γ reached the floor {} at t ≈ {v}{}",
            traj.gamma_floor,
            if traj.step_underflow { " (hard vanish below time resolution)" } else { "" }
        ),
        None => eprintln!("angle: no floor crossing by t = {}", a.t_max),
    }
    Ok(0)
}

fn cmd_blowup(a: BlowupArgs) -> Result<u8> {
    let qctrl = QuadControl::default();
    let t1 = angle::blowup_time_lower_bound(a.beta, a.gamma0, a.c, &qctrl)?;
    let t2 = angle::blowup_time_lower_bound_alt(a.beta, a.gamma0, a.c, &qctrl)?;
    let csv = format!(
        "beta,gamma0,C,T_star_lower\n{},{},{},{}\n",
        a.beta, a.gamma0, a.c, t1
    );
    emit(a.out.as_ref(), &csv)?;
    let gap = (t1 - t2).abs();
    if gap > 1e-6 * t1.abs().max(1e-300) {
        eprintln!("blowup-time: substitution routes disagree: {t1} vs {t2}");
        return Ok(1);
    }
    eprintln!("blowup-time: two substitution routes agree within {gap:.2e}");
    Ok(0)
}

fn cmd_oracle(a: OracleArgs) -> Result<u8> {
    let sctrl = SeriesControl::default();
    let spec = KernelSpec::new(a.beta, [a.v1, a.v2], a.r_in, a.r_out)?;
    let ctrl = QuadControl { abs_tol: a.tol, ..Default::default() };
    let (value, err_est, exhausted) = match kernel::quad_kernel_annulus(&spec, &ctrl) {
        Ok((v, e)) => (v, e, false),
        Err(Error::Accuracy { value, err_est, .. }) => (value, err_est, true),
        Err(e) => return Err(e),
    };
    let closed = closed_annulus(a.beta, a.r_in, a.r_out, &sctrl)?;
    let (cf, diff) = match closed {
        Some(c) => (c.to_string(), (c - value).abs().to_string()),
        None => (String::new(), String::new()),
    };
    let csv = format!(
        "beta,v1,v2,r_in,r_out,quadrature,err_est,closed_form,abs_diff\n{},{},{},{},{},{},{},{cf},{diff}\n",
        a.beta, a.v1, a.v2, a.r_in, a.r_out, value, err_est
    );
    emit(a.out.as_ref(), &csv)?;
    if exhausted {
        eprintln!(
            "oracle: subdivision budget exhausted; err_est {err_est:.2e} vs requested {:.2e}",
            a.tol
        );
        return Ok(1);
    }
    eprintln!("oracle: quadrature done, err_est {err_est:.2e}");
    Ok(0)
}

/// Closed form for the annulus integral when the radii line up with the
/// split at the unit circle; None otherwise.
fn closed_annulus(
    beta: f64,
    r_in: f64,
    r_out: f64,
    ctrl: &SeriesControl,
) -> Result<Option<f64>> {
    if r_in == 0.0 && r_out == 1.0 {
        return kernel::annulus_inner(beta).map(Some);
    }
    if r_in >= 1.0 {
        let outer = kernel::annulus_outer(beta, r_out, ctrl)?
            - kernel::annulus_outer(beta, r_in, ctrl)?;
        return Ok(Some(outer));
    }
    if r_in == 0.0 && r_out > 1.0 {
        return Ok(Some(
            kernel::annulus_inner(beta)? + kernel::annulus_outer(beta, r_out, ctrl)?,
        ));
    }
    Ok(None)
}

fn apply_overrides(cfg: &mut SimConfig, a: &SimulateArgs) -> Result<()> {
    if let Some(v) = a.beta {
        cfg.beta = v;
    }
    if let Some(v) = a.n {
        cfg.n = v;
    }
    if let Some(v) = a.dt {
        cfg.dt = v;
    }
    if let Some(v) = a.t_end {
        cfg.t_end = v;
    }
    if let Some(v) = a.dealias {
        cfg.dealias = v;
    }
    if let Some(v) = a.sigma {
        cfg.sigma = v;
    }
    if let Some(v) = a.diag_every {
        cfg.diag_every = v;
    }
    if let Some(v) = a.box_length {
        cfg.box_length = v;
    }
    if let Some(v) = a.cfl_max {
        cfg.cfl_max = v;
    }
    if let Some(v) = a.angle_epsilon {
        cfg.angle_epsilon = v;
    }
    if let Some(s) = &a.levels {
        let (p, q) = s
            .split_once(',')
            .ok_or_else(|| Error::Config(format!("--levels needs `a,b`, got `{s}`")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("--levels: bad number `{}`", t.trim())))
        };
        cfg.level_values = (parse(p)?, parse(q)?);
    }
    Ok(())
}

fn write_plots(dir: &Path, records: &[DiagRecord]) -> Result<()> {
    let series = |f: &dyn Fn(&DiagRecord) -> Option<f64>| -> Vec<(f64, f64)> {
        records.iter().filter_map(|r| f(r).map(|v| (r.time, v))).collect()
    };
    let jobs: [(&str, Vec<(f64, f64)>); 4] = [
        ("opening_angle.png", series(&|r| r.opening_angle)),
        ("holder_seminorm.png", series(&|r| Some(r.holder_seminorm))),
        ("level_distance.png", series(&|r| r.level_distance)),
        ("sup_grad.png", series(&|r| Some(r.sup_grad))),
    ];
    for (name, pts) in jobs {
        if pts.len() >= 2 {
            plot::line_plot(&dir.join(name), &pts).map_err(Error::Io)?;
        }
    }
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> Result<u8> {
    let text = fs::read_to_string(&a.config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", a.config.display())))?;
    let mut cfg = sim::parse_config(&text)?;
    apply_overrides(&mut cfg, &a)?;
    cfg.validate()?;

    if a.dump_config {
        print!("{}", sim::dump_config(&cfg));
        return Ok(0);
    }
    let out = a.out.as_ref().ok_or_else(|| {
        Error::Config("simulate: --out DIR is required (or use --dump-config)".into())
    })?;
    fs::create_dir_all(out)?;

    let mut records: Vec<DiagRecord> = Vec::new();
    let field = sim::run(&cfg, |r| records.push(r.clone()))?;

    let mut csv = String::from(DiagRecord::csv_header());
    csv.push('\n');
    for r in &records {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    fs::write(out.join("diagnostics.csv"), &csv)?;
    if a.snapshot {
        sim::snapshot::write_snapshot(&field, out.join("final.bin"))?;
    }
    if a.plot {
        write_plots(out, &records)?;
    }
    eprintln!(
        "simulate: {} records → {}, final time {}",
        records.len(),
        out.join("diagnostics.csv").display(),
        field.time
    );
    Ok(0)
}
