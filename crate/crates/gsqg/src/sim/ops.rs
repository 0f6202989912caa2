//! Spectral operators: Riesz stream function, perpendicular-gradient
//! velocity, spectral derivatives, and the dealiased RK4 transport step.

use super::fft::{Cplx, Fft2};
use super::{ScalarField, SimConfig};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Signed integer wavenumber of DFT bin i (Nyquist kept positive).
#[inline]
fn k_int(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Derivative multiplier coefficient: physical wavenumber, with the
/// Nyquist bin zeroed (it has no well-defined sign for odd derivatives).
#[inline]
fn deriv_coeff(i: usize, n: usize, k_scale: f64) -> f64 {
    if 2 * i == n {
        0.0
    } else {
        k_int(i, n) as f64 * k_scale
    }
}

#[inline]
fn mul_i(z: Cplx, c: f64) -> Cplx {
    // z · (i·c)
    Cplx::new(-z.im * c, z.re * c)
}

fn grid_from(spec: &[Cplx], fft: &mut Fft2, field: &ScalarField) -> ScalarField {
    let mut buf = spec.to_vec();
    fft.inverse(&mut buf);
    ScalarField {
        n: field.n,
        box_length: field.box_length,
        values: buf.iter().map(|z| z.re).collect(),
        time: field.time,
    }
}

/// Fractional stream function ψ with ψ̂(k) = |k|^{β−2}·θ̂(k), ψ̂(0) = 0.
/// The zero mode carries θ's mean, on which the inverse power is
/// undefined; it is projected out, which also leaves u unaffected.
pub fn riesz_stream(field: &ScalarField, beta: f64) -> ScalarField {
    let n = field.n;
    let ks = 2.0 * PI / field.box_length;
    let mut fft = Fft2::new(n);
    let mut spec: Vec<Cplx> = field.values.iter().map(|&v| Cplx::new(v, 0.0)).collect();
    fft.forward(&mut spec);
    for kx in 0..n {
        for ky in 0..n {
            let k = ((k_int(kx, n) as f64 * ks).powi(2)
                + (k_int(ky, n) as f64 * ks).powi(2))
            .sqrt();
            let m = if k == 0.0 { 0.0 } else { k.powf(beta - 2.0) };
            spec[kx * n + ky] *= m;
        }
    }
    grid_from(&spec, &mut fft, field)
}

/// u = (∂₂ψ, −∂₁ψ) by spectral differentiation of the Riesz stream;
/// divergence-free by construction (the two mixed derivatives cancel
/// multiplier-by-multiplier).
pub fn velocity(field: &ScalarField, beta: f64) -> (ScalarField, ScalarField) {
    let n = field.n;
    let ks = 2.0 * PI / field.box_length;
    let mut fft = Fft2::new(n);
    let mut spec: Vec<Cplx> = field.values.iter().map(|&v| Cplx::new(v, 0.0)).collect();
    fft.forward(&mut spec);
    let mut u1 = vec![Cplx::new(0.0, 0.0); n * n];
    let mut u2 = vec![Cplx::new(0.0, 0.0); n * n];
    for kx in 0..n {
        let c1 = deriv_coeff(kx, n, ks);
        for ky in 0..n {
            let c2 = deriv_coeff(ky, n, ks);
            let k = ((k_int(kx, n) as f64 * ks).powi(2)
                + (k_int(ky, n) as f64 * ks).powi(2))
            .sqrt();
            let m = if k == 0.0 { 0.0 } else { k.powf(beta - 2.0) };
            let psi = spec[kx * n + ky] * m;
            u1[kx * n + ky] = mul_i(psi, c2);
            u2[kx * n + ky] = mul_i(psi, -c1);
        }
    }
    (grid_from(&u1, &mut fft, field), grid_from(&u2, &mut fft, field))
}

/// Spectral gradient (∂₁θ, ∂₂θ).
pub(crate) fn spectral_gradient(field: &ScalarField) -> (ScalarField, ScalarField) {
    let n = field.n;
    let ks = 2.0 * PI / field.box_length;
    let mut fft = Fft2::new(n);
    let mut spec: Vec<Cplx> = field.values.iter().map(|&v| Cplx::new(v, 0.0)).collect();
    fft.forward(&mut spec);
    let mut gx = vec![Cplx::new(0.0, 0.0); n * n];
    let mut gy = vec![Cplx::new(0.0, 0.0); n * n];
    for kx in 0..n {
        let c1 = deriv_coeff(kx, n, ks);
        for ky in 0..n {
            let c2 = deriv_coeff(ky, n, ks);
            let z = spec[kx * n + ky];
            gx[kx * n + ky] = mul_i(z, c1);
            gy[kx * n + ky] = mul_i(z, c2);
        }
    }
    (grid_from(&gx, &mut fft, field), grid_from(&gy, &mut fft, field))
}

/// Precomputed multiplier grids for the RK4 transport step.
pub(crate) struct Stepper {
    pub(crate) fft: Fft2,
    n: usize,
    box_length: f64,
    cfl_max: f64,
    riesz: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
    mask: Vec<f64>,
}

impl Stepper {
    pub(crate) fn new(cfg: &SimConfig) -> Self {
        let n = cfg.n;
        let ks = 2.0 * PI / cfg.box_length;
        let limit = (cfg.dealias * n as f64 / 2.0).floor() as i64;
        let mut riesz = vec![0.0; n * n];
        let mut d1 = vec![0.0; n * n];
        let mut d2 = vec![0.0; n * n];
        let mut mask = vec![0.0; n * n];
        for kx in 0..n {
            for ky in 0..n {
                let idx = kx * n + ky;
                let (i1, i2) = (k_int(kx, n), k_int(ky, n));
                let k = ((i1 as f64 * ks).powi(2) + (i2 as f64 * ks).powi(2)).sqrt();
                riesz[idx] = if k == 0.0 { 0.0 } else { k.powf(cfg.beta - 2.0) };
                d1[idx] = deriv_coeff(kx, n, ks);
                d2[idx] = deriv_coeff(ky, n, ks);
                mask[idx] = if i1.abs() <= limit && i2.abs() <= limit { 1.0 } else { 0.0 };
            }
        }
        Self {
            fft: Fft2::new(n),
            n,
            box_length: cfg.box_length,
            cfl_max: cfg.cfl_max,
            riesz,
            d1,
            d2,
            mask,
        }
    }

    /// −dealias(u·∇θ) in spectral space, plus max|u| of this stage.
    fn tendency(&mut self, theta_hat: &[Cplx]) -> (Vec<Cplx>, f64) {
        let n = self.n;
        let len = n * n;
        let mut u1 = vec![Cplx::new(0.0, 0.0); len];
        let mut u2 = vec![Cplx::new(0.0, 0.0); len];
        let mut tx = vec![Cplx::new(0.0, 0.0); len];
        let mut ty = vec![Cplx::new(0.0, 0.0); len];
        for i in 0..len {
            let th = theta_hat[i] * self.mask[i];
            let psi = th * self.riesz[i];
            u1[i] = mul_i(psi, self.d2[i]);
            u2[i] = mul_i(psi, -self.d1[i]);
            tx[i] = mul_i(th, self.d1[i]);
            ty[i] = mul_i(th, self.d2[i]);
        }
        self.fft.inverse(&mut u1);
        self.fft.inverse(&mut u2);
        self.fft.inverse(&mut tx);
        self.fft.inverse(&mut ty);
        let mut umax = 0.0_f64;
        let mut prod = vec![Cplx::new(0.0, 0.0); len];
        for i in 0..len {
            let (a, b) = (u1[i].re, u2[i].re);
            umax = umax.max(a.hypot(b));
            prod[i] = Cplx::new(a * tx[i].re + b * ty[i].re, 0.0);
        }
        self.fft.forward(&mut prod);
        for (p, m) in prod.iter_mut().zip(&self.mask) {
            *p *= -m;
        }
        prod[0] = Cplx::new(0.0, 0.0); // exact mean conservation
        (prod, umax)
    }

    /// One RK4 step of size dt on the spectral state. The CFL number is
    /// evaluated on the first-stage velocity; violation rejects the step
    /// untouched and suggests a compliant dt.
    pub(crate) fn rk4(&mut self, theta_hat: &mut [Cplx], dt: f64) -> Result<()> {
        let len = theta_hat.len();
        let (k1, umax) = self.tendency(theta_hat);
        let cfl = dt * umax * self.n as f64 / self.box_length;
        if cfl > self.cfl_max {
            return Err(Error::Cfl {
                suggested_dt: 0.9 * self.cfl_max * self.box_length / (self.n as f64 * umax),
            });
        }
        let mut stage = vec![Cplx::new(0.0, 0.0); len];
        for i in 0..len {
            stage[i] = theta_hat[i] + k1[i] * (0.5 * dt);
        }
        let (k2, _) = self.tendency(&stage);
        for i in 0..len {
            stage[i] = theta_hat[i] + k2[i] * (0.5 * dt);
        }
        let (k3, _) = self.tendency(&stage);
        for i in 0..len {
            stage[i] = theta_hat[i] + k3[i] * dt;
        }
        let (k4, _) = self.tendency(&stage);
        let w = dt / 6.0;
        for i in 0..len {
            theta_hat[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w;
        }
        Ok(())
    }
}

pub(crate) fn to_spectral(field: &ScalarField, stepper: &mut Stepper) -> Vec<Cplx> {
    let mut spec: Vec<Cplx> = field.values.iter().map(|&v| Cplx::new(v, 0.0)).collect();
    stepper.fft.forward(&mut spec);
    spec
}

pub(crate) fn from_spectral(spec: &[Cplx], stepper: &mut Stepper, time: f64) -> ScalarField {
    let mut buf = spec.to_vec();
    stepper.fft.inverse(&mut buf);
    ScalarField {
        n: stepper.n,
        box_length: stepper.box_length,
        values: buf.iter().map(|z| z.re).collect(),
        time,
    }
}

/// Advance one grid-level step (validates nothing beyond CFL; callers
/// hold a validated config).
pub fn step(field: &ScalarField, cfg: &SimConfig) -> Result<ScalarField> {
    let mut stepper = Stepper::new(cfg);
    let mut spec = to_spectral(field, &mut stepper);
    stepper.rk4(&mut spec, cfg.dt)?;
    Ok(from_spectral(&spec, &mut stepper, field.time + cfg.dt))
}
