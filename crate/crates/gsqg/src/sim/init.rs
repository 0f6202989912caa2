//! Initial data: hyperbolic saddle g(ρ)·χ(|x|), elliptic Gaussian, and
//! the steady single mode. The saddle cutoff χ is an exact plateau —
//! identically 1 on the inner disk, identically 0 outside the outer
//! radius — so the near-origin geometry is untouched by periodization.

use super::{InitialData, ScalarField, SimConfig};
use crate::error::Result;

/// C^∞ ramp: 0 at t ≤ 0, 1 at t ≥ 1.
fn ramp(t: f64) -> f64 {
    let f = |t: f64| if t <= 0.0 { 0.0 } else { (-1.0 / t).exp() };
    let a = f(t);
    let b = f(1.0 - t);
    a / (a + b)
}

/// Radial plateau: 1 for s ≤ r_in, 0 for s ≥ r_out.
fn plateau(s: f64, r_in: f64, r_out: f64) -> f64 {
    if s <= r_in {
        1.0
    } else if s >= r_out {
        0.0
    } else {
        ramp((r_out - s) / (r_out - r_in))
    }
}

pub fn make_initial_field(cfg: &SimConfig) -> Result<ScalarField> {
    cfg.validate()?;
    let n = cfg.n;
    let l = cfg.box_length;
    let h = l / n as f64;
    let coord = |i: usize| -0.5 * l + i as f64 * h;
    let mut values = vec![0.0; n * n];
    match cfg.initial_data {
        InitialData::Saddle {
            alpha0,
            delta0,
            amp,
            rho_scale,
            cutoff_radius,
            offset,
        } => {
            let r_in = 0.6 * cutoff_radius;
            for ix in 0..n {
                let x = coord(ix);
                for iy in 0..n {
                    let y = coord(iy);
                    let rho = (alpha0 * x + y) * (delta0 * x - y);
                    let g = offset + amp * (rho / rho_scale).tanh();
                    values[ix * n + iy] =
                        g * plateau(x.hypot(y), r_in, cutoff_radius);
                }
            }
        }
        InitialData::Elliptic { a0, b0, amp, scale } => {
            let s2 = 2.0 * scale * scale;
            for ix in 0..n {
                let x = coord(ix);
                for iy in 0..n {
                    let y = coord(iy);
                    values[ix * n + iy] = amp * (-(a0 * x * x + b0 * y * y) / s2).exp();
                }
            }
        }
        InitialData::SingleMode { k } => {
            let w = k as f64 * 2.0 * std::f64::consts::PI / l;
            for ix in 0..n {
                let c = (w * coord(ix)).cos();
                for iy in 0..n {
                    values[ix * n + iy] = c;
                }
            }
        }
    }
    ScalarField::new(n, l, values, 0.0)
}
