//! Adaptive Gauss–Kronrod quadrature (G7/K15 pair).
//!
//! The 15-point Kronrod rule embeds the 7-point Gauss rule, so one panel
//! evaluation yields both a value (K15) and an error proxy (|K15 − G7|).
//! Refinement is worst-panel-first through a max-heap, which concentrates
//! subdivisions at endpoint singularities without any problem-specific
//! tuning. Accumulation is compensated and the panel order is
//! deterministic, so results are bit-stable for a fixed control.

use crate::error::{Error, Result};
use crate::util::sum::Kahan;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Tolerance/effort policy for the quadrature oracles.
#[derive(Debug, Clone, Copy)]
pub struct QuadControl {
    /// Absolute tolerance on the integral value.
    pub abs_tol: f64,
    /// Panel-split budget before giving up.
    pub max_subdivisions: u32,
    /// Width scale of the region around an integrand singularity that gets
    /// pre-split into geometrically growing panels (used by the kernel
    /// oracles when they lay out angular panels near the kernel's
    /// second singularity).
    pub singularity_ring_width: f64,
}

impl Default for QuadControl {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            max_subdivisions: 4000,
            singularity_ring_width: 1e-3,
        }
    }
}

// Kronrod-15 abscissae on [0,1] side of [-1,1] (symmetric rule).
// Odd indices are the embedded Gauss-7 points.
const XK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss-7 weights matching XK[1], XK[3], XK[5], XK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One panel's K15 value and |K15 − G7| error proxy.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let hl = 0.5 * (b - a);
    let mid = 0.5 * (a + b);

    let fc = f(mid);
    let mut k = WK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = hl * XK[i];
        let fsum = f(mid - dx) + f(mid + dx);
        k += WK[i] * fsum;
        if i % 2 == 1 {
            g += WG[i / 2] * fsum;
        }
    }
    (k * hl, (k - g).abs() * hl.abs())
}

struct Panel {
    err: f64,
    val: f64,
    a: f64,
    b: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on the error proxy; NaN sorts first so it gets split
        // (or detected) immediately rather than poisoning the total quietly.
        match (self.err.is_nan(), other.err.is_nan()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => self
                .err
                .partial_cmp(&other.err)
                .unwrap_or(Ordering::Equal),
        }
    }
}

/// Adaptively integrate `f` over the segments `[pts[0],pts[1]], [pts[1],pts[2]], …`.
///
/// Returns `(value, err_est)` with `err_est <= abs_tol` on success; the
/// segment list lets callers pre-split at known breakpoints (singular
/// radii, panel rings) so the heap never has to discover them.
pub fn integrate_segments<F: FnMut(f64) -> f64>(
    mut f: F,
    pts: &[f64],
    abs_tol: f64,
    max_subdivisions: u32,
) -> Result<(f64, f64)> {
    assert!(pts.len() >= 2, "need at least one segment");
    let mut heap = BinaryHeap::new();
    for w in pts.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (val, err) = gk15(&mut f, w[0], w[1]);
        heap.push(Panel {
            err,
            val,
            a: w[0],
            b: w[1],
        });
    }

    let mut splits = 0u32;
    loop {
        let total_err: f64 = heap.iter().map(|p| p.err).sum();
        if total_err <= abs_tol {
            break;
        }
        if splits >= max_subdivisions {
            let value = kahan_total(&heap);
            return Err(Error::Accuracy {
                value,
                err_est: total_err,
                requested: abs_tol,
            });
        }
        let worst = heap.pop().expect("heap cannot be empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel narrower than f64 spacing: its error proxy is noise.
            heap.push(Panel {
                err: 0.0,
                val: worst.val,
                a: worst.a,
                b: worst.b,
            });
            continue;
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        heap.push(Panel {
            err: e1,
            val: v1,
            a: worst.a,
            b: mid,
        });
        heap.push(Panel {
            err: e2,
            val: v2,
            a: mid,
            b: worst.b,
        });
        splits += 1;
    }

    let err_est: f64 = heap.iter().map(|p| p.err).sum();
    Ok((kahan_total(&heap), err_est))
}

fn kahan_total(heap: &BinaryHeap<Panel>) -> f64 {
    // Sort by interval so the reduction order is independent of heap
    // internals — determinism for fixed control.
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap_or(Ordering::Equal));
    let mut acc = Kahan::new();
    for p in panels {
        acc.add(p.val);
    }
    acc.value()
}

/// Single-interval convenience wrapper.
pub fn integrate<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_subdivisions: u32,
) -> Result<(f64, f64)> {
    integrate_segments(f, &[a, b], abs_tol, max_subdivisions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        // K15 and G7 weights each integrate the constant 1 exactly.
        let k: f64 = WK[7] + 2.0 * WK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_exactness() {
        // G7 is exact through degree 13; K15 through degree 22 (odd powers
        // vanish by symmetry). x^12 over [0,2] is a clean probe.
        let (v, e) = integrate(|x| x.powi(12), 0.0, 2.0, 1e-12, 100).unwrap();
        let exact = 2f64.powi(13) / 13.0;
        assert!((v - exact).abs() < 1e-10 * exact, "v={v} exact={exact}");
        assert!(e < 1e-12);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // ∫_0^1 x^{-1/2} dx = 2: adaptive splitting has to dig into x=0.
        let (v, _) = integrate(|x| x.sqrt().recip(), 1e-300, 1.0, 1e-9, 4000).unwrap();
        assert!((v - 2.0).abs() < 2e-5, "v={v}");
    }

    #[test]
    fn oscillatory_with_breakpoints() {
        let pts: Vec<f64> = (0..=8).map(|i| i as f64 * std::f64::consts::PI / 8.0).collect();
        let (v, _) = integrate_segments(|x| (10.0 * x).sin().powi(2), &pts, 1e-12, 4000).unwrap();
        // ∫_0^π sin²(10x) dx = π/2.
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn budget_exhaustion_reports_accuracy_error() {
        let res = integrate(|x: f64| x.abs().powf(-0.9), 1e-3, 1.0, 1e-14, 3);
        match res {
            Err(Error::Accuracy { err_est, requested, .. }) => {
                assert!(err_est > requested);
            }
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }
}
