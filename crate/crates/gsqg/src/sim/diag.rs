//! Grid diagnostics: sup/L² norms, spectral gradient sup, a stratified
//! Hölder-seminorm estimator, marching-squares contours, the contour
//! opening angle at the origin, and the minimal distance between two
//! tracked level sets.

use super::ops::{spectral_gradient, velocity};
use super::{DiagRecord, ScalarField, SimConfig};

/// Opening-angle sampling annulus, as fractions of the box length.
/// The window must sit inside the initial-data plateau: outside it the
/// cutoff manufactures unrelated contours, inside r_min the contour
/// leaves the asymptotic regime (and the branch vertex pollutes the fit).
const ANGLE_R_MIN_FRAC: f64 = 0.024;
const ANGLE_R_MAX_FRAC: f64 = 0.19;

/// Line segments (x1,y1)–(x2,y2) of the level curve θ = c, by marching
/// squares over non-wrapping cells with linear edge interpolation.
/// Saddle cells (four edge crossings) are disambiguated by the cell
/// center average: each corner on the minority side takes the segment
/// joining its two adjacent edge crossings.
pub(crate) fn contour_segments(field: &ScalarField, c: f64) -> Vec<[f64; 4]> {
    let n = field.n;
    let h = field.spacing();
    let mut segs = Vec::new();
    let cross = |va: f64, vb: f64| (va >= c) != (vb >= c);
    let lerp = |va: f64, vb: f64| (c - va) / (vb - va);
    for ix in 0..n - 1 {
        let x = field.coord(ix);
        for iy in 0..n - 1 {
            let y = field.coord(iy);
            let v00 = field.at(ix, iy);
            let v10 = field.at(ix + 1, iy);
            let v01 = field.at(ix, iy + 1);
            let v11 = field.at(ix + 1, iy + 1);
            // Edge order: bottom, right, top, left.
            let mut pts: [Option<(f64, f64)>; 4] = [None; 4];
            if cross(v00, v10) {
                pts[0] = Some((x + h * lerp(v00, v10), y));
            }
            if cross(v10, v11) {
                pts[1] = Some((x + h, y + h * lerp(v10, v11)));
            }
            if cross(v01, v11) {
                pts[2] = Some((x + h * lerp(v01, v11), y + h));
            }
            if cross(v00, v01) {
                pts[3] = Some((x, y + h * lerp(v00, v01)));
            }
            let count = pts.iter().filter(|p| p.is_some()).count();
            if count == 2 {
                let found: Vec<(f64, f64)> = pts.iter().flatten().copied().collect();
                segs.push([found[0].0, found[0].1, found[1].0, found[1].1]);
            } else if count == 4 {
                let center = 0.25 * (v00 + v10 + v01 + v11) >= c;
                // corner side, adjacent edges
                let corners = [
                    (v00 >= c, 0usize, 3usize),
                    (v10 >= c, 0, 1),
                    (v11 >= c, 1, 2),
                    (v01 >= c, 2, 3),
                ];
                for &(side, ea, eb) in &corners {
                    if side != center {
                        let a = pts[ea].unwrap();
                        let b = pts[eb].unwrap();
                        segs.push([a.0, a.1, b.0, b.1]);
                    }
                }
            }
        }
    }
    segs
}

/// Endpoints plus midpoints of the contour segments.
fn contour_points(segs: &[[f64; 4]]) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(3 * segs.len());
    for s in segs {
        pts.push((s[0], s[1]));
        pts.push((s[2], s[3]));
        pts.push((0.5 * (s[0] + s[2]), 0.5 * (s[1] + s[3])));
    }
    pts
}

/// Grid estimate of sup |θ(x)−θ(y)|/|x−y|^σ: exhaustive over near
/// offsets (Chebyshev radius 4) and stratified over dyadic separations
/// up to the antipodal scale, in four directions, with periodic
/// wrap-around indexing. Always a lower bound on the continuum value.
pub(crate) fn holder_seminorm(field: &ScalarField, sigma: f64) -> f64 {
    let n = field.n;
    let h = field.spacing();
    let mut offsets: Vec<(i64, i64)> = Vec::new();
    for dy in 0..=4_i64 {
        for dx in -4..=4_i64 {
            if dy == 0 && dx <= 0 {
                continue; // half-plane: pairs are symmetric
            }
            offsets.push((dx, dy));
        }
    }
    let mut d = 8_i64;
    while d <= (n / 2) as i64 {
        offsets.push((d, 0));
        offsets.push((0, d));
        offsets.push((d, d));
        offsets.push((d, -d));
        d *= 2;
    }
    let mut best = 0.0_f64;
    for &(dx, dy) in &offsets {
        // |offset| ≤ n/2 per axis, so this is the true torus distance.
        let dist = h * ((dx * dx + dy * dy) as f64).sqrt();
        let w = dist.powf(-sigma);
        for ix in 0..n as i64 {
            let jx = (ix + dx).rem_euclid(n as i64) as usize;
            let row_a = ix as usize * n;
            let row_b = jx * n;
            for iy in 0..n as i64 {
                let jy = (iy + dy).rem_euclid(n as i64) as usize;
                let diff =
                    (field.values[row_a + iy as usize] - field.values[row_b + jy]).abs();
                if diff * w > best {
                    best = diff * w;
                }
            }
        }
    }
    best
}

/// Principal-axis angle (mod π) of a point set taken about the origin —
/// the asymptote lines pass through the origin, so the second-moment
/// form is computed there, not about the centroid.
fn axis_angle(pts: &[(f64, f64)]) -> f64 {
    let (mut xx, mut xy, mut yy) = (0.0, 0.0, 0.0);
    for &(x, y) in pts {
        xx += x * x;
        xy += x * y;
        yy += y * y;
    }
    0.5 * (2.0 * xy).atan2(xx - yy)
}

/// Opening angle of the near-origin contour at the given level: collect
/// contour points in the sampling annulus, split them into the two
/// asymptote-line families (doubled-angle clustering: a line maps to a
/// single direction at 2φ, and the two largest circular gaps separate
/// the families), then measure the angle between the two principal
/// axes. Returns the acute angle; None when the contour is absent or
/// too sparse to fit.
pub(crate) fn opening_angle(field: &ScalarField, level: f64) -> Option<f64> {
    let r_min = ANGLE_R_MIN_FRAC * field.box_length;
    let r_max = ANGLE_R_MAX_FRAC * field.box_length;
    let segs = contour_segments(field, level);
    let pts: Vec<(f64, f64)> = contour_points(&segs)
        .into_iter()
        .filter(|&(x, y)| {
            let r = x.hypot(y);
            r >= r_min && r <= r_max
        })
        .collect();
    if pts.len() < 10 {
        return None;
    }
    let mut doubled: Vec<(f64, usize)> = pts
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let two_phi = 2.0 * y.atan2(x);
            (two_phi.rem_euclid(2.0 * std::f64::consts::PI), i)
        })
        .collect();
    doubled.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m = doubled.len();
    // Circular gap after sorted element j.
    let gap = |j: usize| {
        if j + 1 == m {
            doubled[0].0 + 2.0 * std::f64::consts::PI - doubled[j].0
        } else {
            doubled[j + 1].0 - doubled[j].0
        }
    };
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| gap(b).total_cmp(&gap(a)));
    let (g1, g2) = (order[0].min(order[1]), order[0].max(order[1]));
    let cluster_a: Vec<(f64, f64)> =
        (g1 + 1..=g2).map(|j| pts[doubled[j].1]).collect();
    let cluster_b: Vec<(f64, f64)> = (g2 + 1..m)
        .chain(0..=g1)
        .map(|j| pts[doubled[j].1])
        .collect();
    if cluster_a.len() < 3 || cluster_b.len() < 3 {
        return None;
    }
    let diff = (axis_angle(&cluster_a) - axis_angle(&cluster_b))
        .abs()
        .rem_euclid(std::f64::consts::PI);
    Some(diff.min(std::f64::consts::PI - diff))
}

/// Minimal Euclidean distance between the c1- and c2-level curves
/// (contour sample points; the tracked contours live inside the data
/// plateau, away from the periodic seam, so no wrap metric is used).
pub(crate) fn level_distance(field: &ScalarField, c1: f64, c2: f64) -> Option<f64> {
    let p1 = contour_points(&contour_segments(field, c1));
    let p2 = contour_points(&contour_segments(field, c2));
    if p1.is_empty() || p2.is_empty() {
        return None;
    }
    let mut best = f64::INFINITY;
    for &(x1, y1) in &p1 {
        for &(x2, y2) in &p2 {
            let d2 = (x1 - x2) * (x1 - x2) + (y1 - y2) * (y1 - y2);
            if d2 < best {
                best = d2;
            }
        }
    }
    Some(best.sqrt())
}

/// All diagnostics for one emission. `prev` carries the trapezoid
/// accumulator for ∫‖θ‖_{C^σ} dt (sup + seminorm).
pub fn diagnostics(
    field: &ScalarField,
    cfg: &SimConfig,
    prev: Option<&DiagRecord>,
) -> DiagRecord {
    let n = field.n;
    let h = field.spacing();
    let sup_theta = field.values.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
    let l2_theta = (field.values.iter().map(|v| v * v).sum::<f64>() * h * h).sqrt();
    let (gx, gy) = spectral_gradient(field);
    let sup_grad = gx
        .values
        .iter()
        .zip(&gy.values)
        .fold(0.0_f64, |m, (a, b)| m.max(a.hypot(*b)));
    let (u1, u2) = velocity(field, cfg.beta);
    let sup_velocity = u1
        .values
        .iter()
        .zip(&u2.values)
        .fold(0.0_f64, |m, (a, b)| m.max(a.hypot(*b)));
    let holder = holder_seminorm(field, cfg.sigma);
    let theta_at_origin = field.at(n / 2, n / 2);
    let angle = opening_angle(field, theta_at_origin * (1.0 - cfg.angle_epsilon));
    let dist = level_distance(field, cfg.level_values.0, cfg.level_values.1);
    let norm_now = sup_theta + holder;
    let integral = match prev {
        None => 0.0,
        Some(p) => {
            let norm_prev = p.sup_theta + p.holder_seminorm;
            p.holder_time_integral
                + 0.5 * (field.time - p.time) * (norm_prev + norm_now)
        }
    };
    DiagRecord {
        time: field.time,
        sup_theta,
        l2_theta,
        sup_grad,
        holder_seminorm: holder,
        theta_at_origin,
        opening_angle: angle,
        level_distance: dist,
        holder_time_integral: integral,
        sup_velocity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::tests::smooth_saddle_cfg;
    use crate::sim::{make_initial_field, InitialData};
    use std::f64::consts::PI;

    fn field_from(n: usize, f: impl Fn(f64, f64) -> f64) -> ScalarField {
        let l = 2.0 * PI;
        let h = l / n as f64;
        let values = (0..n * n)
            .map(|idx| {
                let (ix, iy) = (idx / n, idx % n);
                f(-0.5 * l + ix as f64 * h, -0.5 * l + iy as f64 * h)
            })
            .collect();
        ScalarField { n, box_length: l, values, time: 0.0 }
    }

    #[test]
    fn contour_of_linear_field_is_the_zero_line() {
        let f = field_from(64, |x, _| x);
        let segs = contour_segments(&f, 0.0);
        assert!(!segs.is_empty());
        for s in &segs {
            assert!(s[0].abs() < 1e-12 && s[2].abs() < 1e-12, "x ≠ 0: {s:?}");
        }
    }

    #[test]
    fn contour_of_paraboloid_is_a_circle() {
        let f = field_from(128, |x, y| x * x + y * y);
        let h = f.spacing();
        let segs = contour_segments(&f, 1.0);
        assert!(segs.len() > 50);
        for (x, y) in contour_points(&segs) {
            let r = x.hypot(y);
            assert!((r - 1.0).abs() < h, "radius {r} off the unit circle");
        }
    }

    #[test]
    fn saddle_cells_follow_the_hyperbola() {
        // θ = x·y has four-crossing cells along the axes; every emitted
        // point must stay on the level set up to local linearization.
        let f = field_from(64, |x, y| x * y);
        let h = f.spacing();
        let level = 0.02;
        let segs = contour_segments(&f, level);
        assert!(!segs.is_empty());
        for (x, y) in contour_points(&segs) {
            let err = (x * y - level).abs();
            let slack = 2.0 * h * (x.abs() + y.abs() + h);
            assert!(err <= slack, "point ({x},{y}) off level: {err} > {slack}");
        }
    }

    #[test]
    fn ambiguous_cells_split_by_center_average() {
        // Two +1 corners on a cell diagonal in a constant sea give a
        // four-crossing cell; the center average picks which corner
        // pair the two segments hug.
        let n = 8;
        let idx = |ix: usize, iy: usize| ix * n + iy;
        let mut f = field_from(n, |_, _| -1.0);
        f.values[idx(3, 3)] = 1.0;
        f.values[idx(4, 4)] = 1.0;
        let h = f.spacing();
        let (x0, y0) = (f.coord(3), f.coord(3));
        // Crossing points sit on cell edges, so the membership box is
        // closed (with rounding slack); neighbor-cell segments always
        // have one endpoint strictly outside.
        let eps = 1e-9 * h;
        let in_cell = move |s: &&[f64; 4]| {
            s[0] >= x0 - eps && s[0] <= x0 + h + eps
                && s[2] >= x0 - eps && s[2] <= x0 + h + eps
                && s[1] >= y0 - eps && s[1] <= y0 + h + eps
                && s[3] >= y0 - eps && s[3] <= y0 + h + eps
        };
        let corner_gap = |s: &[f64; 4], cx: f64, cy: f64| {
            let mid = (0.5 * (s[0] + s[2]), 0.5 * (s[1] + s[3]));
            (mid.0 - cx).hypot(mid.1 - cy)
        };

        // Sea at −1: center average is 0 ≥ level, siding with the +1
        // corners, so the segments cut off the two −1 corners and stay
        // far from the +1 ones.
        let segs = contour_segments(&f, 0.0);
        let cell: Vec<&[f64; 4]> = segs.iter().filter(in_cell).collect();
        assert_eq!(cell.len(), 2, "ambiguous cell must contribute two segments");
        for s in &cell {
            let d = corner_gap(s, x0, y0).min(corner_gap(s, x0 + h, y0 + h));
            assert!(d > 0.3 * h, "segment hugs a majority corner: {s:?}");
        }

        // Sea at −5: center average −2 < level flips the pairing; the
        // segments now hug the +1 corners.
        let mut g = field_from(n, |_, _| -5.0);
        g.values[idx(3, 3)] = 1.0;
        g.values[idx(4, 4)] = 1.0;
        let segs = contour_segments(&g, 0.0);
        let cell: Vec<&[f64; 4]> = segs.iter().filter(in_cell).collect();
        assert_eq!(cell.len(), 2);
        for s in &cell {
            let d = corner_gap(s, x0, y0).min(corner_gap(s, x0 + h, y0 + h));
            assert!(d < 0.3 * h, "segment should hug a minority corner: {s:?}");
        }
    }

    #[test]
    fn holder_seminorm_brackets_the_cosine_value() {
        // For θ = cos x₁ at σ = 1/2 the antipodal pair gives 2/√π, and
        // the continuum supremum is 1.2038366614925037 (attained at
        // separation ≈ 2.3311): node pairs can't beat it, and the
        // stratified sample must at least see the antipodal pair.
        let f = field_from(256, |x, _| x.cos());
        let est = holder_seminorm(&f, 0.5);
        assert!(est >= 2.0 / PI.sqrt() - 1e-12, "estimate {est} below 2/√π");
        assert!(est <= 1.203_836_661_492_503_7 + 1e-9, "estimate {est} above sup");
        let c = field_from(64, |_, _| 0.7);
        assert_eq!(holder_seminorm(&c, 0.5), 0.0);
    }

    #[test]
    fn opening_angle_recovers_the_saddle_slopes() {
        // Sharp saddle profile: the level contour hugs the zero lines of
        // ρ, whose wedge angle is arctan(α)+arctan(δ).
        let mut cfg = smooth_saddle_cfg(256);
        cfg.initial_data = InitialData::Saddle {
            alpha0: 0.1,
            delta0: 0.1,
            amp: 0.5,
            rho_scale: 0.004,
            cutoff_radius: 2.5,
            offset: 0.5,
        };
        let f = make_initial_field(&cfg).unwrap();
        let angle = opening_angle(&f, 0.5 * (1.0 - cfg.angle_epsilon))
            .expect("contour present");
        let want = 0.199_337_304_982_324_05;
        assert!(
            (angle - want).abs() <= 0.1 * want,
            "opening angle {angle} vs {want}"
        );
    }

    #[test]
    fn opening_angle_absent_on_constant_field() {
        let c = field_from(64, |_, _| 0.5);
        assert_eq!(opening_angle(&c, 0.475), None);
    }

    #[test]
    fn level_distance_between_concentric_circles() {
        let f = field_from(256, |x, y| x * x + y * y);
        let h = f.spacing();
        let d = level_distance(&f, 0.25, 1.0).expect("both levels exist");
        assert!((d - 0.5).abs() <= 2.0 * h, "distance {d} vs 0.5");
    }

    #[test]
    fn elliptic_contour_eccentricity_matches_axis_ratio() {
        let mut cfg = smooth_saddle_cfg(256);
        cfg.initial_data = InitialData::Elliptic { a0: 1.0, b0: 2.0, amp: 1.0, scale: 0.5 };
        let f = make_initial_field(&cfg).unwrap();
        let level = (-0.5_f64).exp(); // the scale-radius contour
        let pts = contour_points(&contour_segments(&f, level));
        assert!(pts.len() > 40);
        let semi_x = pts.iter().map(|p| p.0.abs()).fold(0.0_f64, f64::max);
        let semi_y = pts.iter().map(|p| p.1.abs()).fold(0.0_f64, f64::max);
        let (lo, hi) = (semi_x.min(semi_y), semi_x.max(semi_y));
        let ecc = (1.0 - (lo / hi) * (lo / hi)).sqrt();
        let want = (1.0_f64 - 0.5).sqrt(); // √(1 − min(a,b)/max(a,b))
        assert!((ecc - want).abs() <= 0.05 * want, "ecc {ecc} vs {want}");
    }

    #[test]
    fn diagnostics_on_constant_field_degenerate_gracefully() {
        let cfg = smooth_saddle_cfg(64);
        let c = field_from(64, |_, _| 0.5);
        let rec = diagnostics(&c, &cfg, None);
        assert_eq!(rec.holder_seminorm, 0.0);
        assert_eq!(rec.opening_angle, None);
        assert_eq!(rec.level_distance, None);
        assert!(rec.sup_grad < 1e-10);
        assert_eq!(rec.holder_time_integral, 0.0);
        assert_eq!(rec.theta_at_origin, 0.5);
    }
}
