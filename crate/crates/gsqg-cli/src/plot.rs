//! Bare-bones PNG line plots: white canvas, framed plot area, one
//! polyline, and axis-range labels in a built-in 4×6 pixel font. The
//! CSV is the data contract — these are eyeball aids for run review.

use image::{Rgb, RgbImage};
use std::path::Path;

const W: u32 = 720;
const H: u32 = 480;
const ML: i64 = 56; // margins: left, right, top, bottom
const MR: i64 = 16;
const MT: i64 = 16;
const MB: i64 = 28;

const BG: Rgb<u8> = Rgb([255, 255, 255]);
const FRAME: Rgb<u8> = Rgb([96, 96, 96]);
const LINE: Rgb<u8> = Rgb([31, 119, 180]);
const INK: Rgb<u8> = Rgb([32, 32, 32]);

/// 4×6 glyphs for the characters that appear in numeric labels; each
/// row is a nibble, bit 3 = leftmost pixel.
fn glyph(c: u8) -> [u8; 6] {
    match c {
        b'0' => [0b0110, 0b1001, 0b1001, 0b1001, 0b1001, 0b0110],
        b'1' => [0b0010, 0b0110, 0b0010, 0b0010, 0b0010, 0b0111],
        b'2' => [0b0110, 0b1001, 0b0001, 0b0010, 0b0100, 0b1111],
        b'3' => [0b1110, 0b0001, 0b0110, 0b0001, 0b1001, 0b0110],
        b'4' => [0b0010, 0b0110, 0b1010, 0b1111, 0b0010, 0b0010],
        b'5' => [0b1111, 0b1000, 0b1110, 0b0001, 0b1001, 0b0110],
        b'6' => [0b0110, 0b1000, 0b1110, 0b1001, 0b1001, 0b0110],
        b'7' => [0b1111, 0b0001, 0b0010, 0b0010, 0b0100, 0b0100],
        b'8' => [0b0110, 0b1001, 0b0110, 0b1001, 0b1001, 0b0110],
        b'9' => [0b0110, 0b1001, 0b1001, 0b0111, 0b0001, 0b0110],
        b'.' => [0b0000, 0b0000, 0b0000, 0b0000, 0b0000, 0b0100],
        b'-' => [0b0000, 0b0000, 0b1111, 0b0000, 0b0000, 0b0000],
        b'+' => [0b0000, 0b0100, 0b1110, 0b0100, 0b0000, 0b0000],
        b'e' => [0b0000, 0b0110, 0b1001, 0b1111, 0b1000, 0b0111],
        _ => [0; 6],
    }
}

fn draw_text(img: &mut RgbImage, x: i64, y: i64, text: &str, color: Rgb<u8>) {
    let mut cx = x;
    for &c in text.as_bytes() {
        let rows = glyph(c);
        for (dy, row) in rows.iter().enumerate() {
            for dx in 0..4 {
                if row & (0b1000 >> dx) != 0 {
                    put(img, cx + dx, y + dy as i64, color);
                }
            }
        }
        cx += 5;
    }
}

#[inline]
fn put(img: &mut RgbImage, x: i64, y: i64, color: Rgb<u8>) {
    if x >= 0 && y >= 0 && (x as u32) < W && (y as u32) < H {
        img.put_pixel(x as u32, y as u32, color);
    }
}

fn draw_seg(img: &mut RgbImage, mut x0: i64, mut y0: i64, x1: i64, y1: i64, color: Rgb<u8>) {
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        put(img, x0, y0, color);
        put(img, x0, y0 + 1, color); // 2 px stroke
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

/// Compact numeric label: plain decimals in a friendly range, short
/// scientific notation otherwise.
fn tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e5).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.2e}")
    }
}

/// Render one polyline. Points must be finite; the caller drops gaps.
pub fn line_plot(path: &Path, pts: &[(f64, f64)]) -> Result<(), String> {
    if pts.len() < 2 {
        return Err("line_plot: need at least two points".into());
    }
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 - x0 <= 0.0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 <= 0.0 {
        let pad = 0.5 * y0.abs().max(1.0);
        y0 -= pad;
        y1 += pad;
    }

    let mut img = RgbImage::from_pixel(W, H, BG);
    let (pw, ph) = (W as i64 - ML - MR, H as i64 - MT - MB);
    for i in 0..=pw {
        put(&mut img, ML + i, MT, FRAME);
        put(&mut img, ML + i, MT + ph, FRAME);
    }
    for j in 0..=ph {
        put(&mut img, ML, MT + j, FRAME);
        put(&mut img, ML + pw, MT + j, FRAME);
    }

    let px = |x: f64| ML + ((x - x0) / (x1 - x0) * pw as f64).round() as i64;
    let py = |y: f64| MT + ph - ((y - y0) / (y1 - y0) * ph as f64).round() as i64;
    for w in pts.windows(2) {
        draw_seg(&mut img, px(w[0].0), py(w[0].1), px(w[1].0), py(w[1].1), LINE);
    }

    draw_text(&mut img, ML, MT + ph + 8, &tick(x0), INK);
    let xr = tick(x1);
    draw_text(&mut img, ML + pw - 5 * xr.len() as i64, MT + ph + 8, &xr, INK);
    draw_text(&mut img, 4, MT + ph - 6, &tick(y0), INK);
    draw_text(&mut img, 4, MT, &tick(y1), INK);

    img.save(path).map_err(|e| format!("line_plot: {e}"))
}
