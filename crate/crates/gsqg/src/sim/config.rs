//! Line-based run configuration: `key = value` pairs, `#` comments.
//! `dump_config` emits text that `parse_config` reads back verbatim.

use std::collections::BTreeMap;
use std::str::FromStr;

use super::{InitialData, SimConfig};
use crate::error::{Error, Result};

fn err(msg: String) -> Error {
    Error::Config(msg)
}

fn num<T: FromStr>(key: &str, val: &str, line: usize) -> Result<T> {
    val.trim()
        .parse()
        .map_err(|_| err(format!("bad value `{}` for key `{key}` (line {line})", val.trim())))
}

fn take_field<T: FromStr>(
    fields: &mut BTreeMap<&str, &str>,
    key: &str,
    line: usize,
) -> Result<T> {
    let v = fields
        .remove(key)
        .ok_or_else(|| err(format!("initial_data: missing field `{key}` (line {line})")))?;
    num(key, v, line)
}

/// `family(key = value, …)` with family saddle / elliptic / single_mode.
fn parse_initial(val: &str, line: usize) -> Result<InitialData> {
    let open = val.find('(').ok_or_else(|| {
        err(format!("initial_data needs the form family(key = value, …) (line {line})"))
    })?;
    if !val.ends_with(')') {
        return Err(err(format!("initial_data: missing closing `)` (line {line})")));
    }
    let family = val[..open].trim();
    let inner = &val[open + 1..val.len() - 1];
    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part.split_once('=').ok_or_else(|| {
            err(format!("initial_data: expected `key = value` in `{part}` (line {line})"))
        })?;
        if fields.insert(k.trim(), v.trim()).is_some() {
            return Err(err(format!(
                "initial_data: duplicate field `{}` (line {line})",
                k.trim()
            )));
        }
    }
    let data = match family {
        "saddle" => InitialData::Saddle {
            alpha0: take_field(&mut fields, "alpha0", line)?,
            delta0: take_field(&mut fields, "delta0", line)?,
            amp: take_field(&mut fields, "amp", line)?,
            rho_scale: take_field(&mut fields, "rho_scale", line)?,
            cutoff_radius: take_field(&mut fields, "cutoff_radius", line)?,
            offset: take_field(&mut fields, "offset", line)?,
        },
        "elliptic" => InitialData::Elliptic {
            a0: take_field(&mut fields, "a0", line)?,
            b0: take_field(&mut fields, "b0", line)?,
            amp: take_field(&mut fields, "amp", line)?,
            scale: take_field(&mut fields, "scale", line)?,
        },
        "single_mode" => InitialData::SingleMode { k: take_field(&mut fields, "k", line)? },
        other => {
            return Err(err(format!("unknown initial data family `{other}` (line {line})")))
        }
    };
    if let Some((&k, _)) = fields.iter().next() {
        return Err(err(format!("initial_data: unknown field `{k}` (line {line})")));
    }
    Ok(data)
}

/// Parse and validate a configuration. Required keys: beta, n, dt,
/// t_end, sigma, level_values, initial_data. Optional with defaults:
/// dealias (2/3), diag_every (1), box_length (2π), cfl_max (0.5),
/// angle_epsilon (0.05). Unknown or duplicate keys are errors.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let mut map: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let (k, v) = stripped
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value` (line {line_no})")))?;
        let key = k.trim();
        if key.is_empty() {
            return Err(err(format!("empty key (line {line_no})")));
        }
        if map.insert(key, (line_no, v.trim())).is_some() {
            return Err(err(format!("duplicate key `{key}` (line {line_no})")));
        }
    }

    macro_rules! req {
        ($key:literal) => {{
            let (ln, v) =
                map.remove($key).ok_or_else(|| err(format!("missing key `{}`", $key)))?;
            num($key, v, ln)?
        }};
    }
    macro_rules! opt {
        ($key:literal, $default:expr) => {
            match map.remove($key) {
                Some((ln, v)) => num($key, v, ln)?,
                None => $default,
            }
        };
    }

    let beta: f64 = req!("beta");
    let n: usize = req!("n");
    let dt: f64 = req!("dt");
    let t_end: f64 = req!("t_end");
    let sigma: f64 = req!("sigma");
    let dealias: f64 = opt!("dealias", 2.0 / 3.0);
    let diag_every: usize = opt!("diag_every", 1);
    let box_length: f64 = opt!("box_length", 2.0 * std::f64::consts::PI);
    let cfl_max: f64 = opt!("cfl_max", 0.5);
    let angle_epsilon: f64 = opt!("angle_epsilon", 0.05);

    let level_values = {
        let (ln, v) = map
            .remove("level_values")
            .ok_or_else(|| err("missing key `level_values`".into()))?;
        let (a, b) = v.split_once(',').ok_or_else(|| {
            err(format!("level_values needs two comma-separated numbers (line {ln})"))
        })?;
        (num::<f64>("level_values", a, ln)?, num::<f64>("level_values", b, ln)?)
    };
    let initial_data = {
        let (ln, v) = map
            .remove("initial_data")
            .ok_or_else(|| err("missing key `initial_data`".into()))?;
        parse_initial(v, ln)?
    };

    if let Some((&key, &(ln, _))) = map.iter().min_by_key(|(_, (ln, _))| *ln) {
        return Err(err(format!("unknown key `{key}` (line {ln})")));
    }

    let cfg = SimConfig {
        beta,
        n,
        dt,
        t_end,
        dealias,
        initial_data,
        sigma,
        level_values,
        diag_every,
        box_length,
        cfl_max,
        angle_epsilon,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Render a configuration as parseable text (float `Display` is the
/// shortest round-tripping decimal, so parse ∘ dump is the identity).
pub fn dump_config(cfg: &SimConfig) -> String {
    use std::fmt::Write;
    let initial = match &cfg.initial_data {
        InitialData::Saddle { alpha0, delta0, amp, rho_scale, cutoff_radius, offset } => {
            format!(
                "saddle(alpha0 = {alpha0}, delta0 = {delta0}, amp = {amp}, \
                 rho_scale = {rho_scale}, cutoff_radius = {cutoff_radius}, offset = {offset})"
            )
        }
        InitialData::Elliptic { a0, b0, amp, scale } => {
            format!("elliptic(a0 = {a0}, b0 = {b0}, amp = {amp}, scale = {scale})")
        }
        InitialData::SingleMode { k } => format!("single_mode(k = {k})"),
    };
    let mut s = String::from("# transport run parameters\n");
    let _ = writeln!(s, "beta = {}", cfg.beta);
    let _ = writeln!(s, "n = {}", cfg.n);
    let _ = writeln!(s, "dt = {}", cfg.dt);
    let _ = writeln!(s, "t_end = {}", cfg.t_end);
    let _ = writeln!(s, "dealias = {}", cfg.dealias);
    let _ = writeln!(s, "sigma = {}", cfg.sigma);
    let _ = writeln!(s, "level_values = {}, {}", cfg.level_values.0, cfg.level_values.1);
    let _ = writeln!(s, "diag_every = {}", cfg.diag_every);
    let _ = writeln!(s, "box_length = {}", cfg.box_length);
    let _ = writeln!(s, "cfl_max = {}", cfg.cfl_max);
    let _ = writeln!(s, "angle_epsilon = {}", cfg.angle_epsilon);
    let _ = writeln!(s, "initial_data = {initial}");
    s
}
