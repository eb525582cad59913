//! CSV and SVG writers for learning curves.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::aggregate::CurveRow;
use crate::error::ExperimentError;

pub const CSV_HEADER: &str = "step,mean_return,stderr,agent,env";

const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(curve: &[CurveRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in curve {
        let _ = writeln!(
            out,
            "{},{:.6},{:.6},{},{}",
            r.step,
            r.mean_return,
            r.stderr,
            csv_field(&r.agent),
            csv_field(&r.env)
        );
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Series in first-appearance order, keyed by (agent, env).
fn series(curve: &[CurveRow]) -> Vec<(String, Vec<(f64, f64)>)> {
    let mut out: Vec<((String, String), Vec<(f64, f64)>)> = Vec::new();
    for r in curve {
        let key = (r.agent.clone(), r.env.clone());
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push((r.step as f64, r.mean_return)),
            None => out.push((key, vec![(r.step as f64, r.mean_return)])),
        }
    }
    let envs: Vec<&String> = out.iter().map(|((_, e), _)| e).collect();
    let one_env = envs.windows(2).all(|w| w[0] == w[1]);
    out.into_iter()
        .map(|((a, e), pts)| (if one_env { a } else { format!("{a} / {e}") }, pts))
        .collect()
}

pub fn to_svg(curve: &[CurveRow], title: &str) -> String {
    let (w, h) = (720.0, 440.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 60.0);
    let all = series(curve);
    let legend_h = 16.0 * all.len() as f64;
    let total_h = h + legend_h;
    let (pw, ph) = (w - ml - mr, h - mt - mb);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (_, pts) in &all {
        for &(x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| ml + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| mt + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{total_h}" viewBox="0 0 {w} {total_h}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#, w / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<g id="axes" stroke="black" stroke-width="1"><line x1="{ml}" y1="{}" x2="{}" y2="{}"/><line x1="{ml}" y1="{mt}" x2="{ml}" y2="{}"/></g>"#,
        mt + ph,
        ml + pw,
        mt + ph,
        mt + ph
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            sx(xv),
            mt + ph + 16.0,
            tick(xv)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            ml - 6.0,
            sy(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">environment steps</text>"#,
        ml + pw / 2.0,
        h - 20.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {})">mean return</text>"#,
        mt + ph / 2.0,
        mt + ph / 2.0
    );
    for (i, (label, pts)) in all.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = if i >= PALETTE.len() { r#" stroke-dasharray="6 3""# } else { "" };
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline id="series-{i}" fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
            coords.join(" ")
        );
        let ly = h + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<g id="legend-{i}"><line x1="{ml}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"{dash}/><text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text></g>"#,
            ml + 24.0,
            ml + 30.0,
            ly + 4.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    if v.abs() >= 1000.0 || v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

/// Writes `<dir>/<name>.csv` and `<dir>/<name>.svg`.
pub fn write_outputs(curve: &[CurveRow], dir: &Path, name: &str) -> Result<(PathBuf, PathBuf), ExperimentError> {
    std::fs::create_dir_all(dir).map_err(|source| ExperimentError::Io { path: dir.to_path_buf(), source })?;
    let csv = dir.join(format!("{name}.csv"));
    let svg = dir.join(format!("{name}.svg"));
    std::fs::write(&csv, to_csv(curve)).map_err(|source| ExperimentError::Io { path: csv.clone(), source })?;
    std::fs::write(&svg, to_svg(curve, name)).map_err(|source| ExperimentError::Io { path: svg.clone(), source })?;
    Ok((csv, svg))
}
