//! SVG phase portraits of planar linear flows.
//!
//! Styling is fixed:
//!
//! | item | value |
//! |---|---|
//! | canvas | 480 × 480 px, origin at the centre |
//! | world window | `[−R, R]²` with `R = 1.25 · max ‖x₀‖` (1 if all seeds are 0) |
//! | trajectories | `#1f4e79`, stroke 1.25 |
//! | stable line | `#2e7d32`, stroke 2, dashed |
//! | unstable line | `#c62828`, stroke 2, dashed |
//!
//! Pixel coordinates are written with four decimals. Points outside the
//! window are kept and clipped by the viewport; non-finite points are dropped.

use std::fmt::Write as _;

use super::{splitting, trajectory};
use crate::densemat::MatrixR;
use crate::error::{Error, Result};
use crate::inertia::classify;

pub const CANVAS: f64 = 480.0;
pub const TRAJECTORY_COLOR: &str = "#1f4e79";
pub const STABLE_COLOR: &str = "#2e7d32";
pub const UNSTABLE_COLOR: &str = "#c62828";
pub const TRAJECTORY_STROKE: f64 = 1.25;
pub const SUBSPACE_STROKE: f64 = 2.0;

/// Time sampling of every trajectory: `steps + 1` equispaced times over
/// `t_range`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortraitOptions {
    pub t_range: (f64, f64),
    pub steps: usize,
    pub tau: f64,
}

/// Renders the trajectories through `seeds` and, for a hyperbolic `H`, every
/// one-dimensional stable or unstable subspace as a line through the origin.
///
/// A saddle gets two lines. A sink or source has a two-dimensional stable or
/// unstable subspace (the whole plane) and gets none.
pub fn portrait(h: &MatrixR, seeds: &[[f64; 2]], opts: &PortraitOptions) -> Result<String> {
    if h.dim() != 2 {
        return Err(Error::UnsupportedDimension { d: h.dim(), expected: 2 });
    }
    let (t0, t1) = opts.t_range;
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::InvalidArgument(format!("time range must be finite and increasing, got [{t0}, {t1}]")));
    }
    if opts.steps == 0 {
        return Err(Error::InvalidArgument("steps must be >= 1".into()));
    }
    let grid: Vec<f64> = (0..=opts.steps)
        .map(|k| if k == opts.steps { t1 } else { t0 + (t1 - t0) * k as f64 / opts.steps as f64 })
        .collect();

    let verdict = classify(h, opts.tau)?;
    let inertia = *verdict.inertia();
    let radius = seeds
        .iter()
        .map(|p| p[0].hypot(p[1]))
        .fold(0.0, f64::max);
    let radius = if radius > 0.0 { 1.25 * radius } else { 1.0 };
    let half = CANVAS / 2.0;
    let scale = half / radius;
    let to_px = |x: f64, y: f64| (half + x * scale, half - y * scale);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = CANVAS
    );
    let _ = writeln!(
        svg,
        "<!-- linhyp-portrait s={} u={} c={} d=2 tau={:e} verdict={} -->",
        inertia.s,
        inertia.u,
        inertia.c,
        opts.tau,
        verdict.name()
    );
    let _ = writeln!(svg, r##"<rect x="0" y="0" width="{c}" height="{c}" fill="#ffffff"/>"##, c = CANVAS);

    if verdict.is_hyperbolic() {
        let bases = splitting(h, opts.tau)?;
        let reach = radius * 2.0;
        for (class, color, basis) in
            [("stable", STABLE_COLOR, &bases.stable), ("unstable", UNSTABLE_COLOR, &bases.unstable)]
        {
            if basis.len() != 1 {
                continue;
            }
            let v = &basis[0];
            let (x1, y1) = to_px(-reach * v[0], -reach * v[1]);
            let (x2, y2) = to_px(reach * v[0], reach * v[1]);
            let _ = writeln!(
                svg,
                r#"<line class="{class}" x1="{x1:.4}" y1="{y1:.4}" x2="{x2:.4}" y2="{y2:.4}" stroke="{color}" stroke-width="{SUBSPACE_STROKE}" stroke-dasharray="6 4"/>"#
            );
        }
    }

    for seed in seeds {
        let tr = trajectory(h, seed, &grid)?;
        let mut points = String::new();
        for s in tr.states.iter().filter(|s| s[0].is_finite() && s[1].is_finite()) {
            let (x, y) = to_px(s[0], s[1]);
            if !points.is_empty() {
                points.push(' ');
            }
            let _ = write!(points, "{x:.4},{y:.4}");
        }
        let _ = writeln!(
            svg,
            r#"<polyline class="trajectory" points="{points}" fill="none" stroke="{TRAJECTORY_COLOR}" stroke-width="{TRAJECTORY_STROKE}"/>"#
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
