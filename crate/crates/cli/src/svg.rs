//! SVG rendering of planar configurations in the affine chart `w = 1`.
//! Incidence points at infinity become arrowheads on the frame, pointing in
//! their direction.

use std::fmt::Write as _;

use ilab_core::transforms::{ColoredLineConfig, DualPointConfig};
use ilab_core::ProjPoint;

const SIZE: f64 = 800.0;
const PALETTE: [&str; 8] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn color(c: usize) -> &'static str {
    PALETTE[c % PALETTE.len()]
}

/// Affine bounding box with a margin, mapped onto the square canvas.
struct Frame {
    min: [f64; 2],
    scale: f64,
}

impl Frame {
    fn fit(points: &[[f64; 2]]) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for i in 0..2 {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        if points.is_empty() {
            lo = [-1.0; 2];
            hi = [1.0; 2];
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        let pad = 0.15 * span;
        Frame {
            min: [lo[0] - pad, lo[1] - pad],
            scale: SIZE / (span + 2.0 * pad),
        }
    }

    fn to_canvas(&self, p: [f64; 2]) -> [f64; 2] {
        [
            (p[0] - self.min[0]) * self.scale,
            SIZE - (p[1] - self.min[1]) * self.scale,
        ]
    }

    /// Canvas point where the ray from the canvas center in direction `d`
    /// (affine, y up) leaves the square.
    fn boundary(&self, d: [f64; 2]) -> [f64; 2] {
        let (dx, dy) = (d[0], -d[1]);
        let half = SIZE / 2.0;
        let t = half / dx.abs().max(dy.abs()).max(1e-12);
        [half + dx * t, half + dy * t]
    }
}

fn affine(p: &ProjPoint) -> Option<[f64; 2]> {
    let v = p.approx();
    if v[2].abs() < 1e-12 {
        None
    } else {
        Some([v[0] / v[2], v[1] / v[2]])
    }
}

/// Clips the projective line through homogeneous `a`, `b` to the canvas.
fn clip(frame: &Frame, a: &[f64], b: &[f64]) -> Option<([f64; 2], [f64; 2])> {
    // line coefficients l = a x b, then solve l . (x, y, 1) = 0 on the edges
    let l = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let x0 = frame.min[0];
    let y0 = frame.min[1];
    let x1 = x0 + SIZE / frame.scale;
    let y1 = y0 + SIZE / frame.scale;
    let mut hits: Vec<[f64; 2]> = Vec::new();
    if l[1].abs() > 1e-15 {
        for x in [x0, x1] {
            let y = -(l[0] * x + l[2]) / l[1];
            if (y0..=y1).contains(&y) {
                hits.push([x, y]);
            }
        }
    }
    if l[0].abs() > 1e-15 {
        for y in [y0, y1] {
            let x = -(l[1] * y + l[2]) / l[0];
            if (x0..=x1).contains(&x) {
                hits.push([x, y]);
            }
        }
    }
    hits.sort_by(|p, q| p.partial_cmp(q).unwrap());
    hits.dedup_by(|p, q| (p[0] - q[0]).abs() < 1e-9 && (p[1] - q[1]).abs() < 1e-9);
    match hits.as_slice() {
        [p, .., q] => Some((frame.to_canvas(*p), frame.to_canvas(*q))),
        _ => None,
    }
}

fn arrow(out: &mut String, frame: &Frame, dir: [f64; 2]) {
    let tip = frame.boundary(dir);
    let n = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt().max(1e-12);
    let (ux, uy) = (dir[0] / n, -dir[1] / n);
    let back = [tip[0] - 14.0 * ux, tip[1] - 14.0 * uy];
    let side = [-uy * 6.0, ux * 6.0];
    writeln!(
        out,
        r#"  <polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="black"/>"#,
        tip[0],
        tip[1],
        back[0] + side[0],
        back[1] + side[1],
        back[0] - side[0],
        back[1] - side[1]
    )
    .unwrap();
}

fn header() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n  <rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"
    )
}

pub fn render_lines(cfg: &ColoredLineConfig) -> String {
    assert_eq!(cfg.d(), 2, "project to the plane first");
    let points = cfg.incidence_points();
    let mut finite: Vec<[f64; 2]> = points.iter().filter_map(|p| affine(&p.point)).collect();
    if finite.len() < 2 {
        for r in cfg.line_refs() {
            finite.extend(affine(cfg.line(r).p()));
            finite.extend(affine(cfg.line(r).q()));
        }
    }
    let frame = Frame::fit(&finite);
    let mut out = header();
    for (c, class) in cfg.classes().iter().enumerate() {
        for l in &class.lines {
            if let Some((a, b)) = clip(&frame, &l.p().approx(), &l.q().approx()) {
                writeln!(
                    out,
                    r#"  <line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="2"/>"#,
                    a[0],
                    a[1],
                    b[0],
                    b[1],
                    color(c)
                )
                .unwrap();
            }
        }
    }
    for p in &points {
        match affine(&p.point) {
            Some(a) => {
                let q = frame.to_canvas(a);
                writeln!(
                    out,
                    r#"  <circle cx="{:.2}" cy="{:.2}" r="4" fill="black"/>"#,
                    q[0], q[1]
                )
                .unwrap();
            }
            None => {
                let v = p.point.approx();
                arrow(&mut out, &frame, [v[0], v[1]]);
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_points(cfg: &DualPointConfig) -> String {
    let finite: Vec<[f64; 2]> = cfg.classes().iter().flatten().filter_map(affine).collect();
    let frame = Frame::fit(&finite);
    let mut out = header();
    for a in cfg.alignments() {
        if a.points.len() < 3 {
            continue;
        }
        let ends: Vec<Vec<f64>> = a.points.iter().take(2).map(|&r| cfg.point(r).approx()).collect();
        if let Some((p, q)) = clip(&frame, &ends[0], &ends[1]) {
            writeln!(
                out,
                r##"  <line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#bbbbbb" stroke-width="1"/>"##,
                p[0], p[1], q[0], q[1]
            )
            .unwrap();
        }
    }
    for (c, class) in cfg.classes().iter().enumerate() {
        for p in class {
            match affine(p) {
                Some(a) => {
                    let q = frame.to_canvas(a);
                    writeln!(
                        out,
                        r#"  <circle cx="{:.2}" cy="{:.2}" r="5" fill="{}"/>"#,
                        q[0],
                        q[1],
                        color(c)
                    )
                    .unwrap();
                }
                None => {
                    let v = p.approx();
                    arrow(&mut out, &frame, [v[0], v[1]]);
                }
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
