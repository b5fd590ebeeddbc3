use std::fmt::Write as _;
use std::io::Write;

use crate::analytic::{self, CurvePoint, DEFAULT_BETA_TOL, DEFAULT_CURVE_TOL};
use crate::error::{Error, Result};

use super::fmt_float;

/// Axis ranges and per-axis point count of the giant-fraction grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGrid {
    pub l1_range: (f64, f64),
    pub l2_range: (f64, f64),
    pub resolution: usize,
}

impl Default for PhaseGrid {
    fn default() -> Self {
        PhaseGrid { l1_range: (0.5, 8.0), l2_range: (0.5, 8.0), resolution: 76 }
    }
}

impl PhaseGrid {
    fn validate(&self) -> Result<()> {
        for (lo, hi) in [self.l1_range, self.l2_range] {
            if !(lo > 0.0 && hi <= 20.0 && lo < hi) {
                return Err(Error::param(format!("range ({lo}, {hi}) must satisfy 0 < lo < hi <= 20")));
            }
        }
        if self.resolution < 2 {
            return Err(Error::param("resolution must be at least 2"));
        }
        Ok(())
    }

    fn axis(&self, (lo, hi): (f64, f64)) -> Vec<f64> {
        let steps = (self.resolution - 1) as f64;
        (0..self.resolution)
            .map(|i| lo + (hi - lo) * i as f64 / steps)
            .collect()
    }

    pub fn cell_width(&self) -> (f64, f64) {
        let steps = (self.resolution - 1) as f64;
        (
            (self.l1_range.1 - self.l1_range.0) / steps,
            (self.l2_range.1 - self.l2_range.0) / steps,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram {
    pub grid: PhaseGrid,
    /// `(lambda1, lambda2, beta)` row-major in `lambda2`, then `lambda1`.
    pub cells: Vec<(f64, f64, f64)>,
    pub curve: Vec<CurvePoint>,
}

impl PhaseDiagram {
    pub fn compute(grid: PhaseGrid) -> Result<Self> {
        grid.validate()?;
        let xs = grid.axis(grid.l1_range);
        let ys = grid.axis(grid.l2_range);
        let mut cells = Vec::with_capacity(xs.len() * ys.len());
        for &l2 in &ys {
            for &l1 in &xs {
                cells.push((l1, l2, analytic::beta(l1, l2, DEFAULT_BETA_TOL)?.beta));
            }
        }
        // The curve only exists for first intensities above one.
        let curve_x: Vec<f64> = xs.into_iter().filter(|&x| x > 1.0 + 1e-9).collect();
        let curve = curve_x
            .iter()
            .map(|&l1| {
                let l2 = analytic::critical_lambda2(l1, DEFAULT_CURVE_TOL)?
                    .ok_or_else(|| Error::Numeric(format!("no threshold at {l1}")))?;
                let r = analytic::beta(l1, l2, DEFAULT_BETA_TOL)?;
                Ok(CurvePoint { lambda1: l1, lambda2_critical: l2, beta_at_critical: r.local_max_location })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PhaseDiagram { grid, cells, curve })
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "kind,lambda1,lambda2,beta")?;
        for &(l1, l2, b) in &self.cells {
            writeln!(out, "grid,{},{},{}", fmt_float(l1), fmt_float(l2), fmt_float(b))?;
        }
        for p in &self.curve {
            writeln!(
                out,
                "curve,{},{},{}",
                fmt_float(p.lambda1),
                fmt_float(p.lambda2_critical),
                fmt_float(p.beta_at_critical)
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

const SIZE: f64 = 800.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 70.0;

/// White at zero through orange to dark red at one.
fn heat(beta: f64) -> String {
    if beta <= 0.0 {
        return "#f4f4f4".into();
    }
    let t = beta.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(255.0, 140.0), lerp(224.0, 20.0), lerp(160.0, 20.0))
}

/// Static 800x800 rendering: shaded giant-fraction cells, the critical
/// curve as a polyline, axes with ticks.
pub fn render_svg(diagram: &PhaseDiagram) -> String {
    let grid = &diagram.grid;
    let (x0, x1) = grid.l1_range;
    let (y0, y1) = grid.l2_range;
    let (cw, ch) = grid.cell_width();
    let plot_w = SIZE - LEFT - RIGHT;
    let plot_h = SIZE - TOP - BOTTOM;
    // Cells are centred on grid points, so the drawn extent is padded by
    // half a cell on each side.
    let (ex0, ex1) = (x0 - cw / 2.0, x1 + cw / 2.0);
    let (ey0, ey1) = (y0 - ch / 2.0, y1 + ch / 2.0);
    let px = |x: f64| LEFT + (x - ex0) / (ex1 - ex0) * plot_w;
    let py = |y: f64| TOP + (ey1 - y) / (ey1 - ey0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="800" height="800" fill="white"/>"#);
    let _ = writeln!(s, r#"<g shape-rendering="crispEdges">"#);
    for &(l1, l2, b) in &diagram.cells {
        let (left, right) = (px(l1 - cw / 2.0), px(l1 + cw / 2.0));
        let (top, bottom) = (py(l2 + ch / 2.0), py(l2 - ch / 2.0));
        let _ = writeln!(
            s,
            r#"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
            right - left,
            bottom - top,
            heat(b)
        );
    }
    let _ = writeln!(s, "</g>");

    let points: Vec<String> = diagram
        .curve
        .iter()
        .filter(|p| p.lambda2_critical >= ey0 && p.lambda2_critical <= ey1)
        .map(|p| format!("{:.2},{:.2}", px(p.lambda1), py(p.lambda2_critical)))
        .collect();
    if !points.is_empty() {
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
            points.join(" ")
        );
    }

    let (ax_left, ax_right, ax_top, ax_bottom) = (px(ex0), px(ex1), py(ey1), py(ey0));
    let _ = writeln!(
        s,
        r#"<rect x="{ax_left:.2}" y="{ax_top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        ax_right - ax_left,
        ax_bottom - ax_top
    );
    const TICKS: usize = 5;
    for i in 0..=TICKS {
        let x = x0 + (x1 - x0) * i as f64 / TICKS as f64;
        let xp = px(x);
        let _ = writeln!(
            s,
            r#"<line x1="{xp:.2}" y1="{ax_bottom:.2}" x2="{xp:.2}" y2="{:.2}" stroke="black"/>"#,
            ax_bottom + 6.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{xp:.2}" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle">{x:.2}</text>"#,
            ax_bottom + 22.0
        );
        let y = y0 + (y1 - y0) * i as f64 / TICKS as f64;
        let yp = py(y);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{yp:.2}" x2="{ax_left:.2}" y2="{yp:.2}" stroke="black"/>"#,
            ax_left - 6.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="end">{y:.2}</text>"#,
            ax_left - 10.0,
            yp + 5.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="18" text-anchor="middle">&#955;1</text>"#,
        LEFT + plot_w / 2.0,
        SIZE - 20.0
    );
    let _ = writeln!(
        s,
        r#"<text x="25" y="{:.2}" font-family="sans-serif" font-size="18" text-anchor="middle" transform="rotate(-90 25 {:.2})">&#955;2</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );
    s.push_str("</svg>\n");
    s
}

/// Computes the diagram and writes the CSV and, optionally, the SVG.
pub fn emit_phase_diagram<W: Write, S: Write>(grid: PhaseGrid, csv: W, svg: Option<S>) -> Result<PhaseDiagram> {
    let diagram = PhaseDiagram::compute(grid)?;
    diagram.write_csv(csv)?;
    if let Some(mut svg) = svg {
        svg.write_all(render_svg(&diagram).as_bytes())?;
        svg.flush()?;
    }
    Ok(diagram)
}
