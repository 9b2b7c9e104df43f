//! SVG rendering of a sampled watermelon.

use std::fmt::Write as _;

use watermelon::discrete_walk::WatermelonPath;

/// Branch colors, cycled when `p > 10`.
pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub stroke_width: f64,
    pub colors: Vec<String>,
    /// Draw the horizontal axis at height 0.
    pub wall_axis: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            width: 800.0,
            height: 400.0,
            margin: 20.0,
            stroke_width: 1.5,
            colors: PALETTE.iter().map(|c| c.to_string()).collect(),
            wall_axis: false,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.width > 0.0 && self.height > 0.0) {
            return Err("width and height must be positive".into());
        }
        if !(self.margin >= 0.0 && 2.0 * self.margin < self.width.min(self.height)) {
            return Err("margin must be non-negative and leave room for the plot".into());
        }
        if !(self.stroke_width > 0.0) {
            return Err("stroke width must be positive".into());
        }
        if self.colors.is_empty() {
            return Err("need at least one color".into());
        }
        Ok(())
    }
}

/// One `<polyline>` per branch, up-steps drawn upwards.
pub fn render_svg(path: &WatermelonPath, spec: &RenderSpec) -> Result<String, String> {
    spec.validate()?;
    let steps = path.steps().max(1) as f64;
    let lo = path.positions().iter().copied().min().unwrap_or(0).min(0) as f64;
    let hi = (path.positions().iter().copied().max().unwrap_or(0) as f64).max(lo + 1.0);
    let plot_w = spec.width - 2.0 * spec.margin;
    let plot_h = spec.height - 2.0 * spec.margin;
    let x_of = |k: usize| spec.margin + k as f64 / steps * plot_w;
    let y_of = |h: f64| spec.height - spec.margin - (h - lo) / (hi - lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    if spec.wall_axis {
        let y = y_of(0.0);
        let _ = writeln!(
            svg,
            r##"  <line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#000000" stroke-width="1"/>"##,
            spec.margin,
            spec.width - spec.margin
        );
    }
    for i in 0..path.p() {
        let points: Vec<String> = path
            .branch(i)
            .enumerate()
            .map(|(k, h)| format!("{:.3},{:.3}", x_of(k), y_of(h as f64)))
            .collect();
        let color = &spec.colors[i % spec.colors.len()];
        let _ = writeln!(
            svg,
            r#"  <polyline fill="none" stroke="{color}" stroke-width="{}" points="{}"/>"#,
            spec.stroke_width,
            points.join(" ")
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_tent() {
        let path = WatermelonPath::new(1, 1, true, vec![0, 1, 0]).unwrap();
        let svg = render_svg(&path, &RenderSpec { wall_axis: true, ..RenderSpec::default() }).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg.matches("<line").count(), 1);
        // Peak sits above the endpoints in screen coordinates.
        assert!(svg.contains("20.000,380.000 400.000,20.000 780.000,380.000"));
    }

    #[test]
    fn colors_cycle() {
        let p = 11;
        let n = 11;
        let start: Vec<i64> = (0..p as i64).map(|i| 2 * i).collect();
        let mut positions = start.clone();
        for k in 1..=2 * n {
            let h = k.min(2 * n - k) as i64;
            positions.extend(start.iter().map(|s| s + h));
        }
        let path = WatermelonPath::new(p, n as u64, false, positions).unwrap();
        let svg = render_svg(&path, &RenderSpec::default()).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 11);
        assert_eq!(svg.matches(PALETTE[0]).count(), 2);
    }

    #[test]
    fn bad_spec() {
        let path = WatermelonPath::new(1, 1, true, vec![0, 1, 0]).unwrap();
        assert!(render_svg(&path, &RenderSpec { width: 0.0, ..RenderSpec::default() }).is_err());
        assert!(render_svg(&path, &RenderSpec { colors: vec![], ..RenderSpec::default() }).is_err());
    }
}
