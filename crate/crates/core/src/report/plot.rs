use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::stats::{bin_pair, GridHistogram, MetricTable};

use super::{fmt_sig, ReportError};

/// Fill for grid cells with no level in them.
pub const EMPTY_CELL: &str = "#ffffff";
const JITTER_SEED: u64 = 0;
const JITTER_FRACTION: f64 = 0.005;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 50.0;

/// Categorical colours for the generator overlay, cycled when there are
/// more generators than entries.
const CATEGORICAL: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMode {
    FitnessHeatmap,
    CountHeatmap,
    GeneratorOverlay,
}

impl PlotMode {
    pub const ALL: [PlotMode; 3] = [
        PlotMode::FitnessHeatmap,
        PlotMode::CountHeatmap,
        PlotMode::GeneratorOverlay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlotMode::FitnessHeatmap => "fitness_heatmap",
            PlotMode::CountHeatmap => "count_heatmap",
            PlotMode::GeneratorOverlay => "generator_overlay",
        }
    }
}

impl FromStr for PlotMode {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PlotMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| ReportError::InvalidSpec(format!("unknown plot mode {s:?}")))
    }
}

/// A colour ramp given by evenly spaced stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Palette {
    #[default]
    Viridis,
    Magma,
    Greys,
}

impl Palette {
    pub const ALL: [Palette; 3] = [Palette::Viridis, Palette::Magma, Palette::Greys];

    pub fn name(self) -> &'static str {
        match self {
            Palette::Viridis => "viridis",
            Palette::Magma => "magma",
            Palette::Greys => "greys",
        }
    }

    fn stops(self) -> &'static [[u8; 3]] {
        match self {
            Palette::Viridis => &[
                [0x44, 0x01, 0x54],
                [0x3b, 0x52, 0x8b],
                [0x21, 0x91, 0x8c],
                [0x5e, 0xc9, 0x62],
                [0xfd, 0xe7, 0x25],
            ],
            Palette::Magma => &[
                [0x00, 0x00, 0x04],
                [0x51, 0x12, 0x7c],
                [0xb7, 0x37, 0x79],
                [0xfc, 0x89, 0x61],
                [0xfc, 0xfd, 0xbf],
            ],
            Palette::Greys => &[[0xd9, 0xd9, 0xd9], [0x00, 0x00, 0x00]],
        }
    }

    /// Colour at `t` in [0, 1], linearly interpolated between stops.
    pub fn color(self, t: f64) -> String {
        let stops = self.stops();
        let t = if t.is_finite() {
            t.clamp(0.0, 1.0)
        } else {
            0.0
        };
        let pos = t * (stops.len() - 1) as f64;
        let i = (pos.floor() as usize).min(stops.len() - 2);
        let f = pos - i as f64;
        let (a, b) = (stops[i], stops[i + 1]);
        let mix = |k: usize| (a[k] as f64 + (b[k] as f64 - a[k] as f64) * f).round() as u8;
        format!("#{:02x}{:02x}{:02x}", mix(0), mix(1), mix(2))
    }

    pub fn top_color(self) -> String {
        self.color(1.0)
    }
}

impl FromStr for Palette {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Palette::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ReportError::InvalidSpec(format!("unknown palette {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    /// Metric on the x axis.
    pub m1: String,
    /// Metric on the y axis.
    pub m2: String,
    pub mode: PlotMode,
    pub resolution: usize,
    pub width_px: u32,
    pub height_px: u32,
    pub palette: Palette,
}

impl PlotSpec {
    pub fn new(m1: impl Into<String>, m2: impl Into<String>, mode: PlotMode) -> Self {
        Self {
            m1: m1.into(),
            m2: m2.into(),
            mode,
            resolution: 20,
            width_px: 480,
            height_px: 480,
            palette: Palette::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        if self.resolution == 0 {
            return Err(ReportError::InvalidSpec(
                "resolution must be at least 1".into(),
            ));
        }
        if self.width_px < 100 || self.height_px < 100 {
            return Err(ReportError::InvalidSpec(format!(
                "plot must be at least 100x100 pixels, got {}x{}",
                self.width_px, self.height_px
            )));
        }
        Ok(())
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
}

impl Frame {
    fn new(spec: &PlotSpec) -> Self {
        Self {
            x0: MARGIN_LEFT,
            y0: MARGIN_TOP,
            w: spec.width_px as f64 - MARGIN_LEFT - MARGIN_RIGHT,
            h: spec.height_px as f64 - MARGIN_TOP - MARGIN_BOTTOM,
        }
    }

    /// Pixel position of the unit-square point (u, v), v pointing up.
    fn at(&self, u: f64, v: f64) -> (f64, f64) {
        (self.x0 + u * self.w, self.y0 + (1.0 - v) * self.h)
    }
}

/// Renders one ERA plot of `spec.m1` against `spec.m2` as an SVG document.
pub fn render_plot(table: &MetricTable, spec: &PlotSpec) -> Result<String, ReportError> {
    spec.validate()?;
    if table.is_empty() {
        return Err(ReportError::NoLevels);
    }
    let hist = bin_pair(table, &spec.m1, &spec.m2, spec.resolution)?;
    let frame = Frame::new(spec);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#,
        w = spec.width_px,
        h = spec.height_px
    );
    let _ = writeln!(
        svg,
        "<title>{} vs {} ({})</title>",
        escape(&spec.m1),
        escape(&spec.m2),
        spec.mode.name()
    );
    let _ = writeln!(
        svg,
        r##"<rect width="100%" height="100%" fill="#ffffff"/>"##
    );
    match spec.mode {
        PlotMode::FitnessHeatmap => {
            if table.fitness().is_none() {
                return Err(ReportError::InvalidSpec(
                    "fitness_heatmap needs a fitness column".into(),
                ));
            }
            let means = hist.mean_fitness();
            draw_cells(&mut svg, &hist, &frame, |i| {
                means[i].map(|m| spec.palette.color(m))
            });
        }
        PlotMode::CountHeatmap => {
            let max = hist.counts.iter().copied().max().unwrap_or(0);
            let scale = (1.0 + max as f64).ln();
            draw_cells(&mut svg, &hist, &frame, |i| {
                let c = hist.counts[i];
                (c > 0).then(|| spec.palette.color((1.0 + c as f64).ln() / scale))
            });
        }
        PlotMode::GeneratorOverlay => draw_points(&mut svg, table, spec, &hist, &frame)?,
    }
    draw_axes(&mut svg, spec, &hist, &frame);
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn write_plot(table: &MetricTable, spec: &PlotSpec, path: &Path) -> Result<(), ReportError> {
    let svg = render_plot(table, spec)?;
    std::fs::write(path, svg).map_err(ReportError::io(path))
}

fn draw_cells(
    svg: &mut String,
    hist: &GridHistogram,
    frame: &Frame,
    fill: impl Fn(usize) -> Option<String>,
) {
    let res = hist.resolution;
    let cw = frame.w / res as f64;
    let ch = frame.h / res as f64;
    svg.push_str("<g class=\"cells\" stroke=\"#e0e0e0\" stroke-width=\"0.5\">\n");
    for iy in 0..res {
        for ix in 0..res {
            let i = hist.index(ix, iy);
            let x = frame.x0 + ix as f64 * cw;
            let y = frame.y0 + (res - 1 - iy) as f64 * ch;
            let (class, color) = match fill(i) {
                Some(c) => ("cell", c),
                None => ("empty", EMPTY_CELL.to_string()),
            };
            let _ = writeln!(
                svg,
                r#"<rect class="{class}" x="{x:.2}" y="{y:.2}" width="{cw:.2}" height="{ch:.2}" fill="{color}"><title>{}</title></rect>"#,
                hist.counts[i]
            );
        }
    }
    svg.push_str("</g>\n");
}

fn draw_points(
    svg: &mut String,
    table: &MetricTable,
    spec: &PlotSpec,
    hist: &GridHistogram,
    frame: &Frame,
) -> Result<(), ReportError> {
    let xs = table.column(&spec.m1)?;
    let ys = table.column(&spec.m2)?;
    let mut colors: BTreeMap<&str, &str> = BTreeMap::new();
    for label in table.generator_labels() {
        colors.entry(label.as_str()).or_insert("");
    }
    for (i, c) in colors.values_mut().enumerate() {
        *c = CATEGORICAL[i % CATEGORICAL.len()];
    }
    let unit = |v: f64, lo: f64, hi: f64| if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
    let mut rng = ChaCha8Rng::seed_from_u64(JITTER_SEED);
    let radius = (frame.w.min(frame.h) / 120.0).max(1.5);
    svg.push_str("<g class=\"points\" fill-opacity=\"0.4\" stroke=\"none\">\n");
    for ((&x, &y), label) in xs.iter().zip(ys).zip(table.generator_labels()) {
        let jx = rng.random_range(-JITTER_FRACTION..=JITTER_FRACTION);
        let jy = rng.random_range(-JITTER_FRACTION..=JITTER_FRACTION);
        let (px, py) = frame.at(
            unit(x, hist.x_min, hist.x_max) + jx,
            unit(y, hist.y_min, hist.y_max) + jy,
        );
        let _ = writeln!(
            svg,
            r#"<circle cx="{px:.2}" cy="{py:.2}" r="{radius:.2}" fill="{}"/>"#,
            colors[label.as_str()]
        );
    }
    svg.push_str("</g>\n");
    svg.push_str("<g class=\"legend\">\n");
    for (i, (label, color)) in colors.iter().enumerate() {
        let y = frame.y0 + 8.0 + 14.0 * i as f64;
        let x = frame.x0 + frame.w - 110.0;
        let _ = writeln!(
            svg,
            r#"<g class="legend-entry"><rect x="{x:.2}" y="{:.2}" width="10" height="10" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text></g>"#,
            y - 9.0,
            x + 14.0,
            y,
            escape(label)
        );
    }
    svg.push_str("</g>\n");
    Ok(())
}

fn draw_axes(svg: &mut String, spec: &PlotSpec, hist: &GridHistogram, frame: &Frame) {
    let bottom = frame.y0 + frame.h;
    let right = frame.x0 + frame.w;
    let _ = writeln!(
        svg,
        r##"<rect class="frame" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000000"/>"##,
        frame.x0, frame.y0, frame.w, frame.h
    );
    svg.push_str("<g class=\"axes\">\n");
    let num = |v: f64| escape(&fmt_sig(v, 3));
    let _ = writeln!(
        svg,
        r#"<text class="x-min" x="{:.2}" y="{:.2}" text-anchor="start">{}</text>"#,
        frame.x0,
        bottom + 14.0,
        num(hist.x_min)
    );
    let _ = writeln!(
        svg,
        r#"<text class="x-max" x="{right:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
        bottom + 14.0,
        num(hist.x_max)
    );
    let _ = writeln!(
        svg,
        r#"<text class="x-label" x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#,
        frame.x0 + frame.w / 2.0,
        bottom + 36.0,
        escape(&spec.m1)
    );
    let _ = writeln!(
        svg,
        r#"<text class="y-min" x="{:.2}" y="{bottom:.2}" text-anchor="end">{}</text>"#,
        frame.x0 - 4.0,
        num(hist.y_min)
    );
    let _ = writeln!(
        svg,
        r#"<text class="y-max" x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
        frame.x0 - 4.0,
        frame.y0 + 10.0,
        num(hist.y_max)
    );
    let (lx, ly) = (frame.x0 - 40.0, frame.y0 + frame.h / 2.0);
    let _ = writeln!(
        svg,
        r#"<text class="y-label" x="{lx:.2}" y="{ly:.2}" text-anchor="middle" font-size="13" transform="rotate(-90 {lx:.2} {ly:.2})">{}</text>"#,
        escape(&spec.m2)
    );
    svg.push_str("</g>\n");
}
