//! Two-point weight sweeps and their CSV / SVG renderings.

use std::fmt::Write as _;

use chmean::geometry::{two_point_locus, LocusDescription};
use chmean::rv::two_point_harmonic_mean;
use chmean::DEFAULT_DEGENERATE_EPS;
use num_complex::Complex64;
use serde::Serialize;

pub const CSV_HEADER: &str = "theta,re,im,locus_dist,flag";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    /// `None` where `E[Z^-1]` vanishes and `H` does not exist.
    #[serde(with = "opt_complex")]
    pub h: Option<Complex64>,
    pub on_locus_distance: Option<f64>,
}

mod opt_complex {
    use num_complex::Complex64;
    use serde::{Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        z.map(chmean::serde_complex::Wire).serialize(s)
    }
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub c1: Complex64,
    pub c2: Complex64,
    pub locus: LocusDescription,
    pub rows: Vec<SweepRow>,
}

/// `theta = k / (steps - 1)` for `k = 0..steps`, with `P(Z = c2) = theta`.
pub fn sweep(c1: Complex64, c2: Complex64, steps: usize) -> chmean::Result<Sweep> {
    if steps < 2 {
        return Err(chmean::Error::InvalidArgument(
            "steps must be at least 2".into(),
        ));
    }
    let locus = two_point_locus(c1, c2)?;
    let rows = (0..steps)
        .map(|k| {
            let theta = k as f64 / (steps - 1) as f64;
            let h = two_point_harmonic_mean(c1, c2, theta, DEFAULT_DEGENERATE_EPS).ok();
            SweepRow {
                theta,
                h,
                on_locus_distance: h.map(|h| locus.distance(h)),
            }
        })
        .collect();
    Ok(Sweep {
        c1,
        c2,
        locus,
        rows,
    })
}

/// Rows as CSV. Numbers use the shortest representation that round-trips;
/// rows without a mean leave the numeric columns empty and set the flag
/// column to `degenerate`.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        match (row.h, row.on_locus_distance) {
            (Some(h), Some(d)) => writeln!(out, "{:?},{:?},{:?},{:?},ok", row.theta, h.re, h.im, d),
            _ => writeln!(out, "{:?},,,,degenerate", row.theta),
        }
        .expect("writing to a String");
    }
    out
}

/// Parses [`to_csv`] output back into rows.
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err("missing or unexpected CSV header".into());
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(n, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            let bad = || format!("malformed row {}: {line:?}", n + 1);
            let [theta, re, im, dist, flag] = fields[..] else {
                return Err(bad());
            };
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
            let theta = num(theta)?;
            match flag {
                "ok" => Ok(SweepRow {
                    theta,
                    h: Some(Complex64::new(num(re)?, num(im)?)),
                    on_locus_distance: Some(num(dist)?),
                }),
                "degenerate" => Ok(SweepRow {
                    theta,
                    h: None,
                    on_locus_distance: None,
                }),
                _ => Err(bad()),
            }
        })
        .collect()
}

struct View {
    min: Complex64,
    max: Complex64,
}

impl View {
    fn fit(points: impl IntoIterator<Item = Complex64>) -> Self {
        let mut min = Complex64::new(f64::INFINITY, f64::INFINITY);
        let mut max = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min = Complex64::new(min.re.min(p.re), min.im.min(p.im));
            max = Complex64::new(max.re.max(p.re), max.im.max(p.im));
        }
        let size = (max.re - min.re).max(max.im - min.im).max(1e-9);
        let pad = Complex64::new(0.1 * size, 0.1 * size);
        View {
            min: min - pad,
            max: max + pad,
        }
    }

    fn width(&self) -> f64 {
        self.max.re - self.min.re
    }

    fn height(&self) -> f64 {
        self.max.im - self.min.im
    }

    fn contains(&self, z: Complex64) -> bool {
        (self.min.re..=self.max.re).contains(&z.re) && (self.min.im..=self.max.im).contains(&z.im)
    }
}

/// SVG coordinates flip the imaginary axis.
fn xy(z: Complex64) -> String {
    format!("{},{}", z.re, -z.im)
}

fn locus_points(locus: &LocusDescription, view: &View) -> Vec<Complex64> {
    match *locus {
        LocusDescription::Arc { .. } => {
            let (o, r, from, span) = locus.arc_parameters().expect("arc");
            (0..=256)
                .map(|k| o + Complex64::from_polar(r, from + span * k as f64 / 256.0))
                .collect()
        }
        LocusDescription::Segment { start, end } => vec![start, end],
        LocusDescription::Degenerate { start, end, .. } => {
            // the whole carrier line across the view
            let d = (end - start) / (end - start).norm();
            let reach = view.width() + view.height();
            vec![start - d * reach, end + d * reach]
        }
    }
}

/// Locus, atoms, origin and swept means as a standalone SVG document. The
/// locus is the single `<path>`; every swept mean is a `circle.sample`.
pub fn to_svg(s: &Sweep) -> String {
    let zero = Complex64::new(0.0, 0.0);
    let mut frame = vec![s.c1, s.c2, zero];
    if let LocusDescription::Arc { circle, .. } = s.locus {
        let o = circle.center().expect("circle");
        let r = circle.radius().expect("circle");
        frame.extend([o - Complex64::new(r, r), o + Complex64::new(r, r)]);
    }
    let view = View::fit(frame);
    let unit = view.width().max(view.height()) / 200.0;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="600" height="{}">"#,
        view.min.re,
        -view.max.im,
        view.width(),
        view.height(),
        (600.0 * view.height() / view.width()).round()
    );
    let _ = writeln!(
        out,
        "  <title>H[Z] for Range[Z] = {{{}, {}}}</title>",
        s.c1, s.c2
    );
    let _ = writeln!(
        out,
        r##"  <line class="axis" x1="{}" y1="0" x2="{}" y2="0" stroke="#bbb" stroke-width="{}"/>"##,
        view.min.re,
        view.max.re,
        unit * 0.5
    );
    let _ = writeln!(
        out,
        r##"  <line class="axis" x1="0" y1="{}" x2="0" y2="{}" stroke="#bbb" stroke-width="{}"/>"##,
        -view.max.im,
        -view.min.im,
        unit * 0.5
    );
    let path: Vec<String> = locus_points(&s.locus, &view).into_iter().map(xy).collect();
    let _ = writeln!(
        out,
        r##"  <path class="locus" d="M {}" fill="none" stroke="#1f77b4" stroke-width="{}"/>"##,
        path.join(" L "),
        unit
    );
    let _ = writeln!(
        out,
        r##"  <circle class="origin" cx="0" cy="0" r="{}" fill="#000"/>"##,
        unit * 1.5
    );
    for (label, c) in [("c1", s.c1), ("c2", s.c2)] {
        let _ = writeln!(
            out,
            r##"  <rect class="atom" x="{}" y="{}" width="{}" height="{}" fill="#d62728"><title>{label} = {c}</title></rect>"##,
            c.re - 2.0 * unit,
            -c.im - 2.0 * unit,
            4.0 * unit,
            4.0 * unit
        );
    }
    for row in &s.rows {
        if let Some(h) = row.h {
            let visible = if view.contains(h) {
                ""
            } else {
                r#" visibility="hidden""#
            };
            let _ = writeln!(
                out,
                r##"  <circle class="sample" cx="{}" cy="{}" r="{}" fill="#ff7f0e"{visible}><title>theta = {}</title></circle>"##,
                h.re,
                -h.im,
                unit * 1.2,
                row.theta
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
