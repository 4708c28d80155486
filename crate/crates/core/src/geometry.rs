//! Generalized circles under `z -> 1/z`, disk and half-plane regions, and the
//! circle through three points.
//!
//! A [`Circline`] is the zero set of `A|z|^2 + 2 Re(conj(B) z) + C` with real
//! `A`, `C`. Inversion is the coefficient swap `(A, B, C) -> (C, conj(B), A)`,
//! so no parametrization is ever involved and applying it twice returns the
//! original coefficients bit for bit.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rv::{inner_product, recip};
use crate::DEFAULT_DEGENERATE_EPS;

/// Threshold on the normalized cross product below which three points are
/// treated as collinear.
pub const COLLINEAR_EPS: f64 = 1e-12;

/// Relative distance below which two input points are treated as equal.
pub const COINCIDENT_EPS: f64 = 1e-14;

/// `{ z : A|z|^2 + 2 Re(conj(B) z) + C = 0 }`.
///
/// Coefficients are homogeneous: any non-zero real multiple describes the same
/// set. Constructors store the canonical scaling (`A = 1` for circles,
/// `|B| = 1` for lines); [`invert_circline`] returns the swapped coefficients
/// as they are, and [`Circline::normalized`] recovers the canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Circline {
    a: f64,
    #[serde(with = "crate::serde_complex")]
    b: Complex64,
    c: f64,
}

impl Circline {
    pub fn new(a: f64, b: Complex64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.re.is_finite() && b.im.is_finite() && c.is_finite()) {
            return Err(Error::DegenerateCircline);
        }
        let raw = Self { a, b, c };
        if !(raw.discriminant() > 0.0) {
            return Err(Error::DegenerateCircline);
        }
        Ok(raw.normalized())
    }

    /// `|z - center| = radius`.
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::DegenerateCircline);
        }
        Self::new(1.0, -center, center.norm_sqr() - radius * radius)
    }

    /// The line through `p` and `q`.
    pub fn line_through(p: Complex64, q: Complex64) -> Result<Self> {
        let d = q - p;
        if d.norm() == 0.0 {
            return Err(Error::CoincidentPoints(
                "a line needs two distinct points".into(),
            ));
        }
        let n = Complex64::i() * d / d.norm();
        Self::new(0.0, n, -2.0 * inner_product(n, p))
    }

    pub fn coefficients(&self) -> (f64, Complex64, f64) {
        (self.a, self.b, self.c)
    }

    /// `|B|^2 - AC`; positive exactly when the set is a genuine circle or line.
    pub fn discriminant(&self) -> f64 {
        self.b.norm_sqr() - self.a * self.c
    }

    /// Canonical scaling: `A = 1` for a circle, `|B| = 1` for a line.
    pub fn normalized(&self) -> Self {
        let s = if self.a != 0.0 { self.a } else { self.b.norm() };
        if s == 1.0 {
            return *self;
        }
        Self {
            a: self.a / s,
            b: self.b / s,
            c: self.c / s,
        }
    }

    pub fn is_line(&self) -> bool {
        self.a == 0.0
    }

    pub fn center(&self) -> Option<Complex64> {
        (!self.is_line()).then(|| -self.b / self.a)
    }

    pub fn radius(&self) -> Option<f64> {
        (!self.is_line()).then(|| self.discriminant().sqrt() / self.a.abs())
    }

    pub fn passes_through_origin(&self) -> bool {
        self.c == 0.0
    }

    /// Value of the implicit equation at `z`, divided by the magnitude of its
    /// three terms.
    pub fn residual(&self, z: Complex64) -> f64 {
        let value = self.a * z.norm_sqr() + 2.0 * inner_product(self.b, z) + self.c;
        let scale = self.a.abs() * z.norm_sqr() + 2.0 * self.b.norm() * z.norm() + self.c.abs();
        if scale == 0.0 {
            0.0
        } else {
            value.abs() / scale
        }
    }

    /// Euclidean distance from `z` to the set.
    pub fn distance(&self, z: Complex64) -> f64 {
        match (self.center(), self.radius()) {
            (Some(o), Some(r)) => ((z - o).norm() - r).abs(),
            _ => (2.0 * inner_product(self.b, z) + self.c).abs() / (2.0 * self.b.norm()),
        }
    }
}

/// `z -> 1/z`.
pub fn invert_point(z: Complex64) -> Result<Complex64> {
    let modulus = z.norm();
    if modulus <= DEFAULT_DEGENERATE_EPS {
        return Err(Error::NearPole { modulus });
    }
    Ok(recip(z))
}

/// Image of `g` under `z -> 1/z`: `(A, B, C) -> (C, conj(B), A)`.
pub fn invert_circline(g: &Circline) -> Result<Circline> {
    let image = Circline {
        a: g.c,
        b: g.b.conj(),
        c: g.a,
    };
    if !(image.discriminant() > 0.0) {
        return Err(Error::DegenerateImage);
    }
    Ok(image)
}

/// A closed disk `|z - center| <= radius` or closed half-plane `normal . z >= offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Disk {
        #[serde(with = "crate::serde_complex")]
        center: Complex64,
        radius: f64,
    },
    HalfPlane {
        #[serde(with = "crate::serde_complex")]
        normal: Complex64,
        offset: f64,
    },
}

impl Region {
    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        if !(center.re.is_finite() && center.im.is_finite() && radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidRegion(format!(
                "disk radius {radius} must be positive and finite"
            )));
        }
        Ok(Region::Disk { center, radius })
    }

    /// `normal` is rescaled to unit length.
    pub fn half_plane(normal: Complex64, offset: f64) -> Result<Self> {
        let len = normal.norm();
        if !(len > 0.0 && len.is_finite() && offset.is_finite()) {
            return Err(Error::InvalidRegion(
                "half-plane needs a non-zero finite normal".into(),
            ));
        }
        Ok(Region::HalfPlane {
            normal: normal / len,
            offset: offset / len,
        })
    }

    /// True when 0 is not an interior point (`r <= |c|`, or `a >= 0`).
    pub fn excludes_origin_interior(&self) -> bool {
        match *self {
            Region::Disk { center, radius } => radius <= center.norm(),
            Region::HalfPlane { offset, .. } => offset >= 0.0,
        }
    }

    /// Signed distance-like margin: `r - |z - c|` for disks, `n . z - a` for
    /// half-planes. Non-negative exactly on the region.
    pub fn margin(&self, z: Complex64) -> f64 {
        match *self {
            Region::Disk { center, radius } => radius - (z - center).norm(),
            Region::HalfPlane { normal, offset } => inner_product(normal, z) - offset,
        }
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        region_contains(self, z, tol)
    }

    /// A point strictly inside the region and away from 0.
    fn witness(&self) -> Complex64 {
        match *self {
            Region::Disk { center, .. } => center,
            Region::HalfPlane { normal, offset } => normal * (offset + 1.0),
        }
    }

    /// Orients a half-plane so that `witness` lies on its closed side.
    fn oriented(normal: Complex64, offset: f64, witness: Complex64) -> Region {
        if inner_product(normal, witness) >= offset {
            Region::HalfPlane { normal, offset }
        } else {
            Region::HalfPlane {
                normal: -normal,
                offset: -offset,
            }
        }
    }
}

pub fn region_contains(region: &Region, z: Complex64, tol: f64) -> bool {
    match *region {
        Region::Disk { center, radius } => (z - center).norm() <= radius + tol,
        Region::HalfPlane { normal, offset } => inner_product(normal, z) >= offset - tol,
    }
}

/// Image of a region under `z -> 1/z` (with 0 removed if it sits on the
/// boundary).
///
/// * disk with `r < |c|` -> disk centered at `conj(c)/(|c|^2 - r^2)` with
///   radius `r/(|c|^2 - r^2)`
/// * disk with `r = |c|` -> half-plane bounded by `conj(c) . w = 1/2`
/// * half-plane `n . z >= a`, `a > 0` -> disk `|w - conj(n)/(2a)| <= 1/(2a)`
/// * half-plane `n . z >= 0` -> half-plane `conj(n) . w >= 0`
///
/// Half-plane images are oriented by inverting an interior witness point.
pub fn invert_region(region: &Region) -> Result<Region> {
    if !region.excludes_origin_interior() {
        return Err(Error::ContainsOrigin);
    }
    let witness = recip(region.witness());
    match *region {
        Region::Disk { center, radius } => {
            let modulus = center.norm();
            if radius < modulus {
                let power = (modulus - radius) * (modulus + radius);
                Region::disk(center.conj() / power, radius / power)
            } else {
                let normal = center.conj() / modulus;
                Ok(Region::oriented(normal, 0.5 / modulus, witness))
            }
        }
        Region::HalfPlane { normal, offset } => {
            if offset > 0.0 {
                let r = 0.5 / offset;
                Region::disk(normal.conj() * r, r)
            } else {
                Ok(Region::oriented(normal.conj(), 0.0, witness))
            }
        }
    }
}

/// The unique circline through three pairwise distinct points: a line when
/// `|Im((p2 - p1) conj(p3 - p1))| <= 1e-12 * scale^2`, where `scale` is the
/// largest pairwise distance, and a circle otherwise.
pub fn circle_through(p1: Complex64, p2: Complex64, p3: Complex64) -> Result<Circline> {
    let pairs = [(p1, p2), (p1, p3), (p2, p3)];
    let scale = pairs
        .iter()
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max);
    for (p, q) in pairs {
        if !((p - q).norm() > COINCIDENT_EPS * scale) {
            return Err(Error::CoincidentPoints(format!("{p} and {q}")));
        }
    }
    let u = p2 - p1;
    let v = p3 - p1;
    let cross = (u * v.conj()).im;
    if cross.abs() <= COLLINEAR_EPS * scale * scale {
        let (p, q) = pairs
            .into_iter()
            .max_by(|x, y| (x.0 - x.1).norm().total_cmp(&(y.0 - y.1).norm()))
            .expect("three pairs");
        return Circline::line_through(p, q);
    }
    // circumcenter relative to p1
    let d = -2.0 * cross;
    let (uu, vv) = (u.norm_sqr(), v.norm_sqr());
    let offset = Complex64::new((v.im * uu - u.im * vv) / d, (u.re * vv - v.re * uu) / d);
    let center = p1 + offset;
    Circline::circle(center, offset.norm())
}

/// Where `H[Z]` travels as the weight of a two-point law sweeps `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocusDescription {
    /// The arc of `circle` from `start` to `end` that avoids 0.
    Arc {
        circle: Circline,
        #[serde(with = "crate::serde_complex")]
        start: Complex64,
        #[serde(with = "crate::serde_complex")]
        end: Complex64,
    },
    /// The segment `[start, end]`, on a line through 0 that misses the segment.
    Segment {
        #[serde(with = "crate::serde_complex")]
        start: Complex64,
        #[serde(with = "crate::serde_complex")]
        end: Complex64,
    },
    /// 0 lies strictly between `start` and `end`; `H` passes through infinity.
    /// `line` is the common line of the two points and the origin.
    Degenerate {
        line: Circline,
        #[serde(with = "crate::serde_complex")]
        start: Complex64,
        #[serde(with = "crate::serde_complex")]
        end: Complex64,
    },
}

fn angle(z: Complex64) -> f64 {
    z.im.atan2(z.re)
}

fn ccw_offset(from: f64, to: f64) -> f64 {
    (to - from).rem_euclid(TAU)
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let t = (inner_product(ab, p - a) / ab.norm_sqr()).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

impl LocusDescription {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, LocusDescription::Degenerate { .. })
    }

    pub fn endpoints(&self) -> (Complex64, Complex64) {
        match *self {
            LocusDescription::Arc { start, end, .. }
            | LocusDescription::Segment { start, end }
            | LocusDescription::Degenerate { start, end, .. } => (start, end),
        }
    }

    /// For an arc: `(center, radius, start angle, ccw span)` of the arc that
    /// avoids 0.
    pub fn arc_parameters(&self) -> Option<(Complex64, f64, f64, f64)> {
        let LocusDescription::Arc { circle, start, end } = *self else {
            return None;
        };
        let o = circle.center()?;
        let r = circle.radius()?;
        let (a1, a2, a0) = (angle(start - o), angle(end - o), angle(-o));
        let span = ccw_offset(a1, a2);
        if ccw_offset(a1, a0) < span {
            // 0 sits on the ccw arc start -> end, so take end -> start instead
            Some((o, r, a2, TAU - span))
        } else {
            Some((o, r, a1, span))
        }
    }

    /// Euclidean distance from `p` to the locus. For the degenerate case this
    /// is the distance to the carrier line.
    pub fn distance(&self, p: Complex64) -> f64 {
        match *self {
            LocusDescription::Arc { start, end, .. } => {
                let (o, r, from, span) = self.arc_parameters().expect("arc");
                if ccw_offset(from, angle(p - o)) <= span {
                    ((p - o).norm() - r).abs()
                } else {
                    (p - start).norm().min((p - end).norm())
                }
            }
            LocusDescription::Segment { start, end } => segment_distance(p, start, end),
            LocusDescription::Degenerate { line, .. } => line.distance(p),
        }
    }
}

pub fn two_point_locus(c1: Complex64, c2: Complex64) -> Result<LocusDescription> {
    let zero = Complex64::new(0.0, 0.0);
    if c1 == zero || c2 == zero {
        return Err(Error::InvalidArgument(
            "two-point values must be non-zero".into(),
        ));
    }
    let circle = circle_through(c1, c2, zero)?;
    if !circle.is_line() {
        return Ok(LocusDescription::Arc {
            circle,
            start: c1,
            end: c2,
        });
    }
    if inner_product(c1, c2) < 0.0 {
        Ok(LocusDescription::Degenerate {
            line: circle,
            start: c1,
            end: c2,
        })
    } else {
        Ok(LocusDescription::Segment { start: c1, end: c2 })
    }
}

/// Smallest closed disk containing every point, as `(center, radius)`.
/// Incremental Welzl construction in input order; quadratic in the worst case.
pub fn smallest_enclosing_disk(points: &[Complex64]) -> Option<(Complex64, f64)> {
    let first = *points.first()?;
    let contains =
        |(o, r): (Complex64, f64), p: Complex64| (p - o).norm() <= r * (1.0 + 1e-12) + 1e-300;
    let mut disk = (first, 0.0);
    for i in 1..points.len() {
        if contains(disk, points[i]) {
            continue;
        }
        disk = (points[i], 0.0);
        for j in 0..i {
            if contains(disk, points[j]) {
                continue;
            }
            disk = disk_from_two(points[i], points[j]);
            for k in 0..j {
                if !contains(disk, points[k]) {
                    disk = disk_from_three(points[i], points[j], points[k]);
                }
            }
        }
    }
    // absorb rounding so that every point passes an exact membership test
    let slack = points
        .iter()
        .map(|&p| (p - disk.0).norm())
        .fold(disk.1, f64::max);
    Some((disk.0, slack))
}

fn disk_from_two(p: Complex64, q: Complex64) -> (Complex64, f64) {
    let o = (p + q) * 0.5;
    (o, (p - o).norm().max((q - o).norm()))
}

fn disk_from_three(p: Complex64, q: Complex64, s: Complex64) -> (Complex64, f64) {
    match circle_through(p, q, s) {
        Ok(g) if !g.is_line() => {
            let o = g.center().expect("circle");
            let r = [p, q, s]
                .iter()
                .map(|&z| (z - o).norm())
                .fold(0.0, f64::max);
            (o, r)
        }
        _ => {
            let pairs = [(p, q), (p, s), (q, s)];
            let (a, b) = pairs
                .into_iter()
                .max_by(|x, y| (x.0 - x.1).norm().total_cmp(&(y.0 - y.1).norm()))
                .expect("three pairs");
            disk_from_two(a, b)
        }
    }
}
