//! Closed paths in the parameter space and the default loop library.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::MonodromyError;
use crate::algebra::roots::poly_roots_complex;

/// Complex number as `[re, im]`.
pub type C2 = [f64; 2];

pub fn c(z: C2) -> Complex64 {
    Complex64::new(z[0], z[1])
}

pub fn c2(z: Complex64) -> C2 {
    [z.re, z.im]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    Lambda,
    Mu,
}

impl Coord {
    pub fn index(self) -> usize {
        match self {
            Coord::Lambda => 0,
            Coord::Mu => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Segment {
    /// Straight line from the current point to `to`.
    Line { to: [C2; 2] },
    /// Full turns in one coordinate around `center`; the current point must
    /// lie on the circle of the given radius.
    Arc { coord: Coord, center: C2, radius: f64, winding: i32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopSpec {
    pub name: String,
    pub target: String,
    pub base: [C2; 2],
    pub segments: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopFile {
    #[serde(default)]
    pub tol: Option<f64>,
    pub loops: Vec<LoopSpec>,
}

/// A segment as a map `t in [0,1] -> (point, derivative)`.
#[derive(Debug, Clone, Copy)]
pub enum Path {
    Line { from: [Complex64; 2], to: [Complex64; 2] },
    Arc { fixed: [Complex64; 2], coord: usize, center: Complex64, start: Complex64, winding: f64 },
}

impl Path {
    pub fn at(&self, t: f64) -> ([Complex64; 2], [Complex64; 2]) {
        match *self {
            Path::Line { from, to } => {
                let d = [to[0] - from[0], to[1] - from[1]];
                ([from[0] + d[0] * t, from[1] + d[1] * t], d)
            }
            Path::Arc { fixed, coord, center, start, winding } => {
                let w = Complex64::new(0.0, 2.0 * std::f64::consts::PI * winding);
                let z = center + (start - center) * (w * t).exp();
                let mut p = fixed;
                p[coord] = z;
                let mut d = [Complex64::new(0.0, 0.0); 2];
                d[coord] = w * (z - center);
                (p, d)
            }
        }
    }
}

impl LoopSpec {
    pub fn base_point(&self) -> [Complex64; 2] {
        [c(self.base[0]), c(self.base[1])]
    }

    /// Pieces of the path, validating arc radii.
    pub fn paths(&self) -> Result<Vec<Path>, MonodromyError> {
        let mut cur = self.base_point();
        let mut out = Vec::new();
        for s in &self.segments {
            match s {
                Segment::Line { to } => {
                    let to = [c(to[0]), c(to[1])];
                    out.push(Path::Line { from: cur, to });
                    cur = to;
                }
                Segment::Arc { coord, center, radius, winding } => {
                    let k = coord.index();
                    let r = (cur[k] - c(*center)).norm();
                    if (r - radius).abs() > 1e-9 * radius.max(1e-300) {
                        return Err(MonodromyError::Malformed(format!(
                            "{}: arc radius {radius} but current point at distance {r}",
                            self.name
                        )));
                    }
                    out.push(Path::Arc { fixed: cur, coord: k, center: c(*center), start: cur[k], winding: *winding as f64 });
                }
            }
        }
        let base = self.base_point();
        if (cur[0] - base[0]).norm() + (cur[1] - base[1]).norm() > 1e-12 {
            return Err(MonodromyError::NotClosed(self.name.clone()));
        }
        Ok(out)
    }

    /// Traverse backwards.
    pub fn reversed(&self) -> Result<LoopSpec, MonodromyError> {
        let paths = self.paths()?;
        let mut segs = Vec::new();
        for (s, p) in self.segments.iter().zip(&paths).rev() {
            segs.push(match (s, p) {
                (Segment::Line { .. }, Path::Line { from, .. }) => Segment::Line { to: [c2(from[0]), c2(from[1])] },
                (Segment::Arc { coord, center, radius, winding }, _) => {
                    Segment::Arc { coord: *coord, center: *center, radius: *radius, winding: -winding }
                }
                _ => unreachable!("segments and paths align"),
            });
        }
        Ok(LoopSpec { name: format!("{}^-1", self.name), target: self.target.clone(), base: self.base, segments: segs })
    }

    /// `self` followed by `other` (same base point).
    pub fn then(&self, other: &LoopSpec) -> LoopSpec {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        LoopSpec { name: format!("{}*{}", self.name, other.name), target: "composite".into(), base: self.base, segments }
    }

    /// Sample points along the loop.
    pub fn samples(&self, per_segment: usize) -> Result<Vec<[Complex64; 2]>, MonodromyError> {
        Ok(self
            .paths()?
            .iter()
            .flat_map(|p| (0..=per_segment).map(move |i| p.at(i as f64 / per_segment as f64).0))
            .collect())
    }
}

pub fn t4_c(l: Complex64, m: Complex64) -> Complex64 {
    l * l * (4.0 * l - 1.0).powi(3) - 2.0 * (2.0 + 25.0 * l * (20.0 * l - 1.0)) * m - 3125.0 * m * m
}

pub fn s4_c(l: Complex64) -> Complex64 {
    1.0 - 15.0 * l - 100.0 * l * l
}

/// Smallest of `|lambda|, |mu|, |t4|, |s4|` (the last is an apparent
/// singularity of the frame but a pole of the coefficients).
pub fn clearance(p: [Complex64; 2]) -> f64 {
    [p[0].norm(), p[1].norm(), t4_c(p[0], p[1]).norm(), s4_c(p[0]).norm()].into_iter().fold(f64::INFINITY, f64::min)
}

pub fn default_base_point() -> [Complex64; 2] {
    let mut l = Complex64::new(0.1, 0.01);
    let m = Complex64::new(0.001, 1e-7);
    // deterministic resampling if the default sits too close to the locus
    for k in 0..32 {
        let p = [l, m];
        if (p[0] * p[1] * t4_c(p[0], p[1])).norm() > 1e-9 {
            return p;
        }
        l += Complex64::new(0.0, 0.0037 * (k + 1) as f64);
    }
    [l, m]
}

/// Roots of `t4(lambda0, mu) = 0` in `mu`.
pub fn t4_mu_roots(l: Complex64) -> Result<[Complex64; 2], MonodromyError> {
    let a = Complex64::new(-3125.0, 0.0);
    let b = -2.0 * (2.0 + 25.0 * l * (20.0 * l - 1.0));
    let cc = l * l * (4.0 * l - 1.0).powi(3);
    let disc = b * b - 4.0 * a * cc;
    if disc.norm() <= 1e-14 * (b * b).norm().max(1e-300) {
        return Err(MonodromyError::DoubleRoot);
    }
    let s = disc.sqrt();
    let mut r = [(-b + s) / (2.0 * a), (-b - s) / (2.0 * a)];
    r.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).expect("finite"));
    Ok(r)
}

/// Singular points of the mu-slice at fixed lambda, the t4 roots first.
fn mu_slice(l: Complex64) -> Result<Vec<Complex64>, MonodromyError> {
    let r = t4_mu_roots(l)?;
    Ok(vec![r[0], r[1], Complex64::new(0.0, 0.0)])
}

fn lambda_slice(m: Complex64) -> Result<Vec<Complex64>, MonodromyError> {
    // t4 in lambda: 64 l^5 - 48 l^4 + 12 l^3 - l^2 - 1000 m l^2 + 50 m l - 4 m - 3125 m^2
    let one = Complex64::new(1.0, 0.0);
    let coeffs = [
        -4.0 * m - 3125.0 * m * m,
        50.0 * m,
        -one - 1000.0 * m,
        12.0 * one,
        -48.0 * one,
        64.0 * one,
    ];
    let mut pts = poly_roots_complex(&coeffs).ok_or(MonodromyError::RootIsolation)?;
    pts.push(Complex64::new(0.0, 0.0));
    // s4 = (1 - 20 lambda)(1 + 5 lambda)
    pts.push(Complex64::new(0.05, 0.0));
    pts.push(Complex64::new(-0.2, 0.0));
    Ok(pts)
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = (((p - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (a + d * t - p).norm()
}

fn polyline_clear(pts: &[Complex64], others: &[Complex64], margin: f64) -> bool {
    pts.windows(2).all(|w| others.iter().all(|s| segment_distance(*s, w[0], w[1]) >= margin))
}

/// Out to a small circle around `center`, once around counterclockwise, and
/// back the same way. The approach is a straight ray, or bends through one
/// waypoint off to the side when the ray passes near another singular point.
pub fn circle_loop(
    name: &str,
    target: &str,
    base: [Complex64; 2],
    coord: Coord,
    center: Complex64,
    others: &[Complex64],
) -> Result<LoopSpec, MonodromyError> {
    let k = coord.index();
    let b = base[k];
    let dist = (b - center).norm();
    let nearest = others.iter().map(|s| (s - center).norm()).fold(f64::INFINITY, f64::min);
    let rho = (0.4 * nearest).min(0.5 * dist);
    let perp = Complex64::new(0.0, 1.0) * (center - b) / dist;
    let mut route = None;
    for side in [0.0, 1.0, -1.0, 2.0, -2.0, 3.0, -3.0] {
        let (approach, start) = if side == 0.0 {
            (vec![b], center + (b - center) * (rho / dist))
        } else {
            let w = (b + center) * 0.5 + perp * (0.5 * side * dist);
            (vec![b, w], center + (w - center) * (rho / (w - center).norm()))
        };
        let mut pts = approach.clone();
        pts.push(start);
        if polyline_clear(&pts, others, 0.25 * rho) {
            route = Some(pts);
            break;
        }
    }
    let route = route.ok_or_else(|| MonodromyError::TooClose(format!("{name}: no clear approach to {center}")))?;
    let at = |z: Complex64| -> [C2; 2] {
        let mut p = base;
        p[k] = z;
        [c2(p[0]), c2(p[1])]
    };
    let mut segments: Vec<Segment> = route[1..].iter().map(|z| Segment::Line { to: at(*z) }).collect();
    segments.push(Segment::Arc { coord, center: c2(center), radius: rho, winding: 1 });
    segments.extend(route[..route.len() - 1].iter().rev().map(|z| Segment::Line { to: at(*z) }));
    Ok(LoopSpec { name: name.into(), target: target.into(), base: at(b), segments })
}

/// Loops around `lambda = 0`, `mu = 0` and the two `t4` roots over `lambda0`.
pub fn loop_library(base: [Complex64; 2]) -> Result<Vec<LoopSpec>, MonodromyError> {
    if (base[0] * base[1] * t4_c(base[0], base[1])).norm() <= 1e-9 {
        return Err(MonodromyError::BasePoint);
    }
    let ms = mu_slice(base[0])?;
    let ls = lambda_slice(base[1])?;
    let others = |pts: &[Complex64], i: usize| -> Vec<Complex64> {
        pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, z)| *z).collect()
    };
    let zero_l = ls.len() - 3;
    Ok(vec![
        circle_loop("lambda=0", "lambda=0", base, Coord::Lambda, ls[zero_l], &others(&ls, zero_l))?,
        circle_loop("mu=0", "mu=0", base, Coord::Mu, ms[2], &others(&ms, 2))?,
        circle_loop("t4#1", "t4=0 root #1", base, Coord::Mu, ms[0], &others(&ms, 0))?,
        circle_loop("t4#2", "t4=0 root #2", base, Coord::Mu, ms[1], &others(&ms, 1))?,
    ])
}

/// Out to the circle and back without turning.
pub fn trivial_loop(base: [Complex64; 2]) -> LoopSpec {
    let b = [c2(base[0]), c2(base[1])];
    let mid = [c2(base[0]), c2(base[1] * 1.2)];
    LoopSpec {
        name: "trivial".into(),
        target: "none".into(),
        base: b,
        segments: vec![
            Segment::Line { to: mid },
            Segment::Arc { coord: Coord::Mu, center: [0.0, 0.0], radius: (base[1] * 1.2).norm(), winding: 0 },
            Segment::Line { to: b },
        ],
    }
}
