//! Attainable regions of third- and fourth-order Bargmann invariants.
//!
//! `B3` is the set of all third-order invariants of pure states; it is
//! characterized by `1 - 3|D|^(2/3) + 2|D| cos(arg D) >= 0`. `B4circ` is the
//! set of fourth-order invariants of tuples with circulant Gram matrix,
//! bounded by the curve `e^{i phi} / (sin(phi/4) + cos(phi/4))^4`.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::{Candidate3, OverlapTuple3};
use crate::states::{wrap_phase, StateTuple, StateVector};

/// Slack on `|D| <= 1` for invariant inputs.
pub const MODULUS_SLACK: f64 = 1e-12;

/// Membership slack on the B3 constraint and the B4circ radius.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// Absolute tolerance of the convex-hull test.
pub const HULL_TOL: f64 = 1e-6;

/// Minimum number of boundary samples for the convex-hull test.
pub const MIN_HULL_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    B3,
    B4Circ,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::B3 => "b3",
            Region::B4Circ => "b4circ",
        })
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "b3" => Ok(Region::B3),
            "b4circ" => Ok(Region::B4Circ),
            other => Err(Error::Parse(format!("unknown region '{other}'"))),
        }
    }
}

fn check_modulus(delta: Complex64) -> Result<f64> {
    let r = delta.norm();
    if !r.is_finite() || r > 1.0 + MODULUS_SLACK {
        return Err(Error::OutOfRange {
            what: "|delta|",
            value: r,
        });
    }
    Ok(r)
}

/// `r^(2/3)` as `exp((2/3) ln r)`, with `0^(2/3) = 0`.
fn two_thirds_power(r: f64) -> f64 {
    if r == 0.0 {
        0.0
    } else {
        ((2.0 / 3.0) * r.ln()).exp()
    }
}

fn b3_constraint_polar(r: f64, cos_phi: f64) -> f64 {
    1.0 - 3.0 * two_thirds_power(r) + 2.0 * r * cos_phi
}

/// `1 - 3|D|^(2/3) + 2|D| cos(arg D)`; nonnegative exactly on B3.
pub fn b3_constraint(delta: Complex64) -> Result<f64> {
    let r = check_modulus(delta)?;
    if r == 0.0 {
        return Ok(1.0);
    }
    Ok(b3_constraint_polar(r, delta.re / r))
}

pub fn b3_contains(delta: Complex64) -> Result<bool> {
    Ok(b3_constraint(delta)? >= -MEMBERSHIP_TOL)
}

/// Boundary modulus of B3 in direction `phi`.
///
/// With `s = r^(1/3)` the constraint reads
/// `(1 - s)^2 (1 + 2s) - 4 s^3 sin^2(phi/2)`, which is strictly decreasing
/// on `(0, 1)` and keeps full precision near the double root at `phi = 0`.
pub fn b3_boundary_radius(phi: f64) -> f64 {
    let sin_half = (0.5 * wrap_phase(phi)).sin();
    let k = 4.0 * sin_half * sin_half;
    if k == 0.0 {
        return 1.0;
    }
    let g = |s: f64| (1.0 - s) * (1.0 - s) * (1.0 + 2.0 * s) - k * s * s * s;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    s * s * s
}

pub fn b3_boundary(phi: f64) -> Complex64 {
    Complex64::from_polar(b3_boundary_radius(phi), wrap_phase(phi))
}

/// Equal-overlap candidate whose third-order invariant sits on the B3
/// boundary at phase `phi`.
pub fn b3_boundary_candidate(phi: f64) -> Result<Candidate3> {
    let d = two_thirds_power(b3_boundary_radius(phi));
    Candidate3::new(OverlapTuple3::new(d, d, d)?, phi)
}

/// `1 / (sin(phi/4) + cos(phi/4))^4` for `phi` wrapped into `[0, 2pi)`.
///
/// Uses `(sin x + cos x)^2 = 1 + sin 2x`, which is exact at `phi = pi`.
pub fn b4circ_boundary_radius(phi: f64) -> f64 {
    let s = 1.0 + (0.5 * wrap_phase(phi)).sin();
    1.0 / (s * s)
}

pub fn b4circ_boundary(phi: f64) -> Complex64 {
    let phi = wrap_phase(phi);
    Complex64::from_polar(b4circ_boundary_radius(phi), phi)
}

/// Radial membership: `|D|` no larger than the boundary modulus at `arg D`.
pub fn b4circ_membership(delta: Complex64) -> Result<bool> {
    let r = check_modulus(delta)?;
    if r == 0.0 {
        return Ok(true);
    }
    Ok(r <= b4circ_boundary_radius(delta.arg()) + MEMBERSHIP_TOL)
}

/// A complex value together with its signed distance-like constraint for a
/// region: positive inside, zero on the boundary, negative outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub value: Complex64,
    pub region: Region,
    /// B3: the value of [`b3_constraint`]. B4circ: boundary modulus minus `|D|`.
    pub boundary_distance: f64,
}

impl RegionPoint {
    pub fn new(region: Region, value: Complex64) -> Result<Self> {
        let boundary_distance = match region {
            Region::B3 => b3_constraint(value)?,
            Region::B4Circ => {
                let r = check_modulus(value)?;
                if r == 0.0 {
                    1.0
                } else {
                    b4circ_boundary_radius(value.arg()) - r
                }
            }
        };
        Ok(Self {
            value,
            region,
            boundary_distance,
        })
    }
}

/// One point of a sampled boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySample {
    pub phi: f64,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub region: Region,
    pub samples: Vec<BoundarySample>,
}

impl BoundaryCurve {
    /// `samples` points at `phi = 2 pi k / samples`, `k = 0..samples`.
    pub fn sample(region: Region, samples: usize) -> Result<Self> {
        if samples < 2 {
            return Err(Error::TooFewSamples {
                given: samples,
                min: 2,
            });
        }
        let samples = (0..samples)
            .map(|k| {
                let phi = TAU * k as f64 / samples as f64;
                BoundarySample {
                    phi,
                    value: boundary_point(region, phi),
                }
            })
            .collect();
        Ok(Self { region, samples })
    }
}

pub fn boundary_point(region: Region, phi: f64) -> Complex64 {
    match region {
        Region::B3 => b3_boundary(phi),
        Region::B4Circ => b4circ_boundary(phi),
    }
}

/// Location and value of an extremum along a boundary curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryExtremum {
    pub phi: f64,
    pub value: Complex64,
}

/// Boundary point with the most negative real part.
pub fn min_real_on_boundary(region: Region) -> BoundaryExtremum {
    maximize_on_boundary(region, |z| -z.re)
}

/// Boundary point with the largest imaginary part.
pub fn max_imag_on_boundary(region: Region) -> BoundaryExtremum {
    maximize_on_boundary(region, |z| z.im)
}

/// Grid scan over `[0, 2pi)` followed by golden-section refinement around
/// the best grid point.
fn maximize_on_boundary(region: Region, score: impl Fn(Complex64) -> f64) -> BoundaryExtremum {
    const GRID: usize = 4096;
    let f = |phi: f64| score(boundary_point(region, phi));
    let step = TAU / GRID as f64;
    let best = (0..GRID)
        .map(|k| k as f64 * step)
        .max_by(|&a, &b| f(a).total_cmp(&f(b)))
        .unwrap_or(0.0);

    let (mut a, mut b) = ((best - step).max(0.0), (best + step).min(TAU));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > 1e-12 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    let phi = 0.5 * (a + b);
    BoundaryExtremum {
        phi,
        value: boundary_point(region, phi),
    }
}

/// Four qubit states `sin(theta)|0> + i^k cos(theta)|1>`, `k = 0..4`.
///
/// Their Gram matrix is circulant and their fourth-order invariant is
/// `(sin^2 theta + i cos^2 theta)^4`, which traces the B4circ boundary as
/// `theta` runs over `[0, pi/2]`.
pub fn circulant_qubit_family(theta: f64) -> Result<StateTuple> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::OutOfRange {
            what: "theta",
            value: theta,
        });
    }
    let (s, c) = theta.sin_cos();
    let powers_of_i = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let states = powers_of_i
        .iter()
        .map(|&w| StateVector::new(vec![Complex64::new(s, 0.0), w * c]))
        .collect::<Result<Vec<_>>>()?;
    StateTuple::new(states)
}

/// Convex polygon (counter-clockwise) hulling a sampled B4circ boundary.
#[derive(Debug, Clone)]
pub struct BoundaryHull {
    vertices: Vec<[f64; 2]>,
}

impl BoundaryHull {
    pub fn b4circ(boundary_samples: usize) -> Result<Self> {
        if boundary_samples < MIN_HULL_SAMPLES {
            return Err(Error::TooFewSamples {
                given: boundary_samples,
                min: MIN_HULL_SAMPLES,
            });
        }
        let curve = BoundaryCurve::sample(Region::B4Circ, boundary_samples)?;
        let points: Vec<[f64; 2]> = curve
            .samples
            .iter()
            .map(|s| [s.value.re, s.value.im])
            .collect();
        Ok(Self {
            vertices: convex_hull(points),
        })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    /// Winding number of the hull boundary around `p`.
    pub fn winding_number(&self, p: [f64; 2]) -> i32 {
        let v = &self.vertices;
        let mut wn = 0;
        for k in 0..v.len() {
            let (a, b) = (v[k], v[(k + 1) % v.len()]);
            if a[1] <= p[1] {
                if b[1] > p[1] && cross(a, b, p) > 0.0 {
                    wn += 1;
                }
            } else if b[1] <= p[1] && cross(a, b, p) < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    /// Euclidean distance from `p` to the hull boundary.
    pub fn boundary_distance(&self, p: [f64; 2]) -> f64 {
        let v = &self.vertices;
        (0..v.len())
            .map(|k| segment_distance(p, v[k], v[(k + 1) % v.len()]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance outside the hull, or 0 for points inside.
    pub fn outside_distance(&self, p: [f64; 2]) -> f64 {
        if self.winding_number(p) != 0 {
            0.0
        } else {
            self.boundary_distance(p)
        }
    }
}

fn cross(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a[0] + t * dx, a[1] + t * dy);
    ((p[0] - qx).powi(2) + (p[1] - qy).powi(2)).sqrt()
}

/// Andrew's monotone chain; returns the hull counter-clockwise.
fn convex_hull(mut points: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    points.dedup();
    if points.len() < 3 {
        return points;
    }
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &points {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in points.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Outcome of testing points against the convex hull of the B4circ boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct HullReport {
    pub points: usize,
    pub boundary_samples: usize,
    /// Points farther than [`HULL_TOL`] outside the hull.
    pub outside: usize,
    /// Largest distance outside the hull over all points; 0 if none is outside.
    pub max_outside_distance: f64,
    pub tolerance: f64,
}

pub fn hull_membership_test(points: &[Complex64], boundary_samples: usize) -> Result<HullReport> {
    let hull = BoundaryHull::b4circ(boundary_samples)?;
    let mut outside = 0;
    let mut max_outside_distance: f64 = 0.0;
    for z in points {
        let d = hull.outside_distance([z.re, z.im]);
        max_outside_distance = max_outside_distance.max(d);
        if d > HULL_TOL {
            outside += 1;
        }
    }
    Ok(HullReport {
        points: points.len(),
        boundary_samples,
        outside,
        max_outside_distance,
        tolerance: HULL_TOL,
    })
}
