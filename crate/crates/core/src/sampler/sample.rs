use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::rng::substream;
use crate::error::{Error, Result};
use crate::geometry::{canonicalize_quad, Configuration, PlanarQuad, Point, Rotation};

/// Tries allowed per sample before giving up.
pub const REJECTION_BUDGET: usize = 10_000;

/// Minimum pair separation (times `scale`) for planar-general and spatial samples.
const SEPARATION_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    /// Four disk points in strictly convex position, counterclockwise.
    ConvexQuad,
    /// Four distinct disk points, any position.
    PlanarGeneral,
    /// Four points in the ball.
    Spatial,
    /// Four collinear points, each moved by `10^{-k}·scale` with `k` cycling 1..=8.
    CollinearPerturbed,
    /// Convex quadrilaterals with one side shorter than `1e-4 × diameter`.
    NearDegenerate,
}

impl SampleKind {
    pub const ALL: [SampleKind; 5] = [
        SampleKind::ConvexQuad,
        SampleKind::PlanarGeneral,
        SampleKind::Spatial,
        SampleKind::CollinearPerturbed,
        SampleKind::NearDegenerate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SampleKind::ConvexQuad => "convex-quad",
            SampleKind::PlanarGeneral => "planar-general",
            SampleKind::Spatial => "spatial",
            SampleKind::CollinearPerturbed => "collinear-perturbed",
            SampleKind::NearDegenerate => "near-degenerate",
        }
    }

    /// Kinds whose samples are convex quadrilaterals.
    pub fn is_convex(self) -> bool {
        matches!(self, SampleKind::ConvexQuad | SampleKind::NearDegenerate)
    }
}

impl fmt::Display for SampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SampleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SampleKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown sample kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub kind: SampleKind,
    pub count: u64,
    pub seed: u64,
    pub scale: f64,
}

impl SampleSpec {
    pub fn new(kind: SampleKind, count: u64, seed: u64) -> Self {
        Self {
            kind,
            count,
            seed,
            scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidSpec("sample count must be positive".into()));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "scale must be positive, got {}",
                self.scale
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub index: u64,
    pub config: Configuration,
    /// Present for the convex kinds.
    pub quad: Option<PlanarQuad>,
    /// `k` in the perturbation magnitude `10^{-k}·scale` (collinear-perturbed only).
    pub perturbation_exponent: Option<u32>,
    /// Draws consumed by rejection, including the accepted one.
    pub tries: usize,
}

/// Draws sample `index` of `spec` from its own substream, returning the
/// substream positioned after the sample so callers can keep drawing.
pub fn sample_with_rng(spec: &SampleSpec, index: u64) -> Result<(Sample, ChaCha8Rng)> {
    spec.validate()?;
    let mut rng = substream(spec.seed, index);
    let scale = spec.scale;
    let mut perturbation_exponent = None;
    for tries in 1..=REJECTION_BUDGET {
        let drawn: Option<(Configuration, Option<PlanarQuad>)> = match spec.kind {
            SampleKind::ConvexQuad => {
                let pts = std::array::from_fn(|_| uniform_disk(&mut rng, scale));
                canonicalize_quad(pts)
                    .ok()
                    .map(|q| (q.to_configuration(), Some(q)))
            }
            SampleKind::NearDegenerate => {
                near_degenerate_quad(&mut rng, scale).map(|q| (q.to_configuration(), Some(q)))
            }
            SampleKind::PlanarGeneral => {
                let pts: Vec<Point> = (0..4)
                    .map(|_| Point::planar(uniform_disk(&mut rng, scale)))
                    .collect();
                separated(pts, scale).map(|c| (c, None))
            }
            SampleKind::Spatial => {
                let pts: Vec<Point> = (0..4)
                    .map(|_| Point::from_xyz(uniform_ball(&mut rng, scale)))
                    .collect();
                separated(pts, scale).map(|c| (c, None))
            }
            SampleKind::CollinearPerturbed => {
                let k = 1 + (index % 8) as u32;
                perturbation_exponent = Some(k);
                collinear_perturbed(&mut rng, scale, 10f64.powi(-(k as i32)) * scale)
                    .map(|c| (c, None))
            }
        };
        if let Some((config, quad)) = drawn {
            let sample = Sample {
                index,
                config,
                quad,
                perturbation_exponent,
                tries,
            };
            return Ok((sample, rng));
        }
    }
    Err(Error::SamplingBudget {
        index,
        budget: REJECTION_BUDGET,
    })
}

pub fn sample_one(spec: &SampleSpec, index: u64) -> Result<Sample> {
    sample_with_rng(spec, index).map(|(s, _)| s)
}

/// All samples of `spec`, in index order.
pub fn sample(spec: &SampleSpec) -> impl Iterator<Item = Result<Sample>> + '_ {
    (0..spec.count).map(move |i| sample_one(spec, i))
}

pub fn uniform_disk(rng: &mut impl Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, 2.0 * PI * rng.gen::<f64>())
}

pub fn uniform_ball(rng: &mut impl Rng, radius: f64) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| 2.0 * rng.gen::<f64>() - 1.0);
        let n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if n2 <= 1.0 {
            return v.map(|c| c * radius);
        }
    }
}

pub fn unit_vector(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = uniform_ball(rng, 1.0);
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 {
            return v.map(|c| c / n);
        }
    }
}

/// Uniform random rotation: a quaternion drawn uniformly from the unit
/// 4-ball, then normalized.
pub fn random_rotation(rng: &mut impl Rng) -> Rotation {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| 2.0 * rng.gen::<f64>() - 1.0);
        let n2 = q.iter().map(|c| c * c).sum::<f64>();
        if n2 <= 1.0 && n2 > 1e-6 {
            return Rotation::from_quaternion(q[0], q[1], q[2], q[3]).expect("non-zero quaternion");
        }
    }
}

fn separated(points: Vec<Point>, scale: f64) -> Option<Configuration> {
    let config = Configuration::new(points).ok()?;
    (config.min_separation() >= SEPARATION_FLOOR * scale).then_some(config)
}

/// Four points on a random line through the ball, each displaced by
/// `magnitude` in a random direction.
pub fn collinear_perturbed(
    rng: &mut impl Rng,
    scale: f64,
    magnitude: f64,
) -> Option<Configuration> {
    let origin = uniform_ball(rng, 0.5 * scale);
    let dir = unit_vector(rng);
    let mut ts: Vec<f64> = (0..4)
        .map(|_| scale * (2.0 * rng.gen::<f64>() - 1.0))
        .collect();
    let mut sorted = ts.clone();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[1] - w[0] < 0.05 * scale) {
        return None;
    }
    let points = ts
        .drain(..)
        .map(|t| {
            let kick = unit_vector(rng);
            Point::from_xyz(std::array::from_fn(|i| {
                origin[i] + t * dir[i] + magnitude * kick[i]
            }))
        })
        .collect();
    Configuration::new(points).ok()
}

/// A disk triangle with one vertex split into two points a tiny distance
/// apart, relabeled by a random cyclic shift.
fn near_degenerate_quad(rng: &mut impl Rng, scale: f64) -> Option<PlanarQuad> {
    let mut tri: [Complex64; 3] = std::array::from_fn(|_| uniform_disk(rng, scale));
    let orient = crate::geometry::cross(tri[1] - tri[0], tri[2] - tri[0]);
    if orient < 0.0 {
        tri.swap(1, 2);
    }
    let [p0, p1, p2] = tri;
    let angle_at = |v: Complex64, next: Complex64, prev: Complex64| ((prev - v) / (next - v)).arg();
    let corners = [
        angle_at(p0, p1, p2),
        angle_at(p1, p2, p0),
        angle_at(p2, p0, p1),
    ];
    if corners.iter().any(|&t| !(t > 0.05)) {
        return None;
    }
    let diameter = (p1 - p0).norm().max((p2 - p1).norm()).max((p0 - p2).norm());
    let ratio = 10f64.powf(-(4.0 + 2.0 * rng.gen::<f64>())) * 0.999;
    let phi = (0.1 + 0.8 * rng.gen::<f64>()) * (PI - corners[0]);
    let dir = (p1 - p0) / (p1 - p0).norm() * Complex64::from_polar(1.0, -phi);
    let q = p0 + ratio * diameter * dir;
    let quad = PlanarQuad::new([p0, q, p1, p2]).ok()?;
    let shift = rng.gen_range(0..4);
    Some(quad.cyclic_shift(shift))
}
