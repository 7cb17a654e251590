//! Points in R³ written as `(a, z) ∈ R × C`, pairwise frames, rigid motions
//! and the convex planar quadrilateral with its twelve vertex angles.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Minimum separation of two configuration points, relative to the diameter.
pub const DISTINCTNESS_FLOOR: f64 = 1e-9;

/// Minimum cross product at a quadrilateral vertex, relative to diameter².
pub const CONVEXITY_FLOOR: f64 = 1e-9;

/// Smallest admissible quadrilateral angle (radians).
pub const ANGLE_FLOOR: f64 = 1e-12;

/// Coplanarity threshold on triple products, relative to diameter³.
pub const COPLANARITY_FLOOR: f64 = 1e-9;

/// A point of R³ in the `R × C` presentation: height `a` and planar part `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub a: f64,
    pub z: Complex64,
}

impl Point {
    pub fn new(a: f64, z: Complex64) -> Self {
        Self { a, z }
    }

    pub fn planar(z: Complex64) -> Self {
        Self { a: 0.0, z }
    }

    pub fn from_xyz([a, x, y]: [f64; 3]) -> Self {
        Self {
            a,
            z: Complex64::new(x, y),
        }
    }

    pub fn xyz(&self) -> [f64; 3] {
        [self.a, self.z.re, self.z.im]
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.z.re.is_finite() && self.z.im.is_finite()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (other.a - self.a).hypot((other.z - self.z).norm())
    }
}

/// An ordered list of at least two pairwise distinct points.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    points: Vec<Point>,
    diameter: f64,
}

impl Configuration {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints {
                min: 2,
                got: points.len(),
            });
        }
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let mut diameter = 0.0_f64;
        let mut closest = (f64::INFINITY, 0, 1);
        for j in 0..points.len() {
            for k in j + 1..points.len() {
                let dist = points[j].distance(&points[k]);
                diameter = diameter.max(dist);
                if dist < closest.0 {
                    closest = (dist, j, k);
                }
            }
        }
        let (separation, j, k) = closest;
        if !(separation > 0.0) || separation < DISTINCTNESS_FLOOR * diameter {
            return Err(Error::DegenerateConfiguration { j, k, separation });
        }
        Ok(Self { points, diameter })
    }

    /// Points `(0, z)` for each `z`.
    pub fn planar(zs: &[Complex64]) -> Result<Self> {
        Self::new(zs.iter().copied().map(Point::planar).collect())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn min_separation(&self) -> f64 {
        let mut min = f64::INFINITY;
        for j in 0..self.len() {
            for k in j + 1..self.len() {
                min = min.min(self.points[j].distance(&self.points[k]));
            }
        }
        min
    }

    pub fn pair_frame(&self, j: usize, k: usize) -> Result<PairFrame> {
        pair_frame(self, j, k)
    }

    /// The configuration with point `j` removed.
    pub fn without(&self, j: usize) -> Result<Self> {
        if j >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.len(),
            });
        }
        let mut points = self.points.clone();
        points.remove(j);
        Self::new(points)
    }

    /// Relabels the points: the new point `i` is the old point `order[i]`.
    pub fn relabeled(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        if order.len() != self.len() {
            return Err(Error::InvalidMotion(format!(
                "relabeling has {} entries for {} points",
                order.len(),
                self.len()
            )));
        }
        for &i in order {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidMotion(
                    "relabeling is not a permutation".into(),
                ));
            }
        }
        Self::new(order.iter().map(|&i| self.points[i]).collect())
    }

    /// True when all points lie on one affine plane (always for n ≤ 3).
    pub fn is_coplanar(&self) -> bool {
        let n = self.len();
        if n <= 3 {
            return true;
        }
        let origin = self.points[0].xyz();
        let rel: Vec<[f64; 3]> = self.points[1..]
            .iter()
            .map(|p| {
                let q = p.xyz();
                [q[0] - origin[0], q[1] - origin[1], q[2] - origin[2]]
            })
            .collect();
        let floor = COPLANARITY_FLOOR * self.diameter.powi(3);
        for i in 0..rel.len() {
            for j in i + 1..rel.len() {
                for k in j + 1..rel.len() {
                    if triple_product(rel[i], rel[j], rel[k]).abs() > floor {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn triple_product(u: [f64; 3], v: [f64; 3], w: [f64; 3]) -> f64 {
    u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
}

/// Per-pair scalars for the vector from point `j` to point `k`.
///
/// `d = a + rho` and `e = rho - a`; each is evaluated on the side where no
/// cancellation occurs and the other is recovered from `d·e = |z|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairFrame {
    pub a: f64,
    pub z: Complex64,
    pub rho: f64,
    pub d: f64,
    pub e: f64,
}

impl PairFrame {
    pub fn between(from: &Point, to: &Point) -> Option<Self> {
        let a = to.a - from.a;
        let z = to.z - from.z;
        let r = z.norm();
        let rho = a.hypot(r);
        if !(rho > 0.0) {
            return None;
        }
        let (d, e) = if a >= 0.0 {
            let d = a + rho;
            (d, r * r / d)
        } else {
            let e = rho - a;
            (r * r / e, e)
        };
        Some(Self { a, z, rho, d, e })
    }

    /// Planar distance `|z|`.
    pub fn r(&self) -> f64 {
        self.z.norm()
    }

    /// Planar direction `z/|z|`, undefined for vertical pairs.
    pub fn u(&self) -> Option<Complex64> {
        let r = self.r();
        (r > 0.0).then(|| self.z / r)
    }
}

pub fn pair_frame(config: &Configuration, j: usize, k: usize) -> Result<PairFrame> {
    let n = config.len();
    for index in [j, k] {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, len: n });
        }
    }
    if j == k {
        return Err(Error::SamePoint(j));
    }
    PairFrame::between(&config.points[j], &config.points[k]).ok_or(Error::DegeneratePair { j, k })
}

/// Absolute area of the triangle `pqr`.
pub fn triangle_area(p: Complex64, q: Complex64, r: Complex64) -> f64 {
    0.5 * cross(q - p, r - p).abs()
}

/// z-component of the planar cross product `u × v`.
pub fn cross(u: Complex64, v: Complex64) -> f64 {
    u.re * v.im - u.im * v.re
}

/// Named side lengths of a quadrilateral `z1 z2 z3 z4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sides {
    /// `r23`
    pub a: f64,
    /// `r13` (diagonal)
    pub b: f64,
    /// `r12`
    pub c: f64,
    /// `r14`
    pub d: f64,
    /// `r24` (diagonal)
    pub e: f64,
    /// `r34`
    pub f: f64,
}

impl Sides {
    pub fn product(&self) -> f64 {
        self.a * self.b * self.c * self.d * self.e * self.f
    }
}

/// A strictly convex quadrilateral with counterclockwise vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarQuad {
    z: [Complex64; 4],
}

impl PlanarQuad {
    /// Validates the vertices as given; no reordering.
    pub fn new(z: [Complex64; 4]) -> Result<Self> {
        if let Some(index) = z
            .iter()
            .position(|w| !(w.re.is_finite() && w.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        let mut diameter = 0.0_f64;
        for j in 0..4 {
            for k in j + 1..4 {
                let dist = (z[k] - z[j]).norm();
                if !(dist > 0.0) {
                    return Err(Error::DegenerateConfiguration {
                        j,
                        k,
                        separation: dist,
                    });
                }
                diameter = diameter.max(dist);
            }
        }
        let floor = CONVEXITY_FLOOR * diameter * diameter;
        for j in 0..4 {
            let turn = cross(z[j] - z[(j + 3) % 4], z[(j + 1) % 4] - z[j]);
            if !(turn > floor) {
                return Err(Error::NotConvex { vertex: j });
            }
        }
        if !(shoelace(&z) > 0.0) {
            return Err(Error::NotConvex { vertex: 0 });
        }
        Ok(Self { z })
    }

    pub fn vertices(&self) -> [Complex64; 4] {
        self.z
    }

    pub fn vertex(&self, j: usize) -> Complex64 {
        self.z[j % 4]
    }

    /// Distance between vertices `j` and `k` (0-based, taken mod 4).
    pub fn r(&self, j: usize, k: usize) -> f64 {
        (self.z[k % 4] - self.z[j % 4]).norm()
    }

    pub fn sides(&self) -> Sides {
        Sides {
            a: self.r(1, 2),
            b: self.r(0, 2),
            c: self.r(0, 1),
            d: self.r(0, 3),
            e: self.r(1, 3),
            f: self.r(2, 3),
        }
    }

    pub fn diameter(&self) -> f64 {
        let mut diameter = 0.0_f64;
        for j in 0..4 {
            for k in j + 1..4 {
                diameter = diameter.max(self.r(j, k));
            }
        }
        diameter
    }

    pub fn min_side(&self) -> f64 {
        let mut min = f64::INFINITY;
        for j in 0..4 {
            for k in j + 1..4 {
                min = min.min(self.r(j, k));
            }
        }
        min
    }

    pub fn signed_area(&self) -> f64 {
        shoelace(&self.z)
    }

    /// Area of the triangle on vertices `j`, `k`, `l` (0-based).
    pub fn area(&self, j: usize, k: usize, l: usize) -> f64 {
        triangle_area(self.z[j % 4], self.z[k % 4], self.z[l % 4])
    }

    /// The same quadrilateral relabeled so that new vertex `i` is old `i + shift`.
    pub fn cyclic_shift(&self, shift: usize) -> Self {
        Self {
            z: std::array::from_fn(|i| self.z[(i + shift) % 4]),
        }
    }

    pub fn to_configuration(&self) -> Configuration {
        Configuration::planar(&self.z).expect("a convex quadrilateral has distinct vertices")
    }
}

fn shoelace(z: &[Complex64; 4]) -> f64 {
    0.5 * (0..4).map(|j| cross(z[j], z[(j + 1) % 4])).sum::<f64>()
}

/// Orders four planar points counterclockwise around their centroid,
/// keeping the first input point first, and checks strict convexity.
///
/// A `NotConvex` error reports the input index of the offending vertex.
pub fn canonicalize_quad(points: [Complex64; 4]) -> Result<PlanarQuad> {
    let centroid = points.iter().sum::<Complex64>() / 4.0;
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| {
        let ti = (points[i] - centroid).arg();
        let tj = (points[j] - centroid).arg();
        ti.total_cmp(&tj)
    });
    let start = order
        .iter()
        .position(|&i| i == 0)
        .expect("index 0 is present");
    order.rotate_left(start);
    let reordered = order.map(|i| points[i]);
    PlanarQuad::new(reordered).map_err(|err| match err {
        Error::NotConvex { vertex } => Error::NotConvex {
            vertex: order[vertex],
        },
        Error::DegenerateConfiguration { j, k, separation } => Error::DegenerateConfiguration {
            j: order[j].min(order[k]),
            k: order[j].max(order[k]),
            separation,
        },
        other => other,
    })
}

/// The twelve angles of a convex quadrilateral.
///
/// `alpha[j]` sits at `z_j` between the rays to `z_{j+1}` and `z_{j+2}`,
/// `beta[j]` between the rays to `z_{j+2}` and `z_{j-1}`, and
/// `gamma[j] = alpha[j] + beta[j]` is the full interior angle. Indices are
/// 0-based here; vertex `j` is `z_{j+1}` in 1-based notation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadAngles {
    pub alpha: [f64; 4],
    pub beta: [f64; 4],
    pub gamma: [f64; 4],
}

impl QuadAngles {
    /// `cos α_j + cos β_j + cos γ_j`.
    pub fn vertex_cos_sum(&self, j: usize) -> f64 {
        let j = j % 4;
        self.alpha[j].cos() + self.beta[j].cos() + self.gamma[j].cos()
    }

    /// Angles `(α_{j+1}, γ_{j+2}, β_{j+3})` of the triangle opposite vertex `j`.
    pub fn opposite_triangle(&self, j: usize) -> [f64; 3] {
        [
            self.alpha[(j + 1) % 4],
            self.gamma[(j + 2) % 4],
            self.beta[(j + 3) % 4],
        ]
    }

    pub fn triangle_cos_sum(&self, j: usize) -> f64 {
        self.opposite_triangle(j).iter().map(|t| t.cos()).sum()
    }

    /// `sin(α_{j+1}/2) sin(γ_{j+2}/2) sin(β_{j+3}/2)`.
    pub fn sin_half_product(&self, j: usize) -> f64 {
        self.opposite_triangle(j)
            .iter()
            .map(|t| (0.5 * t).sin())
            .product()
    }

    /// Largest deviation of a triangle angle sum from π.
    pub fn triangle_sum_residual(&self) -> f64 {
        (0..4)
            .map(|j| (self.opposite_triangle(j).iter().sum::<f64>() - PI).abs())
            .fold(0.0, f64::max)
    }
}

pub fn quad_angles(quad: &PlanarQuad) -> Result<QuadAngles> {
    let z = quad.vertices();
    let mut alpha = [0.0; 4];
    let mut beta = [0.0; 4];
    let mut gamma = [0.0; 4];
    for j in 0..4 {
        let next = z[(j + 1) % 4] - z[j];
        let across = z[(j + 2) % 4] - z[j];
        let prev = z[(j + 3) % 4] - z[j];
        alpha[j] = (across / next).arg();
        beta[j] = (prev / across).arg();
        gamma[j] = alpha[j] + beta[j];
        for angle in [alpha[j], beta[j]] {
            if !(angle > ANGLE_FLOOR) {
                return Err(Error::DegenerateQuad { vertex: j, angle });
            }
        }
        if !(gamma[j] < PI - ANGLE_FLOOR) {
            return Err(Error::DegenerateQuad {
                vertex: j,
                angle: gamma[j],
            });
        }
    }
    Ok(QuadAngles { alpha, beta, gamma })
}

/// A proper rotation of R³ acting on `(a, Re z, Im z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    m: [[f64; 3]; 3],
}

impl Rotation {
    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Rotation by the unit quaternion `w + xi + yj + zk` (normalized here).
    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (w * w + x * x + y * y + z * z).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidMotion("zero or non-finite quaternion".into()));
        }
        let (w, x, y, z) = (w / norm, x / norm, y / norm, z / norm);
        Ok(Self {
            m: [
                [
                    1.0 - 2.0 * (y * y + z * z),
                    2.0 * (x * y - w * z),
                    2.0 * (x * z + w * y),
                ],
                [
                    2.0 * (x * y + w * z),
                    1.0 - 2.0 * (x * x + z * z),
                    2.0 * (y * z - w * x),
                ],
                [
                    2.0 * (x * z - w * y),
                    2.0 * (y * z + w * x),
                    1.0 - 2.0 * (x * x + y * y),
                ],
            ],
        })
    }

    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !(norm > 0.0) || !norm.is_finite() || !angle.is_finite() {
            return Err(Error::InvalidMotion(
                "rotation axis must be a finite non-zero vector".into(),
            ));
        }
        let (s, c) = (0.5 * angle).sin_cos();
        Self::from_quaternion(
            c,
            s * axis[0] / norm,
            s * axis[1] / norm,
            s * axis[2] / norm,
        )
    }

    /// Rotation about the height axis, i.e. `z ↦ e^{iθ} z`.
    pub fn about_height_axis(angle: f64) -> Result<Self> {
        Self::from_axis_angle([1.0, 0.0, 0.0], angle)
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| self.m[i][0] * v[0] + self.m[i][1] * v[1] + self.m[i][2] * v[2])
    }
}

/// Similarity motions of R³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Motion {
    Translation {
        a: f64,
        z: Complex64,
    },
    Rotation(Rotation),
    /// Reflection in the plane through the origin with the given normal,
    /// written as `(a, Re z, Im z)`.
    Reflection {
        normal: [f64; 3],
    },
    Scale(f64),
}

pub fn apply_motion(config: &Configuration, motion: &Motion) -> Result<Configuration> {
    let map: Box<dyn Fn(&Point) -> Point> = match *motion {
        Motion::Translation { a, z } => {
            if !(a.is_finite() && z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidMotion("non-finite translation".into()));
            }
            Box::new(move |p| Point::new(p.a + a, p.z + z))
        }
        Motion::Rotation(rotation) => Box::new(move |p| Point::from_xyz(rotation.apply(p.xyz()))),
        Motion::Reflection { normal } => {
            let norm =
                (normal[0] * normal[0] + normal[1] * normal[1] + normal[2] * normal[2]).sqrt();
            if !(norm > 0.0) || !norm.is_finite() {
                return Err(Error::InvalidMotion(
                    "reflection normal must be non-zero".into(),
                ));
            }
            let n = normal.map(|c| c / norm);
            Box::new(move |p| {
                let v = p.xyz();
                let dot = v[0] * n[0] + v[1] * n[1] + v[2] * n[2];
                Point::from_xyz(std::array::from_fn(|i| v[i] - 2.0 * dot * n[i]))
            })
        }
        Motion::Scale(lambda) => {
            if !(lambda > 0.0) || !lambda.is_finite() {
                return Err(Error::InvalidScale(lambda));
            }
            Box::new(move |p| Point::new(lambda * p.a, lambda * p.z))
        }
    };
    Configuration::new(config.points().iter().map(map).collect())
}
