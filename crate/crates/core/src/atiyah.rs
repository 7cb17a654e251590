//! The Atiyah determinant.
//!
//! Each ordered pair `(k, j)` contributes a spinor lifting the vector from
//! point `k` to point `j` through the Hopf map. Column `k` of the Atiyah
//! matrix holds the coefficients of `∏_{j≠k} (u_kj X + v_kj Y)`. Only the
//! lift for `j < k` is computed; the reverse pair always uses the paired
//! lift `(u, v) ↦ (−v̄, ū)`, which makes the determinant independent of the
//! phase chosen for each base lift.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Configuration, PairFrame};
use crate::linalg;

pub const MAX_POINTS: usize = 8;

/// `|At|` must exceed this multiple of the normalizer for C1 to pass.
pub const C1_FLOOR: f64 = 1e-12;

/// A point of C² lifting a vector of R³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub u: Complex64,
    pub v: Complex64,
}

impl Spinor {
    pub fn new(u: Complex64, v: Complex64) -> Self {
        Self { u, v }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.u.norm_sqr() + self.v.norm_sqr()
    }

    /// Multiplies both components by `e^{iθ}`.
    pub fn rephased(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        Self {
            u: phase * self.u,
            v: phase * self.v,
        }
    }
}

impl std::ops::Neg for Spinor {
    type Output = Spinor;

    fn neg(self) -> Spinor {
        Spinor {
            u: -self.u,
            v: -self.v,
        }
    }
}

/// Hopf map `(u, v) ↦ ((|u|² − |v|²)/2, u·v̄)`.
pub fn hopf(s: Spinor) -> (f64, Complex64) {
    (0.5 * (s.u.norm_sqr() - s.v.norm_sqr()), s.u * s.v.conj())
}

/// Chart used to lift a pair vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// `(√d, z̄/√d)`, singular when the vector points straight down.
    A,
    /// `(z/√e, √e)`, singular when the vector points straight up.
    B,
}

impl Chart {
    fn name(self) -> &'static str {
        match self {
            Chart::A => "A",
            Chart::B => "B",
        }
    }
}

/// How [`LiftTable`] picks a chart per pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChartPolicy {
    /// Chart A when `a ≥ 0`, chart B otherwise.
    #[default]
    BySign,
    Force(Chart),
}

/// Lift of a pair vector in the chart selected by the sign of its height.
pub fn lift_pair(frame: &PairFrame) -> Result<Spinor> {
    let chart = if frame.a >= 0.0 { Chart::A } else { Chart::B };
    lift_pair_in_chart(frame, chart)
}

pub fn lift_pair_in_chart(frame: &PairFrame, chart: Chart) -> Result<Spinor> {
    if !(frame.rho > 0.0) {
        return Err(Error::DegeneratePair { j: 0, k: 1 });
    }
    match chart {
        Chart::A => {
            if !(frame.d > 0.0) {
                return Err(Error::SingularChart {
                    chart: chart.name(),
                });
            }
            let root = frame.d.sqrt();
            Ok(Spinor::new(
                Complex64::new(root, 0.0),
                frame.z.conj() / root,
            ))
        }
        Chart::B => {
            if !(frame.e > 0.0) {
                return Err(Error::SingularChart {
                    chart: chart.name(),
                });
            }
            let root = frame.e.sqrt();
            Ok(Spinor::new(frame.z / root, Complex64::new(root, 0.0)))
        }
    }
}

/// `(u, v) ↦ (−v̄, ū)`; lifts the reversed vector. Applying it twice negates.
pub fn paired_lift(s: Spinor) -> Spinor {
    Spinor::new(-s.v.conj(), s.u.conj())
}

/// Coefficients of `∏_m (u_m X + v_m Y)`; entry `i` multiplies `X^{len−i} Y^i`.
///
/// Factors are folded in list order so the result is bit-reproducible.
pub fn symmetric_column(spinors: &[Spinor]) -> Vec<Complex64> {
    let mut coeffs = Vec::with_capacity(spinors.len() + 1);
    coeffs.push(Complex64::new(1.0, 0.0));
    for s in spinors {
        coeffs.push(Complex64::new(0.0, 0.0));
        for i in (0..coeffs.len()).rev() {
            let carried = if i > 0 {
                coeffs[i - 1] * s.v
            } else {
                Complex64::new(0.0, 0.0)
            };
            coeffs[i] = coeffs[i] * s.u + carried;
        }
    }
    coeffs
}

/// One base lift per unordered pair `j < k`, lifting the vector `P_j → P_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftTable {
    n: usize,
    base: Vec<Spinor>,
}

impl LiftTable {
    pub fn new(config: &Configuration) -> Result<Self> {
        Self::with_policy(config, ChartPolicy::BySign)
    }

    pub fn with_policy(config: &Configuration, policy: ChartPolicy) -> Result<Self> {
        let n = config.len();
        let mut base = Vec::with_capacity(n * (n - 1) / 2);
        for j in 0..n {
            for k in j + 1..n {
                let frame = config.pair_frame(j, k)?;
                let lift = match policy {
                    ChartPolicy::BySign => lift_pair(&frame),
                    ChartPolicy::Force(chart) => lift_pair_in_chart(&frame, chart),
                }
                .map_err(|err| match err {
                    Error::DegeneratePair { .. } => Error::DegeneratePair { j, k },
                    other => other,
                })?;
                base.push(lift);
            }
        }
        Ok(Self { n, base })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn slot(&self, j: usize, k: usize) -> usize {
        debug_assert!(j < k && k < self.n);
        j * self.n - j * (j + 1) / 2 + (k - j - 1)
    }

    /// The stored lift for `j < k`.
    pub fn base(&self, j: usize, k: usize) -> Spinor {
        self.base[self.slot(j, k)]
    }

    /// Lift of the vector from point `from` to point `to`.
    pub fn lift(&self, from: usize, to: usize) -> Spinor {
        if from < to {
            self.base(from, to)
        } else {
            paired_lift(self.base(to, from))
        }
    }

    /// Multiplies the base lift of `j < k` by `e^{iθ}`; the paired lift
    /// picks up `e^{−iθ}` automatically.
    pub fn rephase(&mut self, j: usize, k: usize, theta: f64) {
        let slot = self.slot(j, k);
        self.base[slot] = self.base[slot].rephased(theta);
    }
}

/// The `n × n` complex matrix whose columns are symmetric products of lifts.
#[derive(Debug, Clone, PartialEq)]
pub struct AtiyahMatrix {
    columns: Vec<Vec<Complex64>>,
}

impl AtiyahMatrix {
    pub fn assemble(lifts: &LiftTable) -> Self {
        let n = lifts.len();
        let columns = (0..n)
            .map(|k| {
                let spinors: Vec<Spinor> = (0..n)
                    .filter(|&j| j != k)
                    .map(|j| lifts.lift(k, j))
                    .collect();
                symmetric_column(&spinors)
            })
            .collect();
        Self { columns }
    }

    pub fn size(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, k: usize) -> &[Complex64] {
        &self.columns[k]
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.columns[col][row]
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.size();
        let rows: Vec<Vec<Complex64>> = (0..n)
            .map(|i| (0..n).map(|k| self.columns[k][i]).collect())
            .collect();
        linalg::determinant(&rows)
    }
}

/// `At`, the distance normalizer `∏_{j<k} 2ρ_jk`, and `D = At / normalizer`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtiyahResult {
    pub at: Complex64,
    pub normalizer: f64,
    pub d_normalized: Complex64,
}

pub fn normalizer(config: &Configuration) -> f64 {
    let pts = config.points();
    let mut product = 1.0;
    for j in 0..pts.len() {
        for k in j + 1..pts.len() {
            product *= 2.0 * pts[j].distance(&pts[k]);
        }
    }
    product
}

pub fn atiyah_determinant(config: &Configuration) -> Result<AtiyahResult> {
    atiyah_determinant_with(config, ChartPolicy::BySign)
}

pub fn atiyah_determinant_with(
    config: &Configuration,
    policy: ChartPolicy,
) -> Result<AtiyahResult> {
    let n = config.len();
    if !(2..=MAX_POINTS).contains(&n) {
        return Err(Error::UnsupportedSize(n));
    }
    let lifts = LiftTable::with_policy(config, policy)?;
    Ok(result_from_lifts(config, &lifts))
}

/// Evaluates the determinant for an explicit lift table.
pub fn result_from_lifts(config: &Configuration, lifts: &LiftTable) -> AtiyahResult {
    let at = AtiyahMatrix::assemble(lifts).determinant();
    let normalizer = normalizer(config);
    AtiyahResult {
        at,
        normalizer,
        d_normalized: at / normalizer,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C1Report {
    pub pass: bool,
    /// `|At| / normalizer`
    pub margin: f64,
}

pub fn c1_verdict(result: &AtiyahResult) -> C1Report {
    let margin = result.at.norm() / result.normalizer;
    C1Report {
        pass: margin > C1_FLOOR,
        margin,
    }
}

pub fn check_c1(config: &Configuration) -> Result<C1Report> {
    Ok(c1_verdict(&atiyah_determinant(config)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C2Report {
    pub pass: bool,
    pub planar: bool,
    pub d_re: f64,
    pub d_im: f64,
    pub d_abs: f64,
}

impl C2Report {
    /// The quantity compared against 1: `Re D` when planar, `|D|` otherwise.
    pub fn tested_value(&self) -> f64 {
        if self.planar {
            self.d_re
        } else {
            self.d_abs
        }
    }

    pub fn margin(&self) -> f64 {
        self.tested_value() - 1.0
    }
}

pub fn c2_verdict(result: &AtiyahResult, planar: bool, tol: f64) -> C2Report {
    let d = result.d_normalized;
    let mut report = C2Report {
        pass: false,
        planar,
        d_re: d.re,
        d_im: d.im,
        d_abs: d.norm(),
    };
    report.pass = report.tested_value() >= 1.0 - tol;
    report
}

pub fn check_c2(config: &Configuration, tol: f64) -> Result<C2Report> {
    Ok(c2_verdict(
        &atiyah_determinant(config)?,
        config.is_coplanar(),
        tol,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C3Report {
    pub pass: bool,
    pub planar: bool,
    /// `At^{n−2}`
    pub lhs_complex: Complex64,
    /// `∏_j At(config without point j)`
    pub rhs_complex: Complex64,
    /// Compared values: real parts when planar, moduli otherwise.
    pub lhs: f64,
    pub rhs: f64,
}

impl C3Report {
    pub fn margin(&self) -> f64 {
        self.lhs / self.rhs - 1.0
    }
}

pub fn c3_verdict(
    config: &Configuration,
    result: &AtiyahResult,
    planar: bool,
    tol: f64,
) -> Result<C3Report> {
    let n = config.len();
    if n < 3 {
        return Err(Error::TooFewPoints { min: 3, got: n });
    }
    let lhs_complex = result.at.powi(n as i32 - 2);
    let mut rhs_complex = Complex64::new(1.0, 0.0);
    for j in 0..n {
        rhs_complex *= atiyah_determinant(&config.without(j)?)?.at;
    }
    let (lhs, rhs) = if planar {
        (result.at.re.powi(n as i32 - 2), rhs_complex.re)
    } else {
        (lhs_complex.norm(), rhs_complex.norm())
    };
    Ok(C3Report {
        pass: lhs >= rhs * (1.0 - tol),
        planar,
        lhs_complex,
        rhs_complex,
        lhs,
        rhs,
    })
}

pub fn check_c3(config: &Configuration, tol: f64) -> Result<C3Report> {
    let result = atiyah_determinant(config)?;
    c3_verdict(config, &result, config.is_coplanar(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{pair_frame, Point};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(x: Complex64, y: Complex64, rel: f64) -> bool {
        (x - y).norm() <= rel * y.norm().max(1.0)
    }

    fn frame(p: Point, q: Point) -> PairFrame {
        pair_frame(&Configuration::new(vec![p, q]).unwrap(), 0, 1).unwrap()
    }

    #[test]
    fn hopf_examples() {
        let s2 = 2f64.sqrt();
        assert_eq!(
            hopf(Spinor::new(c(1.0, 0.0), c(1.0, 0.0))),
            (0.0, c(1.0, 0.0))
        );
        let (a, z) = hopf(Spinor::new(c(s2, 0.0), c(0.0, 0.0)));
        assert!((a - 1.0).abs() < 1e-15 && z == c(0.0, 0.0));
        let (a, z) = hopf(Spinor::new(c(0.0, 0.0), c(s2, 0.0)));
        assert!((a + 1.0).abs() < 1e-15 && z == c(0.0, 0.0));
    }

    #[test]
    fn lift_examples() {
        let origin = Point::planar(c(0.0, 0.0));
        let s = lift_pair(&frame(origin, Point::planar(c(1.0, 0.0)))).unwrap();
        assert_eq!(s, Spinor::new(c(1.0, 0.0), c(1.0, 0.0)));

        let s = lift_pair(&frame(origin, Point::new(-1.0, c(0.0, 0.0)))).unwrap();
        assert_eq!(s.u, c(0.0, 0.0));
        assert!((s.v - c(2f64.sqrt(), 0.0)).norm() < 1e-15);
        let (a, z) = hopf(s);
        assert!((a + 1.0).abs() < 1e-15 && z.norm() < 1e-15);

        let f = frame(origin, Point::new(3.0, c(0.0, 4.0)));
        let s = lift_pair(&f).unwrap();
        let r8 = 8f64.sqrt();
        assert!((s.u - c(r8, 0.0)).norm() < 1e-15);
        assert!((s.v - c(0.0, -2f64.sqrt())).norm() < 1e-15);
        let (a, z) = hopf(s);
        assert!((a - 3.0).abs() < 1e-14 && (z - c(0.0, 4.0)).norm() < 1e-14);
        assert!((s.norm_sqr() - 2.0 * f.rho).abs() < 1e-14);
    }

    #[test]
    fn singular_chart_is_reported() {
        let f = frame(Point::planar(c(0.0, 0.0)), Point::new(-1.0, c(0.0, 0.0)));
        assert_eq!(
            lift_pair_in_chart(&f, Chart::A),
            Err(Error::SingularChart { chart: "A" })
        );
        let f = frame(Point::planar(c(0.0, 0.0)), Point::new(1.0, c(0.0, 0.0)));
        assert_eq!(
            lift_pair_in_chart(&f, Chart::B),
            Err(Error::SingularChart { chart: "B" })
        );
    }

    #[test]
    fn paired_lift_examples() {
        let s2 = 2f64.sqrt();
        assert_eq!(
            paired_lift(Spinor::new(c(1.0, 0.0), c(1.0, 0.0))),
            Spinor::new(c(-1.0, 0.0), c(1.0, 0.0))
        );
        let p = paired_lift(Spinor::new(c(s2, 0.0), c(0.0, 0.0)));
        assert_eq!(p.u.norm(), 0.0);
        assert_eq!(p.v, c(s2, 0.0));
        let s = Spinor::new(c(2.0, 0.0), c(0.0, 3.0));
        assert_eq!(paired_lift(paired_lift(s)), -s);
    }

    #[test]
    fn symmetric_column_examples() {
        let (p, q, r) = (c(0.3, 1.0), c(-2.0, 0.5), c(1.5, -0.7));
        let one = c(1.0, 0.0);
        let col = symmetric_column(&[
            Spinor::new(one, p),
            Spinor::new(one, q),
            Spinor::new(one, r),
        ]);
        let expected = [one, p + q + r, p * q + p * r + q * r, p * q * r];
        for (x, y) in col.iter().zip(expected) {
            assert!((x - y).norm() < 1e-14);
        }
        let zero = c(0.0, 0.0);
        assert_eq!(
            symmetric_column(&[
                Spinor::new(c(2.0, 0.0), zero),
                Spinor::new(c(3.0, 0.0), zero)
            ]),
            vec![c(6.0, 0.0), zero, zero]
        );
        assert_eq!(
            symmetric_column(&[Spinor::new(zero, one), Spinor::new(zero, one)]),
            vec![zero, zero, one]
        );
    }

    #[test]
    fn two_point_determinant_is_normalizer() {
        let config = Configuration::new(vec![
            Point::new(0.4, c(1.0, 2.0)),
            Point::new(-1.0, c(0.0, 0.5)),
        ])
        .unwrap();
        let res = atiyah_determinant(&config).unwrap();
        assert!(close(res.at, c(res.normalizer, 0.0), 1e-14));
    }

    #[test]
    fn collinear_three() {
        let config = Configuration::planar(&[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let res = atiyah_determinant(&config).unwrap();
        assert!(close(res.at, c(16.0, 0.0), 1e-14));
        assert_eq!(res.normalizer, 16.0);
        assert!(close(res.d_normalized, c(1.0, 0.0), 1e-14));
    }

    #[test]
    fn equilateral_triangle() {
        let config = Configuration::planar(&[
            c(0.0, 0.0),
            c(1.0, 0.0),
            Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3),
        ])
        .unwrap();
        let res = atiyah_determinant(&config).unwrap();
        assert!(close(res.at, c(9.0, 0.0), 1e-14));
        assert!((res.normalizer - 8.0).abs() < 1e-14);
        let c1 = check_c1(&config).unwrap();
        assert!(c1.pass && (c1.margin - 1.125).abs() < 1e-14);
    }

    #[test]
    fn unsupported_sizes() {
        let zs: Vec<Complex64> = (0..9).map(|i| c(i as f64, 0.0)).collect();
        let config = Configuration::planar(&zs).unwrap();
        assert_eq!(atiyah_determinant(&config), Err(Error::UnsupportedSize(9)));
        let pair = Configuration::planar(&zs[..2]).unwrap();
        assert!(matches!(
            check_c3(&pair, 1e-9),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn eight_collinear_points_sit_on_the_c2_boundary() {
        let zs: Vec<Complex64> = (0..8).map(|i| c(i as f64, 0.0)).collect();
        let res = atiyah_determinant(&Configuration::planar(&zs).unwrap()).unwrap();
        assert!(close(res.d_normalized, c(1.0, 0.0), 1e-10));
    }

    #[test]
    fn rephasing_leaves_determinant_unchanged() {
        let config = Configuration::new(vec![
            Point::new(0.0, c(0.0, 0.0)),
            Point::new(0.5, c(1.0, 0.2)),
            Point::new(-0.3, c(0.1, 1.1)),
            Point::new(0.9, c(-0.6, 0.4)),
        ])
        .unwrap();
        let mut lifts = LiftTable::new(&config).unwrap();
        let before = result_from_lifts(&config, &lifts).at;
        lifts.rephase(0, 2, 1.3);
        lifts.rephase(1, 3, -0.4);
        let after = result_from_lifts(&config, &lifts).at;
        assert!((after - before).norm() <= 1e-12 * before.norm());
    }
}
