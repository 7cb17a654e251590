use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::sample::{
    random_rotation, sample_with_rng, uniform_ball, Sample, SampleKind, SampleSpec,
};
use crate::atiyah::{atiyah_determinant, c1_verdict, c2_verdict, c3_verdict, C1_FLOOR};
use crate::error::{Error, Result};
use crate::geometry::{apply_motion, Motion, Point};
use crate::quad::{
    compare_routes, decomposed_at, side_area_form, side_sine_form, triangle_identity_residuals,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Relative tolerance for two-route identities.
    pub identity_rel: f64,
    /// Absolute slack on dimensionless inequalities and identity residuals.
    pub inequality_slack: f64,
    /// Slack on `D ≥ 1` and `At_ang ≥ 64` (relative).
    pub c2: f64,
    /// Relative slack on the facial product inequality.
    pub c3: f64,
    /// Relative change allowed under a rigid motion.
    pub invariance_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity_rel: 1e-9,
            inequality_slack: 1e-12,
            c2: 1e-10,
            c3: 1e-9,
            invariance_rel: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    C1,
    C2,
    C3,
    Theorem1,
    Corollary1,
    Corollary2,
    HalfAngleIdentity,
    EdgeSum,
    SineAreaCrossCheck,
    AngularFloor,
    RigidMotion,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::C1,
        Check::C2,
        Check::C3,
        Check::Theorem1,
        Check::Corollary1,
        Check::Corollary2,
        Check::HalfAngleIdentity,
        Check::EdgeSum,
        Check::SineAreaCrossCheck,
        Check::AngularFloor,
        Check::RigidMotion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::C1 => "c1",
            Check::C2 => "c2",
            Check::C3 => "c3",
            Check::Theorem1 => "theorem1",
            Check::Corollary1 => "corollary1",
            Check::Corollary2 => "corollary2",
            Check::HalfAngleIdentity => "half_angle_identity",
            Check::EdgeSum => "edge_sum",
            Check::SineAreaCrossCheck => "sine_area_cross_check",
            Check::AngularFloor => "angular_floor",
            Check::RigidMotion => "rigid_motion",
        }
    }

    pub fn applies_to(self, kind: SampleKind) -> bool {
        match self {
            Check::C1 | Check::C2 | Check::C3 | Check::RigidMotion => true,
            _ => kind.is_convex(),
        }
    }
}

/// Outcome of one check on one sample. `value` is compared against
/// `threshold`: from below for `*_at_least` checks, from above otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: Check,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckResult {
    fn at_least(check: Check, value: f64, threshold: f64) -> Self {
        Self {
            check,
            value,
            threshold,
            pass: value >= threshold,
        }
    }

    fn at_most(check: Check, value: f64, threshold: f64) -> Self {
        Self {
            check,
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

/// Decomposition quantities recorded for convex samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadMetrics {
    pub at_ang: f64,
    pub s1: f64,
    pub s2: f64,
    /// `E12 + E23 + E34 + E14 − E13 − E24`
    pub e_sum: f64,
    /// `e_sum / diameter⁶`
    pub e_sum_normalized: f64,
    pub theorem1_rel_error: f64,
    pub ill_conditioned: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleOutcome {
    pub index: u64,
    pub kind: SampleKind,
    pub points: Vec<[f64; 3]>,
    pub d_re: f64,
    pub d_im: f64,
    pub d_abs: f64,
    pub planar: bool,
    pub margin_c2: f64,
    pub margin_c3: f64,
    pub quad: Option<QuadMetrics>,
    pub perturbation_exponent: Option<u32>,
    pub checks: Vec<CheckResult>,
}

impl SampleOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// First failing check in `Check::ALL` order.
    pub fn worst_check(&self) -> Option<Check> {
        self.checks.iter().find(|c| !c.pass).map(|c| c.check)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub index: u64,
    pub check: Check,
    pub value: f64,
    pub threshold: f64,
    pub points: Vec<[f64; 3]>,
}

/// Running extremes over a sweep. Decomposition fields stay `None` for
/// non-convex kinds.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Extremes {
    pub min_d_re: Option<f64>,
    pub min_d_abs: Option<f64>,
    pub min_c1_margin: Option<f64>,
    pub min_c3_margin: Option<f64>,
    /// `at_ang − 64`
    pub min_at_ang_margin: Option<f64>,
    /// `S1 − 4`
    pub min_s1_margin: Option<f64>,
    /// `8·S1 + 2·S2 − 40`
    pub min_corollary2_margin: Option<f64>,
    /// Signed edge-term sum over `diameter⁶`.
    pub min_e_sum_normalized: Option<f64>,
    pub max_theorem1_rel_error: Option<f64>,
    pub max_rigid_motion_rel_change: Option<f64>,
}

fn fold_min(slot: &mut Option<f64>, v: f64) {
    *slot = Some(slot.map_or(v, |m| m.min(v)));
}

fn fold_max(slot: &mut Option<f64>, v: f64) {
    *slot = Some(slot.map_or(v, |m| m.max(v)));
}

impl Extremes {
    fn absorb(&mut self, outcome: &SampleOutcome) {
        fold_min(&mut self.min_d_re, outcome.d_re);
        fold_min(&mut self.min_d_abs, outcome.d_abs);
        fold_min(&mut self.min_c3_margin, outcome.margin_c3);
        for c in &outcome.checks {
            match c.check {
                Check::C1 => fold_min(&mut self.min_c1_margin, c.value),
                Check::RigidMotion => fold_max(&mut self.max_rigid_motion_rel_change, c.value),
                _ => {}
            }
        }
        if let Some(q) = &outcome.quad {
            fold_min(&mut self.min_at_ang_margin, q.at_ang - 64.0);
            fold_min(&mut self.min_s1_margin, q.s1 - 4.0);
            fold_min(
                &mut self.min_corollary2_margin,
                8.0 * q.s1 + 2.0 * q.s2 - 40.0,
            );
            fold_min(&mut self.min_e_sum_normalized, q.e_sum_normalized);
            fold_max(&mut self.max_theorem1_rel_error, q.theorem1_rel_error);
        }
    }
}

/// How `|D − 1|` shrinks with the perturbation size in collinear sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendRow {
    /// Perturbation magnitude is `10^{-exponent}·scale`.
    pub exponent: u32,
    pub samples: u64,
    pub max_abs_d_minus_one: f64,
    pub mean_abs_d_minus_one: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub tolerances: Tolerances,
    /// Worker threads; `1` runs on the calling thread.
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub spec: SampleSpec,
    pub tolerances: Tolerances,
    pub pass_counts: BTreeMap<Check, u64>,
    pub failures: Vec<Failure>,
    pub extremes: Extremes,
    /// Collinear-perturbed sweeps only.
    pub trend: Vec<TrendRow>,
    /// Whether the mean `|D − 1|` is non-increasing as the perturbation
    /// shrinks, ignoring steps below `1e-12`.
    pub trend_monotone: Option<bool>,
    pub elapsed_secs: f64,
    #[serde(skip)]
    pub samples: Vec<SampleOutcome>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// The report with timing cleared, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            elapsed_secs: 0.0,
            ..self.clone()
        }
    }
}

/// Runs every applicable check on each sample of `spec`.
///
/// Samples are evaluated independently (in parallel when `threads > 1`) and
/// merged in index order, so the report does not depend on the thread count.
pub fn run_verification(spec: &SampleSpec, options: &VerifyOptions) -> Result<RunReport> {
    spec.validate()?;
    let started = Instant::now();
    let tol = options.tolerances;
    let evaluate = |index: u64| -> Result<SampleOutcome> {
        let (sample, mut rng) = sample_with_rng(spec, index)?;
        evaluate_sample(spec.kind, &sample, &mut rng, &tol)
    };
    let outcomes: Vec<SampleOutcome> = if options.threads <= 1 {
        (0..spec.count).map(evaluate).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| Error::InvalidSpec(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..spec.count)
                .into_par_iter()
                .map(evaluate)
                .collect::<Result<_>>()
        })?
    };
    let mut report = merge(spec, tol, outcomes);
    report.elapsed_secs = started.elapsed().as_secs_f64();
    Ok(report)
}

fn merge(spec: &SampleSpec, tolerances: Tolerances, samples: Vec<SampleOutcome>) -> RunReport {
    let mut pass_counts: BTreeMap<Check, u64> = Check::ALL
        .into_iter()
        .filter(|c| c.applies_to(spec.kind))
        .map(|c| (c, 0))
        .collect();
    let mut failures = Vec::new();
    let mut extremes = Extremes::default();
    let mut buckets: BTreeMap<u32, (u64, f64, f64)> = BTreeMap::new();
    for outcome in &samples {
        for c in &outcome.checks {
            if c.pass {
                *pass_counts.entry(c.check).or_default() += 1;
            } else {
                failures.push(Failure {
                    index: outcome.index,
                    check: c.check,
                    value: c.value,
                    threshold: c.threshold,
                    points: outcome.points.clone(),
                });
            }
        }
        extremes.absorb(outcome);
        if let Some(k) = outcome.perturbation_exponent {
            let dev = (outcome.margin_c2).abs();
            let entry = buckets.entry(k).or_insert((0, 0.0, 0.0));
            entry.0 += 1;
            entry.1 = entry.1.max(dev);
            entry.2 += dev;
        }
    }
    let trend: Vec<TrendRow> = buckets
        .into_iter()
        .map(|(exponent, (n, max, sum))| TrendRow {
            exponent,
            samples: n,
            max_abs_d_minus_one: max,
            mean_abs_d_minus_one: sum / n as f64,
        })
        .collect();
    let trend_monotone = (!trend.is_empty()).then(|| {
        trend
            .windows(2)
            .all(|w| w[1].mean_abs_d_minus_one <= w[0].mean_abs_d_minus_one + 1e-12)
    });
    RunReport {
        spec: *spec,
        tolerances,
        pass_counts,
        failures,
        extremes,
        trend,
        trend_monotone,
        elapsed_secs: 0.0,
        samples,
    }
}

fn relative_change(moved: Complex64, reference: Complex64) -> f64 {
    (moved - reference).norm() / reference.norm()
}

pub fn evaluate_sample(
    kind: SampleKind,
    sample: &Sample,
    rng: &mut impl Rng,
    tol: &Tolerances,
) -> Result<SampleOutcome> {
    let config = &sample.config;
    let planar = config.is_coplanar();
    let result = atiyah_determinant(config)?;
    let c1 = c1_verdict(&result);
    let c2 = c2_verdict(&result, planar, tol.c2);
    let c3 = c3_verdict(config, &result, planar, tol.c3)?;

    let mut checks = vec![
        CheckResult::at_least(Check::C1, c1.margin, C1_FLOOR),
        CheckResult::at_least(Check::C2, c2.tested_value(), 1.0 - tol.c2),
        CheckResult {
            check: Check::C3,
            value: c3.margin(),
            threshold: -tol.c3,
            pass: c3.pass,
        },
    ];

    let mut quad_metrics = None;
    if let Some(quad) = &sample.quad {
        let dec = decomposed_at(quad)?;
        let t1 = compare_routes(quad, result.at, &dec, tol.identity_rel);
        let ang = &dec.angular;
        let angles = &dec.angles;
        let diameter6 = quad.diameter().powi(6);
        let e_sum = dec.edges.signed_sum();

        let mut identity_residual = triangle_identity_residuals(angles)
            .iter()
            .fold(0.0_f64, |m, r| m.max(r.abs()));
        identity_residual = identity_residual.max((ang.s1 - 4.0 - 4.0 * ang.sin_half_sum).abs());

        let cross_check = (0..4)
            .map(|shift| {
                let (sine, magnitude) = side_sine_form(quad, angles, shift);
                (sine - side_area_form(&dec.edges, shift)).abs() / magnitude
            })
            .fold(0.0_f64, f64::max);

        checks.extend([
            CheckResult::at_most(Check::Theorem1, t1.rel_error, tol.identity_rel),
            CheckResult::at_least(Check::Corollary1, ang.s1 - 4.0, -tol.inequality_slack),
            CheckResult::at_least(
                Check::Corollary2,
                8.0 * ang.s1 + 2.0 * ang.s2 - 40.0,
                -tol.inequality_slack,
            ),
            CheckResult::at_most(
                Check::HalfAngleIdentity,
                identity_residual,
                tol.inequality_slack,
            ),
            CheckResult::at_least(Check::EdgeSum, e_sum / diameter6, -tol.inequality_slack),
            CheckResult::at_most(Check::SineAreaCrossCheck, cross_check, tol.identity_rel),
            CheckResult::at_least(
                Check::AngularFloor,
                dec.standard.at_ang / 64.0 - 1.0,
                -tol.c2,
            ),
        ]);
        quad_metrics = Some(QuadMetrics {
            at_ang: dec.standard.at_ang,
            s1: ang.s1,
            s2: ang.s2,
            e_sum,
            e_sum_normalized: e_sum / diameter6,
            theorem1_rel_error: t1.rel_error,
            ill_conditioned: t1.ill_conditioned,
        });
    }

    let rotation = random_rotation(rng);
    let offset = uniform_ball(rng, config.diameter());
    let rotated = apply_motion(config, &Motion::Rotation(rotation))?;
    let moved = apply_motion(
        &rotated,
        &Motion::Translation {
            a: offset[0],
            z: Complex64::new(offset[1], offset[2]),
        },
    )?;
    let moved_at = atiyah_determinant(&moved)?.at;
    checks.push(CheckResult::at_most(
        Check::RigidMotion,
        relative_change(moved_at, result.at),
        tol.invariance_rel,
    ));
    checks.sort_by_key(|c| c.check);

    Ok(SampleOutcome {
        index: sample.index,
        kind,
        points: config.points().iter().map(Point::xyz).collect(),
        d_re: c2.d_re,
        d_im: c2.d_im,
        d_abs: c2.d_abs,
        planar,
        margin_c2: c2.margin(),
        margin_c3: c3.margin(),
        quad: quad_metrics,
        perturbation_exponent: sample.perturbation_exponent,
        checks,
    })
}
