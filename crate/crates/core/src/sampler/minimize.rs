//! Nelder–Mead search for convex quadrilaterals with small `D` (or `At_ang`).
//!
//! The search runs in the similarity-reduced space `z1 = 0, z2 = 1` with the
//! remaining vertices `z3, z4` as four real parameters. Points outside strict
//! convex position score `+∞`.

use num_complex::Complex64;
use serde::Serialize;

use super::sample::{sample_one, SampleKind, SampleSpec};
use crate::atiyah::atiyah_determinant;
use crate::error::{Error, Result};
use crate::geometry::PlanarQuad;
use crate::quad::decomposed_at;

/// Relative slack below the conjectured floor that counts as a breach.
pub const FLOOR_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// `Re D = Re At / ∏ 2 r_jk`; conjectured floor 1.
    NormalizedDeterminant,
    /// `At_ang = At / ∏ r_jk` from the decomposition; conjectured floor 64.
    AngularPart,
}

impl Objective {
    pub fn floor(self) -> f64 {
        match self {
            Objective::NormalizedDeterminant => 1.0,
            Objective::AngularPart => 64.0,
        }
    }

    /// Values below this are reported as a breach.
    pub fn breach_threshold(self) -> f64 {
        self.floor() * (1.0 - FLOOR_SLACK)
    }

    pub fn evaluate(self, quad: &PlanarQuad) -> Result<f64> {
        match self {
            Objective::NormalizedDeterminant => Ok(atiyah_determinant(&quad.to_configuration())?
                .d_normalized
                .re),
            Objective::AngularPart => Ok(decomposed_at(quad)?.standard.at_ang),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimplexCoefficients {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
}

impl Default for SimplexCoefficients {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StartPoint {
    Quad(PlanarQuad),
    /// First convex-quad sample of the given seed.
    Seed(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeSpec {
    pub objective: Objective,
    pub start: StartPoint,
    pub max_iterations: usize,
    /// Stop once the simplex values spread less than `tolerance × |best|`.
    pub tolerance: f64,
    pub coefficients: SimplexCoefficients,
    /// Edge length of the initial simplex in reduced coordinates.
    pub initial_step: f64,
}

impl MinimizeSpec {
    pub fn new(objective: Objective, start: StartPoint) -> Self {
        Self {
            objective,
            start,
            max_iterations: 2000,
            tolerance: 1e-12,
            coefficients: SimplexCoefficients::default(),
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub best: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeOutcome {
    pub best_quad: PlanarQuad,
    pub best_value: f64,
    pub start_value: f64,
    /// Best value before iteration 1 (row 0) and after each iteration.
    pub trace: Vec<TraceRow>,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// `best_value` fell below `objective.breach_threshold()`.
    pub breach: bool,
}

/// Maps a quadrilateral to reduced coordinates `(z3, z4)` after sending
/// `z1 ↦ 0`, `z2 ↦ 1` by an orientation-preserving similarity.
pub fn reduce(quad: &PlanarQuad) -> [f64; 4] {
    let z = quad.vertices();
    let w = |p: Complex64| (p - z[0]) / (z[1] - z[0]);
    let (z3, z4) = (w(z[2]), w(z[3]));
    [z3.re, z3.im, z4.re, z4.im]
}

pub fn expand(params: &[f64; 4]) -> Result<PlanarQuad> {
    PlanarQuad::new([
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(params[0], params[1]),
        Complex64::new(params[2], params[3]),
    ])
}

struct Problem {
    objective: Objective,
    evaluations: usize,
}

impl Problem {
    fn value(&mut self, params: &[f64; 4]) -> f64 {
        self.evaluations += 1;
        match expand(params) {
            Ok(quad) => self.objective.evaluate(&quad).unwrap_or(f64::INFINITY),
            Err(_) => f64::INFINITY,
        }
    }
}

fn lerp(from: &[f64; 4], to: &[f64; 4], t: f64) -> [f64; 4] {
    std::array::from_fn(|i| from[i] + t * (to[i] - from[i]))
}

pub fn minimize_d(spec: &MinimizeSpec) -> Result<MinimizeOutcome> {
    let start_quad = match spec.start {
        StartPoint::Quad(q) => q,
        StartPoint::Seed(seed) => sample_one(&SampleSpec::new(SampleKind::ConvexQuad, 1, seed), 0)?
            .quad
            .expect("convex-quad samples carry a quad"),
    };
    let start = reduce(&start_quad);
    expand(&start).map_err(|e| Error::InfeasibleStart(e.to_string()))?;
    let mut problem = Problem {
        objective: spec.objective,
        evaluations: 0,
    };
    let start_value = problem.value(&start);
    if !start_value.is_finite() {
        return Err(Error::InfeasibleStart(
            "objective is not finite at the start".into(),
        ));
    }
    if spec.max_iterations == 0 {
        return Ok(MinimizeOutcome {
            best_quad: expand(&start)?,
            best_value: start_value,
            start_value,
            trace: vec![TraceRow {
                iteration: 0,
                best: start_value,
            }],
            iterations: 0,
            evaluations: problem.evaluations,
            converged: false,
            breach: start_value < spec.objective.breach_threshold(),
        });
    }

    let SimplexCoefficients {
        reflection,
        expansion,
        contraction,
        shrink,
    } = spec.coefficients;
    let mut simplex: Vec<([f64; 4], f64)> = vec![(start, start_value)];
    for axis in 0..4 {
        let mut step = spec.initial_step;
        let mut vertex = (start, f64::INFINITY);
        // Prefer a feasible vertex; fall back to an infeasible one after a few halvings.
        for attempt in 0..16 {
            let mut p = start;
            p[axis] += if attempt % 2 == 0 { step } else { -step };
            let f = problem.value(&p);
            vertex = (p, f);
            if f.is_finite() {
                break;
            }
            if attempt % 2 == 1 {
                step *= 0.5;
            }
        }
        simplex.push(vertex);
    }

    let mut trace = vec![TraceRow {
        iteration: 0,
        best: start_value,
    }];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < spec.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[4].1;
        if worst.is_finite() && worst - best <= spec.tolerance * best.abs().max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: [f64; 4] =
            std::array::from_fn(|i| simplex[..4].iter().map(|(p, _)| p[i]).sum::<f64>() / 4.0);
        let worst_point = simplex[4].0;
        let reflected = lerp(&centroid, &worst_point, -reflection);
        let f_reflected = problem.value(&reflected);

        if f_reflected < simplex[0].1 {
            let expanded = lerp(&centroid, &reflected, expansion);
            let f_expanded = problem.value(&expanded);
            simplex[4] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
        } else if f_reflected < simplex[3].1 {
            simplex[4] = (reflected, f_reflected);
        } else {
            let (candidate, reference) = if f_reflected < worst {
                (lerp(&centroid, &reflected, contraction), f_reflected)
            } else {
                (lerp(&centroid, &worst_point, contraction), worst)
            };
            let f_candidate = problem.value(&candidate);
            if f_candidate < reference {
                simplex[4] = (candidate, f_candidate);
            } else {
                let anchor = simplex[0].0;
                for vertex in simplex.iter_mut().skip(1) {
                    let p = lerp(&anchor, &vertex.0, shrink);
                    *vertex = (p, problem.value(&p));
                }
            }
        }
        let best_now = simplex.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
        trace.push(TraceRow {
            iteration: iterations,
            best: best_now,
        });
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (best_params, best_value) = simplex[0];
    let best_quad =
        expand(&best_params).expect("the best vertex has a finite objective, so it is feasible");
    Ok(MinimizeOutcome {
        best_quad,
        best_value,
        start_value,
        trace,
        iterations,
        evaluations: problem.evaluations,
        converged,
        breach: best_value < spec.objective.breach_threshold(),
    })
}
