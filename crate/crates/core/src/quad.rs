//! Four planar points in convex position.
//!
//! For a convex counterclockwise quadrilateral the Atiyah determinant
//! factors as `At = P · At_ang`, with `P` the product of the six pairwise
//! distances. Expanding the angular part over its 24 permutation terms and
//! collecting cosines gives
//!
//! ```text
//! At_ang = 24 + 8·S1 + 2·S2 + E
//! ```
//!
//! where `S1` sums the cosines of all twelve angles, `S2` pairs each vertex
//! with its opposite triangle, and `P·E = 8·(E12 + E23 + E34 + E14 − E13 − E24)`
//! in terms of the triangle-area edge terms `E_jk`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::atiyah::atiyah_determinant;
use crate::error::Result;
use crate::geometry::{quad_angles, PlanarQuad, QuadAngles, Sides};

/// Coefficient of the signed edge-term sum in `At`.
///
/// Every sine product arises from a permutation term and from its conjugate
/// partner, so each side's sine group enters twice.
pub const EDGE_WEIGHT: f64 = 8.0;

/// Quadrilaterals whose shortest pair distance falls below this fraction of
/// the diameter are flagged as ill-conditioned.
pub const CONDITIONING_RATIO: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardForm {
    /// `r12 r13 r14 r23 r24 r34`
    pub p_scalar: f64,
    /// `At / P`
    pub at_ang: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularTerms {
    pub s1: f64,
    pub s2: f64,
    pub e_dimensionless: f64,
    /// `Σ_j sin(α_{j+1}/2) sin(γ_{j+2}/2) sin(β_{j+3}/2)`
    pub sin_half_sum: f64,
}

/// Six area-based edge terms and the four triangle areas they use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeTerms {
    pub e12: f64,
    pub e23: f64,
    pub e34: f64,
    pub e14: f64,
    pub e13: f64,
    pub e24: f64,
    pub a123: f64,
    pub a124: f64,
    pub a134: f64,
    pub a234: f64,
}

impl EdgeTerms {
    /// `E12 + E23 + E34 + E14 − E13 − E24`
    pub fn signed_sum(&self) -> f64 {
        self.e12 + self.e23 + self.e34 + self.e14 - self.e13 - self.e24
    }
}

pub fn s1(angles: &QuadAngles) -> f64 {
    (0..4).map(|j| angles.vertex_cos_sum(j)).sum()
}

pub fn s2(angles: &QuadAngles) -> f64 {
    (0..4)
        .map(|j| angles.vertex_cos_sum(j) * angles.triangle_cos_sum(j))
        .sum()
}

pub fn sin_half_sum(angles: &QuadAngles) -> f64 {
    (0..4).map(|j| angles.sin_half_product(j)).sum()
}

/// `40 + 8 Σ_j (5 + cos α_j + cos β_j + cos γ_j) · sin-half product of the
/// opposite triangle`, which equals `8·S1 + 2·S2`.
pub fn corollary2_closed_form(angles: &QuadAngles) -> f64 {
    40.0 + 8.0
        * (0..4)
            .map(|j| (5.0 + angles.vertex_cos_sum(j)) * angles.sin_half_product(j))
            .sum::<f64>()
}

/// `cos a + cos b + cos c − 1 − 4 sin(a/2) sin(b/2) sin(c/2)`, zero whenever
/// `a + b + c = π`.
pub fn half_angle_identity_residual(a: f64, b: f64, c: f64) -> f64 {
    a.cos() + b.cos() + c.cos() - 1.0 - 4.0 * (0.5 * a).sin() * (0.5 * b).sin() * (0.5 * c).sin()
}

pub fn edge_terms(quad: &PlanarQuad) -> EdgeTerms {
    let Sides { a, b, c, d, e, f } = quad.sides();
    let a123 = quad.area(0, 1, 2);
    let a124 = quad.area(0, 1, 3);
    let a134 = quad.area(0, 2, 3);
    let a234 = quad.area(1, 2, 3);
    EdgeTerms {
        e12: a123 * a124 * f * (a + b + e + d - 2.0 * c),
        e23: a123 * a234 * d * (c + b + e + f - 2.0 * a),
        e34: a134 * a234 * c * (a + e + d + b - 2.0 * f),
        e14: a124 * a134 * a * (c + e + b + f - 2.0 * d),
        e13: a123 * a134 * e * (a + c + d + f - 2.0 * b),
        e24: a124 * a234 * b * (c + d + f + a - 2.0 * e),
        a123,
        a124,
        a134,
        a234,
    }
}

/// Sine-product form of the edge term for the side `z_{3+s} z_{4+s}`
/// (1-based), i.e. `P·(sinβ₁sinβ₄ + sinβ₁sinγ₃ + sinα₂sinα₃ + sinα₂sinγ₄
/// − 2 sinα₂sinβ₁)/4` with all indices shifted by `s`.
///
/// Returns the value together with the sum of the magnitudes of its terms.
pub fn side_sine_form(quad: &PlanarQuad, angles: &QuadAngles, shift: usize) -> (f64, f64) {
    let al = |j: usize| angles.alpha[(j + shift) % 4].sin();
    let be = |j: usize| angles.beta[(j + shift) % 4].sin();
    let ga = |j: usize| angles.gamma[(j + shift) % 4].sin();
    let terms = [
        be(0) * be(3),
        be(0) * ga(2),
        al(1) * al(2),
        al(1) * ga(3),
        -2.0 * al(1) * be(0),
    ];
    let p = quad.sides().product();
    (
        0.25 * p * terms.iter().sum::<f64>(),
        0.25 * p * terms.iter().map(|t| t.abs()).sum::<f64>(),
    )
}

/// Area-form edge term for the side `z_{3+s} z_{4+s}` (1-based).
pub fn side_area_form(edges: &EdgeTerms, shift: usize) -> f64 {
    match shift % 4 {
        0 => edges.e34,
        1 => edges.e14,
        2 => edges.e12,
        _ => edges.e23,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub standard: StandardForm,
    pub angular: AngularTerms,
    pub edges: EdgeTerms,
    /// `P·(24 + 8·S1 + 2·S2) + 8·(signed edge sum)`
    pub at: f64,
    pub angles: QuadAngles,
}

pub fn decomposed_at(quad: &PlanarQuad) -> Result<Decomposition> {
    let angles = quad_angles(quad)?;
    let edges = edge_terms(quad);
    let p_scalar = quad.sides().product();
    let s1 = s1(&angles);
    let s2 = s2(&angles);
    let signed = edges.signed_sum();
    let e_dimensionless = EDGE_WEIGHT * signed / p_scalar;
    let at = p_scalar * (24.0 + 8.0 * s1 + 2.0 * s2) + EDGE_WEIGHT * signed;
    Ok(Decomposition {
        standard: StandardForm {
            p_scalar,
            at_ang: 24.0 + 8.0 * s1 + 2.0 * s2 + e_dimensionless,
        },
        angular: AngularTerms {
            s1,
            s2,
            e_dimensionless,
            sin_half_sum: sin_half_sum(&angles),
        },
        edges,
        at,
        angles,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Report {
    pub at_direct: Complex64,
    pub at_decomposed: f64,
    /// `|direct − decomposed| / max(|direct|, P)`
    pub rel_error: f64,
    pub pass: bool,
    /// Shortest pair distance below `CONDITIONING_RATIO × diameter`.
    pub ill_conditioned: bool,
}

/// Compares the determinant with its angle/area decomposition.
pub fn verify_theorem1(quad: &PlanarQuad, tol: f64) -> Result<Theorem1Report> {
    let direct = atiyah_determinant(&quad.to_configuration())?;
    let decomposition = decomposed_at(quad)?;
    Ok(compare_routes(quad, direct.at, &decomposition, tol))
}

pub fn compare_routes(
    quad: &PlanarQuad,
    at_direct: Complex64,
    decomposition: &Decomposition,
    tol: f64,
) -> Theorem1Report {
    let scale = at_direct.norm().max(decomposition.standard.p_scalar);
    let rel_error = (at_direct - decomposition.at).norm() / scale;
    Theorem1Report {
        at_direct,
        at_decomposed: decomposition.at,
        rel_error,
        pass: rel_error <= tol,
        ill_conditioned: quad.min_side() < CONDITIONING_RATIO * quad.diameter(),
    }
}

/// Angular 4×4 matrix (row `i`, column `k`: the `i`-th elementary symmetric
/// polynomial in `ū_kj`, `j ≠ k`) and its prefactor `∏_{j<k} u_jk`.
pub fn angular_matrix(quad: &PlanarQuad) -> ([[Complex64; 4]; 4], Complex64) {
    let z = quad.vertices();
    let u = |j: usize, k: usize| {
        let w = z[k] - z[j];
        w / w.norm()
    };
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for k in 0..4 {
        let others: Vec<Complex64> = (0..4).filter(|&j| j != k).map(|j| u(k, j).conj()).collect();
        let (p, q, r) = (others[0], others[1], others[2]);
        m[0][k] = Complex64::new(1.0, 0.0);
        m[1][k] = p + q + r;
        m[2][k] = p * q + p * r + q * r;
        m[3][k] = p * q * r;
    }
    let mut prefactor = Complex64::new(1.0, 0.0);
    for j in 0..4 {
        for k in j + 1..4 {
            prefactor *= u(j, k);
        }
    }
    (m, prefactor)
}

/// One signed term of the angular determinant.
///
/// `perm` is in one-line notation over rows: the term multiplies the entries
/// at `(row, perm[row])`. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermutationTerm {
    pub perm: [usize; 4],
    pub sign: i8,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PermutationExpansion {
    pub terms: Vec<PermutationTerm>,
}

impl PermutationExpansion {
    pub fn sum(&self) -> Complex64 {
        self.terms.iter().map(|t| t.value).sum()
    }

    pub fn term(&self, perm: [usize; 4]) -> Option<&PermutationTerm> {
        self.terms.iter().find(|t| t.perm == perm)
    }

    /// Largest `|term(σ) − conj(term(reverse σ))|`.
    pub fn max_conjugate_pair_defect(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let mut rev = t.perm;
                rev.reverse();
                let partner = self.term(rev).expect("every permutation is present");
                (t.value - partner.value.conj()).norm()
            })
            .fold(0.0, f64::max)
    }
}

fn permutations4() -> Vec<([usize; 4], i8)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        let inversions = (0..4)
                            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                            .filter(|&(i, j)| p[i] > p[j])
                            .count();
                        out.push((p, if inversions % 2 == 0 { 1 } else { -1 }));
                    }
                }
            }
        }
    }
    out
}

pub fn permutation_expansion(quad: &PlanarQuad) -> PermutationExpansion {
    let (m, prefactor) = angular_matrix(quad);
    let terms = permutations4()
        .into_iter()
        .map(|(perm, sign)| {
            let product: Complex64 = (0..4).map(|row| m[row][perm[row]]).product();
            PermutationTerm {
                perm,
                sign,
                value: prefactor * product * f64::from(sign),
            }
        })
        .collect();
    PermutationExpansion { terms }
}

/// `cos(γ₂+γ₃) + cos(α₃−α₁)` (1-based), one of the cancelling quadratic pairs.
pub fn exemplar_cancellation(angles: &QuadAngles) -> f64 {
    (angles.gamma[1] + angles.gamma[2]).cos() + (angles.alpha[2] - angles.alpha[0]).cos()
}

/// Residuals of the half-angle identity on the four triangles.
pub fn triangle_identity_residuals(angles: &QuadAngles) -> [f64; 4] {
    std::array::from_fn(|j| {
        let [x, y, z] = angles.opposite_triangle(j);
        half_angle_identity_residual(x, y, z)
    })
}

/// Area-additivity defect `|A123 + A134 − A124 − A234|`.
pub fn area_additivity_defect(edges: &EdgeTerms) -> f64 {
    (edges.a123 + edges.a134 - edges.a124 - edges.a234).abs()
}

/// `2π − Σγ`, zero for any convex quadrilateral.
pub fn angle_sum_defect(angles: &QuadAngles) -> f64 {
    2.0 * PI - angles.gamma.iter().sum::<f64>()
}
