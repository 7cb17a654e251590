//! Atiyah determinants of small point configurations in R³.
//!
//! - [`geometry`]: points, pair frames, rigid motions, convex quadrilaterals
//!   and their angles.
//! - [`atiyah`]: Hopf lifts, the Atiyah matrix and determinant, and the
//!   C1/C2/C3 predicates.
//! - [`quad`]: the planar four-point decomposition into angle sums and
//!   area-based edge terms.
//! - [`sampler`]: seeded generators, verification sweeps and a simplex search.
//! - [`fixtures`]: named reference configurations.

pub mod atiyah;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod linalg;
pub mod quad;
pub mod sampler;

pub use atiyah::{atiyah_determinant, check_c1, check_c2, check_c3, AtiyahResult, Spinor};
pub use error::{Error, Result};
pub use geometry::{
    apply_motion, canonicalize_quad, quad_angles, Configuration, Motion, PlanarQuad, Point,
    QuadAngles,
};
pub use num_complex::Complex64;
pub use quad::{decomposed_at, edge_terms, verify_theorem1, Decomposition};
