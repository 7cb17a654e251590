//! Reference configurations with known determinants.

use std::str::FromStr;

use num_complex::Complex64;

use crate::error::Error;
use crate::geometry::{Configuration, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    Square,
    Collinear3,
    Collinear4,
    Equilateral,
    Figure1,
}

impl Fixture {
    pub const ALL: [Fixture; 5] = [
        Fixture::Square,
        Fixture::Collinear3,
        Fixture::Collinear4,
        Fixture::Equilateral,
        Fixture::Figure1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Square => "square",
            Fixture::Collinear3 => "collinear3",
            Fixture::Collinear4 => "collinear4",
            Fixture::Equilateral => "equilateral",
            Fixture::Figure1 => "figure1",
        }
    }

    /// Points as `(a, Re z, Im z)`.
    pub fn coordinates(self) -> Vec<[f64; 3]> {
        match self {
            Fixture::Square => vec![
                [0.0, 0.0, 1.0],
                [0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, 1.0, 1.0],
            ],
            Fixture::Collinear3 => vec![[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 2.0, 0.0]],
            Fixture::Collinear4 => {
                vec![
                    [0.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0],
                    [0.0, 2.0, 0.0],
                    [0.0, 3.0, 0.0],
                ]
            }
            Fixture::Equilateral => vec![
                [0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, 0.5, 3f64.sqrt() / 2.0],
            ],
            Fixture::Figure1 => {
                vec![
                    [0.0, 1.0, -1.32],
                    [0.0, -0.5, -2.0],
                    [0.0, 1.0, -4.0],
                    [0.0, 2.5, -2.0],
                ]
            }
        }
    }

    pub fn configuration(self) -> Configuration {
        Configuration::new(
            self.coordinates()
                .into_iter()
                .map(Point::from_xyz)
                .collect(),
        )
        .expect("fixtures are valid configurations")
    }

    /// Planar parts of the points.
    pub fn planar_points(self) -> Vec<Complex64> {
        self.coordinates()
            .iter()
            .map(|p| Complex64::new(p[1], p[2]))
            .collect()
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Fixture::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown fixture `{s}`")))
    }
}
