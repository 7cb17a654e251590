//! Dense complex determinant by LU elimination with partial pivoting.

use num_complex::Complex64;

/// Determinant of a square matrix given as rows.
///
/// Pivots on the largest modulus in each column; a zero pivot column makes
/// the determinant exactly zero.
pub fn determinant(rows: &[Vec<Complex64>]) -> Complex64 {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    let mut m: Vec<Vec<Complex64>> = rows.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let (pivot_row, pivot_norm) =
            (col..n)
                .map(|r| (r, m[r][col].norm_sqr()))
                .fold(
                    (col, -1.0),
                    |best, cand| if cand.1 > best.1 { cand } else { best },
                );
        if pivot_norm == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col];
        det *= pivot;
        for r in col + 1..n {
            let factor = m[r][col] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in col + 1..n {
                let delta = factor * m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Permutation expansion, usable only for small n.
    fn leibniz(rows: &[Vec<Complex64>]) -> Complex64 {
        fn go(rows: &[Vec<Complex64>], row: usize, used: &mut Vec<bool>, sign: f64) -> Complex64 {
            let n = rows.len();
            if row == n {
                return c(sign, 0.0);
            }
            let mut total = c(0.0, 0.0);
            let mut inversions_before = 0;
            for col in 0..n {
                if used[col] {
                    continue;
                }
                // parity of columns still free to the left of `col`
                let s = if inversions_before % 2 == 0 {
                    sign
                } else {
                    -sign
                };
                used[col] = true;
                total += rows[row][col] * go(rows, row + 1, used, s);
                used[col] = false;
                inversions_before += 1;
            }
            total
        }
        go(rows, 0, &mut vec![false; rows.len()], 1.0)
    }

    #[test]
    fn small_known_values() {
        assert_eq!(determinant(&[vec![c(2.0, 1.0)]]), c(2.0, 1.0));
        let m = vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(3.0, 0.0), c(4.0, 0.0)],
        ];
        assert!((determinant(&m) - c(-2.0, 0.0)).norm() < 1e-15);
        let singular = vec![
            vec![c(1.0, 1.0), c(2.0, 2.0)],
            vec![c(1.0, 1.0), c(2.0, 2.0)],
        ];
        assert_eq!(determinant(&singular).norm(), 0.0);
    }

    #[test]
    fn matches_leibniz_expansion() {
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in 1..=6 {
            let m: Vec<Vec<Complex64>> = (0..n)
                .map(|_| (0..n).map(|_| c(next(), next())).collect())
                .collect();
            let lu = determinant(&m);
            let exact = leibniz(&m);
            assert!((lu - exact).norm() <= 1e-13 * (1.0 + exact.norm()), "n={n}");
        }
    }
}
