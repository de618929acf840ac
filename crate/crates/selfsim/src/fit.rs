//! Small dense linear least squares used by the asymptotic tail fits.
//! Normal equations with column scaling and partial pivoting; adequate for
//! the 2- and 3-parameter regressions this crate performs.

use crate::error::{Result, SimError};

/// Solve min ||X c - y||_2 for tall X given as rows. Returns the
/// coefficient vector, one entry per column of X.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let n = rows.len();
    if n == 0 || n != y.len() {
        return Err(SimError::FitFailure(format!(
            "inconsistent design: {n} rows vs {} responses",
            y.len()
        )));
    }
    let m = rows[0].len();
    if m == 0 || n < m {
        return Err(SimError::FitFailure(format!("need at least {m} rows, got {n}")));
    }
    if rows.iter().any(|r| r.len() != m) {
        return Err(SimError::FitFailure("ragged design matrix".into()));
    }

    // Scale columns to unit RMS to keep the normal equations well behaved.
    let mut scale = vec![0.0f64; m];
    for r in rows {
        for (j, v) in r.iter().enumerate() {
            scale[j] += v * v;
        }
    }
    for s in &mut scale {
        *s = (*s / n as f64).sqrt();
        if *s == 0.0 {
            *s = 1.0;
        }
    }

    // Normal equations A c = b in scaled coordinates.
    let mut a = vec![vec![0.0f64; m]; m];
    let mut b = vec![0.0f64; m];
    for (r, &yi) in rows.iter().zip(y) {
        for j in 0..m {
            let xj = r[j] / scale[j];
            b[j] += xj * yi;
            for k in j..m {
                a[j][k] += xj * r[k] / scale[k];
            }
        }
    }
    for j in 0..m {
        for k in 0..j {
            a[j][k] = a[k][j];
        }
    }

    let c = solve_dense(&mut a, &mut b)?;
    Ok(c.iter().zip(&scale).map(|(ci, si)| ci / si).collect())
}

/// Gaussian elimination with partial pivoting on a small square system.
fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<Vec<f64>> {
    let m = b.len();
    for col in 0..m {
        let piv = (col..m)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[piv][col].abs() < 1e-300 {
            return Err(SimError::FitFailure("singular normal equations".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            for k in col..m {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0f64; m];
    for col in (0..m).rev() {
        let mut acc = b[col];
        for k in col + 1..m {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Ok(x)
}

/// Slope and intercept of the ordinary regression y = a + b x.
pub fn slope_intercept(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let rows: Vec<Vec<f64>> = x.iter().map(|&xi| vec![1.0, xi]).collect();
    let c = least_squares(&rows, y)?;
    Ok((c[1], c[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn recovers_exact_linear_model() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 * 0.3).collect();
        let y: Vec<f64> = x.iter().map(|&xi| 2.5 - 0.75 * xi).collect();
        let (slope, intercept) = slope_intercept(&x, &y).unwrap();
        assert_relative_eq!(slope, -0.75, epsilon = 1e-12);
        assert_relative_eq!(intercept, 2.5, epsilon = 1e-12);
    }

    #[test]
    fn recovers_three_parameter_model() {
        // y = 1.2 + 0.9 u - 0.4 v on a deterministic cloud.
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..50 {
            let u = (i as f64 * 0.17).sin() * 3.0;
            let v = (i as f64 * 0.05) + 1.0;
            rows.push(vec![1.0, u, v]);
            y.push(1.2 + 0.9 * u - 0.4 * v);
        }
        let c = least_squares(&rows, &y).unwrap();
        assert_relative_eq!(c[0], 1.2, epsilon = 1e-10);
        assert_relative_eq!(c[1], 0.9, epsilon = 1e-10);
        assert_relative_eq!(c[2], -0.4, epsilon = 1e-10);
    }

    #[test]
    fn least_squares_projects_noise() {
        // Noise orthogonal to both basis columns: fit recovers y = x exactly.
        let x = vec![0.0, 1.0, 2.0, 3.0];
        let y = vec![0.1, 0.9, 1.9, 3.1];
        let (slope, intercept) = slope_intercept(&x, &y).unwrap();
        assert_relative_eq!(slope, 1.0, epsilon = 1e-12);
        assert_relative_eq!(intercept, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(least_squares(&[], &[]).is_err());
        assert!(least_squares(&[vec![1.0, 2.0]], &[1.0]).is_err());
        let rows = vec![vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]];
        assert!(least_squares(&rows, &[1.0, 2.0, 3.0]).is_err());
    }
}
