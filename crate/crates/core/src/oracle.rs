//! Independent reference kernels.
//!
//! Nothing here shares code with [`crate::eigen`] or the pipeline; these
//! routines exist so the verification suite can compare two routes to the
//! same number. They favor obviousness over speed.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and column eigenvectors from the cyclic Jacobi
/// rotation method.
#[derive(Debug, Clone)]
pub struct DenseEigen {
    values: Vec<f64>,
    vectors: Array2<f64>,
}

impl DenseEigen {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &Array2<f64> {
        &self.vectors
    }
}

/// Cyclic Jacobi eigensolver for a dense real symmetric matrix.
pub fn jacobi_eigen(a: &Array2<f64>) -> Result<DenseEigen> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.ncols(),
        });
    }
    let mut a = a.clone();
    let mut v = Array2::<f64>::eye(n);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[[p, q]] * a[[p, q]])
            .sum();
        let diag: f64 = (0..n).map(|p| a[[p, p]] * a[[p, p]]).sum();
        if off == 0.0 || off.sqrt() <= 1e-18 * diag.sqrt().max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Numerical("Jacobi oracle did not converge".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[[x, x]].total_cmp(&a[[y, y]]));
    let values = order.iter().map(|&k| a[[k, k]]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        vectors.column_mut(dst).assign(&v.column(src));
    }
    Ok(DenseEigen { values, vectors })
}

fn factorial(k: i64) -> f64 {
    (1..=k).fold(1.0, |acc, x| acc * x as f64)
}

/// Wigner small-d element `d^j_{m' m}(beta)` from the binomial-sum formula.
///
/// Spins are passed doubled (`two_j = 2j`, etc.) so half-integers stay exact.
/// Factorials are evaluated in `f64`, which is fine up to `j` of a few dozen.
pub fn wigner_small_d(two_j: i64, two_mp: i64, two_m: i64, beta: f64) -> f64 {
    // All of j±m, j±m' are integers.
    let jpm = (two_j + two_m) / 2;
    let jmm = (two_j - two_m) / 2;
    let jpmp = (two_j + two_mp) / 2;
    let jmmp = (two_j - two_mp) / 2;
    let mp_minus_m = (two_mp - two_m) / 2;
    let pre = (factorial(jpm) * factorial(jmm) * factorial(jpmp) * factorial(jmmp)).sqrt();
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let k_min = 0.max(-mp_minus_m);
    let k_max = jpm.min(jmmp);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let denom =
            factorial(jpm - k) * factorial(k) * factorial(jmmp - k) * factorial(k + mp_minus_m);
        let sign = if (k + mp_minus_m) % 2 == 0 { 1.0 } else { -1.0 };
        let cos_pow = two_j - 2 * k - mp_minus_m;
        let sin_pow = 2 * k + mp_minus_m;
        sum += sign * c.powi(cos_pow as i32) * s.powi(sin_pow as i32) / denom;
    }
    pre * sum
}

/// `exp(-i angle Sx)` in the basis where index `i` has `m = i - N/2`, from
/// `exp(-i a Sx) = exp(i pi/2 Sz) exp(-i a Sy) exp(-i pi/2 Sz)` and the
/// closed-form small-d matrix.
pub fn rotation_about_x_wigner(n: usize, angle: f64) -> Array2<Complex64> {
    let two_j = n as i64;
    Array2::from_shape_fn((n + 1, n + 1), |(row, col)| {
        let two_mp = 2 * row as i64 - two_j;
        let two_m = 2 * col as i64 - two_j;
        let phase =
            Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * (two_mp - two_m) as f64);
        phase * wigner_small_d(two_j, two_mp, two_m, angle)
    })
}

/// Symmetric difference quotient `(f(x + h) - f(x - h)) / 2h`.
pub fn central_difference<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// Binomial coefficient by direct product, for small arguments.
pub fn binomial_direct(n: u64, k: u64) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * (n - k + j) as f64 / j as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn jacobi_on_known_matrix() {
        let a = ndarray::array![[2.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 2.0]];
        let eig = jacobi_eigen(&a).unwrap();
        let s2 = 2f64.sqrt();
        let expected = [2.0 - s2, 2.0, 2.0 + s2];
        for (a, b) in eig.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn small_d_spin_half() {
        // d^{1/2}_{1/2,1/2} = cos(b/2), d^{1/2}_{1/2,-1/2} = -sin(b/2)
        let b = 0.8;
        assert!((wigner_small_d(1, 1, 1, b) - (b / 2.0).cos()).abs() < 1e-15);
        assert!((wigner_small_d(1, 1, -1, b) + (b / 2.0).sin()).abs() < 1e-15);
        assert!((wigner_small_d(1, -1, 1, b) - (b / 2.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn small_d_spin_one_at_right_angle() {
        // d^1_{00}(pi/2) = 0, d^1_{10}(pi/2) = -1/sqrt2
        assert!(wigner_small_d(2, 0, 0, FRAC_PI_2).abs() < 1e-15);
        assert!((wigner_small_d(2, 2, 0, FRAC_PI_2) + 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_direct(5, 2), 10.0);
        assert_eq!(binomial_direct(12, 0), 1.0);
    }
}
