//! Symmetric tridiagonal eigensolver and rotations built from it.
//!
//! The solver is the implicit QL iteration with a Wilkinson-type shift taken
//! from the leading 2x2 block, accumulating the plane rotations into the
//! eigenvector matrix. Dimensions in this crate are small (a few dozen at
//! desk scale, a few thousand at most), so everything is dense `O(d^2)`.

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spinalg::{build_spin_operators, StateVector};

/// Maximum QL sweeps spent on any single eigenvalue.
pub const MAX_SWEEPS_PER_EIGENVALUE: usize = 50;

/// Components within this relative distance of the largest magnitude count
/// as tied for the sign convention.
const SIGN_TIE_TOLERANCE: f64 = 1e-10;

/// Real symmetric tridiagonal matrix stored as its diagonal and first
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagSymmetric {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagSymmetric {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::invalid(
                "tridiagonal matrix must have dimension >= 1",
            ));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                found: offdiag.len(),
            });
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(Error::invalid("tridiagonal entries must be finite"));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Entry `k` couples rows `k` and `k + 1`.
    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Gershgorin bound on the spectral radius.
    pub fn spectral_radius_bound(&self) -> f64 {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let left = if i > 0 {
                    self.offdiag[i - 1].abs()
                } else {
                    0.0
                };
                let right = if i + 1 < d {
                    self.offdiag[i].abs()
                } else {
                    0.0
                };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let d = self.dim();
        let mut m = Array2::zeros((d, d));
        for i in 0..d {
            m[[i, i]] = self.diag[i];
        }
        for (i, &e) in self.offdiag.iter().enumerate() {
            m[[i, i + 1]] = e;
            m[[i + 1, i]] = e;
        }
        m
    }

    pub fn matvec(&self, v: ArrayView1<f64>) -> Array1<f64> {
        let d = self.dim();
        Array1::from_shape_fn(d, |i| {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.offdiag[i - 1] * v[i - 1];
            }
            if i + 1 < d {
                acc += self.offdiag[i] * v[i + 1];
            }
            acc
        })
    }
}

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    values: Vec<f64>,
    vectors: Array2<f64>,
}

impl EigenDecomposition {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column `k` is the eigenvector of `values()[k]`.
    pub fn vectors(&self) -> &Array2<f64> {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> ArrayView1<'_, f64> {
        self.vectors.column(k)
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// Full eigendecomposition of a symmetric tridiagonal matrix.
///
/// Eigenvalues come back ascending. Each eigenvector is normalized and
/// signed so that its largest-magnitude component (first one on ties) is
/// positive, which makes the output deterministic.
pub fn tridiag_eigen(t: &TridiagSymmetric) -> Result<EigenDecomposition> {
    let n = t.dim();
    let mut d = t.diag.clone();
    // e[i] couples i and i+1; the trailing slot is scratch.
    let mut e = t.offdiag.clone();
    e.push(0.0);
    let mut z = Array2::<f64>::eye(n);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() < f64::MIN_POSITIVE {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(Error::NoConvergence {
                    index: l,
                    sweeps: MAX_SWEEPS_PER_EIGENVALUE,
                });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zk1 = z[[k, i + 1]];
                    let zk = z[[k, i]];
                    z[[k, i + 1]] = s * zk + c * zk1;
                    z[[k, i]] = c * zk - s * zk1;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        let mut col = z.column(src).to_owned();
        let norm = col.dot(&col).sqrt();
        col /= norm;
        fix_sign(&mut col);
        vectors.column_mut(dst).assign(&col);
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Flip `v` so its largest-magnitude component is positive.
pub(crate) fn fix_sign(v: &mut Array1<f64>) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let lead = v
        .iter()
        .position(|x| x.abs() >= max * (1.0 - SIGN_TIE_TOLERANCE))
        .expect("max is attained");
    if v[lead] < 0.0 {
        v.mapv_inplace(|x| -x);
    }
}

/// Number of eigenvalues strictly below `x`, from the Sturm sequence of
/// leading principal minors.
pub fn sturm_count(t: &TridiagSymmetric, x: f64) -> usize {
    let scale = t.spectral_radius_bound().max(f64::MIN_POSITIVE);
    let pivmin = f64::EPSILON * scale * f64::EPSILON;
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..t.dim() {
        let coupling = if i > 0 {
            t.offdiag[i - 1] * t.offdiag[i - 1] / q
        } else {
            0.0
        };
        q = t.diag[i] - x - coupling;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// `exp(-i angle Sx)` for `N` atoms, built as `V exp(-i angle L) V^T` from the
/// eigendecomposition of the tridiagonal `Sx`.
pub fn rotation_about_x(n: usize, angle: f64) -> Result<Array2<Complex64>> {
    let ops = build_spin_operators(n)?;
    let eig = tridiag_eigen(ops.sx())?;
    Ok(spectral_unitary(&eig, angle))
}

/// `V exp(-i angle L) V^T` for a real symmetric generator.
pub fn spectral_unitary(eig: &EigenDecomposition, angle: f64) -> Array2<Complex64> {
    let d = eig.dim();
    let phases: Vec<Complex64> = eig
        .values()
        .iter()
        .map(|&lam| Complex64::from_polar(1.0, -angle * lam))
        .collect();
    let v = eig.vectors();
    Array2::from_shape_fn((d, d), |(a, b)| {
        (0..d).fold(Complex64::new(0.0, 0.0), |acc, k| {
            acc + phases[k] * (v[[a, k]] * v[[b, k]])
        })
    })
}

/// Apply a unitary matrix to a state; the result is renormalized.
pub fn apply_unitary(u: &Array2<Complex64>, psi: &StateVector) -> Result<StateVector> {
    let d = psi.dim();
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: u.nrows().max(u.ncols()),
        });
    }
    StateVector::from_amplitudes(psi.n(), u.dot(psi.amplitudes()))
}

/// `max |U^dagger U - I|` over all entries.
pub fn unitarity_residual(u: &Array2<Complex64>) -> f64 {
    let uh = u.t().mapv(|z| z.conj());
    let prod = uh.dot(u);
    prod.indexed_iter()
        .map(|((a, b), z)| {
            let target = if a == b { 1.0 } else { 0.0 };
            (z - target).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::jacobi_eigen;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn random_tridiag(rng: &mut ChaCha8Rng, d: usize) -> TridiagSymmetric {
        let diag = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let off = (0..d - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
        TridiagSymmetric::new(diag, off).unwrap()
    }

    fn check_decomposition(t: &TridiagSymmetric, eig: &EigenDecomposition) {
        let d = t.dim();
        let v = eig.vectors();
        let gram = v.t().dot(v);
        for a in 0..d {
            for b in 0..d {
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((gram[[a, b]] - target).abs() <= 1e-11 * d as f64);
            }
        }
        let radius = t.spectral_radius_bound().max(1.0);
        for k in 0..d {
            let tv = t.matvec(eig.vector(k));
            let res = (&tv - &(&eig.vector(k) * eig.values()[k]))
                .iter()
                .fold(0.0f64, |m, x| m.max(x.abs()));
            assert!(res <= 1e-11 * radius, "residual {res}");
        }
        assert!(eig.values().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn two_by_two() {
        let t = TridiagSymmetric::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let eig = tridiag_eigen(&t).unwrap();
        assert!((eig.values()[0] + 1.0).abs() < 1e-15);
        assert!((eig.values()[1] - 1.0).abs() < 1e-15);
        // (1, -1)/sqrt2 signed with its first tied component positive
        assert!((eig.vector(0)[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((eig.vector(0)[1] + FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((eig.vector(1)[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((eig.vector(1)[1] - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn diagonal_input() {
        let t = TridiagSymmetric::new(vec![2.0; 3], vec![0.0; 2]).unwrap();
        let eig = tridiag_eigen(&t).unwrap();
        assert_eq!(eig.values(), &[2.0, 2.0, 2.0]);
        check_decomposition(&t, &eig);
    }

    #[test]
    fn one_by_one() {
        let t = TridiagSymmetric::new(vec![-3.5], vec![]).unwrap();
        let eig = tridiag_eigen(&t).unwrap();
        assert_eq!(eig.values(), &[-3.5]);
        assert_eq!(eig.vector(0)[0], 1.0);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(TridiagSymmetric::new(vec![], vec![]).is_err());
        assert!(matches!(
            TridiagSymmetric::new(vec![1.0, 2.0], vec![]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(TridiagSymmetric::new(vec![f64::NAN], vec![]).is_err());
    }

    #[test]
    fn random_12x12_matches_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let t = random_tridiag(&mut rng, 12);
        let eig = tridiag_eigen(&t).unwrap();
        let oracle = jacobi_eigen(&t.to_dense()).unwrap();
        for (a, b) in eig.values().iter().zip(oracle.values()) {
            assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
        check_decomposition(&t, &eig);
    }

    #[test]
    fn random_batch_matches_jacobi_and_sturm() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let d = rng.random_range(1..=16);
            let t = random_tridiag(&mut rng, d);
            let eig = tridiag_eigen(&t).unwrap();
            let oracle = jacobi_eigen(&t.to_dense()).unwrap();
            for (a, b) in eig.values().iter().zip(oracle.values()) {
                assert!((a - b).abs() <= 1e-12);
            }
            check_decomposition(&t, &eig);
            for _ in 0..5 {
                let x: f64 = rng.random_range(-3.0..3.0);
                let below = eig.values().iter().filter(|&&v| v < x).count();
                let near = eig.values().iter().any(|v| (v - x).abs() < 1e-9);
                if !near {
                    assert_eq!(sturm_count(&t, x), below);
                }
            }
        }
    }

    #[test]
    fn deterministic_output() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_tridiag(&mut rng, 9);
        let a = tridiag_eigen(&t).unwrap();
        let b = tridiag_eigen(&t).unwrap();
        assert_eq!(a.values(), b.values());
        assert_eq!(a.vectors(), b.vectors());
    }

    #[test]
    fn rotation_zero_is_identity() {
        let u = rotation_about_x(7, 0.0).unwrap();
        for ((a, b), z) in u.indexed_iter() {
            let target = if a == b { 1.0 } else { 0.0 };
            assert!((z - target).norm() <= 1e-14);
        }
    }

    #[test]
    fn rotation_unitarity_across_sizes() {
        for n in [2, 3, 10, 57, 200] {
            for angle in [0.1, PI / 4.0, FRAC_PI_2, PI] {
                let u = rotation_about_x(n, angle).unwrap();
                assert!(unitarity_residual(&u) <= 1e-11, "N={n} angle={angle}");
            }
        }
    }

    #[test]
    fn rotation_group_property_and_inverse() {
        let n = 6;
        let half = rotation_about_x(n, FRAC_PI_2).unwrap();
        let full = rotation_about_x(n, PI).unwrap();
        let twice = half.dot(&half);
        assert!((&twice - &full).iter().all(|z| z.norm() <= 1e-10));

        let inv = rotation_about_x(n, -FRAC_PI_2).unwrap();
        let psi = StateVector::from_amplitudes(
            n,
            Array1::from_shape_fn(n + 1, |i| Complex64::new(i as f64 + 1.0, 0.5 - i as f64)),
        )
        .unwrap();
        let back = apply_unitary(&half, &apply_unitary(&inv, &psi).unwrap()).unwrap();
        for (a, b) in back.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((a - b).norm() <= 1e-11);
        }
    }

    #[test]
    fn apply_unitary_dimension_mismatch() {
        let u = rotation_about_x(3, 0.2).unwrap();
        let psi = StateVector::basis_state(4, 0).unwrap();
        assert!(matches!(
            apply_unitary(&u, &psi),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn apply_identity() {
        let psi = crate::spinalg::cat_state(5, 0.3).unwrap();
        let id = Array2::<Complex64>::eye(6);
        let out = apply_unitary(&id, &psi).unwrap();
        assert_eq!(out.amplitudes(), psi.amplitudes());
    }
}
