//! Two-mode basis and Schwinger spin algebra.
//!
//! Basis index `i` labels the number state `|n_l = i, n_r = N - i>`, which is
//! the `Sz` eigenstate with `m_z = i - N/2`. Phases follow from declaring
//! `|N, 0>` to be `|N/2>_z` and generating the rest with the lowering
//! operator `S- = b_r^dagger b_l`, so `S-` has non-negative real matrix
//! elements and every spin operator below is in Condon-Shortley form:
//!
//! ```text
//! <i+1| Sx |i>   = sqrt((i+1)(N-i)) / 2
//! <i+1| Sy |i>   = -i sqrt((i+1)(N-i)) / 2
//! <i|   Sz |i>   = i - N/2
//! ```

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::eigen::TridiagSymmetric;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Atom count with the basis indexing rule attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Basis {
    n: usize,
}

impl Basis {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!(
                "atom number N = {n} is not supported; N > 1 is required \
                 (for N = 1 there is no atom-atom interaction and the perturbative \
                 states are singular)"
            )));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// Total spin `S = N/2`.
    pub fn spin(&self) -> f64 {
        self.n as f64 / 2.0
    }

    pub fn m_z(&self, index: usize) -> f64 {
        index as f64 - self.spin()
    }
}

/// Normalized state over the `N + 1` dimensional basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: Basis,
    amps: Array1<Complex64>,
}

impl StateVector {
    /// Wraps `amps` and rescales to unit norm.
    pub fn from_amplitudes(n: usize, amps: Array1<Complex64>) -> Result<Self> {
        let basis = Basis::new(n)?;
        if amps.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: amps.len(),
            });
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("state amplitudes must be finite"));
        }
        let norm = norm_of(&amps);
        if norm == 0.0 {
            return Err(Error::invalid("zero vector cannot be normalized"));
        }
        Ok(Self {
            basis,
            amps: amps / Complex64::from(norm),
        })
    }

    pub fn from_real(n: usize, amps: &[f64]) -> Result<Self> {
        Self::from_amplitudes(n, amps.iter().map(|&x| Complex64::from(x)).collect())
    }

    /// Number state `|index, N - index>`.
    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        let basis = Basis::new(n)?;
        if index > n {
            return Err(Error::invalid(format!(
                "basis index {index} exceeds N = {n}"
            )));
        }
        let mut amps = Array1::from_elem(basis.dim(), ZERO);
        amps[index] = Complex64::from(1.0);
        Ok(Self { basis, amps })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.n
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amps)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Populations `|a_i|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }
}

fn norm_of(amps: &Array1<Complex64>) -> f64 {
    amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `Sx`, `Sy`, `Sz` for `N` atoms.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    basis: Basis,
    sx: TridiagSymmetric,
    /// `Sy[i, i+1]`; the lower entries are the conjugates.
    sy_upper: Vec<Complex64>,
    sz: Vec<f64>,
}

/// Builds the Schwinger spin operators directly from the boson matrix
/// elements.
pub fn build_spin_operators(n: usize) -> Result<SpinOperators> {
    let basis = Basis::new(n)?;
    let half_root = |i: usize| 0.5 * (((i + 1) * (n - i)) as f64).sqrt();
    let sx_off: Vec<f64> = (0..n).map(half_root).collect();
    // b_l^dagger b_r raises i; Sy = (b_l^dagger b_r - b_r^dagger b_l) / 2i
    let sy_upper = sx_off.iter().map(|&x| I * x).collect();
    let sz = (0..=n).map(|i| basis.m_z(i)).collect();
    let sx = TridiagSymmetric::new(vec![0.0; n + 1], sx_off)?;
    Ok(SpinOperators {
        basis,
        sx,
        sy_upper,
        sz,
    })
}

impl SpinOperators {
    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn sx(&self) -> &TridiagSymmetric {
        &self.sx
    }

    pub fn sy_upper(&self) -> &[Complex64] {
        &self.sy_upper
    }

    pub fn sz(&self) -> &[f64] {
        &self.sz
    }

    /// Test hook for the verification suite: negates `Sy`, which breaks the
    /// commutation relations.
    #[doc(hidden)]
    pub fn with_sy_sign_flipped(mut self) -> Self {
        self.sy_upper.iter_mut().for_each(|z| *z = -*z);
        self
    }

    pub fn apply_sx(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        let off = self.sx.offdiag();
        let d = v.len();
        Array1::from_shape_fn(d, |i| {
            let mut acc = ZERO;
            if i > 0 {
                acc += v[i - 1] * off[i - 1];
            }
            if i + 1 < d {
                acc += v[i + 1] * off[i];
            }
            acc
        })
    }

    pub fn apply_sy(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        let d = v.len();
        Array1::from_shape_fn(d, |i| {
            let mut acc = ZERO;
            if i > 0 {
                acc += self.sy_upper[i - 1].conj() * v[i - 1];
            }
            if i + 1 < d {
                acc += self.sy_upper[i] * v[i + 1];
            }
            acc
        })
    }

    pub fn apply_sz(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        Array1::from_shape_fn(v.len(), |i| v[i] * self.sz[i])
    }

    pub fn dense_sx(&self) -> Array2<Complex64> {
        self.sx.to_dense().mapv(Complex64::from)
    }

    pub fn dense_sy(&self) -> Array2<Complex64> {
        let d = self.basis.dim();
        let mut m = Array2::from_elem((d, d), ZERO);
        for (i, &z) in self.sy_upper.iter().enumerate() {
            m[[i, i + 1]] = z;
            m[[i + 1, i]] = z.conj();
        }
        m
    }

    pub fn dense_sz(&self) -> Array2<Complex64> {
        let d = self.basis.dim();
        let mut m = Array2::from_elem((d, d), ZERO);
        for (i, &z) in self.sz.iter().enumerate() {
            m[[i, i]] = Complex64::from(z);
        }
        m
    }
}

/// Parity `(-1)^{n_l}` of the left-well atom number, stored as its diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityOperator {
    signs: Vec<f64>,
}

pub fn parity_operator(n: usize) -> Result<ParityOperator> {
    let basis = Basis::new(n)?;
    let signs = (0..basis.dim())
        .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    Ok(ParityOperator { signs })
}

impl ParityOperator {
    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn apply(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        Array1::from_shape_fn(v.len(), |i| v[i] * self.signs[i])
    }

    pub fn dense(&self) -> Array2<Complex64> {
        let d = self.signs.len();
        Array2::from_shape_fn((d, d), |(a, b)| {
            if a == b {
                Complex64::from(self.signs[a])
            } else {
                ZERO
            }
        })
    }

    pub fn expectation(&self, psi: &StateVector) -> f64 {
        psi.amplitudes()
            .iter()
            .zip(&self.signs)
            .map(|(z, s)| s * z.norm_sqr())
            .sum()
    }
}

/// `(|N,0> + e^{i phi} |0,N>) / sqrt2`; `phi = 0` is the symmetric cat and
/// `phi = pi` the antisymmetric one.
pub fn cat_state(n: usize, phi: f64) -> Result<StateVector> {
    let basis = Basis::new(n)?;
    let mut amps = Array1::from_elem(basis.dim(), ZERO);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    amps[n] = Complex64::from(r);
    amps[0] = Complex64::from_polar(r, phi);
    Ok(StateVector { basis, amps })
}

/// `i^k` for integer `k`, exact.
pub fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `sqrt(C(N, i) / 2^N)` for every `i`, accumulated in log space so large
/// `N` does not overflow.
pub fn binomial_amplitudes(n: usize) -> Vec<f64> {
    let mut log_w = -(n as f64) * std::f64::consts::LN_2;
    let mut out = Vec::with_capacity(n + 1);
    out.push((0.5 * log_w).exp());
    for i in 1..=n {
        log_w += (((n - i + 1) as f64) / i as f64).ln();
        out.push((0.5 * log_w).exp());
    }
    out
}

/// The extreme `Sy` eigenstates `(|N/2>_y, |-N/2>_y)` with the phases that
/// the `pi/2` rotation about `x` produces from `|-+N/2>_z`:
///
/// ```text
/// |N/2>_y  [i] = sqrt(C(N,i)/2^N) (-i)^i
/// |-N/2>_y [i] = (-i)^N sqrt(C(N,i)/2^N) i^i
/// ```
pub fn sy_extreme_eigenstates(n: usize) -> Result<(StateVector, StateVector)> {
    let basis = Basis::new(n)?;
    let w = binomial_amplitudes(n);
    let global = i_pow(-(n as i64));
    let plus = w
        .iter()
        .enumerate()
        .map(|(i, &x)| i_pow(-(i as i64)) * x)
        .collect();
    let minus = w
        .iter()
        .enumerate()
        .map(|(i, &x)| global * i_pow(i as i64) * x)
        .collect();
    Ok((
        StateVector { basis, amps: plus },
        StateVector { basis, amps: minus },
    ))
}

/// `max |A|` entry-wise, for residual checks on dense operators.
pub fn max_abs(m: &Array2<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
