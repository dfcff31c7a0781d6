//! Parity interferometry pipeline.
//!
//! An input state `psi0` picks up the phase `exp(-i theta Sz)`, passes the
//! beam splitter `exp(-i (pi/2) Sx)` and the parity `(-1)^{n_l}` is measured.
//! The slope of the parity signal comes from the expectation value
//! `-i <psi2| [Sy, P] |psi2>`, so no numerical differentiation is needed, and
//! the phase uncertainty is `sigma_theta = sigma_P / |dP/dtheta|`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::Serialize;

use crate::eigen::{apply_unitary, rotation_about_x};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spinalg::{
    build_spin_operators, parity_operator, ParityOperator, SpinOperators, StateVector,
};

/// Below this, `|dP/dtheta|` counts as zero.
pub const DERIVATIVE_ZERO: f64 = 1e-12;
/// Below this, `sigma_P` counts as zero.
pub const SIGMA_ZERO: f64 = 1e-9;
/// Offset used to evaluate `sigma_theta` at removable `0/0` points.
pub const LIMIT_OFFSET: f64 = 1e-6;
/// Imaginary parts of the slope expectation value larger than this are an
/// error; smaller ones are discarded.
pub const DERIVATIVE_IMAG_TOLERANCE: f64 = 1e-8;

/// How `sigma_theta` was obtained for a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowFlag {
    /// Plain error propagation.
    Ok,
    /// `sigma_P` and the slope both vanish; averaged over `theta +- 1e-6`.
    Limit,
    /// Only the slope vanishes; the signal carries no phase information.
    Singular,
}

impl RowFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowFlag::Ok => "ok",
            RowFlag::Limit => "limit",
            RowFlag::Singular => "singular",
        }
    }
}

impl fmt::Display for RowFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RowFlag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(RowFlag::Ok),
            "limit" => Ok(RowFlag::Limit),
            "singular" => Ok(RowFlag::Singular),
            other => Err(Error::invalid(format!("unknown row flag '{other}'"))),
        }
    }
}

/// One point of a phase scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub theta: f64,
    pub parity: f64,
    pub sigma_parity: f64,
    pub parity_deriv: f64,
    /// `None` for singular rows.
    pub sigma_theta: Option<f64>,
    /// `1 / (N sigma_theta)`, the precision relative to the Heisenberg limit;
    /// zero for singular rows.
    pub precision_norm: f64,
    pub flag: RowFlag,
}

/// Weighted pure states, e.g. the zero-temperature thermal state.
#[derive(Debug, Clone)]
pub struct Mixture {
    components: Vec<(f64, StateVector)>,
}

impl Mixture {
    pub fn new(components: Vec<(f64, StateVector)>) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::invalid("mixture needs at least one component"));
        };
        let n = first.n();
        if components.iter().any(|(_, s)| s.n() != n) {
            return Err(Error::invalid(
                "mixture components have different atom numbers",
            ));
        }
        if components
            .iter()
            .any(|(w, _)| !(*w >= 0.0 && w.is_finite()))
        {
            return Err(Error::invalid("mixture weights must be non-negative"));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        Ok(Self { components })
    }

    /// `(|S><S| + |A><A|) / 2`, the zero-temperature limit when the two
    /// lowest levels are degenerate.
    pub fn thermal_cat_pair(n: usize) -> Result<Self> {
        use crate::spinalg::cat_state;
        let pi = std::f64::consts::PI;
        Self::new(vec![(0.5, cat_state(n, 0.0)?), (0.5, cat_state(n, pi)?)])
    }

    pub fn n(&self) -> usize {
        self.components[0].1.n()
    }

    pub fn components(&self) -> &[(f64, StateVector)] {
        &self.components
    }
}

/// Evenly spaced phases `start..=stop`, parsed from `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl ThetaGrid {
    pub const DEFAULT_COUNT: usize = 721;

    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::invalid("grid count must be at least 2"));
        }
        if !(start.is_finite() && stop.is_finite()) || stop <= start {
            return Err(Error::invalid("grid must satisfy start < stop"));
        }
        Ok(Self { start, stop, count })
    }

    /// `[0, 2 pi]` with 721 points.
    pub fn full_turn() -> Self {
        Self {
            start: 0.0,
            stop: 2.0 * std::f64::consts::PI,
            count: Self::DEFAULT_COUNT,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * k as f64
                }
            })
            .collect()
    }
}

impl FromStr for ThetaGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!(
                "expected start:stop:count, got '{s}'"
            )));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad number '{t}' in grid '{s}'")))
        };
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::invalid(format!("bad count '{}' in grid '{s}'", parts[2])))?;
        Self::new(num(parts[0])?, num(parts[1])?, count)
    }
}

/// `exp(-i theta Sz)`: amplitude `i` picks up `exp(-i (i - N/2) theta)`.
pub fn phase_imprint(psi: &StateVector, theta: f64) -> StateVector {
    let half = psi.n() as f64 / 2.0;
    let amps: Array1<Complex64> = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, &a)| a * Complex64::from_polar(1.0, -(i as f64 - half) * theta))
        .collect();
    StateVector::from_amplitudes(psi.n(), amps).expect("phase factors preserve validity")
}

/// `exp(-i (pi/2) Sx)`.
pub fn beam_splitter(psi: &StateVector) -> Result<StateVector> {
    apply_unitary(&rotation_about_x(psi.n(), FRAC_PI_2)?, psi)
}

/// `(<P>, sigma_P)` for a pure state.
///
/// `sigma_P^2 = 1 - <P>^2 = 4 w_even w_odd`, which keeps full relative
/// accuracy near `<P> = +-1`.
pub fn parity_stats(psi: &StateVector) -> (f64, f64) {
    let (even, odd) = psi
        .amplitudes()
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(e, o), (i, z)| {
            if i % 2 == 0 {
                (e + z.norm_sqr(), o)
            } else {
                (e, o + z.norm_sqr())
            }
        });
    let total = even + odd;
    let (even, odd) = (even / total, odd / total);
    let parity = even - odd;
    let sigma = (4.0 * even * odd).max(0.0).sqrt().min(1.0);
    (parity, sigma)
}

/// Pipeline with the beam splitter and operators built once for a given `N`.
#[derive(Debug, Clone)]
pub struct Interferometer {
    n: usize,
    beam_splitter: Array2<Complex64>,
    spin: SpinOperators,
    parity: ParityOperator,
}

impl Interferometer {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            beam_splitter: rotation_about_x(n, FRAC_PI_2)?,
            spin: build_spin_operators(n)?,
            parity: parity_operator(n)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beam_splitter_matrix(&self) -> &Array2<Complex64> {
        &self.beam_splitter
    }

    fn check(&self, psi: &StateVector) -> Result<()> {
        if psi.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                found: psi.dim(),
            });
        }
        Ok(())
    }

    pub fn beam_splitter(&self, psi: &StateVector) -> Result<StateVector> {
        self.check(psi)?;
        apply_unitary(&self.beam_splitter, psi)
    }

    /// `psi2 = R exp(-i theta Sz) psi0`.
    pub fn output_state(&self, psi0: &StateVector, theta: f64) -> Result<StateVector> {
        self.beam_splitter(&phase_imprint(psi0, theta))
    }

    pub fn parity_signal(&self, psi0: &StateVector, theta: f64) -> Result<f64> {
        Ok(parity_stats(&self.output_state(psi0, theta)?).0)
    }

    /// `dP/dtheta = -i <psi2| [Sy, P] |psi2>` for the post-beam-splitter state.
    pub fn parity_derivative(&self, psi2: &StateVector) -> Result<f64> {
        self.check(psi2)?;
        let a = psi2.amplitudes();
        let signs = self.parity.signs();
        let sy = self.spin.sy_upper();
        // ([Sy, P] a)_r = sum_c Sy[r, c] (p_c - p_r) a_c
        let commuted: Array1<Complex64> = Array1::from_shape_fn(a.len(), |r| {
            let mut acc = Complex64::new(0.0, 0.0);
            if r > 0 {
                acc += sy[r - 1].conj() * a[r - 1] * (signs[r - 1] - signs[r]);
            }
            if r + 1 < a.len() {
                acc += sy[r] * a[r + 1] * (signs[r + 1] - signs[r]);
            }
            acc
        });
        let expectation: Complex64 = a
            .iter()
            .zip(commuted.iter())
            .map(|(x, y)| x.conj() * y)
            .sum();
        let value = Complex64::new(0.0, -1.0) * expectation;
        if value.im.abs() > DERIVATIVE_IMAG_TOLERANCE {
            return Err(Error::Numerical(format!(
                "parity slope has imaginary residual {:e}",
                value.im
            )));
        }
        Ok(value.re)
    }

    fn signal_and_slope(&self, psi0: &StateVector, theta: f64) -> Result<(f64, f64, f64)> {
        let psi2 = self.output_state(psi0, theta)?;
        let (p, sigma) = parity_stats(&psi2);
        Ok((p, sigma, self.parity_derivative(&psi2)?))
    }

    /// Full pipeline for one phase, including error propagation.
    pub fn run(&self, psi0: &StateVector, theta: f64) -> Result<ScanRow> {
        self.check(psi0)?;
        let (parity, sigma_parity, parity_deriv) = self.signal_and_slope(psi0, theta)?;
        let row = |sigma_theta: Option<f64>, flag| ScanRow {
            theta,
            parity,
            sigma_parity,
            parity_deriv,
            sigma_theta,
            precision_norm: sigma_theta.map_or(0.0, |s| 1.0 / (self.n as f64 * s)),
            flag,
        };
        if parity_deriv.abs() >= DERIVATIVE_ZERO {
            return Ok(row(Some(sigma_parity / parity_deriv.abs()), RowFlag::Ok));
        }
        if sigma_parity >= SIGMA_ZERO {
            return Ok(row(None, RowFlag::Singular));
        }
        let mut sum = 0.0;
        for offset in [-LIMIT_OFFSET, LIMIT_OFFSET] {
            let (_, s, d) = self.signal_and_slope(psi0, theta + offset)?;
            if d.abs() < DERIVATIVE_ZERO {
                return Ok(row(None, RowFlag::Singular));
            }
            sum += s / d.abs();
        }
        Ok(row(Some(0.5 * sum), RowFlag::Limit))
    }

    pub fn scan(&self, psi0: &StateVector, thetas: &[f64]) -> Result<Vec<ScanRow>> {
        validate_grid(thetas)?;
        thetas.iter().map(|&t| self.run(psi0, t)).collect()
    }

    /// `sum_k w_k <P>_k`.
    pub fn mixture_parity(&self, mix: &Mixture, theta: f64) -> Result<f64> {
        mix.components().iter().try_fold(0.0, |acc, (w, psi)| {
            Ok(acc + w * self.parity_signal(psi, theta)?)
        })
    }

    /// Scan row for a mixture: parity and slope are weight-averaged, and
    /// `<P^2> = 1` still holds, so `sigma_P = sqrt(1 - <P>^2)`.
    pub fn run_mixture(&self, mix: &Mixture, theta: f64) -> Result<ScanRow> {
        if mix.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                found: mix.n() + 1,
            });
        }
        let (mut parity, mut deriv) = (0.0, 0.0);
        for (w, psi) in mix.components() {
            let (p, _, d) = self.signal_and_slope(psi, theta)?;
            parity += w * p;
            deriv += w * d;
        }
        let sigma_parity = (1.0 - parity * parity).max(0.0).sqrt();
        let (sigma_theta, flag) = if deriv.abs() >= DERIVATIVE_ZERO {
            (Some(sigma_parity / deriv.abs()), RowFlag::Ok)
        } else {
            (None, RowFlag::Singular)
        };
        Ok(ScanRow {
            theta,
            parity,
            sigma_parity,
            parity_deriv: deriv,
            sigma_theta,
            precision_norm: sigma_theta.map_or(0.0, |s| 1.0 / (self.n as f64 * s)),
            flag,
        })
    }

    pub fn scan_mixture(&self, mix: &Mixture, thetas: &[f64]) -> Result<Vec<ScanRow>> {
        validate_grid(thetas)?;
        thetas.iter().map(|&t| self.run_mixture(mix, t)).collect()
    }
}

fn validate_grid(thetas: &[f64]) -> Result<()> {
    if thetas.is_empty() {
        return Err(Error::invalid("theta grid is empty"));
    }
    if thetas.iter().any(|t| !t.is_finite()) || thetas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("theta grid must be finite and ascending"));
    }
    Ok(())
}

/// Slope of the parity signal for a post-beam-splitter state.
pub fn parity_derivative(psi2: &StateVector) -> Result<f64> {
    Interferometer::new(psi2.n())?.parity_derivative(psi2)
}

pub fn run_pipeline(psi0: &StateVector, theta: f64) -> Result<ScanRow> {
    Interferometer::new(psi0.n())?.run(psi0, theta)
}

pub fn scan(psi0: &StateVector, thetas: &[f64]) -> Result<Vec<ScanRow>> {
    Interferometer::new(psi0.n())?.scan(psi0, thetas)
}

pub fn mixture_parity(mix: &Mixture, theta: f64) -> Result<f64> {
    Interferometer::new(mix.n())?.mixture_parity(mix, theta)
}

/// `cos[N (theta + pi/2)]`, the parity signal of the symmetric cat.
pub fn analytic_cat_parity(n: usize, theta: f64) -> f64 {
    (n as f64 * (theta + FRAC_PI_2)).cos()
}

/// Parity signal of the perturbed cat to second order in `J/U`:
///
/// ```text
/// (1 - c) cos[N theta + N pi/2] - c cos[(N-2) theta + N pi/2],
/// c = N J^2 / (4 (N-1)^2 U^2)
/// ```
///
/// Only defined for `N > 2` and `U != 0`.
pub fn perturbative_parity(p: &ModelParams, theta: f64) -> Result<f64> {
    if p.n <= 2 {
        return Err(Error::domain("second-order parity formula needs N > 2"));
    }
    if p.u == 0.0 {
        return Err(Error::domain("second-order parity formula needs U != 0"));
    }
    let n = p.n as f64;
    let c = n * p.j * p.j / (4.0 * (n - 1.0).powi(2) * p.u * p.u);
    let offset = n * FRAC_PI_2;
    Ok((1.0 - c) * (n * theta + offset).cos() - c * ((n - 2.0) * theta + offset).cos())
}
