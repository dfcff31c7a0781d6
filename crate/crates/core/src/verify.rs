//! Runtime invariant suite behind `dwcat verify`.
//!
//! Each check is self-contained and returns a [`CheckResult`]; the suite
//! never panics on a failed check. Desk scale only: `N <= 15`, dimensions
//! `<= 16`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eigen::{
    rotation_about_x, sturm_count, tridiag_eigen, unitarity_residual, TridiagSymmetric,
};
use crate::error::Result;
use crate::interferometer::{
    analytic_cat_parity, perturbative_parity, Interferometer, Mixture, ThetaGrid,
};
use crate::model::{
    build_hamiltonian, gap_scan, ground_and_gap, interaction_for_chi, swap_blocks, ModelParams,
};
use crate::oracle::{central_difference, jacobi_eigen, rotation_about_x_wigner};
use crate::spinalg::{
    build_spin_operators, cat_state, i_pow, max_abs, parity_operator, sy_extreme_eigenstates,
    SpinOperators, StateVector,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Run only a fast subset.
    pub quick: bool,
    /// Negate `Sy` before the algebra checks, to confirm they can fail.
    pub inject_sy_sign_error: bool,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn elapsed(&self) -> Duration {
        self.checks.iter().map(|c| c.elapsed).sum()
    }
}

/// Outcome of one check body: pass/fail plus a human-readable summary.
type Outcome = Result<(bool, String)>;

struct Check {
    name: &'static str,
    quick: bool,
    run: fn(&VerifyOptions) -> Outcome,
}

const CHECKS: &[Check] = &[
    Check {
        name: "spin algebra: commutators and Casimir (N=2..20)",
        quick: true,
        run: spin_algebra,
    },
    Check {
        name: "parity: P^2 = 1, P Sx P = -Sx, P Sy P = -Sy (N=2..20)",
        quick: true,
        run: parity_symmetry,
    },
    Check {
        name: "Sy extreme eigenstates and parity flip (N=2..20)",
        quick: true,
        run: sy_extremes,
    },
    Check {
        name: "rotation identities about x",
        quick: false,
        run: rotation_identities,
    },
    Check {
        name: "vanishing first-order matrix elements",
        quick: false,
        run: vanishing_elements,
    },
    Check {
        name: "Sturm count vs eigenvalues",
        quick: false,
        run: sturm_cross_check,
    },
    Check {
        name: "swap blocking reproduces full spectrum (N<=15)",
        quick: false,
        run: blocking_spectrum,
    },
    Check {
        name: "ground state swap symmetry and U=0 limit",
        quick: false,
        run: ground_symmetry,
    },
    Check {
        name: "gap increases with chi",
        quick: false,
        run: gap_monotone_in_chi,
    },
    Check {
        name: "C1 cat Heisenberg limit sigma_theta*N = 1",
        quick: false,
        run: criterion_heisenberg,
    },
    Check {
        name: "C2 cat parity curve cos[N(theta+pi/2)]",
        quick: true,
        run: criterion_cat_curve,
    },
    Check {
        name: "C3 ground-state parity zeros, extrema, precision order",
        quick: false,
        run: criterion_ground_features,
    },
    Check {
        name: "C4 second-order parity formula and J^2 scaling",
        quick: false,
        run: criterion_perturbative,
    },
    Check {
        name: "C5 <-N/2|Sx P Sx|N/2>_y = -i^N N/4",
        quick: true,
        run: criterion_matrix_element,
    },
    Check {
        name: "C6a gap limits J=0 and U=0",
        quick: true,
        run: criterion_gap_limits,
    },
    Check {
        name: "C6b gap strictly decreasing in N at chi=1",
        quick: true,
        run: criterion_gap_decreasing,
    },
    Check {
        name: "C6c gap ratio spread within factor 3 at chi=1",
        quick: false,
        run: criterion_gap_ratio_spread,
    },
    Check {
        name: "C7 thermal mixture parity vanishes",
        quick: true,
        run: criterion_thermal,
    },
    Check {
        name: "C8 commutator slope vs finite difference",
        quick: false,
        run: criterion_derivative,
    },
    Check {
        name: "C9 eigensolver and beam splitter oracles",
        quick: false,
        run: criterion_oracles,
    },
];

pub fn run(opts: &VerifyOptions) -> Report {
    let checks = CHECKS
        .iter()
        .filter(|c| !opts.quick || c.quick)
        .map(|c| {
            let start = Instant::now();
            let (passed, detail) = match (c.run)(opts) {
                Ok(v) => v,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult {
                name: c.name,
                passed,
                detail,
                elapsed: start.elapsed(),
            }
        })
        .collect();
    Report { checks }
}

fn spin_ops(n: usize, opts: &VerifyOptions) -> Result<SpinOperators> {
    let ops = build_spin_operators(n)?;
    Ok(if opts.inject_sy_sign_error {
        ops.with_sy_sign_flipped()
    } else {
        ops
    })
}

fn commutator(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    a.dot(b) - b.dot(a)
}

fn verdict(worst: f64, tol: f64, what: &str) -> (bool, String) {
    (worst <= tol, format!("{what} {worst:.3e} (tol {tol:.0e})"))
}

const I: Complex64 = Complex64::new(0.0, 1.0);

fn spin_algebra(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=20 {
        let ops = spin_ops(n, opts)?;
        let (sx, sy, sz) = (ops.dense_sx(), ops.dense_sy(), ops.dense_sz());
        worst = worst
            .max(max_abs(&(commutator(&sx, &sy) - &sz * I)))
            .max(max_abs(&(commutator(&sy, &sz) - &sx * I)))
            .max(max_abs(&(commutator(&sz, &sx) - &sy * I)));
        let s = n as f64 / 2.0;
        let casimir = sx.dot(&sx) + sy.dot(&sy) + sz.dot(&sz);
        let target = Array2::<Complex64>::eye(n + 1) * Complex64::from(s * (s + 1.0));
        worst = worst.max(max_abs(&(casimir - target)));
    }
    Ok(verdict(worst, 1e-12, "max residual"))
}

fn parity_symmetry(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=20 {
        let ops = spin_ops(n, opts)?;
        let p = parity_operator(n)?.dense();
        let (sx, sy) = (ops.dense_sx(), ops.dense_sy());
        worst = worst
            .max(max_abs(&(p.dot(&p) - Array2::<Complex64>::eye(n + 1))))
            .max(max_abs(&(p.dot(&sx).dot(&p) + &sx)))
            .max(max_abs(&(p.dot(&sy).dot(&p) + &sy)));
    }
    Ok(verdict(worst, 1e-12, "max residual"))
}

fn sy_extremes(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=20 {
        let ops = spin_ops(n, opts)?;
        let s = n as f64 / 2.0;
        let (plus, minus) = sy_extreme_eigenstates(n)?;
        for (psi, lambda) in [(&plus, s), (&minus, -s)] {
            let r = ops.apply_sy(psi.amplitudes()) - psi.amplitudes() * Complex64::from(lambda);
            worst = worst.max(r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        }
        let flipped = parity_operator(n)?.apply(minus.amplitudes());
        let factor = i_pow(-(n as i64));
        for (a, b) in flipped.iter().zip(plus.amplitudes()) {
            worst = worst.max((a - factor * b).norm());
        }
    }
    Ok(verdict(worst, 1e-12, "max residual"))
}

fn rotation_identities(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=12 {
        let ops = spin_ops(n, opts)?;
        let (sy, sz) = (ops.dense_sy(), ops.dense_sz());
        for phi in [PI / 6.0, FRAC_PI_2, 1.0] {
            let r = rotation_about_x(n, phi)?;
            let rinv = rotation_about_x(n, -phi)?;
            let rotated = r.dot(&sz).dot(&rinv);
            let expected = &sz * Complex64::from(phi.cos()) - &sy * Complex64::from(phi.sin());
            worst = worst.max(max_abs(&(rotated - expected)));
        }
        let r = rotation_about_x(n, FRAC_PI_2)?;
        worst = worst.max(max_abs(&(r.dot(&sz) + sy.dot(&r))));
        // rotated |m>_z is an Sy eigenvector with eigenvalue -m
        for i in 0..=n {
            let m = i as f64 - n as f64 / 2.0;
            let psi = r.column(i).to_owned();
            let res = sy.dot(&psi) + &psi * Complex64::from(m);
            worst = worst.max(res.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        }
    }
    Ok(verdict(worst, 1e-10, "max residual"))
}

fn vanishing_elements(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=15 {
        let ops = spin_ops(n, opts)?;
        let (plus, minus) = sy_extreme_eigenstates(n)?;
        let sx_plus = ops.apply_sx(plus.amplitudes());
        let diag: Complex64 = plus
            .amplitudes()
            .iter()
            .zip(sx_plus.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        let cross: Complex64 = minus
            .amplitudes()
            .iter()
            .zip(sx_plus.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        worst = worst.max(diag.norm()).max(cross.norm());
    }
    Ok(verdict(worst, 1e-12, "max |element|"))
}

fn random_tridiag(rng: &mut ChaCha8Rng, d: usize) -> Result<TridiagSymmetric> {
    let diag = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let off = (0..d.saturating_sub(1))
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    TridiagSymmetric::new(diag, off)
}

fn sturm_cross_check(_: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5731);
    let mut mismatches = 0;
    let mut probes = 0;
    for _ in 0..50 {
        let d = rng.random_range(1..=16);
        let t = random_tridiag(&mut rng, d)?;
        let eig = tridiag_eigen(&t)?;
        for _ in 0..10 {
            let x: f64 = rng.random_range(-3.0..3.0);
            if eig.values().iter().any(|v| (v - x).abs() < 1e-9) {
                continue;
            }
            probes += 1;
            let below = eig.values().iter().filter(|&&v| v < x).count();
            if sturm_count(&t, x) != below {
                mismatches += 1;
            }
        }
    }
    Ok((
        mismatches == 0,
        format!("{mismatches} mismatches in {probes} probes"),
    ))
}

fn blocking_spectrum(_: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb10c);
    let mut worst = 0.0f64;
    for n in 2..=15 {
        for _ in 0..4 {
            let p = ModelParams::new(
                n,
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                0.0,
            )?;
            let h = build_hamiltonian(&p)?;
            let blocks = swap_blocks(&h)?;
            let mut merged: Vec<f64> = tridiag_eigen(&blocks.symmetric)?.values().to_vec();
            merged.extend_from_slice(tridiag_eigen(&blocks.antisymmetric)?.values());
            merged.sort_by(f64::total_cmp);
            let full = tridiag_eigen(&h)?;
            let scale = h.spectral_radius_bound().max(f64::MIN_POSITIVE);
            for (a, b) in merged.iter().zip(full.values()) {
                worst = worst.max((a - b).abs() / scale);
            }
        }
    }
    Ok(verdict(worst, 1e-12, "max scaled deviation"))
}

fn ground_symmetry(_: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=15 {
        for u in [-2.0, -0.5, 0.0, 0.7] {
            let sol = ground_and_gap(&ModelParams::new(n, 1.0, u, 0.0)?)?;
            let a = sol.psi0.amplitudes();
            let sym = (0..=n)
                .map(|i| (a[i] - a[n - i]).norm())
                .fold(0.0, f64::max);
            let anti = (0..=n)
                .map(|i| (a[i] + a[n - i]).norm())
                .fold(0.0, f64::max);
            worst = worst.max(sym.min(anti));
        }
        let p = ModelParams::new(n, 1.0, 0.0, 0.0)?;
        let sol = ground_and_gap(&p)?;
        worst = worst.max((sol.e0 + n as f64).abs());
        let h = build_hamiltonian(&p)?;
        let psi: Vec<f64> = sol.psi0.amplitudes().iter().map(|z| z.re).collect();
        let hpsi = h.matvec(ndarray::ArrayView1::from(&psi));
        let res = hpsi
            .iter()
            .zip(&psi)
            .map(|(x, y)| (x - sol.e0 * y).powi(2))
            .sum::<f64>()
            .sqrt();
        worst = worst.max(res);
    }
    Ok(verdict(worst, 1e-10, "max residual"))
}

fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / (count - 1) as f64))
        .collect()
}

fn gap_monotone_in_chi(_: &VerifyOptions) -> Outcome {
    let chis = log_grid(-2.0, 2.0, 41);
    let rows = gap_scan(&[3, 6, 9, 12, 15], &chis, 1.0)?;
    // rows below the floating-point resolution of the gap carry no trend
    let trusted: Vec<_> = rows.iter().filter(|r| !r.underflow).collect();
    let bad = trusted
        .windows(2)
        .filter(|w| {
            w[0].n == w[1].n && w[1].gap.partial_cmp(&w[0].gap) != Some(std::cmp::Ordering::Greater)
        })
        .count();
    let skipped = rows.len() - trusted.len();
    Ok((
        bad == 0,
        format!("{bad} non-increasing steps ({skipped} underflow rows skipped)"),
    ))
}

fn criterion_heisenberg(_: &VerifyOptions) -> Outcome {
    let grid: Vec<f64> = ThetaGrid::full_turn()
        .points()
        .into_iter()
        .filter(|t| (t - (t / FRAC_PI_2).round() * FRAC_PI_2).abs() >= 1e-9)
        .collect();
    let mut worst = 0.0f64;
    for n in 3..=12 {
        let ifm = Interferometer::new(n)?;
        let cat = cat_state(n, 0.0)?;
        for &theta in &grid {
            let row = ifm.run(&cat, theta)?;
            worst = worst.max(
                row.sigma_theta
                    .map_or(f64::INFINITY, |s| (s * n as f64 - 1.0).abs()),
            );
        }
    }
    Ok(verdict(
        worst,
        1e-7,
        "max |N sigma - 1| off multiples of pi/2",
    ))
}

fn criterion_cat_curve(_: &VerifyOptions) -> Outcome {
    let grid = ThetaGrid::full_turn().points();
    let mut worst = 0.0f64;
    for n in 3..=12 {
        let ifm = Interferometer::new(n)?;
        let cat = cat_state(n, 0.0)?;
        for &theta in &grid {
            worst =
                worst.max((ifm.parity_signal(&cat, theta)? - analytic_cat_parity(n, theta)).abs());
        }
    }
    Ok(verdict(worst, 1e-10, "max deviation"))
}

fn criterion_ground_features(_: &VerifyOptions) -> Outcome {
    let n = 9;
    let ifm = Interferometer::new(n)?;
    let ground = |u: f64| -> Result<StateVector> {
        Ok(ground_and_gap(&ModelParams::new(n, 1.0, u, 0.0)?)?.psi0)
    };
    let mut zero_dev = 0.0f64;
    for u in [-1.0, -0.25] {
        let psi = ground(u)?;
        for theta in [0.0, PI, 2.0 * PI] {
            zero_dev = zero_dev.max(ifm.parity_signal(&psi, theta)?.abs());
        }
    }
    let cat = cat_state(n, 0.0)?;
    let mut extremum_dev = 0.0f64;
    let mut states = vec![cat.clone()];
    for u in [-1.0, -0.25, 0.0] {
        states.push(ground(u)?);
    }
    for psi in &states {
        for theta in [FRAC_PI_2, 1.5 * PI] {
            extremum_dev = extremum_dev.max((ifm.parity_signal(psi, theta)?.abs() - 1.0).abs());
        }
    }
    let prec = |psi: &StateVector| -> Result<f64> { Ok(ifm.run(psi, 0.0)?.precision_norm) };
    let (p_cat, p_1, p_q) = (prec(&cat)?, prec(&states[1])?, prec(&states[2])?);
    let ordered = p_cat > p_1 && p_1 > p_q;
    Ok((
        zero_dev <= 1e-9 && extremum_dev <= 1e-9 && ordered,
        format!(
            "zeros {zero_dev:.2e}, extrema {extremum_dev:.2e}, precision at 0: cat {p_cat:.4} > U=-1 {p_1:.4} > U=-0.25 {p_q:.4}"
        ),
    ))
}

fn criterion_perturbative(_: &VerifyOptions) -> Outcome {
    let n = 5;
    let ifm = Interferometer::new(n)?;
    let grid = ThetaGrid::full_turn().points();
    let p = ModelParams::new(n, 1.0, -50.0, 0.0)?;
    let psi = ground_and_gap(&p)?.psi0;
    let mut worst = 0.0f64;
    for &theta in &grid {
        worst =
            worst.max((ifm.parity_signal(&psi, theta)? - perturbative_parity(&p, theta)?).abs());
    }
    let cat = cat_state(n, 0.0)?;
    let mut points = Vec::new();
    for u in [-30.0, -100.0, -300.0] {
        let psi = ground_and_gap(&ModelParams::new(n, 1.0, u, 0.0)?)?.psi0;
        let mut dev = 0.0f64;
        for &theta in &grid {
            dev =
                dev.max((ifm.parity_signal(&psi, theta)? - ifm.parity_signal(&cat, theta)?).abs());
        }
        points.push(((1.0 / u.abs()).ln(), dev.ln()));
    }
    let slope = least_squares_slope(&points);
    Ok((
        worst <= 1e-5 && (slope - 2.0).abs() <= 0.1,
        format!("max deviation {worst:.3e} (tol 1e-5), log-log slope {slope:.4} (2 +- 0.1)"),
    ))
}

pub(crate) fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn criterion_matrix_element(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for n in 3..=15 {
        let ops = spin_ops(n, opts)?;
        let parity = parity_operator(n)?;
        let (plus, minus) = sy_extreme_eigenstates(n)?;
        let v = ops.apply_sx(&parity.apply(&ops.apply_sx(plus.amplitudes())));
        let element: Complex64 = minus
            .amplitudes()
            .iter()
            .zip(v.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        let expected = -i_pow(n as i64) * (n as f64 / 4.0);
        worst = worst.max((element - expected).norm());
    }
    Ok(verdict(worst, 1e-12, "max deviation"))
}

fn criterion_gap_limits(_: &VerifyOptions) -> Outcome {
    let mut worst_j0 = 0.0f64;
    let mut worst_u0 = 0.0f64;
    for n in 2..=15 {
        let sol = ground_and_gap(&ModelParams::new(n, 0.0, -1.0, 0.0)?)?;
        worst_j0 = worst_j0.max(sol.gap / sol.e0.abs());
        let sol = ground_and_gap(&ModelParams::new(n, 1.0, 0.0, 0.0)?)?;
        worst_u0 = worst_u0.max((sol.gap - 2.0).abs());
    }
    Ok((
        worst_j0 <= 1e-12 && worst_u0 <= 1e-12,
        format!("J=0 gap/|E0| {worst_j0:.2e} (1e-12), U=0 |gap-2J| {worst_u0:.2e} (1e-12)"),
    ))
}

/// Gaps at `chi = 1`, `J = 1` for `N = 3, 6, 9, 12, 15`.
pub fn chi_one_gaps() -> Result<Vec<f64>> {
    [3, 6, 9, 12, 15]
        .iter()
        .map(|&n| {
            let u = interaction_for_chi(n, 1.0, 1.0)?;
            Ok(ground_and_gap(&ModelParams::new(n, 1.0, u, 0.0)?)?.gap)
        })
        .collect()
}

fn criterion_gap_decreasing(_: &VerifyOptions) -> Outcome {
    let gaps = chi_one_gaps()?;
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = gaps.iter().map(|g| format!("{g:.4e}")).collect();
    Ok((decreasing, format!("gaps [{}]", shown.join(", "))))
}

/// `max / min` of the successive ratios `gap(N_k) / gap(N_k+1)`.
pub fn ratio_spread(gaps: &[f64]) -> f64 {
    let ratios: Vec<f64> = gaps.windows(2).map(|w| w[0] / w[1]).collect();
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    hi / lo
}

fn criterion_gap_ratio_spread(_: &VerifyOptions) -> Outcome {
    let gaps = chi_one_gaps()?;
    let ratios: Vec<f64> = gaps.windows(2).map(|w| w[0] / w[1]).collect();
    let spread = ratio_spread(&gaps);
    Ok((
        spread <= 3.0,
        format!("successive ratios {ratios:.3?}, spread {spread:.3} (tol 3)"),
    ))
}

fn criterion_thermal(_: &VerifyOptions) -> Outcome {
    let grid = ThetaGrid::full_turn().points();
    let mut worst = 0.0f64;
    for n in [3, 8, 9, 12] {
        let ifm = Interferometer::new(n)?;
        let mix = Mixture::thermal_cat_pair(n)?;
        for &theta in &grid {
            worst = worst.max(ifm.mixture_parity(&mix, theta)?.abs());
        }
    }
    Ok(verdict(worst, 1e-9, "max |parity|"))
}

fn criterion_derivative(_: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xde41);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.random_range(2..=15);
        let amps = (0..=n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let psi = StateVector::from_amplitudes(n, amps)?;
        let theta = rng.random_range(0.0..2.0 * PI);
        let ifm = Interferometer::new(n)?;
        let exact = ifm.parity_derivative(&ifm.output_state(&psi, theta)?)?;
        let fd = central_difference(|t| ifm.parity_signal(&psi, t), theta, 1e-5)?;
        worst = worst.max((exact - fd).abs() / exact.abs());
    }
    Ok(verdict(worst, 1e-6, "max relative error"))
}

fn criterion_oracles(_: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ac1e);
    let mut eig_dev = 0.0f64;
    for _ in 0..100 {
        let d = rng.random_range(1..=16);
        let t = random_tridiag(&mut rng, d)?;
        let ours = tridiag_eigen(&t)?;
        let oracle = jacobi_eigen(&t.to_dense())?;
        for (a, b) in ours.values().iter().zip(oracle.values()) {
            eig_dev = eig_dev.max((a - b).abs());
        }
    }
    let mut unitarity = 0.0f64;
    let mut wigner_dev = 0.0f64;
    for n in 2..=12 {
        let r = rotation_about_x(n, FRAC_PI_2)?;
        unitarity = unitarity.max(unitarity_residual(&r));
        let w = rotation_about_x_wigner(n, FRAC_PI_2);
        for (a, b) in r.iter().zip(w.iter()) {
            wigner_dev = wigner_dev
                .max((a.norm() - b.norm()).abs())
                .max((a - b).norm());
        }
    }
    Ok((
        eig_dev <= 1e-12 && unitarity <= 1e-11 && wigner_dev <= 1e-10,
        format!("eigenvalues {eig_dev:.2e} (1e-12), unitarity {unitarity:.2e} (1e-11), Wigner-d {wigner_dev:.2e} (1e-10)"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_invariants_pass() {
        // acceptance criteria (names starting with C) are gated by the acceptance test target
        let report = run(&VerifyOptions::default());
        for c in report.checks.iter().filter(|c| !c.name.starts_with('C')) {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn injected_sy_error_is_caught() {
        let report = run(&VerifyOptions {
            quick: true,
            inject_sy_sign_error: true,
        });
        let failed: Vec<_> = report.failures().map(|c| c.name).collect();
        assert!(
            failed.iter().any(|n| n.starts_with("spin algebra")),
            "{failed:?}"
        );
    }

    #[test]
    fn slope_fit() {
        let pts = [(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)];
        assert!((least_squares_slope(&pts) - 2.0).abs() < 1e-15);
    }
}
