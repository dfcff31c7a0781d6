//! Two-site Bose-Hubbard model in the spin representation.
//!
//! The Hamiltonian is implemented as
//!
//! ```text
//! H = -2 J Sx + 2 U Sz^2 + eps Sz
//! ```
//!
//! which differs from the number-operator form
//! `-J (bl^+ br + br^+ bl) + U (bl^+ bl^+ bl bl + br^+ br^+ br br) + eps/2 (nl - nr)`
//! by the constant `U (N^2/2 - N)`. The constant is never added back: gaps,
//! states and every observable here are independent of it.
//!
//! At `eps = 0` the Hamiltonian commutes with the left/right swap
//! `i -> N - i`, and [`ground_and_gap`] diagonalizes the symmetric and
//! antisymmetric sectors separately. The two lowest levels then come from
//! different blocks and their splitting is resolved even when it is far below
//! the roundoff of the full matrix.

use ndarray::Array1;
use serde::Serialize;

use crate::eigen::{fix_sign, tridiag_eigen, EigenDecomposition, TridiagSymmetric};
use crate::error::{Error, Result};
use crate::spinalg::{Basis, StateVector};

/// Gaps below this fraction of `|E0|` are reported as unresolved.
pub const UNDERFLOW_RELATIVE_GAP: f64 = 1e-13;

/// `(N, J, U, eps)` in angular-frequency units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub n: usize,
    pub j: f64,
    pub u: f64,
    pub eps: f64,
}

impl ModelParams {
    pub fn new(n: usize, j: f64, u: f64, eps: f64) -> Result<Self> {
        let p = Self { n, j, u, eps };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        Basis::new(self.n)?;
        if !(self.j.is_finite() && self.u.is_finite() && self.eps.is_finite()) {
            return Err(Error::invalid("J, U and eps must be finite"));
        }
        Ok(())
    }

    /// Repulsive interactions are outside the regime the cat-state analysis
    /// targets, but the model is still well defined.
    pub fn is_repulsive(&self) -> bool {
        self.u > 0.0
    }
}

/// Left/right swap sector of an eigenstate when `eps = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Symmetric,
    Antisymmetric,
}

impl Sector {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sector::Symmetric => "symmetric",
            Sector::Antisymmetric => "antisymmetric",
        }
    }
}

/// Ground state, first excited state and the gap between them.
#[derive(Debug, Clone)]
pub struct GroundSolution {
    pub params: ModelParams,
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
    pub psi0: StateVector,
    pub psi1: StateVector,
    /// `None` when `eps != 0` and the swap symmetry is broken.
    pub ground_sector: Option<Sector>,
    pub excited_sector: Option<Sector>,
}

impl GroundSolution {
    /// True when the gap is too small relative to `|E0|` to be trusted.
    pub fn underflow(&self) -> bool {
        self.gap < UNDERFLOW_RELATIVE_GAP * self.e0.abs()
    }
}

pub fn build_hamiltonian(p: &ModelParams) -> Result<TridiagSymmetric> {
    p.validate()?;
    let n = p.n;
    let half = n as f64 / 2.0;
    let diag = (0..=n)
        .map(|i| {
            let m = i as f64 - half;
            2.0 * p.u * m * m + p.eps * m
        })
        .collect();
    // -2J * sqrt((i+1)(N-i))/2
    let off = (0..n)
        .map(|i| -p.j * (((i + 1) * (n - i)) as f64).sqrt())
        .collect();
    TridiagSymmetric::new(diag, off)
}

/// Symmetric and antisymmetric blocks of a swap-invariant tridiagonal matrix.
///
/// Block row `k` corresponds to `(e_k +- e_{N-k}) / sqrt2`; for even `N` the
/// symmetric block ends with the unpaired middle vector `e_{N/2}`.
#[derive(Debug, Clone)]
pub struct SwapBlocks {
    pub symmetric: TridiagSymmetric,
    pub antisymmetric: TridiagSymmetric,
    n: usize,
}

pub fn swap_blocks(h: &TridiagSymmetric) -> Result<SwapBlocks> {
    let n = h.dim() - 1;
    Basis::new(n)?;
    let d = h.diag();
    let e = h.offdiag();
    for i in 0..=n {
        if d[i] != d[n - i] {
            return Err(Error::invalid("matrix diagonal is not swap symmetric"));
        }
    }
    for i in 0..n {
        if e[i] != e[n - 1 - i] {
            return Err(Error::invalid("matrix off-diagonal is not swap symmetric"));
        }
    }

    let (symmetric, antisymmetric) = if n.is_multiple_of(2) {
        let half = n / 2;
        let mut sd: Vec<f64> = d[..half].to_vec();
        sd.push(d[half]);
        let mut so: Vec<f64> = e[..half - 1].to_vec();
        so.push(std::f64::consts::SQRT_2 * e[half - 1]);
        let ad = d[..half].to_vec();
        let ao = e[..half - 1].to_vec();
        (
            TridiagSymmetric::new(sd, so)?,
            TridiagSymmetric::new(ad, ao)?,
        )
    } else {
        // pair (M, M+1) is adjacent and couples to itself
        let m = (n - 1) / 2;
        let inner = e[m];
        let mut sd: Vec<f64> = d[..m].to_vec();
        sd.push(d[m] + inner);
        let mut ad: Vec<f64> = d[..m].to_vec();
        ad.push(d[m] - inner);
        let off = e[..m].to_vec();
        (
            TridiagSymmetric::new(sd, off.clone())?,
            TridiagSymmetric::new(ad, off)?,
        )
    };
    Ok(SwapBlocks {
        symmetric,
        antisymmetric,
        n,
    })
}

impl SwapBlocks {
    /// Map a block eigenvector back to the full `N + 1` basis.
    pub fn embed(&self, sector: Sector, coeffs: &[f64]) -> Array1<f64> {
        let n = self.n;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let sign = match sector {
            Sector::Symmetric => 1.0,
            Sector::Antisymmetric => -1.0,
        };
        let mut full = Array1::zeros(n + 1);
        for (k, &c) in coeffs.iter().enumerate() {
            if 2 * k == n {
                full[k] = c;
            } else {
                full[k] += c * r;
                full[n - k] += sign * c * r;
            }
        }
        full
    }
}

fn state_from(n: usize, v: Array1<f64>) -> Result<StateVector> {
    let mut v = v;
    fix_sign(&mut v);
    StateVector::from_real(n, v.as_slice().expect("contiguous"))
}

/// Ground state, first excited state and gap.
///
/// At `eps = 0` the sectors are solved separately; `E1` is the smaller of the
/// other sector's ground energy and the ground sector's second level.
/// Otherwise the full tridiagonal matrix is solved.
pub fn ground_and_gap(p: &ModelParams) -> Result<GroundSolution> {
    let h = build_hamiltonian(p)?;
    if p.eps != 0.0 {
        let eig = tridiag_eigen(&h)?;
        let v = eig.values();
        return Ok(GroundSolution {
            params: *p,
            e0: v[0],
            e1: v[1],
            gap: v[1] - v[0],
            psi0: state_from(p.n, eig.vector(0).to_owned())?,
            psi1: state_from(p.n, eig.vector(1).to_owned())?,
            ground_sector: None,
            excited_sector: None,
        });
    }

    let blocks = swap_blocks(&h)?;
    let sym = tridiag_eigen(&blocks.symmetric)?;
    let anti = tridiag_eigen(&blocks.antisymmetric)?;

    let pick = |eig: &EigenDecomposition, k: usize| (eig.values()[k], eig.vector(k).to_vec());
    let (s0, a0) = (sym.values()[0], anti.values()[0]);
    // Ties go to the symmetric sector.
    let (ground_sector, ground, other, same) = if s0 <= a0 {
        (Sector::Symmetric, &sym, &anti, &sym)
    } else {
        (Sector::Antisymmetric, &anti, &sym, &anti)
    };
    let (e0, v0) = pick(ground, 0);
    let other_sector = match ground_sector {
        Sector::Symmetric => Sector::Antisymmetric,
        Sector::Antisymmetric => Sector::Symmetric,
    };
    let (e1, v1, excited_sector) = if same.dim() > 1 && same.values()[1] < other.values()[0] {
        let (e, v) = pick(same, 1);
        (e, v, ground_sector)
    } else {
        let (e, v) = pick(other, 0);
        (e, v, other_sector)
    };

    Ok(GroundSolution {
        params: *p,
        e0,
        e1,
        gap: e1 - e0,
        psi0: state_from(p.n, blocks.embed(ground_sector, &v0))?,
        psi1: state_from(p.n, blocks.embed(excited_sector, &v1))?,
        ground_sector: Some(ground_sector),
        excited_sector: Some(excited_sector),
    })
}

/// `chi = J^2 / (N U^2)`; infinite when `U = 0`.
pub fn chi(p: &ModelParams) -> f64 {
    chi_value(p.n, p.j, p.u)
}

pub fn chi_value(n: usize, j: f64, u: f64) -> f64 {
    if u == 0.0 {
        return f64::INFINITY;
    }
    j * j / (n as f64 * u * u)
}

/// Attractive interaction giving the requested `chi`: `U = -|J| / sqrt(N chi)`.
/// An infinite `chi` maps to `U = 0`.
pub fn interaction_for_chi(n: usize, j: f64, chi: f64) -> Result<f64> {
    if chi.is_infinite() && chi > 0.0 {
        return Ok(0.0);
    }
    if !(chi > 0.0 && chi.is_finite()) {
        return Err(Error::domain(format!("chi must be positive, got {chi}")));
    }
    Ok(-j.abs() / (n as f64 * chi).sqrt())
}

/// Rough atom-number ceiling `(omega / J)^2` before collapse or breakdown of
/// the two-mode picture, from `N |U| ~ omega` combined with `chi ~ 1`.
pub fn collapse_atom_bound(omega: f64, j: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) || !(j > 0.0 && j.is_finite()) {
        return Err(Error::domain(
            "trap frequency and tunneling must be positive",
        ));
    }
    Ok((omega / j).powi(2))
}

/// One point of a gap sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRow {
    pub n: usize,
    pub chi: f64,
    pub u: f64,
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
    pub underflow: bool,
}

/// Gap `E1 - E0` over a grid of atom numbers and `chi` values at fixed `J`,
/// with `U = -|J| / sqrt(N chi)`. Rows are ordered by `(N, chi)`.
pub fn gap_scan(ns: &[usize], chis: &[f64], j: f64) -> Result<Vec<GapRow>> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    let mut chis = chis.to_vec();
    if chis.iter().any(|c| c.is_nan()) {
        return Err(Error::invalid("chi grid contains NaN"));
    }
    chis.sort_by(f64::total_cmp);

    let mut rows = Vec::with_capacity(ns.len() * chis.len());
    for &n in &ns {
        for &chi in &chis {
            let u = interaction_for_chi(n, j, chi)?;
            let sol = ground_and_gap(&ModelParams::new(n, j, u, 0.0)?)?;
            rows.push(GapRow {
                n,
                chi,
                u,
                e0: sol.e0,
                e1: sol.e1,
                gap: sol.gap,
                underflow: sol.underflow(),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::jacobi_eigen;
    use crate::spinalg::{binomial_amplitudes, cat_state};

    fn params(n: usize, j: f64, u: f64) -> ModelParams {
        ModelParams::new(n, j, u, 0.0).unwrap()
    }

    #[test]
    fn hamiltonian_n2_pure_interaction() {
        let h = build_hamiltonian(&params(2, 0.0, -1.0)).unwrap();
        assert_eq!(h.diag(), &[-2.0, 0.0, -2.0]);
        let sol = ground_and_gap(&params(2, 0.0, -1.0)).unwrap();
        // N^2 U / 2
        assert_eq!(sol.e0, -2.0);
    }

    #[test]
    fn hamiltonian_pure_tunneling_spectrum() {
        let h = build_hamiltonian(&params(3, 1.0, 0.0)).unwrap();
        let eig = tridiag_eigen(&h).unwrap();
        for (a, b) in eig.values().iter().zip([-3.0, -1.0, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn gap_n9_matches_dense_oracle() {
        let p = params(9, 1.0, -1.0);
        let sol = ground_and_gap(&p).unwrap();
        let dense = jacobi_eigen(&build_hamiltonian(&p).unwrap().to_dense()).unwrap();
        let oracle_gap = dense.values()[1] - dense.values()[0];
        assert!(
            (sol.gap - oracle_gap).abs() <= 1e-12,
            "{} vs {}",
            sol.gap,
            oracle_gap
        );
        assert!((sol.e0 - dense.values()[0]).abs() <= 1e-12);
    }

    #[test]
    fn exact_degeneracy_without_tunneling() {
        let sol = ground_and_gap(&params(5, 0.0, -1.0)).unwrap();
        assert_eq!(sol.gap, 0.0);
        for psi in [&sol.psi0, &sol.psi1] {
            let pr = psi.probabilities();
            assert!((pr[0] + pr[5] - 1.0).abs() < 1e-15);
        }
        assert!(sol.psi0.inner(&sol.psi1).norm() < 1e-15);
    }

    #[test]
    fn noninteracting_gap_is_two_j() {
        let sol = ground_and_gap(&params(4, 1.0, 0.0)).unwrap();
        assert!((sol.gap - 2.0).abs() < 1e-12);
        assert!((sol.e0 + 4.0).abs() < 1e-12);
        let w = binomial_amplitudes(4);
        for (z, x) in sol.psi0.amplitudes().iter().zip(w) {
            assert!((z.re.abs() - x).abs() < 1e-12);
        }
    }

    #[test]
    fn cat_overlap_matches_dense_oracle() {
        let p = params(9, 1.0, -0.25);
        let sol = ground_and_gap(&p).unwrap();
        let dense = jacobi_eigen(&build_hamiltonian(&p).unwrap().to_dense()).unwrap();
        let g = dense.vectors().column(0);
        let oracle = 0.5 * (g[0] + g[9]).powi(2);
        let cat = cat_state(9, 0.0).unwrap();
        let ours = cat.inner(&sol.psi0).norm_sqr();
        assert!((ours - oracle).abs() <= 1e-10, "{ours} vs {oracle}");
    }

    #[test]
    fn strong_attraction_approaches_symmetric_cat() {
        let sol = ground_and_gap(&params(6, 1.0, -40.0)).unwrap();
        assert_eq!(sol.ground_sector, Some(Sector::Symmetric));
        assert_eq!(sol.excited_sector, Some(Sector::Antisymmetric));
        let overlap = cat_state(6, 0.0).unwrap().inner(&sol.psi0).norm_sqr();
        assert!(overlap > 0.99);
    }

    #[test]
    fn tilted_wells_use_full_solve() {
        let p = ModelParams::new(6, 1.0, -0.5, 0.3).unwrap();
        let sol = ground_and_gap(&p).unwrap();
        assert!(sol.ground_sector.is_none());
        let dense = jacobi_eigen(&build_hamiltonian(&p).unwrap().to_dense()).unwrap();
        assert!((sol.gap - (dense.values()[1] - dense.values()[0])).abs() < 1e-12);
    }

    #[test]
    fn blocks_reproduce_full_spectrum() {
        for n in 2..=15 {
            let h = build_hamiltonian(&params(n, 0.7, -1.3)).unwrap();
            let b = swap_blocks(&h).unwrap();
            let mut merged: Vec<f64> = tridiag_eigen(&b.symmetric)
                .unwrap()
                .values()
                .iter()
                .chain(tridiag_eigen(&b.antisymmetric).unwrap().values())
                .copied()
                .collect();
            merged.sort_by(f64::total_cmp);
            let full = tridiag_eigen(&h).unwrap();
            let scale = h.spectral_radius_bound();
            for (a, c) in merged.iter().zip(full.values()) {
                assert!((a - c).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn chi_values() {
        assert!((chi(&params(9, 1.0, -1.0)) - 1.0 / 9.0).abs() < 1e-15);
        assert!((chi(&params(9, 1.0, -0.25)) - 16.0 / 9.0).abs() < 1e-15);
        assert!(chi(&params(9, 1.0, -1e300)) == 0.0);
        assert!(chi(&params(9, 1.0, 0.0)).is_infinite());
    }

    #[test]
    fn chi_inversion() {
        let u = interaction_for_chi(3, 1.0, 1.0).unwrap();
        assert!((u + 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(interaction_for_chi(6, 1.0, f64::INFINITY).unwrap(), 0.0);
        assert!(interaction_for_chi(6, 1.0, 0.0).is_err());
        assert!(interaction_for_chi(6, 1.0, -1.0).is_err());
    }

    #[test]
    fn collapse_bound() {
        assert_eq!(collapse_atom_bound(10.0, 1.0).unwrap(), 100.0);
        assert_eq!(collapse_atom_bound(1.0, 1.0).unwrap(), 1.0);
        assert!((collapse_atom_bound(100.0, 0.1).unwrap() - 1e6).abs() < 1e-6);
        assert!(collapse_atom_bound(0.0, 1.0).is_err());
        assert!(collapse_atom_bound(1.0, -1.0).is_err());
    }

    #[test]
    fn gap_scan_rows() {
        let rows = gap_scan(&[3], &[1.0], 1.0).unwrap();
        let p = params(3, 1.0, -1.0 / 3f64.sqrt());
        let dense = jacobi_eigen(&build_hamiltonian(&p).unwrap().to_dense()).unwrap();
        assert!((rows[0].gap - (dense.values()[1] - dense.values()[0])).abs() <= 1e-12);

        let rows = gap_scan(&[15, 3, 9, 6, 12], &[1.0], 1.0).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.n).collect::<Vec<_>>(),
            vec![3, 6, 9, 12, 15]
        );
        assert!(rows.windows(2).all(|w| w[1].gap < w[0].gap));

        let rows = gap_scan(&[6], &[f64::INFINITY], 1.0).unwrap();
        assert!((rows[0].gap - 2.0).abs() < 1e-12);
        assert_eq!(rows[0].u, 0.0);
    }

    #[test]
    fn gap_increases_with_chi() {
        let chis: Vec<f64> = (0..41).map(|k| 10f64.powf(-2.0 + 0.1 * k as f64)).collect();
        for n in [3, 6, 9] {
            let rows = gap_scan(&[n], &chis, 1.0).unwrap();
            assert!(rows.windows(2).all(|w| w[1].gap > w[0].gap), "N={n}");
        }
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(ModelParams::new(1, 1.0, -1.0, 0.0).is_err());
        assert!(ModelParams::new(4, f64::NAN, -1.0, 0.0).is_err());
        assert!(ModelParams::new(4, 1.0, 1.0, 0.0).unwrap().is_repulsive());
    }
}
