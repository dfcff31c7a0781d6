use std::f64::consts::PI;

use dwcat::eigen::{
    apply_unitary, rotation_about_x, tridiag_eigen, unitarity_residual, TridiagSymmetric,
};
use dwcat::interferometer::{phase_imprint, Interferometer};
use dwcat::model::{build_hamiltonian, ground_and_gap, ModelParams};
use dwcat::oracle::jacobi_eigen;
use dwcat::spinalg::StateVector;
use dwcat::Complex64;
use ndarray::Array1;
use proptest::prelude::*;

fn state() -> impl Strategy<Value = StateVector> {
    (2usize..=14).prop_flat_map(|n| {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n + 1)
            .prop_filter("nonzero", |v| {
                v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
            })
            .prop_map(move |v| {
                let amps: Array1<Complex64> =
                    v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
                StateVector::from_amplitudes(n, amps).unwrap()
            })
    })
}

fn params() -> impl Strategy<Value = ModelParams> {
    (2usize..=16, 0.1f64..3.0, -20.0f64..0.0)
        .prop_map(|(n, j, u)| ModelParams::new(n, j, u, 0.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pipeline_preserves_norm(psi in state(), theta in -PI..3.0 * PI) {
        let ifo = Interferometer::new(psi.n()).unwrap();
        let out = ifo.output_state(&psi, theta).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        prop_assert!((phase_imprint(&psi, theta).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parity_and_its_spread_are_complementary(psi in state(), theta in 0.0..2.0 * PI) {
        let row = Interferometer::new(psi.n()).unwrap().run(&psi, theta).unwrap();
        prop_assert!(row.parity.abs() <= 1.0 + 1e-12);
        prop_assert!((row.parity.powi(2) + row.sigma_parity.powi(2) - 1.0).abs() < 1e-12);
        prop_assert!(row.precision_norm >= 0.0);
    }

    #[test]
    fn parity_signal_has_period_two_pi(psi in state(), theta in 0.0..2.0 * PI) {
        let ifo = Interferometer::new(psi.n()).unwrap();
        let a = ifo.parity_signal(&psi, theta).unwrap();
        let b = ifo.parity_signal(&psi, theta + 2.0 * PI).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn rotation_is_unitary_and_composes(n in 2usize..=24, a in -4.0f64..4.0, b in -4.0f64..4.0) {
        let ra = rotation_about_x(n, a).unwrap();
        prop_assert!(unitarity_residual(&ra) < 1e-11);
        let rab = rotation_about_x(n, a + b).unwrap();
        let composed = rotation_about_x(n, b).unwrap().dot(&ra);
        let dev = (&rab - &composed).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-11);
    }

    #[test]
    fn unitary_application_keeps_norm(psi in state(), a in -4.0f64..4.0) {
        let r = rotation_about_x(psi.n(), a).unwrap();
        prop_assert!((apply_unitary(&r, &psi).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tridiagonal_solver_matches_jacobi(
        d in proptest::collection::vec(-10.0f64..10.0, 1..=16),
        e_seed in proptest::collection::vec(-10.0f64..10.0, 15),
    ) {
        let e = e_seed[..d.len() - 1].to_vec();
        let t = TridiagSymmetric::new(d, e).unwrap();
        let ours = tridiag_eigen(&t).unwrap();
        let oracle = jacobi_eigen(&t.to_dense()).unwrap();
        let scale = 1.0 + t.spectral_radius_bound();
        for (a, b) in ours.values().iter().zip(oracle.values()) {
            prop_assert!((a - b).abs() <= 1e-12 * scale);
        }
        prop_assert!(ours.values().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn ground_pair_is_ordered_and_swap_resolved(p in params()) {
        let sol = ground_and_gap(&p).unwrap();
        prop_assert!(sol.gap >= 0.0);
        prop_assert_eq!(sol.gap, sol.e1 - sol.e0);
        prop_assert!(sol.ground_sector.is_some() && sol.ground_sector != sol.excited_sector);
        let a = sol.psi0.amplitudes();
        let n = p.n;
        for k in 0..=n {
            prop_assert!((a[k] - a[n - k]).norm() < 1e-10);
        }
        prop_assert!(sol.psi0.inner(&sol.psi1).norm() < 1e-10);
    }

    #[test]
    fn ground_state_is_an_eigenvector(p in params(), eps in -2.0f64..2.0) {
        let p = ModelParams { eps, ..p };
        let sol = ground_and_gap(&p).unwrap();
        let h = build_hamiltonian(&p).unwrap();
        let v: Array1<f64> = sol.psi0.amplitudes().iter().map(|z| z.re).collect();
        let residual = (h.matvec(v.view()) - &v * sol.e0).iter().map(|x| x.abs()).fold(0.0, f64::max);
        prop_assert!(residual < 1e-10 * (1.0 + sol.e0.abs()));
    }
}
