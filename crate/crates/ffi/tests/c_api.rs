use std::ffi::{c_char, CStr};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use dwcat_ffi::*;

struct Model(*mut DwcatModel);

impl Model {
    fn new(n: usize, j: f64, u: f64, eps: f64) -> Self {
        let mut h = ptr::null_mut();
        let s = unsafe { dwcat_model_new(n, j, u, eps, &mut h) };
        assert_eq!(s, DwcatStatus::Ok, "{}", last_error());
        Model(h)
    }

    fn ground(&self) -> DwcatGround {
        let mut g = DwcatGround::default();
        assert_eq!(
            unsafe { dwcat_model_ground(self.0, &mut g) },
            DwcatStatus::Ok
        );
        g
    }
}

impl Drop for Model {
    fn drop(&mut self) {
        unsafe { dwcat_model_free(self.0) }
    }
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    unsafe { dwcat_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn ground_summary() {
    let m = Model::new(9, 1.0, -1.0, 0.0);
    let g = m.ground();
    assert!((g.chi - 1.0 / 9.0).abs() < 1e-15);
    assert!(g.gap > 0.0 && g.gap < 1e-5);
    assert_eq!(g.ground_sector, DWCAT_SECTOR_SYMMETRIC);
    assert_eq!(g.excited_sector, DWCAT_SECTOR_ANTISYMMETRIC);
    assert_eq!(g.underflow, 0);

    let free = Model::new(4, 1.0, 0.0, 0.0).ground();
    assert!((free.gap - 2.0).abs() < 1e-12);
    assert!(free.chi.is_infinite());

    let tilted = Model::new(4, 1.0, -1.0, 0.3).ground();
    assert_eq!(tilted.ground_sector, DWCAT_SECTOR_NONE);
}

#[test]
fn amplitudes_copy_out() {
    let m = Model::new(6, 1.0, -1.0, 0.0);
    assert_eq!(unsafe { dwcat_model_dim(m.0) }, 7);
    let (mut re, mut im) = (vec![0.0; 7], vec![0.0; 7]);
    let s = unsafe { dwcat_model_amplitudes(m.0, 0, re.as_mut_ptr(), im.as_mut_ptr(), 7) };
    assert_eq!(s, DwcatStatus::Ok);
    let norm: f64 = re.iter().zip(&im).map(|(a, b)| a * a + b * b).sum();
    assert!((norm - 1.0).abs() < 1e-12);
    for k in 0..7 {
        assert!(
            (re[k] - re[6 - k]).abs() < 1e-12,
            "ground state is swap symmetric"
        );
    }

    let s = unsafe { dwcat_model_amplitudes(m.0, 0, re.as_mut_ptr(), im.as_mut_ptr(), 6) };
    assert_eq!(s, DwcatStatus::BufferTooSmall);
    let s = unsafe { dwcat_model_amplitudes(m.0, 2, re.as_mut_ptr(), im.as_mut_ptr(), 7) };
    assert_eq!(s, DwcatStatus::InvalidArgument);
    let s = unsafe { dwcat_model_amplitudes(m.0, 0, ptr::null_mut(), im.as_mut_ptr(), 7) };
    assert_eq!(s, DwcatStatus::NullPointer);
}

#[test]
fn scan_matches_closed_forms() {
    let m = Model::new(9, 1.0, -100.0, 0.0);
    let thetas: Vec<f64> = (0..50).map(|k| k as f64 * 0.13).collect();
    let mut rows = vec![DwcatScanRow::default(); thetas.len()];

    let s = unsafe {
        dwcat_scan_parity(
            m.0,
            DWCAT_STATE_CAT,
            0.0,
            thetas.as_ptr(),
            thetas.len(),
            rows.as_mut_ptr(),
        )
    };
    assert_eq!(s, DwcatStatus::Ok);
    for (r, &t) in rows.iter().zip(&thetas) {
        assert_eq!(r.theta, t);
        assert!((r.parity - dwcat_analytic_cat_parity(9, t)).abs() < 1e-10);
    }

    let s = unsafe {
        dwcat_scan_parity(
            m.0,
            DWCAT_STATE_THERMAL,
            0.0,
            thetas.as_ptr(),
            thetas.len(),
            rows.as_mut_ptr(),
        )
    };
    assert_eq!(s, DwcatStatus::Ok);
    assert!(rows.iter().all(|r| r.parity.abs() <= 1e-9));

    let s = unsafe {
        dwcat_scan_parity(
            m.0,
            DWCAT_STATE_GROUND,
            0.0,
            thetas.as_ptr(),
            thetas.len(),
            rows.as_mut_ptr(),
        )
    };
    assert_eq!(s, DwcatStatus::Ok);
    for r in &rows {
        let mut p = 0.0;
        assert_eq!(
            unsafe { dwcat_perturbative_parity(m.0, r.theta, &mut p) },
            DwcatStatus::Ok
        );
        assert!((r.parity - p).abs() < 1e-6);
    }

    let s = unsafe {
        dwcat_scan_parity(
            m.0,
            7,
            0.0,
            thetas.as_ptr(),
            thetas.len(),
            rows.as_mut_ptr(),
        )
    };
    assert_eq!(s, DwcatStatus::InvalidArgument);
}

#[test]
fn state_parity_of_ground_matches_scan() {
    let m = Model::new(5, 1.0, -1.0, 0.0);
    let (mut re, mut im) = (vec![0.0; 6], vec![0.0; 6]);
    unsafe { dwcat_model_amplitudes(m.0, 0, re.as_mut_ptr(), im.as_mut_ptr(), 6) };
    let theta = 0.4;
    let mut row = DwcatScanRow::default();
    unsafe { dwcat_scan_parity(m.0, DWCAT_STATE_GROUND, 0.0, &theta, 1, &mut row) };
    let mut p = f64::NAN;
    let s = unsafe { dwcat_state_parity(m.0, re.as_ptr(), im.as_ptr(), 6, theta, &mut p) };
    assert_eq!(s, DwcatStatus::Ok);
    assert!((p - row.parity).abs() < 1e-14);
    let s = unsafe { dwcat_state_parity(m.0, re.as_ptr(), im.as_ptr(), 5, theta, &mut p) };
    assert_eq!(s, DwcatStatus::InvalidArgument);
}

#[test]
fn gap_rows_and_chi() {
    let mut row = DwcatGapRow::default();
    assert_eq!(
        unsafe { dwcat_gap_row(3, 1.0, f64::INFINITY, &mut row) },
        DwcatStatus::Ok
    );
    assert_eq!(row.u, 0.0);
    assert!((row.gap - 2.0).abs() < 1e-12);

    assert_eq!(
        unsafe { dwcat_gap_row(3, 1.0, 1.0, &mut row) },
        DwcatStatus::Ok
    );
    assert!((dwcat_chi(3, 1.0, row.u) - 1.0).abs() < 1e-14);
    assert_eq!(
        unsafe { dwcat_gap_row(3, 1.0, -1.0, &mut row) },
        DwcatStatus::InvalidArgument
    );
    assert!(dwcat_chi(0, 1.0, 1.0).is_nan());
}

#[test]
fn errors_and_nulls() {
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { dwcat_model_new(1, 1.0, -1.0, 0.0, &mut h) },
        DwcatStatus::InvalidArgument
    );
    assert!(h.is_null());
    assert!(last_error().contains("N > 1"));
    assert_eq!(
        unsafe { dwcat_model_new(3, f64::NAN, -1.0, 0.0, &mut h) },
        DwcatStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { dwcat_model_new(3, 1.0, -1.0, 0.0, ptr::null_mut()) },
        DwcatStatus::NullPointer
    );

    let mut g = DwcatGround::default();
    assert_eq!(
        unsafe { dwcat_model_ground(ptr::null(), &mut g) },
        DwcatStatus::NullPointer
    );
    assert_eq!(unsafe { dwcat_model_dim(ptr::null()) }, 0);
    unsafe { dwcat_model_free(ptr::null_mut()) };

    let m = Model::new(4, 1.0, 0.0, 0.0);
    let mut p = 0.0;
    assert_eq!(
        unsafe { dwcat_perturbative_parity(m.0, 0.1, &mut p) },
        DwcatStatus::InvalidArgument
    );
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(dwcat_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

/// `libdwcat_ffi.a` lands next to the test binary in `target/<profile>/deps`
/// and is copied up to `target/<profile>` by a plain `cargo build`.
fn static_lib() -> Option<PathBuf> {
    let deps = std::env::current_exe().ok()?.parent()?.to_path_buf();
    [
        deps.join("libdwcat_ffi.a"),
        deps.parent()?.join("libdwcat_ffi.a"),
    ]
    .into_iter()
    .find(|p| p.exists())
}

/// Compiles and runs a small C program against the generated header and the
/// static library. Skipped when no C compiler is available.
#[test]
fn c_program_links_and_runs() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let lib = static_lib().expect("libdwcat_ffi.a not found in the target directory");
    let exe = std::env::temp_dir().join(format!("dwcat_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(
        out.status.success(),
        "smoke exited with {:?}",
        out.status.code()
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok 0.1.0"));
}
