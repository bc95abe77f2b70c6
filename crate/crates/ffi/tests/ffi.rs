use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use ggauss_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { gg_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(gg_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn pairing(flat: &[u32]) -> *mut GgPairing {
    let mut p = ptr::null_mut();
    let st = unsafe { gg_pairing_new(flat.as_ptr(), flat.len() / 2, &mut p) };
    assert_eq!(st, GgStatus::Ok, "{}", last_error());
    p
}

#[test]
fn pairing_statistics_and_rotation() {
    let p = pairing(&[1, 3, 2, 4, 5, 6]);
    let mut s = GgChordStats::default();
    assert_eq!(unsafe { gg_pairing_stats(p, &mut s) }, GgStatus::Ok);
    assert_eq!(
        s,
        GgChordStats {
            crossings: 1,
            singletons: 1,
            components: 2,
            non_singletons: 2
        }
    );
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { gg_pairing_rotate(p, &mut r) }, GgStatus::Ok);
    let mut blocks = [0u32; 6];
    assert_eq!(unsafe { gg_pairing_blocks(r, blocks.as_mut_ptr(), 6) }, GgStatus::Ok);
    assert_eq!(blocks, [1, 6, 2, 4, 3, 5]);
    let mut small = [0u32; 4];
    assert_eq!(
        unsafe { gg_pairing_blocks(r, small.as_mut_ptr(), 4) },
        GgStatus::BufferTooSmall
    );
    assert_eq!(unsafe { gg_pairing_size(r) }, 3);
    unsafe {
        gg_pairing_free(p);
        gg_pairing_free(r);
        gg_pairing_free(ptr::null_mut());
    }
}

#[test]
fn invalid_pairing_reports_error() {
    let flat = [1u32, 2, 2, 3];
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { gg_pairing_new(flat.as_ptr(), 2, &mut p) },
        GgStatus::InvalidArgument
    );
    assert!(p.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { gg_pairing_new(ptr::null(), 2, &mut p) }, GgStatus::NullPointer);
}

#[test]
fn sequences() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { gg_sequence(GgSequence::Connected, 6, false, &mut out) },
        GgStatus::Ok
    );
    assert_eq!(take_string(out), "1,1,4,27,248,2830");
    assert_eq!(
        unsafe { gg_sequence(GgSequence::Pairings, 4, false, &mut out) },
        GgStatus::Ok
    );
    assert_eq!(take_string(out), "1,3,15,105");
    assert_eq!(
        unsafe { gg_sequence(GgSequence::Catalan, 5, false, &mut out) },
        GgStatus::Ok
    );
    assert_eq!(take_string(out), "1,2,5,14,42");
    // beyond the cap only the formula is used
    assert_eq!(
        unsafe { gg_sequence(GgSequence::Singletons, 10, false, &mut out) },
        GgStatus::Ok
    );
    assert!(take_string(out).starts_with("1,4,21,144,1245,13140,164745"));
    assert_eq!(
        unsafe { gg_sequence(GgSequence::Singletons, 0, false, &mut out) },
        GgStatus::InvalidArgument
    );
}

#[test]
fn moments_handle() {
    let param = CString::new("2").unwrap();
    let mut m = ptr::null_mut();
    let st = unsafe { gg_moments_new(GgWeight::SingletonPower, param.as_ptr(), 3, false, &mut m) };
    assert_eq!(st, GgStatus::Ok);
    assert_eq!(unsafe { gg_moments_order(m) }, 3);
    let got: Vec<String> = (1..=3)
        .map(|n| {
            let mut s = ptr::null_mut();
            assert_eq!(unsafe { gg_moments_moment(m, n, &mut s) }, GgStatus::Ok);
            take_string(s)
        })
        .collect();
    assert_eq!(got, ["2", "9", "56"]);
    let mut x = 0.0;
    assert_eq!(unsafe { gg_moments_moment_f64(m, 2, &mut x) }, GgStatus::Ok);
    assert_eq!(x, 9.0);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { gg_moments_cumulant(m, 1, &mut s) }, GgStatus::Ok);
    assert_eq!(take_string(s), "2");
    assert_eq!(unsafe { gg_moments_moment(m, 4, &mut s) }, GgStatus::InvalidArgument);
    unsafe { gg_moments_free(m) };

    let q = CString::new("1/2").unwrap();
    let st = unsafe { gg_moments_new(GgWeight::NonSingletonPower, q.as_ptr(), 2, false, &mut m) };
    assert_eq!(st, GgStatus::Ok);
    assert_eq!(unsafe { gg_moments_moment(m, 2, &mut s) }, GgStatus::Ok);
    assert_eq!(take_string(s), "9/4");
    unsafe { gg_moments_free(m) };

    let st = unsafe { gg_moments_new(GgWeight::Constant, ptr::null(), 9, false, &mut m) };
    assert_eq!(st, GgStatus::CapExceeded);
    let st = unsafe { gg_moments_new(GgWeight::CrossingPower, ptr::null(), 2, false, &mut m) };
    assert_eq!(st, GgStatus::NullPointer);
}

#[test]
fn mu_b_interpolation() {
    let b = CString::new("0").unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { gg_mu_b_moments(GgWeight::Constant, ptr::null(), b.as_ptr(), 4, &mut out) };
    assert_eq!(st, GgStatus::Ok);
    assert_eq!(take_string(out), "1,2,5,14");
    let b = CString::new("1/2").unwrap();
    let st = unsafe { gg_mu_b_moments(GgWeight::Constant, ptr::null(), b.as_ptr(), 2, &mut out) };
    assert_eq!(st, GgStatus::Ok);
    assert_eq!(take_string(out), "1,9/4");
    let b = CString::new("3/2").unwrap();
    let st = unsafe { gg_mu_b_moments(GgWeight::Constant, ptr::null(), b.as_ptr(), 2, &mut out) };
    assert_eq!(st, GgStatus::InvalidArgument);
}

#[test]
fn monte_carlo_is_deterministic() {
    let run = || {
        let (mut m, mut s, mut t) = ([0.0; 4], [0.0; 4], [0.0; 4]);
        let st = unsafe {
            gg_markov_mc(
                50,
                3,
                4,
                GgDistribution::Gaussian,
                9,
                m.as_mut_ptr(),
                s.as_mut_ptr(),
                t.as_mut_ptr(),
            )
        };
        assert_eq!(st, GgStatus::Ok);
        (m, t)
    };
    let (a, t) = run();
    assert_eq!(a, run().0);
    assert_eq!(t, [0.0, 2.0, 0.0, 9.0]);
    let mut buf = [0.0; 4];
    let st = unsafe {
        gg_markov_mc(
            1,
            3,
            4,
            GgDistribution::Gaussian,
            9,
            buf.as_mut_ptr(),
            buf.as_mut_ptr(),
            buf.as_mut_ptr(),
        )
    };
    assert_eq!(st, GgStatus::InvalidArgument);
}

#[test]
fn permutation_kernels() {
    let (mut psd, mut min) = (0, 0.0);
    for (k, param) in [
        (GgKernel::IsolatedFixedPoints, 0.0),
        (GgKernel::PowerOfIsolated, 2.0),
        (GgKernel::ExpNonSingleton, 0.5),
    ] {
        assert_eq!(
            unsafe { gg_perm_check_pd(4, k, param, 1e-8, &mut psd, &mut min) },
            GgStatus::Ok
        );
        assert_eq!(psd, 1, "{k:?}: {min}");
    }
    assert_eq!(
        unsafe { gg_perm_check_pd(9, GgKernel::IsolatedFixedPoints, 0.0, 1e-8, &mut psd, &mut min) },
        GgStatus::SizeLimit
    );
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/ggauss.h")).unwrap();
    let src = std::fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|s| s.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

/// Static library next to the test binary's profile directory.
fn staticlib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libggauss_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_against_header() {
    let Some(lib) = staticlib() else {
        panic!("libggauss_ffi.a not found next to the test binary");
    };
    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let exe = out_dir.join("ggauss_smoke");
    let compile = Command::new("cc")
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("C compiler available");
    assert!(compile.status.success(), "{}", String::from_utf8_lossy(&compile.stderr));
    let run = Command::new(Path::new(&exe)).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
