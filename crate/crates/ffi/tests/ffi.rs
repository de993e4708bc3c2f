use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use phondeq_ffi::*;

fn preset(name: &str) -> *mut PhondeqSystem {
    let name = CString::new(name).unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { phondeq_system_from_preset(name.as_ptr(), &mut sys) }, PhondeqStatus::Ok);
    assert!(!sys.is_null());
    sys
}

fn last_error() -> String {
    let p = phondeq_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn kernels_match_library() {
    let mut g = 0.0;
    assert_eq!(unsafe { phondeq_gamma_general(7.0, 0.9, 1.3, 12.0, &mut g) }, PhondeqStatus::Ok);
    assert_eq!(g, phondeq::gamma_general(7.0, 0.9, 1.3, 12.0).unwrap());
    assert_eq!(phondeq_gamma_identical(9.5, 10.0), phondeq::gamma_identical(9.5, 10.0));
    assert_eq!(phondeq_gamma_zero(1.25), phondeq::gamma_zero(1.25));
    assert_eq!(unsafe { phondeq_gamma_general(1.0, -1.0, 1.0, 3.0, &mut g) }, PhondeqStatus::InvalidArgument);
    assert!(last_error().contains("domain"));
}

#[test]
fn system_rate_exponent_and_concurrence() {
    let sys = preset("paper45");
    let geometry = phondeq::Preset::Paper45.geometry();
    let (m, s) = phondeq::ONE_EXCITATION;
    let model = phondeq::rates::RateModel::new(&geometry);
    let (mut rate, mut exponent, mut c) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(phondeq_decoherence_rate(sys, 10.0, m.index() as u32, s.index() as u32, &mut rate), PhondeqStatus::Ok);
        assert_eq!(phondeq_integrated_exponent(sys, 10.0, 1, 2, &mut exponent), PhondeqStatus::Ok);
        assert_eq!(phondeq_concurrence(sys, 10.0, 0.5, 0.05, false, &mut c), PhondeqStatus::Ok);
    }
    assert_eq!(rate, model.decoherence_rate(10.0, m, s).unwrap());
    assert_eq!(exponent, model.integrated_exponent(10.0, m, s).unwrap());
    let expected = phondeq::TwoQubitSystem::new(geometry).unwrap().concurrence_one_excitation(10.0, 0.5, 0.05).unwrap();
    assert_eq!(c, expected);

    assert_eq!(unsafe { phondeq_decoherence_rate(sys, 1.0, 4, 0, &mut rate) }, PhondeqStatus::InvalidArgument);
    assert!(last_error().contains("0..4"));
    unsafe { phondeq_system_free(sys) };
}

#[test]
fn custom_system_and_bad_geometry() {
    let qubits = [
        PhondeqQubit { center: [0.0; 3], axis: [0.0, 10.0, 0.0], radius_minus: 1.0, radius_plus: 1.0 },
        PhondeqQubit { center: [20.0, 0.0, 0.0], axis: [0.0, 10.0, 0.0], radius_minus: 1.0, radius_plus: 1.0 },
    ];
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { phondeq_system_new(qubits.as_ptr(), 2, &mut sys) }, PhondeqStatus::Ok);
    unsafe { phondeq_system_free(sys) };

    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { phondeq_system_new(qubits.as_ptr(), 1, &mut sys) }, PhondeqStatus::InvalidGeometry);
    assert!(sys.is_null());

    let zero_axis = [PhondeqQubit { axis: [0.0; 3], ..qubits[0] }, qubits[1]];
    assert_ne!(unsafe { phondeq_system_new(zero_axis.as_ptr(), 2, &mut sys) }, PhondeqStatus::Ok);
}

#[test]
fn null_and_unknown_inputs() {
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { phondeq_system_from_preset(ptr::null(), &mut sys) }, PhondeqStatus::NullPointer);
    let name = CString::new("hexagonal").unwrap();
    assert_eq!(unsafe { phondeq_system_from_preset(name.as_ptr(), &mut sys) }, PhondeqStatus::UnknownPreset);
    assert!(last_error().contains("hexagonal"));
    assert_eq!(unsafe { phondeq_gamma_general(1.0, 1.0, 1.0, 1.0, ptr::null_mut()) }, PhondeqStatus::NullPointer);
    let mut x = 0.0;
    assert_eq!(unsafe { phondeq_decoherence_rate(ptr::null(), 1.0, 0, 1, &mut x) }, PhondeqStatus::NullPointer);
    unsafe {
        phondeq_system_free(ptr::null_mut());
        phondeq_oracle_free(ptr::null_mut());
    }
}

#[test]
fn wootters_of_bell_and_product_states() {
    let mut re = [0.0; 16];
    let im = [0.0; 16];
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        re[4 * i + j] = 0.5;
    }
    let mut c = 0.0;
    assert_eq!(unsafe { phondeq_wootters_concurrence(re.as_ptr(), im.as_ptr(), &mut c) }, PhondeqStatus::Ok);
    assert!((c - 1.0).abs() < 1e-12);

    let mut product = [0.0; 16];
    product[0] = 1.0;
    assert_eq!(unsafe { phondeq_wootters_concurrence(product.as_ptr(), im.as_ptr(), &mut c) }, PhondeqStatus::Ok);
    assert!(c.abs() < 1e-12);

    let mut bad = [0.0; 16];
    bad[0] = 2.0;
    assert_eq!(unsafe { phondeq_wootters_concurrence(bad.as_ptr(), im.as_ptr(), &mut c) }, PhondeqStatus::NonPhysical);
}

#[test]
fn oracle_handle_tracks_closed_form() {
    let mut oracle = ptr::null_mut();
    assert_eq!(
        unsafe { phondeq_oracle_new(40.0, 400, 16, PhondeqThermalWeight::Classical, 0.0, &mut oracle) },
        PhondeqStatus::Ok
    );
    let mut k = 0.0;
    assert_eq!(unsafe { phondeq_oracle_normalization(oracle, &mut k) }, PhondeqStatus::Ok);
    assert!((k - std::f64::consts::FRAC_2_PI).abs() < 1e-8);

    let sys = preset("collinear");
    let (mut sampled, mut closed) = (0.0, 0.0);
    unsafe {
        assert_eq!(phondeq_oracle_rate(oracle, sys, 12.0, 1, 2, &mut sampled), PhondeqStatus::Ok);
        assert_eq!(phondeq_decoherence_rate(sys, 12.0, 1, 2, &mut closed), PhondeqStatus::Ok);
        phondeq_system_free(sys);
        phondeq_oracle_free(oracle);
    }
    assert!((sampled - closed).abs() < 1e-6 * closed.abs().max(1.0));

    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { phondeq_oracle_new(40.0, 10, 4, PhondeqThermalWeight::FullCoth, -1.0, &mut bad) },
        PhondeqStatus::InvalidArgument
    );
    assert_eq!(unsafe { phondeq_oracle_new(-1.0, 10, 4, PhondeqThermalWeight::Classical, 0.0, &mut bad) }, PhondeqStatus::InvalidArgument);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(phondeq_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn target_profile_dir() -> PathBuf {
    // <target>/<profile>/deps/ffi-<hash>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("phondeq.h").exists());
    let archive = target_profile_dir().join("libphondeq_ffi.a");
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let src = dir.join("smoke.c");
    std::fs::write(&src, C_SMOKE).unwrap();
    let exe = dir.join("smoke");
    let mut cmd = Command::new(&cc);
    cmd.arg("-std=c11").arg("-Wall").arg("-Werror").arg("-I").arg(&header_dir).arg(&src);
    if !archive.exists() {
        let status = cmd.arg("-fsyntax-only").status().unwrap();
        assert!(status.success());
        return;
    }
    let status = cmd.arg(&archive).args(["-lm", "-lpthread", "-ldl", "-o"]).arg(&exe).status().unwrap();
    assert!(status.success(), "C compile failed");
    let output = Command::new(&exe).output().unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    assert_eq!(String::from_utf8_lossy(&output.stdout).trim(), "ok");
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc.to_string());
        }
    }
    Err(())
}

const C_SMOKE: &str = r#"
#include <math.h>
#include <stdio.h>
#include "phondeq.h"

int main(void) {
    PhondeqSystem *sys = NULL;
    if (phondeq_system_from_preset("paper45", &sys) != PHONDEQ_STATUS_OK) return 1;
    double rate = 0.0, c = 0.0;
    if (phondeq_decoherence_rate(sys, 10.0, 1, 2, &rate) != PHONDEQ_STATUS_OK) return 2;
    if (phondeq_concurrence(sys, 40.0, 0.5, 0.0, true, &c) != PHONDEQ_STATUS_OK) return 3;
    if (fabs(c - 1.0) > 1e-12) return 4;
    if (phondeq_decoherence_rate(sys, 10.0, 9, 2, &rate) != PHONDEQ_STATUS_INVALID_ARGUMENT) return 5;
    if (phondeq_last_error_message() == NULL) return 6;
    phondeq_system_free(sys);
    puts("ok");
    return 0;
}
"#;
