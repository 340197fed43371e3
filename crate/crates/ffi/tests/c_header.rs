//! Compiles a C program against the generated header and the shared
//! library, then runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps/
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler on PATH; C smoke test not run");
        return;
    }
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib_dir = target_dir();
    assert!(
        lib_dir.join("libpolar3_ffi.so").exists() || lib_dir.join("libpolar3_ffi.dylib").exists(),
        "shared library missing in {}",
        lib_dir.display()
    );
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("polar3_smoke");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&out)
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg("-L")
        .arg(&lib_dir)
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .args(["-lpolar3_ffi", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");

    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));

    // The first Haar draw for seed 42 matches the Rust generator bit for bit.
    let mut g = polar3::interface::SeededGenerator::new(42);
    let u = polar3::interface::generate_haar_unitary(&mut g);
    let expected = format!("{:?} {:?}", u.0[0][0].re, u.0[0][0].im);
    let got = String::from_utf8(run.stdout).unwrap();
    let parsed: Vec<f64> = got.split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert_eq!(format!("{:?} {:?}", parsed[0], parsed[1]), expected);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/polar3.h")).unwrap();
    for name in [
        "p3_status_message",
        "p3_matrix_identity",
        "p3_matrix_from_parts",
        "p3_matrix_parts",
        "p3_matrix_free",
        "p3_compose",
        "p3_recover",
        "p3_characteristic",
        "p3_rng_new",
        "p3_rng_free",
        "p3_haar",
        "typedef struct P3Matrix P3Matrix",
        "typedef struct P3Rng P3Rng",
        "P3_STATUS_TOLERANCE_EXCEEDED = 11",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
