//! Compiles and links a C program against the generated header and the
//! static library.

use std::path::{Path, PathBuf};
use std::process::Command;

fn target_profile_dir() -> PathBuf {
    // <target>/<profile>/deps/header-<hash>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn compiler() -> Option<&'static str> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "jordan_wishart.h"

int main(void) {
    JwAlgebra *alg = NULL;
    if (jw_algebra_new(JW_KIND_SYM_REAL, 3, 0, &alg) != JW_STATUS_OK) return 1;
    size_t d1 = 0, d2 = 0;
    if (jw_psi_dims(alg, &d1, &d2) != JW_STATUS_OK) return 2;
    if (d1 != 15 || d2 != 6) return 3;
    double x[6] = {1, 2, 3, 0, 0, 0};
    double det = 0;
    if (jw_determinant(alg, x, 6, &det) != JW_STATUS_OK) return 4;
    if (det < 5.999999 || det > 6.000001) return 5;
    jw_algebra_free(alg);
    JwRecovered rec;
    if (jw_recover_structure(0.3, 0.5, 0.1, 6, &rec) != JW_STATUS_INCONSISTENT_CONSTANTS) return 6;
    if (strstr(jw_last_error_message(), "b2 < a^2") == NULL) return 7;
    printf("ok\n");
    return 0;
}
"#;

#[test]
fn header_compiles_and_links() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(include.join("jordan_wishart.h").exists());
    let lib = target_profile_dir().join("libjordan_wishart_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping link step", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
