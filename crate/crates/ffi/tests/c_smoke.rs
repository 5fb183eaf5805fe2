//! Compiles and runs a small C program against the generated header and the
//! shared library, so the ABI is exercised exactly the way a foreign
//! consumer would.

use std::path::PathBuf;
use std::process::Command;

#[test]
fn c_program_builds_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = {
        // target/<profile>/deps/<this test binary> -> target/<profile>
        let exe = std::env::current_exe().unwrap();
        exe.parent().unwrap().parent().unwrap().to_path_buf()
    };
    let lib = profile_dir.join("libpainleve3_ffi.so");
    if !lib.exists() {
        // cargo built only the rlib for this test invocation; produce the
        // cdylib explicitly
        let status = Command::new(env!("CARGO"))
            .args(["build", "-p", "painleve3-ffi"])
            .current_dir(&manifest)
            .status()
            .unwrap();
        assert!(status.success(), "could not build the cdylib");
    }
    assert!(lib.exists(), "missing {lib:?}");

    let src = r#"
#include <stdio.h>
#include <string.h>
#include "painleve3.h"

int main(void) {
    P3Umemura *seq = p3_umemura_new("1/4");
    if (!seq) return 1;
    if (p3_umemura_extend(seq, 3) != P3Ok) return 2;
    char *v = p3_umemura_value_at_zero(seq, 1);
    if (!v || strcmp(v, "3/4") != 0) return 3;
    p3_string_free(v);
    p3_umemura_free(seq);

    double re = 0, im = 0;
    if (p3_logdet(1.0, 0.0, 2.0, 0.0, 2, &re, &im) != P3Ok) return 4;
    if (re > -0.499 || re < -0.501) return 5;

    P3Series *s = NULL;
    double u0re = 0, u0im = 0;
    p3_d8_initial_value(0.25, 0.0, &u0re, &u0im);
    if (p3_d8_series_new(u0re, u0im, 40, &s) != P3Ok) return 6;
    double ure = 0, uim = 0;
    if (p3_series_eval(s, 0.05, 0.0, &ure, &uim) != P3Ok) return 7;
    p3_series_free(s);
    printf("U(0.05; 1/4) = %.12f\n", ure);
    return 0;
}
"#;
    let dir = std::env::temp_dir().join("painleve3_c_smoke");
    std::fs::create_dir_all(&dir).unwrap();
    let c_path = dir.join("smoke.c");
    std::fs::write(&c_path, src).unwrap();
    let exe_path = dir.join("smoke");
    let include = manifest.join("include");

    let status = Command::new("cc")
        .arg(&c_path)
        .arg("-o")
        .arg(&exe_path)
        .arg(format!("-I{}", include.display()))
        .arg(format!("-L{}", profile_dir.display()))
        .arg("-lpainleve3_ffi")
        .arg("-lm")
        .status()
        .expect("cc not available");
    assert!(status.success(), "C compilation failed");

    let out = Command::new(&exe_path)
        .env("LD_LIBRARY_PATH", &profile_dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "smoke binary exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("U(0.05; 1/4) = "), "unexpected output: {text}");
}
