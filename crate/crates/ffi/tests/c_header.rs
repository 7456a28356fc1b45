//! Compiles and runs a C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "pseudohopf.h"

int main(void) {
    PhAlgebraClass c;
    if (ph_classify(0, 7, &c) != PH_STATUS_OK) return 10;
    if (c.field != PH_FIELD_REAL || c.size != 8 || c.summands != 2) return 11;

    PhModel *m = NULL;
    if (ph_model_new(PH_MODEL_KIND_COMPLEX_HOPF, 2, 0, &m) != PH_STATUS_OK) return 12;
    PhCheckResult r;
    if (ph_run_check(m, "t_zero", 5, 1e-8, 42, &r) != PH_STATUS_OK || !r.pass) return 13;
    if (ph_run_check(m, "no_such_check", 5, 1e-8, 42, &r) != PH_STATUS_INVALID_ARGUMENT) return 14;
    if (strstr(ph_last_error(), "known checks") == NULL) return 15;
    ph_model_free(m);

    bool ok = true;
    char *why = NULL;
    if (ph_obstruction(PH_TOTAL_REAL, 2, 4, PH_BASE_ANY, &ok, &why) != PH_STATUS_OK || ok) return 16;
    printf("%s\n", why);
    ph_string_free(why);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = target_dir().join("libpseudohopf_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("Adams"));
}
