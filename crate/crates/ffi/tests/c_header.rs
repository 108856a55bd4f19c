use std::path::{Path, PathBuf};
use std::process::Command;

fn target_dir() -> PathBuf {
    // .../target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/xwigner.h")).unwrap();
    for name in [
        "xw_last_error",
        "xw_config_new",
        "xw_config_set",
        "xw_config_free",
        "xw_field_new",
        "xw_field_dims",
        "xw_field_axes",
        "xw_field_values",
        "xw_field_save",
        "xw_field_free",
        "xw_gouy_delta_free",
        "xw_gouy_delta_slit",
        "typedef struct XwConfig XwConfig;",
        "typedef struct XwField XwField;",
        "XwStatus_Numerical = 3",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libxwigner_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let exe = std::env::temp_dir().join(format!("xwigner-smoke-{}", std::process::id()));
    let status = Command::new(&cc)
        .arg(root.join("tests/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    let parts: Vec<&str> = text.split_whitespace().collect();
    assert_eq!(&parts[..2], &["32", "16"]);
    let dmu: f64 = parts[2].parse().unwrap();
    assert!((dmu - 0.775765).abs() < 1e-6, "{dmu}");
}
