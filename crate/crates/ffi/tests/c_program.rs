use std::path::PathBuf;
use std::process::Command;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<this test>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_against_staticlib() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libliouville_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(
        run.status.success(),
        "{stdout}\n{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(stdout.contains("dims 1 4"));
    assert!(stdout.contains("I2 1/16"));
    assert!(stdout.contains("oracle 4"));
    assert!(stdout.contains("error orientation must be 1 or -1"));
}

#[test]
fn header_is_valid_cxx() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let src = "#include \"liouville.h\"\nint main() { return LV_STATUS_OK; }\n";
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("h.cpp");
    std::fs::write(&file, src).unwrap();
    let status = Command::new("c++")
        .arg("-fsyntax-only")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&file)
        .status()
        .expect("C++ compiler available");
    assert!(status.success());
}
