use std::path::PathBuf;
use std::process::Command;

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include").join("polar_kernels.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    let source = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("src").join("lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 10);
    for name in exports {
        assert!(text.contains(&format!("{name}(")), "{name} missing from the header");
    }
    assert!(text.contains("typedef struct PkKernel PkKernel;"));
    assert!(text.contains("PK_STATUS_OK = 0"));
    assert!(text.contains("size_t capacity"));
}

#[test]
fn header_compiles_as_c99() {
    let Ok(out) = Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(header()).output() else {
        eprintln!("no C compiler found; syntax check skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_against_the_static_library() {
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().unwrap().join("libpolar_kernels_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("static library or C compiler unavailable; link test skipped");
        return;
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let bin = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pk_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests").join("c").join("smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("length=16 d=1,2,2,2,2,4,4,4,6,6,6,8,8,8,8,16 exponent=0.527420"), "{text}");
    assert!(text.contains("error=parameter out of range: no known kernel #9"), "{text}");
}
