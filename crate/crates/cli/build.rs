use std::process::Command;

fn output(cmd: &str, args: &[&str]) -> Option<String> {
    let out = Command::new(cmd).args(args).output().ok()?;
    out.status.success().then(|| String::from_utf8_lossy(&out.stdout).trim().to_string())
}

fn main() {
    let rustc = std::env::var("RUSTC").unwrap_or_else(|_| "rustc".into());
    let rustc_version = output(&rustc, &["--version"]).unwrap_or_else(|| "unknown rustc".into());
    let commit = output("git", &["rev-parse", "--short=12", "HEAD"]).unwrap_or_else(|| "unknown".into());
    let target = std::env::var("TARGET").unwrap_or_default();
    let profile = std::env::var("PROFILE").unwrap_or_default();
    let features = if std::env::var_os("CARGO_FEATURE_PARALLEL").is_some() { "parallel" } else { "sequential" };
    println!("cargo:rustc-env=HOLOBALL_BUILD_COMMIT={commit}");
    println!("cargo:rustc-env=HOLOBALL_BUILD_RUSTC={rustc_version}");
    println!("cargo:rustc-env=HOLOBALL_BUILD_TARGET={target}");
    println!("cargo:rustc-env=HOLOBALL_BUILD_PROFILE={profile}");
    println!("cargo:rustc-env=HOLOBALL_BUILD_FEATURES={features}");
    println!("cargo:rerun-if-changed=build.rs");
    println!("cargo:rerun-if-changed=../../.git/HEAD");
}
