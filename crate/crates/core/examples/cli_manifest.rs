// Driving the command layer from code: a config, a run with CSV and manifest
// output, and re-verification of the manifest.

use orbstab::cli::{execute, verify_manifest, RunConfig, Task};

pub fn run_example() -> orbstab::Result<()> {
    let cfg = RunConfig::from_toml(
        r#"
        seed = 7
        [planewave]
        lambda = 1.0
        alpha = 1.2
        N = 64
        perturbation = { kind = "mode", n = 1 }
        delta = 1e-6
        [numerics]
        t_end = 4.0
        "#,
    )?;
    let dir = std::env::temp_dir().join(format!("orbstab-example-{}", std::process::id()));
    let report = execute(Task::PlanewaveSimulate, &cfg, Some(&dir))?;
    println!("wrote {} ({} rows)", report.dir.display(), report.outcome.tables[0].1.rows.len());
    println!("summary: {:?}", report.manifest.summary);
    let diffs = verify_manifest(&report.dir.join("manifest.json"))?;
    println!("verify: {}", if diffs.is_empty() { "ok".to_string() } else { diffs.join("; ") });
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> orbstab::Result<()> {
    run_example()
}
