//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, ExitCode, Stdio};
use std::time::Instant;

use matlog_core::laws::random::{sample_dense, trial_rng};
use matlog_core::laws::suites;
use matlog_core::linalg::eigenvalues;
use matlog_core::matfun::{mat_exp, mat_log_principal};
use matlog_core::scalar::{default_u_band, scan_u_set, USetScan};
use matlog_core::Tolerances;

const SEED: u64 = 0;
const SEARCH_TRIALS: &str = "10000";

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn roundtrip(tol: &Tolerances) -> Outcome {
    let mut worst = 0.0_f64;
    let mut max_im = 0.0_f64;
    let mut failures = 0;
    let mut trial = 0u64;
    let mut done = 0;
    while done < 500 {
        let n = 2 + done % 5;
        let mut rng = trial_rng(SEED, trial);
        trial += 1;
        let Some(x) = sample_dense(&mut rng, n, tol) else { continue };
        done += 1;
        let check = mat_log_principal(&x, tol).and_then(|l| {
            let back = mat_exp(&l, tol)?;
            Ok((back.dist_fro(&x) / x.norm_fro(), eigenvalues(&l, tol)?))
        });
        match check {
            Ok((rel, spectrum)) => {
                worst = worst.max(rel);
                let im = spectrum.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
                max_im = max_im.max(im);
                if rel > 1e-9 || im >= PI {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    outcome(
        failures == 0,
        format!("500 matrices, max relative error {worst:.2e}, max |Im log-eig| {max_im:.4}"),
    )
}

fn arg_law(tol: &Tolerances) -> Outcome {
    match suites::run_arg_law(200, SEED, tol) {
        Ok(r) => outcome(
            r.pass && r.max_law_residual <= 1e-8,
            format!("200 pairs, max law residual {:.2e}", r.max_law_residual),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn item3(tol: &Tolerances) -> Outcome {
    match suites::run_item3(50, SEED, tol) {
        Ok(r) => outcome(
            r.pass
                && r.rows.len() >= 50
                && r.max_identity_residual <= 1e-10
                && r.min_commutator_norm >= 1e-3,
            format!(
                "{} pairs, max identity residual {:.2e}, min commutator {:.2e}",
                r.rows.len(),
                r.max_identity_residual,
                r.min_commutator_norm
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn u_roots(tol: &Tolerances) -> Outcome {
    let scan = match scan_u_set(default_u_band(5), tol) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    let first: Vec<_> = scan.roots.iter().take(5).copied().collect();
    let max_residual = first.iter().map(|&u| USetScan::residual(u)).fold(0.0, f64::max);
    let min_im = first.iter().map(|u| u.im.abs()).fold(f64::INFINITY, f64::min);
    outcome(
        first.len() == 5
            && max_residual <= 1e-12
            && min_im > 2.0 * PI
            && scan.band_census == scan.roots.len(),
        format!(
            "{} roots in band, census {}, max residual {max_residual:.2e}, min |Im| {min_im:.4}",
            scan.roots.len(),
            scan.band_census
        ),
    )
}

fn prop2(tol: &Tolerances) -> Outcome {
    match suites::run_prop2(100, SEED, tol) {
        Ok(r) => outcome(
            r.pass && r.resolved >= 95 && r.violations.is_empty(),
            format!("{} of 100 resolved, {} count violations", r.resolved, r.violations.len()),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn prop3(tol: &Tolerances) -> Outcome {
    match suites::run_prop3(200, SEED, tol) {
        Ok(r) => outcome(
            r.pass
                && r.disagreements.is_empty()
                && r.borderline.is_empty()
                && r.necessity_failures.is_empty(),
            format!(
                "200 instances, {} identities, {} disagreements, {} borderline, {} necessity failures",
                r.identity_holds,
                r.disagreements.len(),
                r.borderline.len(),
                r.necessity_failures.len()
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

const SEARCHES: [(&str, &[&str]); 4] = [
    ("thm1", &["thm1"]),
    ("thm2-n3", &["thm2", "--dim", "3"]),
    ("thm2-n4", &["thm2", "--dim", "4"]),
    ("prop4-n3", &["prop4", "--dim", "3"]),
];

/// Runs every falsification search into `dir`; yields the minimum law residual or an error per run.
fn run_searches(dir: &Path) -> Vec<(String, Result<f64, String>)> {
    SEARCHES
        .iter()
        .map(|(label, args)| {
            let report = dir.join(format!("{label}.json"));
            let status = Command::new(env!("CARGO_BIN_EXE_matlog"))
                .arg("verify")
                .args(*args)
                .args(["--trials", SEARCH_TRIALS, "--seed", &SEED.to_string()])
                .arg("-o")
                .arg(&report)
                .stderr(Stdio::null())
                .status();
            let result = match status {
                Ok(s) if s.success() => std::fs::read_to_string(&report)
                    .map_err(|e| e.to_string())
                    .and_then(|text| {
                        let v: serde_json::Value =
                            serde_json::from_str(&text).map_err(|e| e.to_string())?;
                        v["min_law_residual"]
                            .as_f64()
                            .ok_or_else(|| "no noncommuting samples".to_string())
                    }),
                Ok(s) => Err(format!("exit status {s}")),
                Err(e) => Err(e.to_string()),
            };
            (label.to_string(), result)
        })
        .collect()
}

fn falsification(dir: &Path) -> Outcome {
    let results = run_searches(dir);
    let mut pass = true;
    let parts: Vec<String> = results
        .into_iter()
        .map(|(label, r)| match r {
            Ok(min) => {
                pass &= min > 1e-4;
                format!("{label} min residual {min:.2e}")
            }
            Err(e) => {
                pass = false;
                format!("{label} {e}")
            }
        })
        .collect();
    outcome(pass, parts.join(", "))
}

fn determinism(first: &Path, second: &Path) -> Outcome {
    let _ = run_searches(second);
    let mut differing = Vec::new();
    for (label, _) in SEARCHES {
        let name = format!("{label}.json");
        let a = std::fs::read(first.join(&name));
        let b = std::fs::read(second.join(&name));
        match (a, b) {
            (Ok(a), Ok(b)) if a == b => {}
            _ => differing.push(label),
        }
    }
    let detail = if differing.is_empty() {
        "4 reports byte-identical".to_string()
    } else {
        format!("differing reports: {}", differing.join(", "))
    };
    outcome(differing.is_empty(), detail)
}

fn main() -> ExitCode {
    let tol = Tolerances::default();
    let first = tempfile::tempdir().expect("temporary directory");
    let second = tempfile::tempdir().expect("temporary directory");

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("roundtrip", Box::new(|| roundtrip(&tol))),
        ("arg-law", Box::new(|| arg_law(&tol))),
        ("item3", Box::new(|| item3(&tol))),
        ("u-roots", Box::new(|| u_roots(&tol))),
        ("prop2", Box::new(|| prop2(&tol))),
        ("prop3", Box::new(|| prop3(&tol))),
        ("falsification", Box::new(|| falsification(first.path()))),
        ("determinism", Box::new(|| determinism(first.path(), second.path()))),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {} {name:<13} {verdict} ({:.1}s) {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
