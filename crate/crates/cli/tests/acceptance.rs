//! The acceptance suite, run through the shipped binary. Runs without the
//! test harness so the per-criterion lines always reach the output.

use std::process::Command;

use serde_json::Value;

fn verify(profile: &str, threads: usize) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_matsemi"))
        .args(["verify", "all", "--format", "json", "--profile", profile])
        .args(["--threads", &threads.to_string()])
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code())
}

fn main() {
    let (full, code) = verify("full", 8);
    let report: Value = serde_json::from_slice(&full).expect("json report");
    let criteria = report["result"]["criteria"].as_array().expect("criteria list");

    let mut lines = Vec::new();
    for id in 1..=12u64 {
        let c = criteria.iter().find(|c| c["id"] == id);
        let (ok, detail) = match c {
            Some(c) => {
                let status = c["status"].as_str().unwrap_or("missing");
                let mut detail = format!("{} [{status}]", c["name"].as_str().unwrap_or("?"));
                if let Some(w) = c["witness"].as_str() {
                    detail.push_str(&format!(" witness: {w}"));
                }
                (status == "pass" || status == "expected-mismatch", detail)
            }
            None => (false, "not reported".to_string()),
        };
        lines.push((id, ok, detail));
    }

    let mut det_detail = Vec::new();
    let mut det_ok = code == Some(0);
    for profile in ["quick", "full"] {
        let (one, c1) = verify(profile, 1);
        let (eight, c8) = if profile == "full" { (full.clone(), code) } else { verify(profile, 8) };
        let same = one == eight && c1 == c8;
        det_ok &= same;
        det_detail.push(format!("{profile}: {}", if same { "identical" } else { "differs" }));
    }
    lines.push((13, det_ok, format!("determinism across 1 and 8 threads ({})", det_detail.join(", "))));

    for (id, ok, detail) in &lines {
        println!("criterion {id:>2}: {} {detail}", if *ok { "PASS" } else { "FAIL" });
    }
    let failed: Vec<u64> = lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    if code != Some(0) || !failed.is_empty() {
        eprintln!("verify all exited with {code:?}; failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all criteria pass");
}
