use std::fmt::Write;

use super::VerificationReport;

/// Fixed-width table, one row per check, error messages indented below.
pub fn render_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "suite {} (version {}, seed {})", report.suite, report.version, report.seed);
    let _ = writeln!(
        out,
        "{:<22} {:<30} {:>7} {:>12} {:>9}  {}",
        "check", "model", "samples", "max_resid", "tol", "result"
    );
    for c in &report.checks {
        let resid = c.max_residual.map_or_else(|| "-".to_string(), |r| format!("{r:.3e}"));
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{:<22} {:<30} {:>7} {:>12} {:>9.1e}  {verdict}",
            c.name, c.model, c.samples, resid, c.tol
        );
        if let Some(e) = &c.error {
            let _ = writeln!(out, "    error: {e}");
        }
    }
    let failed = report.checks.iter().filter(|c| !c.pass).count();
    let _ = writeln!(
        out,
        "{} checks, {} failed: {}",
        report.checks.len(),
        failed,
        if report.pass { "PASS" } else { "FAIL" }
    );
    out
}
