//! CSV and plain-text renderings of command payloads.

use std::fmt::Write as _;

use sympidx::verify::{Check, Status, Value};

use crate::cli::{Generated, Payload};
use crate::error::CliError;

fn value(v: &Option<Value>) -> String {
    match v {
        Some(Value::Int(i)) => i.to_string(),
        Some(Value::Real(x)) => format!("{x:e}"),
        None => String::new(),
    }
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::EngineError => "engine-error",
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn check_fields(c: &Check) -> [String; 8] {
    [
        c.name.clone(),
        serde_json::to_value(c.section).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default(),
        opt(c.path),
        opt(c.m),
        value(&c.lhs),
        value(&c.rhs),
        status(c.status).to_string(),
        c.detail.clone().unwrap_or_default(),
    ]
}

fn write_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// CSV rendering; index records use the columns `k, m, i, nu, mu_minus,
/// mu_plus, mean`.
pub fn csv(payload: &Payload) -> Result<String, CliError> {
    match payload {
        Payload::Index(rows) => write_csv(
            &["k", "m", "i", "nu", "mu_minus", "mu_plus", "mean"],
            rows.iter().map(|r| {
                vec![
                    r.k.to_string(),
                    r.m.to_string(),
                    r.i.to_string(),
                    r.nu.to_string(),
                    r.mu_minus.to_string(),
                    r.mu_plus.to_string(),
                    r.mean.to_string(),
                ]
            }),
        ),
        Payload::Verify(v) => write_csv(
            &["report", "name", "section", "k", "m", "lhs", "rhs", "status", "detail"],
            v.reports.iter().enumerate().flat_map(|(i, r)| {
                r.checks.iter().map(move |c| {
                    let mut row = vec![i.to_string()];
                    row.extend(check_fields(c));
                    row
                })
            }),
        ),
        Payload::Search(s) => write_csv(
            &["N", "k", "m", "chi", "residual"],
            s.outcome.certificates.iter().flat_map(|c| {
                (0..c.m.len()).map(move |k| {
                    vec![
                        c.n.to_string(),
                        k.to_string(),
                        c.m[k].to_string(),
                        c.chi[k].to_string(),
                        format!("{:e}", c.residuals[k]),
                    ]
                })
            }),
        ),
        Payload::Split(rows) => write_csv(
            &["k", "angle", "s_plus", "s_minus", "nullity"],
            rows.iter().flat_map(|r| {
                r.profile.entries.iter().map(move |e| {
                    vec![
                        r.k.to_string(),
                        e.angle.to_string(),
                        e.s_plus.to_string(),
                        e.s_minus.to_string(),
                        e.nullity.to_string(),
                    ]
                })
            }),
        ),
        _ => Err(CliError::Config(
            "CSV output is available for index, split, cijt-search and verify commands".into(),
        )),
    }
}

/// Human-readable table.
pub fn table(payload: &Payload) -> String {
    let mut out = String::new();
    match payload {
        Payload::Eval(rows) => {
            for r in rows {
                let _ = writeln!(out, "path {} at t = {}  (symplectic defect {:.2e})", r.k, r.t, r.symplectic_defect);
                for row in &r.matrix {
                    let cells: Vec<String> = row.iter().map(|x| format!("{x:>12.6}")).collect();
                    let _ = writeln!(out, "  {}", cells.join(" "));
                }
                for e in &r.unit_spectrum {
                    let _ = writeln!(out, "  unit eigenvalue e^(i·{}) alg {} geo {}", e.angle, e.alg_mult, e.geo_mult);
                }
            }
        }
        Payload::Index(rows) => {
            let _ = writeln!(out, "{:>3} {:>6} {:>8} {:>4} {:>8} {:>8} {:>14}", "k", "m", "i", "nu", "mu-", "mu+", "mean");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{:>3} {:>6} {:>8} {:>4} {:>8} {:>8} {:>14.9}",
                    r.k, r.m, r.i, r.nu, r.mu_minus, r.mu_plus, r.mean
                );
            }
        }
        Payload::Iterate(specs) => {
            for (k, s) in specs.iter().enumerate() {
                let _ = writeln!(out, "path {k}: {}", sympidx::verify::spec_label(s));
            }
        }
        Payload::Split(rows) => {
            for r in rows {
                let _ = writeln!(out, "path {} ({:?} route)", r.k, r.profile.source);
                for e in &r.profile.entries {
                    let _ = writeln!(out, "  ω = e^(i·{})  S+ = {}  S- = {}  ν = {}", e.angle, e.s_plus, e.s_minus, e.nullity);
                }
            }
        }
        Payload::Search(s) => {
            let _ = writeln!(out, "M̄ = {}  m̌ = {}  means = {:?}", s.m_bar, opt(s.m_check), s.means);
            for c in &s.outcome.certificates {
                let _ = writeln!(out, "  N = {:>10}  m = {:?}  χ = {:?}", c.n, c.m, c.chi);
            }
            if let Some(w) = &s.outcome.warning {
                let _ = writeln!(out, "warning: {w}");
            }
        }
        Payload::Verify(v) => {
            for (i, r) in v.reports.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "report {i} ({}): {} passed, {} failed, {} engine errors",
                    r.kind, r.summary.passed, r.summary.failed, r.summary.engine_errors
                );
                for c in r.failures() {
                    let f = check_fields(c);
                    let _ = writeln!(out, "  {} [{}] k={} m={}: {} vs {} — {} {}", f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7]);
                }
                for n in &r.notes {
                    let _ = writeln!(out, "  note: {n}");
                }
            }
            let _ = writeln!(out, "{}", if v.passed { "ALL PASS" } else { "FAILURES PRESENT" });
        }
        Payload::Generated(g) => {
            let list: Vec<Vec<_>> = match g {
                Generated::Specs(s) => s.iter().map(|x| vec![x.clone()]).collect(),
                Generated::Collections(c) => c.clone(),
            };
            for (i, group) in list.iter().enumerate() {
                let labels: Vec<String> = group.iter().map(sympidx::verify::spec_label).collect();
                let _ = writeln!(out, "{i:>4}: {}", labels.join("  |  "));
            }
        }
    }
    out
}
