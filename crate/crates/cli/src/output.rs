use clap::ValueEnum;
use serde::Serialize;
use streamcode::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    JsonLines,
    Csv,
}

pub const REPORT_SCHEMA: &str = "streamcode.report/1";
pub const TRIAL_SCHEMA: &str = "streamcode.trial/1";
pub const SUMMARY_SCHEMA: &str = "streamcode.summary/1";
pub const BOUNDS_SCHEMA: &str = "streamcode.bounds/1";

#[derive(Debug, Serialize)]
pub struct ReportRow {
    pub schema: &'static str,
    pub artifact: &'static str,
    pub result: &'static str,
    pub checked: u64,
    pub attempts: Option<usize>,
    pub counterexample: Option<String>,
    pub notes: String,
}

impl ReportRow {
    pub fn new(artifact: &'static str, report: &VerificationReport, attempts: Option<usize>) -> Self {
        ReportRow {
            schema: REPORT_SCHEMA,
            artifact,
            result: if report.passed { "pass" } else { "fail" },
            checked: report.checked,
            attempts,
            counterexample: report.counterexample.as_ref().map(ToString::to_string),
            notes: report.notes.join("; "),
        }
    }
}

/// One row per trial plus one summary row; both share a layout so CSV
/// output stays a single rectangular table.
#[derive(Debug, Serialize)]
pub struct SimRow {
    pub schema: &'static str,
    pub trial: Option<u64>,
    pub j: usize,
    pub i: usize,
    pub flips: Option<usize>,
    pub ok: Option<u8>,
    pub trials: Option<u64>,
    pub failures: Option<u64>,
    pub failure_rate: Option<f64>,
    pub ci95: Option<f64>,
    pub baseline_recovered: Option<usize>,
    pub unbounded_recovered: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct BoundsRow {
    pub schema: &'static str,
    /// Always "formula": these are evaluated expressions, not measurements.
    pub source: &'static str,
    pub eps: f64,
    pub construction_rate: f64,
    pub linear_upper_bound: f64,
    pub random_error_rate: f64,
    pub subset_delta: f64,
    pub subset_ell: f64,
    pub subset_alpha: f64,
    pub subset_harper_exponent: f64,
    pub subset_greedy_exponent: f64,
    pub subset_linear_exponent: f64,
    pub subset_small_delta: bool,
}

pub fn json_lines<T: Serialize>(rows: &[T]) -> String {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r).expect("rows serialize"));
        out.push('\n');
    }
    out
}

pub fn csv_table<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

pub fn render_report(format: Format, row: &ReportRow, report: &VerificationReport) -> String {
    match format {
        Format::Table => {
            let mut out = format!("schema={} artifact={}", row.schema, row.artifact);
            if let Some(a) = row.attempts {
                out.push_str(&format!(" attempts={a}"));
            }
            out.push('\n');
            out.push_str(&report.to_string());
            out
        }
        Format::JsonLines => json_lines(std::slice::from_ref(row)),
        Format::Csv => csv_table(std::slice::from_ref(row)),
    }
}

fn opt<T: std::fmt::Display>(key: &str, v: &Option<T>) -> String {
    v.as_ref().map(|v| format!(" {key}={v}")).unwrap_or_default()
}

pub fn render_sim(format: Format, rows: &[SimRow]) -> String {
    match format {
        Format::JsonLines => json_lines(rows),
        Format::Csv => csv_table(rows),
        Format::Table => {
            let mut out = String::new();
            for r in rows {
                match r.trial {
                    Some(t) => out.push_str(&format!(
                        "trial={t} j={} i={} flips={} ok={}{}{}\n",
                        r.j,
                        r.i,
                        r.flips.unwrap_or(0),
                        r.ok.unwrap_or(0),
                        opt("baseline", &r.baseline_recovered),
                        opt("unbounded", &r.unbounded_recovered),
                    )),
                    None => out.push_str(&format!(
                        "failure_rate={} ci95={:.6} trials={} failures={}{}{}\n",
                        r.failure_rate.unwrap_or(f64::NAN),
                        r.ci95.unwrap_or(f64::NAN),
                        r.trials.unwrap_or(0),
                        r.failures.unwrap_or(0),
                        opt("baseline_recovered", &r.baseline_recovered),
                        opt("unbounded_recovered", &r.unbounded_recovered),
                    )),
                }
            }
            out
        }
    }
}

pub fn render_bounds(format: Format, rows: &[BoundsRow]) -> String {
    match format {
        Format::JsonLines => json_lines(rows),
        Format::Csv => csv_table(rows),
        Format::Table => {
            let mut out = format!(
                "# schema={BOUNDS_SCHEMA}: formula evaluations, not measurements\n{:>10} {:>12} {:>12} {:>12} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}\n",
                "eps", "construct", "linear_ub", "random_err", "sub_delta", "sub_ell", "sub_alpha", "harper", "greedy", "lin_sub"
            );
            for r in rows {
                out.push_str(&format!(
                    "{:>10} {:>12.6} {:>12.6} {:>12.6} {:>10.6} {:>10.4} {:>10.6} {:>10.6} {:>10.6} {:>10.6}\n",
                    r.eps,
                    r.construction_rate,
                    r.linear_upper_bound,
                    r.random_error_rate,
                    r.subset_delta,
                    r.subset_ell,
                    r.subset_alpha,
                    r.subset_harper_exponent,
                    r.subset_greedy_exponent,
                    r.subset_linear_exponent,
                ));
            }
            out
        }
    }
}
