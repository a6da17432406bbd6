use std::fmt::Write as _;

use clap::ValueEnum;
use lefcorr_core::VerificationReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

pub const CSV_COLUMNS: [&str; 10] = [
    "model",
    "global",
    "local",
    "match",
    "fixed_point_count",
    "parameters",
    "skipped_degenerate",
    "seed",
    "trial",
    "tolerance",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Serializes a report. JSON is one object without a trailing newline;
/// CSV is a header plus one row, with `parameters` as a JSON object; text is
/// one `key: value` line per field.
pub fn emit_report(report: &VerificationReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => serde_json::to_vec(report).expect("report serializes"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_COLUMNS).expect("in-memory write");
            let params = serde_json::to_string(&report.parameters).expect("string map");
            w.write_record([
                report.model.to_string(),
                report.global.to_string(),
                report.local.to_string(),
                report.matches.to_string(),
                report.fixed_point_count.to_string(),
                params,
                opt(report.skipped_degenerate),
                opt(report.seed),
                opt(report.trial),
                opt(report.tolerance),
            ])
            .expect("in-memory write");
            w.into_inner().expect("flush to vec")
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "model: {}", report.model);
            for (k, v) in &report.parameters {
                let _ = writeln!(s, "  {k} = {v}");
            }
            let _ = writeln!(s, "global: {}", report.global);
            let _ = writeln!(s, "local: {}", report.local);
            let _ = writeln!(s, "fixed points: {}", report.fixed_point_count);
            let _ = writeln!(s, "match: {}", report.matches);
            if let Some(t) = report.tolerance {
                let _ = writeln!(s, "tolerance: {t:e}");
            }
            if let (Some(seed), Some(trial)) = (report.seed, report.trial) {
                let _ = writeln!(s, "seed: {seed}, trial: {trial}");
            }
            s.into_bytes()
        }
    }
}
