use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use clap::ValueEnum;
use num_bigint::BigInt;
use serde_json::{Number, Value};

use verlab_core::verify_suite::VerificationReport;
use verlab_core::verlinde_ring::FusionTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

fn big_json(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integers are valid JSON numbers"))
}

/// `{"a": multiplicity, ...}` with exact integers.
pub fn class_json(class: &BTreeMap<u64, BigInt>) -> Value {
    Value::Object(
        class
            .iter()
            .map(|(a, c)| (a.to_string(), big_json(c)))
            .collect(),
    )
}

pub fn render_class(format: Format, class: &BTreeMap<u64, BigInt>) -> String {
    match format {
        Format::Json => format!("{}\n", class_json(class)),
        Format::Csv => {
            let mut out = String::from("a,multiplicity\n");
            for (a, c) in class {
                let _ = writeln!(out, "{a},{c}");
            }
            out
        }
        Format::Md => {
            let mut out = String::from("| a | multiplicity |\n|---|---|\n");
            for (a, c) in class {
                let _ = writeln!(out, "| {a} | {c} |");
            }
            out
        }
    }
}

pub fn render_labels(format: Format, labels: &[u64]) -> String {
    match format {
        Format::Json => format!("{}\n", Value::from(labels.to_vec())),
        Format::Csv => {
            let mut out = String::from("a\n");
            for a in labels {
                let _ = writeln!(out, "{a}");
            }
            out
        }
        Format::Md => {
            let mut out = String::from("| a |\n|---|\n");
            for a in labels {
                let _ = writeln!(out, "| {a} |");
            }
            out
        }
    }
}

pub fn render_table(format: Format, table: &FusionTable) -> String {
    match format {
        Format::Json => format!("{}\n", table.to_json()),
        Format::Csv => {
            let mut out = String::from("a,b,c,N\n");
            for (a, b, c, n) in table.constants() {
                let _ = writeln!(out, "{a},{b},{c},{n}");
            }
            out
        }
        Format::Md => {
            let mut out = format!(
                "Structure constants of K({})\n\n| a | b | c | N |\n|---|---|---|---|\n",
                table.level()
            );
            for (a, b, c, n) in table.constants() {
                let _ = writeln!(out, "| {a} | {b} | {c} | {n} |");
            }
            out
        }
    }
}

pub fn report_csv(report: &VerificationReport) -> String {
    let mut out = String::from("check,params,passed\n");
    for r in &report.results {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "{},{},{}", r.check_id, params.join(";"), r.passed);
    }
    out
}
