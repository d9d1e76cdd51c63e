//! Fixed-width human-readable output. The JSON report is the contract for
//! tooling; this is for eyes.

use crate::report::{CatalogueEntry, InputRef};
use had_core::binomial::{BinomialOutcome, BinomialScan};
use had_core::counts::ParamCountReport;
use had_core::hadamard::TwistSummary;
use had_core::oracle::OracleReport;
use had_core::runner::HedgedDimension;
use had_core::ProjectivePoint;

fn kv(key: &str, value: impl std::fmt::Display) {
    println!("{key:<10} {value}");
}

fn input_list(inputs: &[InputRef]) -> String {
    inputs
        .iter()
        .map(|i| i.name.clone())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn print_dimension(inputs: &[InputRef], run: &HedgedDimension) {
    let r = &run.report;
    kv("inputs", input_list(inputs));
    kv("prime", run.prime);
    kv(
        "dims",
        r.factor_dims
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("+"),
    );
    kv("expected", r.expected);
    match r.observed {
        Some(o) => kv("observed", o),
        None => kv("observed", "-"),
    }
    kv("verdict", r.verdict);
    if run.attempts.len() > 1 {
        let list = run
            .attempts
            .iter()
            .map(|a| format!("{} -> {}", a.prime, a.verdict))
            .collect::<Vec<_>>()
            .join("; ");
        kv("hedge", list);
    }
    for note in &r.notes {
        kv("note", note);
    }
    println!("{:>5}  {:>4}  {:<10}  points", "trial", "rank", "degenerate");
    for t in &r.trials {
        let rank = t.rank.map_or("-".to_string(), |r| r.to_string());
        let pts = t
            .points
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        println!(
            "{:>5}  {:>4}  {:<10}  {}",
            t.trial,
            rank,
            if t.degenerate { "yes" } else { "no" },
            pts
        );
    }
}

pub fn print_twist(inputs: &[InputRef], prime: u64, s: &TwistSummary) {
    kv("inputs", input_list(inputs));
    kv("prime", prime);
    kv("mode", s.mode);
    kv("expected", s.expected);
    kv("success", format!("{}/{}", s.successes, s.trials));
    println!("{:>5}  {:>8}  verdict", "trial", "observed");
    for (i, r) in s.reports.iter().enumerate() {
        let obs = r.observed.map_or("-".to_string(), |o| o.to_string());
        println!("{i:>5}  {obs:>8}  {}", r.verdict);
    }
}

pub fn print_binomial(inputs: &[InputRef], prime: u64, scan: &BinomialScan) {
    kv("inputs", input_list(inputs));
    kv("prime", prime);
    match &scan.outcome {
        BinomialOutcome::Found { witness } => {
            println!(
                "Found {} (degree {}, lambda {}, verified at fresh samples)",
                witness.format_form(),
                witness.degree,
                witness.lambda
            );
            println!("note: lambda is a specialization mod the working prime");
        }
        BinomialOutcome::NotFoundUpTo { max_degree } => {
            println!("NotFoundUpTo({max_degree})");
        }
    }
    kv(
        "samples",
        scan.samples_per_degree
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
}

pub fn print_counts(reports: &[ParamCountReport]) {
    for r in reports {
        let rel = if r.holds { "<" } else { ">=" };
        println!(
            "dim U_{} = {} {rel} {} = dim |O({})|",
            r.d, r.dim_family, r.dim_ambient, r.d
        );
    }
    println!("{:>3}  {:>10}  {:>11}  {:>7}  holds", "d", "dim_family", "dim_ambient", "margin");
    for r in reports {
        println!(
            "{:>3}  {:>10}  {:>11}  {:>7}  {}",
            r.d,
            r.dim_family,
            r.dim_ambient,
            r.margin,
            if r.holds { "yes" } else { "NO" }
        );
    }
}

pub fn print_sample(inputs: &[InputRef], prime: u64, point: &ProjectivePoint) {
    kv("inputs", input_list(inputs));
    kv("prime", prime);
    kv("point", point);
}

pub fn print_oracle(inputs: &[InputRef], power: usize, r: &OracleReport) {
    kv("inputs", input_list(inputs));
    if power > 1 {
        kv("power", power);
    }
    kv("q", r.q);
    kv("enumerated", r.enumerated);
    kv("count", r.count);
    match r.dim_estimate {
        Some(d) => kv("dim", d),
        None => kv("dim", "- (empty image)"),
    }
}

pub fn print_catalogue(entries: &[CatalogueEntry]) {
    println!("{:<22}  {:<8}  {:>2}  {:>5}", "name", "kind", "n", "polys");
    for e in entries {
        println!("{:<22}  {:<8}  {:>2}  {:>5}", e.name, e.kind, e.n, e.polys);
    }
}
