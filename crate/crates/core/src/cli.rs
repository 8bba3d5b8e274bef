//! Command-line front end.
//!
//! Exit codes: 0 when a result was computed (including a report for an
//! invalid triplet), 1 when the oracle disagrees with the classification,
//! 2 on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classify::{
    classify_k2_failures, nonsingular_delta, oracle_search, ClassificationRow, SearchBox,
};
use crate::conditions::{default_thresholds, report, FibrationReport, KFailReason, KStatus};
use crate::grading::{monomial_basis, normalize, BundleParams, Coord, DivisorClass, GradingMatrix};
use crate::rational::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Markdown,
    #[default]
    Plain,
}

#[derive(Debug, Parser)]
#[command(
    name = "dp1fib",
    version,
    about = "Intersection invariants of degree-1 del Pezzo fibrations in toric P(1,1,2,3)-bundles"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Plain)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full report for P(λ,μ,ν)
    #[command(allow_negative_numbers = true)]
    Analyze {
        lambda: i64,
        mu: i64,
        nu: i64,
        /// Comma-separated δ thresholds for the K³_δ-condition, e.g. 0,1,3/2
        #[arg(long, value_delimiter = ',')]
        thresholds: Option<Vec<Rational>>,
    },
    /// Triplets failing the K²-condition
    Table1,
    /// Brute-force search compared against the classification
    #[command(allow_negative_numbers = true)]
    Oracle(OracleArgs),
    /// Normalize a grading-matrix top row (1 1 α β γ δ)
    #[command(allow_negative_numbers = true)]
    Normalize {
        #[arg(num_args = 6, value_names = ["U", "V", "X", "Y", "Z", "W"])]
        top: Vec<i64>,
    },
    /// Monomial basis of |hH + fF| on P(λ,μ,ν)
    #[command(allow_negative_numbers = true)]
    Basis {
        lambda: i64,
        mu: i64,
        nu: i64,
        h: i64,
        f: i64,
    },
    /// δ for the nonsingular family on P(λ,2μ,3μ)
    #[command(allow_negative_numbers = true)]
    Nonsingular { lambda: i64, mu: i64 },
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    lambda: Option<Vec<i64>>,
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    mu: Option<Vec<i64>>,
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    nu: Option<Vec<i64>>,
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("usage error");
            let _ = writeln!(err, "{line}");
            return EXIT_USAGE;
        }
    };
    let (text, code) = match dispatch(&cli) {
        Ok(r) => r,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    if out.write_all(text.as_bytes()).is_err() {
        return EXIT_USAGE;
    }
    code
}

fn dispatch(cli: &Cli) -> Result<(String, i32), String> {
    let fmt = cli.format;
    match &cli.command {
        Command::Analyze {
            lambda,
            mu,
            nu,
            thresholds,
        } => {
            let p = BundleParams::new(*lambda, *mu, *nu);
            let ts = thresholds.clone().unwrap_or_else(default_thresholds);
            Ok((render_report(&report(&p, &ts), fmt), EXIT_OK))
        }
        Command::Table1 => Ok((render_rows(&classify_k2_failures(), fmt), EXIT_OK)),
        Command::Oracle(args) => run_oracle(args, fmt),
        Command::Normalize { top } => {
            let arr: [i64; 6] = top
                .as_slice()
                .try_into()
                .map_err(|_| "expected six integers")?;
            let p = normalize(&GradingMatrix::new(arr)).map_err(|e| e.to_string())?;
            Ok((render_params(&p, fmt), EXIT_OK))
        }
        Command::Basis {
            lambda,
            mu,
            nu,
            h,
            f,
        } => {
            let p = BundleParams::new(*lambda, *mu, *nu);
            let basis = monomial_basis(&p, &DivisorClass::integral(*h, *f));
            Ok((render_basis(&basis, fmt), EXIT_OK))
        }
        Command::Nonsingular { lambda, mu } => {
            let (delta, case) = nonsingular_delta(*lambda, *mu);
            let p = BundleParams::new(*lambda, 2 * mu, 3 * mu);
            let text = match fmt {
                OutputFormat::Plain => format!("{delta}\n"),
                OutputFormat::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        params: BundleParams,
                        delta: &'a Rational,
                        case: crate::conditions::CaseLabel,
                    }
                    json(&Out {
                        params: p,
                        delta: &delta,
                        case,
                    })
                }
                OutputFormat::Csv => format!(
                    "lambda,mu,nu,delta,case\n{},{},{},{},{}\n",
                    p.lambda, p.mu, p.nu, delta, case
                ),
                OutputFormat::Markdown => format!(
                    "| (λ,μ,ν) | δ_X | Case |\n|---|---|---|\n| {} | {} | {} |\n",
                    p,
                    delta,
                    case.table_label()
                ),
            };
            Ok((text, EXIT_OK))
        }
    }
}

fn interval(v: &Option<Vec<i64>>, default: (i64, i64)) -> (i64, i64) {
    match v.as_deref() {
        Some([a, b]) => (*a, *b),
        _ => default,
    }
}

fn run_oracle(args: &OracleArgs, fmt: OutputFormat) -> Result<(String, i32), String> {
    let d = SearchBox::default_box();
    let search = SearchBox::new(
        interval(&args.lambda, (*d.lambda().start(), *d.lambda().end())),
        interval(&args.mu, (*d.mu().start(), *d.mu().end())),
        interval(&args.nu, (*d.nu().start(), *d.nu().end())),
    )
    .map_err(|e| e.to_string())?;

    let found = oracle_search(&search);
    let mut expected = classify_k2_failures();
    expected.sort_by_key(|r| r.params);
    let extra: Vec<&ClassificationRow> = found.iter().filter(|r| !expected.contains(r)).collect();
    let missing: Vec<&ClassificationRow> = expected.iter().filter(|r| !found.contains(r)).collect();
    let matches = extra.is_empty() && missing.is_empty();
    let code = if matches { EXIT_OK } else { EXIT_MISMATCH };

    if fmt == OutputFormat::Json {
        #[derive(Serialize)]
        struct Out<'a> {
            search_box: String,
            rows: &'a [ClassificationRow],
            matches: bool,
            only_in_oracle: Vec<&'a ClassificationRow>,
            only_in_table: Vec<&'a ClassificationRow>,
        }
        let text = json(&Out {
            search_box: search.to_string(),
            rows: &found,
            matches,
            only_in_oracle: extra,
            only_in_table: missing,
        });
        return Ok((text, code));
    }

    let mut text = render_rows(&found, fmt);
    let _ = writeln!(
        text,
        "{} of {} classified triplets found in {}",
        expected.len() - missing.len(),
        expected.len(),
        search
    );
    if matches {
        text.push_str("MATCHES TABLE 1\n");
    } else {
        text.push_str("MISMATCH\n");
        for r in &missing {
            let _ = writeln!(text, "- {r}");
        }
        for r in &extra {
            let _ = writeln!(text, "+ {r}");
        }
    }
    Ok((text, code))
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn k_status_text(s: &KStatus) -> &'static str {
    match s {
        KStatus::ProvenFails(KFailReason::AmpleAntiCanonical) => "fails (-K_X is ample)",
        KStatus::ProvenFails(KFailReason::DzMovableInterior) => {
            "fails (-K_X interior to <F, D_z|_X>, D_z|_X movable by combinatorial certificate)"
        }
        KStatus::NotProvenToFail => "not proven to fail",
    }
}

fn k_status_short(s: &KStatus) -> String {
    match s {
        KStatus::ProvenFails(r) => format!("ProvenFails({r:?})"),
        KStatus::NotProvenToFail => "NotProvenToFail".to_string(),
    }
}

fn holds(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

/// Ordered (field, value) pairs shared by the plain, csv and markdown layouts.
fn report_fields(r: &FibrationReport) -> Vec<(String, String)> {
    let mut f = vec![
        ("params".to_string(), r.params.to_string()),
        ("is_valid".to_string(), r.validity.is_valid.to_string()),
    ];
    if !r.validity.is_valid {
        f.push(("reason".to_string(), r.validity.reasons.join("; ")));
        return f;
    }
    if let Some(b) = r.validity.restrictb_branch {
        f.push(("restrictb_branch".to_string(), format!("{b:?}")));
    }
    if let Some(c) = r.case {
        f.push(("case".to_string(), format!("{c} {}", c.table_label())));
    }
    if let Some(w) = &r.weight_ratios {
        f.push((
            "weight_ratios".to_string(),
            format!("x={} y={} z={} w={}", w.wr_x, w.wr_y, w.wr_z, w.wr_w),
        ));
    }
    let opt = |v: &Option<Rational>| v.as_ref().map(Rational::to_string).unwrap_or_default();
    f.push(("k_cubed".to_string(), opt(&r.k_cubed)));
    f.push(("nef_threshold".to_string(), opt(&r.nef_threshold)));
    f.push(("delta".to_string(), opt(&r.delta)));
    if let Some(k2) = r.k2_holds {
        f.push(("k2_condition".to_string(), holds(k2).to_string()));
    }
    if let Some(m) = &r.k3_threshold_results {
        for (t, ok) in m {
            f.push((format!("k3_{t}"), holds(*ok).to_string()));
        }
    }
    if let Some(s) = &r.k_status {
        f.push(("k_status".to_string(), k_status_short(s)));
        f.push(("k_condition".to_string(), k_status_text(s).to_string()));
    }
    f.push((
        "verdict".to_string(),
        r.verdict
            .map(|v| format!("{v:?}"))
            .unwrap_or_else(|| "none".to_string()),
    ));
    f
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_report(r: &FibrationReport, fmt: OutputFormat) -> String {
    if fmt == OutputFormat::Json {
        return json(r);
    }
    let fields = report_fields(r);
    let mut s = String::new();
    match fmt {
        OutputFormat::Plain => {
            let width = fields
                .iter()
                .map(|(k, _)| k.chars().count())
                .max()
                .unwrap_or(0);
            for (k, v) in &fields {
                let _ = writeln!(s, "{k:<width$}  {v}");
            }
        }
        OutputFormat::Csv => {
            let keys: Vec<String> = fields.iter().map(|(k, _)| csv_escape(k)).collect();
            let vals: Vec<String> = fields.iter().map(|(_, v)| csv_escape(v)).collect();
            let _ = writeln!(s, "{}", keys.join(","));
            let _ = writeln!(s, "{}", vals.join(","));
        }
        OutputFormat::Markdown => {
            s.push_str("| Field | Value |\n|---|---|\n");
            for (k, v) in &fields {
                let _ = writeln!(s, "| {k} | {} |", v.replace('|', "\\|"));
            }
        }
        OutputFormat::Json => unreachable!(),
    }
    s
}

/// Render classification rows, numbered from 1 in the given order.
pub fn render_rows(rows: &[ClassificationRow], fmt: OutputFormat) -> String {
    let mut s = String::new();
    match fmt {
        OutputFormat::Json => return json(rows),
        OutputFormat::Csv => {
            s.push_str("no,lambda,mu,nu,delta,case,k_fails\n");
            for (i, r) in rows.iter().enumerate() {
                let p = r.params;
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    i + 1,
                    p.lambda,
                    p.mu,
                    p.nu,
                    r.delta,
                    r.case,
                    r.k_fails
                );
            }
        }
        OutputFormat::Markdown => {
            s.push_str("| No. | (λ,μ,ν) | δ_X | Case | K-cond. |\n");
            s.push_str("|---|---|---|---|---|\n");
            for (i, r) in rows.iter().enumerate() {
                let k = if r.k_fails { "no" } else { "" };
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} |",
                    i + 1,
                    r.params,
                    r.delta,
                    r.case.table_label(),
                    k
                );
            }
        }
        OutputFormat::Plain => {
            let _ = writeln!(
                s,
                "{:>3}  {:<11} {:>5}  {:<6}  {}",
                "No.", "(λ,μ,ν)", "δ_X", "Case", "K-cond."
            );
            for (i, r) in rows.iter().enumerate() {
                let k = if r.k_fails { "no" } else { "" };
                let line = format!(
                    "{:>3}  {:<11} {:>5}  {:<6}  {}",
                    i + 1,
                    r.params.to_string(),
                    r.delta.to_string(),
                    r.case.table_label(),
                    k
                );
                let _ = writeln!(s, "{}", line.trim_end());
            }
        }
    }
    s
}

fn render_params(p: &BundleParams, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Plain => format!("{p}\n"),
        OutputFormat::Json => json(p),
        OutputFormat::Csv => format!("lambda,mu,nu\n{},{},{}\n", p.lambda, p.mu, p.nu),
        OutputFormat::Markdown => format!(
            "| λ | μ | ν |\n|---|---|---|\n| {} | {} | {} |\n",
            p.lambda, p.mu, p.nu
        ),
    }
}

fn render_basis(basis: &[crate::grading::ExponentVector], fmt: OutputFormat) -> String {
    let mut s = String::new();
    match fmt {
        OutputFormat::Plain => {
            for e in basis {
                let _ = writeln!(s, "{e}");
            }
        }
        OutputFormat::Json => {
            let names: Vec<String> = basis.iter().map(|e| e.to_string()).collect();
            return json(&names);
        }
        OutputFormat::Csv => {
            s.push_str("monomial,u,v,x,y,z,w\n");
            for e in basis {
                let exps: Vec<String> = Coord::ALL
                    .iter()
                    .map(|c| e.exponent(*c).to_string())
                    .collect();
                let _ = writeln!(s, "{},{}", e, exps.join(","));
            }
        }
        OutputFormat::Markdown => {
            s.push_str("| Monomial |\n|---|\n");
            for e in basis {
                let _ = writeln!(s, "| {e} |");
            }
        }
    }
    s
}
