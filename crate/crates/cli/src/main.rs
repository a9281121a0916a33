mod config;

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fujita_core::certificates::{gaussian_certificate, stationary_certificate};
use fujita_core::exec::Execution;
use fujita_core::grid::{Primitive, ProfileSpec};
use fujita_core::params::{
    classify_inhomogeneous, classify_mean_nonneg, classify_positive, critical_exponents, ExtendedReal,
};
use fujita_core::scan::{run_scan, ScanSpec};
use fujita_core::solver::{heat_reference, run_observed, write_trace_csv, SolveStatus};
use serde_json::{json, Value};

use config::{parse_exponent, Scenario, ScenarioConfig};

#[derive(Parser)]
#[command(name = "fujita", version, about = "Radial solver and certificates for u_t - Δu = |u|^p + b|∇u|^q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and write trace.csv, final_field.csv, outcome.json.
    Run { config: PathBuf },
    /// Build and verify a global-existence certificate.
    Certify {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_exponent)]
        p: f64,
        #[arg(long, value_parser = parse_exponent)]
        q: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, value_enum)]
        kind: CertKind,
        #[arg(long, default_value = "certificate.json")]
        output: PathBuf,
    },
    /// Classify and test every point of a (p, q) lattice.
    Scan {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_range)]
        p_range: (f64, f64),
        #[arg(long, value_parser = parse_range)]
        q_range: (f64, f64),
        #[arg(long)]
        steps: usize,
        /// Time horizon of each confirmation run.
        #[arg(long, default_value_t = 50.0)]
        budget: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value = "scan_out")]
        out: PathBuf,
    },
    /// Print the critical exponents for dimension n.
    Table {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CertKind {
    Gaussian,
    Stationary,
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected lo,hi, got {s:?}"))?;
    Ok((parse_exponent(a)?, parse_exponent(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Run { config } => cmd_run(&config),
        Command::Certify {
            n,
            p,
            q,
            b,
            kind,
            output,
        } => cmd_certify(n, p, q, b, kind, &output),
        Command::Scan {
            n,
            p_range,
            q_range,
            steps,
            budget,
            b,
            out,
        } => cmd_scan(n, p_range, q_range, steps, budget, b, &out),
        Command::Table { n, json } => cmd_table(n, json),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Amplitude of a lone `A e^{-r²/4}` profile.
fn single_gaussian(profile: &ProfileSpec) -> Option<f64> {
    match profile.terms() {
        [Primitive::Gaussian { amplitude }] => Some(*amplitude),
        _ => None,
    }
}

fn classification(sc: &Scenario) -> Value {
    if !(sc.params.use_source && sc.params.use_gradient) {
        return json!({"verdict": null, "note": "source or gradient term switched off; the regimes cover the full equation only"});
    }
    let verdict = if sc.forcing.is_some() {
        classify_inhomogeneous(&sc.params, true)
    } else if sc.initial.values().iter().all(|&v| v >= 0.0) {
        classify_positive(&sc.params)
    } else {
        classify_mean_nonneg(&sc.params, false)
    };
    match verdict {
        Ok(v) => json!({
            "verdict": v.verdict.as_str(),
            "triggered_condition": v.triggered_condition,
            "rule": v.theorem_tag,
        }),
        Err(e) => json!({"verdict": null, "note": e.to_string()}),
    }
}

fn cmd_run(path: &Path) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let sc = ScenarioConfig::from_json(&text)?.build()?;

    let reference_amp = (!sc.params.use_source && !sc.params.use_gradient && sc.forcing.is_none())
        .then(|| single_gaussian(&sc.profile))
        .flatten();
    let mut max_err: f64 = 0.0;
    let outcome = run_observed(&sc.params, &sc.initial, sc.forcing.as_ref(), &sc.solve, |t, u| {
        if let Some(a) = reference_amp {
            let r = heat_reference(t, u.grid());
            for (x, y) in u.values().iter().zip(r.values()) {
                max_err = max_err.max((x - a * y).abs());
            }
        }
    })?;

    fs::create_dir_all(&sc.out_dir).with_context(|| format!("creating {}", sc.out_dir.display()))?;
    let trace_path = sc.out_dir.join("trace.csv");
    let f = fs::File::create(&trace_path).with_context(|| format!("creating {}", trace_path.display()))?;
    write_trace_csv(&outcome.trace, BufWriter::new(f))?;
    let field_path = sc.out_dir.join("final_field.csv");
    let f = fs::File::create(&field_path).with_context(|| format!("creating {}", field_path.display()))?;
    outcome.final_field.write_csv(BufWriter::new(f))?;

    let mut doc = json!({
        "schema": 1,
        "status": outcome.status.name(),
        "detail": outcome.status,
        "steps": outcome.steps,
        "records": outcome.trace.len(),
        "t_final": outcome.trace.last().map(|r| r.t),
        "params": sc.params,
        "grid": {"n": sc.grid.dim(), "L": sc.grid.radius(), "M": sc.grid.interior(), "h": sc.grid.spacing()},
        "solve": sc.solve,
        "kaplan": outcome.kaplan,
        "classification": classification(&sc),
    });
    if let SolveStatus::BlowUp { t_star_estimate, .. } = outcome.status {
        doc["t_star"] = json!(t_star_estimate);
    }
    if reference_amp.is_some() {
        doc["max_error_vs_reference"] = json!(max_err);
    }
    write_json(&sc.out_dir.join("outcome.json"), &doc)?;
    println!("{}: {} after {} steps, outputs in {}", path.display(), outcome.status.name(), outcome.steps, sc.out_dir.display());
    Ok(())
}

fn cmd_certify(n: u32, p: f64, q: f64, b: f64, kind: CertKind, output: &Path) -> Result<()> {
    let doc = match kind {
        CertKind::Gaussian => gaussian_certificate(n, p, q, b)
            .context("no gaussian supersolution for these exponents")?
            .to_json(),
        CertKind::Stationary => stationary_certificate(n, p, q, b)
            .context("no stationary forced solution for these exponents")?
            .to_json(),
    };
    let text = serde_json::to_string_pretty(&doc)?;
    println!("{text}");
    write_json(output, &doc)
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    n: u32,
    p_range: (f64, f64),
    q_range: (f64, f64),
    steps: usize,
    budget: f64,
    b: f64,
    out: &Path,
) -> Result<()> {
    if !(budget > 0.0) {
        bail!("--budget must be positive");
    }
    let mut spec = ScanSpec::lattice(n, b, p_range, q_range, steps);
    spec.budget.t_end = budget;
    let result = run_scan(&spec, Execution::from_env())?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    fs::write(out.join("scan.csv"), result.to_csv()).context("writing scan.csv")?;
    write_json(&out.join("scan.json"), &result.to_json())?;
    let anomalies = result.points.iter().filter(|p| p.verdict_numeric.is_anomaly()).count();
    println!("{} points, {} flagged, outputs in {}", result.points.len(), anomalies, out.display());
    Ok(())
}

fn cmd_table(n: u32, as_json: bool) -> Result<()> {
    let ce = critical_exponents(n)?;
    let p_star = match ce.p_star {
        None => "undefined for n = 1".to_string(),
        Some(ExtendedReal::Infinity) => "inf (n/(n-2) read as +inf when n = 2)".to_string(),
        Some(ExtendedReal::Finite(v)) => v.to_string(),
    };
    let q_star = ce.q_star.map_or("undefined for n = 1".to_string(), |v| v.to_string());
    let rows = [
        (
            "p_F",
            "1+2/n",
            ce.p_fujita.to_string(),
            "source exponent: every positive solution blows up when p <= p_F",
        ),
        (
            "q_F",
            "1+1/(n+1)",
            ce.q_fujita.to_string(),
            "gradient exponent: every positive solution blows up when q <= q_F",
        ),
        (
            "q1(p)",
            "1+1/(np-1)",
            "depends on p".to_string(),
            "sign-changing data with nonnegative mean blow up when q <= q1(p)",
        ),
        (
            "p*",
            "n/(n-2)",
            p_star,
            "forced problem: blow-up for p < p*, small forcings allow global solutions above",
        ),
        (
            "q*",
            "n/(n-1)",
            q_star,
            "forced problem: blow-up for q < q*, small forcings allow global solutions above",
        ),
    ];
    if as_json {
        let doc = json!({
            "n": n,
            "p_fujita": ce.p_fujita,
            "q_fujita": ce.q_fujita,
            "q_one": "1+1/(np-1)",
            "p_star": ce.p_star,
            "q_star": ce.q_star,
            "rows": rows.iter().map(|(name, formula, value, governs)| json!({
                "name": name, "formula": formula, "value": value, "governs": governs,
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("critical exponents for n = {n}");
        for (name, formula, value, governs) in rows {
            println!("  {name:<6} = {formula:<11} = {value:<38} {governs}");
        }
    }
    Ok(())
}
