//! Command line front end: builds the exact data stack for a chosen p,
//! runs verification suites, exports matrices and evaluates algebra
//! expressions.
//!
//! Exit codes: 0 success, 1 verification failure, 2 build or usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use uqsl2::export;
use uqsl2::hopf::parse_expr;
use uqsl2::pipeline::{self, Pipeline};

const DEFAULT_MAX_P: usize = 7;

#[derive(Parser)]
#[command(name = "uqsl2", version, about = "Exact engine for the restricted quantum group Uq(sl2) at a 2p-th root of unity")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the full data stack and serialize it to a directory
    Build {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run verification suites and report results
    Verify {
        #[arg(long)]
        p: usize,
        /// all, field, hopf, ribbon, integrals, modules, slf, mcg, conjecture
        #[arg(long, default_value = "all")]
        suite: Vec<String>,
        /// Emit the full JSON report instead of the summary table
        #[arg(long)]
        json: bool,
    },
    /// Export computed data as exact JSON or readable text
    Export {
        #[arg(long)]
        p: usize,
        /// st-matrices, gta-basis, ribbon, integrals, modules
        #[arg(long)]
        what: String,
        /// json or text
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Evaluate an algebra expression and print its PBW normal form
    Eval {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        expr: String,
    },
}

fn max_p() -> usize {
    std::env::var("UQSL2_MAX_P")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_P)
}

fn check_p(p: usize) -> Result<(), String> {
    if p < 2 {
        return Err(format!("p = {p} rejected: need p >= 2 (q a primitive 2p-th root of unity)"));
    }
    let cap = max_p();
    if p > cap {
        return Err(format!(
            "p = {p} exceeds the cap {cap}; raise UQSL2_MAX_P to override"
        ));
    }
    Ok(())
}

fn cmd_build(p: usize, out: &PathBuf) -> Result<(), String> {
    check_p(p)?;
    let pl = Pipeline::build(p)?;
    fs::create_dir_all(out).map_err(|e| format!("cannot create {}: {e}", out.display()))?;
    let manifest = serde_json::json!({
        "p": p,
        "dim_uq": pl.h.dim_uq(),
        "dim_slf": pl.slf.dim(),
        "provenance": uqsl2::report::Provenance::standard(),
    });
    let mut files = vec![("build.json".to_string(), export::to_json_string(&manifest))];
    for kind in export::EXPORT_KINDS {
        let v = export::export(&pl, kind)?;
        files.push((format!("{kind}.json"), export::to_json_string(&v)));
    }
    for (name, body) in files {
        let path = out.join(&name);
        fs::write(&path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_verify(p: usize, suites: &[String], json: bool) -> Result<bool, String> {
    check_p(p)?;
    let report = pipeline::run(p, suites)?;
    if json {
        println!("{}", report.to_json());
    } else {
        for line in report.summary_lines() {
            println!("{line}");
        }
    }
    Ok(!report.has_fail())
}

fn cmd_export(p: usize, what: &str, format: &str) -> Result<(), String> {
    check_p(p)?;
    if !export::EXPORT_KINDS.contains(&what) {
        return Err(format!(
            "unknown export kind '{what}'; expected one of {}",
            export::EXPORT_KINDS.join(", ")
        ));
    }
    let pl = Pipeline::build(p)?;
    match format {
        "json" => {
            let v = export::export(&pl, what)?;
            println!("{}", export::to_json_string(&v));
        }
        "text" => {
            print!("{}", export::render_text(&pl, what)?);
        }
        other => return Err(format!("unknown format '{other}'; expected json or text")),
    }
    Ok(())
}

fn cmd_eval(p: usize, expr: &str) -> Result<(), String> {
    check_p(p)?;
    let ctx = uqsl2::cyclo::Ctx::new(p)?;
    let h = uqsl2::hopf::HAlg::new(&ctx);
    let x = parse_expr(&h, expr)?;
    println!("{x}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res: Result<bool, String> = match &cli.cmd {
        Cmd::Build { p, out } => cmd_build(*p, out).map(|_| true),
        Cmd::Verify { p, suite, json } => cmd_verify(*p, suite, *json),
        Cmd::Export { p, what, format } => cmd_export(*p, what, format).map(|_| true),
        Cmd::Eval { p, expr } => cmd_eval(*p, expr).map(|_| true),
    };
    match res {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
