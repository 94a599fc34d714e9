//! Command-line surface: analyze instance files, generate seeded batches,
//! and verify the pinned golden suite.
//!
//! Exit codes: 0 success, 2 usage error, 3 finding (an applicable bound
//! failed), 4 internal inconsistency, 5 completed with assumed/unverified
//! hypotheses.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use samuel::batch::{self, BatchParams};
use samuel::golden;
use samuel::instance::InstanceSpec;
use samuel::pipeline;
use samuel::report::{Report, RunStatus};

#[derive(Parser)]
#[command(
    name = "samuel",
    version,
    about = "Exact Hilbert-Samuel, Ratliff-Rush and reduction-number analysis for m-primary ideals"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON report(s) to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Override the instance seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the computation horizon.
    #[arg(long, global = true)]
    horizon: Option<u32>,
    /// Override the coefficient field: `q` or `fp:<prime>`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Worker threads for batch runs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Print stage timings and per-check detail.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline on one instance file.
    Run { file: PathBuf },
    /// Hilbert data only.
    Hilbert { file: PathBuf },
    /// Ratliff-Rush analytics (plus the stages they need).
    Rr { file: PathBuf },
    /// Minimal reduction and reduction number only.
    Reduce { file: PathBuf },
    /// Generate and run a seeded batch of random monomial instances.
    Batch {
        #[arg(long, default_value_t = 3)]
        vars: usize,
        #[arg(long, default_value_t = 5)]
        max_degree: u16,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Replace each ideal by its integral closure (hypothesis verified
        /// by construction).
        #[arg(long)]
        closure: bool,
    },
    /// Run the pinned golden suite and compare every published value.
    VerifyPaper {
        /// Include the long four-variable case.
        #[arg(long)]
        slow: bool,
    },
}

fn apply_overrides(spec: &mut InstanceSpec, cli: &Cli) {
    if let Some(seed) = cli.seed {
        spec.seed = seed;
    }
    if let Some(h) = cli.horizon {
        spec.limits.horizon = Some(h);
    }
    if let Some(f) = &cli.field {
        spec.ring.field = match f.to_lowercase().as_str() {
            "q" => "Q".to_string(),
            "fp" => "Fp".to_string(),
            other => other.replace("fp:", "Fp:"),
        };
    }
}

fn print_summary(report: &Report, verbose: bool) {
    if let Some(h) = &report.hilbert {
        println!("dim      : {}", h.dim);
        println!("h        : {:?}", h.h);
        println!("e        : {:?}", &h.e[..=h.dim.min(h.e.len() - 1)]);
        println!("eta      : {}", h.eta);
        if let Some(p) = &h.power_identities {
            println!(
                "power    : q={} agree={} e3-via-power={:?}",
                p.q, p.agree, p.e3_via_power
            );
        }
    }
    if let Some(r) = &report.reduction {
        println!(
            "reduction: r_J = {} for J = ({}){}",
            r.r,
            r.generators.join(", "),
            if r.pinned { " [pinned]" } else { "" }
        );
        println!("l(R/J)   : {} (matches e0: {})", r.colength, r.multiplicity_check);
    }
    if let Some(rr) = &report.ratliff_rush {
        if let Some(g) = &rr.gap_witness {
            println!("closure  : strictly larger than I (witness {g})");
        }
        if let Some(b) = &rr.behaves_well {
            println!(
                "behaves  : {} (b = {}, s = {})",
                b.verdict, b.b, b.s
            );
        }
        if let Some(d) = &rr.depth_bound {
            println!("depth    : G(I) depth >= {} (horizon {})", d.bound, d.horizon);
        }
        if let Some(rt) = rr.rr_reduction_number {
            println!("r~_J     : {rt}");
        }
    }
    for v in &report.verdicts {
        let status = match (v.applicable, v.holds) {
            (false, _) => "not applicable - hypothesis failed".to_string(),
            (true, Some(true)) => format!(
                "holds{}",
                if v.equality_attained == Some(true) {
                    " with equality"
                } else {
                    ""
                }
            ),
            (true, Some(false)) => "VIOLATED".to_string(),
            (true, None) => "unevaluated".to_string(),
        };
        println!(
            "verdict  : {:28} {} {} {:2} {:10}  [{}]",
            v.name,
            v.lhs,
            match v.relation {
                samuel::theorems::Relation::Le => "<=",
                samuel::theorems::Relation::Ge => ">=",
                samuel::theorems::Relation::Eq => "=",
            },
            v.rhs,
            "",
            status
        );
    }
    for e in &report.meta.errors {
        println!(
            "error    : [{}] {}{}",
            e.stage,
            e.message,
            if e.internal { " (internal)" } else { "" }
        );
    }
    if verbose {
        for (k, v) in &report.meta.timings_ms {
            println!("timing   : {k} = {v} ms");
        }
    }
    println!("status   : {:?}", report.meta.status);
}

fn write_json(path: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    if let Some(p) = path {
        std::fs::write(p, text)?;
    }
    Ok(())
}

fn run_single(file: &PathBuf, cli: &Cli, gate: fn(&mut InstanceSpec)) -> ExitCode {
    let mut spec = match InstanceSpec::from_path(file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    apply_overrides(&mut spec, cli);
    gate(&mut spec);
    match pipeline::run_instance(&spec) {
        Ok(analysis) => {
            let report = analysis.report;
            print_summary(&report, cli.verbose);
            if write_json(&cli.json, &report.to_json()).is_err() {
                eprintln!("error: could not write JSON output");
                return ExitCode::from(2);
            }
            ExitCode::from(report.meta.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(pipeline::usage_exit(&e) as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.cmd {
        Cmd::Run { file } => run_single(file, &cli, |_| {}),
        Cmd::Hilbert { file } => run_single(file, &cli, |s| {
            s.flags.superficial = "off".into();
            s.flags.depth = "off".into();
            s.flags.ratliff_rush = "off".into();
        }),
        Cmd::Rr { file } => run_single(file, &cli, |s| {
            s.flags.depth = "off".into();
        }),
        Cmd::Reduce { file } => run_single(file, &cli, |s| {
            s.flags.superficial = "off".into();
            s.flags.depth = "off".into();
            s.flags.ratliff_rush = "off".into();
        }),
        Cmd::Batch {
            vars,
            max_degree,
            count,
            closure,
        } => {
            let params = BatchParams {
                variables: *vars,
                max_degree: *max_degree,
                count: *count,
                closure: *closure,
                field: cli
                    .field
                    .clone()
                    .map(|f| if f.to_lowercase() == "q" { "Q".into() } else { f.replace("fp:", "Fp:") })
                    .unwrap_or_else(|| "Q".into()),
            };
            let seed = cli.seed.unwrap_or(0);
            let specs = match batch::batch_generate(&params, seed) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let results = batch::run_batch(&specs, cli.jobs);
            let mut reports = Vec::new();
            let mut worst = RunStatus::Clean;
            for (i, r) in results.into_iter().enumerate() {
                match r {
                    Ok(rep) => {
                        let st = rep.meta.status;
                        println!(
                            "instance {:4}: status {:?} (h = {:?})",
                            i,
                            st,
                            rep.hilbert.as_ref().map(|h| h.h.clone()).unwrap_or_default()
                        );
                        worst = worse(worst, st);
                        reports.push(rep);
                    }
                    Err(e) => {
                        eprintln!("instance {i}: error {e}");
                        worst = worse(worst, RunStatus::Internal);
                    }
                }
            }
            let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
            if write_json(&cli.json, &json).is_err() {
                eprintln!("error: could not write JSON output");
                return ExitCode::from(2);
            }
            println!("batch: {} instances, overall {:?}", reports.len(), worst);
            ExitCode::from(worst.exit_code() as u8)
        }
        Cmd::VerifyPaper { slow } => {
            let lines = golden::run_all(*slow);
            let mut all_ok = true;
            for line in &lines {
                all_ok &= line.ok;
                println!(
                    "{} {:28} {:32} {}",
                    if line.ok { "PASS" } else { "FAIL" },
                    line.case,
                    line.check,
                    if line.ok && !cli.verbose {
                        String::new()
                    } else {
                        line.detail.clone()
                    }
                );
            }
            let summary: Vec<_> = lines.iter().map(|l| (l.ok, &l.case, &l.check)).collect();
            let json = serde_json::to_string_pretty(
                &lines
                    .iter()
                    .map(|l| {
                        serde_json::json!({
                            "case": l.case, "check": l.check, "ok": l.ok, "detail": l.detail
                        })
                    })
                    .collect::<Vec<_>>(),
            )
            .expect("lines serialize");
            if write_json(&cli.json, &json).is_err() {
                eprintln!("error: could not write JSON output");
                return ExitCode::from(2);
            }
            drop(summary);
            println!(
                "verify-paper: {}/{} checks passed",
                lines.iter().filter(|l| l.ok).count(),
                lines.len()
            );
            if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
    }
}

fn worse(a: RunStatus, b: RunStatus) -> RunStatus {
    let rank = |s: RunStatus| match s {
        RunStatus::Clean => 0,
        RunStatus::HypothesisUnverified => 1,
        RunStatus::Finding => 2,
        RunStatus::Internal => 3,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}
