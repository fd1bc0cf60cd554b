//! Command-line front end: config ingestion, orchestration of the
//! verification suites, and machine-readable report emission.

mod tasks;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;

use nls_defect::defect_rep::NLSDefectParams;
use nls_defect::report::Report;
use nls_defect::Error;
use num_complex::Complex64;

#[derive(Parser)]
#[command(
    name = "nlsdefect",
    version,
    about = "Verification and analysis runs for the defect NLS toolkit"
)]
struct Cli {
    /// Config file: `key = value` entries under `[section]` headers.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for all sampled momenta; runs are deterministic per seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of field components.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Bulk coupling constant.
    #[arg(long, global = true)]
    g: Option<f64>,
    /// Named parameter preset; see `presets list`.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Report output path (JSON document, written atomically).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Residual tolerance override.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Residual checks on the core structures.
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
    /// Build a classified-family representation and verify it.
    Classify,
    /// Few-particle amplitudes, cross-checked between contraction orders.
    Amplitude,
    /// Hierarchy commutators and defect-generator symmetry on test states.
    Hierarchy,
    /// Boundary conditions at the defect.
    Boundary {
        #[command(subcommand)]
        what: BoundaryWhat,
    },
    /// Symmetry-breaking analysis of generator vacuum values.
    Breaking {
        #[command(subcommand)]
        what: BreakingWhat,
    },
    /// Built-in parameter sets.
    Presets {
        #[command(subcommand)]
        what: PresetsWhat,
    },
}

#[derive(Subcommand)]
enum VerifyWhat {
    /// Unitarity and Yang-Baxter residuals of the doubled S-matrix.
    Smatrix,
    /// Structural constraints of a representation.
    Rep,
    /// Exchange relations of a representation against the S-matrix.
    RtEquations,
}

#[derive(Subcommand)]
enum BoundaryWhat {
    /// Render the boundary conditions as differential relations.
    Derive,
    /// Check the functional equations or the jump relation numerically.
    Verify,
}

#[derive(Subcommand)]
enum BreakingWhat {
    /// Expand generator vacuum values and list their coefficients.
    Expand,
    /// Classify broken and unbroken generators, with dressing checks.
    Classify,
}

#[derive(Subcommand)]
enum PresetsWhat {
    /// Print the preset catalog.
    List,
}

/// Config file layout; every field optional, command-line flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    n: Option<usize>,
    g: Option<f64>,
    tol: Option<f64>,
    preset: Option<String>,
    sampling: Option<SamplingSection>,
    rep: Option<RepSection>,
    breaking: Option<BreakingSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SamplingSection {
    count: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepSection {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    alpha_re: Option<f64>,
    alpha_im: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BreakingSection {
    theta0: Option<f64>,
    mu: Option<f64>,
    a: Option<f64>,
    n_max: Option<usize>,
}

/// Fully resolved run settings.
pub(crate) struct Settings {
    pub seed: u64,
    pub n: usize,
    pub g: f64,
    pub tol: Option<f64>,
    pub preset: Option<String>,
    pub count: usize,
    pub rep: Option<NLSDefectParams>,
    pub theta0: f64,
    pub mu: f64,
    pub scale: f64,
    pub n_max: usize,
}

fn resolve(cli: &Cli) -> Result<Settings, Error> {
    let file = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Config {
                field: "config".into(),
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            toml::from_str::<FileConfig>(&text).map_err(|e| Error::Config {
                field: "config".into(),
                message: e.to_string(),
            })?
        }
        None => FileConfig::default(),
    };
    let breaking = file.breaking.unwrap_or(BreakingSection {
        theta0: None,
        mu: None,
        a: None,
        n_max: None,
    });
    let rep = file.rep.map(|r| NLSDefectParams {
        a: r.a,
        b: r.b,
        c: r.c,
        d: r.d,
        alpha: Complex64::new(r.alpha_re.unwrap_or(1.0), r.alpha_im.unwrap_or(0.0)),
    });
    if let Some(p) = &rep {
        p.validate()?;
    }
    let s = Settings {
        seed: cli.seed.or(file.seed).unwrap_or(7),
        n: cli.n.or(file.n).unwrap_or(2),
        g: cli.g.or(file.g).unwrap_or(1.0),
        tol: cli.tol.or(file.tol),
        preset: cli.preset.clone().or(file.preset),
        count: file.sampling.and_then(|s| s.count).unwrap_or(20),
        rep,
        theta0: breaking.theta0.unwrap_or(0.3),
        mu: breaking.mu.unwrap_or(0.7),
        scale: breaking.a.unwrap_or(2.0),
        n_max: breaking.n_max.unwrap_or(6),
    };
    if s.n == 0 {
        return Err(Error::Config { field: "n".into(), message: "must be at least 1".into() });
    }
    if s.count == 0 {
        return Err(Error::Config {
            field: "sampling.count".into(),
            message: "must be at least 1".into(),
        });
    }
    Ok(s)
}

fn write_report(report: &Report, out: &PathBuf) -> std::io::Result<()> {
    let mut body = serde_json::to_vec_pretty(report).expect("report serializes");
    body.push(b'\n');
    // Atomic publish: write beside the target, then rename over it.
    let tmp = out.with_extension("tmp");
    fs::write(&tmp, &body)?;
    fs::rename(&tmp, out)
}

fn print_summary(report: &Report) {
    for rec in &report.records {
        let verdict = if rec.pass { "pass" } else { "FAIL" };
        match (rec.residual, &rec.value) {
            (Some(r), _) => println!(
                "{verdict} {}: residual {:.3e} (tol {:.1e})",
                rec.name,
                r,
                rec.tolerance.unwrap_or(f64::NAN)
            ),
            (None, Some(v)) => println!("{verdict} {}: {v}", rec.name),
            (None, None) => println!("{verdict} {}", rec.name),
        }
    }
    println!("overall: {}", if report.pass { "pass" } else { "fail" });
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match resolve(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match &cli.cmd {
        Cmd::Verify { what: VerifyWhat::Smatrix } => tasks::verify_smatrix(&settings),
        Cmd::Verify { what: VerifyWhat::Rep } => tasks::verify_rep(&settings),
        Cmd::Verify { what: VerifyWhat::RtEquations } => tasks::verify_rt_equations(&settings),
        Cmd::Classify => tasks::classify(&settings),
        Cmd::Amplitude => tasks::amplitude(&settings),
        Cmd::Hierarchy => tasks::hierarchy(&settings),
        Cmd::Boundary { what: BoundaryWhat::Derive } => tasks::boundary_derive(&settings),
        Cmd::Boundary { what: BoundaryWhat::Verify } => tasks::boundary_verify(&settings),
        Cmd::Breaking { what: BreakingWhat::Expand } => tasks::breaking_expand(&settings),
        Cmd::Breaking { what: BreakingWhat::Classify } => tasks::breaking_classify(&settings),
        Cmd::Presets { what: PresetsWhat::List } => tasks::presets_list(&settings),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    print_summary(&report);
    if let Some(out) = &cli.out {
        if let Err(e) = write_report(&report, out) {
            eprintln!("error: cannot write {}: {e}", out.display());
            return ExitCode::from(2);
        }
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
