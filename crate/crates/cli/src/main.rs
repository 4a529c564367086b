//! `wlsi`: verification campaigns for weighted log-Sobolev inequalities on
//! generalised Cauchy measures.
//!
//! Exit status: 0 when every check passes (skips allowed), 1 when any check
//! fails, 2 on usage or parameter errors.

mod campaign;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use wlsi_core::IntegrationConfig;

use campaign::VerifyKind;
use output::{write_rows, Format, Row};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] wlsi_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Parser)]
#[command(name = "wlsi", version, about = "Verify weighted log-Sobolev inequalities for generalised Cauchy measures")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Dimension.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    /// Shape parameter β (> n/2).
    #[arg(long, global = true, default_value_t = 1.0)]
    beta: f64,
    /// Scale σ in ω = σ + |x|².
    #[arg(long, global = true, default_value_t = 1.0)]
    sigma: f64,
    /// Weight: omega-log | affine-log:K | affine-log-sq:K | omega-sq | constant:C, optionally @sigma_ref.
    #[arg(long, global = true)]
    weight: Option<String>,
    /// Curvature ρ (cd-check for n ≥ 2, herbst).
    #[arg(long, global = true)]
    rho: Option<f64>,
    /// ε values for power functions, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Sample count (Monte Carlo, sample, herbst) or case count (gamma2-verify).
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 20_240_601)]
    seed: u64,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::JsonLines)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyArg {
    #[value(name = "1d")]
    OneD,
    #[value(name = "nd")]
    Nd,
    #[value(name = "2d")]
    TwoD,
    #[value(name = "omega-sq")]
    OmegaSq,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Curvature-dimension check; n = 1 uses ρ = 2β−1, n ≥ 2 defaults to ρ = (2β−n)/2.
    CdCheck,
    /// Entropy/energy ratios for power functions (--eps) or the standard battery.
    LsiRatio,
    /// Extrapolated power-function ratio against 2/(2β−n).
    LowerBound,
    /// Inequality checks over the standard battery.
    Verify {
        #[arg(value_enum)]
        kind: VerifyArg,
    },
    /// Monte Carlo check of the exponential-moment bound (n = 1).
    Herbst,
    /// Planar tensorization constants, factorization and h-function checks.
    Tensorize2d,
    /// Draw samples from μ_{β,σ}.
    Sample,
    /// Closed-form Γ₂ against the finite-difference oracle on random cubics.
    Gamma2Verify,
    /// The default campaign.
    ReportAll,
}

impl Cli {
    fn config(&self) -> Result<IntegrationConfig, CliError> {
        let mut cfg = IntegrationConfig { seed: self.seed, rel_tol: self.tol, abs_tol: 0.1 * self.tol, ..Default::default() };
        // --samples means draws or cases for the other verbs
        let mc = matches!(self.verb, Verb::LsiRatio | Verb::Verify { .. } | Verb::ReportAll);
        if let (true, Some(s)) = (mc, self.samples) {
            cfg.mc_samples = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn verb_name(&self) -> String {
        let name = match &self.verb {
            Verb::CdCheck => "cd-check",
            Verb::LsiRatio => "lsi-ratio",
            Verb::LowerBound => "lower-bound",
            Verb::Verify { kind } => {
                return format!("verify {}", kind.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default())
            }
            Verb::Herbst => "herbst",
            Verb::Tensorize2d => "tensorize-2d",
            Verb::Sample => "sample",
            Verb::Gamma2Verify => "gamma2-verify",
            Verb::ReportAll => "report-all",
        };
        name.to_owned()
    }

    fn default_rho(&self) -> f64 {
        let d = 2.0 * self.beta - self.n as f64;
        self.rho.unwrap_or(if self.n == 1 { d } else { 0.5 * d })
    }
}

fn herbst_samples(cli: &Cli) -> usize {
    cli.samples.unwrap_or(1_000_000)
}

fn write_samples(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let p = wlsi_core::MeasureParams::new(cli.n, cli.beta, cli.sigma)?;
    let count = cli.samples.unwrap_or(1000);
    let xs = wlsi_core::measure::sample(&p, count, cli.seed)?;
    match cli.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record((0..cli.n).map(|i| format!("x{i}")))?;
            for x in &xs {
                w.write_record(x.iter().map(|v| v.to_string()))?;
            }
            w.flush()?;
        }
        Format::JsonLines => {
            for x in &xs {
                serde_json::to_writer(&mut *out, x)?;
                writeln!(out)?;
            }
        }
        Format::Table => {
            for x in &xs {
                let s: Vec<String> = x.iter().map(|v| format!("{v:>24.16e}")).collect();
                writeln!(out, "{}", s.join(" "))?;
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = cli.config()?;
    let rho = cli.default_rho();
    let echo = json!({
        "verb": cli.verb_name(),
        "n": cli.n,
        "beta": cli.beta,
        "sigma": cli.sigma,
        "weight": cli.weight,
        "rho": rho,
        "eps": cli.eps,
        "samples": cli.samples,
        "seed": cli.seed,
        "tol": cli.tol,
        "format": cli.format,
        "out": cli.out,
        "threads": rayon::current_num_threads(),
        "integration": cfg,
    });
    eprintln!("config {echo}");

    let mut sink: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let (n, beta, sigma) = (cli.n, cli.beta, cli.sigma);
    let recs = match &cli.verb {
        Verb::Sample => {
            write_samples(cli, &mut *sink)?;
            sink.flush()?;
            return Ok(true);
        }
        Verb::CdCheck => campaign::cd_check(n, beta, sigma, rho)?,
        Verb::LsiRatio => {
            let w = campaign::parse_weight(cli.weight.as_deref().unwrap_or("omega-log"), sigma)?;
            campaign::ratio(n, beta, sigma, &w, &cli.eps, &cfg)?
        }
        Verb::LowerBound => campaign::lower_bound(n, beta, sigma, &cli.eps)?,
        Verb::Verify { kind } => {
            let k = match kind {
                VerifyArg::OneD => VerifyKind::OneD,
                VerifyArg::Nd => VerifyKind::Nd,
                VerifyArg::TwoD => VerifyKind::TwoD,
                VerifyArg::OmegaSq => VerifyKind::OmegaSq,
            };
            campaign::verify(k, n, beta, &cfg)?
        }
        Verb::Herbst => {
            if n != 1 {
                return Err(CliError::Usage("herbst runs in one dimension (--n 1)".into()));
            }
            campaign::herbst(beta, sigma, rho, herbst_samples(cli), cli.seed, &cfg)?
        }
        Verb::Tensorize2d => campaign::tensorize_2d(beta, &cfg)?,
        Verb::Gamma2Verify => campaign::gamma2(cli.samples.unwrap_or(100), cli.seed)?,
        Verb::ReportAll => campaign::report_all(&cfg, herbst_samples(cli), cli.seed)?,
    };
    let mut rows: Vec<Row> = recs.iter().map(|r| Row::from_record(r, cli.seed)).collect();
    rows.sort_by(|a, b| {
        a.check_id
            .cmp(&b.check_id)
            .then(a.n.cmp(&b.n))
            .then(a.beta.total_cmp(&b.beta))
            .then(a.sigma.total_cmp(&b.sigma))
    });
    write_rows(&rows, cli.format, &mut *sink)?;
    sink.flush()?;
    for r in rows.iter().filter(|r| r.failed()) {
        eprintln!("fail {}: {}", r.check_id, r.note);
    }
    let failed = rows.iter().filter(|r| r.failed()).count();
    let skipped = rows.iter().filter(|r| r.pass.is_none()).count();
    eprintln!("summary checks={} failed={failed} skipped={skipped}", rows.len());
    Ok(failed == 0)
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("WLSI_THREADS") {
        let k: usize = v
            .parse()
            .ok()
            .filter(|&k| k > 0)
            .ok_or_else(|| CliError::Usage(format!("WLSI_THREADS must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|_| run(&cli));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
