//! `ggauss` command-line interface.
//!
//! Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 usage or
//! configuration error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{json, Value};

use ggauss::moments::{free_convolve, hankel_psd, mu_b_moments, MomentSequence, NcEvenTable, PairingTable};
use ggauss::pairings::{
    catalan, pairing_count, riordan_connected, statistic_distribution, total_singletons_closed_form, EnumerationCap,
};
use ggauss::permgroup::{
    big_h, check_cnd, check_positive_definite, isolated_fixed_points, metric_checks, theorem5_identity, Sampling,
    MAX_KERNEL_DEGREE,
};
use ggauss::randmat::{histogram, run_mc, sample_markov, spectrum, write_histogram_csv, EntryDistribution, McConfig};
use ggauss::scalar::{format_float, parse_rational, rational, Scalar};
use ggauss::verify::{self, Level};
use ggauss::{Error, WeightSpec};

#[derive(Parser, Debug)]
#[command(
    name = "ggauss",
    version,
    about = "Pair partitions, free cumulants, Markov random matrices and permutation-group kernels"
)]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write output to this file instead of standard output
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (0 = one per core)
    #[arg(long, global = true, env = "GGAUSS_THREADS", default_value_t = 0)]
    threads: usize,
    /// Raise the pairing enumeration cap from 2n = 16 to 2n = 18
    #[arg(long, global = true)]
    allow_large: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integer sequences, each computed by a formula and by enumeration
    Sequences {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        max: usize,
    },
    /// Moments and free cumulants of a weight, optionally mixed with the semicircle
    Moments {
        #[command(flatten)]
        weight: WeightArgs,
        /// Largest half-order N (moments m_2 .. m_2N)
        #[arg(long = "N", alias = "order")]
        order: usize,
        /// Mixing parameter b in [0, 1]: adds the moments of D_sqrt(b) mu ⊞ D_sqrt(1-b) gamma_0
        #[arg(long)]
        mix: Option<String>,
    },
    /// Hankel positivity of the moments of a weight (necessary condition only)
    Hankel {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long = "N", alias = "order")]
        order: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Monte Carlo spectral moments of Markov random matrices
    Randmat {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t = Dist::Rademacher)]
        dist: Dist,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Also write an eigenvalue histogram CSV of the first trial matrix
        #[arg(long)]
        histogram: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        bins: usize,
    },
    /// Positive definiteness and metric checks on S(n)
    Permcheck {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run the verification suite
    Verify {
        #[arg(long, value_enum)]
        level: VerifyLevel,
    },
}

#[derive(Args, Debug)]
struct WeightArgs {
    #[arg(long, value_enum)]
    weight: WeightKind,
    /// Weight parameter: integer, decimal or p/q (exact)
    #[arg(long, allow_negative_numbers = true)]
    param: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    Pairings,
    Catalan,
    Connected,
    Singletons,
    Moments,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum WeightKind {
    /// t = 1
    Const,
    /// q^cr
    Qcr,
    /// s^(n-cc)
    Scc,
    /// b^H
    #[value(name = "bH", alias = "bh")]
    BigH,
    /// beta^h
    Betah,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Dist {
    Rademacher,
    Gaussian,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyLevel {
    Quick,
    Full,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Usage(String),
    Check,
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Mismatch { .. } | Error::NoConvergence { .. } => {
                eprintln!("ggauss: {e}");
                Failure::Check
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Rendered command output: a CSV table and the equivalent JSON document.
struct Output {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json: Value,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.common.threads > 0 {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.common.threads)
            .build_global();
    }
    let cap = if cli.common.allow_large {
        EnumerationCap::extended()
    } else {
        EnumerationCap::default()
    };
    let result = run(&cli.command, cap).and_then(|out| {
        write_output(&cli.common, &out)?;
        Ok(out.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) | Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("ggauss: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("ggauss: {e}");
            ExitCode::from(2)
        }
    }
}

fn write_output(common: &Common, out: &Output) -> io::Result<()> {
    let sink: Box<dyn Write> = match &common.output {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    match common.format {
        Format::Csv => {
            writeln!(w, "{}", out.header.join(","))?;
            for r in &out.rows {
                writeln!(w, "{}", r.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","))?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &out.json).map_err(io::Error::other)?;
            writeln!(w)?;
        }
    }
    w.flush()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn run(cmd: &Command, cap: EnumerationCap) -> Result<Output, Failure> {
    match cmd {
        Command::Sequences { which, max } => cmd_sequences(*which, *max, cap),
        Command::Moments { weight, order, mix } => cmd_moments(weight, *order, mix.as_deref(), cap),
        Command::Hankel { weight, order, tol } => cmd_hankel(weight, *order, *tol, cap),
        Command::Randmat {
            n,
            trials,
            kmax,
            dist,
            seed,
            histogram,
            bins,
        } => cmd_randmat(
            McConfig {
                n: *n,
                trials: *trials,
                kmax: *kmax,
                dist: match dist {
                    Dist::Rademacher => EntryDistribution::Rademacher,
                    Dist::Gaussian => EntryDistribution::Gaussian,
                },
                seed: *seed,
            },
            histogram.as_ref(),
            *bins,
            cap,
        ),
        Command::Permcheck { n, b, x, tol } => cmd_permcheck(*n, *b, *x, *tol),
        Command::Verify { level } => cmd_verify(*level, cap),
    }
}

fn cmd_sequences(which: Which, max: usize, cap: EnumerationCap) -> Result<Output, Failure> {
    if max == 0 {
        return Err(Failure::Usage("--max must be at least 1".into()));
    }
    if which == Which::Moments {
        cap.check(max)?;
    }
    // (formula value, enumerated value when within the cap)
    let mut values: Vec<(BigUint, Option<BigUint>)> = Vec::with_capacity(max);
    let enum_max = max.min(cap.max_n());
    let dists = (1..=enum_max)
        .map(|n| statistic_distribution(n, cap))
        .collect::<ggauss::Result<Vec<_>>>()?;
    let connected = riordan_connected(max);
    let gm = if which == Which::Moments {
        let nc = NcEvenTable::new(max, cap)?;
        let conv = free_convolve(
            &MomentSequence::<BigRational>::semicircle(max),
            &MomentSequence::gaussian(max),
            max,
            &nc,
        )?;
        conv.values
            .into_iter()
            .map(|v| v.to_integer().to_biguint().unwrap_or_default())
            .collect()
    } else {
        Vec::new()
    };
    for n in 1..=max {
        let dist = dists.get(n - 1);
        let pair = match which {
            Which::Pairings => (pairing_count(n), dist.map(|d| d.total())),
            Which::Catalan => (catalan(n), dist.map(|d| d.noncrossing())),
            Which::Connected => (connected[n - 1].clone(), dist.map(|d| d.connected())),
            Which::Singletons => (total_singletons_closed_form(n), dist.map(|d| d.total_singletons())),
            Which::Moments => {
                let d = dist.expect("moments require enumeration within the cap");
                let by_weight = WeightSpec::SingletonCountPower(rational(2, 1)).sum_over(d);
                (
                    gm[n - 1].clone(),
                    Some(by_weight.to_integer().to_biguint().unwrap_or_default()),
                )
            }
        };
        values.push(pair);
    }
    let agree = values.iter().all(|(f, e)| e.as_ref().is_none_or(|e| e == f));
    let label = format!("{which:?}").to_lowercase();
    let rows = values
        .iter()
        .enumerate()
        .map(|(i, (f, e))| {
            vec![
                (i + 1).to_string(),
                (2 * (i + 1)).to_string(),
                f.to_string(),
                match e {
                    Some(e) if e == f => "agree".to_string(),
                    Some(e) => format!("mismatch:{e}"),
                    None => "formula-only".to_string(),
                },
            ]
        })
        .collect();
    let json = json!({
        "sequence": label,
        "agree": agree,
        "values": values.iter().enumerate().map(|(i, (f, e))| json!({
            "n": i + 1,
            "value": f.to_string(),
            "enumerated": e.as_ref().map(|e| e.to_string()),
        })).collect::<Vec<_>>(),
    });
    Ok(Output {
        header: vec!["n", "order", "value", "check"],
        rows,
        json,
        passed: agree,
    })
}

fn parse_weight(args: &WeightArgs) -> Result<WeightSpec<BigRational>, Failure> {
    let param = || -> Result<BigRational, Failure> {
        let raw = args
            .param
            .as_deref()
            .ok_or_else(|| Failure::Usage(format!("--weight {:?} needs --param", args.weight).to_lowercase()))?;
        Ok(parse_rational(raw)?)
    };
    Ok(match args.weight {
        WeightKind::Const => WeightSpec::Constant1,
        WeightKind::Qcr => WeightSpec::CrossingPower(param()?),
        WeightKind::Scc => WeightSpec::ComponentPower(param()?),
        WeightKind::BigH => WeightSpec::SingletonHPower(param()?),
        WeightKind::Betah => WeightSpec::SingletonCountPower(param()?),
    })
}

fn cmd_moments(weight: &WeightArgs, order: usize, mix: Option<&str>, cap: EnumerationCap) -> Result<Output, Failure> {
    if order == 0 {
        return Err(Failure::Usage("--N must be at least 1".into()));
    }
    let spec = parse_weight(weight)?;
    let b = mix.map(parse_rational).transpose()?;
    let table = PairingTable::new(order, cap)?;
    let moments = table.moments(&spec);
    let cumulants = table.connected_cumulants(&spec);
    let mixed = match &b {
        Some(b) => Some(mu_b_moments(&spec, b, order, cap)?),
        None => None,
    };
    let mut header = vec!["order", "moment", "moment_approx", "cumulant", "cumulant_approx"];
    if mixed.is_some() {
        header.extend(["mixed_moment", "mixed_moment_approx", "paths_agree"]);
    }
    let rows = (1..=order)
        .map(|n| {
            let mut row = vec![
                (2 * n).to_string(),
                moments.get(n).render(),
                format_float(moments.get(n).to_f64()),
                cumulants.get(n).render(),
                format_float(cumulants.get(n).to_f64()),
            ];
            if let Some(m) = &mixed {
                row.push(m.path_a.get(n).render());
                row.push(format_float(m.path_a.get(n).to_f64()));
                row.push((m.path_a.get(n) == m.path_b.get(n)).to_string());
            }
            row
        })
        .collect();
    let json = json!({
        "weight": spec.to_string(),
        "moments": moments.rendered(),
        "cumulants": cumulants.rendered(),
        "mix": b.as_ref().map(Scalar::render),
        "mixed_moments": mixed.as_ref().map(|m| m.path_a.rendered()),
        "mixed_moments_convolution": mixed.as_ref().map(|m| m.path_b.rendered()),
    });
    Ok(Output {
        header,
        rows,
        json,
        passed: true,
    })
}

fn cmd_hankel(weight: &WeightArgs, order: usize, tol: f64, cap: EnumerationCap) -> Result<Output, Failure> {
    if order == 0 {
        return Err(Failure::Usage("--N must be at least 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let spec = parse_weight(weight)?;
    let moments = PairingTable::new(order, cap)?.moments(&spec);
    let r = hankel_psd(&moments, tol)?;
    let json = json!({
        "weight": spec.to_string(),
        "moments": moments.rendered(),
        "size": r.size,
        "psd": r.psd.psd,
        "min_eigenvalue": format_float(r.psd.min_eigenvalue),
        "note": r.note,
    });
    Ok(Output {
        header: vec!["size", "psd", "min_eigenvalue", "note"],
        rows: vec![vec![
            r.size.to_string(),
            r.psd.psd.to_string(),
            format_float(r.psd.min_eigenvalue),
            r.note.to_string(),
        ]],
        json,
        // exploratory: a non-PSD result is reported, not a failed check
        passed: true,
    })
}

fn cmd_randmat(cfg: McConfig, hist: Option<&PathBuf>, bins: usize, cap: EnumerationCap) -> Result<Output, Failure> {
    cfg.validate()?;
    cap.check(cfg.kmax / 2)?;
    let report = run_mc(&cfg, cap)?;
    if let Some(path) = hist {
        let m = sample_markov(cfg.n, cfg.dist, ggauss::randmat::trial_seed(cfg.seed, 0))?;
        let scale = 1.0 / (cfg.n as f64).sqrt();
        let eig: Vec<f64> = spectrum(&m)?.into_iter().map(|l| l * scale).collect();
        let h = histogram(&eig, bins)?;
        write_histogram_csv(BufWriter::new(File::create(path)?), &h)?;
    }
    let fmt_opt = |z: Option<f64>| z.map(format_float).unwrap_or_default();
    let rows = report
        .moments
        .iter()
        .map(|e| {
            vec![
                e.k.to_string(),
                format_float(e.mean),
                format_float(e.stderr),
                e.target_exact.clone(),
                fmt_opt(e.z),
            ]
        })
        .collect();
    let passed = report.even_pass(4.0);
    let json = json!({
        "n": cfg.n,
        "trials": cfg.trials,
        "kmax": cfg.kmax,
        "dist": cfg.dist,
        "seed": cfg.seed,
        "even_pass": passed,
        "moments": report.moments.iter().map(|e| json!({
            "k": e.k,
            "mean": format_float(e.mean),
            "stderr": format_float(e.stderr),
            "target": e.target_exact,
            "z": e.z.map(format_float),
        })).collect::<Vec<_>>(),
    });
    Ok(Output {
        header: vec!["k", "mean", "stderr", "target", "z"],
        rows,
        json,
        passed,
    })
}

fn cmd_permcheck(n: usize, b: f64, x: f64, tol: f64) -> Result<Output, Failure> {
    if n == 0 || n > MAX_KERNEL_DEGREE {
        return Err(Failure::Usage(format!(
            "--n must be between 1 and {MAX_KERNEL_DEGREE} (Gram matrices of order n!), got {n}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 || x.is_nan() || x <= 0.0 || !b.is_finite() {
        return Err(Failure::Usage("--tol and --x must be positive and --b finite".into()));
    }
    // (name, passed, min eigenvalue, detail)
    let mut checks: Vec<(String, bool, Option<f64>, String)> = Vec::new();
    let t5 = theorem5_identity(n)?;
    checks.push((
        "h_decomposition".into(),
        t5.passed(),
        None,
        format!("{} elements", t5.checked),
    ));
    let pd = [
        (
            "pd_h".to_string(),
            check_positive_definite(n, |s| isolated_fixed_points(s) as f64, tol)?,
        ),
        (
            format!("pd_b^h(b={})", format_float(b)),
            check_positive_definite(n, |s| b.powi(isolated_fixed_points(s) as i32), tol)?,
        ),
        (
            format!("pd_exp(-xH)(x={})", format_float(x)),
            check_positive_definite(n, |s| (-x * big_h(s) as f64).exp(), tol)?,
        ),
    ];
    for (name, r) in pd {
        checks.push((
            name,
            r.psd,
            Some(r.min_eigenvalue),
            format!("scale {}", format_float(r.scale)),
        ));
    }
    let cnd = check_cnd(n, tol)?;
    checks.push((
        "cnd_H".into(),
        cnd.passed(),
        Some(cnd.centered.min_eigenvalue),
        cnd.witness()
            .unwrap_or_else(|| "centered kernel and exp(-xH), x in {0.1,0.5,1,2}".into()),
    ));
    let metric = metric_checks(n, Sampling::Exhaustive)?;
    checks.push((
        "metric_H".into(),
        metric.passed(),
        None,
        metric
            .witness
            .clone()
            .unwrap_or_else(|| format!("{} triples", metric.checked)),
    ));
    let passed = checks.iter().all(|c| c.1);
    let rows = checks
        .iter()
        .map(|(name, ok, eig, detail)| {
            vec![
                name.clone(),
                ok.to_string(),
                eig.map(format_float).unwrap_or_default(),
                detail.clone(),
            ]
        })
        .collect();
    let json = json!({
        "n": n,
        "passed": passed,
        "checks": checks.iter().map(|(name, ok, eig, detail)| json!({
            "check": name,
            "passed": ok,
            "min_eigenvalue": eig.map(format_float),
            "detail": detail,
        })).collect::<Vec<_>>(),
    });
    Ok(Output {
        header: vec!["check", "passed", "min_eigenvalue", "detail"],
        rows,
        json,
        passed,
    })
}

fn cmd_verify(level: VerifyLevel, cap: EnumerationCap) -> Result<Output, Failure> {
    let level = match level {
        VerifyLevel::Quick => Level::Quick,
        VerifyLevel::Full => Level::Full,
    };
    let outcomes = verify::run(level, cap);
    let passed = outcomes.iter().all(|o| o.passed);
    let rows = outcomes
        .iter()
        .map(|o| {
            vec![
                o.id.to_string(),
                if o.passed { "pass" } else { "FAIL" }.to_string(),
                format!("{:.3}", o.seconds),
                o.detail.clone(),
            ]
        })
        .collect();
    let json = json!({
        "level": level,
        "passed": passed,
        "checks": outcomes.iter().map(|o| json!({
            "id": o.id,
            "passed": o.passed,
            "detail": o.detail,
            "seconds": format!("{:.3}", o.seconds),
        })).collect::<Vec<_>>(),
    });
    Ok(Output {
        header: vec!["check", "status", "seconds", "detail"],
        rows,
        json,
        passed,
    })
}
