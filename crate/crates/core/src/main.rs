use clap::{Args, Parser, Subcommand};
use lhybrid::harness::{self, config};
use lhybrid::Error;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(version, about = "Dirichlet L-values on the critical line and explicit bounds for them")]
struct Cli {
    /// CSV output path (verify).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON output path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Error radius for L-values.
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for the lemma suites.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Modulus invariants and one row per character.
    Profile { q: u64 },
    /// Sweep (q, χ, t) cells and check every selected bound.
    Verify(VerifyArgs),
    /// Randomized dominance suites for the exponential-sum lemmas.
    Lemmas {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Region-by-region replay of the dyadic argument.
    Replay {
        q: u64,
        chi_index: u64,
        #[arg(allow_negative_numbers = true)]
        t: f64,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// key = value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated moduli.
    #[arg(long)]
    moduli: Option<String>,
    /// Use every sixth power up to this cap instead of a list.
    #[arg(long)]
    sixth_powers_max: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    t_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long)]
    t_count: Option<usize>,
    /// linear | log
    #[arg(long)]
    t_spacing: Option<String>,
    /// all | primitive | principal
    #[arg(long)]
    chars: Option<String>,
    /// Comma-separated families: theorem, corollary, convexity, partial,
    /// principal, rademacher, all.
    #[arg(long)]
    bounds: Option<String>,
    /// Also replay the dyadic argument on every nonprincipal cell.
    #[arg(long)]
    replay: bool,
}

fn put(map: &mut BTreeMap<String, String>, k: &str, v: Option<String>) {
    if let Some(v) = v {
        map.insert(k.to_string(), v);
    }
}

fn verify_config(cli: &Cli, a: &VerifyArgs) -> lhybrid::Result<config::SweepConfig> {
    let mut map = match &a.config {
        Some(p) => config::read_config_file(p)?,
        None => BTreeMap::new(),
    };
    // a modulus flag replaces whichever modulus source the file named
    if a.moduli.is_some() || a.sixth_powers_max.is_some() {
        map.remove("moduli");
        map.remove("sixth_powers_max");
    }
    let m = &mut map;
    put(m, "moduli", a.moduli.clone());
    put(m, "sixth_powers_max", a.sixth_powers_max.map(|v| v.to_string()));
    put(m, "t_min", a.t_min.map(|v| v.to_string()));
    put(m, "t_max", a.t_max.map(|v| v.to_string()));
    put(m, "t_count", a.t_count.map(|v| v.to_string()));
    put(m, "t_spacing", a.t_spacing.clone());
    put(m, "chars", a.chars.clone());
    put(m, "bounds", a.bounds.clone());
    put(m, "replay", a.replay.then(|| "true".to_string()));
    put(m, "eps", cli.eps.map(|v| v.to_string()));
    put(m, "threads", cli.threads.map(|v| v.to_string()));
    put(m, "out", cli.out.as_ref().map(|p| p.display().to_string()));
    put(m, "json", cli.json.as_ref().map(|p| p.display().to_string()));
    config::SweepConfig::from_map(&map)
}

fn write_json<T: serde::Serialize>(path: &Option<PathBuf>, v: &T) -> lhybrid::Result<()> {
    if let Some(p) = path {
        let s = serde_json::to_string_pretty(v).map_err(|e| Error::Usage(format!("json: {e}")))?;
        std::fs::write(p, s).map_err(|e| Error::Usage(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> lhybrid::Result<u8> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Usage("threads must be positive".into()));
        }
    }
    match &cli.cmd {
        Cmd::Profile { q } => {
            let r = harness::cmd_profile(*q)?;
            print!("{}", r.render());
            write_json(&cli.json, &r)?;
            Ok(0)
        }
        Cmd::Verify(a) => {
            let cfg = verify_config(cli, a)?;
            let out = harness::cmd_verify(&cfg)?;
            let s = &out.summary;
            println!("cells: {}  passed: {}  failed: {}", s.cells, s.passed, s.failed);
            for (name, f) in &s.families {
                println!(
                    "  {name:<11} checked {:>6}  violations {:>4}  min margin {}",
                    f.checked,
                    f.violations,
                    f.min_margin.map_or("-".into(), harness::fmt17)
                );
            }
            for e in &s.errors {
                println!("  error: {e}");
            }
            if !s.replay_findings.is_empty() {
                println!("  finding: replay total exceeds the closed form on {} cells", s.replay_findings.len());
            }
            Ok(out.exit_code() as u8)
        }
        Cmd::Lemmas { trials } => {
            if let Some(n) = cli.threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
            }
            let r = harness::cmd_lemmas(cli.seed, *trials)?;
            print!("{}", r.render());
            write_json(&cli.json, &r)?;
            Ok(r.exit_code() as u8)
        }
        Cmd::Replay { q, chi_index, t } => {
            let r = harness::cmd_replay(*q, *chi_index, *t, cli.eps.unwrap_or(1e-6))?;
            print!("{}", r.render());
            write_json(&cli.json, &r)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
