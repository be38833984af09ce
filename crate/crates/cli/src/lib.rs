//! Command-line front end: argument grammar, output formatting and exit
//! codes. `main` only wires [`run`] to the process.

pub mod cache;
pub mod demo;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use segre_core::homology::DEFAULT_SEED;
use segre_core::koszul::{cross_check_limited, DEFAULT_TERM_LIMIT};
use segre_core::syzygy::{check_np, default_degree_bound, find_witness, graded_betti, BettiEntry, BettiTable, NpStatus};
use segre_core::{MultiDegree, PointConfiguration, RankEngine, SegreParams};

use cache::{Cache, CacheEntry, EngineMeta};
use demo::{Instance, Lemma};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "segre", version, about = "Betti numbers and Property N_p for Segre embeddings")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for the prime selection of the rank engine.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Cache directory; falls back to SEGRE_CACHE_DIR, else no cache.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nonzero rank H̃_j(Δ_b) over all b of one degree.
    Betti {
        #[arg(long)]
        config: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, allow_hyphen_values = true)]
        index: isize,
    },
    /// Bounded Property N_p check.
    NpCheck {
        #[arg(long)]
        config: String,
        #[arg(short = 'p')]
        p: usize,
        /// Largest degree checked (default p + 3).
        #[arg(long)]
        max_degree: Option<usize>,
        /// Check the capped configuration instead.
        #[arg(long)]
        cap: bool,
    },
    /// Multidegrees where N_p fails, with certified cycles.
    Witness {
        #[arg(long)]
        config: String,
        #[arg(short = 'p')]
        p: usize,
        #[arg(long = "degree", required = true, num_args = 1..)]
        degrees: Vec<usize>,
    },
    /// Koszul Tor dimension against the divisor-complex count.
    KoszulCheck {
        #[arg(long)]
        config: String,
        #[arg(short = 'p')]
        p: usize,
        #[arg(short = 'q')]
        q: usize,
        #[arg(long, default_value_t = DEFAULT_TERM_LIMIT)]
        term_limit: u128,
    },
    /// Replays a chain construction and prints its certificate.
    UfoDemo {
        #[arg(value_enum)]
        lemma: Lemma,
        /// JSON instance file; without it a random instance is drawn.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value = "segre:1,1,1")]
        config: String,
        #[arg(long, default_value_t = 0)]
        sample_seed: u64,
        #[arg(short = 'p', default_value_t = 2)]
        p: usize,
        /// Axis size (for `ufo24`, 2 asks for the second case).
        #[arg(short = 't')]
        t: Option<usize>,
    },
    /// Inspect or clear the cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    Stats,
    List,
    Clear,
    Get {
        #[arg(long)]
        config: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, allow_hyphen_values = true)]
        index: isize,
        /// Comma-separated multidegree.
        #[arg(long, value_delimiter = ',')]
        b: Vec<i64>,
    },
}

/// Parses `args` (program name first), runs, writes the primary output to
/// `out` and returns the exit code.
pub fn run<I, T, W>(args: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> i32 {
    use segre_core::Error as E;
    match e.downcast_ref::<E>() {
        Some(
            E::Hypothesis(_)
            | E::Construction(_)
            | E::Decomposition(_)
            | E::Unsupported(_)
            | E::InvalidUfo(_)
            | E::NotACycle(_)
            | E::NotSupported(_),
        ) => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

fn execute<W: Write>(cli: &Cli, out: &mut W) -> Result<i32> {
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.global.jobs {
            if n == 0 {
                return Err(anyhow!(segre_core::Error::InvalidParams("--jobs must be at least 1".into())));
            }
            b = b.num_threads(n);
        }
        b.build().context("building the worker pool")?
    };
    let engine = RankEngine::with_seed(cli.global.seed);
    let mut buf = Vec::new();
    let code = pool.install(|| dispatch(cli, &engine, &mut buf));
    out.write_all(&buf)?;
    code
}

fn cache_dir(g: &Global) -> Option<PathBuf> {
    g.cache_dir
        .clone()
        .or_else(|| std::env::var_os("SEGRE_CACHE_DIR").filter(|v| !v.is_empty()).map(PathBuf::from))
}

fn segre(config: &str) -> Result<SegreParams> {
    let cfg: PointConfiguration = config.parse()?;
    cfg.segre_params()
        .cloned()
        .ok_or_else(|| anyhow!(segre_core::Error::InvalidParams(format!("{config} is not a Segre configuration"))))
}

fn dispatch<W: Write>(cli: &Cli, engine: &RankEngine, out: &mut W) -> Result<i32> {
    let fmt = cli.global.format;
    match &cli.command {
        Command::Betti { config, degree, index } => {
            let cfg: PointConfiguration = config.parse()?;
            let table = betti_cached(&cfg, *index, *degree, engine, cache_dir(&cli.global))?;
            match fmt {
                Format::Json => print_json(out, &table)?,
                Format::Csv => print_betti_csv(out, &table.entries)?,
            }
            Ok(EXIT_OK)
        }
        Command::NpCheck {
            config,
            p,
            max_degree,
            cap,
        } => {
            let dims = segre(config)?;
            let d = max_degree.unwrap_or_else(|| default_degree_bound(*p));
            let report = check_np(&dims, *p, d, *cap, engine)?;
            match fmt {
                Format::Json => print_json(out, &report)?,
                Format::Csv => {
                    writeln!(out, "p,q,t,multidegrees,vanishes")?;
                    for c in &report.checks {
                        writeln!(out, "{},{},{},{},{}", c.p, c.q, c.t, c.multidegrees, c.vanishes)?;
                    }
                }
            }
            Ok(match report.status {
                NpStatus::VerifiedThrough(_) => EXIT_OK,
                NpStatus::Failed => EXIT_FAILED,
            })
        }
        Command::Witness { config, p, degrees } => {
            let dims = segre(config)?;
            let found = find_witness(&dims, *p, degrees, engine)?;
            let cfg = PointConfiguration::segre(&dims);
            for w in &found {
                if !w.verify(&cfg)? {
                    return Err(anyhow!(segre_core::Error::Construction(format!(
                        "witness at {} failed re-verification",
                        w.b
                    ))));
                }
            }
            match fmt {
                Format::Json => print_json(
                    out,
                    &WitnessReport {
                        config: dims.to_string(),
                        p: *p,
                        degrees: degrees.clone(),
                        witnesses: &found,
                    },
                )?,
                Format::Csv => {
                    let rows: Vec<BettiEntry> = found
                        .iter()
                        .map(|w| BettiEntry {
                            j: *p as isize - 1,
                            b: w.b.clone(),
                            t: w.t,
                            rank: w.rank,
                            exact_fallback: false,
                        })
                        .collect();
                    print_betti_csv(out, &rows)?
                }
            }
            Ok(if found.is_empty() { EXIT_OK } else { EXIT_FAILED })
        }
        Command::KoszulCheck { config, p, q, term_limit } => {
            let dims = segre(config)?;
            let c = cross_check_limited(&dims, *p, *q, engine, *term_limit)?;
            let verdict = if c.matches {
                format!("match: {} = {}", c.koszul, c.cps)
            } else {
                format!("mismatch: {} != {}", c.koszul, c.cps)
            };
            match fmt {
                Format::Json => print_json(
                    out,
                    &KoszulReport {
                        config: dims.to_string(),
                        verdict: &verdict,
                        check: &c,
                    },
                )?,
                Format::Csv => {
                    writeln!(out, "p,q,koszul,cps,matches,blocks_match")?;
                    writeln!(out, "{},{},{},{},{},{}", c.p, c.q, c.koszul, c.cps, c.matches, c.blocks_match)?;
                }
            }
            Ok(if c.matches && c.blocks_match { EXIT_OK } else { EXIT_FAILED })
        }
        Command::UfoDemo {
            lemma,
            instance,
            config,
            sample_seed,
            p,
            t,
        } => {
            let inst = match instance {
                Some(path) => Instance::load(path).map_err(|e| anyhow!(segre_core::Error::InvalidParams(format!("{e:#}"))))?,
                None => Instance::sample(*lemma, config, *sample_seed, *p, *t)?,
            };
            let certificate = inst.replay()?;
            if fmt == Format::Csv {
                return Err(anyhow!(segre_core::Error::InvalidParams("ufo-demo prints JSON only".into())));
            }
            print_json(
                out,
                &serde_json::json!({ "instance": inst, "certificate": certificate, "verified": true }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Cache { action } => {
            let dir = cache_dir(&cli.global).ok_or_else(|| {
                anyhow!(segre_core::Error::InvalidParams(
                    "no cache directory (use --cache-dir or SEGRE_CACHE_DIR)".into()
                ))
            })?;
            let mut cache = Cache::open(&dir)?;
            match action {
                CacheAction::Stats => print_json(out, &cache.stats())?,
                CacheAction::List => {
                    for e in cache.entries() {
                        writeln!(out, "{}", serde_json::to_string(e)?)?;
                    }
                }
                CacheAction::Clear => {
                    cache.clear()?;
                    print_json(out, &cache.stats())?;
                }
                CacheAction::Get { config, degree, index, b } => {
                    let cfg: PointConfiguration = config.parse()?;
                    let key = (cfg.descriptor(), *degree, *index, b.clone());
                    match cache.get(&key) {
                        Some(e) => print_json(out, e)?,
                        None => {
                            writeln!(out, "null")?;
                            return Ok(EXIT_FAILED);
                        }
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}

#[derive(Serialize)]
struct WitnessReport<'a> {
    config: String,
    p: usize,
    degrees: Vec<usize>,
    witnesses: &'a [segre_core::syzygy::WitnessCertificate],
}

#[derive(Serialize)]
struct KoszulReport<'a> {
    config: String,
    verdict: &'a str,
    check: &'a segre_core::koszul::CrossCheck,
}

/// [`graded_betti`] through the cache when one is configured.
pub fn betti_cached(
    cfg: &PointConfiguration,
    j: isize,
    t: usize,
    engine: &RankEngine,
    dir: Option<PathBuf>,
) -> Result<BettiTable> {
    let Some(dir) = dir else {
        return Ok(graded_betti(cfg, j, t, engine)?);
    };
    let key = cfg.descriptor();
    let mut cache = Cache::open(&dir)?;
    if cache.has_slice(&key, t, j) {
        log::info!("cache hit for {key} t={t} j={j}");
        let entries = cache
            .slice(&key, t, j)
            .into_iter()
            .map(|e| BettiEntry {
                j,
                b: MultiDegree::new(e.b.clone()),
                t,
                rank: e.rank,
                exact_fallback: e.engine.exact_fallback,
            })
            .collect();
        return Ok(BettiTable::from_entries(cfg.label().to_string(), entries));
    }
    let table = graded_betti(cfg, j, t, engine)?;
    for e in &table.entries {
        cache.put(CacheEntry {
            config: key.clone(),
            t,
            j,
            b: e.b.coords().to_vec(),
            rank: e.rank,
            engine: EngineMeta {
                primes: engine.primes(),
                exact_fallback: e.exact_fallback,
            },
        })?;
    }
    cache.mark_slice(&key, t, j)?;
    Ok(table)
}

fn print_json<W: Write, T: Serialize + ?Sized>(out: &mut W, v: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn print_betti_csv<W: Write>(out: &mut W, entries: &[BettiEntry]) -> Result<()> {
    writeln!(out, "j,t,b,rank")?;
    for e in entries {
        let b: Vec<String> = e.b.coords().iter().map(|x| x.to_string()).collect();
        writeln!(out, "{},{},{},{}", e.j, e.t, b.join(";"), e.rank)?;
    }
    Ok(())
}
