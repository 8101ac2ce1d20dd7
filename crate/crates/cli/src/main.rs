use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use f2dense::io::{self, Format};
use f2dense::pls::{self, parse_size, DEFAULT_HYBRID_THRESHOLD};
use f2dense::selftest::{self, SelftestOptions};
use f2dense::{par, Algorithm, BitMatrix, EliminationConfig, Permutation};

#[derive(Parser)]
#[command(name = "f2dense", version, about = "Dense linear algebra over GF(2)")]
struct Cli {
    /// Use the data-parallel kernels.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random matrix.
    Gen {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "ascii")]
        format: Format,
    },
    /// Reduce a matrix to reduced row echelon form.
    Rref {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        elim: ElimArgs,
        #[arg(long)]
        out: PathBuf,
        /// Output format; defaults to the input's.
        #[arg(long)]
        format: Option<Format>,
    },
    /// In-place PLS decomposition.
    Pls {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        elim: ElimArgs,
        #[arg(long)]
        out_packed: PathBuf,
        #[arg(long)]
        out_p: PathBuf,
        #[arg(long)]
        out_q: PathBuf,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Print the rank of a matrix.
    Rank {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        elim: ElimArgs,
    },
    /// Time RREF on random matrices and print CSV.
    Bench {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        elim: ElimArgs,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
    /// Run the built-in oracle checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Args)]
struct ElimArgs {
    #[arg(long, default_value = "pls")]
    algorithm: Algorithm,
    /// Table bits, 0 for automatic.
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Recursion cutoff in bytes, e.g. 2M; defaults to min(4M, L2).
    #[arg(long, value_parser = size_arg)]
    cutoff: Option<usize>,
    /// Hybrid switch density.
    #[arg(long, default_value_t = DEFAULT_HYBRID_THRESHOLD)]
    threshold: f64,
}

impl ElimArgs {
    fn config(&self) -> Result<EliminationConfig> {
        let mut cfg = EliminationConfig::with_algorithm(self.algorithm);
        cfg.k = self.k;
        cfg.hybrid_threshold = self.threshold;
        if let Some(c) = self.cutoff {
            cfg.cutoff_bytes = c;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn size_arg(s: &str) -> std::result::Result<usize, String> {
    parse_size(s).filter(|&n| n > 0).ok_or_else(|| format!("bad size {s:?}"))
}

fn load(path: &PathBuf) -> Result<(BitMatrix, Format)> {
    io::load_matrix_detect(path).with_context(|| format!("reading {}", path.display()))
}

fn save(path: &PathBuf, a: &BitMatrix, format: Format) -> Result<()> {
    io::save_matrix(path, a, format).with_context(|| format!("writing {}", path.display()))
}

fn save_perm(path: &PathBuf, p: &Permutation) -> Result<()> {
    io::save_permutation(path, p).with_context(|| format!("writing {}", path.display()))
}

fn check_density(d: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&d) {
        bail!("density {d} not in [0, 1]");
    }
    Ok(())
}

fn reduce(a: &mut BitMatrix, cfg: &EliminationConfig) -> Result<usize> {
    if cfg.algorithm != Algorithm::Hybrid {
        return Ok(pls::rref(a, cfg)?);
    }
    let rep = pls::hybrid_rref_report(a, cfg)?;
    match (rep.switched_at, rep.switch_density) {
        (Some((r, c)), Some(d)) => eprintln!("hybrid: switched to PLS at row {r}, column {c}, density {d:.4}"),
        _ => eprintln!("hybrid: finished with M4RI"),
    }
    Ok(rep.rank)
}

fn run(cli: Cli) -> Result<ExitCode> {
    par::set_parallel(cli.parallel);
    match cli.cmd {
        Cmd::Gen { rows, cols, density, seed, out, format } => {
            check_density(density)?;
            save(&out, &BitMatrix::random(rows, cols, density, seed), format)?;
        }
        Cmd::Rref { input, elim, out, format } => {
            let cfg = elim.config()?;
            let (mut a, found) = load(&input)?;
            let r = reduce(&mut a, &cfg)?;
            save(&out, &a, format.unwrap_or(found))?;
            println!("rank={r}");
        }
        Cmd::Pls { input, elim, out_packed, out_p, out_q, format } => {
            let cfg = elim.config()?;
            let (a, found) = load(&input)?;
            let res = pls::pls_decompose(&a, &cfg)?;
            save(&out_packed, &res.matrix, format.unwrap_or(found))?;
            save_perm(&out_p, &res.p)?;
            save_perm(&out_q, &res.q)?;
            println!("rank={}", res.rank);
        }
        Cmd::Rank { input, elim } => {
            let cfg = elim.config()?;
            let (a, _) = load(&input)?;
            println!("rank={}", pls::rank(&a, &cfg)?);
        }
        Cmd::Bench { rows, cols, density, seed, elim, reps } => {
            check_density(density)?;
            let cfg = elim.config()?;
            let mut out = std::io::stdout().lock();
            writeln!(out, "algorithm,rows,cols,density,rep,seconds,rank")?;
            for rep in 0..reps {
                let mut a = BitMatrix::random(rows, cols, density, seed.wrapping_add(rep as u64));
                let t = Instant::now();
                let r = pls::rref(&mut a, &cfg)?;
                let secs = t.elapsed().as_secs_f64().max(f64::MIN_POSITIVE);
                writeln!(out, "{},{rows},{cols},{density},{rep},{secs:.9},{r}", cfg.algorithm)?;
            }
        }
        Cmd::Selftest { seed, inject_fault } => {
            let t = Instant::now();
            match selftest::run(&SelftestOptions { seed, inject_fault }) {
                Ok(n) => println!("selftest passed: {n} cases in {:.2}s", t.elapsed().as_secs_f64()),
                Err(f) => {
                    println!("selftest FAILED: {f}");
                    return Ok(ExitCode::from(1));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
