//! Command-line front end: validate configs, run experiments, and expose the
//! channel-tap and codebook primitives directly.
//!
//! Exit codes: 0 success, 2 configuration or flag errors, 3 runtime errors.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use molink::table::{config_hash, git_describe, Metadata};
use molink::{experiments, ExperimentConfig, ExperimentId, RunError};
use molink_core::channel::ChannelParams;
use molink_core::fec::{
    dhw_codebook, hamming_encode, min_energy_codebook, moco_search, rm84_encode, Codebook,
    IsiFreeTable, TranspositionModel,
};

#[derive(Parser)]
#[command(name = "molink", version, about = "Link-level simulator for diffusion-based molecular communication")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file and write CSV results.
    Run {
        /// Path to the TOML experiment config.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: $MOLINK_OUT or ./molink-out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Write into an existing output directory.
        #[arg(long)]
        force: bool,
    },
    /// Parse and validate a config without touching the filesystem.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// List the experiment identifiers accepted in configs.
    ListExperiments,
    /// Print symbol-sampled channel taps.
    Taps {
        /// Transmitter distance in µm (surface distance in 3-D).
        #[arg(long)]
        d: f64,
        /// Receiver radius in µm; presence selects the 3-D channel.
        #[arg(long)]
        rr: Option<f64>,
        /// Diffusivity in µm²/s.
        #[arg(long = "D")]
        diffusivity: f64,
        /// Symbol period in seconds.
        #[arg(long)]
        ts: f64,
        /// Number of taps.
        #[arg(long = "K")]
        taps: usize,
        /// Degradation rate in 1/s.
        #[arg(long)]
        lambda: Option<f64>,
        /// Degradation half-life in seconds (alternative to --lambda).
        #[arg(long)]
        half_life: Option<f64>,
    },
    /// Print a codebook in the plain-text interchange format.
    Codebook {
        /// Family: dhw, isifree, hamming, rm84, minenergy, moco.
        #[arg(long)]
        family: String,
        /// Block length (dhw, isifree, minenergy, moco).
        #[arg(long)]
        n: Option<usize>,
        /// Message length in bits (isifree).
        #[arg(long)]
        k: Option<usize>,
        /// Correctable crossover level (isifree).
        #[arg(long)]
        l: Option<usize>,
        /// Parity bit count (hamming).
        #[arg(long)]
        m: Option<u32>,
        /// Codebook size (minenergy, moco).
        #[arg(long)]
        size: Option<usize>,
        /// Minimum Hamming distance (minenergy).
        #[arg(long)]
        dmin: Option<usize>,
        /// One-slot delay probability of the toy channel (moco).
        #[arg(long, default_value_t = 0.1)]
        q: f64,
        /// Monte Carlo trials per transition row (moco).
        #[arg(long, default_value_t = 20_000)]
        trials: u32,
        /// Search seed (moco).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Run { config, out, seed, force } => run(config, out, seed, force),
        Command::Validate { config } => {
            let text = read_config(&config)?;
            let cfg = ExperimentConfig::from_toml(&text)?;
            println!("ok: {} (seed {})", cfg.experiment.id, cfg.experiment.seed);
            Ok(())
        }
        Command::ListExperiments => {
            for id in ExperimentId::ALL {
                println!("{id}");
            }
            Ok(())
        }
        Command::Taps { d, rr, diffusivity, ts, taps, lambda, half_life } => {
            print_taps(d, rr, diffusivity, ts, taps, lambda, half_life)
        }
        Command::Codebook { family, n, k, l, m, size, dmin, q, trials, seed } => {
            print_codebook(&family, n, k, l, m, size, dmin, q, trials, seed)
        }
    }
}

fn read_config(path: &PathBuf) -> Result<String, RunError> {
    std::fs::read_to_string(path)
        .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))
}

fn run(
    config: PathBuf,
    out: Option<PathBuf>,
    seed: Option<u64>,
    force: bool,
) -> Result<(), RunError> {
    let text = read_config(&config)?;
    let cfg = ExperimentConfig::from_toml(&text)?;
    let id = cfg.id()?;
    let seed = seed.unwrap_or(cfg.experiment.seed);

    let out_dir = out
        .or_else(|| std::env::var_os("MOLINK_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("molink-out"));
    if out_dir.exists() && !force {
        return Err(RunError::Config(format!(
            "output directory {} exists; pass --force to write into it",
            out_dir.display()
        )));
    }
    std::fs::create_dir_all(&out_dir)?;

    let started = Instant::now();
    let table = experiments::run(&cfg, seed)?;
    let runtime = started.elapsed().as_secs_f64();

    let csv_path = out_dir.join(format!("{id}.csv"));
    std::fs::write(&csv_path, table.to_csv())?;
    let meta = Metadata {
        experiment: id.to_string(),
        config_sha256: config_hash(text.as_bytes()),
        seed,
        git_describe: git_describe(),
        runtime_seconds: runtime,
        notes: table.notes.clone(),
    };
    meta.write_json(&out_dir.join(format!("{id}.meta.json")))?;

    println!("wrote {}", csv_path.display());
    for note in &table.notes {
        println!("note: {note}");
    }
    Ok(())
}

fn print_taps(
    d: f64,
    rr: Option<f64>,
    diffusivity: f64,
    ts: f64,
    taps: usize,
    lambda: Option<f64>,
    half_life: Option<f64>,
) -> Result<(), RunError> {
    let mut params = match rr {
        Some(r) => ChannelParams::three_dim(d, r, diffusivity),
        None => ChannelParams::one_dim(d, diffusivity),
    }
    .map_err(|e| RunError::Config(e.to_string()))?;
    match (lambda, half_life) {
        (Some(_), Some(_)) => {
            return Err(RunError::Config("set either --lambda or --half-life, not both".into()))
        }
        (Some(l), None) => {
            params = params
                .with_degradation_rate(l)
                .map_err(|e| RunError::Config(e.to_string()))?;
        }
        (None, Some(h)) => {
            params = params
                .with_half_life(h)
                .map_err(|e| RunError::Config(e.to_string()))?;
        }
        (None, None) => {}
    }
    let tv = params
        .channel_taps(ts, taps)
        .map_err(|e| RunError::Config(e.to_string()))?;
    println!("k p_k");
    for (k, p) in tv.taps.iter().enumerate() {
        println!("{} {}", k + 1, p);
    }
    println!("sum {}", tv.sum());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn print_codebook(
    family: &str,
    n: Option<usize>,
    k: Option<usize>,
    l: Option<usize>,
    m: Option<u32>,
    size: Option<usize>,
    dmin: Option<usize>,
    q: f64,
    trials: u32,
    seed: u64,
) -> Result<(), RunError> {
    let need = |opt: Option<usize>, name: &str| {
        opt.ok_or_else(|| RunError::Config(format!("--{name} is required for this family")))
    };
    match family {
        "dhw" => {
            let cb = dhw_codebook(need(n, "n")?).map_err(|e| RunError::Config(e.to_string()))?;
            print!("{}", cb.to_text());
        }
        "isifree" => {
            let table = IsiFreeTable::standard_4_2_1();
            let (n, k, l) = (need(n, "n")?, need(k, "k")?, need(l, "l")?);
            if (n, k, l) != (table.block_length, table.message_length, table.level) {
                return Err(RunError::Config(format!(
                    "only the ({}, {}, {}) table is bundled",
                    table.block_length, table.message_length, table.level
                )));
            }
            print!("{}", table.to_text());
        }
        "hamming" => {
            let m = m.ok_or_else(|| RunError::Config("--m is required for hamming".into()))?;
            let n = (1usize << m) - 1;
            let k_bits = n - m as usize;
            let words: Vec<Vec<u8>> = (0..(1usize << k_bits))
                .map(|v| {
                    let bits: Vec<u8> = (0..k_bits).rev().map(|i| ((v >> i) & 1) as u8).collect();
                    hamming_encode(m, &bits).map_err(|e| RunError::Config(e.to_string()))
                })
                .collect::<Result<_, _>>()?;
            let cb = Codebook::new(n, words).map_err(|e| RunError::Runtime(e.to_string()))?;
            print!("{}", cb.to_text());
        }
        "rm84" => {
            let words: Vec<Vec<u8>> = (0..16)
                .map(|v| {
                    let bits: Vec<u8> = (0..4).rev().map(|i| ((v >> i) & 1) as u8).collect();
                    rm84_encode(&bits).map_err(|e| RunError::Runtime(e.to_string()))
                })
                .collect::<Result<_, _>>()?;
            let cb = Codebook::new(8, words).map_err(|e| RunError::Runtime(e.to_string()))?;
            print!("{}", cb.to_text());
        }
        "minenergy" => {
            let found = min_energy_codebook(need(n, "n")?, need(size, "size")?, need(dmin, "dmin")?)
                .map_err(|e| RunError::Config(e.to_string()))?;
            if !found.exhaustive {
                eprintln!("note: greedy upper bound, not a proven optimum");
            }
            print!("{}", found.codebook.to_text());
        }
        "moco" => {
            let cb = moco_search(
                need(n, "n")?,
                need(size, "size")?,
                &TranspositionModel::SlotDelay { q },
                trials,
                seed,
            )
            .map_err(|e| RunError::Config(e.to_string()))?;
            print!("{}", cb.to_text());
        }
        other => {
            return Err(RunError::Config(format!(
                "unknown codebook family '{other}' (expected dhw, isifree, hamming, rm84, minenergy, moco)"
            )))
        }
    }
    Ok(())
}
