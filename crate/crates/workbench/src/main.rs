use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spg_core::graph::{parse_edge_list, write_edge_list};
use spg_core::{
    partition, solve_constants, verify_certificate, Certificate, Constants, Graph, Mode,
    PartitionOutcome, PracticalConfig, RationalParam,
};
use spg_workbench::bench::{bench_sweep, parse_corpus, write_csv, BenchOptions};
use spg_workbench::generators::{generate, GeneratorSpec};
use spg_workbench::oracle::min_sparse_partition_oracle;
use spg_workbench::{parse_config, Result, WbError};

#[derive(Parser)]
#[command(name = "spg", version, about = "Sparse partitions of clique-free graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph from a named family.
    Generate {
        #[arg(long)]
        family: String,
        /// Family parameters as key=value.
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Partition a graph into eps-sparse parts and write a certificate.
    Partition {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        eps: RationalParam,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value = "practical")]
        mode: Mode,
        /// TOML file of practical-mode settings.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a certificate against a graph.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        cert: PathBuf,
    },
    /// Exact minimum number of eps-sparse parts (n <= 10).
    Oracle {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        eps: RationalParam,
        /// Allow up to 12 vertices.
        #[arg(long)]
        extended: bool,
    },
    /// Print the exponents a_i, C_r and the grid check.
    Constants {
        #[arg(long)]
        r: usize,
    },
    /// Run a parameter sweep over a corpus file and write CSV.
    Bench {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<RationalParam>,
        /// Clique bound to claim; defaults to each graph's own.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "faithful,practical")]
        modes: Vec<Mode>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Leave wall_ms empty so output is reproducible byte for byte.
        #[arg(long)]
        no_timing: bool,
        /// Add the exact oracle minimum for graphs with n <= 10.
        #[arg(long)]
        oracle: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| WbError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph> {
    Ok(parse_edge_list(&read(path)?)?)
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(p) => fs::write(p, bytes)?,
        None => io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn load_config(path: Option<&Path>) -> Result<PracticalConfig> {
    match path {
        Some(p) => parse_config(&read(p)?),
        None => Ok(PracticalConfig::default()),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate {
            family,
            params,
            seed,
            output,
        } => {
            let mut map = BTreeMap::new();
            for p in &params {
                let (k, v) = p
                    .split_once('=')
                    .ok_or_else(|| WbError::Usage(format!("expected key=value, got {p:?}")))?;
                map.insert(k.to_string(), v.to_string());
            }
            let spec = GeneratorSpec::from_params(&family, &map, seed)?;
            let generated = generate(&spec)?;
            let text = format!("# {spec} r={}\n{}", generated.r, write_edge_list(&generated.graph));
            emit(output.as_deref(), text.as_bytes())?;
        }
        Command::Partition {
            input,
            eps,
            r,
            mode,
            config,
            seed,
            output,
        } => {
            let g = read_graph(&input)?;
            let config = load_config(config.as_deref())?;
            match partition(&g, &eps, r, mode, &config, seed)? {
                PartitionOutcome::Certified(cert) => {
                    emit(output.as_deref(), cert.to_json().as_bytes())?;
                    eprintln!("{} parts", cert.part_count);
                }
                PartitionOutcome::NotCliqueFree(witness) => {
                    eprintln!("graph contains K_{}: {witness:?}", r + 1);
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Verify { input, cert } => {
            let g = read_graph(&input)?;
            let cert = Certificate::from_json(&read(&cert)?)?;
            match verify_certificate(&g, &cert) {
                Ok(()) => println!("accepted: {} parts", cert.part_count),
                Err(rej) => {
                    println!("rejected: {rej}");
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Oracle {
            input,
            eps,
            extended,
        } => {
            let g = read_graph(&input)?;
            let out = min_sparse_partition_oracle(&g, &eps, extended)?;
            println!("min_parts {}", out.min_parts);
            for block in &out.witness {
                let ids: Vec<String> = block.iter().map(|v| v.to_string()).collect();
                println!("{}", ids.join(" "));
            }
        }
        Command::Constants { r } => {
            let c: Constants = solve_constants(r)?;
            println!("r = {}", c.r);
            for (i, a) in c.a.iter().enumerate() {
                println!("a_{i} = {a}");
            }
            println!("C_r = {}", c.c_r);
            println!("gaps a_i - a_(i+1) - 26r = {:?}", c.gaps());
            println!("{:>10}  {:>14}  recurrence margins (log2)", "x", "bound margin");
            for check in &c.grid {
                let margins: Vec<String> =
                    check.recurrence_margins.iter().map(|m| format!("{m:.3}")).collect();
                println!("{:>10}  {:>14.3}  {}", check.x, check.bound_margin, margins.join(" "));
            }
        }
        Command::Bench {
            corpus,
            eps,
            r,
            modes,
            seeds,
            config,
            no_timing,
            oracle,
            output,
        } => {
            let corpus = parse_corpus(&read(&corpus)?)?;
            let opts = BenchOptions {
                eps,
                r,
                modes,
                seeds,
                config: load_config(config.as_deref())?,
                oracle,
                record_timing: !no_timing,
            };
            let rows = bench_sweep(&corpus, &opts);
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            emit(output.as_deref(), &buf)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // clap's own usage exit code is 2, which is reserved here for invariant failures
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
