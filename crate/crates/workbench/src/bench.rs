//! Parameter sweeps over a graph corpus, one CSV row per run.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use spg_core::partitioner::{partition, verify_certificate, Mode, PartitionOutcome, PracticalConfig};
use spg_core::RationalParam;

use crate::error::{Result, WbError};
use crate::generators::{generate, GeneratorSpec};
use crate::oracle::{min_sparse_partition_oracle, ORACLE_MAX};

pub const CSV_VERSION: &str = "spg-bench/1";

pub const CSV_COLUMNS: [&str; 14] = [
    "version",
    "graph",
    "n",
    "m",
    "eps",
    "r",
    "mode",
    "seed",
    "status",
    "part_count",
    "bound_log2",
    "escalations",
    "oracle_min",
    "wall_ms",
];

/// Reads a corpus file: one generator spec per line, `#` comments allowed.
pub fn parse_corpus(text: &str) -> Result<Vec<GeneratorSpec>> {
    text.lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            l.parse()
                .map_err(|e| WbError::Usage(format!("corpus line {}: {e}", i + 1)))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub eps: Vec<RationalParam>,
    /// Clique bound to claim; `None` uses each graph's own.
    pub r: Option<usize>,
    pub modes: Vec<Mode>,
    pub seeds: Vec<u64>,
    pub config: PracticalConfig,
    /// Compare against the exhaustive oracle on graphs with `n <= 10`.
    pub oracle: bool,
    /// Fill `wall_ms`; off gives byte-identical output across runs.
    pub record_timing: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            eps: Vec::new(),
            r: None,
            modes: vec![Mode::Faithful, Mode::Practical],
            seeds: vec![0],
            config: PracticalConfig::default(),
            oracle: false,
            record_timing: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub version: &'static str,
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub eps: String,
    pub r: usize,
    pub mode: String,
    pub seed: u64,
    /// `ok`, `rejected: ...`, `not_clique_free`, or `error: ...`.
    pub status: String,
    pub part_count: Option<usize>,
    pub bound_log2: Option<f64>,
    pub escalations: Option<usize>,
    pub oracle_min: Option<usize>,
    pub wall_ms: Option<u64>,
}

struct Job<'a> {
    spec: &'a GeneratorSpec,
    eps: RationalParam,
    mode: Mode,
    seed: u64,
}

/// Runs every `(graph, eps, mode, seed)` combination; rows come back in that
/// nesting order whatever order the runs finish in.
pub fn bench_sweep(corpus: &[GeneratorSpec], opts: &BenchOptions) -> Vec<BenchRow> {
    let graphs: Vec<_> = corpus.par_iter().map(generate).collect();
    let mut jobs = Vec::new();
    for spec in corpus {
        for &eps in &opts.eps {
            for &mode in &opts.modes {
                for &seed in &opts.seeds {
                    jobs.push(Job {
                        spec,
                        eps,
                        mode,
                        seed,
                    });
                }
            }
        }
    }
    let per_graph = opts.eps.len() * opts.modes.len() * opts.seeds.len();
    jobs.par_iter()
        .enumerate()
        .map(|(i, job)| run_one(job, &graphs[i / per_graph], opts))
        .collect()
}

fn run_one(
    job: &Job<'_>,
    generated: &Result<crate::generators::Generated>,
    opts: &BenchOptions,
) -> BenchRow {
    let mut row = BenchRow {
        version: CSV_VERSION,
        graph: job.spec.to_string(),
        n: 0,
        m: 0,
        eps: job.eps.to_string(),
        r: opts.r.unwrap_or(0),
        mode: job.mode.to_string(),
        seed: job.seed,
        status: String::new(),
        part_count: None,
        bound_log2: None,
        escalations: None,
        oracle_min: None,
        wall_ms: None,
    };
    let generated = match generated {
        Ok(g) => g,
        Err(e) => {
            row.status = format!("error: {e}");
            return row;
        }
    };
    let g = &generated.graph;
    let r = opts.r.unwrap_or(generated.r.max(2));
    row.r = r;
    row.n = g.n();
    row.m = g.edge_count();
    let start = Instant::now();
    let outcome = partition(g, &job.eps, r, job.mode, &opts.config, job.seed);
    if opts.record_timing {
        row.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    match outcome {
        Ok(PartitionOutcome::Certified(cert)) => {
            row.status = match verify_certificate(g, &cert) {
                Ok(()) => "ok".into(),
                Err(rej) => format!("rejected: {rej}"),
            };
            row.part_count = Some(cert.part_count);
            row.bound_log2 = Some(cert.bound_value_log2);
            row.escalations = Some(cert.escalations());
        }
        Ok(PartitionOutcome::NotCliqueFree(_)) => row.status = "not_clique_free".into(),
        Err(e) => row.status = format!("error: {e}"),
    }
    if opts.oracle && g.n() <= ORACLE_MAX {
        match min_sparse_partition_oracle(g, &job.eps, false) {
            Ok(o) => row.oracle_min = Some(o.min_parts),
            Err(e) => row.status = format!("error: oracle: {e}"),
        }
    }
    row
}

/// Writes the header and rows; an empty sweep gives a header-only file.
pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> RationalParam {
        s.parse().unwrap()
    }

    fn csv_text(rows: &[BenchRow]) -> String {
        let mut buf = Vec::new();
        write_csv(rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn petersen_row() {
        let corpus = parse_corpus("# petersen\nkneser n=5 k=2\n").unwrap();
        let opts = BenchOptions {
            eps: vec![q("3/10")],
            modes: vec![Mode::Faithful],
            oracle: true,
            record_timing: false,
            ..BenchOptions::default()
        };
        let rows = bench_sweep(&corpus, &opts);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].status, "ok");
        assert_eq!(rows[0].part_count, Some(1));
        assert_eq!(rows[0].oracle_min, Some(1));
        let text = csv_text(&rows);
        assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
        assert!(text.lines().nth(1).unwrap().starts_with("spg-bench/1,kneser n=5 k=2 seed=0,10,15,3/10,2,faithful,0,ok,1,"));
    }

    #[test]
    fn empty_corpus_is_header_only() {
        let rows = bench_sweep(&[], &BenchOptions::default());
        assert!(rows.is_empty());
        assert_eq!(csv_text(&rows), format!("{}\n", CSV_COLUMNS.join(",")));
    }

    #[test]
    fn failures_become_rows() {
        // K_3 claimed triangle-free
        let corpus = parse_corpus("multipartite_blowup parts=1,1,1").unwrap();
        let opts = BenchOptions {
            eps: vec![q("1/4"), q("3/4")],
            r: Some(2),
            modes: vec![Mode::Practical],
            record_timing: false,
            ..BenchOptions::default()
        };
        let rows = bench_sweep(&corpus, &opts);
        assert_eq!(rows[0].status, "not_clique_free");
        assert!(rows[1].status.starts_with("error: parameter error"));
    }

    #[test]
    fn rows_keep_input_order() {
        let corpus = parse_corpus("kneser n=5 k=2\nmycielski iterations=2\nc5_blowup sizes=2,2,2,2,2").unwrap();
        let opts = BenchOptions {
            eps: vec![q("1/2"), q("1/4")],
            seeds: vec![1, 2],
            record_timing: false,
            ..BenchOptions::default()
        };
        let rows = bench_sweep(&corpus, &opts);
        assert_eq!(rows.len(), 3 * 2 * 2 * 2);
        assert!(rows[..8].iter().all(|r| r.graph.starts_with("kneser")));
        assert_eq!((rows[1].mode.as_str(), rows[1].seed), ("faithful", 2));
        assert_eq!(rows[2].mode, "practical");
        assert_eq!(rows[4].eps, "1/4");
        assert_eq!(csv_text(&rows), csv_text(&bench_sweep(&corpus, &opts)));
    }

    #[test]
    fn corpus_errors_name_the_line() {
        let err = parse_corpus("kneser n=5 k=2\n\nbogus x=1").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }
}
