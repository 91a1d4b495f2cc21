//! Graph families with a known bound on the clique number.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spg_core::graph::{find_clique_in, Adjacency};
use spg_core::{Graph, VertexId, VertexSet};

use crate::error::{Result, WbError};

/// Above this size the clique bound is checked on sampled neighbourhoods.
pub const EXHAUSTIVE_CHECK_MAX: usize = 2000;

/// Neighbourhoods sampled when the graph is too large for a full search.
const SAMPLED_NEIGHBOURHOODS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Iterated Mycielski construction starting from `K_2`.
    Mycielski { iterations: u32 },
    /// `k`-subsets of `[n]`, adjacent when disjoint.
    Kneser { n: usize, k: usize },
    /// Complete multipartite graph with the given part sizes.
    MultipartiteBlowup { parts: Vec<usize> },
    /// `C_5` with vertex `i` replaced by an independent set of `sizes[i]`.
    C5Blowup { sizes: [usize; 5] },
    /// `G(n, p)` with edges deleted until no `K_{r+1}` remains.
    RandomKfree { n: usize, p: f64, r: usize },
    /// Random bipartite graph between `left` and `right` vertices.
    RandomBipartite { left: usize, right: usize, p: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    /// The graph has no `K_{r+1}`.
    pub r: usize,
}

fn usize_list(s: &str) -> Option<Vec<usize>> {
    s.split(',').map(|x| x.trim().parse().ok()).collect()
}

impl GeneratorSpec {
    /// Builds a spec from a family name and `key=value` parameters.
    pub fn from_params(family: &str, params: &BTreeMap<String, String>, seed: u64) -> Result<Self> {
        let get = |key: &str| {
            params
                .get(key)
                .ok_or_else(|| WbError::Usage(format!("{family}: missing parameter '{key}'")))
        };
        let num = |key: &str| -> Result<usize> {
            get(key)?
                .parse()
                .map_err(|_| WbError::Usage(format!("{family}: '{key}' must be an integer")))
        };
        let prob = |key: &str| -> Result<f64> {
            let p: f64 = get(key)?
                .parse()
                .map_err(|_| WbError::Usage(format!("{family}: '{key}' must be a number")))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(WbError::Usage(format!("{family}: '{key}' = {p} not in [0, 1]")));
            }
            Ok(p)
        };
        let list = |key: &str| -> Result<Vec<usize>> {
            usize_list(get(key)?)
                .ok_or_else(|| WbError::Usage(format!("{family}: '{key}' must be a comma list")))
        };
        let known: &[&str] = match family {
            "mycielski" => &["iterations"],
            "kneser" => &["n", "k"],
            "multipartite_blowup" => &["parts"],
            "c5_blowup" => &["sizes"],
            "random_kfree" => &["n", "p", "r"],
            "random_bipartite" => &["left", "right", "p"],
            _ => return Err(WbError::Usage(format!("unknown family {family:?}"))),
        };
        if let Some(k) = params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(WbError::Usage(format!("{family}: unknown parameter '{k}'")));
        }
        let family = match family {
            "mycielski" => Family::Mycielski {
                iterations: num("iterations")? as u32,
            },
            "kneser" => Family::Kneser {
                n: num("n")?,
                k: num("k")?,
            },
            "multipartite_blowup" => Family::MultipartiteBlowup {
                parts: list("parts")?,
            },
            "c5_blowup" => {
                let sizes = list("sizes")?;
                let sizes: [usize; 5] = sizes
                    .try_into()
                    .map_err(|_| WbError::Usage("c5_blowup: 'sizes' needs 5 entries".into()))?;
                Family::C5Blowup { sizes }
            }
            "random_kfree" => Family::RandomKfree {
                n: num("n")?,
                p: prob("p")?,
                r: num("r")?,
            },
            _ => Family::RandomBipartite {
                left: num("left")?,
                right: num("right")?,
                p: prob("p")?,
            },
        };
        let spec = Self { family, seed };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(WbError::Usage(msg));
        match &self.family {
            Family::Mycielski { iterations } if *iterations > 8 => {
                bad(format!("mycielski: iterations = {iterations} above 8"))
            }
            Family::Kneser { n, k } if *n > 16 || *k == 0 || k > n => {
                bad(format!("kneser: need 1 <= k <= n <= 16, got n = {n}, k = {k}"))
            }
            Family::MultipartiteBlowup { parts } if parts.len() < 2 => {
                bad("multipartite_blowup: need at least 2 parts".into())
            }
            Family::RandomKfree { r, .. } if *r < 2 => bad("random_kfree: need r >= 2".into()),
            _ => Ok(()),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Mycielski { .. } => "mycielski",
            Family::Kneser { .. } => "kneser",
            Family::MultipartiteBlowup { .. } => "multipartite_blowup",
            Family::C5Blowup { .. } => "c5_blowup",
            Family::RandomKfree { .. } => "random_kfree",
            Family::RandomBipartite { .. } => "random_bipartite",
        }
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// `family key=value ... seed=S`, the same form [`FromStr`] reads.
impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family_name())?;
        match &self.family {
            Family::Mycielski { iterations } => write!(f, " iterations={iterations}")?,
            Family::Kneser { n, k } => write!(f, " n={n} k={k}")?,
            Family::MultipartiteBlowup { parts } => write!(f, " parts={}", join(parts))?,
            Family::C5Blowup { sizes } => write!(f, " sizes={}", join(sizes))?,
            Family::RandomKfree { n, p, r } => write!(f, " n={n} p={p} r={r}")?,
            Family::RandomBipartite { left, right, p } => {
                write!(f, " left={left} right={right} p={p}")?
            }
        }
        write!(f, " seed={}", self.seed)
    }
}

impl FromStr for GeneratorSpec {
    type Err = WbError;

    fn from_str(s: &str) -> Result<Self> {
        let mut words = s.split_whitespace();
        let family = words
            .next()
            .ok_or_else(|| WbError::Usage("empty generator spec".into()))?;
        let mut params = BTreeMap::new();
        let mut seed = 0;
        for w in words {
            let (k, v) = w
                .split_once('=')
                .ok_or_else(|| WbError::Usage(format!("expected key=value, got {w:?}")))?;
            if k == "seed" {
                seed = v
                    .parse()
                    .map_err(|_| WbError::Usage(format!("bad seed {v:?}")))?;
            } else {
                params.insert(k.to_string(), v.to_string());
            }
        }
        Self::from_params(family, &params, seed)
    }
}

/// Builds the graph and checks its advertised clique bound.
pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (graph, r) = match &spec.family {
        Family::Mycielski { iterations } => (mycielski(*iterations)?, 2),
        Family::Kneser { n, k } => (kneser(*n, *k)?, (n / k).max(1)),
        Family::MultipartiteBlowup { parts } => (multipartite(parts)?, parts.len()),
        Family::C5Blowup { sizes } => (c5_blowup(sizes)?, 2),
        Family::RandomKfree { n, p, r } => (random_kfree(*n, *p, *r, &mut rng)?, *r),
        Family::RandomBipartite { left, right, p } => {
            (random_bipartite(*left, *right, *p, &mut rng)?, 2)
        }
    };
    if let Some(clique) = clique_bound_violation(&graph, r, &mut rng) {
        return Err(WbError::Core(spg_core::Error::Invariant(format!(
            "{spec} produced a K_{} at {clique:?}",
            r + 1
        ))));
    }
    Ok(Generated { graph, r })
}

/// A `K_{r+1}` in `g`, searched exhaustively up to [`EXHAUSTIVE_CHECK_MAX`]
/// vertices and in sampled neighbourhoods above.
pub fn clique_bound_violation<R: Rng>(g: &Graph, r: usize, rng: &mut R) -> Option<Vec<VertexId>> {
    if g.n() <= EXHAUSTIVE_CHECK_MAX {
        return g.find_clique(r + 1, &g.vertices());
    }
    let mut order: Vec<VertexId> = (0..g.n()).collect();
    order.shuffle(rng);
    order.into_iter().take(SAMPLED_NEIGHBOURHOODS).find_map(|v| {
        let nbhd = VertexSet::from_ids(g.n(), g.neighbors(v).iter().map(|&u| u as usize));
        g.find_clique(r, &nbhd).map(|mut c| {
            c.push(v);
            c.sort_unstable();
            c
        })
    })
}

fn mycielski(iterations: u32) -> Result<Graph> {
    let mut n = 2;
    let mut edges = vec![(0, 1)];
    for _ in 0..iterations {
        // v_i = i, u_i = n + i, w = 2n
        let mut next = edges.clone();
        for &(a, b) in &edges {
            next.push((a, n + b));
            next.push((b, n + a));
        }
        next.extend((0..n).map(|i| (n + i, 2 * n)));
        edges = next;
        n = 2 * n + 1;
    }
    Ok(Graph::from_edge_list(n, &edges)?)
}

fn kneser(n: usize, k: usize) -> Result<Graph> {
    let subsets: Vec<u32> = (0u32..1 << n).filter(|s| s.count_ones() as usize == k).collect();
    let mut edges = Vec::new();
    for (i, &s) in subsets.iter().enumerate() {
        for (j, &t) in subsets.iter().enumerate().skip(i + 1) {
            if s & t == 0 {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_edge_list(subsets.len(), &edges)?)
}

fn multipartite(parts: &[usize]) -> Result<Graph> {
    let mut label = Vec::new();
    for (p, &size) in parts.iter().enumerate() {
        label.extend(std::iter::repeat_n(p, size));
    }
    let n = label.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if label[u] != label[v] {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edge_list(n, &edges)?)
}

fn c5_blowup(sizes: &[usize; 5]) -> Result<Graph> {
    let mut start = [0; 6];
    for i in 0..5 {
        start[i + 1] = start[i] + sizes[i];
    }
    let mut edges = Vec::new();
    for i in 0..5 {
        let j = (i + 1) % 5;
        for u in start[i]..start[i + 1] {
            for v in start[j]..start[j + 1] {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edge_list(start[5], &edges)?)
}

fn random_bipartite<R: Rng>(left: usize, right: usize, p: f64, rng: &mut R) -> Result<Graph> {
    let mut edges = Vec::new();
    for u in 0..left {
        for v in 0..right {
            if rng.gen_bool(p) {
                edges.push((u, left + v));
            }
        }
    }
    Ok(Graph::from_edge_list(left + right, &edges)?)
}

/// Bitset adjacency that supports edge deletion.
struct MutableAdjacency {
    rows: Vec<VertexSet>,
    degree: Vec<usize>,
}

impl MutableAdjacency {
    fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        self.rows[u].remove(v);
        self.rows[v].remove(u);
        self.degree[u] -= 1;
        self.degree[v] -= 1;
    }
}

impl Adjacency for MutableAdjacency {
    fn universe(&self) -> usize {
        self.rows.len()
    }

    fn row(&self, v: VertexId) -> Cow<'_, VertexSet> {
        Cow::Borrowed(&self.rows[v])
    }
}

fn random_kfree<R: Rng>(n: usize, p: f64, r: usize, rng: &mut R) -> Result<Graph> {
    if n > EXHAUSTIVE_CHECK_MAX * 5 {
        return Err(WbError::Usage(format!("random_kfree: n = {n} above 10000")));
    }
    let mut adj = MutableAdjacency {
        rows: vec![VertexSet::new(n); n],
        degree: vec![0; n],
    };
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                adj.rows[u].insert(v);
                adj.rows[v].insert(u);
                adj.degree[u] += 1;
                adj.degree[v] += 1;
            }
        }
    }
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(rng);
    for v in order {
        // every K_{r+1} through v is an r-clique in N(v)
        while let Some(mut clique) = find_clique_in(&adj, r, &adj.rows[v].clone()) {
            clique.push(v);
            clique.sort_unstable();
            let mut best = (0, 0);
            let mut best_score = None;
            for (i, &a) in clique.iter().enumerate() {
                for &b in &clique[i + 1..] {
                    let score = adj.degree[a] + adj.degree[b];
                    if best_score.is_none_or(|s| score > s) {
                        best_score = Some(score);
                        best = (a, b);
                    }
                }
            }
            adj.remove_edge(best.0, best.1);
        }
    }
    let edges: Vec<(VertexId, VertexId)> = (0..n)
        .flat_map(|u| adj.rows[u].above(u).iter().map(move |v| (u, v)).collect::<Vec<_>>())
        .collect();
    Ok(Graph::from_edge_list(n, &edges)?)
}
