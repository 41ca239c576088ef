//! Seeded random instances: Erdős–Rényi and Watts–Strogatz graphs with
//! integer weights in `1..=10`, and nested terminal levels.
//!
//! Every draw uses ChaCha8 seeded from the 64-bit seed, with one stream per
//! concern so that changing one part of a spec leaves the others alone:
//! stream 0 for topology, 1 for weights, 2 for terminals.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{check_stretch, WeightedGraph};
use crate::mlgs::MlgsInstance;

const TOPOLOGY_STREAM: u64 = 0;
const WEIGHT_STREAM: u64 = 1;
const TERMINAL_STREAM: u64 = 2;

/// Connected Erdős–Rényi draws are retried with `seed + 1, seed + 2, ...` this many times.
pub const ER_ATTEMPTS: u64 = 100;

pub const MIN_WEIGHT: u32 = 1;
pub const MAX_WEIGHT: u32 = 10;

fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `(1 + eps) ln n / n`, capped at 1.
pub fn erdos_renyi_probability(n: usize, eps: f64) -> f64 {
    ((1.0 + eps) * (n as f64).ln() / n as f64).min(1.0)
}

fn weighted(n: usize, pairs: BTreeSet<(usize, usize)>, seed: u64) -> Result<WeightedGraph> {
    let mut rng = stream(seed, WEIGHT_STREAM);
    WeightedGraph::new(
        n,
        pairs
            .into_iter()
            .map(|(u, v)| (u, v, rng.random_range(MIN_WEIGHT..=MAX_WEIGHT) as f64)),
    )
}

/// Each vertex pair is an edge with probability [`erdos_renyi_probability`].
/// Disconnected draws are redrawn from the next seed, up to [`ER_ATTEMPTS`] times.
pub fn erdos_renyi(n: usize, eps: f64, seed: u64) -> Result<WeightedGraph> {
    erdos_renyi_with_seed(n, eps, seed).map(|(g, _)| g)
}

/// Like [`erdos_renyi`], also returning the seed of the accepted draw.
pub fn erdos_renyi_with_seed(n: usize, eps: f64, seed: u64) -> Result<(WeightedGraph, u64)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("need eps > 0, got {eps}")));
    }
    let p = erdos_renyi_probability(n, eps);
    for offset in 0..ER_ATTEMPTS {
        let draw_seed = seed.wrapping_add(offset);
        let g = erdos_renyi_draw(n, p, draw_seed)?;
        if g.is_connected() {
            return Ok((g, draw_seed));
        }
    }
    Err(Error::Degenerate(format!(
        "no connected Erdős–Rényi graph with n = {n}, eps = {eps} in {ER_ATTEMPTS} attempts"
    )))
}

/// One draw, connected or not.
pub fn erdos_renyi_draw(n: usize, p: f64, seed: u64) -> Result<WeightedGraph> {
    let mut rng = stream(seed, TOPOLOGY_STREAM);
    let mut pairs = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                pairs.insert((u, v));
            }
        }
    }
    weighted(n, pairs, seed)
}

/// Ring lattice with `k / 2` neighbours on each side, then each lattice edge
/// `(v, v + j)` (scanned by vertex, then offset) has its far end moved with
/// probability `beta` to a uniform vertex that is neither `v` nor already
/// adjacent to it.
pub fn watts_strogatz(n: usize, k: usize, beta: f64, seed: u64) -> Result<WeightedGraph> {
    if k < 2 || !k.is_multiple_of(2) || k >= n {
        return Err(Error::InvalidArgument(format!(
            "need an even k with 2 <= k < n, got k = {k}, n = {n}"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidArgument(format!("need 0 <= beta <= 1, got {beta}")));
    }
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut pairs = BTreeSet::new();
    for v in 0..n {
        for j in 1..=k / 2 {
            pairs.insert(key(v, (v + j) % n));
        }
    }
    let mut rng = stream(seed, TOPOLOGY_STREAM);
    for v in 0..n {
        for j in 1..=k / 2 {
            let far = (v + j) % n;
            if !pairs.contains(&key(v, far)) || rng.random::<f64>() >= beta {
                continue;
            }
            let candidates: Vec<usize> = (0..n)
                .filter(|&w| w != v && !pairs.contains(&key(v, w)))
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let w = candidates[rng.random_range(0..candidates.len())];
            pairs.remove(&key(v, far));
            pairs.insert(key(v, w));
        }
    }
    weighted(n, pairs, seed)
}

/// `floor(n (levels - i + 1) / (levels + 1))` for `i = 1..=levels`.
pub fn terminal_sizes(n: usize, levels: usize) -> Vec<usize> {
    (1..=levels)
        .map(|i| n * (levels - i + 1) / (levels + 1))
        .collect()
}

/// Nested terminal sets: level 1 is a uniform sample of the vertices and
/// each further level a uniform sample of the one below.
pub fn sample_nested_terminals(n: usize, levels: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if levels == 0 {
        return Err(Error::InvalidArgument("at least one level is required".into()));
    }
    let sizes = terminal_sizes(n, levels);
    if sizes[levels - 1] < 2 {
        return Err(Error::Degenerate(format!(
            "level {levels} would get {} terminals out of {n} vertices",
            sizes[levels - 1]
        )));
    }
    let mut rng = stream(seed, TERMINAL_STREAM);
    let mut out: Vec<Vec<usize>> = Vec::with_capacity(levels);
    let mut pool: Vec<usize> = (0..n).collect();
    for size in sizes {
        let mut picked: Vec<usize> = index::sample(&mut rng, pool.len(), size)
            .into_iter()
            .map(|i| pool[i])
            .collect();
        picked.sort_unstable();
        pool = picked.clone();
        out.push(picked);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    ErdosRenyi { eps: f64 },
    WattsStrogatz { k: usize, beta: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::ErdosRenyi { .. } => "erdos_renyi",
            Family::WattsStrogatz { .. } => "watts_strogatz",
        }
    }

    /// Accepts `erdos_renyi`/`er` and `watts_strogatz`/`ws`.
    pub fn from_name(name: &str, eps: f64, k: usize, beta: f64) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "erdos_renyi" | "er" => Ok(Family::ErdosRenyi { eps }),
            "watts_strogatz" | "ws" => Ok(Family::WattsStrogatz { k, beta }),
            other => Err(Error::InvalidArgument(format!("unknown graph family '{other}'"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::ErdosRenyi { eps } => write!(f, "erdos_renyi eps={eps}"),
            Family::WattsStrogatz { k, beta } => write!(f, "watts_strogatz k={k} beta={beta}"),
        }
    }
}

/// Everything needed to regenerate one random instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub levels: usize,
    pub stretch: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!("need n >= 2, got {}", self.n)));
        }
        if self.levels == 0 {
            return Err(Error::InvalidArgument("at least one level is required".into()));
        }
        check_stretch(self.stretch)
    }

    pub fn graph(&self) -> Result<WeightedGraph> {
        match self.family {
            Family::ErdosRenyi { eps } => erdos_renyi(self.n, eps, self.seed),
            Family::WattsStrogatz { k, beta } => watts_strogatz(self.n, k, beta, self.seed),
        }
    }

    pub fn generate(&self) -> Result<MlgsInstance> {
        self.validate()?;
        let graph = self.graph()?;
        let terminals = sample_nested_terminals(self.n, self.levels, self.seed)?;
        MlgsInstance::new(graph, terminals, self.stretch)
    }

    /// Comment lines recording the spec, for the instance file header.
    pub fn header(&self) -> Vec<String> {
        vec![format!(
            "generator {} n={} levels={} stretch={} seed={}",
            self.family, self.n, self.levels, self.stretch, self.seed
        )]
    }
}
