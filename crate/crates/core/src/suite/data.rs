use std::collections::HashMap;
use std::sync::Arc;

use crate::discrete_walk::{centered_marginal, lattice_spacing, WatermelonPath, WatermelonSampler};
use crate::error::{invalid, Result};
use crate::rng::{named_seed, replica_seed, rng_from_seed};
use crate::sde_sim::{simulate_batch, BatchOutcome, SdeConfig};
use crate::stats::{dequantize, MarginalCdf};

/// Times at which shared data sets record the state.
pub const STANDARD_TIMES: [f64; 3] = [0.25, 0.5, 0.75];

pub(crate) fn time_index(t: f64) -> Result<usize> {
    STANDARD_TIMES
        .iter()
        .position(|&s| s == t)
        .map_or_else(|| invalid(format!("t = {t} is not one of the recorded times {STANDARD_TIMES:?}")), Ok)
}

/// Centered discrete marginals at [`STANDARD_TIMES`].
#[derive(Clone, Debug)]
pub struct DiscreteData {
    pub p: usize,
    pub n: u64,
    pub wall: bool,
    pub seed: u64,
    /// `values[k][r]`: replica `r` at `STANDARD_TIMES[k]`.
    pub values: Vec<Vec<Vec<f64>>>,
    /// Same with each coordinate spread uniformly over its lattice cell.
    pub spread: Vec<Vec<Vec<f64>>>,
}

impl DiscreteData {
    pub fn generate(p: usize, n: u64, wall: bool, samples: usize, seed: u64) -> Result<Self> {
        let sampler = WatermelonSampler::new(p, n, wall)?;
        let per_replica = sampler.sample_map(seed, samples, |path| {
            STANDARD_TIMES.iter().map(|&t| centered_marginal(&path, t)).collect::<Vec<_>>()
        });
        Ok(Self::assemble(p, n, wall, seed, per_replica))
    }

    pub fn from_paths(paths: &[WatermelonPath], seed: u64) -> Result<Self> {
        let first = paths.first().map_or_else(|| invalid("no paths"), Ok)?;
        let per_replica = paths
            .iter()
            .map(|path| STANDARD_TIMES.iter().map(|&t| centered_marginal(path, t)).collect())
            .collect();
        Ok(Self::assemble(first.p(), first.n(), first.wall(), seed, per_replica))
    }

    fn assemble(p: usize, n: u64, wall: bool, seed: u64, per_replica: Vec<Vec<Vec<f64>>>) -> Self {
        let mut values = vec![Vec::with_capacity(per_replica.len()); STANDARD_TIMES.len()];
        for replica in per_replica {
            for (k, x) in replica.into_iter().enumerate() {
                values[k].push(x);
            }
        }
        let mut rng = rng_from_seed(replica_seed(seed, u64::MAX));
        let width = lattice_spacing(n);
        let spread = values
            .iter()
            .map(|at_time| {
                at_time
                    .iter()
                    .map(|x| {
                        let mut y = x.clone();
                        dequantize(&mut y, width, &mut rng);
                        y
                    })
                    .collect()
            })
            .collect();
        Self { p, n, wall, seed, values, spread }
    }

    pub fn len(&self) -> usize {
        self.values[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// SDE states at [`STANDARD_TIMES`].
#[derive(Clone, Debug)]
pub struct SdeData {
    pub batch: BatchOutcome<f64>,
}

impl SdeData {
    pub fn generate(config: &SdeConfig<f64>, samples: usize) -> Result<Self> {
        Ok(Self { batch: simulate_batch(config, samples, &STANDARD_TIMES)? })
    }

    pub fn seed(&self) -> u64 {
        self.batch.config.seed
    }

    pub fn len(&self) -> usize {
        self.batch.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `values[r]` at `STANDARD_TIMES[k]`.
    pub fn at(&self, k: usize) -> Vec<Vec<f64>> {
        self.batch.values.iter().map(|v| v[k].clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Discrete { p: usize, n: u64, wall: bool, samples: usize },
    Sde { p: usize, wall: bool, t0: u64, dt: u64, floor: u64, samples: usize },
    Cdf { p: usize, wall: bool, t: u64, branch: usize },
}

/// Lazily generated, shared data sets.
pub(crate) struct DataCache {
    base_seed: u64,
    discrete: HashMap<Key, Arc<DiscreteData>>,
    sde: HashMap<Key, Arc<SdeData>>,
    cdfs: HashMap<Key, Arc<MarginalCdf>>,
}

impl DataCache {
    pub fn new(base_seed: u64) -> Self {
        Self { base_seed, discrete: HashMap::new(), sde: HashMap::new(), cdfs: HashMap::new() }
    }

    pub fn seed_for(&self, name: &str) -> u64 {
        named_seed(self.base_seed, name)
    }

    pub fn discrete(&mut self, p: usize, n: u64, wall: bool, samples: usize) -> Result<Arc<DiscreteData>> {
        let key = Key::Discrete { p, n, wall, samples };
        if let Some(d) = self.discrete.get(&key) {
            return Ok(d.clone());
        }
        let seed = self.seed_for(&format!("discrete/p{p}/n{n}/{}", wall_tag(wall)));
        let data = Arc::new(DiscreteData::generate(p, n, wall, samples, seed)?);
        self.discrete.insert(key, data.clone());
        Ok(data)
    }

    pub fn sde(&mut self, p: usize, wall: bool, t0: f64, dt: f64, floor: f64, samples: usize) -> Result<Arc<SdeData>> {
        let key = Key::Sde { p, wall, t0: t0.to_bits(), dt: dt.to_bits(), floor: floor.to_bits(), samples };
        if let Some(d) = self.sde.get(&key) {
            return Ok(d.clone());
        }
        let seed = self.seed_for(&format!("sde/p{p}/{}", wall_tag(wall)));
        let config = SdeConfig { t0, dt, gap_floor: floor, ..SdeConfig::new(p, wall, seed) };
        let data = Arc::new(SdeData::generate(&config, samples)?);
        self.sde.insert(key, data.clone());
        Ok(data)
    }

    pub fn marginal_cdf(&mut self, p: usize, wall: bool, t: f64, branch: usize) -> Result<Arc<MarginalCdf>> {
        let key = Key::Cdf { p, wall, t: t.to_bits(), branch };
        if let Some(c) = self.cdfs.get(&key) {
            return Ok(c.clone());
        }
        let cdf = Arc::new(MarginalCdf::new(p, wall, t, branch)?);
        self.cdfs.insert(key, cdf.clone());
        Ok(cdf)
    }
}

pub(crate) fn wall_tag(wall: bool) -> &'static str {
    if wall {
        "wall"
    } else {
        "nowall"
    }
}
