use std::collections::HashMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use super::data::{time_index, wall_tag, DataCache, DiscreteData, STANDARD_TIMES};
use super::{CheckRecord, CheckSpec};
use crate::discrete_walk::{enumerate_watermelons, WatermelonSampler};
use crate::error::{invalid, Result};
use crate::exact_count::{
    max_relative_error, start_heights, star_count_or_zero, step_distribution, visit_families, RatioGrid,
};
use crate::moments::{
    moment_nowall_p2, moment_wall_p2, normalized_moment, reference_table, sym_nowall_expectation,
    sym_wall_expectation,
};
use crate::rng::{replica_seed, rng_from_seed};
use crate::spectral_laws::{
    density, nowall_scale, sample_gue_spectrum, sample_wall_spectrum, wall_scale, DensityParams,
};
use crate::stats::{
    chi_square_uniform, gamma_cdf, integrate, ks_c_alpha, ks_statistic, ks_two_sample,
    ks_two_sample_critical, mean_se, norm_dimension, norm_sq_law, normal_cdf, MarginalCdf,
};

const WALLS: [bool; 2] = [true, false];

fn params<T: DeserializeOwned>(spec: &CheckSpec) -> Result<T> {
    serde_json::from_value(spec.params.clone())
        .map_err(|e| crate::Error::Invalid(format!("bad params for {}: {e}", spec.check)))
}

pub(crate) fn run_check(spec: &CheckSpec, cache: &mut DataCache) -> Result<Vec<CheckRecord>> {
    match spec.check.as_str() {
        "exact_count_sweep" => exact_count_sweep(params(spec)?, spec.tolerance.unwrap_or(0.0)),
        "transition_normalization" => {
            transition_normalization(params(spec)?, spec.tolerance.unwrap_or(0.0), cache.seed_for(&spec.check))
        }
        "sampler_uniformity" => {
            sampler_uniformity(params(spec)?, spec.tolerance.unwrap_or(0.01), cache.seed_for(&spec.check))
        }
        "spectral_marginal_ks" => spectral_marginal_ks(params(spec)?, spec.tolerance.unwrap_or(0.05), cache),
        "marginal_ks" => marginal_ks(params(spec)?, spec.tolerance.unwrap_or(0.05), cache),
        "gamma_oracle" => gamma_oracle(params(spec)?, spec.tolerance.unwrap_or(1e-6)),
        "norm_law" => norm_law(params(spec)?, spec.tolerance.unwrap_or(0.05), cache),
        "moment_table" => moment_table(spec.tolerance.unwrap_or(1e-12)),
        "moment_mc" => moment_mc(params(spec)?, spec.tolerance.unwrap_or(3.0), cache),
        "symmetric_mc" => symmetric_mc(params(spec)?, spec.tolerance.unwrap_or(3.0), cache),
        "sde_invariants" => sde_invariants(params(spec)?, spec.tolerance.unwrap_or(0.0), cache),
        "step_halving" => step_halving(params(spec)?, spec.tolerance.unwrap_or(3.0), cache),
        "time_symmetry" => time_symmetry(params(spec)?, spec.tolerance.unwrap_or(0.05), cache),
        "stirling_ratio" => stirling_ratio(params(spec)?, spec.tolerance.unwrap_or(5.0)),
        "ks_self_test" => ks_self_test(params(spec)?, spec.tolerance.unwrap_or(0.02), cache.seed_for(&spec.check)),
        other => invalid(format!("unknown check {other:?}")),
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Source {
    Discrete,
    Sde,
}

impl Source {
    fn tag(self) -> &'static str {
        match self {
            Source::Discrete => "discrete",
            Source::Sde => "sde",
        }
    }
}

/// Sampling parameters shared by the Monte Carlo checks.
#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct McParams {
    source: Source,
    p: Option<Vec<usize>>,
    t: f64,
    times: Vec<f64>,
    n: u64,
    samples: usize,
    dt: f64,
    t0: f64,
    gap_floor: f64,
    max_order: u32,
}

impl Default for McParams {
    fn default() -> Self {
        Self {
            source: Source::Discrete,
            p: None,
            t: 0.5,
            times: STANDARD_TIMES.to_vec(),
            n: 2048,
            samples: 10_000,
            dt: 1e-4,
            t0: 0.02,
            gap_floor: 1e-3,
            max_order: 4,
        }
    }
}

impl McParams {
    fn ps(&self, default: &[usize]) -> Vec<usize> {
        self.p.clone().unwrap_or_else(|| default.to_vec())
    }
}

/// Sample points per replica at `STANDARD_TIMES[k]`, plus the seed used.
fn draws(cache: &mut DataCache, mc: &McParams, source: Source, p: usize, wall: bool, k: usize, spread: bool) -> Result<(Vec<Vec<f64>>, u64)> {
    match source {
        Source::Discrete => {
            let d = cache.discrete(p, mc.n, wall, mc.samples)?;
            let v = if spread { d.spread[k].clone() } else { d.values[k].clone() };
            Ok((v, d.seed))
        }
        Source::Sde => {
            let d = cache.sde(p, wall, mc.t0, mc.dt, mc.gap_floor, mc.samples)?;
            Ok((d.at(k), d.seed()))
        }
    }
}

fn column(points: &[Vec<f64>], i: usize) -> Vec<f64> {
    points.iter().map(|x| x[i]).collect()
}

fn norms(points: &[Vec<f64>]) -> Vec<f64> {
    points.iter().map(|x| x.iter().map(|v| v * v).sum()).collect()
}

fn z_score(mean: f64, se: f64, exact: f64) -> f64 {
    let diff = (mean - exact).abs();
    if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SweepParams {
    p_max: usize,
    m_max: u64,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self { p_max: 3, m_max: 8 }
    }
}

fn admissible_endpoints(p: usize, m: u64, wall: bool) -> Vec<Vec<i64>> {
    fn rec(i: usize, p: usize, m: i64, wall: bool, starts: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == p {
            out.push(cur.clone());
            return;
        }
        let lo = cur.last().map_or(i64::MIN, |&v| v + 1).max(starts[i] - m).max(if wall { 0 } else { i64::MIN });
        let mut e = starts[i] - m;
        while e <= starts[i] + m {
            if e >= lo {
                cur.push(e);
                rec(i + 1, p, m, wall, starts, cur, out);
                cur.pop();
            }
            e += 2;
        }
    }
    let mut out = Vec::new();
    rec(0, p, m as i64, wall, &start_heights(p), &mut Vec::new(), &mut out);
    out
}

fn exact_count_sweep(params: SweepParams, tol: f64) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    for p in 1..=params.p_max {
        for wall in WALLS {
            let mut mismatches = 0u64;
            let mut compared = 0u64;
            for m in 0..=params.m_max {
                let mut tally: HashMap<Vec<i64>, u64> = HashMap::new();
                visit_families(p, m, wall, None, &mut |pos| {
                    *tally.entry(pos[pos.len() - p..].to_vec()).or_default() += 1;
                });
                let candidates = admissible_endpoints(p, m, wall);
                let covered = tally.keys().filter(|e| candidates.contains(e)).count();
                mismatches += (tally.len() - covered) as u64;
                for e in &candidates {
                    let brute = tally.get(e).copied().unwrap_or(0);
                    if star_count_or_zero(p, m, e, wall) != BigUint::from(brute) {
                        mismatches += 1;
                    }
                    compared += 1;
                }
            }
            records.push(CheckRecord::new(
                format!("exact_count_sweep/p{p}/{}", wall_tag(wall)),
                mismatches as f64,
                tol,
                compared,
                0,
            ));
        }
    }
    Ok(records)
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct TransitionParams {
    p: Vec<usize>,
    n: u64,
    samples: usize,
}

impl Default for TransitionParams {
    fn default() -> Self {
        Self { p: vec![1, 2, 3], n: 12, samples: 4 }
    }
}

fn transition_normalization(params: TransitionParams, tol: f64, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    for &p in &params.p {
        for wall in WALLS {
            let sampler = WatermelonSampler::new(p, params.n, wall)?;
            let mut failures = 0u64;
            let mut states = 0u64;
            for r in 0..params.samples {
                let path = sampler.sample(replica_seed(seed, r as u64));
                for k in 0..path.steps() {
                    let dist = step_distribution(p, params.n, k as u64, path.at(k), wall)?;
                    let total: BigUint = dist.iter().map(|q| q.numerator().clone()).sum();
                    if &total != dist[0].denominator() {
                        failures += 1;
                    }
                    states += 1;
                }
            }
            records.push(CheckRecord::new(
                format!("transition_normalization/p{p}/{}", wall_tag(wall)),
                failures as f64,
                tol,
                states,
                seed,
            ));
        }
    }
    Ok(records)
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct UniformityParams {
    cases: Vec<(usize, u64)>,
    wall: bool,
    samples: usize,
}

impl Default for UniformityParams {
    fn default() -> Self {
        Self { cases: vec![(1, 3), (2, 2)], wall: true, samples: 100_000 }
    }
}

fn sampler_uniformity(params: UniformityParams, alpha: f64, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    for &(p, n) in &params.cases {
        let all = enumerate_watermelons(p, n, params.wall)?;
        let index: HashMap<Vec<i64>, usize> =
            all.iter().enumerate().map(|(i, w)| (w.positions().to_vec(), i)).collect();
        let case_seed = replica_seed(seed, (p as u64) << 32 | n);
        let sampler = WatermelonSampler::new(p, n, params.wall)?;
        let hits = sampler.sample_map(case_seed, params.samples, |path| index.get(path.positions()).copied());
        let mut counts = vec![0u64; all.len()];
        let mut stray = 0u64;
        for h in hits {
            match h {
                Some(i) => counts[i] += 1,
                None => stray += 1,
            }
        }
        let name = format!("sampler_uniformity/p{p}/n{n}/{}", wall_tag(params.wall));
        let record = if stray > 0 || counts.len() < 2 {
            // A single watermelon is trivially uniform; stray paths never are.
            CheckRecord::new(name, stray as f64, 0.0, params.samples as u64, case_seed)
        } else {
            let out = chi_square_uniform(&counts, alpha)?;
            CheckRecord::new(name, out.statistic, out.critical, params.samples as u64, case_seed)
        };
        records.push(record);
    }
    Ok(records)
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SpectralParams {
    p: Vec<usize>,
    t: f64,
    samples: usize,
}

impl Default for SpectralParams {
    fn default() -> Self {
        Self { p: vec![1, 2], t: 0.5, samples: 10_000 }
    }
}

fn spectral_marginal_ks(params: SpectralParams, alpha: f64, cache: &mut DataCache) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    for &p in &params.p {
        for wall in WALLS {
            let seed = cache.seed_for(&format!("spectral/p{p}/{}", wall_tag(wall)));
            let points: Vec<Vec<f64>> = (0..params.samples as u64)
                .into_par_iter()
                .map(|r| {
                    let s = replica_seed(seed, r);
                    let pt = if wall {
                        sample_wall_spectrum::<f64>(p, s)?.scaled(wall_scale(params.t))
                    } else {
                        sample_gue_spectrum::<f64>(p, s)?.scaled(nowall_scale(params.t))
                    };
                    Ok(pt.into_inner())
                })
                .collect::<Result<_>>()?;
            let threshold = ks_c_alpha(alpha) / (params.samples as f64).sqrt();
            for b in 1..=p {
                let cdf = cache.marginal_cdf(p, wall, params.t, b)?;
                let d = ks_statistic(&column(&points, b - 1), |x| cdf.cdf(x))?;
                records.push(CheckRecord::new(
                    format!("spectral_marginal_ks/p{p}/{}/b{b}", wall_tag(wall)),
                    d,
                    threshold,
                    params.samples as u64,
                    seed,
                ));
            }
        }
    }
    Ok(records)
}

fn marginal_ks(mc: McParams, alpha: f64, cache: &mut DataCache) -> Result<Vec<CheckRecord>> {
    let k = time_index(mc.t)?;
    let mut records = Vec::new();
    for p in mc.ps(&[1, 2]) {
        for wall in WALLS {
            let (points, seed) = draws(cache, &mc, mc.source, p, wall, k, true)?;
            let threshold = ks_c_alpha(alpha) / (points.len() as f64).sqrt();
            for b in 1..=p {
                let cdf = cache.marginal_cdf(p, wall, mc.t, b)?;
                let d = ks_statistic(&column(&points, b - 1), |x| cdf.cdf(x))?;
                records.push(CheckRecord::new(
                    format!("marginal_ks/{}/p{p}/{}/b{b}/t{}", mc.source.tag(), wall_tag(wall), mc.t),
                    d,
                    threshold,
                    points.len() as u64,
                    seed,
                ));
            }
        }
    }
    Ok(records)
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct GammaOracleParams {
    times: Vec<f64>,
    /// Radii `r^2` in units of `t(1-t)`.
    levels: Vec<f64>,
}

impl Default for GammaOracleParams {
    fn default() -> Self {
        Self { times: STANDARD_TIMES.to_vec(), levels: vec![0.05, 0.2, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0] }
    }
}

fn gamma_oracle(params: GammaOracleParams, tol: f64) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    for wall in WALLS {
        let mut worst: f64 = 0.0;
        let mut points = 0u64;
        for &t in &params.times {
            let dp = DensityParams::new(1, t, wall)?;
            let s = dp.variance_scale();
            let (shape, scale) = norm_sq_law(1, wall, t);
            for &level in &params.levels {
                let r2 = level * s;
                let r = r2.sqrt();
                let lo = if wall { 0.0 } else { -r };
                let mass = integrate(|x| density(&dp, &[x]).unwrap_or(0.0), lo, r, 1e-14, 1e-12)?.value;
                worst = worst.max((mass - gamma_cdf(shape, scale, r2)?).abs());
                points += 1;
            }
        }
        records.push(CheckRecord::new(format!("gamma_oracle/p1/{}", wall_tag(wall)), worst, tol, points, 0));
    }
    Ok(records)
}

fn norm_law(mc: McParams, alpha: f64, cache: &mut DataCache) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    for p in mc.ps(&[1, 2]) {
        for wall in WALLS {
            for &t in &mc.times {
                let k = time_index(t)?;
                let (shape, scale) = norm_sq_law(p, wall, t);
                let (spread, seed) = draws(cache, &mc, mc.source, p, wall, k, true)?;
                let r2 = norms(&spread);
                let d = ks_statistic(&r2, |x| gamma_cdf(shape, scale, x.max(0.0)).unwrap_or(0.0))?;
                let tag = format!("{}/p{p}/{}/t{t}", mc.source.tag(), wall_tag(wall));
                records.push(CheckRecord::new(
                    format!("norm_law/{tag}"),
                    d,
                    ks_c_alpha(alpha) / (r2.len() as f64).sqrt(),
                    r2.len() as u64,
                    seed,
                ));
                let (raw, _) = draws(cache, &mc, mc.source, p, wall, k, false)?;
                let (mean, se) = mean_se(norms(&raw))?;
                let exact = norm_dimension(p, wall) as f64 * t * (1.0 - t);
                records.push(CheckRecord::new(format!("norm_mean/{tag}"), z_score(mean, se, exact), 3.0, raw.len() as u64, seed));
            }
        }
    }
    Ok(records)
}

fn moment_table(tol: f64) -> Result<Vec<CheckRecord>> {
    reference_table()
        .into_iter()
        .map(|e| {
            let got = normalized_moment(e.wall, e.branch, e.order)?;
            Ok(CheckRecord::new(
                format!("moment_table/{}/b{}/k{}", wall_tag(e.wall), e.branch, e.order),
                (got - e.value).abs() / e.value.abs(),
                tol,
                1,
                0,
            ))
        })
        .collect()
}

fn moment_mc(mc: McParams, z: f64, cache: &mut DataCache) -> Result<Vec<CheckRecord>> {
    let k = time_index(mc.t)?;
    let mut records = Vec::new();
    for wall in WALLS {
        let (points, seed) = draws(cache, &mc, mc.source, 2, wall, k, false)?;
        for b in 1..=2 {
            let x = column(&points, b - 1);
            for order in 1..=mc.max_order {
                let exact = if wall { moment_wall_p2(b, order, mc.t)? } else { moment_nowall_p2(b, order, mc.t)? };
                let (mean, se) = mean_se(x.iter().map(|v| v.powi(order as i32)))?;
                records.push(CheckRecord::new(
                    format!("moment_mc/{}/{}/b{b}/k{order}/t{}", mc.source.tag(), wall_tag(wall), mc.t),
                    z_score(mean, se, exact),
                    z,
                    x.len() as u64,
                    seed,
                ));
            }
        }
    }
    Ok(records)
}

/// `e_1, ..., e_p` of the entries of `x`.
fn elementary_symmetric(x: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; x.len() + 1];
    e[0] = 1.0;
    for (i, &v) in x.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += v * e[k - 1];
        }
    }
    e.remove(0);
    e
}

fn symmetric_mc(mc: McParams, z: f64, cache: &mut DataCache) -> Result<Vec<CheckRecord>> {
    let k = time_index(mc.t)?;
    let mut records = Vec::new();
    for p in mc.ps(&[1, 2, 3]) {
        for wall in WALLS {
            let (points, seed) = draws(cache, &mc, mc.source, p, wall, k, false)?;
            let sums: Vec<Vec<f64>> = points
                .iter()
                .map(|x| {
                    if wall {
                        elementary_symmetric(&x.iter().map(|v| v * v).collect::<Vec<_>>())
                    } else {
                        elementary_symmetric(x)
                    }
                })
                .collect();
            for j in 1..=p {
                let exact = if wall { sym_wall_expectation(p, j, mc.t)? } else { sym_nowall_expectation(p, j, mc.t)? };
                let (mean, se) = mean_se(sums.iter().map(|e| e[j - 1]))?;
                records.push(CheckRecord::new(
                    format!("symmetric_mc/{}/p{p}/{}/k{j}/t{}", mc.source.tag(), wall_tag(wall), mc.t),
                    z_score(mean, se, exact),
                    z,
                    points.len() as u64,
                    seed,
                ));
            }
        }
    }
    Ok(records)
}

fn sde_invariants(mc: McParams, tol: f64, cache: &mut DataCache) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    for p in mc.ps(&[1, 2]) {
        for wall in WALLS {
            let d = cache.sde(p, wall, mc.t0, mc.dt, mc.gap_floor, mc.samples)?;
            records.push(CheckRecord::new(
                format!("sde_invariants/p{p}/{}", wall_tag(wall)),
                d.batch.violations as f64,
                tol,
                d.len() as u64,
                d.seed(),
            ));
        }
    }
    Ok(records)
}

fn step_halving(mc: McParams, z: f64, cache: &mut DataCache) -> Result<Vec<CheckRecord>> {
    let k = time_index(mc.t)?;
    let mut records = Vec::new();
    for p in mc.ps(&[1, 2]) {
        for wall in WALLS {
            let coarse = cache.sde(p, wall, mc.t0, mc.dt, mc.gap_floor, mc.samples)?;
            let fine = cache.sde(p, wall, mc.t0, mc.dt / 2.0, mc.gap_floor, mc.samples)?;
            let (m1, s1) = mean_se(coarse.batch.norm_sq_at(k))?;
            let (m2, s2) = mean_se(fine.batch.norm_sq_at(k))?;
            records.push(CheckRecord::new(
                format!("step_halving/p{p}/{}/t{}", wall_tag(wall), mc.t),
                z_score(m1, (s1 * s1 + s2 * s2).sqrt(), m2),
                z,
                (coarse.len() + fine.len()) as u64,
                coarse.seed(),
            ));
        }
    }
    Ok(records)
}

fn time_symmetry(mut mc: McParams, alpha: f64, cache: &mut DataCache) -> Result<Vec<CheckRecord>> {
    mc.source = Source::Sde;
    let (early, late) = (time_index(0.25)?, time_index(0.75)?);
    let mut records = Vec::new();
    for p in mc.ps(&[1, 2]) {
        for wall in WALLS {
            let (a, seed) = draws(cache, &mc, Source::Sde, p, wall, early, false)?;
            let (b, _) = draws(cache, &mc, Source::Sde, p, wall, late, false)?;
            for br in 1..=p {
                let d = ks_two_sample(&column(&a, br - 1), &column(&b, br - 1))?;
                records.push(CheckRecord::new(
                    format!("time_symmetry/sde/p{p}/{}/b{br}", wall_tag(wall)),
                    d,
                    ks_two_sample_critical(a.len(), b.len(), alpha),
                    (a.len() + b.len()) as u64,
                    seed,
                ));
            }
        }
    }
    Ok(records)
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct StirlingParams {
    n: Vec<u64>,
    #[serde(flatten)]
    grid: RatioGridParams,
}

#[derive(Debug, Deserialize)]
#[serde(default)]
struct RatioGridParams {
    ts: Vec<f64>,
    a: Vec<u64>,
    b: Vec<f64>,
    c: Vec<u64>,
    d: Vec<u64>,
}

impl Default for RatioGridParams {
    fn default() -> Self {
        let g = RatioGrid::default();
        Self { ts: g.ts, a: g.a, b: g.b, c: g.c, d: g.d }
    }
}

impl Default for StirlingParams {
    fn default() -> Self {
        Self { n: vec![100, 1000, 10_000], grid: RatioGridParams::default() }
    }
}

fn stirling_ratio(params: StirlingParams, c: f64) -> Result<Vec<CheckRecord>> {
    let g = params.grid;
    let grid = RatioGrid { ts: g.ts, a: g.a, b: g.b, c: g.c, d: g.d };
    let cells = (grid.ts.len() * grid.a.len() * grid.b.len() * grid.c.len() * grid.d.len()) as u64;
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for &n in &params.n {
        let err = max_relative_error(n, &grid)?;
        errors.push(err);
        records.push(CheckRecord::new(format!("stirling_ratio/n{n}"), err * (n as f64).sqrt(), c, cells, 0));
    }
    let increases = errors.windows(2).filter(|w| w[1] >= w[0]).count();
    records.push(CheckRecord::new("stirling_ratio/decreasing", increases as f64, 0.0, errors.len() as u64, 0));
    Ok(records)
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SelfTestParams {
    seeds: usize,
    samples: usize,
    alpha: f64,
}

impl Default for SelfTestParams {
    fn default() -> Self {
        Self { seeds: 400, samples: 1000, alpha: 0.05 }
    }
}

fn ks_self_test(params: SelfTestParams, tol: f64, seed: u64) -> Result<Vec<CheckRecord>> {
    use rand_distr::{Distribution, StandardNormal};
    let critical = ks_c_alpha(params.alpha) / (params.samples as f64).sqrt();
    let rejections: usize = (0..params.seeds as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_from_seed(replica_seed(seed, r));
            let v: Vec<f64> = (0..params.samples).map(|_| StandardNormal.sample(&mut rng)).collect();
            ks_statistic(&v, |x| normal_cdf(x, 0.0, 1.0)).map(|d| usize::from(d > critical))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let rate = rejections as f64 / params.seeds as f64;
    Ok(vec![CheckRecord::new("ks_self_test", (rate - params.alpha).abs(), tol, params.seeds as u64, seed)])
}

/// Records for samples supplied from outside the suite.
pub(crate) fn external_discrete_records(data: &DiscreteData, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    let size = data.len() as u64;
    let threshold = ks_c_alpha(0.05) / (data.len() as f64).sqrt();
    let tag = format!("p{}/n{}/{}", data.p, data.n, wall_tag(data.wall));
    if data.p <= 2 {
        let k = time_index(0.5)?;
        for b in 1..=data.p {
            let cdf = MarginalCdf::new(data.p, data.wall, 0.5, b)?;
            let d = ks_statistic(&column(&data.spread[k], b - 1), |x| cdf.cdf(x))?;
            records.push(CheckRecord::new(format!("marginal_ks/file/{tag}/b{b}/t0.5"), d, threshold, size, seed));
        }
    }
    for (k, &t) in STANDARD_TIMES.iter().enumerate() {
        let (shape, scale) = norm_sq_law(data.p, data.wall, t);
        let d = ks_statistic(&norms(&data.spread[k]), |x| gamma_cdf(shape, scale, x.max(0.0)).unwrap_or(0.0))?;
        records.push(CheckRecord::new(format!("norm_law/file/{tag}/t{t}"), d, threshold, size, seed));
    }
    Ok(records)
}
