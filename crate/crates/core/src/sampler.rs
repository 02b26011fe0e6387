//! The binomial random model: every possible edge of each sort appears
//! independently with probability p_R, realized per repetition pattern by a
//! binomial count plus uniform sampling of distinct orbits.

use std::collections::HashSet;
use std::sync::Arc;

use rand::distributions::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;
use thiserror::Error;

use crate::structure::Hypergraph;
use crate::vocabulary::{DensityMap, Edge, OrbitPattern, VertexId, Vocabulary};

/// Expected-edge budget guarding against accidentally dense configurations.
pub const DEFAULT_EDGE_BUDGET: f64 = 5e7;

/// When a pattern asks for more than this fraction of its orbit space,
/// rejection sampling degrades and we enumerate the space instead.
const REJECTION_FILL_LIMIT: f64 = 0.5;
const ENUMERATION_LIMIT: u128 = 2_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("expected edge count {expected:.3e} exceeds budget {budget:.3e}")]
    Overflow { expected: f64, budget: f64 },
    #[error("orbit count {0} exceeds the samplable range")]
    CountOverflow(u128),
    #[error("{0}")]
    BadConfig(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Regime {
    /// Explicit per-relation probabilities, in vocabulary order.
    ExplicitP(Vec<f64>),
    /// p_R = min(1, beta_R / n^(ar(R)-1)).
    SparseBeta(DensityMap),
}

#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub n: u32,
    pub seed: u64,
    pub regime: Regime,
    pub edge_budget: f64,
}

impl SampleConfig {
    pub fn sparse(n: u32, densities: DensityMap, seed: u64) -> Self {
        SampleConfig {
            n,
            seed,
            regime: Regime::SparseBeta(densities),
            edge_budget: DEFAULT_EDGE_BUDGET,
        }
    }

    pub fn explicit(n: u32, probabilities: Vec<f64>, seed: u64) -> Self {
        SampleConfig {
            n,
            seed,
            regime: Regime::ExplicitP(probabilities),
            edge_budget: DEFAULT_EDGE_BUDGET,
        }
    }
}

/// splitmix64 finalizer; used to derive independent RNG streams.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic sub-seed for stream `(a, b)` of a master seed.
pub fn derive_seed(seed: u64, a: u64, b: u64) -> u64 {
    mix(seed ^ mix(a ^ mix(b)))
}

pub fn sample(vocab: &Arc<Vocabulary>, config: &SampleConfig) -> Result<Hypergraph, SampleError> {
    let n = config.n;
    if n == 0 {
        return Err(SampleError::BadConfig("n must be >= 1".into()));
    }
    let probabilities: Vec<f64> = match &config.regime {
        Regime::ExplicitP(ps) => {
            if ps.len() != vocab.relations.len() {
                return Err(SampleError::BadConfig(format!(
                    "expected {} probabilities, got {}",
                    vocab.relations.len(),
                    ps.len()
                )));
            }
            for &p in ps {
                if !(0.0..=1.0).contains(&p) {
                    return Err(SampleError::BadConfig(format!("p = {p} out of [0,1]")));
                }
            }
            ps.clone()
        }
        Regime::SparseBeta(betas) => {
            let resolved = betas
                .validate(vocab)
                .map_err(|e| SampleError::BadConfig(e.to_string()))?;
            vocab
                .relations
                .iter()
                .zip(resolved)
                .map(|(rel, beta)| (beta / (n as f64).powi(rel.arity as i32 - 1)).min(1.0))
                .collect()
        }
    };

    // Pre-pass: total expected edges against the budget.
    let mut patterns_per_rel: Vec<Vec<OrbitPattern>> = Vec::new();
    let mut expected_total = 0.0;
    for (rel, p) in probabilities.iter().enumerate() {
        let patterns = vocab.orbit_patterns(rel);
        for pattern in &patterns {
            expected_total += pattern.count(n as u64) as f64 * p;
        }
        patterns_per_rel.push(patterns);
    }
    if expected_total > config.edge_budget {
        return Err(SampleError::Overflow {
            expected: expected_total,
            budget: config.edge_budget,
        });
    }

    let mut edges: Vec<Vec<Edge>> = Vec::with_capacity(vocab.relations.len());
    for (rel, patterns) in patterns_per_rel.iter().enumerate() {
        let p = probabilities[rel];
        let mut rel_edges: Vec<Edge> = Vec::new();
        for (pi, pattern) in patterns.iter().enumerate() {
            let count = pattern.count(n as u64);
            if count == 0 || p == 0.0 {
                continue;
            }
            let count64 =
                u64::try_from(count).map_err(|_| SampleError::CountOverflow(count))?;
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                config.seed,
                rel as u64,
                pi as u64,
            ));
            let m = Binomial::new(count64, p)
                .map_err(|e| SampleError::BadConfig(e.to_string()))?
                .sample(&mut rng);
            if m == 0 {
                continue;
            }
            let drawn = if (m as f64) > REJECTION_FILL_LIMIT * count as f64 {
                if count > ENUMERATION_LIMIT {
                    // Can only happen past the edge budget for extreme p.
                    return Err(SampleError::CountOverflow(count));
                }
                choose_by_enumeration(vocab, rel, pattern, n, m as usize, &mut rng)
            } else {
                choose_by_rejection(vocab, rel, pattern, n, m as usize, &mut rng)
            };
            rel_edges.extend(drawn);
        }
        rel_edges.sort_unstable();
        rel_edges.dedup();
        edges.push(rel_edges);
    }

    Ok(Hypergraph::from_sorted_parts(
        vocab.clone(),
        (1..=n).collect(),
        edges,
    ))
}

/// Uniform random orbit of the given pattern: draw `distinct` fresh vertex
/// labels, write them into the pattern's blocks, canonicalize. Every orbit
/// of the pattern class arises from the same number of draws, so orbits are
/// uniform; a hash set enforces distinctness.
fn choose_by_rejection(
    vocab: &Arc<Vocabulary>,
    rel: usize,
    pattern: &OrbitPattern,
    n: u32,
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Edge> {
    let arity = vocab.relations[rel].arity;
    let mut seen: HashSet<Edge> = HashSet::with_capacity(m * 2);
    let mut labels: Vec<VertexId> = Vec::with_capacity(pattern.distinct);
    let mut tuple = vec![0 as VertexId; arity];
    while seen.len() < m {
        labels.clear();
        while labels.len() < pattern.distinct {
            let v = rng.gen_range(1..=n);
            if !labels.contains(&v) {
                labels.push(v);
            }
        }
        for (bi, block) in pattern.blocks.iter().enumerate() {
            for &pos in block {
                tuple[pos] = labels[bi];
            }
        }
        let edge = vocab
            .canonical_edge(rel, &tuple)
            .expect("arity checked")
            .expect("pattern respects anti-reflexivity");
        seen.insert(edge);
    }
    seen.into_iter().collect()
}

fn choose_by_enumeration(
    vocab: &Arc<Vocabulary>,
    rel: usize,
    pattern: &OrbitPattern,
    n: u32,
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Edge> {
    let arity = vocab.relations[rel].arity;
    let mut all: HashSet<Edge> = HashSet::new();
    let d = pattern.distinct;
    let mut labels: Vec<VertexId> = vec![0; d];
    let mut tuple = vec![0 as VertexId; arity];
    // all ordered d-tuples of distinct vertices
    fn rec(
        depth: usize,
        n: u32,
        labels: &mut Vec<VertexId>,
        emit: &mut dyn FnMut(&[VertexId]),
    ) {
        if depth == labels.len() {
            emit(labels);
            return;
        }
        for v in 1..=n {
            if !labels[..depth].contains(&v) {
                labels[depth] = v;
                rec(depth + 1, n, labels, emit);
            }
        }
    }
    {
        let mut emit = |labels: &[VertexId]| {
            for (bi, block) in pattern.blocks.iter().enumerate() {
                for &pos in block {
                    tuple[pos] = labels[bi];
                }
            }
            if let Ok(Some(edge)) = vocab.canonical_edge(rel, &tuple) {
                all.insert(edge);
            }
        };
        // Manual capture split: tuple is reused across callback invocations.
        let mut shim = |labels: &[VertexId]| emit(labels);
        rec(0, n, &mut labels, &mut shim);
    }
    let mut pool: Vec<Edge> = all.into_iter().collect();
    pool.sort_unstable();
    // partial Fisher-Yates for m distinct picks
    let len = pool.len();
    for i in 0..m.min(len) {
        let j = rng.gen_range(i..len);
        pool.swap(i, j);
    }
    pool.truncate(m.min(len));
    pool
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocabulary::{preset, AntiReflexivePairs, Relation, SymmetryGroup};

    #[test]
    fn zero_density_gives_empty_structure() {
        let vocab = preset("graph").unwrap();
        let cfg = SampleConfig::sparse(50, DensityMap::uniform(&vocab, 0.0), 1);
        let h = sample(&vocab, &cfg).unwrap();
        assert_eq!(h.vertex_count(), 50);
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn same_seed_reproduces_the_structure() {
        let vocab = preset("cnf3").unwrap();
        let cfg = SampleConfig::sparse(60, DensityMap::uniform(&vocab, 2.0), 99);
        let a = sample(&vocab, &cfg).unwrap();
        let b = sample(&vocab, &cfg).unwrap();
        assert_eq!(a, b);
        let cfg2 = SampleConfig::sparse(60, DensityMap::uniform(&vocab, 2.0), 100);
        let c = sample(&vocab, &cfg2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn mean_edge_count_matches_binomial_mean() {
        let vocab = preset("graph").unwrap();
        let n = 10_000u32;
        let samples = 1000;
        let mut total = 0f64;
        for s in 0..samples {
            let cfg = SampleConfig::sparse(n, DensityMap::uniform(&vocab, 1.0), 7000 + s);
            total += sample(&vocab, &cfg).unwrap().edge_count() as f64;
        }
        let mean = total / samples as f64;
        // E = C(n,2) * 1/n = (n-1)/2; sd of the mean ~ sqrt(E/samples)
        let expect = (n as f64 - 1.0) / 2.0;
        let se = (expect / samples as f64).sqrt();
        assert!(
            (mean - expect).abs() < 3.0 * se,
            "mean {mean} vs {expect} (se {se})"
        );
    }

    #[test]
    fn budget_overflow_reported() {
        let vocab = preset("graph").unwrap();
        let mut cfg = SampleConfig::explicit(10_000, vec![1.0], 3);
        cfg.edge_budget = 1e6;
        assert!(matches!(
            sample(&vocab, &cfg),
            Err(SampleError::Overflow { .. })
        ));
    }

    /// Exactness of the pattern-decomposed sampler: at small n every orbit,
    /// degenerate ones included, must appear with frequency p.
    #[test]
    fn per_orbit_inclusion_frequency_is_p() {
        use std::collections::HashMap;
        let vocab = Arc::new(crate::vocabulary::Vocabulary::new(
            "loopy",
            vec![Relation {
                name: "E".into(),
                arity: 2,
                group: SymmetryGroup::trivial(2),
                anti_reflexive: AntiReflexivePairs::none(),
            }],
        ));
        let n = 5u32;
        let p = 0.3;
        let samples = 60_000;
        let mut freq: HashMap<Edge, u64> = HashMap::new();
        for s in 0..samples {
            let cfg = SampleConfig::explicit(n, vec![p], 31_000 + s);
            let h = sample(&vocab, &cfg).unwrap();
            for e in h.edges(0) {
                *freq.entry(e.clone()).or_default() += 1;
            }
        }
        let orbit_count = vocab.edge_space_size(0, n as u64) as usize;
        assert_eq!(orbit_count, 25); // n(n-1) + n loops
        let se = (p * (1.0 - p) / samples as f64).sqrt();
        let mut checked = 0;
        for u in 1..=n {
            for v in 1..=n {
                let canon = vocab.canonical_edge(0, &[u, v]).unwrap().unwrap();
                let hits = freq.get(&canon).copied().unwrap_or(0);
                let f = hits as f64 / samples as f64;
                assert!(
                    (f - p).abs() < 4.0 * se,
                    "orbit {canon:?}: freq {f} vs p {p}"
                );
                checked += 1;
            }
        }
        assert_eq!(checked, 25);
    }

    /// Binomial counts per pattern: empirical mean and variance of the
    /// edge count match Binomial(count, p).
    #[test]
    fn per_pattern_count_is_binomial() {
        let vocab = preset("graph").unwrap();
        let n = 7u32;
        let p = 0.4;
        let count = vocab.edge_space_size(0, n as u64) as f64; // 21
        let samples = 40_000;
        let mut sum = 0f64;
        let mut sumsq = 0f64;
        for s in 0..samples {
            let cfg = SampleConfig::explicit(n, vec![p], 91_000 + s);
            let m = sample(&vocab, &cfg).unwrap().edge_count() as f64;
            sum += m;
            sumsq += m * m;
        }
        let mean = sum / samples as f64;
        let var = sumsq / samples as f64 - mean * mean;
        let want_mean = count * p;
        let want_var = count * p * (1.0 - p);
        let se_mean = (want_var / samples as f64).sqrt();
        assert!((mean - want_mean).abs() < 4.0 * se_mean);
        // variance of the sample variance ~ 2*var^2/N for near-normal counts
        let se_var = (2.0 * want_var * want_var / samples as f64).sqrt() * 2.0;
        assert!((var - want_var).abs() < 4.0 * se_var, "{var} vs {want_var}");
    }
}
