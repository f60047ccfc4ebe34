//! Seeded random instance generators.
//!
//! All randomness comes from ChaCha8 seeded with `seed_from_u64`; the
//! identifier [`GENERATOR_ID`] is stored in each instance's metadata.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::io::{ElementRepr, InstanceFile, Metadata, ProblemKind, SpaceSpec, FORMAT_VERSION};
use crate::metric::{metric_closure, PointMetric};

pub const GENERATOR_ID: &str = "chacha8-rand_chacha-0.9/v1";

/// Alphabet for generated strings.
pub const STRING_ALPHABET: &[u8] = b"acgt";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Uniform points in `[0,1)^dim`.
    Points,
    /// Shortest-path closure of a random symmetric matrix.
    RandomMetric,
    /// Random strings over [`STRING_ALPHABET`] under edit distance.
    Strings,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Points => "points",
            Family::RandomMetric => "random-metric",
            Family::Strings => "strings",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "points" => Some(Family::Points),
            "random-metric" => Some(Family::RandomMetric),
            "strings" => Some(Family::Strings),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub problem: ProblemKind,
    /// Number of sets (similar) or nodes (labeling).
    pub n: usize,
    /// Set size (similar) or label count (labeling).
    pub k: usize,
    pub seed: u64,
    pub dim: usize,
    pub metric: PointMetric,
    /// Universe size for random-metric similar instances; defaults to `2k`.
    pub universe: Option<usize>,
    pub max_len: usize,
    /// Similar instances draw each set size uniformly from `1..=k`.
    pub ragged: bool,
    /// Labeling instances get random masks with at least one allowed label per node.
    pub masks: bool,
    /// Node costs are drawn uniformly from `[0, cost_max)`.
    pub cost_max: f64,
}

impl GeneratorSpec {
    pub fn new(family: Family, problem: ProblemKind, n: usize, k: usize, seed: u64) -> Self {
        Self {
            family,
            problem,
            n,
            k,
            seed,
            dim: 2,
            metric: PointMetric::L2,
            universe: None,
            max_len: 6,
            ragged: false,
            masks: false,
            cost_max: 10.0,
        }
    }

    fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Generator(m.into()));
        if self.n == 0 {
            return bad("n must be at least 1");
        }
        if self.k == 0 {
            return bad("k must be at least 1");
        }
        if self.family == Family::Points && self.dim == 0 {
            return bad("dim must be at least 1");
        }
        if self.family == Family::Strings && self.max_len == 0 {
            return bad("max_len must be at least 1");
        }
        if let Some(u) = self.universe {
            if u < self.k {
                return bad("universe must be at least k");
            }
        }
        if !(self.cost_max.is_finite() && self.cost_max >= 0.0) {
            return bad("cost_max must be finite and non-negative");
        }
        Ok(())
    }
}

/// Deterministic instance for `spec`: the same spec always yields the same file.
pub fn generate(spec: &GeneratorSpec) -> Result<InstanceFile> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let metadata = Some(Metadata {
        name: Some(format!(
            "{}-{}-n{}-k{}-s{}",
            spec.problem.name(),
            spec.family.name(),
            spec.n,
            spec.k,
            spec.seed
        )),
        seed: Some(spec.seed),
        generator: Some(GENERATOR_ID.into()),
        family: Some(spec.family.name().into()),
        ..Default::default()
    });
    let mut file = InstanceFile {
        version: FORMAT_VERSION,
        kind: spec.problem,
        space: SpaceSpec::Strings,
        sets: None,
        labels: None,
        node_costs: None,
        masks: None,
        skip_validation: false,
        metadata,
    };

    match spec.problem {
        ProblemKind::Similar => {
            let sizes: Vec<usize> = (0..spec.n)
                .map(|_| if spec.ragged { rng.random_range(1..=spec.k) } else { spec.k })
                .collect();
            let (space, sets) = match spec.family {
                Family::Points => {
                    let sets = sizes
                        .iter()
                        .map(|&s| (0..s).map(|_| random_point(&mut rng, spec.dim)).collect())
                        .collect();
                    (points_space(spec), sets)
                }
                Family::Strings => {
                    let sets = sizes
                        .iter()
                        .map(|&s| (0..s).map(|_| random_string(&mut rng, spec.max_len)).collect())
                        .collect();
                    (SpaceSpec::Strings, sets)
                }
                Family::RandomMetric => {
                    let u = spec.universe.unwrap_or(2 * spec.k);
                    let distances = random_metric(&mut rng, u);
                    let sets = sizes
                        .iter()
                        .map(|&s| {
                            let mut idx = sample(&mut rng, u, s).into_vec();
                            idx.sort_unstable();
                            idx.into_iter().map(ElementRepr::Index).collect()
                        })
                        .collect();
                    (SpaceSpec::Matrix { distances }, sets)
                }
            };
            file.space = space;
            file.sets = Some(sets);
        }
        ProblemKind::Labeling => {
            match spec.family {
                Family::Points => {
                    file.space = points_space(spec);
                    file.labels = Some((0..spec.k).map(|_| random_point(&mut rng, spec.dim)).collect());
                }
                Family::Strings => {
                    file.labels = Some((0..spec.k).map(|_| random_string(&mut rng, spec.max_len)).collect());
                }
                Family::RandomMetric => {
                    file.space = SpaceSpec::Matrix { distances: random_metric(&mut rng, spec.k) };
                }
            }
            let costs = (0..spec.n)
                .map(|_| (0..spec.k).map(|_| rng.random::<f64>() * spec.cost_max).collect())
                .collect();
            file.node_costs = Some(costs);
            if spec.masks {
                let masks = (0..spec.n)
                    .map(|_| {
                        let mut row: Vec<bool> = (0..spec.k).map(|_| rng.random_bool(0.5)).collect();
                        let forced = rng.random_range(0..spec.k);
                        row[forced] = true;
                        row
                    })
                    .collect();
                file.masks = Some(masks);
            }
        }
    }
    Ok(file)
}

fn points_space(spec: &GeneratorSpec) -> SpaceSpec {
    SpaceSpec::Points { metric: spec.metric, dim: spec.dim }
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> ElementRepr {
    ElementRepr::Point((0..dim).map(|_| rng.random::<f64>()).collect())
}

fn random_string(rng: &mut ChaCha8Rng, max_len: usize) -> ElementRepr {
    let len = rng.random_range(1..=max_len);
    let s = (0..len)
        .map(|_| STRING_ALPHABET[rng.random_range(0..STRING_ALPHABET.len())] as char)
        .collect();
    ElementRepr::Text(s)
}

/// Random symmetric weights in `[0, 1)` closed under shortest paths.
fn random_metric(rng: &mut ChaCha8Rng, u: usize) -> Vec<Vec<f64>> {
    let mut d = vec![0.0; u * u];
    for i in 0..u {
        for j in i + 1..u {
            let w = rng.random::<f64>();
            d[i * u + j] = w;
            d[j * u + i] = w;
        }
    }
    metric_closure(u, &mut d);
    d.chunks(u).map(<[f64]>::to_vec).collect()
}
