#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use simlabel_core::generate::{generate, Family, GeneratorSpec};
use simlabel_core::{Instance, LabelingInstance, PointMetric, ProblemKind, SimilarElementsInstance};

/// Families exercised by the randomized suites.
pub const FAMILIES: [(&str, Family, PointMetric); 4] = [
    ("points-l1", Family::Points, PointMetric::L1),
    ("points-l2", Family::Points, PointMetric::L2),
    ("random-metric", Family::RandomMetric, PointMetric::L2),
    ("strings", Family::Strings, PointMetric::L2),
];

/// Small instance number `idx`: family cycles with `idx`, `n` in `1..=6`,
/// `k` in `1..=5`, both drawn from a PRNG seeded by `idx`.
pub fn small_spec(problem: ProblemKind, idx: u64) -> (&'static str, GeneratorSpec) {
    let (name, family, metric) = FAMILIES[(idx % FAMILIES.len() as u64) as usize];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + idx);
    let n = rng.random_range(1..=6);
    let k = rng.random_range(1..=5);
    let mut spec = GeneratorSpec::new(family, problem, n, k, idx);
    spec.metric = metric;
    spec.dim = rng.random_range(1..=3);
    spec.ragged = true;
    spec.masks = true;
    spec.max_len = 5;
    // small universes make shared elements and ties likely
    spec.universe = Some(k + rng.random_range(0..=k));
    (name, spec)
}

pub fn small_similar(idx: u64) -> (&'static str, SimilarElementsInstance) {
    let (name, spec) = small_spec(ProblemKind::Similar, idx);
    match generate(&spec).unwrap().to_instance().unwrap() {
        Instance::Similar(i) => (name, i),
        Instance::Labeling(_) => unreachable!(),
    }
}

pub fn small_labeling(idx: u64) -> (&'static str, LabelingInstance) {
    let (name, spec) = small_spec(ProblemKind::Labeling, idx);
    match generate(&spec).unwrap().to_instance().unwrap() {
        Instance::Labeling(i) => (name, i),
        Instance::Similar(_) => unreachable!(),
    }
}
