//! Problem instances, assignments and the objective functions.
//!
//! The similar elements objective sums `d(x_i, x_j)` over all *ordered*
//! pairs `(i, j)`, so every unordered pair contributes twice. The labeling
//! objective sums each edge of the complete graph once. Consequently, on an
//! instance with zero node costs, `similar_objective == 2 * labeling_objective`.

use std::ops::Index;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{Element, MetricSpace};

/// One chosen index per node: a position in `S_i` for similar elements, or a
/// label index for labeling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl Index<usize> for Assignment {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl From<Vec<usize>> for Assignment {
    fn from(v: Vec<usize>) -> Self {
        Assignment(v)
    }
}

/// `n` non-empty finite subsets `S_1..S_n` of a metric space.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarElementsInstance {
    space: MetricSpace,
    sets: Vec<Vec<Element>>,
}

impl SimilarElementsInstance {
    pub fn new(space: MetricSpace, sets: Vec<Vec<Element>>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidInstance("at least one set is required".into()));
        }
        for (i, set) in sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidInstance(format!("set {i} is empty")));
            }
            for e in set {
                space.check_element(e)?;
            }
        }
        Ok(Self { space, sets })
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn sets(&self) -> &[Vec<Element>] {
        &self.sets
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    /// Largest set size.
    pub fn k(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The element chosen for node `i` under `x`.
    pub fn chosen(&self, x: &Assignment, i: usize) -> &Element {
        &self.sets[i][x[i]]
    }

    pub(crate) fn dist(&self, p: &Element, q: &Element) -> f64 {
        self.space.dist(p, q)
    }

    pub fn check_assignment(&self, x: &Assignment) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::InvalidAssignment(format!(
                "assignment has length {}, instance has {} sets",
                x.len(),
                self.n()
            )));
        }
        for (i, (&c, set)) in x.0.iter().zip(&self.sets).enumerate() {
            if c >= set.len() {
                return Err(Error::InvalidAssignment(format!(
                    "choice {c} for set {i} exceeds its size {}",
                    set.len()
                )));
            }
        }
        Ok(())
    }

    fn check_node(&self, r: usize) -> Result<()> {
        if r < self.n() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { index: r, n: self.n() })
        }
    }
}

/// Unweighted metric labeling on the complete graph over `n` nodes.
///
/// Optional masks restrict which labels each node may take; every mask row
/// must allow at least one label. The label-to-label distance table is
/// computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelingInstance {
    space: MetricSpace,
    labels: Vec<Element>,
    node_costs: Vec<Vec<f64>>,
    masks: Option<Vec<Vec<bool>>>,
    label_dist: Vec<f64>,
    allowed: Vec<Vec<usize>>,
}

impl LabelingInstance {
    pub fn new(
        space: MetricSpace,
        labels: Vec<Element>,
        node_costs: Vec<Vec<f64>>,
        masks: Option<Vec<Vec<bool>>>,
    ) -> Result<Self> {
        let k = labels.len();
        if k == 0 {
            return Err(Error::InvalidInstance("label set is empty".into()));
        }
        if node_costs.is_empty() {
            return Err(Error::InvalidInstance("at least one node is required".into()));
        }
        for l in &labels {
            space.check_element(l)?;
        }
        for (i, row) in node_costs.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidInstance(format!(
                    "node {i} has {} costs, expected {k}",
                    row.len()
                )));
            }
            if let Some(c) = row.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
                return Err(Error::InvalidInstance(format!(
                    "node {i} has cost {c}; costs must be finite and non-negative"
                )));
            }
        }
        let allowed: Vec<Vec<usize>> = match &masks {
            None => vec![(0..k).collect(); node_costs.len()],
            Some(m) => {
                if m.len() != node_costs.len() {
                    return Err(Error::InvalidInstance(format!(
                        "{} mask rows for {} nodes",
                        m.len(),
                        node_costs.len()
                    )));
                }
                let mut allowed = Vec::with_capacity(m.len());
                for (i, row) in m.iter().enumerate() {
                    if row.len() != k {
                        return Err(Error::InvalidInstance(format!(
                            "mask row {i} has {} entries, expected {k}",
                            row.len()
                        )));
                    }
                    let a: Vec<usize> = (0..k).filter(|&l| row[l]).collect();
                    if a.is_empty() {
                        return Err(Error::InvalidInstance(format!(
                            "mask row {i} allows no label"
                        )));
                    }
                    allowed.push(a);
                }
                allowed
            }
        };
        let mut label_dist = Vec::with_capacity(k * k);
        for a in &labels {
            for b in &labels {
                label_dist.push(space.dist(a, b));
            }
        }
        Ok(Self { space, labels, node_costs, masks, label_dist, allowed })
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn labels(&self) -> &[Element] {
        &self.labels
    }

    pub fn node_costs(&self) -> &[Vec<f64>] {
        &self.node_costs
    }

    pub fn masks(&self) -> Option<&[Vec<bool>]> {
        self.masks.as_deref()
    }

    pub fn n(&self) -> usize {
        self.node_costs.len()
    }

    pub fn k(&self) -> usize {
        self.labels.len()
    }

    /// Label indices node `i` may take, ascending.
    pub fn allowed(&self, i: usize) -> &[usize] {
        &self.allowed[i]
    }

    #[inline]
    pub fn cost(&self, i: usize, label: usize) -> f64 {
        self.node_costs[i][label]
    }

    #[inline]
    pub fn label_distance(&self, a: usize, b: usize) -> f64 {
        self.label_dist[a * self.labels.len() + b]
    }

    /// Distances from label `a` to every label.
    #[inline]
    pub fn label_row(&self, a: usize) -> &[f64] {
        let k = self.labels.len();
        &self.label_dist[a * k..(a + 1) * k]
    }

    pub fn check_assignment(&self, x: &Assignment) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::InvalidAssignment(format!(
                "assignment has length {}, instance has {} nodes",
                x.len(),
                self.n()
            )));
        }
        for (i, &l) in x.0.iter().enumerate() {
            if l >= self.k() {
                return Err(Error::InvalidAssignment(format!(
                    "label {l} for node {i} exceeds label count {}",
                    self.k()
                )));
            }
            if self.masks.as_ref().is_some_and(|m| !m[i][l]) {
                return Err(Error::InvalidAssignment(format!(
                    "label {l} is masked out for node {i}"
                )));
            }
        }
        Ok(())
    }

    fn check_node(&self, r: usize) -> Result<()> {
        if r < self.n() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { index: r, n: self.n() })
        }
    }
}

/// Sum of `d(x_i, x_j)` over all ordered pairs `(i, j)`.
pub fn similar_objective(inst: &SimilarElementsInstance, x: &Assignment) -> Result<f64> {
    inst.check_assignment(x)?;
    Ok(similar_objective_unchecked(inst, x))
}

// Evaluated as twice the upper-triangle sum so that it agrees bit-for-bit with
// twice the labeling objective of the reduced instance.
pub(crate) fn similar_objective_unchecked(inst: &SimilarElementsInstance, x: &Assignment) -> f64 {
    let n = inst.n();
    let mut upper = 0.0;
    for i in 0..n {
        let xi = inst.chosen(x, i);
        for j in i + 1..n {
            upper += inst.dist(xi, inst.chosen(x, j));
        }
    }
    2.0 * upper
}

/// Terms of the similar elements objective involving node `r`:
/// `sum_{j != r} d(x_r, x_j)`.
pub fn similar_star_objective(
    inst: &SimilarElementsInstance,
    r: usize,
    x: &Assignment,
) -> Result<f64> {
    inst.check_node(r)?;
    inst.check_assignment(x)?;
    Ok(similar_star_objective_unchecked(inst, r, x))
}

pub(crate) fn similar_star_objective_unchecked(
    inst: &SimilarElementsInstance,
    r: usize,
    x: &Assignment,
) -> f64 {
    let root = inst.chosen(x, r);
    let mut acc = 0.0;
    for j in (0..inst.n()).filter(|&j| j != r) {
        acc += inst.dist(root, inst.chosen(x, j));
    }
    acc
}

/// Node costs plus one distance per edge of the complete graph.
pub fn labeling_objective(inst: &LabelingInstance, x: &Assignment) -> Result<f64> {
    inst.check_assignment(x)?;
    Ok(labeling_objective_unchecked(inst, x))
}

pub(crate) fn labeling_objective_unchecked(inst: &LabelingInstance, x: &Assignment) -> f64 {
    let n = inst.n();
    let unary: f64 = (0..n).map(|i| inst.cost(i, x[i])).sum();
    let mut pairs = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            pairs += inst.label_distance(x[i], x[j]);
        }
    }
    unary + pairs
}

/// Contribution of leaf `j` to a star objective: `m_j(x_j)/n + d(x_r, x_j)/2`.
#[inline]
pub(crate) fn leaf_term(cost: f64, dist: f64, n: usize) -> f64 {
    cost / n as f64 + dist / 2.0
}

/// Star objective rooted at `r`:
/// `sum_i m_i(x_i)/n + sum_{j != r} d(x_r, x_j)/2`.
///
/// Accumulated as `m_r(x_r)/n` followed by one leaf term per `j != r`, the
/// same grouping the star solver minimizes, so solver and evaluator agree
/// exactly.
pub fn labeling_star_objective(inst: &LabelingInstance, r: usize, x: &Assignment) -> Result<f64> {
    inst.check_node(r)?;
    inst.check_assignment(x)?;
    Ok(labeling_star_objective_unchecked(inst, r, x))
}

pub(crate) fn labeling_star_objective_unchecked(
    inst: &LabelingInstance,
    r: usize,
    x: &Assignment,
) -> f64 {
    let n = inst.n();
    let root = x[r];
    let mut acc = inst.cost(r, root) / n as f64;
    for j in (0..n).filter(|&j| j != r) {
        acc += leaf_term(inst.cost(j, x[j]), inst.label_distance(root, x[j]), n);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::PointMetric;

    fn line(sets: &[&[f64]]) -> SimilarElementsInstance {
        let space = MetricSpace::points(1, PointMetric::L1).unwrap();
        let sets = sets
            .iter()
            .map(|s| s.iter().map(|&v| Element::Point(vec![v])).collect())
            .collect();
        SimilarElementsInstance::new(space, sets).unwrap()
    }

    pub(crate) fn two_node() -> LabelingInstance {
        let space = MetricSpace::matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        LabelingInstance::new(
            space,
            vec![Element::Index(0), Element::Index(1)],
            vec![vec![0.0, 5.0], vec![3.0, 0.0]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn similar_single_set_is_zero() {
        let inst = line(&[&[4.0, 7.0]]);
        assert_eq!(similar_objective(&inst, &vec![1].into()).unwrap(), 0.0);
        assert_eq!(similar_star_objective(&inst, 0, &vec![1].into()).unwrap(), 0.0);
    }

    #[test]
    fn similar_identical_choices_are_zero() {
        let inst = line(&[&[2.0], &[2.0, 5.0], &[9.0, 2.0]]);
        assert_eq!(similar_objective(&inst, &vec![0, 0, 1].into()).unwrap(), 0.0);
    }

    #[test]
    fn similar_three_sets_on_a_line() {
        let inst = line(&[&[0.0, 10.0], &[1.0], &[2.0]]);
        let x: Assignment = vec![0, 0, 0].into();
        // ordered pairs: 2 * (|0-1| + |0-2| + |1-2|)
        assert_eq!(similar_objective(&inst, &x).unwrap(), 8.0);
        assert_eq!(similar_star_objective(&inst, 1, &x).unwrap(), 2.0);
        let sum: f64 = (0..3).map(|r| similar_star_objective(&inst, r, &x).unwrap()).sum();
        assert_eq!(sum, 8.0);
    }

    #[test]
    fn similar_rejects_bad_input() {
        let inst = line(&[&[0.0, 10.0], &[1.0]]);
        assert!(similar_objective(&inst, &vec![0].into()).is_err());
        assert!(similar_objective(&inst, &vec![2, 0].into()).is_err());
        assert!(matches!(
            similar_star_objective(&inst, 2, &vec![0, 0].into()),
            Err(Error::NodeOutOfRange { index: 2, n: 2 })
        ));
        let space = MetricSpace::points(1, PointMetric::L1).unwrap();
        assert!(SimilarElementsInstance::new(space.clone(), vec![]).is_err());
        assert!(SimilarElementsInstance::new(space, vec![vec![]]).is_err());
    }

    #[test]
    fn labeling_two_nodes() {
        let inst = two_node();
        assert_eq!(labeling_objective(&inst, &vec![0, 1].into()).unwrap(), 1.0);
        assert_eq!(labeling_objective(&inst, &vec![1, 0].into()).unwrap(), 9.0);
        assert_eq!(labeling_star_objective(&inst, 0, &vec![0, 1].into()).unwrap(), 0.5);
        for x in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let x: Assignment = x.to_vec().into();
            let sum = labeling_star_objective(&inst, 0, &x).unwrap()
                + labeling_star_objective(&inst, 1, &x).unwrap();
            assert_eq!(sum, labeling_objective(&inst, &x).unwrap());
        }
    }

    #[test]
    fn labeling_single_node() {
        let space = MetricSpace::Strings;
        let inst = LabelingInstance::new(space, vec!["a".into(), "bb".into()], vec![vec![2.5, 1.5]], None)
            .unwrap();
        assert_eq!(labeling_objective(&inst, &vec![0].into()).unwrap(), 2.5);
        assert_eq!(labeling_star_objective(&inst, 0, &vec![1].into()).unwrap(), 1.5);
    }

    #[test]
    fn labeling_masks() {
        let space = MetricSpace::matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let labels = vec![Element::Index(0), Element::Index(1)];
        let costs = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        let masks = Some(vec![vec![true, false], vec![true, true]]);
        let inst = LabelingInstance::new(space.clone(), labels.clone(), costs.clone(), masks).unwrap();
        assert_eq!(inst.allowed(0), &[0]);
        assert!(matches!(
            labeling_objective(&inst, &vec![1, 0].into()),
            Err(Error::InvalidAssignment(_))
        ));
        let empty = Some(vec![vec![false, false], vec![true, true]]);
        assert!(LabelingInstance::new(space.clone(), labels.clone(), costs, empty).is_err());
        let negative = vec![vec![0.0, -1.0], vec![0.0, 0.0]];
        assert!(LabelingInstance::new(space.clone(), labels.clone(), negative, None).is_err());
        let nan = vec![vec![0.0, f64::NAN], vec![0.0, 0.0]];
        assert!(LabelingInstance::new(space, labels, nan, None).is_err());
    }
}
