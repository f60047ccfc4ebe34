//! Star-graph dynamic programs and best-root selection.
//!
//! For every root `r` the star objective keeps only the terms that involve
//! `x_r`. It is minimized exactly in two passes: first the root choice, scoring
//! each candidate by the sum of its cheapest attachment to every other node,
//! then each leaf's cheapest attachment to the chosen root. Of the `n` star
//! optima, the one with the smallest star value is returned; its full
//! objective is within a factor 2 of the optimum when `d` is a metric.
//!
//! Every argmin keeps the first minimum found (smallest element index, label
//! index or root index), so results do not depend on evaluation order.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::ElementKey;
use crate::model::{
    labeling_objective_unchecked, leaf_term, similar_objective_unchecked, Assignment,
    LabelingInstance, SimilarElementsInstance,
};
use crate::nn::{LinearScan, NearestNeighbor};
use crate::par::{map_indices, Execution};

/// Exact minimizer of one star objective.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarSolution {
    pub root: usize,
    pub assignment: Assignment,
    pub star_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    /// Root whose star solution was selected.
    pub root: usize,
    pub assignment: Assignment,
    /// Star objective of `assignment` at `root`; the minimum of `per_root_star_values`.
    pub star_value: f64,
    /// Full objective of `assignment`.
    pub objective: f64,
    pub per_root_star_values: Vec<f64>,
}

/// Optimal star solution for root `r`, with linear-scan nearest neighbors.
pub fn solve_star_similar(inst: &SimilarElementsInstance, r: usize) -> Result<StarSolution> {
    solve_star_similar_with(inst, r, &LinearScan)
}

pub fn solve_star_similar_with<N: NearestNeighbor>(
    inst: &SimilarElementsInstance,
    r: usize,
    nn: &N,
) -> Result<StarSolution> {
    if r >= inst.n() {
        return Err(Error::NodeOutOfRange { index: r, n: inst.n() });
    }
    Ok(star_similar(inst, r, nn))
}

fn star_similar<N: NearestNeighbor>(inst: &SimilarElementsInstance, r: usize, nn: &N) -> StarSolution {
    let space = inst.space();
    let sets = inst.sets();
    let nearest = |q, j: usize| {
        nn.nearest(space, q, &sets[j])
            .expect("sets are non-empty by construction")
    };

    let mut best: Option<(usize, f64)> = None;
    for (a, candidate) in sets[r].iter().enumerate() {
        let mut score = 0.0;
        for j in (0..sets.len()).filter(|&j| j != r) {
            score += nearest(candidate, j).1;
        }
        if best.is_none_or(|(_, s)| score < s) {
            best = Some((a, score));
        }
    }
    let (root_choice, star_value) = best.expect("root set is non-empty");

    let root_el = &sets[r][root_choice];
    let choices = (0..sets.len())
        .map(|j| if j == r { root_choice } else { nearest(root_el, j).0 })
        .collect::<Vec<_>>();
    StarSolution { root: r, assignment: Assignment(choices), star_value }
}

/// All `n` star solutions, in root order.
pub fn solve_stars_similar(inst: &SimilarElementsInstance, exec: Execution) -> Vec<StarSolution> {
    map_indices(inst.n(), exec, |r| star_similar(inst, r, &LinearScan))
}

/// Picks the star solution with the smallest star value (first root on ties).
pub fn select_similar(inst: &SimilarElementsInstance, stars: Vec<StarSolution>) -> SolveReport {
    let (per_root, best) = select(stars);
    let objective = similar_objective_unchecked(inst, &best.assignment);
    SolveReport {
        root: best.root,
        assignment: best.assignment,
        star_value: best.star_value,
        objective,
        per_root_star_values: per_root,
    }
}

/// 2-approximate solution of the similar elements problem.
pub fn solve_similar(inst: &SimilarElementsInstance) -> SolveReport {
    solve_similar_with(inst, Execution::default())
}

pub fn solve_similar_with(inst: &SimilarElementsInstance, exec: Execution) -> SolveReport {
    select_similar(inst, solve_stars_similar(inst, exec))
}

/// Optimal star solution of the labeling problem for root `r`. Masks restrict
/// both the root choice and every leaf choice.
pub fn solve_star_labeling(inst: &LabelingInstance, r: usize) -> Result<StarSolution> {
    if r >= inst.n() {
        return Err(Error::NodeOutOfRange { index: r, n: inst.n() });
    }
    Ok(star_labeling(inst, r))
}

/// Cheapest label for leaf `j` given root label `a`, and its leaf term.
fn best_leaf(inst: &LabelingInstance, j: usize, a: usize) -> (usize, f64) {
    let n = inst.n();
    let (&first, rest) = inst.allowed(j).split_first().expect("mask rows allow at least one label");
    let mut best_b = first;
    let mut best_t = leaf_term(inst.cost(j, first), inst.label_distance(a, first), n);
    let costs = &inst.node_costs()[j];
    let dists = inst.label_row(a);
    for &b in rest {
        let t = leaf_term(costs[b], dists[b], n);
        let better = t < best_t;
        best_b = if better { b } else { best_b };
        best_t = if better { t } else { best_t };
    }
    (best_b, best_t)
}

fn star_labeling(inst: &LabelingInstance, r: usize) -> StarSolution {
    let n = inst.n();
    let mut best: Option<(usize, f64)> = None;
    for &a in inst.allowed(r) {
        let mut score = inst.cost(r, a) / n as f64;
        for j in (0..n).filter(|&j| j != r) {
            score += best_leaf(inst, j, a).1;
        }
        if best.is_none_or(|(_, s)| score < s) {
            best = Some((a, score));
        }
    }
    let (root_label, star_value) = best.expect("mask rows allow at least one label");
    let choices = (0..n)
        .map(|j| if j == r { root_label } else { best_leaf(inst, j, root_label).0 })
        .collect();
    StarSolution { root: r, assignment: Assignment(choices), star_value }
}

pub fn solve_stars_labeling(inst: &LabelingInstance, exec: Execution) -> Vec<StarSolution> {
    map_indices(inst.n(), exec, |r| star_labeling(inst, r))
}

pub fn select_labeling(inst: &LabelingInstance, stars: Vec<StarSolution>) -> SolveReport {
    let (per_root, best) = select(stars);
    let objective = labeling_objective_unchecked(inst, &best.assignment);
    SolveReport {
        root: best.root,
        assignment: best.assignment,
        star_value: best.star_value,
        objective,
        per_root_star_values: per_root,
    }
}

/// 2-approximate solution of metric labeling on the complete graph.
pub fn solve_labeling(inst: &LabelingInstance) -> SolveReport {
    solve_labeling_with(inst, Execution::default())
}

pub fn solve_labeling_with(inst: &LabelingInstance, exec: Execution) -> SolveReport {
    select_labeling(inst, solve_stars_labeling(inst, exec))
}

fn select(stars: Vec<StarSolution>) -> (Vec<f64>, StarSolution) {
    let per_root: Vec<f64> = stars.iter().map(|s| s.star_value).collect();
    let mut best = 0;
    for (r, &v) in per_root.iter().enumerate() {
        if v < per_root[best] {
            best = r;
        }
    }
    let chosen = stars.into_iter().nth(best).expect("at least one root");
    (per_root, chosen)
}

/// Embeds a similar elements instance into metric labeling: the labels are
/// the distinct elements of `S_1 ∪ ... ∪ S_n` in order of first appearance,
/// node costs are zero and node `i` may only take labels drawn from `S_i`.
///
/// The labeling objective of the result counts each pair once, so it is half
/// the similar elements objective of the corresponding assignment.
pub fn reduce_similar_to_labeling(inst: &SimilarElementsInstance) -> LabelingInstance {
    let mut index: HashMap<ElementKey, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut member: Vec<Vec<usize>> = Vec::with_capacity(inst.n());
    for set in inst.sets() {
        let row = set
            .iter()
            .map(|e| {
                *index.entry(e.key()).or_insert_with(|| {
                    labels.push(e.clone());
                    labels.len() - 1
                })
            })
            .collect();
        member.push(row);
    }
    let k = labels.len();
    let masks = member
        .iter()
        .map(|row| {
            let mut mask = vec![false; k];
            for &l in row {
                mask[l] = true;
            }
            mask
        })
        .collect();
    LabelingInstance::new(inst.space().clone(), labels, vec![vec![0.0; k]; inst.n()], Some(masks))
        .expect("reduction of a valid instance is valid")
}

/// Maps a labeling assignment on the reduced instance back to positions in
/// each `S_i` (first position holding the label's element).
pub fn lift_labeling_assignment(
    inst: &SimilarElementsInstance,
    reduced: &LabelingInstance,
    x: &Assignment,
) -> Result<Assignment> {
    reduced.check_assignment(x)?;
    if reduced.n() != inst.n() {
        return Err(Error::InvalidAssignment("instances have different node counts".into()));
    }
    let mut out = Vec::with_capacity(x.len());
    for (i, set) in inst.sets().iter().enumerate() {
        let key = reduced.labels()[x[i]].key();
        let pos = set.iter().position(|e| e.key() == key).ok_or_else(|| {
            Error::InvalidAssignment(format!("label {} is not a member of set {i}", x[i]))
        })?;
        out.push(pos);
    }
    Ok(Assignment(out))
}
