//! Brute-force exact minimization, used as ground truth.
//!
//! Assignments are enumerated in lexicographic order of their indices and the
//! first one attaining the minimum is kept. Enumeration refuses to start when
//! the number of assignments exceeds the caller's budget.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    labeling_objective_unchecked, labeling_star_objective_unchecked, similar_objective_unchecked,
    similar_star_objective_unchecked, Assignment, LabelingInstance, SimilarElementsInstance,
};
use crate::par::{map_indices, Execution};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactResult {
    pub assignment: Assignment,
    pub objective: f64,
    /// Number of assignments evaluated.
    pub enumerated_count: u64,
}

/// Minimum of the similar elements objective over all `prod |S_i|` assignments.
pub fn exact_similar(inst: &SimilarElementsInstance, budget: u64) -> Result<ExactResult> {
    let domains = similar_domains(inst);
    let order: Vec<usize> = (0..inst.n()).collect();
    enumerate(&domains, &order, budget, Execution::default(), |x| {
        similar_objective_unchecked(inst, x)
    })
}

/// Minimum of the labeling objective over all mask-respecting labelings.
pub fn exact_labeling(inst: &LabelingInstance, budget: u64) -> Result<ExactResult> {
    let domains = labeling_domains(inst);
    let order: Vec<usize> = (0..inst.n()).collect();
    enumerate(&domains, &order, budget, Execution::default(), |x| {
        labeling_objective_unchecked(inst, x)
    })
}

/// Exhaustive minimum of the star objective at root `r`. The root coordinate
/// is the most significant in the enumeration order, followed by the others
/// in index order; the first minimizer in that order is returned.
pub fn exact_star_similar(
    inst: &SimilarElementsInstance,
    r: usize,
    budget: u64,
) -> Result<ExactResult> {
    let order = root_first(inst.n(), r)?;
    enumerate(&similar_domains(inst), &order, budget, Execution::default(), |x| {
        similar_star_objective_unchecked(inst, r, x)
    })
}

/// Labeling counterpart of [`exact_star_similar`].
pub fn exact_star_labeling(inst: &LabelingInstance, r: usize, budget: u64) -> Result<ExactResult> {
    let order = root_first(inst.n(), r)?;
    enumerate(&labeling_domains(inst), &order, budget, Execution::default(), |x| {
        labeling_star_objective_unchecked(inst, r, x)
    })
}

fn similar_domains(inst: &SimilarElementsInstance) -> Vec<Vec<usize>> {
    inst.sets().iter().map(|s| (0..s.len()).collect()).collect()
}

fn labeling_domains(inst: &LabelingInstance) -> Vec<Vec<usize>> {
    (0..inst.n()).map(|i| inst.allowed(i).to_vec()).collect()
}

fn root_first(n: usize, r: usize) -> Result<Vec<usize>> {
    if r >= n {
        return Err(Error::NodeOutOfRange { index: r, n });
    }
    Ok(std::iter::once(r).chain((0..n).filter(|&j| j != r)).collect())
}

/// Number of assignments over `domains`, or `BudgetExceeded`.
pub fn assignment_count(domains: &[Vec<usize>], budget: u64) -> Result<u64> {
    let mut total: u128 = 1;
    for d in domains {
        total = total.saturating_mul(d.len() as u128);
    }
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { required: total, budget });
    }
    Ok(total as u64)
}

/// Lexicographic-first minimizer of `eval`. `order[0]` is the most
/// significant coordinate. The work is split on `order[0]` and merged in
/// order, so the result is the same for every execution mode.
fn enumerate<F>(
    domains: &[Vec<usize>],
    order: &[usize],
    budget: u64,
    exec: Execution,
    eval: F,
) -> Result<ExactResult>
where
    F: Fn(&Assignment) -> f64 + Sync + Send,
{
    let count = assignment_count(domains, budget)?;
    let lead = order[0];
    let rest = &order[1..];

    let chunks = map_indices(domains[lead].len(), exec, |first| {
        let mut pos = vec![0usize; domains.len()];
        let mut x = Assignment(domains.iter().map(|d| d[0]).collect());
        x.0[lead] = domains[lead][first];
        let mut best: Option<(Assignment, f64)> = None;
        loop {
            let v = eval(&x);
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some((x.clone(), v));
            }
            // odometer over `rest`, least significant last
            let mut advanced = false;
            for &c in rest.iter().rev() {
                pos[c] += 1;
                if pos[c] < domains[c].len() {
                    x.0[c] = domains[c][pos[c]];
                    advanced = true;
                    break;
                }
                pos[c] = 0;
                x.0[c] = domains[c][0];
            }
            if !advanced {
                break;
            }
        }
        best.expect("every domain is non-empty")
    });

    let mut best: Option<(Assignment, f64)> = None;
    for (x, v) in chunks {
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((x, v));
        }
    }
    let (assignment, objective) = best.expect("lead domain is non-empty");
    Ok(ExactResult { assignment, objective, enumerated_count: count })
}
