//! Metric spaces over which both problem families are posed.
//!
//! Three concrete forms are supported: an explicit distance matrix over a
//! finite universe `0..u`, real vectors under an Lp metric, and byte strings
//! under unit-cost Levenshtein distance. Lp and Levenshtein satisfy the metric
//! axioms by construction; explicit matrices are checked by [`validate_metric`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack allowed in the triangle check. Matrices produced by
/// shortest-path closure in floating point can miss by an ulp.
pub const TRIANGLE_RTOL: f64 = 1e-12;

/// Verdicts stop collecting witnesses past this many violations.
pub const MAX_WITNESSES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointMetric {
    L1,
    L2,
    Linf,
}

impl PointMetric {
    pub fn name(self) -> &'static str {
        match self {
            PointMetric::L1 => "l1",
            PointMetric::L2 => "l2",
            PointMetric::Linf => "linf",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "l1" => Some(PointMetric::L1),
            "l2" => Some(PointMetric::L2),
            "linf" => Some(PointMetric::Linf),
            _ => None,
        }
    }

    fn eval(self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            PointMetric::L1 => diffs.sum(),
            PointMetric::L2 => diffs.map(|t| t * t).sum::<f64>().sqrt(),
            PointMetric::Linf => diffs.fold(0.0, f64::max),
        }
    }
}

/// A member of some metric space. Which variant is valid depends on the space.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    /// Index into the universe of an explicit matrix.
    Index(usize),
    Point(Vec<f64>),
    Bytes(Vec<u8>),
}

impl Element {
    /// Hashable identity used for deduplication. Points compare by bit
    /// pattern with `-0.0` folded into `0.0`.
    pub fn key(&self) -> ElementKey {
        match self {
            Element::Index(i) => ElementKey::Index(*i),
            Element::Point(v) => ElementKey::Point(
                v.iter()
                    .map(|x| if *x == 0.0 { 0u64 } else { x.to_bits() })
                    .collect(),
            ),
            Element::Bytes(b) => ElementKey::Bytes(b.clone()),
        }
    }
}

impl From<&str> for Element {
    fn from(s: &str) -> Self {
        Element::Bytes(s.as_bytes().to_vec())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElementKey {
    Index(usize),
    Point(Vec<u64>),
    Bytes(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpace {
    /// Row-major `size x size` distance matrix.
    Matrix { size: usize, distances: Vec<f64> },
    Points { dim: usize, metric: PointMetric },
    Strings,
}

impl MetricSpace {
    /// Builds an explicit-matrix space and rejects it unless every metric
    /// axiom holds.
    pub fn matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let space = Self::matrix_unchecked(rows)?;
        let verdict = validate_metric(&space)?;
        if verdict.is_valid() {
            Ok(space)
        } else {
            Err(Error::NotAMetric(verdict))
        }
    }

    /// Builds an explicit-matrix space checking only its shape.
    pub fn matrix_unchecked(rows: Vec<Vec<f64>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::InvalidInstance("distance matrix is empty".into()));
        }
        let mut distances = Vec::with_capacity(size * size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidInstance(format!(
                    "distance matrix row {i} has {} entries, expected {size}",
                    row.len()
                )));
            }
            distances.extend(row);
        }
        Ok(MetricSpace::Matrix { size, distances })
    }

    pub fn points(dim: usize, metric: PointMetric) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInstance("point dimension must be positive".into()));
        }
        Ok(MetricSpace::Points { dim, metric })
    }

    pub fn rows(&self) -> Option<Vec<Vec<f64>>> {
        match self {
            MetricSpace::Matrix { size, distances } => {
                Some(distances.chunks(*size).map(<[f64]>::to_vec).collect())
            }
            _ => None,
        }
    }

    pub fn check_element(&self, e: &Element) -> Result<()> {
        match (self, e) {
            (MetricSpace::Matrix { size, .. }, Element::Index(i)) => {
                if i < size {
                    Ok(())
                } else {
                    Err(Error::IndexOutOfRange { index: *i, size: *size })
                }
            }
            (MetricSpace::Points { dim, .. }, Element::Point(v)) => {
                if v.len() != *dim {
                    Err(Error::DimensionMismatch { expected: *dim, found: v.len() })
                } else if v.iter().any(|x| !x.is_finite()) {
                    Err(Error::ElementKind("point coordinates must be finite".into()))
                } else {
                    Ok(())
                }
            }
            (MetricSpace::Strings, Element::Bytes(_)) => Ok(()),
            (space, e) => Err(Error::ElementKind(format!(
                "{} element in {} space",
                element_kind(e),
                self::space_kind(space)
            ))),
        }
    }

    /// Distance between two elements already known to be valid for this space.
    pub(crate) fn dist(&self, p: &Element, q: &Element) -> f64 {
        match (self, p, q) {
            (MetricSpace::Matrix { size, distances }, Element::Index(a), Element::Index(b)) => {
                distances[a * size + b]
            }
            (MetricSpace::Points { metric, .. }, Element::Point(a), Element::Point(b)) => {
                metric.eval(a, b)
            }
            (MetricSpace::Strings, Element::Bytes(a), Element::Bytes(b)) => levenshtein(a, b),
            _ => unreachable!("elements are validated at instance construction"),
        }
    }

    pub fn kind(&self) -> &'static str {
        space_kind(self)
    }
}

fn space_kind(space: &MetricSpace) -> &'static str {
    match space {
        MetricSpace::Matrix { .. } => "matrix",
        MetricSpace::Points { .. } => "points",
        MetricSpace::Strings => "strings",
    }
}

fn element_kind(e: &Element) -> &'static str {
    match e {
        Element::Index(_) => "index",
        Element::Point(_) => "point",
        Element::Bytes(_) => "string",
    }
}

/// Unit-cost edit distance between byte strings.
pub fn levenshtein(a: &[u8], b: &[u8]) -> f64 {
    // single-row DP over `b`
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = diag + usize::from(ca != cb);
            diag = row[j + 1];
            row[j + 1] = sub.min(row[j] + 1).min(diag + 1);
        }
    }
    row[b.len()] as f64
}

/// `d(p, q)` for arbitrary elements, checking both against the space first.
pub fn distance(space: &MetricSpace, p: &Element, q: &Element) -> Result<f64> {
    space.check_element(p)?;
    space.check_element(q)?;
    Ok(space.dist(p, q))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    NonFinite { p: usize, q: usize },
    Negative { p: usize, q: usize, value: f64 },
    NonzeroDiagonal { p: usize, value: f64 },
    /// `d(p, q) != d(q, p)`, reported once with `p < q`.
    Asymmetry { p: usize, q: usize },
    /// `d(p, q) > d(p, r) + d(r, q)`.
    Triangle { p: usize, q: usize, r: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { p, q } => write!(f, "d({p},{q}) is not finite"),
            Violation::Negative { p, q, value } => write!(f, "d({p},{q}) = {value} is negative"),
            Violation::NonzeroDiagonal { p, value } => write!(f, "d({p},{p}) = {value} is not zero"),
            Violation::Asymmetry { p, q } => write!(f, "d({p},{q}) != d({q},{p})"),
            Violation::Triangle { p, q, r } => {
                write!(f, "d({p},{q}) > d({p},{r}) + d({r},{q})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Verdict {
    pub violations: Vec<Violation>,
    /// More violations exist than were recorded.
    pub truncated: bool,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, v: Violation) -> bool {
        if self.violations.len() >= MAX_WITNESSES {
            self.truncated = true;
            return false;
        }
        self.violations.push(v);
        true
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        if self.truncated {
            write!(f, "; ...")?;
        }
        Ok(())
    }
}

/// Exhaustive O(u^3) check of the metric axioms on an explicit matrix.
pub fn validate_metric(space: &MetricSpace) -> Result<Verdict> {
    let MetricSpace::Matrix { size, distances } = space else {
        return Err(Error::InvalidInstance(
            "metric validation applies to explicit matrices only".into(),
        ));
    };
    let u = *size;
    let d = |p: usize, q: usize| distances[p * u + q];
    let mut verdict = Verdict::default();

    for p in 0..u {
        for q in 0..u {
            let v = d(p, q);
            if !v.is_finite() {
                verdict.push(Violation::NonFinite { p, q });
            } else if v < 0.0 {
                verdict.push(Violation::Negative { p, q, value: v });
            }
        }
    }
    for p in 0..u {
        let v = d(p, p);
        if v.is_finite() && v != 0.0 {
            verdict.push(Violation::NonzeroDiagonal { p, value: v });
        }
    }
    for p in 0..u {
        for q in p + 1..u {
            let (a, b) = (d(p, q), d(q, p));
            if a.is_finite() && b.is_finite() && a != b {
                verdict.push(Violation::Asymmetry { p, q });
            }
        }
    }
    'outer: for p in 0..u {
        for q in 0..u {
            if p == q {
                continue;
            }
            let direct = d(p, q);
            if !direct.is_finite() {
                continue;
            }
            for r in 0..u {
                if r == p || r == q {
                    continue;
                }
                let via = d(p, r) + d(r, q);
                if via.is_finite()
                    && direct > via + TRIANGLE_RTOL * via.abs().max(1.0)
                    && !verdict.push(Violation::Triangle { p, q, r })
                {
                    break 'outer;
                }
            }
        }
    }
    Ok(verdict)
}

/// Replaces every entry with its shortest-path distance (Floyd-Warshall).
/// A symmetric non-negative input with zero diagonal becomes a metric.
pub fn metric_closure(size: usize, distances: &mut [f64]) {
    assert_eq!(distances.len(), size * size);
    for k in 0..size {
        for i in 0..size {
            let dik = distances[i * size + k];
            for j in 0..size {
                let via = dik + distances[k * size + j];
                if via < distances[i * size + j] {
                    distances[i * size + j] = via;
                }
            }
        }
    }
}
