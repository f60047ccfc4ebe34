//! JSON instance files.
//!
//! A file carries `version` (currently 1), `kind` (`"similar"` or
//! `"labeling"`), a tagged `space`, and either `sets` or
//! `labels`/`node_costs`/`masks`:
//!
//! ```json
//! {
//!   "kind": "similar",
//!   "sets": [
//!     [0, 1],
//!     [2]
//!   ],
//!   "space": {
//!     "distances": [ ... ],
//!     "type": "matrix"
//!   },
//!   "version": 1
//! }
//! ```
//!
//! Elements are universe indices for `matrix`, coordinate arrays for
//! `points`, and JSON strings for `strings`. For labeling over a matrix,
//! `labels` may be omitted and defaults to the whole universe.
//!
//! The canonical serialization sorts keys, prints floats with 17 significant
//! digits, prints arrays of scalars on one line and ends with a single LF, so
//! canonical files survive parse and re-serialization byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::metric::{validate_metric, Element, MetricSpace, PointMetric};
use crate::model::{LabelingInstance, SimilarElementsInstance};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Similar,
    Labeling,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Similar => "similar",
            ProblemKind::Labeling => "labeling",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceSpec {
    Matrix { distances: Vec<Vec<f64>> },
    Points { metric: PointMetric, dim: usize },
    Strings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRepr {
    Index(usize),
    Point(Vec<f64>),
    Text(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Identifier of the PRNG that produced the instance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub kind: ProblemKind,
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<ElementRepr>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<ElementRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_costs: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masks: Option<Vec<Vec<bool>>>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub skip_validation: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Similar(SimilarElementsInstance),
    Labeling(LabelingInstance),
}

impl Instance {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Instance::Similar(_) => ProblemKind::Similar,
            Instance::Labeling(_) => ProblemKind::Labeling,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Instance::Similar(i) => i.n(),
            Instance::Labeling(i) => i.n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Instance::Similar(i) => i.k(),
            Instance::Labeling(i) => i.k(),
        }
    }
}

/// Parses and validates an instance.
pub fn parse_instance(bytes: &[u8]) -> Result<Instance> {
    parse_instance_file(bytes)?.to_instance()
}

/// Parses the schema only, without building or validating the instance.
pub fn parse_instance_file(bytes: &[u8]) -> Result<InstanceFile> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let file: InstanceFile = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.into_inner().to_string(),
    })?;
    if file.version != FORMAT_VERSION {
        return Err(schema("version", format!("unsupported version {}", file.version)));
    }
    Ok(file)
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), message: message.into() }
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<Instance> {
        let space = match &self.space {
            SpaceSpec::Matrix { distances } => {
                let space = MetricSpace::matrix_unchecked(distances.clone())
                    .map_err(|e| schema("space.distances", e.to_string()))?;
                if !self.skip_validation {
                    let verdict = validate_metric(&space)?;
                    if !verdict.is_valid() {
                        return Err(Error::NotAMetric(verdict));
                    }
                }
                space
            }
            SpaceSpec::Points { metric, dim } => {
                MetricSpace::points(*dim, *metric).map_err(|e| schema("space.dim", e.to_string()))?
            }
            SpaceSpec::Strings => MetricSpace::Strings,
        };

        match self.kind {
            ProblemKind::Similar => {
                for field in [
                    ("labels", self.labels.is_some()),
                    ("node_costs", self.node_costs.is_some()),
                    ("masks", self.masks.is_some()),
                ] {
                    if field.1 {
                        return Err(schema(field.0, "not allowed for kind `similar`"));
                    }
                }
                let sets = self.sets.as_ref().ok_or_else(|| schema("sets", "missing field"))?;
                let mut out = Vec::with_capacity(sets.len());
                for (i, set) in sets.iter().enumerate() {
                    if set.is_empty() {
                        return Err(schema(format!("sets[{i}]"), "set is empty"));
                    }
                    let mut row = Vec::with_capacity(set.len());
                    for (j, e) in set.iter().enumerate() {
                        let e = to_element(e, &space)
                            .map_err(|m| schema(format!("sets[{i}][{j}]"), m))?;
                        row.push(e);
                    }
                    out.push(row);
                }
                Ok(Instance::Similar(SimilarElementsInstance::new(space, out)?))
            }
            ProblemKind::Labeling => {
                if self.sets.is_some() {
                    return Err(schema("sets", "not allowed for kind `labeling`"));
                }
                let labels = match (&self.labels, &space) {
                    (Some(ls), _) => ls
                        .iter()
                        .enumerate()
                        .map(|(j, e)| {
                            to_element(e, &space).map_err(|m| schema(format!("labels[{j}]"), m))
                        })
                        .collect::<Result<Vec<_>>>()?,
                    (None, MetricSpace::Matrix { size, .. }) => (0..*size).map(Element::Index).collect(),
                    (None, _) => return Err(schema("labels", "missing field")),
                };
                let costs = self
                    .node_costs
                    .clone()
                    .ok_or_else(|| schema("node_costs", "missing field"))?;
                if let Some(masks) = &self.masks {
                    if let Some(i) = masks.iter().position(|row| !row.iter().any(|&b| b)) {
                        return Err(schema(format!("masks[{i}]"), "mask allows no label"));
                    }
                }
                Ok(Instance::Labeling(LabelingInstance::new(space, labels, costs, self.masks.clone())?))
            }
        }
    }

    pub fn from_similar(inst: &SimilarElementsInstance, metadata: Option<Metadata>) -> Result<Self> {
        let sets = inst
            .sets()
            .iter()
            .map(|s| s.iter().map(to_repr).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            version: FORMAT_VERSION,
            kind: ProblemKind::Similar,
            space: space_spec(inst.space()),
            sets: Some(sets),
            labels: None,
            node_costs: None,
            masks: None,
            skip_validation: false,
            metadata,
        })
    }

    pub fn from_labeling(inst: &LabelingInstance, metadata: Option<Metadata>) -> Result<Self> {
        let labels = inst.labels().iter().map(to_repr).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            version: FORMAT_VERSION,
            kind: ProblemKind::Labeling,
            space: space_spec(inst.space()),
            sets: None,
            labels: Some(labels),
            node_costs: Some(inst.node_costs().to_vec()),
            masks: inst.masks().map(<[Vec<bool>]>::to_vec),
            skip_validation: false,
            metadata,
        })
    }

    /// Canonical text form; see the module documentation.
    pub fn to_canonical_json(&self) -> Result<String> {
        let value = serde_json::to_value(self).map_err(|e| schema("", e.to_string()))?;
        let mut out = String::new();
        write_canonical(&mut out, &value, 0)?;
        out.push('\n');
        Ok(out)
    }
}

fn space_spec(space: &MetricSpace) -> SpaceSpec {
    match space {
        MetricSpace::Matrix { .. } => SpaceSpec::Matrix { distances: space.rows().unwrap_or_default() },
        MetricSpace::Points { dim, metric } => SpaceSpec::Points { metric: *metric, dim: *dim },
        MetricSpace::Strings => SpaceSpec::Strings,
    }
}

fn to_element(e: &ElementRepr, space: &MetricSpace) -> std::result::Result<Element, String> {
    let el = match (e, space) {
        (ElementRepr::Index(i), MetricSpace::Matrix { .. }) => Element::Index(*i),
        (ElementRepr::Point(v), MetricSpace::Points { .. }) => Element::Point(v.clone()),
        (ElementRepr::Text(s), MetricSpace::Strings) => Element::Bytes(s.as_bytes().to_vec()),
        (_, space) => return Err(format!("element does not belong to a {} space", space.kind())),
    };
    space.check_element(&el).map_err(|e| e.to_string())?;
    Ok(el)
}

fn to_repr(e: &Element) -> Result<ElementRepr> {
    Ok(match e {
        Element::Index(i) => ElementRepr::Index(*i),
        Element::Point(v) => ElementRepr::Point(v.clone()),
        Element::Bytes(b) => ElementRepr::Text(String::from_utf8(b.clone()).map_err(|_| {
            Error::InvalidInstance("string elements must be valid UTF-8 to serialize".into())
        })?),
    })
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_scalar(out: &mut String, v: &Value) -> Result<()> {
    match v {
        Value::Number(num) if num.is_f64() => {
            let f = num.as_f64().unwrap_or(f64::NAN);
            if !f.is_finite() {
                return Err(Error::InvalidInstance("non-finite number".into()));
            }
            let _ = write!(out, "{f:.16e}");
        }
        other => out.push_str(&other.to_string()),
    }
    Ok(())
}

fn write_canonical(out: &mut String, v: &Value, depth: usize) -> Result<()> {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n(' ', 2 * d));
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_scalar(out, item)?;
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_canonical(out, item, depth + 1)?;
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            // serde_json's map is ordered by key
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_canonical(out, item, depth + 1)?;
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
        scalar => write_scalar(out, scalar)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_similar_file() {
        let text = r#"{"version": 1, "kind": "similar", "space": {"type": "strings"}, "sets": [["abc"]]}"#;
        let Instance::Similar(inst) = parse_instance(text.as_bytes()).unwrap() else {
            panic!("expected a similar instance");
        };
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.k(), 1);
    }

    #[test]
    fn asymmetric_matrix_reports_witness() {
        let text = r#"{"version": 1, "kind": "similar",
            "space": {"type": "matrix", "distances": [[0, 1], [2, 0]]},
            "sets": [[0], [1]]}"#;
        match parse_instance(text.as_bytes()) {
            Err(Error::NotAMetric(v)) => {
                assert!(v.violations.contains(&crate::metric::Violation::Asymmetry { p: 0, q: 1 }))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn skip_validation_accepts_non_metric() {
        let text = r#"{"version": 1, "kind": "similar", "skip_validation": true,
            "space": {"type": "matrix", "distances": [[0, 1], [2, 0]]},
            "sets": [[0], [1]]}"#;
        assert!(parse_instance(text.as_bytes()).is_ok());
    }

    #[test]
    fn schema_errors_carry_paths() {
        let bad_elem = r#"{"version": 1, "kind": "similar",
            "space": {"type": "points", "metric": "l1", "dim": 2},
            "sets": [[[0.0, 1.0]], [[1.0]]]}"#;
        match parse_instance(bad_elem.as_bytes()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "sets[1][0]"),
            other => panic!("unexpected {other:?}"),
        }
        let bad_metric = r#"{"version": 1, "kind": "similar",
            "space": {"type": "points", "metric": "l7", "dim": 2}, "sets": [[[0.0, 1.0]]]}"#;
        match parse_instance(bad_metric.as_bytes()) {
            Err(Error::Schema { path, .. }) => assert!(path.starts_with("space"), "{path}"),
            other => panic!("unexpected {other:?}"),
        }
        let empty_set = r#"{"version": 1, "kind": "similar", "space": {"type": "strings"}, "sets": [["a"], []]}"#;
        match parse_instance(empty_set.as_bytes()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "sets[1]"),
            other => panic!("unexpected {other:?}"),
        }
        let wrong_version = r#"{"version": 2, "kind": "similar", "space": {"type": "strings"}, "sets": [["a"]]}"#;
        assert!(matches!(parse_instance(wrong_version.as_bytes()), Err(Error::Schema { .. })));
        assert!(matches!(parse_instance(b"{not json"), Err(Error::Schema { .. })));
    }

    #[test]
    fn labeling_defaults_to_matrix_universe() {
        let text = r#"{"version": 1, "kind": "labeling",
            "space": {"type": "matrix", "distances": [[0, 1], [1, 0]]},
            "node_costs": [[0, 5], [3, 0]]}"#;
        let Instance::Labeling(inst) = parse_instance(text.as_bytes()).unwrap() else {
            panic!("expected labeling");
        };
        assert_eq!(inst.k(), 2);
        assert_eq!(inst.label_distance(0, 1), 1.0);
    }

    #[test]
    fn labeling_empty_mask_is_rejected() {
        let text = r#"{"version": 1, "kind": "labeling",
            "space": {"type": "strings"}, "labels": ["a", "b"],
            "node_costs": [[0, 0]], "masks": [[false, false]]}"#;
        match parse_instance(text.as_bytes()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "masks[0]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let text = r#"{"version": 1, "kind": "labeling", "space": {"type": "points", "metric": "l2", "dim": 2},
            "labels": [[0.1, 0.2], [1e-7, 3]], "node_costs": [[0.3, 1], [2, 0]],
            "masks": [[true, false], [true, true]], "metadata": {"name": "t", "seed": 7, "note": "x"}}"#;
        let file = parse_instance_file(text.as_bytes()).unwrap();
        let canon = file.to_canonical_json().unwrap();
        let again = parse_instance_file(canon.as_bytes()).unwrap();
        assert_eq!(again, file);
        assert_eq!(again.to_canonical_json().unwrap(), canon);
        assert!(canon.ends_with("}\n"));
        assert!(canon.contains("\"labels\": [\n    [1.0000000000000001e-1, 2.0000000000000001e-1]"));
    }
}
