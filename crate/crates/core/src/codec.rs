//! JSON wire formats for partitions.
//!
//! Hard partitions travel as integer label vectors, soft partitions as a
//! dense row-major matrix; both carry explicit dimensions:
//! `{"ell": 2, "m": 3, "labels": [0, 0, 1]}` or
//! `{"ell": 2, "m": 3, "rows": [[0.0, 0.5, 1.0], [1.0, 0.5, 0.0]]}`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::partition::{LabeledPartition, Partition};

#[derive(Serialize, Deserialize)]
struct Wire {
    ell: usize,
    m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<Vec<Vec<f64>>>,
}

impl Serialize for LabeledPartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let wire = match self.labels() {
            Some(labels) => Wire {
                ell: self.ell(),
                m: self.m(),
                labels: Some(labels),
                rows: None,
            },
            None => Wire {
                ell: self.ell(),
                m: self.m(),
                labels: None,
                rows: Some((0..self.ell()).map(|k| self.row(k).to_vec()).collect()),
            },
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabeledPartition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = Wire::deserialize(deserializer)?;
        let lp = match (wire.labels, wire.rows) {
            (Some(labels), None) => {
                if labels.len() != wire.m {
                    return Err(D::Error::custom(format!(
                        "expected {} labels, got {}",
                        wire.m,
                        labels.len()
                    )));
                }
                LabeledPartition::from_labels(wire.ell, &labels)
            }
            (None, Some(rows)) => {
                if rows.len() != wire.ell || rows.iter().any(|r| r.len() != wire.m) {
                    return Err(D::Error::custom(format!(
                        "rows do not form a {}x{} matrix",
                        wire.ell, wire.m
                    )));
                }
                LabeledPartition::from_rows(rows)
            }
            _ => {
                return Err(D::Error::custom(
                    "exactly one of `labels` and `rows` must be present",
                ))
            }
        };
        lp.map_err(D::Error::custom)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.canonical().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Partition::from_rep(LabeledPartition::deserialize(deserializer)?))
    }
}
