//! JSON instance and clustering files.
//!
//! ```text
//! { "metric": {"kind":"euclidean","dim":D} | {"kind":"matrix","n":N,"dist":[[...]]},
//!   "points": [[x, y, ...], ...],      // euclidean only
//!   "levels": [[id, ...], ...] }
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Clustering, TemporalSampling};
use crate::metric::{FiniteMetric, MetricKind, PointId, Validation};

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum MetricDoc {
    Euclidean { dim: usize },
    Matrix { n: usize, dist: Vec<Vec<f64>> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    metric: MetricDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<f64>>>,
    levels: Vec<Vec<PointId>>,
}

pub fn load_instance(bytes: &[u8], validation: Validation) -> Result<TemporalSampling> {
    let doc: InstanceDoc = serde_json::from_slice(bytes)?;
    let metric = match doc.metric {
        MetricDoc::Euclidean { dim } => {
            let points = doc.points.ok_or_else(|| {
                Error::InvalidCoordinates("euclidean metric requires a \"points\" list".into())
            })?;
            FiniteMetric::euclidean(dim, points)?
        }
        MetricDoc::Matrix { n, dist } => {
            if doc.points.is_some() {
                return Err(Error::InvalidMatrix(
                    "\"points\" is only allowed with a euclidean metric".into(),
                ));
            }
            if dist.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "declared n = {n} but {} rows given",
                    dist.len()
                )));
            }
            FiniteMetric::from_matrix(dist, validation)?
        }
    };
    TemporalSampling::new(metric, doc.levels)
}

pub fn save_instance(p: &TemporalSampling) -> String {
    let (metric, points) = match p.metric().kind() {
        MetricKind::Euclidean { dim, coords } => {
            (MetricDoc::Euclidean { dim: *dim }, Some(coords.clone()))
        }
        MetricKind::Matrix { n, dist } => (
            MetricDoc::Matrix {
                n: *n,
                dist: dist.chunks((*n).max(1)).map(<[f64]>::to_vec).collect(),
            },
            None,
        ),
    };
    let doc = InstanceDoc {
        metric,
        points,
        levels: p.levels().to_vec(),
    };
    let mut s = serde_json::to_string(&doc).expect("instance documents always serialize");
    s.push('\n');
    s
}

pub fn load_clustering(bytes: &[u8]) -> Result<Clustering> {
    Ok(serde_json::from_slice(bytes)?)
}

pub fn save_clustering(c: &Clustering) -> String {
    let mut s = serde_json::to_string(c).expect("clusterings always serialize");
    s.push('\n');
    s
}
