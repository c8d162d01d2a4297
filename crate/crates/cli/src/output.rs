//! Plain serializable records. Complex numbers are written as `[re, im]`
//! and curve points as `{"z": .., "v": ..}` or `{"infinity": sign}`.

use std::fs;
use std::io::Write;
use std::path::Path;

use minitwistor::classifier::{Classification, LocalType};
use minitwistor::curve::CurvePoint;
use minitwistor::poly::C64;
use minitwistor::projective::{Divisor, Hyperplane};
use serde::Serialize;

use crate::commands::CliError;

pub type Pair = [f64; 2];

pub fn pair(x: C64) -> Pair {
    [x.re, x.im]
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum PointRecord {
    Finite { z: Pair, v: Pair },
    Infinity { infinity: f64 },
}

impl From<&CurvePoint> for PointRecord {
    fn from(p: &CurvePoint) -> Self {
        match *p {
            CurvePoint::Finite { z, v } => PointRecord::Finite { z: pair(z), v: pair(v) },
            CurvePoint::Infinity(s) => PointRecord::Infinity { infinity: s.value() },
        }
    }
}

#[derive(Serialize)]
pub struct HyperplaneRecord {
    /// Ascending coefficients of `P`.
    pub p: Vec<Pair>,
    pub c: Pair,
}

impl From<&Hyperplane> for HyperplaneRecord {
    fn from(h: &Hyperplane) -> Self {
        HyperplaneRecord {
            p: h.p.iter().map(|&x| pair(x)).collect(),
            c: pair(h.c),
        }
    }
}

#[derive(Serialize)]
pub struct DivisorEntry {
    pub point: PointRecord,
    pub multiplicity: usize,
}

pub fn divisor(d: &Divisor) -> Vec<DivisorEntry> {
    d.points
        .iter()
        .map(|(p, m)| DivisorEntry {
            point: p.into(),
            multiplicity: *m,
        })
        .collect()
}

#[derive(Serialize)]
pub struct SingularityEntry {
    pub point: PointRecord,
    pub multiplicity: usize,
    pub kind: String,
    pub circle: Option<usize>,
    pub genus_drop: usize,
}

#[derive(Serialize)]
pub struct ClassificationRecord {
    pub genus_drop: usize,
    pub sigma_paired: bool,
    pub singularities: Vec<SingularityEntry>,
}

impl From<&Classification> for ClassificationRecord {
    fn from(c: &Classification) -> Self {
        let singularities = c
            .records
            .iter()
            .map(|r| {
                let (kind, circle) = match &r.kind {
                    LocalType::NodeReal { circle } => ("real node".to_string(), circle.map(|c| c.index)),
                    LocalType::NodeConjugate { .. } => ("conjugate node".to_string(), None),
                    LocalType::Contact { order } => (format!("contact {order}"), None),
                    LocalType::CuspFlag { multiplicity } => (format!("cusp flag {multiplicity}"), None),
                };
                SingularityEntry {
                    point: (&r.point).into(),
                    multiplicity: r.multiplicity,
                    kind,
                    circle,
                    genus_drop: r.genus_drop,
                }
            })
            .collect();
        ClassificationRecord {
            genus_drop: c.genus_drop,
            sigma_paired: c.sigma_paired,
            singularities,
        }
    }
}

/// Writes `bytes` to `path`, or to standard output when there is none.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    v.push(b'\n');
    Ok(v)
}

/// Serializes rows to CSV in memory.
pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Internal(e.to_string()))
}
