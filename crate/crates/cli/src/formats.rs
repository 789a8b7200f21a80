//! File formats: plain-text cluster files, JSON tiling files, and the JSON
//! analysis report. Every numeric field is exact; rationals are emitted as
//! numerator/denominator pairs and never as floats.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use latile_core::cluster::PrismDecomposition;
use latile_core::trichotomy::{CaseReport, Classification};
use latile_core::{Cluster, IntVec, PeriodicTiling, RationalLineFamily, Sublattice};

/// Parse a cluster file: one point per line, whitespace-separated integers,
/// lines starting with '#' ignored, dimension inferred from the first
/// point. Duplicate points and ragged lines are rejected.
pub fn parse_cluster(text: &str) -> Result<Cluster, String> {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let coords: Result<Vec<i64>, _> = line.split_whitespace().map(str::parse).collect();
        let coords = coords.map_err(|e| format!("line {}: {e}", lineno + 1))?;
        if let Some(first) = rows.first() {
            if coords.len() != first.len() {
                return Err(format!(
                    "line {}: expected {} coordinates, got {}",
                    lineno + 1,
                    first.len(),
                    coords.len()
                ));
            }
        } else if coords.is_empty() || coords.len() > 3 {
            return Err(format!("line {}: points must have 1 to 3 coordinates", lineno + 1));
        }
        rows.push(coords);
    }
    if rows.is_empty() {
        return Err("cluster file contains no points".into());
    }
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    Cluster::new(refs.iter().map(|r| IntVec::from_i64(r)).collect()).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TilingFile {
    pub dim: usize,
    pub period: Vec<Vec<i64>>,
    pub reps: Vec<Vec<i64>>,
}

fn vec_to_i64(v: &IntVec) -> Result<Vec<i64>, String> {
    v.coords()
        .iter()
        .map(|c| c.to_i64().ok_or_else(|| "coordinate too large for file format".to_string()))
        .collect()
}

pub fn tiling_to_file(t: &PeriodicTiling) -> Result<TilingFile, String> {
    Ok(TilingFile {
        dim: t.dim(),
        period: t
            .period()
            .basis()
            .iter()
            .map(vec_to_i64)
            .collect::<Result<_, _>>()?,
        reps: t.reps().iter().map(vec_to_i64).collect::<Result<_, _>>()?,
    })
}

pub fn tiling_from_file(file: &TilingFile) -> Result<PeriodicTiling, String> {
    if file.dim == 0 || file.dim > 3 {
        return Err("tiling dimension must be 1 to 3".into());
    }
    let basis: Vec<IntVec> = file
        .period
        .iter()
        .map(|row| {
            if row.len() != file.dim {
                return Err("period row arity differs from dim".to_string());
            }
            Ok(IntVec::from_i64(row))
        })
        .collect::<Result<_, _>>()?;
    let period = Sublattice::from_generators(file.dim, &basis).map_err(|e| e.to_string())?;
    let reps: Vec<IntVec> = file
        .reps
        .iter()
        .map(|row| {
            if row.len() != file.dim {
                return Err("rep arity differs from dim".to_string());
            }
            Ok(IntVec::from_i64(row))
        })
        .collect::<Result<_, _>>()?;
    PeriodicTiling::new(period, reps).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RatJson {
    pub num: i64,
    pub den: i64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LineFamilyJson {
    pub points: Vec<Vec<RatJson>>,
    pub directions: Vec<Vec<i64>>,
    pub modulus: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PrismJson {
    pub base: Vec<Vec<i64>>,
    pub axis: Vec<i64>,
    pub translate: Vec<i64>,
    pub offsets: Vec<i64>,
    pub foundation: Vec<Vec<i64>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LineJson {
    pub point: Vec<RatJson>,
    pub direction: Vec<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyEntryJson {
    pub direction: Vec<i64>,
    pub lines: LineFamilyJson,
}

/// Case-dependent witness payload; absent fields are omitted so each case
/// serializes with a fixed key set in a fixed order.
#[derive(Debug, Default, Serialize, Deserialize)]
pub struct WitnessJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g0: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g1: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scaling: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<LineJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prism: Option<PrismJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lines: Option<LineFamilyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub families: Option<Vec<FamilyEntryJson>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Report {
    pub case: String,
    pub prime: u64,
    pub cluster: Vec<Vec<i64>>,
    pub delta: Vec<Vec<i64>>,
    pub divisible_directions: Vec<Vec<i64>>,
    pub witness: WitnessJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tiling_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn rat_json(r: &num_rational::BigRational) -> Result<RatJson, String> {
    Ok(RatJson {
        num: r.numer().to_i64().ok_or("rational numerator too large")?,
        den: r.denom().to_i64().ok_or("rational denominator too large")?,
    })
}

fn point_json(p: &latile_core::RationalTorusPoint) -> Result<Vec<RatJson>, String> {
    p.coords().iter().map(rat_json).collect()
}

fn family_json(f: &RationalLineFamily) -> Result<LineFamilyJson, String> {
    Ok(LineFamilyJson {
        points: f.points.iter().map(point_json).collect::<Result<_, _>>()?,
        directions: f.directions.iter().map(vec_to_i64).collect::<Result<_, _>>()?,
        modulus: f.modulus,
    })
}

fn prism_json(p: &PrismDecomposition) -> Result<PrismJson, String> {
    Ok(PrismJson {
        base: p.base.basis().iter().map(vec_to_i64).collect::<Result<_, _>>()?,
        axis: vec_to_i64(&p.axis)?,
        translate: vec_to_i64(&p.translate)?,
        offsets: p
            .offsets
            .iter()
            .map(|o| o.to_i64().ok_or_else(|| "offset too large".to_string()))
            .collect::<Result<_, _>>()?,
        foundation: p.foundation.iter().map(vec_to_i64).collect::<Result<_, _>>()?,
    })
}

fn bigint_rows(points: &[IntVec]) -> Result<Vec<Vec<i64>>, String> {
    points.iter().map(vec_to_i64).collect()
}

/// Assemble the report for a classification; the tiling, when present, is
/// referenced by the file name it was written under.
pub fn build_report(c: &Classification, tiling_file: Option<String>) -> Result<Report, String> {
    let mut witness = WitnessJson::default();
    let mut note = None;
    match &c.case {
        CaseReport::Case1 { g0, g1, prism, .. } => {
            witness.g0 = Some(vec_to_i64(g0)?);
            witness.g1 = Some(vec_to_i64(g1)?);
            witness.prism = Some(prism_json(prism)?);
        }
        CaseReport::Case2_1 {
            g0,
            scaling,
            line,
            prism,
            ..
        } => {
            witness.g0 = Some(vec_to_i64(g0)?);
            witness.scaling = Some(*scaling);
            witness.line = Some(LineJson {
                point: point_json(&line.0)?,
                direction: vec_to_i64(&line.1)?,
            });
            witness.prism = Some(prism_json(prism)?);
        }
        CaseReport::Case2_2 {
            g0,
            scaling,
            family,
            note: n,
        } => {
            witness.g0 = Some(vec_to_i64(g0)?);
            witness.scaling = Some(*scaling);
            witness.lines = Some(family_json(family)?);
            note = Some(n.to_string());
        }
        CaseReport::Case3 { families, note: n } => {
            witness.families = Some(
                families
                    .iter()
                    .map(|(g, fam)| {
                        Ok(FamilyEntryJson {
                            direction: vec_to_i64(g)?,
                            lines: family_json(fam)?,
                        })
                    })
                    .collect::<Result<_, String>>()?,
            );
            note = Some(n.to_string());
        }
    }
    Ok(Report {
        case: c.case.tag().to_string(),
        prime: c.prime,
        cluster: bigint_rows(c.cluster.points())?,
        delta: bigint_rows(c.delta.vectors())?,
        divisible_directions: bigint_rows(&c.divisible_dirs)?,
        witness,
        tiling_file,
        note,
    })
}

/// Pretty JSON with a trailing newline; the byte-stable output format for
/// every structured file this tool writes.
pub fn to_json_bytes<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

#[allow(dead_code)]
pub fn bigint_to_i64(b: &BigInt) -> Result<i64, String> {
    b.to_i64().ok_or_else(|| "integer too large for file format".to_string())
}
