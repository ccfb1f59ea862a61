//! File formats and the report envelope: measures, matroids, graphs,
//! and the deterministic JSON wrapper every subcommand emits.
//!
//! Reports are byte-identical for identical (inputs, seed, version):
//! no timestamps, no hash-ordered maps, fixed field order.

use std::collections::BTreeSet;
use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rayleigh::{DiscreteMeasure, MatroidView};
use crate::scalar::{rational_to_string, Scalar};

pub const TOOL_NAME: &str = "hyperlace";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Envelope embedding version, config echo, and seed next to the result.
#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    /// "exact" or "tolerance(<eps>)"; which arithmetic backs the result.
    pub provenance: String,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(
        subcommand: &'static str,
        seed: Option<u64>,
        config: serde_json::Value,
        exact: bool,
        result: T,
    ) -> Self {
        Report {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            subcommand,
            seed,
            config,
            provenance: if exact {
                "exact".into()
            } else {
                format!("tolerance({:e})", crate::hyperbolic::FLOAT_BOUNDARY_TOL)
            },
            result,
        }
    }

    pub fn to_json_string(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SupportEntry {
    set: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prob: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SetSystemRepr {
    n: usize,
    support: Vec<SupportEntry>,
}

/// Measure JSON: `{"n": n, "support": [{"set": [...], "prob": "p/q"}]}`.
pub fn measure_to_json(mu: &DiscreteMeasure) -> Result<String> {
    let p = mu.partition_function();
    let mut entries = Vec::with_capacity(mu.support_len());
    for (mono, coef) in p.terms() {
        let set: Vec<usize> = mono
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect();
        let prob = match coef {
            Scalar::Rational(r) => rational_to_string(r),
            Scalar::Float(_) => return Err(Error::RationalRequired),
        };
        entries.push(SupportEntry {
            set,
            prob: Some(prob),
        });
    }
    let repr = SetSystemRepr {
        n: mu.ground_size(),
        support: entries,
    };
    let mut s = serde_json::to_string_pretty(&repr)?;
    s.push('\n');
    Ok(s)
}

pub fn measure_from_json(text: &str) -> Result<DiscreteMeasure> {
    let repr: SetSystemRepr = serde_json::from_str(text)?;
    let support = repr
        .support
        .into_iter()
        .map(|e| {
            let set: BTreeSet<usize> = e.set.into_iter().collect();
            let prob = e
                .prob
                .ok_or_else(|| Error::Parse("support entry without a probability".into()))?;
            let p: BigRational = match Scalar::parse(&prob)? {
                Scalar::Rational(r) => r,
                Scalar::Float(_) => {
                    return Err(Error::Parse("probabilities must be exact rationals".into()))
                }
            };
            Ok((set, p))
        })
        .collect::<Result<Vec<_>>>()?;
    DiscreteMeasure::new(repr.n, support)
}

/// Matroid JSON mirrors the measure format without probabilities.
pub fn matroid_from_json(text: &str) -> Result<MatroidView> {
    let repr: SetSystemRepr = serde_json::from_str(text)?;
    let mut bases = Vec::with_capacity(repr.support.len());
    for e in repr.support {
        let mut mask = 0u32;
        for i in e.set {
            if i >= repr.n {
                return Err(Error::Parse(format!("element {i} outside ground set")));
            }
            mask |= 1 << i;
        }
        bases.push(mask);
    }
    MatroidView::from_bases(repr.n, bases)
}

/// Edge list: one `u v` pair per line, 0-indexed; blank lines and `#`
/// comments skipped.
pub fn edges_from_text(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut edges = Vec::new();
    let mut max_v = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize> {
            tok.ok_or_else(|| Error::Parse(format!("line {}: expected `u v`", lineno + 1)))?
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad vertex index", lineno + 1)))
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        max_v = max_v.max(u).max(v);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(Error::Parse("no edges in the file".into()));
    }
    Ok((max_v + 1, edges))
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))
}
