//! Serialization: the matrix JSON interchange format, solver/certificate
//! JSON payloads, and the experiment CSV schema.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, Matrix};

/// One matrix entry on the wire: a bare real number or an [re, im] pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum WireEntry {
    Real(f64),
    Pair([f64; 2]),
}

impl From<WireEntry> for Complex64 {
    fn from(e: WireEntry) -> Self {
        match e {
            WireEntry::Real(x) => Complex64::new(x, 0.0),
            WireEntry::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct WireMatrix {
    n: usize,
    entries: Vec<Vec<WireEntry>>,
}

/// Parses the matrix JSON format {"n": int, "entries": [[entry, ...], ...]}
/// with row-major entries, each a bare number or an [re, im] pair.
pub fn parse_matrix_json(text: &str) -> Result<Matrix> {
    let wire: WireMatrix = serde_json::from_str(text)?;
    if wire.entries.len() != wire.n {
        return Err(Error::InvalidArgument(format!(
            "matrix JSON declares n = {} but has {} rows",
            wire.n,
            wire.entries.len()
        )));
    }
    let mut rows = Vec::with_capacity(wire.n);
    for (i, row) in wire.entries.iter().enumerate() {
        if row.len() != wire.n {
            return Err(Error::InvalidArgument(format!(
                "matrix JSON row {i} has {} entries, expected {}",
                row.len(),
                wire.n
            )));
        }
        rows.push(row.iter().map(|&e| Complex64::from(e)).collect::<Vec<_>>());
    }
    Matrix::from_rows(&rows)
}

/// Parses and validates a Hermitian matrix from the JSON format.
pub fn parse_hermitian_json(text: &str) -> Result<HermitianMatrix> {
    HermitianMatrix::new(parse_matrix_json(text)?)
}

/// Canonical matrix JSON emission: every entry as an [re, im] pair.
pub fn matrix_to_json(m: &Matrix) -> String {
    let n = m.dim();
    let entries: Vec<Vec<WireEntry>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let z = m.get(i, j);
                    WireEntry::Pair([z.re, z.im])
                })
                .collect()
        })
        .collect();
    serde_json::to_string_pretty(&WireMatrix { n, entries }).expect("matrix JSON serialization")
}

/// Relaxation result payload.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionJson {
    pub log_rel: f64,
    pub gap_ratio: f64,
    pub iterations: u64,
    pub certificate: DiagonalCertificateJson,
}

/// Diagonal upper-bound certificate payload.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagonalCertificateJson {
    pub d: Vec<f64>,
    pub lambda: f64,
    pub validated: bool,
}

/// Audit record of the rank-reduction procedure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionTraceJson {
    pub initial_rank: usize,
    pub final_rank: usize,
    pub steps: Vec<ReductionStepJson>,
    pub objective_drift: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionStepJson {
    pub null_direction_residual: f64,
    pub boundary_step: f64,
}

/// Certified-bounds payload emitted by the certify pipeline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub log_lower: f64,
    pub log_upper: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub log_per_exact: Option<f64>,
    pub witness_y: Vec<[f64; 2]>,
    pub rank_r: usize,
    pub a_priori_log_factor: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reduction: Option<ReductionTraceJson>,
}

/// Monte Carlo estimate payload.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateJson {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub log_domain: bool,
}

/// One row of the rank-growth experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub seed: u64,
    pub rank_solver: usize,
    pub rank_reduced: usize,
    pub sqrt_bound: f64,
    pub log_rel: f64,
    pub log_lower: f64,
    pub log_per_exact: Option<f64>,
}

/// CSV header, stable schema.
pub const EXPERIMENT_CSV_HEADER: &str =
    "n,seed,rank_solver,rank_reduced,sqrt_bound,log_rel,log_lower,log_per_exact";

impl ExperimentRow {
    /// Formats one CSV line; the optional exact value becomes an empty field.
    pub fn to_csv_line(&self) -> String {
        let exact = self.log_per_exact.map_or(String::new(), |v| v.to_string());
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.seed,
            self.rank_solver,
            self.rank_reduced,
            self.sqrt_bound,
            self.log_rel,
            self.log_lower,
            exact
        )
    }
}

/// Renders rows as a complete CSV document with the stable header.
pub fn experiment_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(EXPERIMENT_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}
