//! Instance construction for experiments and the CLI: seeded random
//! ensembles and the small structured families used throughout the test
//! suites. Every random kind is deterministic given its seed.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::hermitian::{GramFactor, HermitianMatrix};
use crate::io::parse_hermitian_json;
use crate::rng::{complex_standard_normal, substream_rng};

/// Description of a matrix instance; `build_instance` realizes it.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSpec {
    /// Matrix JSON loaded from a file path.
    File { path: String },
    /// A = V†V with every entry of the n x n factor V a standard real
    /// Gaussian draw.
    RandomGaussian { n: usize, seed: u64 },
    /// Hermitian circulant given by its first row (entries real on the
    /// wire); rejected at construction if the row is not conjugate-
    /// symmetric.
    Circulant { first_row: Vec<f64> },
    /// Diagonal matrix with the given nonnegative entries.
    Diagonal { d: Vec<f64> },
    /// Rank-1 matrix vv† from a seeded complex Gaussian vector.
    Rank1 { n: usize, seed: u64 },
}

/// Realizes an instance description as a validated Hermitian matrix.
/// Random kinds draw from dedicated substreams, so results are identical
/// across runs and platforms for a fixed seed.
pub fn build_instance(spec: &InstanceSpec) -> Result<HermitianMatrix> {
    match spec {
        InstanceSpec::File { path } => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidArgument(format!("cannot read {path}: {e}"))
            })?;
            parse_hermitian_json(&text)
        }
        InstanceSpec::RandomGaussian { n, seed } => {
            if *n == 0 {
                return Err(Error::InvalidArgument("instance dimension must be >= 1".into()));
            }
            let mut rng = substream_rng(*seed, 0);
            let cols: Vec<Vec<Complex64>> = (0..*n)
                .map(|_| {
                    (0..*n)
                        .map(|_| {
                            let x: f64 = rng.sample(StandardNormal);
                            Complex64::new(x, 0.0)
                        })
                        .collect()
                })
                .collect();
            Ok(GramFactor::from_columns(cols)?.gram_matrix())
        }
        InstanceSpec::Circulant { first_row } => {
            let n = first_row.len();
            if n == 0 {
                return Err(Error::InvalidArgument("circulant first row is empty".into()));
            }
            let rows: Vec<Vec<Complex64>> = (0..n)
                .map(|i| {
                    (0..n).map(|j| Complex64::new(first_row[(j + n - i) % n], 0.0)).collect()
                })
                .collect();
            HermitianMatrix::from_rows(&rows)
        }
        InstanceSpec::Diagonal { d } => {
            if d.is_empty() {
                return Err(Error::InvalidArgument("diagonal entry list is empty".into()));
            }
            Ok(HermitianMatrix::diagonal(d))
        }
        InstanceSpec::Rank1 { n, seed } => {
            if *n == 0 {
                return Err(Error::InvalidArgument("instance dimension must be >= 1".into()));
            }
            let mut rng = substream_rng(*seed, 0);
            let v: Vec<Complex64> = (0..*n).map(|_| complex_standard_normal(&mut rng)).collect();
            HermitianMatrix::from_factor_columns(*n, &[v])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::check_hpsd;
    use crate::rank_reduction::numeric_rank;

    #[test]
    fn diagonal_spec_builds_the_diagonal() {
        let a = build_instance(&InstanceSpec::Diagonal { d: vec![1.0, 2.0, 3.0] }).unwrap();
        let m = a.matrix();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { (i + 1) as f64 } else { 0.0 };
                assert_eq!(m.get(i, j), Complex64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn circulant_spec_builds_the_running_example() {
        let a =
            build_instance(&InstanceSpec::Circulant { first_row: vec![2.0, 1.0, 1.0] }).unwrap();
        let m = a.matrix();
        assert_eq!(m.get(0, 0), Complex64::new(2.0, 0.0));
        assert_eq!(m.get(1, 0), Complex64::new(1.0, 0.0));
        assert_eq!(m.get(2, 1), Complex64::new(1.0, 0.0));
        assert_eq!(m.get(0, 2), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn asymmetric_circulant_rows_are_rejected() {
        assert!(build_instance(&InstanceSpec::Circulant { first_row: vec![1.0, 0.9, 0.1] })
            .is_err());
    }

    #[test]
    fn gaussian_instances_are_real_psd_and_deterministic() {
        let spec = InstanceSpec::RandomGaussian { n: 4, seed: 7 };
        let a = build_instance(&spec).unwrap();
        let b = build_instance(&spec).unwrap();
        assert_eq!(a, b);
        let report = check_hpsd(&a, 1e-9).unwrap();
        assert!(report.is_psd);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(a.matrix().get(i, j).im, 0.0);
            }
        }
        // Different seeds give different matrices.
        let c = build_instance(&InstanceSpec::RandomGaussian { n: 4, seed: 8 }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rank_one_spec_has_rank_one() {
        let a = build_instance(&InstanceSpec::Rank1 { n: 6, seed: 3 }).unwrap();
        assert_eq!(numeric_rank(&a, 1e-9).unwrap(), 1);
        assert!(check_hpsd(&a, 1e-9).unwrap().is_psd);
    }

    #[test]
    fn file_spec_round_trips_through_json() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let text = r#"{"n": 2, "entries": [[2.0, [1.0, 0.5]], [[1.0, -0.5], 3.0]]}"#;
        std::fs::write(&path, text).unwrap();
        let a = build_instance(&InstanceSpec::File { path: path.display().to_string() })
            .unwrap();
        assert_eq!(a.matrix().get(0, 1), Complex64::new(1.0, 0.5));
        assert_eq!(a.matrix().get(1, 0), Complex64::new(1.0, -0.5));
        assert_eq!(a.matrix().get(1, 1), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn missing_file_is_an_input_error() {
        let r = build_instance(&InstanceSpec::File { path: "/nonexistent/m.json".into() });
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }
}
