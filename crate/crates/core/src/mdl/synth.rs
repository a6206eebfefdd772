use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Structure of a synthetic precision matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrecisionFamily {
    /// Unit diagonal, 0.5 between neighbors, 0.4 closing the ring.
    Cycle,
    /// Unit diagonal, 0.5 between neighbors.
    Ar1,
    /// Entries `U(0.4, 0.8)` with probability `2/p`, shifted to be PD.
    ErdosRenyi,
    /// Sparse background plus two dense hub rows, shifted to be PD.
    Hub,
}

impl PrecisionFamily {
    pub const ALL: [PrecisionFamily; 4] = [
        PrecisionFamily::Cycle,
        PrecisionFamily::Ar1,
        PrecisionFamily::ErdosRenyi,
        PrecisionFamily::Hub,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PrecisionFamily::Cycle => "cycle",
            PrecisionFamily::Ar1 => "ar1",
            PrecisionFamily::ErdosRenyi => "erdos-renyi",
            PrecisionFamily::Hub => "hub",
        }
    }
}

impl std::str::FromStr for PrecisionFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cycle" => Ok(Self::Cycle),
            "ar1" | "ar(1)" => Ok(Self::Ar1),
            "erdos-renyi" | "er" => Ok(Self::ErdosRenyi),
            "hub" => Ok(Self::Hub),
            other => Err(Error::Config(format!("unknown precision family `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionSpec {
    pub family: PrecisionFamily,
    pub p: usize,
    pub seed: u64,
}

/// Adds `(|λ_min| + 0.05) I` to a zero-diagonal symmetric matrix.
fn shift_to_pd(mut m: DMatrix<f64>) -> DMatrix<f64> {
    let rho = SymmetricEigen::new(m.clone()).eigenvalues.min().abs();
    let delta = rho + 0.05;
    for i in 0..m.nrows() {
        m[(i, i)] += delta;
    }
    m
}

pub fn generate_precision(spec: PrecisionSpec) -> Result<DMatrix<f64>> {
    let p = spec.p;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let omega = match spec.family {
        PrecisionFamily::Cycle | PrecisionFamily::Ar1 => {
            if p < 3 && spec.family == PrecisionFamily::Cycle || p < 2 {
                return Err(Error::Domain(format!("{} needs more variables than {p}", spec.family.name())));
            }
            let mut m = DMatrix::<f64>::identity(p, p);
            for i in 1..p {
                m[(i, i - 1)] = 0.5;
                m[(i - 1, i)] = 0.5;
            }
            if spec.family == PrecisionFamily::Cycle {
                m[(0, p - 1)] = 0.4;
                m[(p - 1, 0)] = 0.4;
            }
            m
        }
        PrecisionFamily::ErdosRenyi => {
            if p < 2 {
                return Err(Error::Domain("ER precision needs at least 2 variables".into()));
            }
            let prob = (2.0 / p as f64).min(1.0);
            let mut m = DMatrix::<f64>::zeros(p, p);
            for i in 0..p {
                for j in i + 1..p {
                    if rng.random_bool(prob) {
                        let v = rng.random_range(0.4..0.8);
                        m[(i, j)] = v;
                        m[(j, i)] = v;
                    }
                }
            }
            shift_to_pd(m)
        }
        PrecisionFamily::Hub => {
            if p < 3 {
                return Err(Error::Domain("hub precision needs at least 3 variables".into()));
            }
            let mut a = DMatrix::<f64>::zeros(p, p);
            for i in 0..p {
                for j in 0..p {
                    if i != j && rng.random_bool(0.01) {
                        a[(i, j)] = 1.0;
                    }
                }
            }
            let first = rng.random_range(0..p);
            let second = (first + rng.random_range(1..p)) % p;
            for h in [first, second] {
                for k in 0..p {
                    if k == h {
                        continue;
                    }
                    a[(h, k)] = f64::from(u8::from(rng.random_bool(0.7)));
                    a[(k, h)] = f64::from(u8::from(rng.random_bool(0.7)));
                }
            }
            for v in a.iter_mut() {
                if *v != 0.0 {
                    let mag = rng.random_range(0.25..0.75);
                    *v = if rng.random_bool(0.5) { mag } else { -mag };
                }
            }
            shift_to_pd((&a + a.transpose()) * 0.5)
        }
    };
    Ok(omega)
}

/// `n` zero-mean samples (rows) with covariance `omega⁻¹`: if
/// `omega = L Lᵀ` then `x = L⁻ᵀ z` for standard normal `z`.
pub fn sample_gaussian(omega: &DMatrix<f64>, n: usize, seed: u64) -> Result<DMatrix<f64>> {
    let p = omega.nrows();
    let chol = omega
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite("precision matrix".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = DMatrix::from_fn(p, n, |_, _| StandardNormal.sample(&mut rng));
    let lt = chol.l().transpose();
    let x = lt
        .solve_upper_triangular(&z)
        .ok_or_else(|| Error::NotPositiveDefinite("precision factor".into()))?;
    Ok(x.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{graph_from_precision, Graph, DEFAULT_PRECISION_TOL};
    use crate::mdl::sample_covariance;

    fn spec(family: PrecisionFamily, p: usize) -> PrecisionSpec {
        PrecisionSpec { family, p, seed: 7 }
    }

    #[test]
    fn cycle_four() {
        let m = generate_precision(spec(PrecisionFamily::Cycle, 4)).unwrap();
        let want = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.5, 0.0, 0.4, //
                0.5, 1.0, 0.5, 0.0, //
                0.0, 0.5, 1.0, 0.5, //
                0.4, 0.0, 0.5, 1.0,
            ],
        );
        assert_eq!(m, want);
        let g = graph_from_precision(&m, DEFAULT_PRECISION_TOL).unwrap();
        assert_eq!(g, Graph::cycle(4));
    }

    #[test]
    fn ar1_is_a_path() {
        let m = generate_precision(spec(PrecisionFamily::Ar1, 4)).unwrap();
        let g = graph_from_precision(&m, DEFAULT_PRECISION_TOL).unwrap();
        assert_eq!(g, Graph::path(4));
    }

    #[test]
    fn random_families_are_pd_and_reproducible() {
        for family in [PrecisionFamily::ErdosRenyi, PrecisionFamily::Hub] {
            let a = generate_precision(spec(family, 50)).unwrap();
            assert_eq!(a, generate_precision(spec(family, 50)).unwrap());
            let min = SymmetricEigen::new(a.clone()).eigenvalues.min();
            assert!((min - 0.05).abs() < 1e-9, "{min}");
            assert_eq!(a, a.transpose());
        }
    }

    #[test]
    fn hubs_are_dense() {
        let m = generate_precision(spec(PrecisionFamily::Hub, 50)).unwrap();
        let g = graph_from_precision(&m, DEFAULT_PRECISION_TOL).unwrap();
        assert!(g.max_degree() > 25, "{}", g.max_degree());
    }

    #[test]
    fn identity_samples_have_identity_covariance() {
        let x = sample_gaussian(&DMatrix::identity(5, 5), 100_000, 1).unwrap();
        let s = sample_covariance(&x);
        assert!((s - DMatrix::<f64>::identity(5, 5)).amax() < 0.03);
    }

    #[test]
    fn degenerate_specs_rejected() {
        assert!(generate_precision(spec(PrecisionFamily::Cycle, 2)).is_err());
        assert!(generate_precision(spec(PrecisionFamily::Hub, 1)).is_err());
        assert!(sample_gaussian(&DMatrix::zeros(2, 2), 5, 0).is_err());
    }
}
