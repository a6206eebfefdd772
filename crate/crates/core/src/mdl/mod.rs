//! Gaussian graphical model selection by minimum description length: a
//! graphical lasso path, graph codelengths from the coders, and predictive
//! codelengths of the data under each graph.

mod dempster;
mod glasso;
mod predictive;
mod select;
mod synth;

use nalgebra::DMatrix;

pub use dempster::{dempster_complete, dempster_complete_from, Completion, DempsterOptions};
pub use glasso::{graphical_lasso, kkt_residual, GlassoFit, GlassoOptions};
pub use predictive::{
    default_stride, default_warmup, predictive_mdl, standard_normal_bits, PredictiveOptions,
    PredictiveReport, SHRINKAGE,
};
pub use select::{
    default_grid, f1_score, lambda_grid, lambda_path, select_model, LambdaPath, PathEntry,
    SelectOptions, Selection,
};
pub use synth::{generate_precision, sample_gaussian, PrecisionFamily, PrecisionSpec};

use crate::error::{Error, Result};

/// `XᵀX / N` for observations in the rows of `x`; the mean is taken as zero.
pub fn sample_covariance(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows().max(1) as f64;
    x.transpose() * x / n
}

/// Divides every column by its root mean square, so that
/// [`sample_covariance`] becomes a correlation matrix. All-zero columns are
/// left alone.
pub fn standardize(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows().max(1) as f64;
    let mut out = x.clone();
    for mut col in out.column_iter_mut() {
        let rms = (col.norm_squared() / n).sqrt();
        if rms > 0.0 {
            col /= rms;
        }
    }
    out
}

/// Parses a numeric matrix, one observation per line, values separated by
/// commas and/or whitespace. Blank lines and `#` comments are skipped, as
/// is a first line that is not numeric (a header).
pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut first = true;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: std::result::Result<Vec<f64>, _> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .map(str::parse::<f64>)
            .collect();
        let was_first = std::mem::replace(&mut first, false);
        match fields {
            Ok(v) => {
                if let Some(prev) = rows.first() {
                    if prev.len() != v.len() {
                        return Err(Error::Parse {
                            line: i + 1,
                            msg: format!("expected {} columns, found {}", prev.len(), v.len()),
                        });
                    }
                }
                rows.push(v);
            }
            Err(_) if was_first => continue,
            Err(e) => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })
            }
        }
    }
    let p = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || p == 0 {
        return Err(Error::Parse {
            line: 0,
            msg: "no numeric rows".into(),
        });
    }
    Ok(DMatrix::from_fn(rows.len(), p, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_csv_and_whitespace() {
        let m = parse_matrix("a,b\n1,2\n# note\n3 4\n\n5,\t6\n").unwrap();
        assert_eq!(m, DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]));
        assert!(parse_matrix("1,2\n3\n").is_err());
        assert!(parse_matrix("1,2\nx,y\n").is_err());
        assert!(parse_matrix("").is_err());
    }

    #[test]
    fn standardized_covariance_has_unit_diagonal() {
        let x = DMatrix::from_row_slice(3, 3, &[1.0, 20.0, 0.0, -2.0, 5.0, 0.0, 3.0, -40.0, 0.0]);
        let s = sample_covariance(&standardize(&x));
        assert!((s[(0, 0)] - 1.0).abs() < 1e-12 && (s[(1, 1)] - 1.0).abs() < 1e-12);
        assert_eq!(s[(2, 2)], 0.0);
        assert!(s[(0, 1)].abs() <= 1.0);
    }

    #[test]
    fn covariance_is_biased() {
        let x = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let s = sample_covariance(&x);
        assert_eq!(s, DMatrix::from_row_slice(2, 2, &[5.0, 7.0, 7.0, 10.0]));
    }
}
