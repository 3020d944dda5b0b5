use itertools::Itertools;
use serde::Serialize;

use super::{Matrix, Scalar, Series};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TpVerdict {
    Accept,
    Reject,
}

/// A minor with 1-based row and column indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Minor<T> {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub det: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TpReport<T> {
    pub verdict: TpVerdict,
    pub order: usize,
    pub window: usize,
    pub minors_checked: u64,
    pub witness: Option<Minor<T>>,
}

/// Lower triangular `window × window` matrix with entries `s_{i-j}`.
pub fn toeplitz_matrix<T: Scalar>(s: &Series<T>, window: usize) -> Matrix<T> {
    Matrix::from_fn(window, window, |i, j| if i >= j { s.coeffs()[i - j].clone() } else { T::zero() })
}

/// All minors of order `≤ m` in the default `2m` window.
pub fn toeplitz_tp_check<T: Scalar + PartialOrd>(s: &Series<T>, m: usize) -> Result<TpReport<T>> {
    toeplitz_tp_check_window(s, m, 2 * m)
}

/// Exhaustive minor check. Minors are visited by size, then row set, then
/// column set (both lexicographic), so a reject carries the least negative
/// minor in that order. Acceptance only certifies the window.
pub fn toeplitz_tp_check_window<T: Scalar + PartialOrd>(s: &Series<T>, m: usize, window: usize) -> Result<TpReport<T>> {
    if m == 0 {
        return Err(Error::InvalidInput("minor order must be at least 1".into()));
    }
    if window < m {
        return Err(Error::InvalidInput(format!("window {window} smaller than order {m}")));
    }
    if s.order() < window {
        return Err(Error::InvalidInput(format!("series known to {} terms, window needs {window}", s.order())));
    }
    let t = toeplitz_matrix(s, window);
    let mut checked = 0u64;
    for size in 1..=m {
        for rows in (0..window).combinations(size) {
            for cols in (0..window).combinations(size) {
                checked += 1;
                let det = t.submatrix(&rows, &cols).determinant();
                if det < T::zero() {
                    let one_based = |v: Vec<usize>| v.into_iter().map(|i| i + 1).collect();
                    return Ok(TpReport {
                        verdict: TpVerdict::Reject,
                        order: m,
                        window,
                        minors_checked: checked,
                        witness: Some(Minor { rows: one_based(rows), cols: one_based(cols), det }),
                    });
                }
            }
        }
    }
    Ok(TpReport { verdict: TpVerdict::Accept, order: m, window, minors_checked: checked, witness: None })
}
