use serde::Deserialize;

use super::{ControlAffineSystem, StorageFunction, SystemError};
use crate::{Matrix, Vector};

/// `ẋ = Ax + Bu`, `y = Cx`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
}

/// `½xᵀPx` with symmetric `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticStorage {
    pub p: Matrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearRepr {
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    c: Vec<Vec<f64>>,
    #[serde(default)]
    p: Option<Vec<Vec<f64>>>,
}

fn rows_to_matrix(name: &str, rows: &[Vec<f64>]) -> Result<Matrix, SystemError> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(SystemError::InvalidParameter(format!("matrix `{name}` must be a non-empty rectangular array")));
    }
    Ok(Matrix::from_fn(r, c, |i, j| rows[i][j]))
}

impl LinearSystem {
    /// Requires square `A` (n×n), `B` n×m and `C` m×n.
    pub fn new(a: Matrix, b: Matrix, c: Matrix) -> Result<Self, SystemError> {
        let n = a.nrows();
        if a.ncols() != n || n == 0 {
            return Err(SystemError::InvalidParameter("A must be square and non-empty".into()));
        }
        if b.nrows() != n {
            return Err(SystemError::DimensionMismatch { expected: n, got: b.nrows() });
        }
        let m = b.ncols();
        if c.ncols() != n {
            return Err(SystemError::DimensionMismatch { expected: n, got: c.ncols() });
        }
        if c.nrows() != m {
            return Err(SystemError::DimensionMismatch { expected: m, got: c.nrows() });
        }
        Ok(Self { a, b, c })
    }

    /// Parses `{"a": [[..]], "b": [[..]], "c": [[..]], "p": [[..]]?}`.
    pub fn from_json(text: &str) -> Result<(Self, Option<QuadraticStorage>), SystemError> {
        let repr: LinearRepr =
            serde_json::from_str(text).map_err(|e| SystemError::InvalidParameter(format!("linear plant: {e}")))?;
        let sys =
            Self::new(rows_to_matrix("a", &repr.a)?, rows_to_matrix("b", &repr.b)?, rows_to_matrix("c", &repr.c)?)?;
        let storage = repr.p.map(|p| QuadraticStorage::new(rows_to_matrix("p", &p)?, sys.a.nrows())).transpose()?;
        Ok((sys, storage))
    }
}

impl QuadraticStorage {
    pub fn new(p: Matrix, n: usize) -> Result<Self, SystemError> {
        if p.nrows() != n || p.ncols() != n {
            return Err(SystemError::DimensionMismatch { expected: n, got: p.nrows() });
        }
        let asym = (&p - p.transpose()).amax();
        if asym > 1e-12 * p.amax().max(1.0) {
            return Err(SystemError::InvalidParameter("P must be symmetric".into()));
        }
        Ok(Self { p })
    }
}

impl ControlAffineSystem for LinearSystem {
    fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    fn input_dim(&self) -> usize {
        self.b.ncols()
    }

    fn drift(&self, x: &Vector) -> Vector {
        &self.a * x
    }

    fn input_matrix(&self, _x: &Vector) -> Matrix {
        self.b.clone()
    }

    fn output(&self, x: &Vector) -> Vector {
        &self.c * x
    }
}

impl StorageFunction for QuadraticStorage {
    fn value(&self, x: &Vector) -> f64 {
        0.5 * x.dot(&(&self.p * x))
    }

    fn gradient(&self, x: &Vector) -> Vector {
        &self.p * x
    }
}
