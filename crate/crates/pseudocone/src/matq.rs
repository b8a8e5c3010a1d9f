//! Exact-rational matrices and the category `MatQ_N`: objects are natural
//! numbers `0..=N`, morphisms `m → n` are `n×m` rational matrices, with
//! composition by multiplication.  Every object is self-dual; the standard
//! evaluation/coevaluation satisfy the triangle identities under the
//! Kronecker tensor.

use crate::report::{EngineError, Report, Result};
use num::rational::BigRational;
use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub type Q = BigRational;

/// Parses "p/q" or "p" into an exact rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let mk = |t: &str| {
        BigInt::from_str(t.trim())
            .map_err(|_| EngineError::SchemaError(format!("bad rational: {s}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let den = mk(q)?;
            if den.is_zero() {
                return Err(EngineError::SchemaError(format!("zero denominator: {s}")));
            }
            Ok(Q::new(mk(p)?, den))
        }
        None => Ok(Q::from_integer(mk(s)?)),
    }
}

/// Prints a rational canonically: "p" for integers, "p/q" otherwise.
pub fn show_q(q: &Q) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A dense exact-rational matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Q>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<Q>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(EngineError::MalformedTable(format!(
                "matrix data length {} ≠ {rows}×{cols}",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn scalar(n: usize, q: &Q) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = q.clone();
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Mat::identity(self.rows)
    }

    /// Matrix product `self · other` (`other` applied first as a map).
    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(EngineError::ShapeMismatch(format!(
                "{}×{} · {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Q::zero();
                for k in 0..self.cols {
                    acc += self.at(i, k) * other.at(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Q) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * q).collect(),
        }
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(EngineError::ShapeMismatch("matrix addition".into()));
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn trace(&self) -> Result<Q> {
        if self.rows != self.cols {
            return Err(EngineError::ShapeMismatch("trace of a non-square matrix".into()));
        }
        let mut acc = Q::zero();
        for i in 0..self.rows {
            acc += self.at(i, i);
        }
        Ok(acc)
    }

    /// Inverse by Gauss–Jordan elimination, exact; `None` if singular.
    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                    inv.data.swap(col * n + j, pivot * n + j);
                }
            }
            let pv = a.at(col, col).clone();
            for j in 0..n {
                let v = a.at(col, j) / &pv;
                a.set(col, j, v);
                let v = inv.at(col, j) / &pv;
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for j in 0..n {
                    let v = a.at(r, j) - &factor * a.at(col, j);
                    a.set(r, j, v);
                    let v = inv.at(r, j) - &factor * inv.at(col, j);
                    inv.set(r, j, v);
                }
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_some()
    }

    /// Block-diagonal sum.
    pub fn blockdiag(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.at(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product.
    pub fn kronecker(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(
                            i * other.rows + k,
                            j * other.cols + l,
                            self.at(i, j) * other.at(k, l),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    /// Row-major rational strings, the serialization format.
    pub fn to_strings(&self) -> Vec<String> {
        self.data.iter().map(show_q).collect()
    }

    pub fn from_strings(rows: usize, cols: usize, data: &[String]) -> Result<Mat> {
        let parsed: Result<Vec<Q>> = data.iter().map(|s| parse_q(s)).collect();
        Mat::new(rows, cols, parsed?)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| show_q(self.at(i, j))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Tensor configuration for the matrix fibres.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatTensor {
    DirectSum,
    Kronecker,
}

/// The standard self-dual structure on `n` under the Kronecker tensor:
/// evaluation `n⊗n → 1` and coevaluation `1 → n⊗n` via the diagonal basis.
pub fn evaluation(n: usize) -> Mat {
    let mut m = Mat::zeros(1, n * n);
    for i in 0..n {
        m.set(0, i * n + i, Q::one());
    }
    m
}

pub fn coevaluation(n: usize) -> Mat {
    evaluation(n).transpose()
}

/// Verifies the dualizability triangle identities for objects `0..=cap`:
/// `(ev ⊗ id) ∘ (id ⊗ coev) = id` and `(id ⊗ ev) ∘ (coev ⊗ id) = id`.
pub fn check_dualizable(cap: usize) -> Report {
    let mut rep = Report::ok();
    for n in 0..=cap {
        let idn = Mat::identity(n);
        let ev = evaluation(n);
        let coev = coevaluation(n);
        let left = ev
            .kronecker(&idn)
            .mul(&idn.kronecker(&coev))
            .expect("shape");
        if left != idn {
            rep.push("triangle-left", format!("object {n}"));
        }
        let right = idn
            .kronecker(&ev)
            .mul(&coev.kronecker(&idn))
            .expect("shape");
        if right != idn {
            rep.push("triangle-right", format!("object {n}"));
        }
    }
    rep
}
