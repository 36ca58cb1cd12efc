//! Dense row-major complex matrix.
//!
//! Zero-sized shapes are allowed throughout: a subspace of dimension zero is
//! carried as an `n × 0` basis and the blocks it induces have a zero extent.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{cone, czero, Real};

#[derive(Clone, PartialEq)]
pub struct Matrix<R: Real = f64> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<R>>,
}

impl<R: Real> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![czero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<R>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major complex entries, rejecting non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<R>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "data length {} does not match rows*cols = {}",
                data.len(),
                rows * cols
            )));
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid(format!("data[{k}] is not finite")));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a real-valued matrix from row-major entries.
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_real(rows: usize, cols: usize, data: &[R]) -> Self {
        assert_eq!(data.len(), rows * cols, "from_real: wrong data length");
        Self {
            rows,
            cols,
            data: data.iter().map(|&x| Complex::new(x, R::zero())).collect(),
        }
    }

    pub fn diag_real(values: &[R]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex::new(v, R::zero());
        }
        m
    }

    /// Stacks equally sized column vectors side by side.
    pub fn from_columns(rows: usize, columns: &[Vec<Complex<R>>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "from_columns: ragged column {j}");
            for (i, &z) in col.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    pub fn column_vector(v: &[Complex<R>]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex<R>] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn column(&self, j: usize) -> Vec<Complex<R>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Complex<R>>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: R) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: Complex<R>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul: {}x{} times {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        let n = rhs.cols;
        for i in 0..self.rows {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == R::zero() && a.im == R::zero() {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<R>]) -> Vec<Complex<R>> {
        assert_eq!(self.cols, v.len(), "mul_vec: dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).fold(czero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// Copy of the `nr × nc` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of range");
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Column subset `[c0, c0 + nc)`.
    pub fn column_range(&self, c0: usize, nc: usize) -> Self {
        self.block(0, c0, self.rows, nc)
    }

    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "hstack: row mismatch");
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                rhs[(i, j - self.cols)]
            }
        })
    }

    pub fn vstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.cols, "vstack: column mismatch");
        Self::from_fn(self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)]
            } else {
                rhs[(i - self.rows, j)]
            }
        })
    }

    /// Assembles `[[a, b], [c, d]]`; block shapes must be conformal.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.hstack(b).vstack(&c.hstack(d))
    }

    pub fn fro_norm(&self) -> R {
        self.data.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt()
    }

    pub fn max_abs(&self) -> R {
        self.data.iter().map(|z| z.norm()).fold(R::zero(), R::max)
    }

    /// Spectral norm (largest singular value).
    pub fn norm(&self) -> R {
        crate::numerics::operator_norm(self)
    }

    /// Converts the entries to another precision.
    pub fn cast<S: Real>(&self) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(S::lit(z.re.to_f64()), S::lit(z.im.to_f64())))
                .collect(),
        }
    }
}

impl<R: Real> Index<(usize, usize)> for Matrix<R> {
    type Output = Complex<R>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<R: Real> IndexMut<(usize, usize)> for Matrix<R> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<R: Real> Mul for &Matrix<R> {
    type Output = Matrix<R>;

    fn mul(self, rhs: &Matrix<R>) -> Matrix<R> {
        self.matmul(rhs)
    }
}

impl<R: Real> Add for &Matrix<R> {
    type Output = Matrix<R>;

    fn add(self, rhs: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.shape(), rhs.shape(), "add: shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<R: Real> Sub for &Matrix<R> {
    type Output = Matrix<R>;

    fn sub(self, rhs: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.shape(), rhs.shape(), "sub: shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<R: Real> Neg for &Matrix<R> {
    type Output = Matrix<R>;

    fn neg(self) -> Matrix<R> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| -a).collect(),
        }
    }
}

impl<R: Real> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                if z.im == R::zero() {
                    write!(f, "{:>12.6} ", z.re)?;
                } else {
                    write!(f, "{:>12.6}{:+.6}i ", z.re, z.im)?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// JSON schema: {"rows": r, "cols": c, "complex": bool, "data": [...]}, row-major,
// entries are bare reals when complex = false and [re, im] pairs otherwise.

#[derive(Serialize)]
struct MatrixFileOut<'a, R: Real> {
    rows: usize,
    cols: usize,
    complex: bool,
    data: EntriesOut<'a, R>,
}

struct EntriesOut<'a, R: Real> {
    complex: bool,
    data: &'a [Complex<R>],
}

impl<R: Real> Serialize for EntriesOut<'_, R> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.data.len()))?;
        for z in self.data {
            if self.complex {
                seq.serialize_element(&[z.re, z.im])?;
            } else {
                seq.serialize_element(&z.re)?;
            }
        }
        seq.end()
    }
}

impl<R: Real> Serialize for Matrix<R> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let complex = self.data.iter().any(|z| z.im != R::zero());
        MatrixFileOut {
            rows: self.rows,
            cols: self.cols,
            complex,
            data: EntriesOut {
                complex,
                data: &self.data,
            },
        }
        .serialize(serializer)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EntryIn<R> {
    Real(R),
    Pair([R; 2]),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFileIn<R> {
    rows: usize,
    cols: usize,
    #[serde(default)]
    complex: bool,
    data: Vec<EntryIn<R>>,
}

impl<R: Real> TryFrom<MatrixFileIn<R>> for Matrix<R> {
    type Error = Error;

    fn try_from(file: MatrixFileIn<R>) -> Result<Self> {
        let mut data = Vec::with_capacity(file.data.len());
        for (k, entry) in file.data.into_iter().enumerate() {
            data.push(match (file.complex, entry) {
                (false, EntryIn::Real(x)) => Complex::new(x, R::zero()),
                (true, EntryIn::Pair([re, im])) => Complex::new(re, im),
                (false, EntryIn::Pair(_)) => {
                    return Err(Error::invalid(format!(
                        "data[{k}]: [re, im] pair found but \"complex\" is false"
                    )))
                }
                (true, EntryIn::Real(_)) => {
                    return Err(Error::invalid(format!(
                        "data[{k}]: expected an [re, im] pair since \"complex\" is true"
                    )))
                }
            });
        }
        Matrix::from_vec(file.rows, file.cols, data)
    }
}

impl<'de, R: Real> Deserialize<'de> for Matrix<R> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = MatrixFileIn::<R>::deserialize(deserializer)?;
        Matrix::try_from(file).map_err(D::Error::custom)
    }
}
