//! Dense square complex matrices.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major `s x s` complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    s: usize,
    data: Vec<Complex64>,
}

/// File form: `{"s": 2, "re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]}`.
#[derive(Clone, Serialize, Deserialize)]
struct MatrixJson {
    s: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        for part in [&j.re, &j.im] {
            if part.len() != j.s {
                return Err(Error::NonSquare {
                    rows: part.len(),
                    cols: j.s,
                });
            }
            if let Some(row) = part.iter().find(|r| r.len() != j.s) {
                return Err(Error::NonSquare {
                    rows: j.s,
                    cols: row.len(),
                });
            }
        }
        let data: Vec<Complex64> =
            j.re.iter()
                .flatten()
                .zip(j.im.iter().flatten())
                .map(|(&r, &i)| Complex64::new(r, i))
                .collect();
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::Format("non-finite matrix entry".into()));
        }
        Ok(Self { s: j.s, data })
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        let part = |f: fn(&Complex64) -> f64| {
            m.data
                .chunks(m.s.max(1))
                .map(|row| row.iter().map(f).collect())
                .collect()
        };
        MatrixJson {
            s: m.s,
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }
}

impl ComplexMatrix {
    pub fn zeros(s: usize) -> Self {
        Self {
            s,
            data: vec![Complex64::new(0.0, 0.0); s * s],
        }
    }

    pub fn identity(s: usize) -> Self {
        let mut m = Self::zeros(s);
        for i in 0..s {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let s = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != s) {
            return Err(Error::NonSquare {
                rows: s,
                cols: r.len(),
            });
        }
        Ok(Self {
            s,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Permutation matrix sending basis state `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = Self::zeros(perm.len());
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real(&[&[h, h], &[h, -h]]).unwrap()
    }

    pub fn pauli_x() -> Self {
        Self::permutation(&[1, 0])
    }

    /// A single-qubit gate on qubit `q` (bit `q` of the basis index) of an
    /// `m`-qubit register.
    pub fn on_qubit(m: usize, q: usize, gate: &Self) -> Self {
        let high = Self::identity(1 << (m - q - 1));
        high.kron(gate).kron(&Self::identity(1 << q))
    }

    pub fn dim(&self) -> usize {
        self.s
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.s..(i + 1) * self.s]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.s..(i + 1) * self.s]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.s);
        for i in 0..self.s {
            for j in 0..self.s {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let s = self.s;
        let mut out = Self::zeros(s);
        for i in 0..s {
            for k in 0..s {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..s {
                    out.data[i * s + j] += a * other.data[k * s + j];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.s {
            return Err(Error::DimensionMismatch {
                expected: self.s,
                got: v.len(),
            });
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.s)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Kronecker product; `self` acts on the high-order index bits.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.s, other.s);
        let mut out = Self::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                for k in 0..b {
                    for l in 0..b {
                        out[(i * b + k, j * b + l)] = self[(i, j)] * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// `L_max` distance: the largest entrywise modulus of the difference.
    pub fn max_distance(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.s != other.s {
            return Err(Error::DimensionMismatch {
                expected: self.s,
                got: other.s,
            });
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.s + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.s + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix(s={})", self.s)?;
        for i in 0..self.s {
            let row: Vec<String> = self.row(i).iter().map(|z| format!("{z:.4}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Hermitian inner product `a . b = sum a_k conj(b_k)`.
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
