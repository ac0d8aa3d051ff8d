//! The character matrix `V_n` of `(Z/m)^{n-1}` over `F_q` and its inverse.

use serde::Serialize;

use super::KummerError;
use crate::funcfield::{Elem, FiniteField};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Elem>>,
}

impl Matrix {
    pub fn identity(n: usize) -> Matrix {
        Matrix { rows: n, cols: n, data: (0..n).map(|i| (0..n).map(|j| (i == j) as Elem).collect()).collect() }
    }

    pub fn mul(&self, o: &Matrix, f: &FiniteField) -> Matrix {
        let data = (0..self.rows)
            .map(|i| {
                (0..o.cols)
                    .map(|j| (0..self.cols).fold(0, |acc, k| f.add(acc, f.mul(self.data[i][k], o.data[k][j]))))
                    .collect()
            })
            .collect();
        Matrix { rows: self.rows, cols: o.cols, data }
    }

    /// Gauss–Jordan inverse over `F_q`.
    pub fn inverse(&self, f: &FiniteField) -> Option<Matrix> {
        let n = self.rows;
        let mut a: Vec<Vec<Elem>> = self.data.clone();
        let mut inv = Matrix::identity(n).data;
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col] != 0)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let s = f.inv(a[col][col]).unwrap();
            for j in 0..n {
                a[col][j] = f.mul(a[col][j], s);
                inv[col][j] = f.mul(inv[col][j], s);
            }
            for r in 0..n {
                if r != col && a[r][col] != 0 {
                    let m = a[r][col];
                    for j in 0..n {
                        a[r][j] = f.sub(a[r][j], f.mul(m, a[col][j]));
                        inv[r][j] = f.sub(inv[r][j], f.mul(m, inv[col][j]));
                    }
                }
            }
        }
        Some(Matrix { rows: n, cols: n, data: inv })
    }
}

/// `V_n` with rows and columns indexed by `(n-1)`-tuples over `Z/m` in
/// lexicographic order and entries `ζ^{Σ i_k j_k}`, with its inverse.
pub fn vandermonde(field: &FiniteField, m: u32, n: usize) -> Result<(Matrix, Matrix), KummerError> {
    if m % field.p() == 0 {
        return Err(KummerError::RootOfUnityUnavailable(m));
    }
    let zeta = field.root_of_unity(m).ok_or(KummerError::RootOfUnityUnavailable(m))?;
    if n == 0 || n > super::MAX_LEVEL {
        return Err(KummerError::LevelCap(n));
    }
    let size = (m as usize).pow((n - 1) as u32);
    let tuple = |mut i: usize| {
        let mut v = vec![0u64; n - 1];
        for s in v.iter_mut().rev() {
            *s = (i % m as usize) as u64;
            i /= m as usize;
        }
        v
    };
    let data = (0..size)
        .map(|i| {
            let a = tuple(i);
            (0..size)
                .map(|j| {
                    let e: u64 = a.iter().zip(tuple(j)).map(|(x, y)| x * y).sum();
                    field.pow(zeta, e % m as u64)
                })
                .collect()
        })
        .collect();
    let v = Matrix { rows: size, cols: size, data };
    let inv = v.inverse(field).ok_or_else(|| KummerError::Invalid("singular character matrix".into()))?;
    Ok((v, inv))
}
