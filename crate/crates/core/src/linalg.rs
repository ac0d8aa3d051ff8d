//! Dense Gaussian elimination over `F_q`.

use crate::funcfield::{Elem, FiniteField};

/// Reduce `rows` in place to reduced row echelon form; returns the pivot
/// columns. Zero rows are dropped.
pub fn row_reduce(f: &FiniteField, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let s = f.inv(rows[r][col]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, s);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] != 0 {
                let m = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row).skip(col) {
                    if y != 0 {
                        *x = f.sub(*x, f.mul(m, y));
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(f: &FiniteField, rows: &[Vec<Elem>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(f, &mut m).len()
}

/// Basis of `{x : M x = 0}` for `M` given by rows with `ncols` columns.
pub fn kernel(f: &FiniteField, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m = rows.to_vec();
    let pivots = if m.is_empty() { Vec::new() } else { row_reduce(f, &mut m) };
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; ncols];
        v[free] = 1;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = f.neg(row[free]);
        }
        out.push(v);
    }
    out
}

/// Some `x` with `M x = b`, if one exists.
pub fn solve(f: &FiniteField, rows: &[Vec<Elem>], b: &[Elem]) -> Option<Vec<Elem>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Elem>> = rows.iter().zip(b).map(|(r, &x)| r.iter().copied().chain([x]).collect()).collect();
    let pivots = row_reduce(f, &mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![0; ncols];
    for (row, &pc) in aug.iter().zip(&pivots) {
        x[pc] = row[ncols];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_kernel_solve() {
        let f = FiniteField::new(5).unwrap();
        let m = vec![vec![1, 2, 3], vec![0, 1, 4], vec![1, 3, 2]];
        // row 3 = row 1 + row 2
        assert_eq!(rank(&f, &m), 2);
        let k = kernel(&f, &m, 3);
        assert_eq!(k.len(), 1);
        for row in &m {
            let s = row.iter().zip(&k[0]).fold(0, |a, (&x, &y)| f.add(a, f.mul(x, y)));
            assert_eq!(s, 0);
        }
        let x = solve(&f, &m, &[1, 2, 3]).unwrap();
        for (row, b) in m.iter().zip([1, 2, 3]) {
            assert_eq!(row.iter().zip(&x).fold(0, |a, (&p, &q)| f.add(a, f.mul(p, q))), b);
        }
        assert!(solve(&f, &m, &[1, 2, 0]).is_none());
        assert_eq!(kernel(&f, &[], 2).len(), 2);
    }
}
