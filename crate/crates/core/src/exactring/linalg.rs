//! Dense linear algebra over `F_p`.

use super::modulus::Modulus;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, f: &Modulus, x: &[u64]) -> Vec<u64> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
///
/// Pivots are chosen left to right, first nonzero row below the current one.
pub fn rref(f: &Modulus, m: &mut Matrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..m.cols {
                m.data.swap(pr * m.cols + j, r * m.cols + j);
            }
        }
        let inv = f.inv(m.get(r, c)).expect("nonzero in a field");
        for j in c..m.cols {
            let v = f.mul(m.get(r, j), inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let k = m.get(i, c);
            if k == 0 {
                continue;
            }
            for j in c..m.cols {
                let v = f.sub(m.get(i, j), f.mul(k, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `A x = b`; free variables are set to zero. `None` when inconsistent.
pub fn solve(f: &Modulus, a: &Matrix, b: &[u64]) -> Option<Vec<u64>> {
    let n = a.cols;
    let mut aug = Matrix::zeros(a.rows, n + 1);
    for i in 0..a.rows {
        for j in 0..n {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, n, f.reduce(b[i]));
    }
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![0; n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, n);
    }
    Some(x)
}

/// Basis of the null space, one vector per free column (that entry set to 1).
pub fn kernel(f: &Modulus, a: &Matrix) -> Vec<Vec<u64>> {
    let mut m = a.clone();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; a.cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(r, fc));
            }
            v
        })
        .collect()
}

pub fn rank(f: &Modulus, a: &Matrix) -> usize {
    let mut m = a.clone();
    rref(f, &mut m).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_kernel() {
        let f = Modulus::prime(7).unwrap();
        let a = Matrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let x = solve(&f, &a, &[1, 2]).unwrap();
        assert_eq!(a.mul_vec(&f, &x), vec![1, 2]);
        assert!(solve(&f, &a, &[1, 3]).is_none());
        let k = kernel(&f, &a);
        assert_eq!(k.len(), 2);
        for v in k {
            assert_eq!(a.mul_vec(&f, &v), vec![0, 0]);
        }
        assert_eq!(rank(&f, &a), 1);
    }
}
