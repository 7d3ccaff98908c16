//! Exact linear algebra over Q: fraction-free elimination, determinants and
//! nullspace bases.
//!
//! Matrices are scaled to integers up front and eliminated with Bareiss, so
//! intermediate entries stay polynomially bounded and every division is exact.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{Int, Rat};

/// A dense row-major matrix over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatQ {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl MatQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatQ {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        MatQ {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    /// Each row scaled to integers (common denominator cleared per row).
    fn integer_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows)
            .map(|r| {
                let mut lcm = Int::one();
                for c in 0..self.cols {
                    lcm = lcm.lcm(self.at(r, c).denom());
                }
                (0..self.cols)
                    .map(|c| {
                        let v = self.at(r, c);
                        v.numer() * &lcm / v.denom()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Exact determinant of a square matrix, by Bareiss elimination on the
/// integer-scaled matrix with the accumulated row scales divided back out.
pub fn det(m: &MatQ) -> Rat {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return Rat::one();
    }
    let mut scale = Rat::one();
    let mut a = Vec::with_capacity(n);
    for (r, row) in m.integer_rows().into_iter().enumerate() {
        let mut lcm = Int::one();
        for c in 0..n {
            lcm = lcm.lcm(m.at(r, c).denom());
        }
        scale *= Rat::new(Int::one(), lcm);
        a.push(row);
    }
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Rat::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact by the Bareiss identity
            }
            a[i][k] = Int::zero();
        }
        prev = a[k][k].clone();
    }
    Rat::from_integer(sign * a[n - 1][n - 1].clone()) * scale
}

/// Basis of the right nullspace of `m`, deterministic: pivots are chosen
/// left to right on the first nonzero row, and free variables are emitted in
/// ascending column order.  Each basis vector is scaled to integer entries
/// with content 1 and a positive first nonzero entry.
pub fn nullspace(m: &MatQ) -> Vec<Vec<Rat>> {
    let cols = m.cols;
    if cols == 0 {
        return Vec::new();
    }
    let mut a = m.integer_rows();
    let rows = a.len();
    // Forward fraction-free elimination, tracking pivot columns.
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = Int::one();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        match (row..rows).find(|&r| !a[r][col].is_zero()) {
            None => continue,
            Some(r) => a.swap(row, r),
        }
        for i in row + 1..rows {
            for j in col + 1..cols {
                let num = &a[i][j] * &a[row][col] - &a[i][col] * &a[row][j];
                a[i][j] = num / &prev;
            }
            a[i][col] = Int::zero();
        }
        prev = a[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    // Back-substitute once per free column.
    free.iter()
        .map(|&fc| {
            let mut x = vec![Rat::zero(); cols];
            x[fc] = Rat::one();
            for (i, &pc) in pivots.iter().enumerate().rev() {
                let mut s = Rat::zero();
                for c in pc + 1..cols {
                    if !x[c].is_zero() {
                        s += Rat::from_integer(a[i][c].clone()) * &x[c];
                    }
                }
                x[pc] = -s / Rat::from_integer(a[i][pc].clone());
            }
            normalize_vector(&mut x);
            x
        })
        .collect()
}

/// Scale to integer entries with content 1 and positive first nonzero entry.
fn normalize_vector(x: &mut [Rat]) {
    let mut den_lcm = Int::one();
    for v in x.iter() {
        den_lcm = den_lcm.lcm(v.denom());
    }
    let mut num_gcd = Int::zero();
    for v in x.iter() {
        num_gcd = num_gcd.gcd(&(v.numer() * &den_lcm / v.denom()));
    }
    if num_gcd.is_zero() {
        return;
    }
    let mut scale = Rat::new(den_lcm, num_gcd);
    if let Some(first) = x.iter().find(|v| !v.is_zero()) {
        if (first.clone() * &scale).is_negative() {
            scale = -scale;
        }
    }
    for v in x.iter_mut() {
        *v *= &scale;
    }
}

/// Apply `m` to a vector.
pub fn mat_vec(m: &MatQ, x: &[Rat]) -> Vec<Rat> {
    assert_eq!(m.cols, x.len());
    (0..m.rows)
        .map(|r| {
            let mut s = Rat::zero();
            for c in 0..m.cols {
                if !x[c].is_zero() {
                    s += m.at(r, c) * &x[c];
                }
            }
            s
        })
        .collect()
}
