//! Dense bivariate polynomials over Q, used for indicial forms `I(lambda, alpha)`.
//!
//! The representation is a vector of rows: `rows[i]` is the coefficient of
//! `lambda^i`, itself a polynomial in `alpha`.  Trailing zero rows are
//! stripped, so the zero polynomial is the empty vector.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::poly::PolyQ;
use super::rational::Rat;

/// A polynomial in two variables `lambda` and `alpha`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPolyQ {
    rows: Vec<PolyQ>,
}

impl BiPolyQ {
    pub fn zero() -> Self {
        BiPolyQ { rows: Vec::new() }
    }

    /// Build from rows indexed by the power of `lambda`.
    pub fn from_rows(rows: Vec<PolyQ>) -> Self {
        let mut p = BiPolyQ { rows };
        while p.rows.last().is_some_and(PolyQ::is_zero) {
            p.rows.pop();
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Degree in `lambda`, or `None` for zero.
    pub fn deg_lambda(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    /// Degree in `alpha`, or `None` for zero.
    pub fn deg_alpha(&self) -> Option<usize> {
        self.rows.iter().filter_map(PolyQ::degree).max()
    }

    /// Coefficient of `lambda^i alpha^j`.
    pub fn coeff(&self, i: usize, j: usize) -> Rat {
        self.rows.get(i).map(|r| r.coeff(j)).unwrap_or_else(Rat::zero)
    }

    /// Row `i`: the coefficient of `lambda^i` as a polynomial in `alpha`.
    pub fn row(&self, i: usize) -> PolyQ {
        self.rows.get(i).cloned().unwrap_or_else(PolyQ::zero)
    }

    pub fn add(&self, other: &BiPolyQ) -> BiPolyQ {
        let n = self.rows.len().max(other.rows.len());
        let rows = (0..n).map(|i| self.row(i).add(&other.row(i))).collect();
        BiPolyQ::from_rows(rows)
    }

    /// Add `c(lambda) * a(alpha)` to the sum being built.
    pub fn add_product(&self, c_lambda: &PolyQ, a_alpha: &PolyQ) -> BiPolyQ {
        let rows = c_lambda
            .coeffs()
            .iter()
            .map(|c| a_alpha.scale(c))
            .collect();
        self.add(&BiPolyQ::from_rows(rows))
    }

    /// Substitute a rational for `alpha`, leaving a polynomial in `lambda`.
    pub fn eval_alpha(&self, alpha: &Rat) -> PolyQ {
        PolyQ::from_coeffs(self.rows.iter().map(|r| r.eval(alpha)).collect())
    }

    /// Substitute a rational for `lambda`, leaving a polynomial in `alpha`.
    pub fn eval_lambda(&self, lambda: &Rat) -> PolyQ {
        let mut acc = PolyQ::zero();
        for r in self.rows.iter().rev() {
            acc = acc.scale(lambda).add(r);
        }
        acc
    }

    pub fn to_string_vars(&self, lambda: &str, alpha: &str) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, r) in self.rows.iter().enumerate().rev() {
            if r.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            if i == 0 {
                let _ = write!(out, "{}", r.to_string_var(alpha));
            } else {
                let _ = write!(out, "({})*{}", r.to_string_var(alpha), lambda);
                if i > 1 {
                    let _ = write!(out, "^{i}");
                }
            }
        }
        out
    }
}

impl fmt::Debug for BiPolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPolyQ({})", self.to_string_vars("l", "a"))
    }
}
