//! Fourier-Motzkin elimination over Q, used to decide whether a support
//! polyhedron is bounded and to compute coordinate bounds for enumeration.
//!
//! Systems are lists of inequalities `coeffs . x + constant >= 0`.  The
//! elimination step is textbook: pair every inequality with a positive
//! coefficient on the target variable against every one with a negative
//! coefficient; feasibility is preserved, and a satisfying point can be
//! reconstructed level by level.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::exact::rational::Rat;

/// `coeffs . x + constant >= 0`.
#[derive(Clone, Debug)]
pub(crate) struct Ineq {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
}

impl Ineq {
    fn eval_partial(&self, point: &[Rat]) -> Rat {
        // Value of the inequality with the last coefficient left out,
        // at a point for the first len-1 variables.
        let mut acc = self.constant.clone();
        for (c, x) in self.coeffs[..self.coeffs.len() - 1].iter().zip(point) {
            if !c.is_zero() {
                acc += c * x;
            }
        }
        acc
    }
}

/// Eliminate the last variable from the system.
fn eliminate_last(sys: &[Ineq]) -> Vec<Ineq> {
    let mut out = Vec::new();
    let mut pos: Vec<&Ineq> = Vec::new();
    let mut neg: Vec<&Ineq> = Vec::new();
    for q in sys {
        let a = q.coeffs.last().expect("eliminate on empty system");
        if a.is_zero() {
            out.push(Ineq {
                coeffs: q.coeffs[..q.coeffs.len() - 1].to_vec(),
                constant: q.constant.clone(),
            });
        } else if a.is_positive() {
            pos.push(q);
        } else {
            neg.push(q);
        }
    }
    for p in &pos {
        let ap = p.coeffs.last().unwrap();
        for q in &neg {
            let aq = q.coeffs.last().unwrap();
            // a_p (a_q x + r_q) - a_q (a_p x + r_p) = a_p r_q - a_q r_p >= 0
            let n = p.coeffs.len() - 1;
            let coeffs = (0..n)
                .map(|i| ap * &q.coeffs[i] - aq * &p.coeffs[i])
                .collect();
            out.push(Ineq {
                coeffs,
                constant: ap * &q.constant - aq * &p.constant,
            });
        }
    }
    out
}

/// A feasible point of the system over `nvars` variables, if one exists.
pub(crate) fn feasible_point(sys: &[Ineq], nvars: usize) -> Option<Vec<Rat>> {
    debug_assert!(sys.iter().all(|q| q.coeffs.len() == nvars));
    if nvars == 0 {
        return sys
            .iter()
            .all(|q| !q.constant.is_negative())
            .then(Vec::new);
    }
    let reduced = eliminate_last(sys);
    let mut point = feasible_point(&reduced, nvars - 1)?;
    // Bracket the last variable at the partial point.
    let mut lower: Option<Rat> = None;
    let mut upper: Option<Rat> = None;
    for q in sys {
        let a = q.coeffs.last().unwrap();
        if a.is_zero() {
            continue;
        }
        let bound = -q.eval_partial(&point) / a;
        if a.is_positive() {
            if lower.as_ref().is_none_or(|l| bound > *l) {
                lower = Some(bound);
            }
        } else if upper.as_ref().is_none_or(|u| bound < *u) {
            upper = Some(bound);
        }
    }
    let x = match (lower, upper) {
        (Some(l), Some(u)) => {
            debug_assert!(l <= u, "Fourier-Motzkin backsolve out of order");
            (l + u) / Rat::from_integer(2.into())
        }
        (Some(l), None) => l,
        (None, Some(u)) => u,
        (None, None) => Rat::zero(),
    };
    point.push(x);
    Some(point)
}

/// A nonzero point of the homogeneous cone `{v : row . v >= 0 for all rows}`,
/// or `None` when the cone is exactly the origin.
pub(crate) fn nonzero_cone_point(rows: &[Vec<Rat>], nvars: usize) -> Option<Vec<Rat>> {
    for axis in 0..nvars {
        for sigma in [1i64, -1] {
            // Fix v_axis = sigma and look for any completion.
            let sys: Vec<Ineq> = rows
                .iter()
                .map(|row| {
                    let coeffs: Vec<Rat> = row
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != axis)
                        .map(|(_, c)| c.clone())
                        .collect();
                    Ineq {
                        coeffs,
                        constant: &row[axis] * Rat::from_integer(sigma.into()),
                    }
                })
                .collect();
            if let Some(rest) = feasible_point(&sys, nvars - 1) {
                let mut v = Vec::with_capacity(nvars);
                let mut it = rest.into_iter();
                for i in 0..nvars {
                    if i == axis {
                        v.push(Rat::from_integer(sigma.into()));
                    } else {
                        v.push(it.next().unwrap());
                    }
                }
                return Some(v);
            }
        }
    }
    None
}

/// The exact interval of values taken by coordinate `axis` over the feasible
/// region, assuming the region is nonempty and bounded in that coordinate.
/// Returns `None` when the region is empty.
pub(crate) fn coordinate_interval(
    sys: &[Ineq],
    nvars: usize,
    axis: usize,
) -> Option<(Rat, Rat)> {
    // Rotate the axis of interest to position 0 and eliminate the rest.
    let mut rotated: Vec<Ineq> = sys
        .iter()
        .map(|q| {
            let mut coeffs = vec![q.coeffs[axis].clone()];
            coeffs.extend(
                q.coeffs
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != axis)
                    .map(|(_, c)| c.clone()),
            );
            Ineq {
                coeffs,
                constant: q.constant.clone(),
            }
        })
        .collect();
    for _ in 1..nvars {
        rotated = eliminate_last(&rotated);
    }
    let mut lower: Option<Rat> = None;
    let mut upper: Option<Rat> = None;
    for q in &rotated {
        let a = &q.coeffs[0];
        if a.is_zero() {
            if q.constant.is_negative() {
                return None; // infeasible
            }
            continue;
        }
        let bound = -&q.constant / a;
        if a.is_positive() {
            if lower.as_ref().is_none_or(|l| bound > *l) {
                lower = Some(bound);
            }
        } else if upper.as_ref().is_none_or(|u| bound < *u) {
            upper = Some(bound);
        }
    }
    match (lower, upper) {
        (Some(l), Some(u)) if l <= u => Some((l, u)),
        (Some(_), Some(_)) => None,
        _ => panic!("coordinate interval requested on an unbounded region"),
    }
}
