//! Resultants: Sylvester determinants for univariate pairs, and elimination
//! of one variable from a bivariate polynomial against a univariate modulus.
//!
//! The bivariate elimination `Res_lambda(m(lambda), I(lambda, alpha))` is
//! computed by evaluation and interpolation: the alpha-degree of the result
//! is bounded by `deg(m) * deg_alpha(I)`, so it suffices to evaluate the
//! Sylvester determinant at that many rational points plus one and
//! interpolate.  The Sylvester matrix is always built with the nominal
//! lambda-degree of `I`, which keeps the matrix shape independent of the
//! sample point even when the leading coefficient vanishes there; the exact
//! determinant handles the degenerate rows.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::bipoly::BiPolyQ;
use super::linalg::{det, MatQ};
use super::poly::PolyQ;
use super::rational::{rat_i, Rat};

/// Sylvester resultant of `f` and `g` with their nominal degrees `df`, `dg`.
/// Rows are the shifted coefficient vectors of `f` (dg rows) then `g` (df rows).
fn sylvester_det(f: &PolyQ, df: usize, g: &PolyQ, dg: usize) -> Rat {
    let n = df + dg;
    if n == 0 {
        return Rat::one();
    }
    let mut m = MatQ::zeros(n, n);
    for r in 0..dg {
        for i in 0..=df {
            m.set(r, r + i, f.coeff(df - i));
        }
    }
    for r in 0..df {
        for i in 0..=dg {
            m.set(dg + r, r + i, g.coeff(dg - i));
        }
    }
    det(&m)
}

/// Resultant of two univariate polynomials.  Panics if either is zero.
pub fn resultant(f: &PolyQ, g: &PolyQ) -> Rat {
    let df = f.degree().expect("resultant of the zero polynomial");
    let dg = g.degree().expect("resultant of the zero polynomial");
    sylvester_det(f, df, g, dg)
}

/// Interpolate the unique polynomial of degree `< points.len()` through the
/// given `(x, y)` pairs with pairwise distinct `x`, by Newton divided
/// differences.
pub fn interpolate(points: &[(Rat, Rat)]) -> PolyQ {
    let n = points.len();
    if n == 0 {
        return PolyQ::zero();
    }
    // Divided difference table, in place.
    let mut coef: Vec<Rat> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let dx = &points[i].0 - &points[i - level].0;
            assert!(!dx.is_zero(), "interpolation nodes must be distinct");
            coef[i] = (&coef[i] - &coef[i - 1]) / dx;
        }
    }
    // Horner expansion of the Newton form.
    let mut p = PolyQ::zero();
    for i in (0..n).rev() {
        let linear = PolyQ::from_coeffs(vec![-points[i].0.clone(), Rat::one()]);
        p = p.mul(&linear).add(&PolyQ::constant(coef[i].clone()));
    }
    p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResultantError {
    /// The modulus must have positive degree for elimination to make sense.
    ConstantModulus,
    /// Elimination of a zero polynomial is not defined.
    ZeroInput,
}

impl core::fmt::Display for ResultantError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ResultantError::ConstantModulus => write!(f, "modulus polynomial is constant"),
            ResultantError::ZeroInput => write!(f, "resultant elimination of the zero polynomial"),
        }
    }
}

impl core::error::Error for ResultantError {}

/// Eliminate `lambda` from `i(lambda, alpha)` against the modulus
/// `m(lambda)`: the result is `Res_lambda(m, i)` as a polynomial in `alpha`,
/// normalized to integer coefficients with content 1 and positive leading
/// coefficient.
pub fn resultant_eliminate(i: &BiPolyQ, m: &PolyQ) -> Result<PolyQ, ResultantError> {
    if i.is_zero() {
        return Err(ResultantError::ZeroInput);
    }
    let dm = m.degree().filter(|&d| d >= 1).ok_or(ResultantError::ConstantModulus)?;
    let dl = i.deg_lambda().unwrap();
    let da = i.deg_alpha().unwrap();
    if dl == 0 {
        // No lambda to eliminate: the resultant degenerates to i^deg(m).
        let (_, prim) = i.row(0).pow(dm).primitive_normalize();
        return Ok(prim);
    }
    let samples = dm * da + 1;
    let points: Vec<(Rat, Rat)> = (0..samples)
        .map(|s| {
            let alpha = rat_i(s as i64);
            let i_at = i.eval_alpha(&alpha);
            (alpha, sylvester_det(m, dm, &i_at, dl))
        })
        .collect();
    let r = interpolate(&points);
    let (_, prim) = r.primitive_normalize();
    Ok(prim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn resultant_of_linears_is_cross_difference() {
        let f = PolyQ::from_i64(&[-3, 1]); // x - 3
        let g = PolyQ::from_i64(&[5, 1]); // x + 5
        // With monic f of degree 1, Res(f, g) = g(3).
        assert_eq!(resultant(&f, &g), crate::exact::rational::rat_i(8));
        let h = f.mul(&PolyQ::from_i64(&[7, 2]));
        assert!(resultant(&f, &h).is_zero());
    }

    #[test]
    fn resultant_detects_common_roots_exactly() {
        let f = PolyQ::from_i64(&[2, -7, 2]); // roots (7 +- sqrt(33))/4
        let g = PolyQ::from_i64(&[-1, 0, 0, 1]); // roots: cube roots of 1
        assert!(!resultant(&f, &g).is_zero());
        let g2 = f.mul(&PolyQ::from_i64(&[1, 1, 1]));
        assert!(resultant(&f, &g2).is_zero());
    }

    #[test]
    fn interpolation_recovers_polynomials() {
        let p = PolyQ::from_i64(&[3, 0, -2, 1]);
        let pts: Vec<(Rat, Rat)> = (0..4)
            .map(|k| {
                let x = rat(k - 1, 1);
                let y = p.eval(&x);
                (x, y)
            })
            .collect();
        assert_eq!(interpolate(&pts), p);
        assert_eq!(interpolate(&[]), PolyQ::zero());
    }

    #[test]
    fn eliminate_simple_shared_structure() {
        // I(lambda, alpha) = alpha - lambda, m(lambda) = lambda^2 - 2.
        // Res_lambda = alpha^2 - 2: alpha must be a root of m.
        let i = BiPolyQ::from_rows(vec![PolyQ::from_i64(&[0, 1]), PolyQ::from_i64(&[-1])]);
        let m = PolyQ::from_i64(&[-2, 0, 1]);
        let r = resultant_eliminate(&i, &m).unwrap();
        assert_eq!(r, PolyQ::from_i64(&[-2, 0, 1]));
    }

    #[test]
    fn eliminate_with_multiplicity_squares_the_factor() {
        // I = (alpha - lambda)^2 expanded: alpha^2 - 2 alpha lambda + lambda^2
        // against m = lambda - 3 gives (alpha - 3)^2.
        let i = BiPolyQ::from_rows(vec![
            PolyQ::from_i64(&[0, 0, 1]),
            PolyQ::from_i64(&[0, -2]),
            PolyQ::from_i64(&[1]),
        ]);
        let m = PolyQ::from_i64(&[-3, 1]);
        let r = resultant_eliminate(&i, &m).unwrap();
        assert_eq!(r, PolyQ::from_i64(&[9, -6, 1]));
    }

    #[test]
    fn eliminate_rejects_bad_inputs() {
        let i = BiPolyQ::from_rows(vec![PolyQ::from_i64(&[0, 1])]);
        assert_eq!(
            resultant_eliminate(&i, &PolyQ::from_i64(&[5])),
            Err(ResultantError::ConstantModulus)
        );
        assert_eq!(
            resultant_eliminate(&BiPolyQ::zero(), &PolyQ::from_i64(&[0, 1])),
            Err(ResultantError::ZeroInput)
        );
    }

    #[test]
    fn eliminate_handles_lambda_free_input() {
        // I = alpha^2 + 1 (no lambda), m of degree 3: result is (alpha^2+1)^3
        // up to normalization.
        let i = BiPolyQ::from_rows(vec![PolyQ::from_i64(&[1, 0, 1])]);
        let m = PolyQ::from_i64(&[-1, 0, 0, 2]);
        let r = resultant_eliminate(&i, &m).unwrap();
        assert_eq!(r, PolyQ::from_i64(&[1, 0, 1]).pow(3));
    }

    proptest! {
        #[test]
        fn resultant_vanishes_iff_common_factor(
            a in -5i64..6, b in -5i64..6, c in -5i64..6, d in -5i64..6,
        ) {
            prop_assume!(a != 0 || b != 0);
            let f = PolyQ::from_i64(&[b, a]).mul(&PolyQ::from_i64(&[1, 0, 1]));
            let g = PolyQ::from_i64(&[d, c]).mul(&PolyQ::from_i64(&[2, 1]));
            prop_assume!(!g.is_zero());
            let r = resultant(&f, &g);
            let share = !f.gcd(&g).is_zero() && f.gcd(&g).degree().unwrap_or(0) >= 1;
            prop_assert_eq!(r.is_zero(), share);
        }

        #[test]
        fn interpolation_round_trip(coeffs in proptest::collection::vec(-9i64..10, 0..6)) {
            let p = PolyQ::from_i64(&coeffs);
            let n = coeffs.len().max(1);
            let pts: Vec<(Rat, Rat)> = (0..n)
                .map(|k| {
                    let x = rat(k as i64, 1);
                    let y = p.eval(&x);
                    (x, y)
                })
                .collect();
            prop_assert_eq!(interpolate(&pts), p);
        }
    }
}
