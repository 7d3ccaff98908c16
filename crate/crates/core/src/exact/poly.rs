//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending order and the representation is kept
//! canonical: no trailing zeros, the zero polynomial is the empty vector.
//! All arithmetic is exact.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{rat_string, Int, Rat};

/// A polynomial in one variable with rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyQ {
    coeffs: Vec<Rat>,
}

impl PolyQ {
    /// The zero polynomial.
    pub fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        PolyQ::constant(Rat::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        PolyQ::monomial(1, Rat::one())
    }

    /// The constant polynomial `c`.
    pub fn constant(c: Rat) -> Self {
        PolyQ::from_coeffs(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: Rat) -> Self {
        if c.is_zero() {
            return PolyQ::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        PolyQ { coeffs }
    }

    /// Build from ascending coefficients, normalizing trailing zeros away.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = PolyQ { coeffs };
        p.normalize();
        p
    }

    /// Build from ascending integer coefficients.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        PolyQ::from_coeffs(coeffs.iter().map(|&c| Rat::from_integer(Int::from(c))).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Ascending coefficients without trailing zeros; empty for zero.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient, or `None` for the zero polynomial.
    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluation at an integer point.
    pub fn eval_int(&self, x: &Int) -> Rat {
        self.eval(&Rat::from_integer(x.clone()))
    }

    pub fn add(&self, other: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        PolyQ::from_coeffs(out)
    }

    pub fn sub(&self, other: &PolyQ) -> PolyQ {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PolyQ {
        PolyQ {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &PolyQ) -> PolyQ {
        if self.is_zero() || other.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyQ::from_coeffs(out)
    }

    /// Multiply by the scalar `c`.
    pub fn scale(&self, c: &Rat) -> PolyQ {
        if c.is_zero() {
            return PolyQ::zero();
        }
        PolyQ {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `x^k`.
    pub fn mul_xk(&self, k: usize) -> PolyQ {
        if self.is_zero() {
            return PolyQ::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        PolyQ { coeffs }
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, e: usize) -> PolyQ {
        let mut acc = PolyQ::one();
        let mut sq = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> PolyQ {
        if self.coeffs.len() <= 1 {
            return PolyQ::zero();
        }
        PolyQ::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Rat::from_integer(Int::from(i as u64 + 1)))
                .collect(),
        )
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    /// Panics if `div` is zero.
    pub fn divrem(&self, div: &PolyQ) -> (PolyQ, PolyQ) {
        let d = div.degree().expect("division by the zero polynomial");
        let lead = div.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = if self.coeffs.len() > d {
            vec![Rat::zero(); self.coeffs.len() - d]
        } else {
            Vec::new()
        };
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let c = rem.last().unwrap() / lead;
            if !c.is_zero() {
                for (i, b) in div.coeffs.iter().enumerate() {
                    let t = &c * b;
                    rem[k + i] -= t;
                }
                quot[k] = c;
            }
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (PolyQ::from_coeffs(quot), PolyQ::from_coeffs(rem))
    }

    /// Exact division; `None` if the remainder is nonzero.
    pub fn div_exact(&self, div: &PolyQ) -> Option<PolyQ> {
        let (q, r) = self.divrem(div);
        r.is_zero().then_some(q)
    }

    /// Multiplicity of `div` as a factor of `self` (0 if it does not divide).
    /// Panics if `div` is constant or zero.
    pub fn order_of(&self, div: &PolyQ) -> usize {
        assert!(
            div.degree().is_some_and(|d| d >= 1),
            "order with respect to a constant"
        );
        let mut h = self.clone();
        let mut ord = 0;
        while let Some(q) = h.div_exact(div) {
            if h.is_zero() {
                break;
            }
            h = q;
            ord += 1;
        }
        ord
    }

    /// Monic multiple of the gcd, monic (or zero when both inputs are zero).
    pub fn gcd(&self, other: &PolyQ) -> PolyQ {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
            // Keeping the remainder monic keeps coefficient sizes in check.
            if let Some(lead) = b.leading().cloned() {
                b = b.scale(&lead.recip());
            }
        }
        match a.leading().cloned() {
            Some(lead) => a.scale(&lead.recip()),
            None => a,
        }
    }

    /// Scale to the monic polynomial with the same roots.  Panics on zero.
    pub fn monic(&self) -> PolyQ {
        let lead = self.leading().expect("monic of the zero polynomial");
        self.scale(&lead.clone().recip())
    }

    /// Write `self = scale * prim` with `prim` having integer coefficients,
    /// content 1 and positive leading coefficient.  Zero maps to `(0, 0)`.
    pub fn primitive_normalize(&self) -> (Rat, PolyQ) {
        if self.is_zero() {
            return (Rat::zero(), PolyQ::zero());
        }
        let mut den_lcm = Int::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = Int::zero();
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(&(c.numer() * &den_lcm / c.denom()));
        }
        let mut scale = Rat::new(num_gcd, den_lcm);
        if self.leading().unwrap().is_negative() {
            scale = -scale;
        }
        let prim = self.scale(&scale.clone().recip());
        (scale, prim)
    }

    /// Substitute `x -> x + a`.
    pub fn compose_shift(&self, a: &Rat) -> PolyQ {
        let shift = PolyQ::from_coeffs(vec![a.clone(), Rat::one()]);
        let mut acc = PolyQ::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&shift).add(&PolyQ::constant(c.clone()));
        }
        acc
    }

    /// Render with the given variable name, highest degree first.
    pub fn to_string_var(&self, var: &str) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    out.push('-');
                }
                first = false;
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                let _ = write!(out, "{}", rat_string(&mag));
            }
            if k > 0 {
                if show_coeff {
                    out.push('*');
                }
                out.push_str(var);
                if k > 1 {
                    let _ = write!(out, "^{k}");
                }
            }
        }
        out
    }
}

impl fmt::Debug for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyQ({})", self.to_string_var("x"))
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var("x"))
    }
}

/// Scale a system of polynomials jointly so all coefficients are integers
/// with overall content 1; the last nonzero polynomial gets a positive
/// leading coefficient.  An all-zero system is returned unchanged.
pub fn normalize_system(polys: &mut [PolyQ]) {
    let mut den_lcm = Int::one();
    let mut num_gcd = Int::zero();
    for p in polys.iter() {
        for c in p.coeffs() {
            den_lcm = den_lcm.lcm(c.denom());
        }
    }
    for p in polys.iter() {
        for c in p.coeffs() {
            num_gcd = num_gcd.gcd(&(c.numer() * &den_lcm / c.denom()));
        }
    }
    if num_gcd.is_zero() {
        return;
    }
    let mut factor = Rat::new(den_lcm, num_gcd);
    if polys
        .iter()
        .rev()
        .find_map(|p| p.leading())
        .expect("some polynomial is nonzero")
        .is_negative()
    {
        factor = -factor;
    }
    for p in polys.iter_mut() {
        *p = p.scale(&factor);
    }
}

/// Falling factorial `x(x-1)...(x-k+1)` as a polynomial, with `fall(x, 0) = 1`.
pub fn falling_factorial(k: usize) -> PolyQ {
    let mut acc = PolyQ::one();
    for i in 0..k {
        let factor = PolyQ::from_coeffs(vec![Rat::from_integer(-Int::from(i as u64)), Rat::one()]);
        acc = acc.mul(&factor);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, rat_i};
    use proptest::prelude::*;

    fn arb_poly() -> impl Strategy<Value = PolyQ> {
        proptest::collection::vec((-50i64..50, 1i64..20), 0..7)
            .prop_map(|cs| PolyQ::from_coeffs(cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    #[test]
    fn canonical_representation() {
        let p = PolyQ::from_coeffs(vec![rat_i(1), rat_i(0), rat_i(0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(PolyQ::from_coeffs(vec![rat_i(0); 3]).is_zero());
        assert_eq!(PolyQ::zero().degree(), None);
    }

    #[test]
    fn divrem_reconstructs() {
        let f = PolyQ::from_i64(&[2, -7, 0, 3, 1]);
        let g = PolyQ::from_i64(&[1, 1, 2]);
        let (q, r) = f.divrem(&g);
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.degree().unwrap() < g.degree().unwrap());
    }

    #[test]
    fn gcd_of_products_contains_common_factor() {
        let common = PolyQ::from_i64(&[-1, 0, 1]);
        let a = common.mul(&PolyQ::from_i64(&[3, 1]));
        let b = common.mul(&PolyQ::from_i64(&[5, 0, 7]));
        let g = a.gcd(&b);
        assert_eq!(g, common.monic());
    }

    #[test]
    fn primitive_normalize_examples() {
        let p = PolyQ::from_coeffs(vec![rat(-3, 2), rat(9, 4)]);
        let (scale, prim) = p.primitive_normalize();
        assert_eq!(prim, PolyQ::from_i64(&[-2, 3]));
        assert_eq!(prim.scale(&scale), p);

        let neg = PolyQ::from_i64(&[4, -6]);
        let (s2, prim2) = neg.primitive_normalize();
        assert_eq!(prim2, PolyQ::from_i64(&[-2, 3]));
        assert_eq!(s2, rat_i(-2));
    }

    #[test]
    fn order_of_counts_multiplicity() {
        let f = PolyQ::from_i64(&[0, 1]); // x
        let p = f.pow(3).mul(&PolyQ::from_i64(&[1, 1]));
        assert_eq!(p.order_of(&f), 3);
        assert_eq!(PolyQ::from_i64(&[1, 1]).order_of(&f), 0);
    }

    #[test]
    fn shift_evaluates_consistently() {
        let p = PolyQ::from_i64(&[1, -3, 0, 2]);
        let a = rat(5, 3);
        let shifted = p.compose_shift(&a);
        for x in -4..4 {
            let x = rat_i(x);
            assert_eq!(shifted.eval(&x), p.eval(&(&x + &a)));
        }
    }

    #[test]
    fn falling_factorial_matches_products() {
        // fall(x, 3) = x(x-1)(x-2) = x^3 - 3x^2 + 2x
        assert_eq!(falling_factorial(3), PolyQ::from_i64(&[0, 2, -3, 1]));
        assert_eq!(falling_factorial(0), PolyQ::one());
        assert_eq!(falling_factorial(2).eval(&rat_i(7)), rat_i(42));
    }

    #[test]
    fn display_is_readable() {
        let p = PolyQ::from_i64(&[2, -7, 2]);
        assert_eq!(p.to_string_var("z"), "2*z^2 - 7*z + 2");
        assert_eq!(PolyQ::from_i64(&[0, 1]).to_string_var("z"), "z");
        assert_eq!(PolyQ::zero().to_string_var("z"), "0");
        assert_eq!(PolyQ::from_coeffs(vec![rat(-1, 2)]).to_string_var("n"), "-1/2");
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in (arb_poly(), arb_poly(), arb_poly())) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.sub(&a), PolyQ::zero());
        }

        #[test]
        fn divrem_is_division((a, b) in (arb_poly(), arb_poly())) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b);
            prop_assert_eq!(q.mul(&b).add(&r), a);
            if let Some(dr) = r.degree() {
                prop_assert!(dr < b.degree().unwrap());
            }
        }

        #[test]
        fn gcd_divides_both((a, b) in (arb_poly(), arb_poly())) {
            let g = a.gcd(&b);
            if g.is_zero() {
                prop_assert!(a.is_zero() && b.is_zero());
            } else {
                prop_assert!(a.div_exact(&g).is_some());
                prop_assert!(b.div_exact(&g).is_some());
            }
        }

        #[test]
        fn eval_is_a_homomorphism((a, b) in (arb_poly(), arb_poly()), n in -10i64..10, d in 1i64..10) {
            let x = rat(n, d);
            prop_assert_eq!(a.mul(&b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!(a.add(&b).eval(&x), a.eval(&x) + b.eval(&x));
        }

        #[test]
        fn derivative_is_leibniz((a, b) in (arb_poly(), arb_poly())) {
            let lhs = a.mul(&b).derivative();
            let rhs = a.derivative().mul(&b).add(&a.mul(&b.derivative()));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
