//! The balanced hypergeometric term model.
//!
//! A term in summation variables `k = (k_1, ..., k_r)` is
//! `C0^n * prod_i C_i^{k_i} * prod_j A_j(n, k)!^{e_j}` with integer linear
//! forms `A_j` and signs `e_j = +-1`.  The balance condition
//! `sum_j e_j A_j = 0` (as a linear form, constant included) is what makes
//! the factorial part rewritable as a pure product of binomials, and that
//! rewriting is the bridge from the term to integrality and growth
//! statements about its multisums.

mod cone;
pub mod parse;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::exact::rational::{rat_string, Int, Rat};

pub use parse::{parse_term, ParseError, ParseErrorKind};

/// An integer linear form `coeff_n * n + sum_i coeff_k[i] * k_i + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub coeff_n: i64,
    pub coeff_k: Vec<i64>,
    pub constant: i64,
}

impl LinearForm {
    pub fn zero(arity: usize) -> Self {
        LinearForm {
            coeff_n: 0,
            coeff_k: vec![0; arity],
            constant: 0,
        }
    }

    pub fn arity(&self) -> usize {
        self.coeff_k.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff_n == 0 && self.constant == 0 && self.coeff_k.iter().all(|&c| c == 0)
    }

    /// Exact evaluation; panics only on i64 overflow, far outside the
    /// ranges this crate works in.
    pub fn eval(&self, n: i64, k: &[i64]) -> i64 {
        assert_eq!(k.len(), self.arity(), "arity mismatch");
        let mut acc = self.coeff_n as i128 * n as i128 + self.constant as i128;
        for (c, x) in self.coeff_k.iter().zip(k) {
            acc += *c as i128 * *x as i128;
        }
        i64::try_from(acc).expect("linear form value overflows i64")
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        assert_eq!(self.arity(), other.arity(), "arity mismatch");
        LinearForm {
            coeff_n: self.coeff_n.checked_add(other.coeff_n).expect("overflow"),
            coeff_k: self
                .coeff_k
                .iter()
                .zip(&other.coeff_k)
                .map(|(a, b)| a.checked_add(*b).expect("overflow"))
                .collect(),
            constant: self.constant.checked_add(other.constant).expect("overflow"),
        }
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, s: i64) -> LinearForm {
        LinearForm {
            coeff_n: self.coeff_n.checked_mul(s).expect("overflow"),
            coeff_k: self
                .coeff_k
                .iter()
                .map(|c| c.checked_mul(s).expect("overflow"))
                .collect(),
            constant: self.constant.checked_mul(s).expect("overflow"),
        }
    }

    /// Render with the given summation variable names.
    pub fn to_string_with(&self, vars: &[String]) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let push = |coeff: i64, name: &str, out: &mut String| {
            if coeff == 0 {
                return;
            }
            if out.is_empty() {
                if coeff < 0 {
                    out.push('-');
                }
            } else if coeff < 0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = coeff.unsigned_abs();
            if name.is_empty() {
                let _ = write!(out, "{mag}");
            } else if mag == 1 {
                out.push_str(name);
            } else {
                let _ = write!(out, "{mag}*{name}");
            }
        };
        push(self.coeff_n, "n", &mut out);
        for (c, v) in self.coeff_k.iter().zip(vars) {
            push(*c, v, &mut out);
        }
        push(self.constant, "", &mut out);
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// The sign of a factorial factor: `Plus` contributes `A!`, `Minus`
/// contributes `1/A!`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermError {
    /// `C0` and every `C_i` must be nonzero.
    ZeroConstant,
    /// Every factor must use the declared number of summation variables.
    ArityMismatch,
    /// The factor list must be nonempty.
    EmptyFactorList,
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::ZeroConstant => write!(f, "constant bases must be nonzero"),
            TermError::ArityMismatch => write!(f, "factor arity does not match variable count"),
            TermError::EmptyFactorList => write!(f, "term has no factorial factors"),
        }
    }
}

impl core::error::Error for TermError {}

/// A hypergeometric term `C0^n prod_i C_i^{k_i} prod_j A_j!^{e_j}`.
///
/// "Balanced" is a property checked by [`check_balance`], not enforced by
/// construction: the parser accepts unbalanced terms so that diagnostics can
/// point at the offending residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedTerm {
    c0: Rat,
    c: Vec<Rat>,
    factors: Vec<(LinearForm, Sign)>,
    vars: Vec<String>,
}

impl BalancedTerm {
    pub fn new(
        c0: Rat,
        c: Vec<Rat>,
        factors: Vec<(LinearForm, Sign)>,
        vars: Vec<String>,
    ) -> Result<Self, TermError> {
        if c0.is_zero() || c.iter().any(Zero::is_zero) {
            return Err(TermError::ZeroConstant);
        }
        if c.len() != vars.len() {
            return Err(TermError::ArityMismatch);
        }
        if factors.is_empty() {
            return Err(TermError::EmptyFactorList);
        }
        if factors.iter().any(|(a, _)| a.arity() != vars.len()) {
            return Err(TermError::ArityMismatch);
        }
        Ok(BalancedTerm {
            c0,
            c,
            factors,
            vars,
        })
    }

    /// Number of summation variables.
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn c0(&self) -> &Rat {
        &self.c0
    }

    pub fn c(&self) -> &[Rat] {
        &self.c
    }

    pub fn factors(&self) -> &[(LinearForm, Sign)] {
        &self.factors
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }
}

/// The outcome of the balance check: the residual is
/// `sum_j e_j A_j`, which must vanish identically for a balanced term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceReport {
    pub balanced: bool,
    pub residual: LinearForm,
}

/// Compute the signed sum of the factor forms.
pub fn check_balance(t: &BalancedTerm) -> BalanceReport {
    let mut residual = LinearForm::zero(t.arity());
    for (a, s) in t.factors() {
        residual = residual.add(&a.scale(s.value()));
    }
    BalanceReport {
        balanced: residual.is_zero(),
        residual,
    }
}

/// True when every slice `{k : all A_j(n, k) >= 0}` is finite, i.e. the
/// recession cone of the support polyhedron is the origin.
pub fn check_finiteness(t: &BalancedTerm) -> bool {
    unbounded_direction(t).is_none()
}

/// A nonzero integer direction in which the support recedes, when one
/// exists.  Scaled to content 1.
pub fn unbounded_direction(t: &BalancedTerm) -> Option<Vec<Int>> {
    use num_integer::Integer;
    let rows: Vec<Vec<Rat>> = t
        .factors()
        .iter()
        .map(|(a, _)| {
            a.coeff_k
                .iter()
                .map(|&c| Rat::from_integer(Int::from(c)))
                .collect()
        })
        .collect();
    let v = cone::nonzero_cone_point(&rows, t.arity())?;
    // Clear denominators and divide by the content.
    let mut lcm = Int::one();
    for x in &v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<Int> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let mut gcd = Int::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    Some(ints.into_iter().map(|x| x / &gcd).collect())
}

/// A product of binomials equivalent to a balanced term on its support:
/// `C0^n prod_i C_i^{k_i} prod_b binom(top_b, bottom_b)^{sign_b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialForm {
    pub c0: Rat,
    pub c: Vec<Rat>,
    pub binomials: Vec<(LinearForm, LinearForm, Sign)>,
    pub vars: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnbalancedError {
    pub residual: LinearForm,
}

impl fmt::Display for UnbalancedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "term is not balanced; signed factor sum is nonzero")
    }
}

impl core::error::Error for UnbalancedError {}

/// Rewrite the factorial part of a balanced term as a product of binomials.
///
/// With `A` the common signed sum of the positive (equivalently negative)
/// factors, the factorial part equals the multinomial of `A` over the
/// negative parts divided by the multinomial of `A` over the positive
/// parts, and each multinomial telescopes into binomials
/// `binom(A - a_1 - ... - a_{i-1}, a_i)`.  Trivial `binom(X, X)` and
/// `binom(X, 0)` factors are dropped.
pub fn to_binomial_form(t: &BalancedTerm) -> Result<BinomialForm, UnbalancedError> {
    let report = check_balance(t);
    if !report.balanced {
        return Err(UnbalancedError {
            residual: report.residual,
        });
    }
    let plus: Vec<&LinearForm> = t
        .factors()
        .iter()
        .filter(|(_, s)| *s == Sign::Plus)
        .map(|(a, _)| a)
        .collect();
    let minus: Vec<&LinearForm> = t
        .factors()
        .iter()
        .filter(|(_, s)| *s == Sign::Minus)
        .map(|(a, _)| a)
        .collect();
    let mut total = LinearForm::zero(t.arity());
    for a in &plus {
        total = total.add(a);
    }
    let mut binomials = Vec::new();
    for (parts, sign) in [(&minus, Sign::Plus), (&plus, Sign::Minus)] {
        let mut top = total.clone();
        for part in parts.iter().copied() {
            let next = top.sub(part);
            // binom(top, part); skip the trivial shapes.
            if !part.is_zero() && !next.is_zero() {
                binomials.push((top.clone(), (*part).clone(), sign));
            }
            top = next;
        }
    }
    Ok(BinomialForm {
        c0: t.c0().clone(),
        c: t.c().to_vec(),
        binomials,
        vars: t.vars().to_vec(),
    })
}

/// Inequality system for the slice of the support at a fixed `n`, over the
/// summation variables.
fn support_system(t: &BalancedTerm, n: i64) -> Vec<cone::Ineq> {
    t.factors()
        .iter()
        .map(|(a, _)| cone::Ineq {
            coeffs: a
                .coeff_k
                .iter()
                .map(|&c| Rat::from_integer(Int::from(c)))
                .collect(),
            constant: Rat::from_integer(Int::from(
                a.coeff_n as i128 * n as i128 + a.constant as i128,
            )),
        })
        .collect()
}

/// The finite set of lattice points `k` with all `A_j(n, k) >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSlice {
    pub n: u64,
    pub points: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteSupport {
    /// A direction along which the support recedes.
    pub direction: Vec<Int>,
}

impl fmt::Display for InfiniteSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "support is infinite along a lattice direction")
    }
}

impl core::error::Error for InfiniteSupport {}

/// Enumerate the support slice at `n` in lexicographic order.
///
/// The slice is boxed by projecting the constraint polytope onto each
/// coordinate, then filtered by exact constraint evaluation.
pub fn enumerate_support(t: &BalancedTerm, n: u64) -> Result<SupportSlice, InfiniteSupport> {
    if let Some(direction) = unbounded_direction(t) {
        return Err(InfiniteSupport { direction });
    }
    let n_i = i64::try_from(n).expect("n fits in i64");
    let sys = support_system(t, n_i);
    let r = t.arity();
    let mut ranges: Vec<(i64, i64)> = Vec::with_capacity(r);
    let mut empty = false;
    for axis in 0..r {
        match cone::coordinate_interval(&sys, r, axis) {
            Some((lo, hi)) => {
                let lo = rat_ceil_i64(&lo);
                let hi = rat_floor_i64(&hi);
                if lo > hi {
                    empty = true;
                    break;
                }
                ranges.push((lo, hi));
            }
            None => {
                empty = true;
                break;
            }
        }
    }
    let mut points = Vec::new();
    if !empty {
        // Odometer over the box; last coordinate varies fastest, so the
        // points come out in lexicographic order.
        let mut k: Vec<i64> = ranges.iter().map(|&(lo, _)| lo).collect();
        'odometer: loop {
            if t.factors().iter().all(|(a, _)| a.eval(n_i, &k) >= 0) {
                points.push(k.clone());
            }
            let mut axis = r;
            while axis > 0 {
                axis -= 1;
                if k[axis] < ranges[axis].1 {
                    k[axis] += 1;
                    for j in axis + 1..r {
                        k[j] = ranges[j].0;
                    }
                    continue 'odometer;
                }
            }
            break;
        }
    }
    Ok(SupportSlice { n, points })
}

fn rat_ceil_i64(x: &Rat) -> i64 {
    i64::try_from(&x.ceil().to_integer()).expect("support bound fits in i64")
}

fn rat_floor_i64(x: &Rat) -> i64 {
    i64::try_from(&x.floor().to_integer()).expect("support bound fits in i64")
}

/// Memo table for factorials, shared across an evaluation session.
#[derive(Clone, Debug, Default)]
pub struct FactorialCache {
    values: Vec<Int>,
}

impl FactorialCache {
    pub fn new() -> Self {
        FactorialCache {
            values: vec![Int::one()],
        }
    }

    pub fn factorial(&mut self, m: u64) -> &Int {
        let m = usize::try_from(m).expect("factorial argument fits in usize");
        while self.values.len() <= m {
            let next = self.values.last().unwrap() * Int::from(self.values.len());
            self.values.push(next);
        }
        &self.values[m]
    }
}

/// Evaluation left the support: some factorial argument came out negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeArgument {
    /// Index of the offending factor (or binomial), and its value.
    pub index: usize,
    pub value: i64,
}

impl fmt::Display for NegativeArgument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "factorial argument {} is negative at factor {}",
            self.value, self.index
        )
    }
}

impl core::error::Error for NegativeArgument {}

/// Exact value of `t` at `(n, k)`: `C0^n prod C_i^{k_i} prod A_j!^{e_j}`.
pub fn eval_term(
    t: &BalancedTerm,
    n: u64,
    k: &[i64],
    cache: &mut FactorialCache,
) -> Result<Rat, NegativeArgument> {
    let n_i = i64::try_from(n).expect("n fits in i64");
    let mut acc = crate::exact::rational::pow_rat(t.c0(), n_i);
    for (c, &ki) in t.c().iter().zip(k) {
        acc *= crate::exact::rational::pow_rat(c, ki);
    }
    for (index, (a, sign)) in t.factors().iter().enumerate() {
        let value = a.eval(n_i, k);
        if value < 0 {
            return Err(NegativeArgument { index, value });
        }
        let f = Rat::from_integer(cache.factorial(value as u64).clone());
        match sign {
            Sign::Plus => acc *= f,
            Sign::Minus => acc /= f,
        }
    }
    Ok(acc)
}

/// Exact value of a binomial form at `(n, k)`; the binomial arguments must
/// be nonnegative with `top >= bottom`, which holds on the source term's
/// support.
pub fn eval_binomial_form(
    bf: &BinomialForm,
    n: u64,
    k: &[i64],
    cache: &mut FactorialCache,
) -> Result<Rat, NegativeArgument> {
    let n_i = i64::try_from(n).expect("n fits in i64");
    let mut acc = crate::exact::rational::pow_rat(&bf.c0, n_i);
    for (c, &ki) in bf.c.iter().zip(k) {
        acc *= crate::exact::rational::pow_rat(c, ki);
    }
    for (index, (top, bottom, sign)) in bf.binomials.iter().enumerate() {
        let t_v = top.eval(n_i, k);
        let b_v = bottom.eval(n_i, k);
        for value in [t_v, b_v, t_v - b_v] {
            if value < 0 {
                return Err(NegativeArgument { index, value });
            }
        }
        let binom = cache.factorial(t_v as u64).clone()
            / (cache.factorial(b_v as u64).clone() * cache.factorial((t_v - b_v) as u64));
        let binom = Rat::from_integer(binom);
        match sign {
            Sign::Plus => acc *= binom,
            Sign::Minus => acc /= binom,
        }
    }
    Ok(acc)
}

impl fmt::Display for BalancedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sum {}: ", self.vars.join(", "))?;
        let mut first = true;
        if !self.c0.is_one() {
            write!(f, "{}^n", rat_string(&self.c0))?;
            first = false;
        }
        for (c, v) in self.c.iter().zip(&self.vars) {
            if !c.is_one() {
                if !first {
                    write!(f, " * ")?;
                }
                write!(f, "{}^{}", rat_string(c), v)?;
                first = false;
            }
        }
        for (a, s) in &self.factors {
            if !first {
                write!(f, " {} ", if *s == Sign::Plus { "*" } else { "/" })?;
            } else if *s == Sign::Minus {
                write!(f, "1 / ")?;
            }
            write!(f, "({})!", a.to_string_with(&self.vars))?;
            first = false;
        }
        Ok(())
    }
}
