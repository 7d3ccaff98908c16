//! Transfer of a recurrence to a linear ODE for the generating series
//! `G(z) = sum a_n z^n`, exact singularity analysis, Frobenius exponents,
//! and the obstruction verdict.
//!
//! The exponents attached to an irreducible factor `f` of the leading
//! coefficient are computed for the whole factor at once: the indicial form
//! `I(lambda, alpha)` is reduced modulo `f`, and eliminating `lambda` by a
//! resultant yields one exact polynomial `R(alpha)` over the rationals
//! whose roots are all exponents at all roots of `f`.  Rationality of
//! exponents is then a finite exact question, and the answer is closed
//! under conjugation of the root by construction.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::exact::bipoly::BiPolyQ;
use crate::exact::factor::factor_rational;
use crate::exact::poly::{falling_factorial, normalize_system, PolyQ};
use crate::exact::rational::{rat_i, rat_string, Int, Rat};
use crate::exact::resultant::resultant_eliminate;
use crate::exact::roots::{isolate_roots, rational_roots, IsolatedRoot};
use crate::multisum::ExactSequence;
use crate::recurrence::Recurrence;

/// Isolation radius for singularity boxes.
pub fn root_radius() -> Rat {
    Rat::new(Int::one(), Int::from(10u64).pow(30))
}

/// `sum_i p_i(z) G^(i)(z) + inhom(z) = 0` with `p_m` nonzero.
///
/// Normalized jointly: integer coefficients, overall content 1, `p_m` with
/// positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearODE {
    coeffs: Vec<PolyQ>,
    inhom: PolyQ,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OdeError {
    /// No nonzero `p_m` with `m >= 1`.
    ZeroLeading,
}

impl fmt::Display for OdeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OdeError::ZeroLeading => write!(f, "leading coefficient polynomial is zero"),
        }
    }
}

impl core::error::Error for OdeError {}

impl LinearODE {
    /// Build from `p_0..p_m` and the inhomogeneous part, normalizing the
    /// system; trailing zero coefficients are trimmed first.
    pub fn new(mut coeffs: Vec<PolyQ>, inhom: PolyQ) -> Result<Self, OdeError> {
        while coeffs.last().is_some_and(PolyQ::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(OdeError::ZeroLeading);
        }
        // The sign convention follows p_m, so it goes last in the joint
        // normalization.
        let mut system = coeffs;
        system.insert(0, inhom);
        normalize_system(&mut system);
        let inhom = system.remove(0);
        Ok(LinearODE {
            coeffs: system,
            inhom,
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[PolyQ] {
        &self.coeffs
    }

    pub fn leading(&self) -> &PolyQ {
        self.coeffs.last().unwrap()
    }

    pub fn inhom(&self) -> &PolyQ {
        &self.inhom
    }
}

impl fmt::Display for LinearODE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, p) in self.coeffs.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let g = match i {
                0 => String::from("G"),
                1 => String::from("G'"),
                i => format!("G^({i})"),
            };
            write!(f, "({})*{}", p.to_string_var("z"), g)?;
        }
        if !self.inhom.is_zero() {
            write!(f, " + {}", self.inhom.to_string_var("z"))?;
        }
        write!(f, " = 0")
    }
}

/// Stirling numbers of the second kind `S(p, i)` for `p, i <= max_p`.
fn stirling2_table(max_p: usize) -> Vec<Vec<Int>> {
    let mut table = vec![vec![Int::zero(); max_p + 1]; max_p + 1];
    table[0][0] = Int::one();
    for p in 1..=max_p {
        for i in 1..=p {
            let carry = &table[p - 1][i] * Int::from(i as u64);
            table[p][i] = carry + &table[p - 1][i - 1];
        }
    }
    table
}

/// The ODE satisfied by `G(z) = sum a_n z^n` when `sum_j P_j(n) a_{n+j} = 0`
/// and `a_0..a_{d-1}` are the given initial values.
///
/// Multiply the recurrence by `z^{n+d}` and sum over `n >= 0`: the shift
/// `a_{n+j}` becomes `z^{d-j} P_j(theta - j)` acting on `G` (with
/// `theta = z d/dz`), minus the finitely many boundary terms from
/// `a_0..a_{j-1}`, which are collected into the inhomogeneous part.  Powers
/// of `theta` expand into `z^i (d/dz)^i` through Stirling numbers of the
/// second kind.  When no derivative survives, the relation is algebraic;
/// one differentiation then makes it a first-order ODE.
pub fn rec_to_ode(r: &Recurrence, initial: &[Rat]) -> LinearODE {
    let d = r.order();
    assert_eq!(initial.len(), d, "need exactly d initial values");
    let shifted: Vec<PolyQ> = r
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, p)| p.compose_shift(&rat_i(-(j as i64))))
        .collect();
    let max_p = shifted.iter().filter_map(PolyQ::degree).max().unwrap();
    let stirling = stirling2_table(max_p);
    let mut operator = vec![PolyQ::zero(); max_p + 1];
    for (j, q) in shifted.iter().enumerate() {
        for (p, c) in q.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, s) in stirling[p].iter().enumerate().take(p + 1) {
                if s.is_zero() {
                    continue;
                }
                let coeff = c * Rat::from_integer(s.clone());
                operator[i] = operator[i].add(&PolyQ::monomial(i + d - j, coeff));
            }
        }
    }
    let mut boundary = PolyQ::zero();
    for (j, p) in r.coeffs().iter().enumerate().skip(1) {
        for (m, a) in initial.iter().enumerate().take(j) {
            let c = p.eval(&rat_i(m as i64 - j as i64)) * a;
            boundary = boundary.add(&PolyQ::monomial(d - j + m, c));
        }
    }
    let mut inhom = boundary.neg();
    while operator.last().is_some_and(PolyQ::is_zero) {
        operator.pop();
    }
    if operator.len() < 2 {
        // Algebraic relation p_0 G + inhom = 0: differentiate once.
        let p0 = operator.pop().expect("transfer of a nonzero recurrence");
        operator = vec![p0.derivative(), p0];
        inhom = inhom.derivative();
    }
    LinearODE::new(operator, inhom).expect("leading coefficient survives the transfer")
}

/// Truncated power-series check: substituting `a_0..a_N` into the ODE
/// leaves no residue through the order the truncation can guarantee,
/// `N - m - max deg p_i`.
pub fn series_consistency(o: &LinearODE, s: &ExactSequence) -> bool {
    assert_eq!(s.offset, 0, "series substitution starts at a_0");
    let truncation = PolyQ::from_coeffs(s.values.clone());
    let mut residue = o.inhom.clone();
    let mut derivative = truncation;
    for p in &o.coeffs {
        residue = residue.add(&p.mul(&derivative));
        derivative = derivative.derivative();
    }
    let max_deg = o.coeffs.iter().filter_map(PolyQ::degree).max().unwrap();
    let guaranteed = s.len().saturating_sub(1 + o.order() + max_deg);
    (0..guaranteed).all(|j| residue.coeff(j).is_zero())
}

/// One singular factor of the leading coefficient, with its exponent data
/// when computed.
#[derive(Clone, Debug)]
pub struct SingularFactor {
    /// Irreducible (or, for degree >= 5, possibly composite) primitive
    /// factor of `p_m`.
    pub poly: PolyQ,
    pub multiplicity: usize,
    pub roots: Vec<IsolatedRoot>,
    pub regular: bool,
    /// `R(alpha)`, the exact polynomial whose roots are all exponents at
    /// all roots of the factor; `None` until computed or when the factor
    /// is irregular.
    pub exponent_poly: Option<PolyQ>,
    /// Rational exponents, repeated by multiplicity.
    pub rational_exponents: Vec<Rat>,
    pub has_irrational_exponent: bool,
}

/// Factorization of the leading coefficient with per-factor analysis.
#[derive(Clone, Debug)]
pub struct SingularityReport {
    /// `p_m = constant * prod factor^multiplicity`.
    pub constant: Rat,
    pub factors: Vec<SingularFactor>,
    /// Whether `z = 0` divides the leading coefficient.
    pub origin_is_candidate: bool,
}

impl SingularityReport {
    /// The factor `z`, when present.
    pub fn origin_factor(&self) -> Option<&SingularFactor> {
        self.factors.iter().find(|f| is_origin(&f.poly))
    }

    /// Factors with roots away from the origin.
    pub fn finite_nonzero_factors(&self) -> impl Iterator<Item = &SingularFactor> {
        self.factors.iter().filter(|f| !is_origin(&f.poly))
    }
}

fn is_origin(f: &PolyQ) -> bool {
    f == &PolyQ::x()
}

/// Factor the leading coefficient, isolate the roots, and test the Fuchs
/// criterion at each factor: `ord_f(p_i) >= ord_f(p_m) - (m - i)` for all
/// `i`, evaluated exactly by polynomial division.
pub fn singular_points(o: &LinearODE) -> SingularityReport {
    let m = o.order();
    let (constant, factors) = factor_rational(o.leading());
    let radius = root_radius();
    let factors = factors
        .into_iter()
        .map(|(poly, multiplicity)| {
            let lead_order = o.leading().order_of(&poly);
            let regular = o.coeffs.iter().enumerate().all(|(i, p)| {
                p.is_zero() || p.order_of(&poly) + (m - i) >= lead_order
            });
            let roots = isolate_roots(&poly, &radius);
            SingularFactor {
                poly,
                multiplicity,
                roots,
                regular,
                exponent_poly: None,
                rational_exponents: Vec::new(),
                has_irrational_exponent: false,
            }
        })
        .collect();
    SingularityReport {
        constant,
        factors,
        origin_is_candidate: o.leading().coeff(0).is_zero(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExponentError {
    /// The factor does not divide the leading coefficient.
    NotAFactor,
    /// The Fuchs criterion fails at this factor.
    IrregularFactor,
    /// The eliminant degenerated to zero (possible only for an uncertified
    /// composite block whose sub-factors carry different local data).
    DegenerateFactor,
}

impl fmt::Display for ExponentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentError::NotAFactor => write!(f, "not a factor of the leading coefficient"),
            ExponentError::IrregularFactor => write!(f, "factor is an irregular singularity"),
            ExponentError::DegenerateFactor => write!(f, "indicial eliminant degenerated"),
        }
    }
}

impl core::error::Error for ExponentError {}

/// The exact exponent polynomial `R(alpha)` at the roots of `f`.
///
/// Writing `p_i = q_i f^{e_i}` with `f` not dividing `q_i`, the local
/// expansion at a root `lambda` of `f` in `w = z - lambda` gives
/// `p_i G^(i) ~ q_i(lambda) f'(lambda)^{e_i} fall(alpha, i) w^{alpha-i+e_i}`
/// on `G = w^alpha`.  The lowest `w`-order terms (`e_i - i` minimal) form
/// the indicial equation; reducing its coefficients modulo `f` and
/// eliminating `lambda` by `Res_lambda(f, I)` yields `R`.
pub fn exponents_at(o: &LinearODE, f: &PolyQ) -> Result<PolyQ, ExponentError> {
    let m = o.order();
    if f.degree().unwrap_or(0) == 0 || o.leading().order_of(f) == 0 {
        return Err(ExponentError::NotAFactor);
    }
    let local: Vec<Option<(usize, PolyQ)>> = o
        .coeffs
        .iter()
        .map(|p| {
            if p.is_zero() {
                None
            } else {
                let e = p.order_of(f);
                let q = (0..e).fold(p.clone(), |acc, _| {
                    acc.div_exact(f).expect("order_of counted the divisions")
                });
                Some((e, q))
            }
        })
        .collect();
    let depth = local
        .iter()
        .enumerate()
        .filter_map(|(i, l)| l.as_ref().map(|(e, _)| *e as i64 - i as i64))
        .min()
        .expect("leading coefficient is nonzero");
    let regular = local[m]
        .as_ref()
        .is_some_and(|(e, _)| *e as i64 - m as i64 == depth);
    if !regular {
        return Err(ExponentError::IrregularFactor);
    }
    let df = f.derivative();
    let mut indicial = BiPolyQ::zero();
    for (i, l) in local.iter().enumerate() {
        let Some((e, q)) = l else { continue };
        if *e as i64 - i as i64 != depth {
            continue;
        }
        let c = df.pow(*e).mul(q).divrem(f).1;
        indicial = indicial.add_product(&c, &falling_factorial(i));
    }
    let r = resultant_eliminate(&indicial, f).expect("factor is nonconstant");
    if r.is_zero() {
        return Err(ExponentError::DegenerateFactor);
    }
    Ok(r)
}

/// Exact rationality test for the roots of `R`: the listed rationals
/// (repeated by multiplicity) account for all roots iff `all_rational`.
pub fn rationality_verdict(r: &PolyQ) -> (bool, Vec<Rat>) {
    let deg = r.degree().expect("exponent polynomial is nonzero");
    let mut rationals = Vec::new();
    let mut count = 0;
    for (root, multiplicity) in rational_roots(r) {
        count += multiplicity;
        for _ in 0..multiplicity {
            rationals.push(root.clone());
        }
    }
    (count == deg, rationals)
}

/// Singularity report with exponent data filled in for every regular
/// factor.
pub fn analyze(o: &LinearODE) -> SingularityReport {
    let mut report = singular_points(o);
    for factor in &mut report.factors {
        if !factor.regular {
            continue;
        }
        match exponents_at(o, &factor.poly) {
            Ok(r) => {
                let (all_rational, rationals) = rationality_verdict(&r);
                factor.exponent_poly = Some(r);
                factor.rational_exponents = rationals;
                factor.has_irrational_exponent = !all_rational;
            }
            Err(_) => {
                // Leave the exponent data empty; the verdict treats the
                // factor as undecided.
            }
        }
    }
    report
}

/// The recurrence on series coefficients implied by the ODE:
/// `sum_s C_s(N) a_{N+s} = 0` for all `N >= valid_from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientRecurrence {
    /// Shift of the first (trailing) coefficient; typically negative.
    pub s_min: i64,
    /// `C_{s_min}..C_{s_max}` as polynomials in `N`, first and last
    /// nonzero.
    pub coeffs: Vec<PolyQ>,
    pub valid_from: u64,
}

/// Extract the coefficient recurrence by reading off the `z^N` coefficient
/// of the ODE: `[z^N] z^t G^(i) = fall(N-t+i, i) a_{N-t+i}`.
pub fn coefficient_recurrence(o: &LinearODE) -> CoefficientRecurrence {
    let m = o.order();
    let max_t = o.coeffs.iter().filter_map(PolyQ::degree).max().unwrap();
    // Shifts s = i - t range over [-max_t, m].
    let mut coeffs = vec![PolyQ::zero(); max_t + m + 1];
    for (i, p) in o.coeffs.iter().enumerate() {
        let fall = falling_factorial(i);
        for (t, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let shifted = fall.compose_shift(&rat_i(i as i64 - t as i64)).scale(c);
            let slot = (i as i64 - t as i64 + max_t as i64) as usize;
            coeffs[slot] = coeffs[slot].add(&shifted);
        }
    }
    let mut s_min = -(max_t as i64);
    while coeffs.first().is_some_and(PolyQ::is_zero) {
        coeffs.remove(0);
        s_min += 1;
    }
    while coeffs.last().is_some_and(PolyQ::is_zero) {
        coeffs.pop();
    }
    assert!(!coeffs.is_empty(), "nonzero operator has nonzero coefficient action");
    let inhom_bound = o.inhom.degree().map(|d| d as u64 + 1).unwrap_or(0);
    CoefficientRecurrence {
        s_min,
        coeffs,
        valid_from: (max_t as u64).max(inhom_bound),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    /// Every finite nonzero singularity is regular with exclusively
    /// irrational exponents, and the sequence data rules out a polynomial
    /// generating series: no balanced multisum can satisfy this ODE.
    ObstructionIrrationalExponent,
    /// Every singular factor has exclusively rational exponents.
    ConsistentRationalExponents,
    /// Mixed or undecided local data; the obstruction argument does not
    /// close.
    Inconclusive,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            VerdictKind::ObstructionIrrationalExponent => "ObstructionIrrationalExponent",
            VerdictKind::ConsistentRationalExponents => "ConsistentRationalExponents",
            VerdictKind::Inconclusive => "Inconclusive",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// Human-readable trace of the decision: factors, exponents, and the
    /// steps that did or did not close.
    pub justification: Vec<String>,
}

/// The obstruction verdict for the ODE against its sequence data.
///
/// `ObstructionIrrationalExponent` requires all of: every finite nonzero
/// factor of the leading coefficient is regular and carries no rational
/// exponent at all; the coefficient recurrence determines values backward
/// (its trailing coefficient has no integer root in the valid range); and
/// the sequence is visibly nonzero where that backward chain reaches.
/// Under those hypotheses a polynomial generating series would force every
/// value to zero, so the series has a finite singularity, whose exponents
/// would all have to be rational for a balanced multisum.
pub fn obstruction_verdict(
    o: &LinearODE,
    s: &ExactSequence,
    report: &SingularityReport,
) -> Verdict {
    let mut trace = Vec::new();
    for factor in &report.factors {
        let mut line = format!(
            "factor {}: {}",
            factor.poly.to_string_var("z"),
            if factor.regular { "regular" } else { "irregular" }
        );
        match &factor.exponent_poly {
            Some(r) => {
                line += &format!(", exponents R(alpha) = {}", r.to_string_var("alpha"));
                if factor.rational_exponents.is_empty() {
                    line += ", no rational exponents";
                } else {
                    let list: Vec<String> =
                        factor.rational_exponents.iter().map(rat_string).collect();
                    line += &format!(", rational exponents {{{}}}", list.join(", "));
                }
                if factor.has_irrational_exponent {
                    line += ", irrational exponents present";
                }
            }
            None => line += ", exponents undecided",
        }
        trace.push(line);
    }
    if report.factors.is_empty() {
        trace.push(String::from("leading coefficient has no roots"));
    }
    let nonzero_factors: Vec<&SingularFactor> = report.finite_nonzero_factors().collect();
    let all_irrational = !nonzero_factors.is_empty()
        && nonzero_factors.iter().all(|f| {
            f.regular
                && f.exponent_poly.is_some()
                && f.rational_exponents.is_empty()
                && f.has_irrational_exponent
        });
    let rational_everywhere = report
        .factors
        .iter()
        .all(|f| f.exponent_poly.is_some() && !f.has_irrational_exponent);
    if all_irrational {
        let cr = coefficient_recurrence(o);
        let trailing = &cr.coeffs[0];
        let blocking_root = rational_roots(trailing)
            .into_iter()
            .map(|(root, _)| root)
            .find(|root| {
                root.denom().is_one()
                    && root.numer() >= &Int::from(cr.valid_from)
            });
        let reach = cr.valid_from as i64 + cr.s_min;
        let witness = s
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| (s.offset + i as u64, v))
            .find(|(n, v)| *n as i64 >= reach && !v.is_zero());
        match (blocking_root, witness) {
            (None, Some((n, v))) => {
                trace.push(format!(
                    "trailing coefficient {} of the coefficient recurrence has no integer root at N >= {}: values are forced backward",
                    trailing.to_string_var("N"),
                    cr.valid_from
                ));
                trace.push(format!(
                    "a_{} = {} is nonzero, so the series is not a polynomial",
                    n,
                    rat_string(v)
                ));
                trace.push(String::from(
                    "every finite nonzero singularity is regular with exclusively irrational exponents",
                ));
                Verdict {
                    kind: VerdictKind::ObstructionIrrationalExponent,
                    justification: trace,
                }
            }
            (Some(root), _) => {
                trace.push(format!(
                    "trailing coefficient {} vanishes at integer N = {}; backward forcing breaks",
                    trailing.to_string_var("N"),
                    rat_string(&root)
                ));
                Verdict {
                    kind: VerdictKind::Inconclusive,
                    justification: trace,
                }
            }
            (None, None) => {
                trace.push(format!(
                    "no nonzero sequence value visible at index >= {}; a polynomial series is not excluded",
                    reach
                ));
                Verdict {
                    kind: VerdictKind::Inconclusive,
                    justification: trace,
                }
            }
        }
    } else if rational_everywhere {
        trace.push(String::from("every singular factor has exclusively rational exponents"));
        Verdict {
            kind: VerdictKind::ConsistentRationalExponents,
            justification: trace,
        }
    } else {
        trace.push(String::from(
            "local exponent data is mixed or undecided; the obstruction argument does not close",
        ));
        Verdict {
            kind: VerdictKind::Inconclusive,
            justification: trace,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::multisum::{eval_sequence, Provenance};
    use crate::recurrence::{
        counterexample_recurrence, extend_sequence, guess_recurrence,
    };
    use crate::term::parse_term;
    use num_traits::Signed;

    fn counterexample_ode() -> LinearODE {
        rec_to_ode(&counterexample_recurrence(), &[rat_i(0), rat_i(1)])
    }

    #[test]
    fn counterexample_transfer_matches_the_derivation() {
        let o = counterexample_ode();
        assert_eq!(o.order(), 1);
        assert_eq!(o.coeffs()[0], PolyQ::from_i64(&[-3, -4, 1]));
        assert_eq!(o.coeffs()[1], PolyQ::from_i64(&[0, 2, -7, 2]));
        assert_eq!(o.inhom(), &PolyQ::from_i64(&[0, 1]));
    }

    #[test]
    fn geometric_series_transfer() {
        let r = crate::recurrence::Recurrence::new(vec![
            PolyQ::from_i64(&[-2]),
            PolyQ::from_i64(&[1]),
        ])
        .unwrap();
        let o = rec_to_ode(&r, &[rat_i(1)]);
        // (2z - 1)G' + 2G = 0, the normalized form of (1 - 2z)G' - 2G = 0.
        assert_eq!(o.coeffs()[0], PolyQ::from_i64(&[2]));
        assert_eq!(o.coeffs()[1], PolyQ::from_i64(&[-1, 2]));
        assert!(o.inhom().is_zero());
    }

    #[test]
    fn zero_solution_when_initial_value_vanishes() {
        let r = crate::recurrence::Recurrence::new(vec![
            PolyQ::from_i64(&[-1]),
            PolyQ::from_i64(&[1]),
        ])
        .unwrap();
        let o = rec_to_ode(&r, &[rat_i(0)]);
        assert!(o.inhom().is_zero());
        let zero = ExactSequence::new(0, vec![rat_i(0); 20], Provenance::External);
        assert!(series_consistency(&o, &zero));
    }

    #[test]
    fn series_substitution_annihilates_the_ode() {
        let r = counterexample_recurrence();
        let s = extend_sequence(&r, &[rat_i(0), rat_i(1)], 60).unwrap();
        let o = counterexample_ode();
        assert!(series_consistency(&o, &s));
        // A wrong sequence leaves a residue.
        let t = parse_term("sum k: (n+k)!^2 * k!^-4 * (n-k)!^-2").unwrap();
        let apery = eval_sequence(&t, 60).unwrap();
        assert!(!series_consistency(&o, &apery));
    }

    #[test]
    fn apery_pipeline_is_series_consistent() {
        let t = parse_term("sum k: (n+k)!^2 * k!^-4 * (n-k)!^-2").unwrap();
        let s = eval_sequence(&t, 40).unwrap();
        let r = guess_recurrence(&s, 6, 8).unwrap().unwrap();
        let o = rec_to_ode(&r, &s.values[..r.order()]);
        assert!(series_consistency(&o, &s));
    }

    #[test]
    fn counterexample_singularities_are_regular() {
        let o = counterexample_ode();
        let report = singular_points(&o);
        assert!(report.origin_is_candidate);
        assert_eq!(report.factors.len(), 2);
        assert_eq!(report.factors[0].poly, PolyQ::from_i64(&[0, 1]));
        assert_eq!(report.factors[1].poly, PolyQ::from_i64(&[2, -7, 2]));
        assert!(report.factors.iter().all(|f| f.regular && f.multiplicity == 1));
        // Roots near 0.313859 and 3.186141.
        let quad = &report.factors[1];
        let mut centers: Vec<f64> = quad.roots.iter().map(|r| r.root.center_f64().0).collect();
        centers.sort_by(f64::total_cmp);
        assert!((centers[0] - 0.31385934).abs() < 1e-6);
        assert!((centers[1] - 3.18614066).abs() < 1e-6);
    }

    #[test]
    fn fuchs_criterion_flags_irregular_origin() {
        // z^3 G' + G = 0.
        let o = LinearODE::new(
            vec![PolyQ::one(), PolyQ::monomial(3, rat_i(1))],
            PolyQ::zero(),
        )
        .unwrap();
        let report = singular_points(&o);
        assert_eq!(report.factors.len(), 1);
        assert!(!report.factors[0].regular);
        assert_eq!(
            exponents_at(&o, &report.factors[0].poly),
            Err(ExponentError::IrregularFactor)
        );
    }

    #[test]
    fn exponent_polynomials_match_the_oracles() {
        let o = counterexample_ode();
        let quad = PolyQ::from_i64(&[2, -7, 2]);
        assert_eq!(exponents_at(&o, &quad).unwrap(), PolyQ::from_i64(&[-31, 88, 44]));
        let origin = PolyQ::x();
        assert_eq!(exponents_at(&o, &origin).unwrap(), PolyQ::from_i64(&[-3, 2]));
        let geo = LinearODE::new(
            vec![PolyQ::from_i64(&[2]), PolyQ::from_i64(&[-1, 2])],
            PolyQ::zero(),
        )
        .unwrap();
        assert_eq!(
            exponents_at(&geo, &PolyQ::from_i64(&[-1, 2])).unwrap(),
            PolyQ::from_i64(&[1, 1])
        );
        assert_eq!(exponents_at(&o, &PolyQ::one()), Err(ExponentError::NotAFactor));
        assert_eq!(
            exponents_at(&o, &PolyQ::from_i64(&[1, 1])),
            Err(ExponentError::NotAFactor)
        );
    }

    #[test]
    fn rationality_verdict_examples() {
        let (all, roots) = rationality_verdict(&PolyQ::from_i64(&[-31, 88, 44]));
        assert!(!all);
        assert!(roots.is_empty());
        let (all, roots) = rationality_verdict(&PolyQ::from_i64(&[-3, 5, 2]));
        assert!(all);
        assert_eq!(roots, vec![rat_i(-3), rat(1, 2)]);
        let (all, roots) = rationality_verdict(&PolyQ::from_i64(&[-3, 2]));
        assert!(all);
        assert_eq!(roots, vec![rat(3, 2)]);
    }

    #[test]
    fn numeric_exponents_agree_with_the_eliminant() {
        // At each isolated root of the factor, the order-1 indicial
        // equation gives alpha = -c_0(lambda)/c_1(lambda); that value must
        // sit inside an isolated root box of R(alpha).
        let o = counterexample_ode();
        let quad = PolyQ::from_i64(&[2, -7, 2]);
        let r = exponents_at(&o, &quad).unwrap();
        let tight = Rat::new(Int::one(), Int::from(10u64).pow(50));
        let alpha_boxes = isolate_roots(&r, &tight);
        let p0 = &o.coeffs()[0];
        let dq = quad.derivative();
        for root in isolate_roots(&quad, &tight) {
            let lambda = root.root.center_re.clone();
            // c_1 = f' q_1 mod f evaluated at lambda, with q_1 = p_1/f.
            let c1 = dq.eval(&lambda) * o.coeffs()[1].div_exact(&quad).unwrap().eval(&lambda);
            let c0 = p0.eval(&lambda);
            let alpha = -c0 / c1;
            let hit = alpha_boxes.iter().any(|b| {
                let d = (b.root.center_re.clone() - &alpha).abs();
                d <= &b.root.radius + Rat::new(Int::one(), Int::from(10u64).pow(20))
            });
            assert!(hit, "numeric exponent missed every box");
        }
    }

    #[test]
    fn coefficient_recurrence_recovers_the_source() {
        let o = counterexample_ode();
        let cr = coefficient_recurrence(&o);
        assert_eq!(cr.s_min, -2);
        assert_eq!(cr.valid_from, 3);
        // Re-indexing by n = N + s_min must reproduce the original
        // recurrence coefficients.
        let source = counterexample_recurrence();
        for (j, p) in source.coeffs().iter().enumerate() {
            let back = cr.coeffs[j].compose_shift(&rat_i(-cr.s_min));
            assert_eq!(&back, p);
        }
    }

    #[test]
    fn verdict_obstruction_for_the_counterexample() {
        let o = counterexample_ode();
        let s = extend_sequence(&counterexample_recurrence(), &[rat_i(0), rat_i(1)], 30).unwrap();
        let report = analyze(&o);
        let verdict = obstruction_verdict(&o, &s, &report);
        assert_eq!(verdict.kind, VerdictKind::ObstructionIrrationalExponent);
        assert!(verdict
            .justification
            .iter()
            .any(|l| l.contains("no rational exponents")));
    }

    #[test]
    fn verdict_consistent_for_the_geometric_series() {
        let r = crate::recurrence::Recurrence::new(vec![
            PolyQ::from_i64(&[-2]),
            PolyQ::from_i64(&[1]),
        ])
        .unwrap();
        let o = rec_to_ode(&r, &[rat_i(1)]);
        let s = extend_sequence(&r, &[rat_i(1)], 30).unwrap();
        let verdict = obstruction_verdict(&o, &s, &analyze(&o));
        assert_eq!(verdict.kind, VerdictKind::ConsistentRationalExponents);
    }

    #[test]
    fn verdict_inconclusive_for_mixed_factors() {
        // p_1 = (2z-1)(2z^2-7z+2): exponent -1 at z = 1/2, irrational
        // exponents at the quadratic's roots.
        let p1 = PolyQ::from_i64(&[-1, 2]).mul(&PolyQ::from_i64(&[2, -7, 2]));
        let p0 = PolyQ::from_i64(&[2, -7, 2])
            .scale(&rat_i(2))
            .add(&PolyQ::from_i64(&[-1, 2]));
        let o = LinearODE::new(vec![p0, p1], PolyQ::zero()).unwrap();
        let report = analyze(&o);
        let linear = report
            .factors
            .iter()
            .find(|f| f.poly == PolyQ::from_i64(&[-1, 2]))
            .unwrap();
        assert!(!linear.has_irrational_exponent);
        let quad = report
            .factors
            .iter()
            .find(|f| f.poly == PolyQ::from_i64(&[2, -7, 2]))
            .unwrap();
        assert!(quad.has_irrational_exponent);
        let s = ExactSequence::new(0, vec![rat_i(1); 20], Provenance::External);
        let verdict = obstruction_verdict(&o, &s, &report);
        assert_eq!(verdict.kind, VerdictKind::Inconclusive);
    }

    #[test]
    fn verdict_inconclusive_for_an_all_zero_sequence() {
        let o = counterexample_ode();
        let zero = ExactSequence::new(0, vec![rat_i(0); 20], Provenance::External);
        let verdict = obstruction_verdict(&o, &zero, &analyze(&o));
        assert_eq!(verdict.kind, VerdictKind::Inconclusive);
        assert!(verdict
            .justification
            .iter()
            .any(|l| l.contains("polynomial series is not excluded")));
    }

    #[test]
    fn verdict_is_stable_under_precision_refinement() {
        // The verdict depends only on exact data, so re-isolating roots at
        // other radii changes nothing.
        let o = counterexample_ode();
        let s = extend_sequence(&counterexample_recurrence(), &[rat_i(0), rat_i(1)], 25).unwrap();
        let verdict_default = obstruction_verdict(&o, &s, &analyze(&o)).kind;
        let mut report = analyze(&o);
        for f in &mut report.factors {
            f.roots = isolate_roots(&f.poly, &rat(1, 1000));
        }
        let verdict_coarse = obstruction_verdict(&o, &s, &report).kind;
        assert_eq!(verdict_default, verdict_coarse);
    }
}
