//! Numeric estimation of the asymptotic shape of a sequence, `a_n ~ C
//! lambda^n n^theta` up to a Gevrey factorial factor, and cross-validation
//! against the exact local data of its ODE.
//!
//! Ratios of exact rational values are extrapolated to `n = infinity` by
//! Neville's scheme in the variable `h = 1/n`, entirely in rational
//! arithmetic; floats appear only in the reported estimates.  The error
//! gauge of every fit is the gap between the last two extrapolants, and
//! downstream consumers treat `10 x gauge` as the trust radius.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::exact::rational::{ln_rat_abs, rat_i, rat_to_f64, Rat};
use crate::exact::roots::{isolate_roots, ComplexBox};
use crate::multisum::ExactSequence;
use crate::ode::{SingularFactor, SingularityReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitError {
    /// The sequence ends in zeros; there is no tail to fit.
    AllZeroTail,
    /// The trailing nonzero window is shorter than `required` values.
    TooShort { required: usize },
    /// Ratio signs oscillate; no single dominant real singularity.
    NoDominantRatio,
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::AllZeroTail => write!(f, "sequence tail is all zero"),
            FitError::TooShort { required } => {
                write!(f, "need a trailing nonzero window of {required} values")
            }
            FitError::NoDominantRatio => write!(f, "ratio signs oscillate; no dominant ratio"),
        }
    }
}

impl core::error::Error for FitError {}

/// One Richardson/Neville fit: the estimate, its error gauge, and the
/// successive extrapolants that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Extrapolation {
    pub estimate: f64,
    /// Gap between the last two extrapolants.
    pub gauge: f64,
    /// Diagonal of the Neville tableau, coarsest first.
    pub diagonal: Vec<f64>,
    /// The final extrapolant before float conversion, for high-precision
    /// rendering.
    pub exact: Rat,
}

/// Gevrey classification from the `n log n` slope of `log |a_n|`.
#[derive(Clone, Debug, PartialEq)]
pub struct GevreyFit {
    pub raw: f64,
    /// Gap between the full-window and half-window slopes.
    pub gauge: f64,
    /// Nearest rational with denominator <= 4 when the raw slope resolves
    /// to it within the trust radius.
    pub snapped: Option<Rat>,
}

impl GevreyFit {
    /// Whether the class resolved to exactly `s = 0` (power-law times
    /// exponential growth), the regime where ratio extrapolation applies.
    pub fn is_zero(&self) -> bool {
        self.snapped.as_ref().is_some_and(Zero::is_zero)
    }
}

/// The assembled asymptotic estimate for one sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticFit {
    pub gevrey: GevreyFit,
    /// Present when the Gevrey class resolves to 0.
    pub growth: Option<Extrapolation>,
    pub theta: Option<Extrapolation>,
}

/// Trailing window of consecutive nonzero values, as absolute indices
/// `[start, end]`.
fn nonzero_window(s: &ExactSequence) -> Option<(u64, u64)> {
    let mut end = None;
    let mut start = 0;
    for (i, v) in s.values.iter().enumerate().rev() {
        if v.is_zero() {
            break;
        }
        if end.is_none() {
            end = Some(s.offset + i as u64);
        }
        start = s.offset + i as u64;
    }
    end.map(|e| (start, e))
}

/// Neville extrapolation to `h = 0` of exact samples `(h_i, y_i)`;
/// returns the tableau diagonal.
fn neville_to_zero(nodes: &[(Rat, Rat)]) -> Vec<Rat> {
    let d = nodes.len();
    let mut arr: Vec<Rat> = nodes.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..d {
        for k in (j..d).rev() {
            let hi = &nodes[k].0;
            let hj = &nodes[k - j].0;
            // P(0) = (h_{k-j} P_hi(0) - h_k P_lo(0)) / (h_{k-j} - h_k).
            arr[k] = (hj * &arr[k] - hi * &arr[k - 1]) / (hj - hi);
        }
    }
    arr
}

/// Ladder of sample indices inside `[start, top]`, dense near `top`:
/// `n_i = start + (span >> (depth - i))` for `i = 0..=depth`.
fn node_ladder(start: u64, top: u64, depth: usize) -> Vec<u64> {
    let span = top - start;
    (0..=depth).map(|i| start + (span >> (depth - i))).collect()
}

/// Exact ratio samples `(1/n, |a_{n+1}/a_n|)` on the node ladder, after
/// checking that all ratios in the window share one sign.
fn ratio_nodes(
    s: &ExactSequence,
    depth: usize,
    required: usize,
) -> Result<Vec<(Rat, Rat)>, FitError> {
    assert!(depth >= 1, "extrapolation needs at least two levels");
    let (start, end) = nonzero_window(s).ok_or(FitError::AllZeroTail)?;
    if ((end - start) as usize) + 1 < required {
        return Err(FitError::TooShort { required });
    }
    let value = |n: u64| s.get(n).expect("window is in range");
    // Ratio sign without division: sign(a_{n+1}/a_n) = [same sign].
    let same = |n: u64| value(n).is_positive() == value(n + 1).is_positive();
    let pattern = same(start);
    for n in start..end {
        if same(n) != pattern {
            return Err(FitError::NoDominantRatio);
        }
    }
    Ok(node_ladder(start, end - 1, depth)
        .into_iter()
        .map(|n| {
            let h = rat_i(n as i64).recip();
            let r = (value(n + 1) / value(n)).abs();
            (h, r)
        })
        .collect())
}

fn extrapolation_from(diagonal: Vec<Rat>) -> Extrapolation {
    let exact = diagonal.last().unwrap().clone();
    let diagonal: Vec<f64> = diagonal.iter().map(rat_to_f64).collect();
    let estimate = *diagonal.last().unwrap();
    let gauge = (estimate - diagonal[diagonal.len() - 2]).abs();
    Extrapolation {
        estimate,
        gauge,
        diagonal,
        exact,
    }
}

/// Estimate `lim |a_n|^{1/n}` by extrapolating the ratios
/// `|a_{n+1}/a_n|` to `n = infinity` through `depth` Neville levels.
///
/// Needs a trailing nonzero window of at least `8 << depth` values and a
/// ratio tail of constant sign.
pub fn fit_growth(s: &ExactSequence, depth: usize) -> Result<Extrapolation, FitError> {
    let nodes = ratio_nodes(s, depth, 8 << depth)?;
    Ok(extrapolation_from(neville_to_zero(&nodes)))
}

/// Estimate the power-of-n exponent `theta` by extrapolating
/// `theta_n = n (|a_{n+1}/a_n| / growth - 1)`.
///
/// `growth` comes from `fit_growth` or from an exact prediction; its own
/// error enters `theta_n` amplified by `n`, so feed the best value
/// available.
pub fn fit_exponent(
    s: &ExactSequence,
    growth: f64,
    depth: usize,
) -> Result<Extrapolation, FitError> {
    let g = Rat::from_float(growth).filter(|g| g.is_positive());
    let g = g.ok_or(FitError::NoDominantRatio)?;
    let nodes: Vec<(Rat, Rat)> = ratio_nodes(s, depth, 8 << depth)?
        .into_iter()
        .map(|(h, r)| {
            let theta = (r / &g - rat_i(1)) / &h;
            (h, theta)
        })
        .collect();
    Ok(extrapolation_from(neville_to_zero(&nodes)))
}

/// Least-squares slope of `ln |a_n|` against the basis
/// `{n ln n, n, ln n, 1}` over absolute indices `[start, end]`; the first
/// coordinate is the Gevrey estimate.
fn gevrey_slope(s: &ExactSequence, start: u64, end: u64) -> f64 {
    let mut normal = [[0.0f64; 4]; 4];
    let mut rhs = [0.0f64; 4];
    for n in start.max(1)..=end {
        let x = n as f64;
        let row = [x * libm::log(x), x, libm::log(x), 1.0];
        let y = ln_rat_abs(s.get(n).expect("window is in range")).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                normal[i][j] += row[i] * row[j];
            }
            rhs[i] += row[i] * y;
        }
    }
    // Gaussian elimination with partial pivoting on the 4x4 system.
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|a, b| normal[*a][col].abs().total_cmp(&normal[*b][col].abs()))
            .unwrap();
        normal.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..4 {
            let f = normal[row][col] / normal[col][col];
            for j in col..4 {
                normal[row][j] -= f * normal[col][j];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut sol = [0.0f64; 4];
    for row in (0..4).rev() {
        let mut acc = rhs[row];
        for j in row + 1..4 {
            acc -= normal[row][j] * sol[j];
        }
        sol[row] = acc / normal[row][row];
    }
    sol[0]
}

/// Estimate the Gevrey parameter `s` in `|a_n| ~ C^n n!^s n^theta` from
/// the `n ln n` slope of `ln |a_n|`, snapping to a rational with
/// denominator <= 4 when the slope resolves to one.
///
/// The snap radius is `max(10 x gauge, 1e-3)`: the basis is nearly
/// collinear over practical windows, so the double-precision fit is not
/// trusted below that floor.
pub fn classify_gevrey(s: &ExactSequence) -> Result<GevreyFit, FitError> {
    let (start, end) = nonzero_window(s).ok_or(FitError::AllZeroTail)?;
    if ((end - start) as usize) + 1 < 32 {
        return Err(FitError::TooShort { required: 32 });
    }
    let raw = gevrey_slope(s, start, end);
    let half = gevrey_slope(s, start + (end - start) / 2, end);
    let gauge = (raw - half).abs();
    let radius = (10.0 * gauge).max(1e-3);
    let mut snapped = None;
    let mut best = radius;
    for q in 1..=4i64 {
        let p = libm::round(raw * q as f64) as i64;
        let dist = (raw - p as f64 / q as f64).abs();
        if dist < best {
            best = dist;
            snapped = Some(Rat::new(p.into(), q.into()));
        }
    }
    Ok(GevreyFit {
        raw,
        gauge,
        snapped,
    })
}

/// Run the full fit: Gevrey class first, then ratio extrapolation of
/// growth and exponent when the class resolves to 0.
pub fn fit_all(s: &ExactSequence, depth: usize) -> Result<AsymptoticFit, FitError> {
    let gevrey = classify_gevrey(s)?;
    if !gevrey.is_zero() {
        return Ok(AsymptoticFit {
            gevrey,
            growth: None,
            theta: None,
        });
    }
    let growth = fit_growth(s, depth)?;
    let theta = fit_exponent(s, growth.estimate, depth)?;
    Ok(AsymptoticFit {
        gevrey,
        growth: Some(growth),
        theta: Some(theta),
    })
}

/// One compared quantity in a consistency record.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchRecord {
    pub fitted: f64,
    pub predicted: f64,
    pub distance: f64,
    pub tolerance: f64,
    pub within: bool,
}

fn match_record(fitted: f64, predicted: f64, tolerance: f64) -> MatchRecord {
    let distance = (fitted - predicted).abs();
    MatchRecord {
        fitted,
        predicted,
        distance,
        tolerance,
        within: distance <= tolerance,
    }
}

/// Outcome of checking a numeric fit against exact singularity data.
#[derive(Clone, Debug)]
pub struct Consistency {
    /// All available comparisons passed and at least the growth was
    /// checkable.
    pub consistent: bool,
    pub growth: Option<MatchRecord>,
    pub theta: Option<MatchRecord>,
    /// The smallest-modulus finite nonzero singularity used for the
    /// growth prediction.
    pub matched_root: Option<ComplexBox>,
    /// The exponent root `alpha` whose `-alpha - 1` best matches the
    /// fitted theta.
    pub matched_exponent: Option<f64>,
    pub notes: Vec<String>,
}

fn modulus(b: &ComplexBox) -> f64 {
    let (re, im) = b.center_f64();
    libm::sqrt(re * re + im * im)
}

/// Check the fitted growth and exponent against the ODE's exact local
/// data: growth against `1/|lambda_min|` over the finite nonzero
/// singularities, theta against `-alpha - 1` for the exponent roots of
/// the factor owning `lambda_min`.
///
/// Trust radii: `max(10 x gauge, 1e-6 (1 + |growth|))` for growth,
/// `max(10 x gauge, 0.05)` for theta.
pub fn cross_validate(fit: &AsymptoticFit, report: &SingularityReport) -> Consistency {
    let mut notes = Vec::new();
    let mut nearest: Option<(&SingularFactor, &ComplexBox)> = None;
    for factor in report.finite_nonzero_factors() {
        for root in &factor.roots {
            if nearest
                .as_ref()
                .is_none_or(|(_, best)| modulus(&root.root) < modulus(best))
            {
                nearest = Some((factor, &root.root));
            }
        }
    }
    let Some((factor, root)) = nearest else {
        notes.push(String::from("no finite nonzero singularity to compare against"));
        return Consistency {
            consistent: false,
            growth: None,
            theta: None,
            matched_root: None,
            matched_exponent: None,
            notes,
        };
    };
    let growth_rec = fit.growth.as_ref().map(|g| {
        let predicted = 1.0 / modulus(root);
        let tol = (10.0 * g.gauge).max(1e-6 * (1.0 + g.estimate.abs()));
        match_record(g.estimate, predicted, tol)
    });
    if growth_rec.is_none() {
        notes.push(String::from("no growth fit available"));
    }
    let mut matched_exponent = None;
    let theta_rec = fit.theta.as_ref().and_then(|t| {
        let r = factor.exponent_poly.as_ref()?;
        let radius = Rat::new(1.into(), 1_000_000_000_000i64.into());
        let mut best: Option<(f64, f64)> = None;
        for alpha in isolate_roots(r, &radius) {
            if !alpha.root.touches_real_axis() {
                continue;
            }
            let a = alpha.root.center_f64().0;
            let predicted = -a - 1.0;
            let dist = (t.estimate - predicted).abs();
            if best.is_none_or(|(_, d)| dist < d) {
                best = Some((a, dist));
            }
        }
        let (alpha, _) = best?;
        matched_exponent = Some(alpha);
        let tol = (10.0 * t.gauge).max(0.05);
        Some(match_record(t.estimate, -alpha - 1.0, tol))
    });
    if fit.theta.is_some() && theta_rec.is_none() {
        notes.push(String::from(
            "no real exponent root available for the matched factor",
        ));
    }
    let consistent = growth_rec.as_ref().is_some_and(|r| r.within)
        && theta_rec.as_ref().is_none_or(|r| r.within);
    if let Some(r) = &growth_rec {
        notes.push(format!(
            "growth {:.9} vs predicted {:.9} (distance {:.3e}, tolerance {:.3e})",
            r.fitted, r.predicted, r.distance, r.tolerance
        ));
    }
    if let Some(r) = &theta_rec {
        notes.push(format!(
            "theta {:.6} vs predicted {:.6} (distance {:.3e}, tolerance {:.3e})",
            r.fitted, r.predicted, r.distance, r.tolerance
        ));
    }
    Consistency {
        consistent,
        growth: growth_rec,
        theta: theta_rec,
        matched_root: Some(root.clone()),
        matched_exponent,
        notes,
    }
}

/// Exact rational `n^theta` for half-integer `theta`, square roots
/// carried to 60 decimal digits.  Calibration helper.
pub fn power_rat(n: u64, theta_num: i64, theta_den: i64) -> Rat {
    use crate::exact::rational::{pow_rat, Int};
    assert!(theta_den == 1 || theta_den == 2, "half-integers only");
    assert!(n >= 1);
    let whole = theta_num.div_euclid(theta_den);
    let frac = theta_num.rem_euclid(theta_den);
    let mut out = pow_rat(&rat_i(n as i64), whole);
    if frac == 1 {
        // sqrt(n) to 60 digits: isqrt(n * 10^120) / 10^60.
        let scale = Int::from(10u64).pow(60);
        let root = (Int::from(n) * &scale * &scale).sqrt();
        out *= Rat::new(root, scale);
    }
    out
}

/// Synthetic calibration sequence `a_n = lambda^n n^theta` (with `a_0 =
/// 1`) for half-integer `theta`, exact to 60 digits in the square roots.
pub fn power_sequence(lambda: &Rat, theta_num: i64, theta_den: i64, n_max: u64) -> ExactSequence {
    use crate::exact::rational::pow_rat;
    use crate::multisum::Provenance;
    let values = (0..=n_max)
        .map(|n| {
            if n == 0 {
                rat_i(1)
            } else {
                pow_rat(lambda, n as i64) * power_rat(n, theta_num, theta_den)
            }
        })
        .collect();
    ExactSequence::new(0, values, Provenance::External)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::PolyQ;
    use crate::exact::rational::{pow_rat, rat};
    use crate::multisum::Provenance;
    use crate::ode::{analyze, rec_to_ode};
    use crate::recurrence::{counterexample_recurrence, extend_sequence, Recurrence};
    use alloc::vec;
    use proptest::prelude::*;

    use super::power_sequence as synthetic;

    #[test]
    fn geometric_growth_is_exact_at_any_depth() {
        let s = synthetic(&rat_i(2), 0, 1, 200);
        for depth in 1..=4 {
            let fit = fit_growth(&s, depth).unwrap();
            assert_eq!(fit.estimate, 2.0);
            assert_eq!(fit.gauge, 0.0);
            let theta = fit_exponent(&s, 2.0, depth).unwrap();
            assert_eq!(theta.estimate, 0.0);
        }
    }

    #[test]
    fn synthetic_grid_recovers_growth_and_exponent() {
        let lambdas = [rat(1, 2), rat_i(2), rat_i(10)];
        let thetas = [(-3, 2), (0, 1), (5, 2)];
        for lambda in &lambdas {
            for (tn, td) in thetas {
                let s = synthetic(lambda, tn, td, 500);
                let growth = fit_growth(&s, 4).unwrap();
                let expected = rat_to_f64(lambda).abs();
                assert!(
                    (growth.estimate - expected).abs() < 1e-8,
                    "growth {} for lambda {} theta {}/{}",
                    growth.estimate,
                    lambda,
                    tn,
                    td
                );
                let theta = fit_exponent(&s, growth.estimate, 4).unwrap();
                let expected_theta = tn as f64 / td as f64;
                assert!(
                    (theta.estimate - expected_theta).abs() < 1e-4,
                    "theta {} for lambda {} theta {}/{}",
                    theta.estimate,
                    lambda,
                    tn,
                    td
                );
            }
        }
    }

    #[test]
    fn counterexample_growth_and_exponent_match_the_exact_local_data() {
        let r = counterexample_recurrence();
        let s = extend_sequence(&r, &[rat_i(0), rat_i(1)], 2000).unwrap();
        let growth = fit_growth(&s, 4).unwrap();
        let expected = (7.0 + libm::sqrt(33.0)) / 4.0;
        assert!((growth.estimate - expected).abs() < 1e-6);
        let theta = fit_exponent(&s, growth.estimate, 4).unwrap();
        // theta = -alpha - 1 with alpha = -1 - (5/2) sqrt(3/11).
        let expected_theta = 2.5 * libm::sqrt(3.0 / 11.0);
        assert!((theta.estimate - expected_theta).abs() < 1e-2);
    }

    #[test]
    fn alternating_signs_are_folded_into_the_modulus() {
        let s = synthetic(&rat_i(-3), 0, 1, 200);
        let fit = fit_growth(&s, 3).unwrap();
        assert!((fit.estimate - 3.0).abs() < 1e-9);
    }

    #[test]
    fn oscillating_ratios_are_rejected() {
        // Signs + + - - repeating: ratio signs alternate, as for a
        // conjugate pair of singularities on the imaginary axis.
        let values = (0..200u64)
            .map(|n| {
                let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
                rat_i(sign) * pow_rat(&rat_i(2), n as i64)
            })
            .collect();
        let s = ExactSequence::new(0, values, Provenance::External);
        assert_eq!(fit_growth(&s, 3), Err(FitError::NoDominantRatio));
    }

    #[test]
    fn degenerate_tails_are_reported() {
        let zero = ExactSequence::new(0, vec![rat_i(0); 80], Provenance::External);
        assert_eq!(fit_growth(&zero, 3), Err(FitError::AllZeroTail));
        assert_eq!(classify_gevrey(&zero), Err(FitError::AllZeroTail));
        let short = synthetic(&rat_i(2), 0, 1, 30);
        assert_eq!(fit_growth(&short, 3), Err(FitError::TooShort { required: 64 }));
        assert_eq!(classify_gevrey(&short), Err(FitError::TooShort { required: 32 }));
    }

    #[test]
    fn gevrey_classes_of_the_stock_examples() {
        let factorial = ExactSequence::new(
            0,
            (0..=120u64)
                .scan(rat_i(1), |acc, n| {
                    if n > 0 {
                        *acc *= rat_i(n as i64);
                    }
                    Some(acc.clone())
                })
                .collect(),
            Provenance::External,
        );
        assert_eq!(classify_gevrey(&factorial).unwrap().snapped, Some(rat_i(1)));
        let geometric = synthetic(&rat_i(2), 0, 1, 120);
        let fit = classify_gevrey(&geometric).unwrap();
        assert_eq!(fit.snapped, Some(rat_i(0)));
        assert!(fit.is_zero());
    }

    #[test]
    fn apery_growth_exponent_and_class() {
        let t = crate::term::parse_term("sum k: (n+k)!^2 * k!^-4 * (n-k)!^-2").unwrap();
        let prefix = crate::multisum::eval_sequence(&t, 40).unwrap();
        let r = crate::recurrence::guess_recurrence(&prefix, 6, 8)
            .unwrap()
            .unwrap();
        let s = extend_sequence(&r, &prefix.values[..r.order()], 400).unwrap();
        let fit = fit_all(&s, 4).unwrap();
        assert!(fit.gevrey.is_zero());
        let growth = fit.growth.as_ref().unwrap();
        let expected = libm::pow(1.0 + libm::sqrt(2.0), 4.0);
        assert!((growth.estimate - expected).abs() < 1e-3);
        let theta = fit.theta.as_ref().unwrap();
        assert!((theta.estimate + 1.5).abs() < 5e-2);
    }

    #[test]
    fn cross_validation_closes_the_counterexample_loop() {
        let r = counterexample_recurrence();
        let s = extend_sequence(&r, &[rat_i(0), rat_i(1)], 2000).unwrap();
        let o = rec_to_ode(&r, &[rat_i(0), rat_i(1)]);
        let report = analyze(&o);
        let fit = fit_all(&s, 4).unwrap();
        let c = cross_validate(&fit, &report);
        assert!(c.consistent);
        let root = c.matched_root.unwrap();
        assert!((root.center_f64().0 - (7.0 - libm::sqrt(33.0)) / 4.0).abs() < 1e-9);
        let alpha = c.matched_exponent.unwrap();
        assert!((alpha - (-1.0 - 2.5 * libm::sqrt(3.0 / 11.0))).abs() < 1e-6);
    }

    #[test]
    fn cross_validation_accepts_geometric_and_flags_perturbation() {
        let r = Recurrence::new(vec![PolyQ::from_i64(&[-2]), PolyQ::from_i64(&[1])]).unwrap();
        let s = extend_sequence(&r, &[rat_i(1)], 200).unwrap();
        let o = rec_to_ode(&r, &[rat_i(1)]);
        let report = analyze(&o);
        let mut fit = fit_all(&s, 4).unwrap();
        let c = cross_validate(&fit, &report);
        assert!(c.consistent);
        assert_eq!(c.matched_exponent, Some(-1.0));
        // Injected fault: shift theta by 0.5.
        let theta = fit.theta.as_mut().unwrap();
        theta.estimate += 0.5;
        theta.gauge = 1e-9;
        let c = cross_validate(&fit, &report);
        assert!(!c.consistent);
        let rec = c.theta.unwrap();
        assert!((rec.distance - 0.5).abs() < 1e-6);
        assert!(!rec.within);
    }

    #[test]
    fn gauges_are_honest_on_randomized_synthetic_data() {
        // True error <= 10 x gauge must hold in at least 95% of trials.
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let mut bad = 0;
        let trials = 60;
        for _ in 0..trials {
            let num = rng.gen_range(1..=12i64);
            let den = rng.gen_range(1..=4i64);
            let lambda = rat(num, den);
            let theta_num = rng.gen_range(-4..=4i64);
            let s = synthetic(&lambda, theta_num, 2, 300);
            let growth = fit_growth(&s, 3).unwrap();
            let true_err = (growth.estimate - rat_to_f64(&lambda).abs()).abs();
            if true_err > 10.0 * growth.gauge + 1e-12 {
                bad += 1;
            }
        }
        assert!(bad * 20 <= trials, "{bad} of {trials} gauges were dishonest");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn fits_are_invariant_under_positive_scaling(num in 1i64..50, den in 1i64..50) {
            let scale = rat(num, den);
            let base = synthetic(&rat(5, 2), -3, 2, 160);
            let scaled = ExactSequence::new(
                0,
                base.values.iter().map(|v| v * &scale).collect(),
                Provenance::External,
            );
            let f0 = fit_growth(&base, 3).unwrap();
            let f1 = fit_growth(&scaled, 3).unwrap();
            prop_assert_eq!(f0.diagonal, f1.diagonal);
            let t0 = fit_exponent(&base, f0.estimate, 3).unwrap();
            let t1 = fit_exponent(&scaled, f1.estimate, 3).unwrap();
            prop_assert_eq!(t0.diagonal, t1.diagonal);
            let g0 = classify_gevrey(&base).unwrap();
            let g1 = classify_gevrey(&scaled).unwrap();
            prop_assert!((g0.raw - g1.raw).abs() < 1e-9);
            prop_assert_eq!(g0.snapped, g1.snapped);
        }

        #[test]
        fn diagonal_length_tracks_depth(depth in 1usize..5) {
            let s = synthetic(&rat_i(3), 1, 2, 260);
            let fit = fit_growth(&s, depth).unwrap();
            prop_assert_eq!(fit.diagonal.len(), depth + 1);
        }
    }
}
