//! Desk-scale arithmetic certificates: height and denominator growth
//! curves for the G-function conditions, and the binomial lcm table.
//!
//! The exact content of a certificate is the curve itself, computed from
//! exact rational data with a single float conversion at the end.  The
//! "alarm" flags are labeled heuristics for super-exponential growth, not
//! proofs.  Conjugate bounds degenerate to absolute values here because
//! all constants in the term model are rational.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::One;

use crate::exact::rational::{ln_int_abs, ln_rat_abs, Int};
use crate::multisum::ExactSequence;

/// A growth curve `(n, value)` with its empirical bound and alarm flag.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveCertificate {
    pub curve: Vec<(u64, f64)>,
    /// Maximum of the curve over its tail half.
    pub bound: f64,
    /// Heuristic: the tail half rises block over block, with rises
    /// decaying slower than 1/n, so the curve diverges rather than
    /// levels off.  Non-probative.
    pub alarm: bool,
}

/// Least-squares slope of `y` against `x`.
fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|(x, _)| x).sum();
    let sy: f64 = points.iter().map(|(_, y)| y).sum();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Divergence heuristic on the tail half, wobble-tolerant: average the
/// tail into blocks, require strictly increasing block means, and fit the
/// decay exponent of the rises.  Rises like `n^{-gamma}` sum to a finite
/// limit iff `gamma > 1`, so `gamma < 1` flags a diverging curve.
fn tail_alarm(curve: &[(u64, f64)]) -> bool {
    const BLOCKS: usize = 6;
    let tail = &curve[curve.len() / 2..];
    if tail.len() < 2 * BLOCKS {
        return false;
    }
    let size = tail.len() / BLOCKS;
    let blocks: Vec<(f64, f64)> = (0..BLOCKS)
        .map(|b| {
            let part = &tail[b * size..(b + 1) * size];
            let n = part.iter().map(|(n, _)| *n as f64).sum::<f64>() / part.len() as f64;
            let v = part.iter().map(|(_, v)| *v).sum::<f64>() / part.len() as f64;
            (n, v)
        })
        .collect();
    let rises: Vec<(f64, f64)> = blocks
        .windows(2)
        .map(|w| (w[0].0, w[1].1 - w[0].1))
        .collect();
    if rises.iter().any(|(_, d)| *d <= 0.0) {
        return false;
    }
    let logs: Vec<(f64, f64)> = rises
        .iter()
        .map(|(n, d)| (libm::log(*n), libm::log(*d)))
        .collect();
    -slope(&logs) < 1.0
}

fn certificate_from(curve: Vec<(u64, f64)>) -> CurveCertificate {
    let alarm = tail_alarm(&curve);
    let bound = curve[curve.len() / 2..]
        .iter()
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    CurveCertificate {
        curve,
        bound,
        alarm,
    }
}

/// The curve `|a_n|^{1/n}` for `n >= 1`, with zero values contributing 0.
pub fn height_certificate(s: &ExactSequence) -> CurveCertificate {
    assert!(!s.is_empty(), "height certificate of an empty sequence");
    let curve = (s.offset.max(1)..s.end())
        .map(|n| {
            let v = s.get(n).expect("n is in range");
            let h = match ln_rat_abs(v) {
                Some(l) => libm::exp(l / n as f64),
                None => 0.0,
            };
            (n, h)
        })
        .collect();
    certificate_from(curve)
}

/// The curve `lcm(den(a_0), ..., den(a_n))^{1/n}` for `n >= 1`, with the
/// lcm computed exactly.
pub fn denominator_certificate(s: &ExactSequence) -> CurveCertificate {
    assert!(!s.is_empty(), "denominator certificate of an empty sequence");
    let mut lcm = Int::one();
    let mut curve = Vec::new();
    for (i, v) in s.values.iter().enumerate() {
        lcm = lcm.lcm(v.denom());
        let n = s.offset + i as u64;
        if n >= 1 {
            let l = ln_int_abs(&lcm).expect("lcm is positive");
            curve.push((n, libm::exp(l / n as f64)));
        }
    }
    certificate_from(curve)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GVerdict {
    /// Both curves look exponentially bounded.
    ConsistentWithGFunction,
    /// Denominator lcm growth looks super-exponential.
    DenominatorGrowthAlarm,
    /// Value growth looks super-exponential.
    HeightGrowthAlarm,
}

/// The assembled desk-scale G-function certificate.
#[derive(Clone, Debug)]
pub struct GCertificate {
    pub height: CurveCertificate,
    pub denom: CurveCertificate,
    /// Whether a defining recurrence was found for the sequence.
    pub holonomic: bool,
    pub verdict: GVerdict,
}

/// Compute both curves and combine the alarms; a height alarm dominates a
/// denominator alarm, since super-exponential values rule the class out
/// regardless of denominators.
pub fn g_certificate(s: &ExactSequence, holonomic: bool) -> GCertificate {
    let height = height_certificate(s);
    let denom = denominator_certificate(s);
    let verdict = if height.alarm {
        GVerdict::HeightGrowthAlarm
    } else if denom.alarm {
        GVerdict::DenominatorGrowthAlarm
    } else {
        GVerdict::ConsistentWithGFunction
    };
    GCertificate {
        height,
        denom,
        holonomic,
        verdict,
    }
}

/// One row of the binomial lcm table.
#[derive(Clone, Debug, PartialEq)]
pub struct LcmRow {
    pub n: u64,
    /// `L_n = lcm(binom(n,0), ..., binom(n,n))`, exact.
    pub lcm: Int,
    /// `log(L_n) / n`.
    pub log_ratio: f64,
}

/// The table of `L_n = lcm` of the `n`-th binomial row for `1 <= n <=
/// n_max`.
pub fn lcm_binomial_table(n_max: u64) -> Vec<LcmRow> {
    assert!(n_max >= 1);
    (1..=n_max)
        .map(|n| {
            let mut binom = Int::one();
            let mut lcm = Int::one();
            for k in 0..n {
                binom = binom * Int::from(n - k) / Int::from(k + 1);
                lcm = lcm.lcm(&binom);
            }
            let log_ratio = ln_int_abs(&lcm).expect("lcm is positive") / n as f64;
            LcmRow { n, lcm, log_ratio }
        })
        .collect()
}
