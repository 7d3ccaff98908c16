//! The analysis report: one serializable record of everything a run
//! computed, in the order the pipeline computed it.
//!
//! Number convention: exact rationals appear as strings `"p/q"`, floats
//! as JSON numbers (shortest round-trip, at most 17 significant digits).
//! A float that was derived from an exact value carries the exact value's
//! decimal expansion alongside it, rounded to `HOLOSCOPE_PRECISION`
//! digits (default 30).
//!
//! Serialization is deterministic: field order is fixed, every map is a
//! struct, and all absent stages serialize as `null`. Two runs on the
//! same input differ only in `timing_ms`.

use serde::Serialize;

use holoscope_core::arith::{CurveCertificate, GCertificate, GVerdict, LcmRow};
use holoscope_core::asympt::{AsymptoticFit, Consistency, Extrapolation, GevreyFit, MatchRecord};
use holoscope_core::exact::rational::{decimal_string, rat_string, rat_to_f64};
use holoscope_core::exact::roots::{ComplexBox, IsolatedRoot};
use holoscope_core::ode::{LinearODE, SingularityReport, Verdict};
use holoscope_core::term::{BalanceReport, BalancedTerm};
use holoscope_core::{ExactSequence, PolyQ, Rat, Recurrence};

/// Decimal digits for high-precision renderings, from
/// `HOLOSCOPE_PRECISION` when set.
pub fn precision() -> usize {
    std::env::var("HOLOSCOPE_PRECISION")
        .ok()
        .and_then(|v| v.parse().ok())
        .map_or(30, |p: usize| p.clamp(1, 1000))
}

/// A float paired with the decimal expansion of the exact value it came
/// from.
#[derive(Clone, Debug, Serialize)]
pub struct HighFloat {
    pub float: f64,
    pub decimal: String,
}

impl HighFloat {
    pub fn from_rat(x: &Rat, digits: usize) -> Self {
        HighFloat {
            float: rat_to_f64(x),
            decimal: decimal_string(x, digits),
        }
    }
}

fn rat_strings(xs: &[Rat]) -> Vec<String> {
    xs.iter().map(rat_string).collect()
}

fn poly_coeffs(p: &PolyQ) -> Vec<String> {
    rat_strings(p.coeffs())
}

#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: "holoscope",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Echo of what the user handed in.
#[derive(Clone, Debug, Serialize)]
pub struct InputEcho {
    /// `"term"`, `"recurrence"`, `"sequence"`, or `"parameters"`.
    pub kind: &'static str,
    pub path: Option<String>,
    pub text: Option<String>,
    /// Initial values, for commands that take them.
    pub initial: Option<Vec<String>>,
}

/// The numeric knobs the run was started with; unused knobs are `null`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Parameters {
    pub nmax: Option<u64>,
    pub max_order: Option<usize>,
    pub max_degree: Option<usize>,
    pub depth: Option<usize>,
    pub precision: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermBlock {
    pub variables: Vec<String>,
    /// Exact base of the `n`-geometric part.
    pub base_n: String,
    /// Exact bases of the per-variable geometric parts.
    pub base_k: Vec<String>,
    pub factors: Vec<TermFactorBlock>,
    pub balanced: bool,
    /// The signed sum of the factor forms; `"0"` exactly when balanced.
    pub residual: String,
    pub finite_support: Option<bool>,
    /// A lattice direction along which the support recedes, when not
    /// finite.
    pub unbounded_direction: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermFactorBlock {
    pub form: String,
    /// `1` for `A!`, `-1` for `1/A!`.
    pub sign: i64,
}

pub fn term_block(t: &BalancedTerm, balance: &BalanceReport) -> TermBlock {
    let vars: Vec<String> = t.vars().to_vec();
    TermBlock {
        variables: vars.clone(),
        base_n: rat_string(t.c0()),
        base_k: rat_strings(t.c()),
        factors: t
            .factors()
            .iter()
            .map(|(a, s)| TermFactorBlock {
                form: a.to_string_with(&vars),
                sign: s.value(),
            })
            .collect(),
        balanced: balance.balanced,
        residual: balance.residual.to_string_with(&vars),
        finite_support: None,
        unbounded_direction: None,
    }
}

/// Offset, length, a short exact prefix, and a digest of the whole
/// value list.
#[derive(Clone, Debug, Serialize)]
pub struct SequenceBlock {
    pub offset: u64,
    pub length: usize,
    pub prefix: Vec<String>,
    /// FNV-1a 64-bit hash over the exact values, as 16 hex digits.
    pub digest: String,
}

pub fn sequence_block(s: &ExactSequence) -> SequenceBlock {
    let mut hash: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            hash ^= u64::from(b);
            hash = hash.wrapping_mul(0x100000001b3);
        }
    };
    eat(s.offset.to_string().as_bytes());
    for v in &s.values {
        eat(b";");
        eat(rat_string(v).as_bytes());
    }
    SequenceBlock {
        offset: s.offset,
        length: s.len(),
        prefix: rat_strings(&s.values[..s.values.len().min(12)]),
        digest: format!("{hash:016x}"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RecurrenceBlock {
    pub order: usize,
    pub degree: usize,
    /// `coefficients[j]` lists `P_j` ascending in degree.
    pub coefficients: Vec<Vec<String>>,
    pub display: String,
}

pub fn recurrence_block(r: &Recurrence) -> RecurrenceBlock {
    RecurrenceBlock {
        order: r.order(),
        degree: r.degree(),
        coefficients: r.coeffs().iter().map(poly_coeffs).collect(),
        display: r.to_string(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OdeBlock {
    pub order: usize,
    /// `coefficients[i]` lists `p_i` ascending in degree.
    pub coefficients: Vec<Vec<String>>,
    pub inhomogeneous: Vec<String>,
    pub leading: String,
    pub display: String,
}

pub fn ode_block(o: &LinearODE) -> OdeBlock {
    OdeBlock {
        order: o.order(),
        coefficients: o.coeffs().iter().map(poly_coeffs).collect(),
        inhomogeneous: poly_coeffs(o.inhom()),
        leading: o.leading().to_string_var("z"),
        display: o.to_string(),
    }
}

/// An isolating box for one root, with high-precision center.
#[derive(Clone, Debug, Serialize)]
pub struct RootBlock {
    pub re: HighFloat,
    pub im: HighFloat,
    pub radius: f64,
    pub multiplicity: usize,
}

pub fn root_block(r: &IsolatedRoot, digits: usize) -> RootBlock {
    RootBlock {
        re: HighFloat::from_rat(&r.root.center_re, digits),
        im: HighFloat::from_rat(&r.root.center_im, digits),
        radius: rat_to_f64(&r.root.radius),
        multiplicity: r.multiplicity,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorBlock {
    pub polynomial: String,
    pub coefficients: Vec<String>,
    pub multiplicity: usize,
    pub regular: bool,
    pub roots: Vec<RootBlock>,
    /// The exact eliminant whose roots are the local exponents, in the
    /// variable `a`.
    pub exponent_polynomial: Option<String>,
    pub exponent_coefficients: Option<Vec<String>>,
    pub exponent_roots: Vec<RootBlock>,
    pub rational_exponents: Vec<String>,
    pub has_irrational_exponent: bool,
    /// `"all-rational"`, `"has-irrational"`, or `"unknown"`.
    pub rationality: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularityBlock {
    pub leading_constant: String,
    pub origin_is_candidate: bool,
    pub factors: Vec<FactorBlock>,
}

/// Build the singularity block; `exponent_roots[i]` are isolating boxes
/// for the factors' exponent polynomials, in factor order.
pub fn singularity_block(
    report: &SingularityReport,
    exponent_roots: &[Vec<IsolatedRoot>],
    digits: usize,
) -> SingularityBlock {
    let factors = report
        .factors
        .iter()
        .zip(exponent_roots)
        .map(|(f, eroots)| {
            let rationality = match &f.exponent_poly {
                None => "unknown",
                Some(_) if f.has_irrational_exponent => "has-irrational",
                Some(_) => "all-rational",
            };
            FactorBlock {
                polynomial: f.poly.to_string_var("z"),
                coefficients: poly_coeffs(&f.poly),
                multiplicity: f.multiplicity,
                regular: f.regular,
                roots: f.roots.iter().map(|r| root_block(r, digits)).collect(),
                exponent_polynomial: f.exponent_poly.as_ref().map(|p| p.to_string_var("a")),
                exponent_coefficients: f.exponent_poly.as_ref().map(poly_coeffs),
                exponent_roots: eroots.iter().map(|r| root_block(r, digits)).collect(),
                rational_exponents: rat_strings(&f.rational_exponents),
                has_irrational_exponent: f.has_irrational_exponent,
                rationality,
            }
        })
        .collect();
    SingularityBlock {
        leading_constant: rat_string(&report.constant),
        origin_is_candidate: report.origin_is_candidate,
        factors,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtrapolationBlock {
    pub estimate: HighFloat,
    pub gauge: f64,
    pub diagonal: Vec<f64>,
}

fn extrapolation_block(e: &Extrapolation, digits: usize) -> ExtrapolationBlock {
    ExtrapolationBlock {
        estimate: HighFloat {
            float: e.estimate,
            decimal: decimal_string(&e.exact, digits),
        },
        gauge: e.gauge,
        diagonal: e.diagonal.clone(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GevreyBlock {
    pub raw: f64,
    pub gauge: f64,
    pub snapped: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitBlock {
    pub gevrey: Option<GevreyBlock>,
    pub growth: Option<ExtrapolationBlock>,
    pub theta: Option<ExtrapolationBlock>,
    /// Why the fit stopped early, when it did.
    pub error: Option<String>,
}

pub fn fit_block(fit: &AsymptoticFit, digits: usize) -> FitBlock {
    FitBlock {
        gevrey: Some(gevrey_block(&fit.gevrey)),
        growth: fit.growth.as_ref().map(|e| extrapolation_block(e, digits)),
        theta: fit.theta.as_ref().map(|e| extrapolation_block(e, digits)),
        error: None,
    }
}

fn gevrey_block(g: &GevreyFit) -> GevreyBlock {
    GevreyBlock {
        raw: g.raw,
        gauge: g.gauge,
        snapped: g.snapped.as_ref().map(|s| rat_string(s)),
    }
}

pub fn fit_error_block(message: String) -> FitBlock {
    FitBlock {
        gevrey: None,
        growth: None,
        theta: None,
        error: Some(message),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchBlock {
    pub fitted: f64,
    pub predicted: f64,
    pub distance: f64,
    pub tolerance: f64,
    pub within: bool,
}

fn match_block(m: &MatchRecord) -> MatchBlock {
    MatchBlock {
        fitted: m.fitted,
        predicted: m.predicted,
        distance: m.distance,
        tolerance: m.tolerance,
        within: m.within,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxBlock {
    pub re: f64,
    pub im: f64,
    pub radius: f64,
}

fn box_block(b: &ComplexBox) -> BoxBlock {
    let (re, im) = b.center_f64();
    BoxBlock {
        re,
        im,
        radius: rat_to_f64(&b.radius),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyBlock {
    pub consistent: bool,
    pub growth: Option<MatchBlock>,
    pub theta: Option<MatchBlock>,
    pub matched_root: Option<BoxBlock>,
    pub matched_exponent: Option<f64>,
    pub notes: Vec<String>,
}

pub fn consistency_block(c: &Consistency) -> ConsistencyBlock {
    ConsistencyBlock {
        consistent: c.consistent,
        growth: c.growth.as_ref().map(match_block),
        theta: c.theta.as_ref().map(match_block),
        matched_root: c.matched_root.as_ref().map(box_block),
        matched_exponent: c.matched_exponent,
        notes: c.notes.clone(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvePoint {
    pub n: u64,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveBlock {
    pub bound: f64,
    pub alarm: bool,
    pub curve: Vec<CurvePoint>,
}

fn curve_block(c: &CurveCertificate) -> CurveBlock {
    CurveBlock {
        bound: c.bound,
        alarm: c.alarm,
        curve: c
            .curve
            .iter()
            .map(|&(n, value)| CurvePoint { n, value })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateBlock {
    pub holonomic: bool,
    pub height: CurveBlock,
    pub denominator: CurveBlock,
    pub verdict: &'static str,
}

pub fn certificate_block(c: &GCertificate) -> CertificateBlock {
    CertificateBlock {
        holonomic: c.holonomic,
        height: curve_block(&c.height),
        denominator: curve_block(&c.denom),
        verdict: match c.verdict {
            GVerdict::ConsistentWithGFunction => "ConsistentWithGFunction",
            GVerdict::DenominatorGrowthAlarm => "DenominatorGrowthAlarm",
            GVerdict::HeightGrowthAlarm => "HeightGrowthAlarm",
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictBlock {
    pub kind: String,
    pub justification: Vec<String>,
}

pub fn verdict_block(v: &Verdict) -> VerdictBlock {
    VerdictBlock {
        kind: v.kind.to_string(),
        justification: v.justification.clone(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LcmRowBlock {
    pub n: u64,
    pub lcm: String,
    pub log_ratio: f64,
}

pub fn lcm_rows(rows: &[LcmRow]) -> Vec<LcmRowBlock> {
    rows.iter()
        .map(|r| LcmRowBlock {
            n: r.n,
            lcm: r.lcm.to_string(),
            log_ratio: r.log_ratio,
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorBlock {
    pub stage: &'static str,
    pub message: String,
    pub exit_code: i32,
}

/// The full report. Stages a run never reached stay `null`; a failed
/// stage is named in `error`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub command: &'static str,
    pub input: InputEcho,
    pub parameters: Parameters,
    pub term: Option<TermBlock>,
    pub sequence: Option<SequenceBlock>,
    pub recurrence: Option<RecurrenceBlock>,
    pub ode: Option<OdeBlock>,
    pub singularities: Option<SingularityBlock>,
    pub fit: Option<FitBlock>,
    pub cross_validation: Option<ConsistencyBlock>,
    pub certificates: Option<CertificateBlock>,
    pub verdict: Option<VerdictBlock>,
    pub lcm_table: Option<Vec<LcmRowBlock>>,
    pub error: Option<ErrorBlock>,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &'static str, input: InputEcho, parameters: Parameters) -> Self {
        Report {
            tool: ToolInfo::current(),
            command,
            input,
            parameters,
            term: None,
            sequence: None,
            recurrence: None,
            ode: None,
            singularities: None,
            fit: None,
            cross_validation: None,
            certificates: None,
            verdict: None,
            lcm_table: None,
            error: None,
            timing_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}
