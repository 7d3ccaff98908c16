//! The five commands, each producing a [`Report`] and an exit code.
//!
//! A failing stage stops the pipeline but never the report: everything
//! computed up to the failure is kept, and the `error` block names the
//! stage, the message, and the exit code. Exit codes: 0 success (or a
//! consistent verdict), 2 parse error, 3 unbalanced term, 4 infinite
//! support, 5 guess or fit failure, 6 singular recurrence step, 10
//! obstruction verdict, 11 inconclusive verdict.

use holoscope_core::arith::{g_certificate, lcm_binomial_table};
use holoscope_core::asympt::fit_all;
use holoscope_core::exact::roots::{isolate_roots, IsolatedRoot};
use holoscope_core::multisum::eval_sequence;
use holoscope_core::ode::{
    analyze, obstruction_verdict, rec_to_ode, root_radius, LinearODE, SingularityReport,
    VerdictKind,
};
use holoscope_core::recurrence::{extend_sequence, guess_recurrence};
use holoscope_core::term::{check_balance, parse_term, unbounded_direction};
use holoscope_core::{ExactSequence, Rat, Recurrence};

use crate::formats;
use crate::report::{self, ErrorBlock, InputEcho, Parameters, Report};

/// Numeric knobs shared by the commands; each command reads the ones it
/// uses.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub nmax: u64,
    pub max_order: usize,
    pub max_degree: usize,
    pub depth: usize,
}

/// A finished run: the report plus the process exit code.
pub struct Outcome {
    pub report: Report,
    pub exit: i32,
}

fn fail(mut report: Report, stage: &'static str, message: String, exit_code: i32) -> Outcome {
    report.error = Some(ErrorBlock {
        stage,
        message,
        exit_code,
    });
    Outcome {
        report,
        exit: exit_code,
    }
}

fn done(report: Report, exit: i32) -> Outcome {
    Outcome { report, exit }
}

/// Isolate each factor's exponent roots at the standard radius.
fn exponent_roots(sing: &SingularityReport) -> Vec<Vec<IsolatedRoot>> {
    let radius = root_radius();
    sing.factors
        .iter()
        .map(|f| {
            f.exponent_poly
                .as_ref()
                .map(|p| isolate_roots(p, &radius))
                .unwrap_or_default()
        })
        .collect()
}

/// Run the fit and the cross-validation; fit failures are recorded but
/// do not stop the pipeline.
fn fit_stage(report: &mut Report, s: &ExactSequence, sing: Option<&SingularityReport>, depth: usize) {
    let digits = report.parameters.precision;
    match fit_all(s, depth) {
        Ok(fit) => {
            report.fit = Some(report::fit_block(&fit, digits));
            if let Some(sing) = sing {
                report.cross_validation = Some(report::consistency_block(
                    &holoscope_core::asympt::cross_validate(&fit, sing),
                ));
            }
        }
        Err(e) => report.fit = Some(report::fit_error_block(e.to_string())),
    }
}

fn ode_stages(
    report: &mut Report,
    ode: &LinearODE,
    s: &ExactSequence,
) -> (SingularityReport, VerdictKind) {
    let digits = report.parameters.precision;
    report.ode = Some(report::ode_block(ode));
    let sing = analyze(ode);
    let eroots = exponent_roots(&sing);
    report.singularities = Some(report::singularity_block(&sing, &eroots, digits));
    let verdict = obstruction_verdict(ode, s, &sing);
    let kind = verdict.kind;
    report.verdict = Some(report::verdict_block(&verdict));
    (sing, kind)
}

/// Parse a term, check balance and finiteness, evaluate the multisum,
/// guess its recurrence, transfer to a differential equation, and analyze
/// the local data.
pub fn analyze_term(text: &str, path: Option<String>, opts: Options) -> Outcome {
    let input = InputEcho {
        kind: "term",
        path,
        text: Some(text.trim().to_string()),
        initial: None,
    };
    let parameters = Parameters {
        nmax: Some(opts.nmax),
        max_order: Some(opts.max_order),
        max_degree: Some(opts.max_degree),
        depth: Some(opts.depth),
        precision: report::precision(),
    };
    let mut report = Report::new("analyze-term", input, parameters);

    let term = match parse_term(text) {
        Ok(t) => t,
        Err(e) => return fail(report, "parse", e.to_string(), 2),
    };
    let balance = check_balance(&term);
    let mut block = report::term_block(&term, &balance);
    if !balance.balanced {
        let residual = balance.residual.to_string_with(term.vars());
        report.term = Some(block);
        let message = format!("term is not balanced; residual {residual}");
        return fail(report, "balance", message, 3);
    }
    match unbounded_direction(&term) {
        Some(direction) => {
            block.finite_support = Some(false);
            block.unbounded_direction =
                Some(direction.iter().map(|d| d.to_string()).collect());
            report.term = Some(block);
            let message = String::from("support is infinite along a lattice direction");
            return fail(report, "finiteness", message, 4);
        }
        None => block.finite_support = Some(true),
    }
    report.term = Some(block);

    let seq = match eval_sequence(&term, opts.nmax) {
        Ok(s) => s,
        Err(e) => return fail(report, "finiteness", e.to_string(), 4),
    };
    report.sequence = Some(report::sequence_block(&seq));

    let rec = match guess_recurrence(&seq, opts.max_order, opts.max_degree) {
        Ok(Some(r)) => r,
        Ok(None) => {
            let message = format!(
                "no recurrence of order <= {} with coefficient degree <= {}",
                opts.max_order, opts.max_degree
            );
            return fail(report, "guess", message, 5);
        }
        Err(e) => return fail(report, "guess", e.to_string(), 5),
    };
    report.recurrence = Some(report::recurrence_block(&rec));

    let ode = rec_to_ode(&rec, &seq.values[..rec.order()]);
    let (sing, _) = ode_stages(&mut report, &ode, &seq);
    fit_stage(&mut report, &seq, Some(&sing), opts.depth);
    report.certificates = Some(report::certificate_block(&g_certificate(&seq, true)));
    done(report, 0)
}

/// Extend a recurrence from initial values, transfer, and decide the
/// obstruction verdict; the exit code follows the verdict.
pub fn obstruct(text: &str, path: Option<String>, initial: &[Rat], opts: Options) -> Outcome {
    let input = InputEcho {
        kind: "recurrence",
        path,
        text: Some(text.trim().to_string()),
        initial: Some(
            initial
                .iter()
                .map(holoscope_core::exact::rational::rat_string)
                .collect(),
        ),
    };
    let parameters = Parameters {
        nmax: Some(opts.nmax),
        max_order: None,
        max_degree: None,
        depth: Some(opts.depth),
        precision: report::precision(),
    };
    let mut report = Report::new("obstruct", input, parameters);

    let rec: Recurrence = match formats::parse_recurrence(text) {
        Ok(r) => r,
        Err(e) => return fail(report, "parse", e.to_string(), 2),
    };
    if initial.len() != rec.order() {
        let message = format!(
            "need exactly {} initial values, got {}",
            rec.order(),
            initial.len()
        );
        return fail(report, "parse", message, 2);
    }
    report.recurrence = Some(report::recurrence_block(&rec));

    let seq = match extend_sequence(&rec, initial, opts.nmax) {
        Ok(s) => s,
        Err(e) => return fail(report, "extend", e.to_string(), 6),
    };
    report.sequence = Some(report::sequence_block(&seq));

    let ode = rec_to_ode(&rec, initial);
    let (sing, kind) = ode_stages(&mut report, &ode, &seq);
    fit_stage(&mut report, &seq, Some(&sing), opts.depth);
    report.certificates = Some(report::certificate_block(&g_certificate(&seq, true)));
    let exit = match kind {
        VerdictKind::ObstructionIrrationalExponent => 10,
        VerdictKind::ConsistentRationalExponents => 0,
        VerdictKind::Inconclusive => 11,
    };
    done(report, exit)
}

/// Fit growth, exponent, and Gevrey class of a sequence file.
pub fn fit(text: &str, path: Option<String>, depth: usize) -> Outcome {
    let input = InputEcho {
        kind: "sequence",
        path,
        text: None,
        initial: None,
    };
    let parameters = Parameters {
        nmax: None,
        max_order: None,
        max_degree: None,
        depth: Some(depth),
        precision: report::precision(),
    };
    let mut report = Report::new("fit", input, parameters);

    let seq = match formats::parse_sequence(text) {
        Ok(s) => s,
        Err(e) => return fail(report, "parse", e.to_string(), 2),
    };
    report.sequence = Some(report::sequence_block(&seq));
    fit_stage(&mut report, &seq, None, depth);
    if let Some(message) = report
        .fit
        .as_ref()
        .and_then(|f| f.error.clone())
    {
        return fail(report, "fit", message, 5);
    }
    done(report, 0)
}

/// Emit arithmetic growth certificates for a sequence file.
pub fn certify(text: &str, path: Option<String>, opts: Options) -> Outcome {
    let input = InputEcho {
        kind: "sequence",
        path,
        text: None,
        initial: None,
    };
    let parameters = Parameters {
        nmax: None,
        max_order: Some(opts.max_order),
        max_degree: Some(opts.max_degree),
        depth: None,
        precision: report::precision(),
    };
    let mut report = Report::new("certify", input, parameters);

    let seq = match formats::parse_sequence(text) {
        Ok(s) => s,
        Err(e) => return fail(report, "parse", e.to_string(), 2),
    };
    report.sequence = Some(report::sequence_block(&seq));
    let holonomic = match guess_recurrence(&seq, opts.max_order, opts.max_degree) {
        Ok(Some(rec)) => {
            report.recurrence = Some(report::recurrence_block(&rec));
            true
        }
        _ => false,
    };
    report.certificates = Some(report::certificate_block(&g_certificate(&seq, holonomic)));
    done(report, 0)
}

/// Tabulate the normalized binomial lcm sequence.
pub fn lcm_table(nmax: u64) -> Outcome {
    let input = InputEcho {
        kind: "parameters",
        path: None,
        text: None,
        initial: None,
    };
    let parameters = Parameters {
        nmax: Some(nmax),
        max_order: None,
        max_degree: None,
        depth: None,
        precision: report::precision(),
    };
    let mut report = Report::new("lcm-table", input, parameters);
    report.lcm_table = Some(report::lcm_rows(&lcm_binomial_table(nmax)));
    done(report, 0)
}
