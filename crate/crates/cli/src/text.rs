//! Plain-text rendering of a report, for `--format text`.
//!
//! Curves and tables are rendered as CSV blocks with a `n,value` header
//! so they can be cut out and piped onward; everything else is one
//! `key: value` line per fact.

use std::fmt::Write;

use crate::report::{CurveBlock, ExtrapolationBlock, Report, RootBlock};

fn root_line(r: &RootBlock) -> String {
    let mut s = if r.im.float == 0.0 {
        r.re.decimal.clone()
    } else {
        format!("{} + {}i", r.re.decimal, r.im.decimal)
    };
    let _ = write!(s, " (radius {:.3e}, multiplicity {})", r.radius, r.multiplicity);
    s
}

fn extrapolation_lines(out: &mut String, label: &str, e: &ExtrapolationBlock) {
    let _ = writeln!(out, "  {label}: {}", e.estimate.decimal);
    let _ = writeln!(out, "  {label} gauge: {:.3e}", e.gauge);
}

fn curve_lines(out: &mut String, label: &str, c: &CurveBlock) {
    let _ = writeln!(
        out,
        "  {label}: bound {:.6}, alarm {}",
        c.bound,
        if c.alarm { "yes" } else { "no" }
    );
    let _ = writeln!(out, "  {label} curve:");
    out.push_str("n,value\n");
    for p in &c.curve {
        let _ = writeln!(out, "{},{:.12}", p.n, p.value);
    }
}

/// Render the full report as text. A table-only report renders as bare
/// CSV.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    if let Some(rows) = &r.lcm_table {
        out.push_str("n,lcm,log_ratio\n");
        for row in rows {
            let _ = writeln!(out, "{},{},{:.12}", row.n, row.lcm, row.log_ratio);
        }
        return out;
    }
    let _ = writeln!(out, "{} {} {}", r.tool.name, r.tool.version, r.command);
    if let Some(path) = &r.input.path {
        let _ = writeln!(out, "input: {path}");
    }
    if let Some(text) = &r.input.text {
        let _ = writeln!(out, "input text: {text}");
    }
    if let Some(initial) = &r.input.initial {
        let _ = writeln!(out, "initial: {}", initial.join(", "));
    }

    if let Some(t) = &r.term {
        out.push_str("\nterm\n");
        let _ = writeln!(out, "  variables: {}", t.variables.join(", "));
        let _ = writeln!(out, "  base: {}^n", t.base_n);
        for (b, v) in t.base_k.iter().zip(&t.variables) {
            let _ = writeln!(out, "  base: {b}^{v}");
        }
        for f in &t.factors {
            let sign = if f.sign == 1 { "" } else { "1/" };
            let _ = writeln!(out, "  factor: {}({})!", sign, f.form);
        }
        let _ = writeln!(out, "  balanced: {}", if t.balanced { "yes" } else { "no" });
        if !t.balanced {
            let _ = writeln!(out, "  residual: {}", t.residual);
        }
        if let Some(fin) = t.finite_support {
            let _ = writeln!(out, "  finite support: {}", if fin { "yes" } else { "no" });
        }
        if let Some(dir) = &t.unbounded_direction {
            let _ = writeln!(out, "  unbounded direction: ({})", dir.join(", "));
        }
    }

    if let Some(s) = &r.sequence {
        out.push_str("\nsequence\n");
        let _ = writeln!(out, "  offset: {}", s.offset);
        let _ = writeln!(out, "  length: {}", s.length);
        let _ = writeln!(out, "  prefix: {}", s.prefix.join(", "));
        let _ = writeln!(out, "  digest: {}", s.digest);
    }

    if let Some(rec) = &r.recurrence {
        out.push_str("\nrecurrence\n");
        let _ = writeln!(out, "  order: {}", rec.order);
        let _ = writeln!(out, "  degree: {}", rec.degree);
        let _ = writeln!(out, "  {}", rec.display);
    }

    if let Some(o) = &r.ode {
        out.push_str("\ndifferential equation\n");
        let _ = writeln!(out, "  order: {}", o.order);
        let _ = writeln!(out, "  leading: {}", o.leading);
        let _ = writeln!(out, "  {}", o.display);
    }

    if let Some(s) = &r.singularities {
        out.push_str("\nsingularities\n");
        let _ = writeln!(out, "  leading constant: {}", s.leading_constant);
        let _ = writeln!(
            out,
            "  origin is a candidate: {}",
            if s.origin_is_candidate { "yes" } else { "no" }
        );
        for f in &s.factors {
            let _ = writeln!(
                out,
                "  factor {} (multiplicity {}): {}",
                f.polynomial,
                f.multiplicity,
                if f.regular { "regular" } else { "irregular" }
            );
            for root in &f.roots {
                let _ = writeln!(out, "    root: {}", root_line(root));
            }
            if let Some(p) = &f.exponent_polynomial {
                let _ = writeln!(out, "    exponent polynomial: {p}");
            }
            for root in &f.exponent_roots {
                let _ = writeln!(out, "    exponent: {}", root_line(root));
            }
            if !f.rational_exponents.is_empty() {
                let _ = writeln!(
                    out,
                    "    rational exponents: {}",
                    f.rational_exponents.join(", ")
                );
            }
            let _ = writeln!(out, "    rationality: {}", f.rationality);
        }
    }

    if let Some(f) = &r.fit {
        out.push_str("\nasymptotic fit\n");
        if let Some(g) = &f.gevrey {
            let snapped = g.snapped.as_deref().unwrap_or("none");
            let _ = writeln!(
                out,
                "  gevrey: raw {:.6}, gauge {:.3e}, snapped {snapped}",
                g.raw, g.gauge
            );
        }
        if let Some(e) = &f.growth {
            extrapolation_lines(&mut out, "growth", e);
        }
        if let Some(e) = &f.theta {
            extrapolation_lines(&mut out, "theta", e);
        }
        if let Some(msg) = &f.error {
            let _ = writeln!(out, "  error: {msg}");
        }
    }

    if let Some(c) = &r.cross_validation {
        out.push_str("\ncross-validation\n");
        let _ = writeln!(out, "  consistent: {}", if c.consistent { "yes" } else { "no" });
        for (label, m) in [("growth", &c.growth), ("theta", &c.theta)] {
            if let Some(m) = m {
                let _ = writeln!(
                    out,
                    "  {label}: fitted {:.12}, predicted {:.12}, distance {:.3e} (tolerance {:.3e}), {}",
                    m.fitted,
                    m.predicted,
                    m.distance,
                    m.tolerance,
                    if m.within { "within" } else { "outside" }
                );
            }
        }
        if let Some(b) = &c.matched_root {
            let _ = writeln!(out, "  matched root: {} + {}i", b.re, b.im);
        }
        if let Some(a) = c.matched_exponent {
            let _ = writeln!(out, "  matched exponent: {a}");
        }
        for note in &c.notes {
            let _ = writeln!(out, "  note: {note}");
        }
    }

    if let Some(c) = &r.certificates {
        out.push_str("\ncertificates\n");
        let _ = writeln!(out, "  holonomic: {}", if c.holonomic { "yes" } else { "no" });
        curve_lines(&mut out, "height", &c.height);
        curve_lines(&mut out, "denominator", &c.denominator);
        let _ = writeln!(out, "  verdict: {}", c.verdict);
    }

    if let Some(v) = &r.verdict {
        out.push_str("\nverdict\n");
        let _ = writeln!(out, "  {}", v.kind);
        for line in &v.justification {
            let _ = writeln!(out, "  - {line}");
        }
    }

    if let Some(e) = &r.error {
        out.push_str("\nerror\n");
        let _ = writeln!(out, "  stage: {}", e.stage);
        let _ = writeln!(out, "  {}", e.message);
        let _ = writeln!(out, "  exit code: {}", e.exit_code);
    }

    let _ = writeln!(out, "\ntiming: {} ms", r.timing_ms);
    out
}
