//! Text file formats: sequences, recurrences, and differential equations.
//!
//! All three formats are line-oriented. A `#` starts a comment that runs
//! to the end of the line, and blank lines are skipped. Rational values
//! are written `numerator/denominator`, or as a bare integer when the
//! denominator is one. Polynomial coefficient lists are ascending in
//! degree.
//!
//! Sequence files open with `offset N`, then carry one value per line.
//! Recurrence files open with `order d`, then the lines
//! `P_0: c0 c1 ...` through `P_d: ...`. Differential equation files open
//! with `order m`, then `p_0: ...` through `p_m: ...`, then `inhom: ...`.

use std::fmt;

use holoscope_core::exact::rational::rat_string;
use holoscope_core::multisum::Provenance;
use holoscope_core::ode::LinearODE;
use holoscope_core::{ExactSequence, Int, PolyQ, Rat, Recurrence};

/// A parse failure with its one-based source line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        FormatError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for FormatError {}

/// The content lines of a file: comments stripped, blanks dropped,
/// original line numbers kept.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            (!line.is_empty()).then_some((i + 1, line))
        })
        .collect()
}

/// Parse `p/q` or a bare integer.
pub fn parse_rat(token: &str) -> Option<Rat> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let num: Int = num.trim().parse().ok()?;
    let den: Int = den.trim().parse().ok()?;
    if den == Int::from(0) {
        return None;
    }
    Some(Rat::new(num, den))
}

fn expect_header(lines: &[(usize, &str)], keyword: &str) -> Result<usize, FormatError> {
    let (lineno, line) = lines
        .first()
        .copied()
        .ok_or_else(|| FormatError::new(0, "empty file"))?;
    let rest = line
        .strip_prefix(keyword)
        .ok_or_else(|| FormatError::new(lineno, format!("expected `{keyword} N`")))?;
    rest.trim()
        .parse()
        .map_err(|_| FormatError::new(lineno, format!("expected an integer after `{keyword}`")))
}

/// Read a sequence file: `offset N`, then one value per line.
pub fn parse_sequence(text: &str) -> Result<ExactSequence, FormatError> {
    let lines = content_lines(text);
    let offset = expect_header(&lines, "offset")?;
    let mut values = Vec::with_capacity(lines.len().saturating_sub(1));
    for &(lineno, line) in &lines[1..] {
        let v = parse_rat(line)
            .ok_or_else(|| FormatError::new(lineno, format!("invalid rational `{line}`")))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(FormatError::new(
            lines[0].0,
            "sequence file carries no values",
        ));
    }
    Ok(ExactSequence::new(
        offset as u64,
        values,
        Provenance::External,
    ))
}

/// Render a sequence file.
pub fn write_sequence(s: &ExactSequence) -> String {
    let mut out = format!("offset {}\n", s.offset);
    for v in &s.values {
        out.push_str(&rat_string(v));
        out.push('\n');
    }
    out
}

/// One labelled coefficient line `label_j: c0 c1 ...`.
fn parse_poly_line(
    lineno: usize,
    line: &str,
    expected_label: &str,
) -> Result<PolyQ, FormatError> {
    let (label, rest) = line
        .split_once(':')
        .ok_or_else(|| FormatError::new(lineno, format!("expected `{expected_label}: ...`")))?;
    if label.trim() != expected_label {
        return Err(FormatError::new(
            lineno,
            format!("expected label `{expected_label}`, found `{}`", label.trim()),
        ));
    }
    let mut coeffs = Vec::new();
    for token in rest.split_whitespace() {
        let c = parse_rat(token)
            .ok_or_else(|| FormatError::new(lineno, format!("invalid rational `{token}`")))?;
        coeffs.push(c);
    }
    Ok(PolyQ::from_coeffs(coeffs))
}

fn parse_poly_block(
    lines: &[(usize, &str)],
    prefix: &str,
    count: usize,
) -> Result<Vec<PolyQ>, FormatError> {
    let last = lines.last().map_or(0, |&(n, _)| n);
    let mut polys = Vec::with_capacity(count);
    for j in 0..count {
        let label = format!("{prefix}_{j}");
        let &(lineno, line) = lines
            .get(1 + j)
            .ok_or_else(|| FormatError::new(last, format!("missing line `{label}: ...`")))?;
        polys.push(parse_poly_line(lineno, line, &label)?);
    }
    Ok(polys)
}

/// Read a recurrence file: `order d`, then `P_0: ...` through `P_d: ...`.
pub fn parse_recurrence(text: &str) -> Result<Recurrence, FormatError> {
    let lines = content_lines(text);
    let order = expect_header(&lines, "order")?;
    let coeffs = parse_poly_block(&lines, "P", order + 1)?;
    Recurrence::new(coeffs).map_err(|e| FormatError::new(lines[0].0, e.to_string()))
}

/// Render a recurrence file.
pub fn write_recurrence(r: &Recurrence) -> String {
    let mut out = format!("order {}\n", r.order());
    for (j, p) in r.coeffs().iter().enumerate() {
        out.push_str(&poly_line(&format!("P_{j}"), p));
    }
    out
}

/// Read a differential equation file: `order m`, then `p_0: ...` through
/// `p_m: ...`, then `inhom: ...`.
pub fn parse_ode(text: &str) -> Result<LinearODE, FormatError> {
    let lines = content_lines(text);
    let order = expect_header(&lines, "order")?;
    let coeffs = parse_poly_block(&lines, "p", order + 1)?;
    let last = lines.last().map_or(0, |&(n, _)| n);
    let &(lineno, line) = lines
        .get(order + 2)
        .ok_or_else(|| FormatError::new(last, "missing line `inhom: ...`"))?;
    let inhom = parse_poly_line(lineno, line, "inhom")?;
    LinearODE::new(coeffs, inhom).map_err(|e| FormatError::new(lines[0].0, e.to_string()))
}

/// Render a differential equation file.
pub fn write_ode(o: &LinearODE) -> String {
    let mut out = format!("order {}\n", o.order());
    for (i, p) in o.coeffs().iter().enumerate() {
        out.push_str(&poly_line(&format!("p_{i}"), p));
    }
    out.push_str(&poly_line("inhom", o.inhom()));
    out
}

fn poly_line(label: &str, p: &PolyQ) -> String {
    let mut out = format!("{label}:");
    for c in p.coeffs() {
        out.push(' ');
        out.push_str(&rat_string(c));
    }
    out.push('\n');
    out
}

/// Parse a comma-separated list of rationals, as passed on the command
/// line for initial values.
pub fn parse_rat_list(text: &str) -> Result<Vec<Rat>, FormatError> {
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            parse_rat(tok).ok_or_else(|| FormatError::new(1, format!("invalid rational `{tok}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use holoscope_core::exact::rational::{rat, rat_i};
    use holoscope_core::ode::rec_to_ode;

    #[test]
    fn sequence_files_round_trip() {
        let text = "# apery prefix\noffset 0\n1\n5\n73\n1445/1\n";
        let s = parse_sequence(text).unwrap();
        assert_eq!(s.offset, 0);
        assert_eq!(s.values, vec![rat_i(1), rat_i(5), rat_i(73), rat_i(1445)]);
        let again = parse_sequence(&write_sequence(&s)).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn sequence_offsets_and_fractions_survive() {
        let text = "offset 3 # shifted\n-2/7\n0\n9593/7\n";
        let s = parse_sequence(text).unwrap();
        assert_eq!(s.offset, 3);
        assert_eq!(s.get(5), Some(&rat(9593, 7)));
        assert_eq!(parse_sequence(&write_sequence(&s)).unwrap(), s);
    }

    #[test]
    fn sequence_errors_carry_line_numbers() {
        assert_eq!(parse_sequence("").unwrap_err().line, 0);
        assert_eq!(parse_sequence("1\n2\n").unwrap_err().line, 1);
        assert_eq!(parse_sequence("offset 0\n1\nx\n").unwrap_err().line, 3);
        assert_eq!(parse_sequence("offset 0\n1/0\n").unwrap_err().line, 2);
        assert!(parse_sequence("offset 0\n# only comments\n").is_err());
    }

    #[test]
    fn recurrence_files_round_trip() {
        let text = "order 2\nP_0: 1 2\nP_1: -11 -7\nP_2: 1 2\n";
        let r = parse_recurrence(text).unwrap();
        assert_eq!(r.order(), 2);
        assert_eq!(r.coeffs()[1], PolyQ::from_i64(&[-11, -7]));
        assert_eq!(parse_recurrence(&write_recurrence(&r)).unwrap(), r);
    }

    #[test]
    fn recurrence_label_and_arity_errors() {
        let bad_label = "order 1\nP_0: 1\nQ_1: 1\n";
        assert_eq!(parse_recurrence(bad_label).unwrap_err().line, 3);
        let missing = "order 2\nP_0: 1\nP_1: 1\n";
        assert!(parse_recurrence(missing).is_err());
        let zero_lead = "order 1\nP_0: 1\nP_1:\n";
        assert!(parse_recurrence(zero_lead).is_err());
    }

    #[test]
    fn ode_files_round_trip() {
        let r = parse_recurrence("order 2\nP_0: 1 2\nP_1: -11 -7\nP_2: 1 2\n").unwrap();
        let o = rec_to_ode(&r, &[rat_i(0), rat_i(1)]);
        let text = write_ode(&o);
        assert_eq!(parse_ode(&text).unwrap(), o);
        assert!(text.starts_with("order 1\n"));
    }

    #[test]
    fn ode_inhom_line_is_required() {
        let text = "order 1\np_0: 2\np_1: -1 2\n";
        assert!(parse_ode(text).is_err());
        let full = "order 1\np_0: 2\np_1: -1 2\ninhom:\n";
        let o = parse_ode(full).unwrap();
        assert!(o.inhom().is_zero());
    }

    #[test]
    fn rational_lists_parse() {
        assert_eq!(
            parse_rat_list("0, 1, -3/2").unwrap(),
            vec![rat_i(0), rat_i(1), rat(-3, 2)]
        );
        assert!(parse_rat_list("1, x").is_err());
    }
}
