//! Linear recurrences with polynomial coefficients: discovery by exact
//! linear algebra, verification, and forward extension.
//!
//! Discovery is guess-and-verify: build the ansatz matrix from a prefix,
//! take its nullspace, and keep a candidate only if it checks out on every
//! represented value, including a guard band of at least [`GUARD`] values
//! the matrix never saw.  Survivors are empirically verified relations, not
//! certified ones; downstream cross-checks are the soundness story.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::exact::linalg::{nullspace, MatQ};
use crate::exact::poly::{normalize_system, PolyQ};
use crate::exact::rational::{Int, Rat};
use crate::multisum::{ExactSequence, Provenance};

/// Held-out values a guessed recurrence must verify against.
pub const GUARD: usize = 10;

/// `sum_j P_j(n) a_{n+j} = 0` with `P_d` nonzero, stored `P_0..P_d`.
///
/// Normalized: integer coefficients, overall content 1, `P_d` with positive
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    coeffs: Vec<PolyQ>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecurrenceError {
    /// The leading polynomial is zero (or the list is too short to have
    /// one).
    ZeroLeading,
}

impl fmt::Display for RecurrenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecurrenceError::ZeroLeading => write!(f, "leading coefficient polynomial is zero"),
        }
    }
}

impl core::error::Error for RecurrenceError {}

impl Recurrence {
    /// Build from `P_0..P_d`, normalizing the system.
    pub fn new(mut coeffs: Vec<PolyQ>) -> Result<Self, RecurrenceError> {
        if coeffs.len() < 2 || coeffs.last().unwrap().is_zero() {
            return Err(RecurrenceError::ZeroLeading);
        }
        normalize_system(&mut coeffs);
        Ok(Recurrence { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[PolyQ] {
        &self.coeffs
    }

    /// Largest degree among the coefficient polynomials.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .expect("leading polynomial is nonzero")
    }

    /// `sum_j P_j(n) a_{n+j}` for the window `a[0..=order]` at index `n`.
    fn residual(&self, n: &Int, window: &[&Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (p, a) in self.coeffs.iter().zip(window) {
            acc += p.eval_int(n) * *a;
        }
        acc
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, p) in self.coeffs.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let shift = if j == 0 {
                alloc::string::String::from("a(n)")
            } else {
                alloc::format!("a(n+{j})")
            };
            write!(f, "({})*{}", p.to_string_var("n"), shift)?;
        }
        write!(f, " = 0")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsufficientData {
    /// Values needed to search the full (max_order, max_degree) grid.
    pub required: usize,
}

impl fmt::Display for InsufficientData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sequence too short: need at least {} values", self.required)
    }
}

impl core::error::Error for InsufficientData {}

enum CellOutcome {
    Found(Recurrence),
    NoRelation,
    /// Fewer matrix rows than unknowns after holding out the guard band.
    TooShort,
}

/// Search for the minimal recurrence satisfied by `s`, by increasing order
/// and then increasing coefficient degree.
///
/// A candidate cell `(d, deg)` builds its ansatz matrix from all rows that
/// avoid the last [`GUARD`] values; a nullspace vector survives only when
/// the relation holds at every represented index, guard included.  Ties
/// inside one nullspace go to the smallest leading degree, then to
/// lexicographically smallest normalized coefficients.
///
/// A cell is searched when the data covers its unknowns plus the guard, so
/// a short sequence can still surface small recurrences.  The
/// insufficient-data error is reserved for a fruitless search that had to
/// skip cells: only then is "no answer" indistinguishable from "not enough
/// data", and the error names the length that would decide it.
pub fn guess_recurrence(
    s: &ExactSequence,
    max_order: usize,
    max_degree: usize,
) -> Result<Option<Recurrence>, InsufficientData> {
    let required = (max_order + 1) * (max_degree + 1) + max_order + GUARD;
    if max_order == 0 {
        return Err(InsufficientData { required });
    }
    let mut skipped_cells = false;
    for d in 1..=max_order {
        for deg in 0..=max_degree {
            match try_cell(s, d, deg) {
                CellOutcome::Found(r) => return Ok(Some(r)),
                CellOutcome::NoRelation => {}
                CellOutcome::TooShort => skipped_cells = true,
            }
        }
    }
    if skipped_cells {
        Err(InsufficientData { required })
    } else {
        Ok(None)
    }
}

fn try_cell(s: &ExactSequence, d: usize, deg: usize) -> CellOutcome {
    let unknowns = (d + 1) * (deg + 1);
    let rows = match s.len().checked_sub(GUARD + d) {
        Some(rows) if rows >= unknowns => rows,
        _ => return CellOutcome::TooShort,
    };
    let mut data = Vec::with_capacity(rows);
    for i in 0..rows {
        let n = Int::from(s.offset + i as u64);
        let mut row = Vec::with_capacity(unknowns);
        for j in 0..=d {
            let a = &s.values[i + j];
            let mut power = Rat::one();
            for _ in 0..=deg {
                row.push(&power * a);
                power *= Rat::from_integer(n.clone());
            }
        }
        data.push(row);
    }
    let matrix = MatQ::from_rows(data);
    let mut candidates: Vec<Recurrence> = nullspace(&matrix)
        .into_iter()
        .filter_map(|v| {
            let coeffs: Vec<PolyQ> = v
                .chunks(deg + 1)
                .map(|chunk| PolyQ::from_coeffs(chunk.to_vec()))
                .collect();
            Recurrence::new(coeffs).ok()
        })
        .collect();
    candidates.sort_by(|a, b| {
        let key = |r: &Recurrence| {
            (
                r.coeffs.last().unwrap().degree().unwrap(),
                r.coeffs
                    .iter()
                    .flat_map(|p| p.coeffs().to_vec())
                    .collect::<Vec<Rat>>(),
            )
        };
        key(a).cmp(&key(b))
    });
    match candidates
        .into_iter()
        .find(|r| verify_recurrence(r, s) == Ok(true))
    {
        Some(r) => CellOutcome::Found(r),
        None => CellOutcome::NoRelation,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TooShort {
    /// Minimum length that admits at least one test: order + 1.
    pub required: usize,
}

impl fmt::Display for TooShort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sequence shorter than {} values", self.required)
    }
}

impl core::error::Error for TooShort {}

/// Exact check of `sum_j P_j(n) a_{n+j} = 0` at every applicable index.
pub fn verify_recurrence(r: &Recurrence, s: &ExactSequence) -> Result<bool, TooShort> {
    let d = r.order();
    if s.len() < d + 1 {
        return Err(TooShort { required: d + 1 });
    }
    for i in 0..=s.len() - d - 1 {
        let n = Int::from(s.offset + i as u64);
        let window: Vec<&Rat> = (0..=d).map(|j| &s.values[i + j]).collect();
        if !r.residual(&n, &window).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendError {
    /// `initial` must supply exactly `order` values.
    WrongInitialCount { expected: usize },
    /// The leading polynomial vanishes at step `n`; the sequence is not
    /// determined past it.
    SingularStep { n: u64 },
}

impl fmt::Display for ExtendError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendError::WrongInitialCount { expected } => {
                write!(f, "need exactly {expected} initial values")
            }
            ExtendError::SingularStep { n } => {
                write!(f, "leading coefficient vanishes at n = {n}")
            }
        }
    }
}

impl core::error::Error for ExtendError {}

/// Run the recurrence forward from initial values `a_0..a_{d-1}` up to
/// `a_{n_max}`.
pub fn extend_sequence(
    r: &Recurrence,
    initial: &[Rat],
    n_max: u64,
) -> Result<ExactSequence, ExtendError> {
    let d = r.order();
    if initial.len() != d {
        return Err(ExtendError::WrongInitialCount { expected: d });
    }
    let len = usize::try_from(n_max + 1).expect("n_max fits in usize");
    let mut values: Vec<Rat> = initial.iter().take(len).cloned().collect();
    while values.len() < len {
        let n = values.len() as u64 - d as u64;
        let n_int = Int::from(n);
        let lead = r.coeffs.last().unwrap().eval_int(&n_int);
        if lead.is_zero() {
            return Err(ExtendError::SingularStep { n });
        }
        let mut acc = Rat::zero();
        for j in 0..d {
            acc += r.coeffs[j].eval_int(&n_int) * &values[n as usize + j];
        }
        values.push(-acc / lead);
    }
    Ok(ExactSequence::new(0, values, Provenance::RecurrenceExtension))
}

/// The order-2 counterexample recurrence
/// `(2n+1) a_{n+2} - (7n+11) a_{n+1} + (2n+1) a_n = 0`.
#[cfg(test)]
pub(crate) fn counterexample_recurrence() -> Recurrence {
    Recurrence::new(alloc::vec![
        PolyQ::from_i64(&[1, 2]),
        PolyQ::from_i64(&[-11, -7]),
        PolyQ::from_i64(&[1, 2]),
    ])
    .unwrap()
}
