//! Exact evaluation of multisum sequences `a_n = sum_{k in support} t_{n,k}`.
//!
//! No floating point anywhere: values are exact rationals, and conversion
//! to floats happens only in the asymptotic fitting layer.

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::exact::rational::Rat;
use crate::term::{enumerate_support, eval_term, BalancedTerm, FactorialCache, InfiniteSupport};

/// Where a sequence's values came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Multisum,
    RecurrenceExtension,
    External,
}

/// A contiguous block of exact sequence values: `values[i]` is
/// `a_{offset + i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSequence {
    pub offset: u64,
    pub values: Vec<Rat>,
    pub provenance: Provenance,
}

impl ExactSequence {
    pub fn new(offset: u64, values: Vec<Rat>, provenance: Provenance) -> Self {
        ExactSequence {
            offset,
            values,
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at absolute index `n`, when represented.
    pub fn get(&self, n: u64) -> Option<&Rat> {
        let i = n.checked_sub(self.offset)?;
        self.values.get(usize::try_from(i).ok()?)
    }

    /// Absolute index one past the last represented value.
    pub fn end(&self) -> u64 {
        self.offset + self.values.len() as u64
    }
}

impl fmt::Display for ExactSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a_{}..a_{} ({} values)", self.offset, self.end().saturating_sub(1), self.len())
    }
}

/// Sum the term over its support for `n = 0..=n_max`, in a fixed
/// lexicographic order over `k`.
///
/// Exactness makes the result order independent; the fixed order exists
/// only so intermediate traces are reproducible.
pub fn eval_sequence(t: &BalancedTerm, n_max: u64) -> Result<ExactSequence, InfiniteSupport> {
    let mut cache = FactorialCache::new();
    let mut values = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let slice = enumerate_support(t, n)?;
        let mut acc = Rat::zero();
        for k in &slice.points {
            acc += eval_term(t, n, k, &mut cache).expect("support point is evaluable");
        }
        values.push(acc);
    }
    Ok(ExactSequence::new(0, values, Provenance::Multisum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat_i;
    use crate::term::parse_term;
    use alloc::vec;
    use num_traits::One;

    #[test]
    fn apery_prefix_matches_known_values() {
        let t = parse_term("sum k: (n+k)!^2 * k!^-4 * (n-k)!^-2").unwrap();
        let s = eval_sequence(&t, 4).unwrap();
        assert_eq!(
            s.values,
            vec![rat_i(1), rat_i(5), rat_i(73), rat_i(1445), rat_i(33001)]
        );
        assert_eq!(s.provenance, Provenance::Multisum);
    }

    #[test]
    fn binomial_row_sums_are_powers_of_two() {
        let t = parse_term("sum k: binom(n, k)").unwrap();
        let s = eval_sequence(&t, 10).unwrap();
        for (i, v) in s.values.iter().enumerate() {
            assert_eq!(v, &rat_i(1 << i));
        }
    }

    #[test]
    fn apery_values_are_integers_far_out() {
        let t = parse_term("sum k: (n+k)!^2 * k!^-4 * (n-k)!^-2").unwrap();
        let s = eval_sequence(&t, 60).unwrap();
        assert!(s.values.iter().all(|v| v.denom().is_one()));
    }

    #[test]
    fn empty_support_contributes_zero() {
        // Constraints k >= n + 1 and k <= n: every slice is empty.
        let t = parse_term("sum k: (k - n - 1)! / (n - k)!").unwrap();
        let s = eval_sequence(&t, 3).unwrap();
        assert!(s.values.iter().all(Zero::is_zero));
    }

    #[test]
    fn sequence_indexing_is_absolute() {
        let s = ExactSequence::new(3, vec![rat_i(7), rat_i(8)], Provenance::External);
        assert_eq!(s.get(3), Some(&rat_i(7)));
        assert_eq!(s.get(4), Some(&rat_i(8)));
        assert_eq!(s.get(2), None);
        assert_eq!(s.get(5), None);
        assert_eq!(s.end(), 5);
    }
}
