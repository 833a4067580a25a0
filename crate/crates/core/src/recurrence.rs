//! The two-step G/S/T recurrence producing derived vectors letter by letter.
//!
//! A derived vector of a word of length `r` is a function on `{2, ..., r+1}`;
//! entry `j` is the multiplicity of the dimension `j` in the small growth
//! vector. Storage is a dense 0-based array, so entry `j` lives at offset
//! `j - 2`. [`DerivedVector::get`] takes the 2-based index.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::word::{ClassCode, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecurrenceError {
    #[error("second argument must be one entry longer than the first (got {first} and {second})")]
    LengthMismatch { first: usize, second: usize },
    #[error("entry {index} would be non-positive")]
    NonPositiveEntry { index: usize },
    #[error("derived vector entries must be positive integers: {0}")]
    InvalidEntry(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerivedVector(Vec<BigUint>);

impl DerivedVector {
    pub fn new(entries: Vec<BigUint>) -> Result<Self, RecurrenceError> {
        if let Some(i) = entries.iter().position(Zero::is_zero) {
            return Err(RecurrenceError::NonPositiveEntry { index: i + 2 });
        }
        Ok(DerivedVector(entries))
    }

    pub fn from_u64s(entries: &[u64]) -> Result<Self, RecurrenceError> {
        Self::new(entries.iter().map(|&e| BigUint::from(e)).collect())
    }

    /// `r` ones.
    pub fn ones(r: usize) -> Self {
        DerivedVector(vec![BigUint::one(); r])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry at dimension `j`, for `2 ≤ j ≤ len + 1`.
    pub fn get(&self, j: usize) -> Option<&BigUint> {
        j.checked_sub(2).and_then(|i| self.0.get(i))
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigUint> {
        self.0
    }

    pub fn sum(&self) -> BigUint {
        self.0.iter().sum()
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Entries as decimal strings.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.0.iter().map(|e| e.to_str_radix(10)).collect()
    }
}

/// Space-separated decimal row, e.g. `1 1 2 2 4 4 10`.
impl fmt::Display for DerivedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for DerivedVector {
    type Err = RecurrenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entries = s
            .split_whitespace()
            .map(|t| {
                t.parse::<BigUint>()
                    .map_err(|_| RecurrenceError::InvalidEntry(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        DerivedVector::new(entries)
    }
}

/// Operation G: insert a 1 on the left.
pub fn op_g(a: &DerivedVector) -> DerivedVector {
    let mut out = Vec::with_capacity(a.len() + 1);
    out.push(BigUint::one());
    out.extend(a.0.iter().cloned());
    DerivedVector(out)
}

fn check_lengths(a: &DerivedVector, b: &DerivedVector) -> Result<(), RecurrenceError> {
    if b.len() != a.len() + 1 {
        return Err(RecurrenceError::LengthMismatch {
            first: a.len(),
            second: b.len(),
        });
    }
    Ok(())
}

/// Operation S, the Fibonacci-like rule: `(1, 1, a(2)+b(3), a(3)+b(4), ...)`.
pub fn op_s(a: &DerivedVector, b: &DerivedVector) -> Result<DerivedVector, RecurrenceError> {
    check_lengths(a, b)?;
    let mut out = Vec::with_capacity(b.len() + 1);
    out.push(BigUint::one());
    out.push(BigUint::one());
    out.extend(a.0.iter().zip(&b.0[1..]).map(|(x, y)| x + y));
    Ok(DerivedVector(out))
}

/// Operation T, the arithmetic progression rule: `(1, 1, 2b(3)-a(2), 2b(4)-a(3), ...)`.
///
/// Fails with [`RecurrenceError::NonPositiveEntry`] if some `2b(j+1) ≤ a(j)`.
pub fn op_t(a: &DerivedVector, b: &DerivedVector) -> Result<DerivedVector, RecurrenceError> {
    check_lengths(a, b)?;
    let mut out = Vec::with_capacity(b.len() + 1);
    out.push(BigUint::one());
    out.push(BigUint::one());
    for (i, (x, y)) in a.0.iter().zip(&b.0[1..]).enumerate() {
        let twice: BigUint = y << 1u32;
        if twice <= *x {
            return Err(RecurrenceError::NonPositiveEntry { index: i + 4 });
        }
        out.push(twice - x);
    }
    Ok(DerivedVector(out))
}

/// Applies the operation named by `letter` to the last two vectors `prev`,
/// `last` (`prev` one entry shorter than `last`).
pub fn apply(
    letter: Letter,
    prev: &DerivedVector,
    last: &DerivedVector,
) -> Result<DerivedVector, RecurrenceError> {
    match letter {
        Letter::G => Ok(op_g(last)),
        Letter::S => op_s(prev, last),
        Letter::T => op_t(prev, last),
    }
}

/// The derived vector of `code`, keeping only the last two terms.
pub fn derive_recurrence(code: &ClassCode) -> Result<DerivedVector, RecurrenceError> {
    let mut prev = DerivedVector::ones(1);
    let mut last = DerivedVector::ones(2);
    for &letter in &code.letters()[2..] {
        let next = apply(letter, &prev, &last)?;
        prev = std::mem::replace(&mut last, next);
    }
    Ok(last)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub letter: Letter,
    pub vector: DerivedVector,
}

/// All intermediate vectors `d^1, ..., d^r`, each with its letter.
pub fn trace_recurrence(code: &ClassCode) -> Result<Vec<TraceRow>, RecurrenceError> {
    let letters = code.letters();
    let mut rows = vec![
        TraceRow { letter: letters[0], vector: DerivedVector::ones(1) },
        TraceRow { letter: letters[1], vector: DerivedVector::ones(2) },
    ];
    for &letter in &letters[2..] {
        let n = rows.len();
        let next = apply(letter, &rows[n - 2].vector, &rows[n - 1].vector)?;
        rows.push(TraceRow { letter, vector: next });
    }
    Ok(rows)
}

/// Triangular table, one row per line: the letter, then the entries.
pub fn format_trace(rows: &[TraceRow]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push(row.letter.as_char());
        out.push(' ');
        out.push_str(&row.vector.to_string());
        out.push('\n');
    }
    out
}

/// `1 + Σ d(j)`.
pub fn nonholonomy_degree(d: &DerivedVector) -> BigUint {
    d.sum() + 1u32
}

/// The constant big growth vector `(2, 3, ..., r+2)`.
pub fn big_growth_vector(r: usize) -> Vec<usize> {
    (2..=r + 2).collect()
}

/// Small growth vector in run-length form: value `j` repeated `d(j)` times
/// for `j = 2..=r+1`, then a single `r+2`.
///
/// Kept run-length because its length is the nonholonomy degree, which grows
/// like `F_{r+2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallGrowthVector {
    runs: Vec<(usize, BigUint)>,
}

impl SmallGrowthVector {
    pub fn runs(&self) -> &[(usize, BigUint)] {
        &self.runs
    }

    /// Number of terms, equal to the nonholonomy degree.
    pub fn len(&self) -> BigUint {
        self.runs.iter().map(|(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Expanded terms, or `None` when there are more than `cap`.
    pub fn expand(&self, cap: usize) -> Option<Vec<usize>> {
        if self.len() > BigUint::from(cap) {
            return None;
        }
        let mut out = Vec::new();
        for (value, mult) in &self.runs {
            let m: usize = mult.try_into().ok()?;
            out.extend(std::iter::repeat_n(*value, m));
        }
        Some(out)
    }

    /// Compact form `2 3 4^2 5`, with `^m` for runs longer than one.
    pub fn to_run_string(&self) -> String {
        self.runs
            .iter()
            .map(|(v, m)| {
                if m.is_one() {
                    v.to_string()
                } else {
                    format!("{v}^{m}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn small_growth_vector(d: &DerivedVector) -> SmallGrowthVector {
    let mut runs: Vec<(usize, BigUint)> = d
        .entries()
        .iter()
        .enumerate()
        .map(|(i, m)| (i + 2, m.clone()))
        .collect();
    runs.push((d.len() + 2, BigUint::one()));
    SmallGrowthVector { runs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibonacci::fibonacci;
    use crate::word::{enumerate_admissible, parse};

    fn dv(xs: &[u64]) -> DerivedVector {
        DerivedVector::from_u64s(xs).unwrap()
    }

    #[test]
    fn op_g_examples() {
        assert_eq!(op_g(&dv(&[1, 1])), dv(&[1, 1, 1]));
        assert_eq!(op_g(&dv(&[1, 1, 2])), dv(&[1, 1, 1, 2]));
        assert_eq!(op_g(&dv(&[1, 1, 2, 2, 5])), dv(&[1, 1, 1, 2, 2, 5]));
    }

    #[test]
    fn op_s_examples() {
        assert_eq!(op_s(&dv(&[1, 1, 2, 3]), &dv(&[1, 1, 1, 2, 3])).unwrap(), dv(&[1, 1, 2, 2, 4, 6]));
        assert_eq!(op_s(&dv(&[1]), &dv(&[1, 1])).unwrap(), dv(&[1, 1, 2]));
        assert_eq!(
            op_s(&dv(&[1, 1, 2, 2, 5]), &dv(&[1, 1, 1, 2, 2, 5])).unwrap(),
            dv(&[1, 1, 2, 2, 4, 4, 10])
        );
        assert_eq!(op_s(&dv(&[1, 1, 1, 3]), &dv(&[1, 1, 2, 2, 5])).unwrap(), dv(&[1, 1, 2, 3, 3, 8]));
        assert_eq!(
            op_s(&dv(&[1, 1]), &dv(&[1, 1])),
            Err(RecurrenceError::LengthMismatch { first: 2, second: 2 })
        );
    }

    #[test]
    fn op_t_examples() {
        assert_eq!(op_t(&dv(&[1, 1, 2]), &dv(&[1, 1, 2, 3])).unwrap(), dv(&[1, 1, 1, 3, 4]));
        assert_eq!(op_t(&dv(&[1, 1]), &dv(&[1, 1, 2])).unwrap(), dv(&[1, 1, 1, 3]));
        assert_eq!(op_t(&dv(&[1, 1, 1]), &dv(&[1, 1, 1, 1])).unwrap(), dv(&[1; 5]));
        assert!(matches!(
            op_t(&dv(&[1, 1, 1]), &dv(&[1, 1, 1])),
            Err(RecurrenceError::LengthMismatch { .. })
        ));
        // 2·1 − 3 < 1
        assert_eq!(
            op_t(&dv(&[3]), &dv(&[1, 1])),
            Err(RecurrenceError::NonPositiveEntry { index: 4 })
        );
        assert!(op_t(&dv(&[2]), &dv(&[1, 1])).is_err());
    }

    #[test]
    fn paper_indexing() {
        let d = dv(&[1, 1, 2, 2, 4, 4, 10]);
        assert_eq!(d.get(2), Some(&BigUint::from(1u32)));
        assert_eq!(d.get(8), Some(&BigUint::from(10u32)));
        assert_eq!(d.get(9), None);
        assert_eq!(d.get(1), None);
        assert!(DerivedVector::from_u64s(&[1, 0]).is_err());
    }

    #[test]
    fn example_trace() {
        let rows = trace_recurrence(&parse("GGSTSGS").unwrap()).unwrap();
        let expected = "\
G 1
G 1 1
S 1 1 2
T 1 1 1 3
S 1 1 2 2 5
G 1 1 1 2 2 5
S 1 1 2 2 4 4 10
";
        assert_eq!(format_trace(&rows), expected);
    }

    #[test]
    fn short_traces() {
        let rows = trace_recurrence(&parse("GG").unwrap()).unwrap();
        assert_eq!(format_trace(&rows), "G 1\nG 1 1\n");
        let rows = trace_recurrence(&parse("GGS").unwrap()).unwrap();
        assert_eq!(rows[2], TraceRow { letter: Letter::S, vector: dv(&[1, 1, 2]) });
        let rows = trace_recurrence(&parse("GGSS").unwrap()).unwrap();
        assert_eq!(rows[3].vector, dv(&[1, 1, 2, 3]));
    }

    #[test]
    fn derive_examples() {
        assert_eq!(derive_recurrence(&parse("GGSTSGS").unwrap()).unwrap(), dv(&[1, 1, 2, 2, 4, 4, 10]));
        for r in 2..12 {
            let g = parse(&"G".repeat(r)).unwrap();
            assert_eq!(derive_recurrence(&g).unwrap(), DerivedVector::ones(r));
        }
    }

    #[test]
    fn fibonacci_class_beyond_u64() {
        let r = 95;
        let w = parse(&format!("GG{}", "S".repeat(r - 2))).unwrap();
        let d = derive_recurrence(&w).unwrap();
        for i in 2..=r + 1 {
            assert_eq!(d.get(i).unwrap(), &fibonacci(i - 1));
        }
        assert_eq!(nonholonomy_degree(&d), fibonacci(r + 2));
        assert!(nonholonomy_degree(&d) > BigUint::from(u64::MAX));
    }

    #[test]
    fn sgrv_examples() {
        let s = small_growth_vector(&DerivedVector::ones(4));
        assert_eq!(s.expand(100).unwrap(), vec![2, 3, 4, 5, 6]);
        let s = small_growth_vector(&dv(&[1, 1, 2]));
        assert_eq!(s.expand(100).unwrap(), vec![2, 3, 4, 4, 5]);
        assert_eq!(s.to_run_string(), "2 3 4^2 5");

        let s = small_growth_vector(&dv(&[1, 1, 2, 2, 4, 4, 10]));
        let mut expected = vec![2, 3, 4, 4, 5, 5];
        expected.extend([6; 4]);
        expected.extend([7; 4]);
        expected.extend([8; 10]);
        expected.push(9);
        assert_eq!(s.expand(100).unwrap(), expected);
        assert_eq!(s.len(), BigUint::from(25u32));
        assert!(s.expand(24).is_none());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(nonholonomy_degree(&DerivedVector::ones(6)), BigUint::from(7u32));
        assert_eq!(nonholonomy_degree(&dv(&[1, 1, 2, 2, 4, 4, 10])), BigUint::from(25u32));
        let fib: Vec<u64> = (1..=8).map(|i| fibonacci(i).try_into().unwrap()).collect();
        assert_eq!(nonholonomy_degree(&dv(&fib)), fibonacci(10));
    }

    #[test]
    fn row_format_round_trip() {
        let d = dv(&[1, 1, 2, 2, 4, 4, 10]);
        assert_eq!(d.to_string(), "1 1 2 2 4 4 10");
        assert_eq!("1 1 2 2 4 4 10".parse::<DerivedVector>().unwrap(), d);
        assert!("1 x".parse::<DerivedVector>().is_err());
        assert!("1 0".parse::<DerivedVector>().is_err());
    }

    #[test]
    fn admissible_outputs_are_well_formed() {
        for r in 2..=11 {
            for w in enumerate_admissible(r).unwrap() {
                let d = derive_recurrence(&w).unwrap();
                assert_eq!(d.len(), r);
                assert!(d.is_non_decreasing(), "{w}");
                assert!(d.entries()[..2].iter().all(One::is_one));
                let deg = nonholonomy_degree(&d);
                assert!(deg >= BigUint::from(r + 1) && deg <= fibonacci(r + 2));
                let sgrv = small_growth_vector(&d);
                assert_eq!(sgrv.len(), deg);
                let dims = sgrv.expand(usize::MAX).unwrap();
                assert!(dims.windows(2).all(|p| p[1] == p[0] || p[1] == p[0] + 1));
                assert_eq!((dims[0], *dims.last().unwrap()), (2, r + 2));
                assert_eq!(dims.iter().filter(|&&x| x == r + 2).count(), 1);
            }
        }
    }

    #[test]
    fn big_growth_is_constant() {
        assert_eq!(big_growth_vector(4), vec![2, 3, 4, 5, 6]);
    }
}
