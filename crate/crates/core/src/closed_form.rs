//! Explicit derived vectors from the class parameters.
//!
//! Everything here is driven by the A-sequences of a k-parameter list
//! `k_0, ..., k_s`:
//!
//! ```text
//! A^{+N}_0 = 1
//! A^{+N}_1 = 2 + k_N
//! A^{+N}_j = A^{+N}_{j-2} + (1 + k_{j-1+N}) A^{+N}_{j-1}     (j ≥ 2, N + j ≤ s + 1)
//! ```
//!
//! with `N = 0` giving the plain family `A_j`. Indices of `k` and `l` run
//! backwards from the rightmost `S`, as in [`crate::word::ParamProfile`].
//!
//! A class with `s + 1` letters `S` has exactly `s + 2` distinct values in
//! its derived vector, listed increasingly in a value table; value `0`
//! appears `2 + k_0 + l_0` times, value `j` (`1 ≤ j ≤ s`) appears
//! `1 + k_j + l_j` times and value `s + 1` appears `l_{s+1} - 1` times.
//! When no middle `l_j` is positive (`q = 0`) the table is the single row
//! `A_0, ..., A_{s+1}`. Otherwise, with `n_1 < ... < n_q` the indices of the
//! positive middle `l_j`, the table has `q + 1` rows:
//!
//! ```text
//! A_0, ..., A_{n_1 - 1}
//! A_{n_1} · (A^{+n_1}_0, ..., A^{+n_1}_{n_2 - n_1 - 1})
//! A_{n_1} A^{+n_1}_{n_2 - n_1} · (A^{+n_2}_0, ..., A^{+n_2}_{n_3 - n_2 - 1})
//! ...
//! A_{n_1} Π_{j<q} A^{+n_j}_{n_{j+1} - n_j} · (A^{+n_q}_0, ..., A^{+n_q}_{s - n_q + 1})
//! ```

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::recurrence::DerivedVector;
use crate::word::{extract_params, ClassCode, ClassParams, Letter, ParamProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("A^(+{shift})_{upto} needs k-parameters up to index {needed}, only {available} given")]
    IndexOutOfRange {
        shift: usize,
        upto: usize,
        needed: usize,
        available: usize,
    },
    #[error("profile has q = {q}, expected {expected}")]
    ProfileMismatch { q: usize, expected: &'static str },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("cannot prolong {0}")]
    ForbiddenProlongation(String),
}

/// Values `A^{+N}_0, ..., A^{+N}_{upto}` built from a k-parameter list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASequence {
    k: Vec<usize>,
    shift: usize,
    values: Vec<BigUint>,
}

impl ASequence {
    pub fn k_params(&self) -> &[usize] {
        &self.k
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn get(&self, j: usize) -> Option<&BigUint> {
        self.values.get(j)
    }

    pub fn into_values(self) -> Vec<BigUint> {
        self.values
    }
}

pub fn a_sequence(k: &[usize], shift: usize, upto: usize) -> Result<ASequence, ClosedFormError> {
    if upto > 0 && shift + upto > k.len() {
        return Err(ClosedFormError::IndexOutOfRange {
            shift,
            upto,
            needed: shift + upto - 1,
            available: k.len(),
        });
    }
    let mut values = Vec::with_capacity(upto + 1);
    values.push(BigUint::one());
    if upto >= 1 {
        values.push(BigUint::from(2 + k[shift]));
    }
    for j in 2..=upto {
        let next = &values[j - 2] + BigUint::from(1 + k[j - 1 + shift]) * &values[j - 1];
        values.push(next);
    }
    Ok(ASequence {
        k: k.to_vec(),
        shift,
        values,
    })
}

fn a_values(k: &[usize], shift: usize, upto: usize) -> Vec<BigUint> {
    a_sequence(k, shift, upto)
        .expect("A-sequence range checked against the profile")
        .into_values()
}

/// Multiplicities of the `s + 2` distinct values, in increasing order of value.
pub fn multiplicities(p: &ParamProfile) -> Vec<usize> {
    let (k, l, s) = (p.k(), p.l(), p.s());
    let mut out = Vec::with_capacity(s + 2);
    out.push(2 + k[0] + l[0]);
    out.extend((1..=s).map(|j| 1 + k[j] + l[j]));
    out.push(l[s + 1] - 1);
    out
}

fn expand(values: &[BigUint], mults: &[usize]) -> DerivedVector {
    debug_assert_eq!(values.len(), mults.len());
    let entries = values
        .iter()
        .zip(mults)
        .flat_map(|(v, &m)| std::iter::repeat_n(v, m).cloned())
        .collect();
    DerivedVector::new(entries).expect("A-sequence values are positive")
}

/// Derived vector of a class with no positive middle `l_j`.
pub fn derived_theorem1(p: &ParamProfile) -> Result<DerivedVector, ClosedFormError> {
    if p.q() != 0 {
        return Err(ClosedFormError::ProfileMismatch {
            q: p.q(),
            expected: "q = 0",
        });
    }
    let (k, s) = (p.k(), p.s());
    let values = a_values(k, 0, s + 1);
    let mut mults = Vec::with_capacity(s + 2);
    mults.push(2 + k[0] + p.l()[0]);
    mults.extend((1..=s).map(|j| 1 + k[j]));
    mults.push(p.l()[s + 1] - 1);
    Ok(expand(&values, &mults))
}

/// One row of a value table: `factor · (values...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueRow {
    pub factor: BigUint,
    pub values: Vec<BigUint>,
}

impl ValueRow {
    pub fn products(&self) -> impl Iterator<Item = BigUint> + '_ {
        self.values.iter().map(move |v| &self.factor * v)
    }
}

/// The `q + 1` rows of distinct derived-vector values plus their multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTable {
    pub rows: Vec<ValueRow>,
    pub multiplicities: Vec<usize>,
}

impl ValueTable {
    /// The `s + 2` distinct values, row after row.
    pub fn flattened(&self) -> Vec<BigUint> {
        self.rows.iter().flat_map(ValueRow::products).collect()
    }

    pub fn derived(&self) -> DerivedVector {
        expand(&self.flattened(), &self.multiplicities)
    }

    pub fn to_record(&self) -> ValueTableRecord {
        ValueTableRecord {
            rows: self
                .rows
                .iter()
                .map(|r| ValueRowRecord {
                    factor: r.factor.to_str_radix(10),
                    values: r.values.iter().map(|v| v.to_str_radix(10)).collect(),
                })
                .collect(),
            multiplicities: self.multiplicities.iter().map(|m| m.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueRowRecord {
    pub factor: String,
    pub values: Vec<String>,
}

/// Decimal-string form of a [`ValueTable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueTableRecord {
    pub rows: Vec<ValueRowRecord>,
    pub multiplicities: Vec<String>,
}

/// Row layout of the distinct values for any profile. With `q = 0` this is
/// the single row `A_0, ..., A_{s+1}`.
pub fn value_table(p: &ParamProfile) -> ValueTable {
    let (k, s) = (p.k(), p.s());
    let n = p.n();
    let mut rows = Vec::with_capacity(n.len() + 1);

    let first_end = n.first().copied().unwrap_or(s + 2);
    let plain = a_values(k, 0, first_end.min(s + 1));
    rows.push(ValueRow {
        factor: BigUint::one(),
        values: plain[..first_end].to_vec(),
    });

    let mut factor = plain.last().cloned().unwrap_or_else(BigUint::one);
    for (i, &ni) in n.iter().enumerate() {
        let (upto, len) = match n.get(i + 1) {
            Some(&next) => (next - ni, next - ni),
            None => (s - ni + 1, s - ni + 2),
        };
        let mut seq = a_values(k, ni, upto);
        let carry = seq.last().cloned();
        seq.truncate(len);
        rows.push(ValueRow {
            factor: factor.clone(),
            values: seq,
        });
        if let Some(c) = carry {
            factor *= c;
        }
    }

    ValueTable {
        rows,
        multiplicities: multiplicities(p),
    }
}

/// Derived vector of a class with at least one positive middle `l_j`.
pub fn derived_theorem2(p: &ParamProfile) -> Result<DerivedVector, ClosedFormError> {
    if p.q() == 0 {
        return Err(ClosedFormError::ProfileMismatch {
            q: 0,
            expected: "q >= 1",
        });
    }
    Ok(value_table(p).derived())
}

pub fn derived_from_params(params: &ClassParams) -> DerivedVector {
    match params {
        ClassParams::Generic { r } => DerivedVector::ones(*r),
        ClassParams::Singular(p) if p.q() == 0 => derived_theorem1(p).expect("q = 0"),
        ClassParams::Singular(p) => derived_theorem2(p).expect("q >= 1"),
    }
}

/// Closed-form derived vector of an admissible word.
pub fn derived_closed(code: &ClassCode) -> DerivedVector {
    derived_from_params(&extract_params(code))
}

fn overbar(k: &[usize]) -> Vec<usize> {
    let mut kb = k.to_vec();
    kb[1] -= 1;
    kb
}

/// Checks `A^{+1}_j + (1 + k_0) Ā^{+1}_j = A_{j+1}` for `j = 0..=j_max`, where
/// `Ā` is built with `k_1 - 1` in place of `k_1`.
pub fn check_lemma_key(k: &[usize], j_max: usize) -> Result<bool, ClosedFormError> {
    if k.len() < 2 || k[1] == 0 {
        return Err(ClosedFormError::PreconditionViolated(
            "needs k_1 >= 1".to_string(),
        ));
    }
    let plain = a_sequence(k, 0, j_max + 1)?;
    let shifted = a_sequence(k, 1, j_max)?;
    let barred = a_sequence(&overbar(k), 1, j_max)?;
    let c = BigUint::from(1 + k[0]);
    Ok((0..=j_max).all(|j| {
        shifted.values[j].clone() + &c * &barred.values[j] == plain.values[j + 1]
    }))
}

/// Checks `A^{+1}_j + (1 + k_0) A^{+2}_{j-1} = A_{j+1}` for `j = 1..=j_max`,
/// valid when `k_1 = 0`.
pub fn check_lemma_key_bis(k: &[usize], j_max: usize) -> Result<bool, ClosedFormError> {
    if k.len() < 2 || k[1] != 0 {
        return Err(ClosedFormError::PreconditionViolated(
            "needs k_1 = 0".to_string(),
        ));
    }
    if j_max == 0 {
        return Ok(true);
    }
    let plain = a_sequence(k, 0, j_max + 1)?;
    let one = a_sequence(k, 1, j_max)?;
    let two = a_sequence(k, 2, j_max - 1)?;
    let c = BigUint::from(1 + k[0]);
    Ok((1..=j_max).all(|j| {
        one.values[j].clone() + &c * &two.values[j - 1] == plain.values[j + 1]
    }))
}

/// Parameters of `code · x` computed from the parameters of `code`.
pub fn prolong(params: &ClassParams, x: Letter) -> Result<ClassParams, ClosedFormError> {
    match (params, x) {
        (ClassParams::Generic { r }, Letter::G) => Ok(ClassParams::Generic { r: r + 1 }),
        (ClassParams::Generic { r }, Letter::S) => Ok(ClassParams::Singular(
            ParamProfile::new(vec![0], vec![0, *r]).map_err(|e| {
                ClosedFormError::ForbiddenProlongation(e.to_string())
            })?,
        )),
        (ClassParams::Generic { .. }, Letter::T) => Err(ClosedFormError::ForbiddenProlongation(
            "an all-G word by T".to_string(),
        )),
        (ClassParams::Singular(p), _) => {
            let mut p = p.clone();
            let (k, l) = p.parts_mut();
            match x {
                Letter::G => l[0] += 1,
                Letter::T if l[0] > 0 => {
                    return Err(ClosedFormError::ForbiddenProlongation(
                        "a word ending in G by T".to_string(),
                    ))
                }
                Letter::T => k[0] += 1,
                Letter::S => {
                    k.insert(0, 0);
                    l.insert(0, 0);
                }
            }
            Ok(ClassParams::Singular(p))
        }
    }
}
