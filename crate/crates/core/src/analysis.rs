//! Whole-length sweeps over the admissible words of a given length.
//!
//! Sweeps split the words of length `r` by prefix, fold each chunk on a
//! worker and merge the chunk results in prefix order, so reports do not
//! depend on the number of workers.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::closed_form::derived_closed;
use crate::fibonacci::fibonacci;
use crate::recurrence::{
    big_growth_vector, derive_recurrence, nonholonomy_degree, small_growth_vector, DerivedVector,
    RecurrenceError, SmallGrowthVector,
};
use crate::word::{extract_params, partition_prefixes, AdmissibleWords, ClassCode, ClassParams, WordError};

const PREFIX_DEPTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("recurrence failed on {word}: {source}")]
    Recurrence {
        word: String,
        #[source]
        source: RecurrenceError,
    },
    #[error("oracle divergence on {}: recurrence {} vs closed form {}", .0.word, .0.recurrence, .0.closed)]
    OracleDivergence(Box<Divergence>),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// A word on which the recurrence and the closed form disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub word: ClassCode,
    pub recurrence: DerivedVector,
    pub closed: DerivedVector,
}

/// Folds every admissible word of length `r`, chunked by prefix and merged in
/// canonical order. `jobs = None` uses rayon's default pool size.
pub fn sweep<A, F, M>(r: usize, jobs: Option<usize>, init: A, fold: F, merge: M) -> Result<A, AnalysisError>
where
    A: Clone + Send + Sync,
    F: Fn(A, ClassCode) -> Result<A, AnalysisError> + Sync,
    M: Fn(A, A) -> A,
{
    let prefixes = partition_prefixes(r, PREFIX_DEPTH.min(r))?;
    let run = || {
        prefixes
            .par_iter()
            .map(|p| {
                AdmissibleWords::with_prefix(p, r)?.try_fold(init.clone(), &fold)
            })
            .collect::<Result<Vec<A>, AnalysisError>>()
    };
    let parts = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| AnalysisError::Pool(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    Ok(parts.into_iter().fold(init, merge))
}

fn recurrence(word: &ClassCode) -> Result<DerivedVector, AnalysisError> {
    derive_recurrence(word).map_err(|source| AnalysisError::Recurrence {
        word: word.to_string(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthSummary {
    pub r: usize,
    pub classes: u64,
    pub divergences: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceSummary {
    pub lengths: Vec<LengthSummary>,
    pub first_divergence: Option<Divergence>,
}

impl EquivalenceSummary {
    pub fn total_classes(&self) -> u64 {
        self.lengths.iter().map(|l| l.classes).sum()
    }

    pub fn total_divergences(&self) -> u64 {
        self.lengths.iter().map(|l| l.divergences).sum()
    }
}

#[derive(Clone)]
struct EqAcc {
    classes: u64,
    divergences: u64,
    first: Option<Divergence>,
}

/// Compares closed form and recurrence on every word of length `2..=r_max`.
pub fn verify_equivalence(r_max: usize, jobs: Option<usize>) -> Result<EquivalenceSummary, AnalysisError> {
    if r_max < 2 {
        return Err(WordError::LengthTooSmall(r_max).into());
    }
    let mut lengths = Vec::new();
    let mut first_divergence = None;
    for r in 2..=r_max {
        let acc = sweep(
            r,
            jobs,
            EqAcc { classes: 0, divergences: 0, first: None },
            |mut acc, w| {
                acc.classes += 1;
                let rec = recurrence(&w)?;
                let closed = derived_closed(&w);
                if rec != closed {
                    acc.divergences += 1;
                    acc.first.get_or_insert(Divergence { word: w, recurrence: rec, closed });
                }
                Ok(acc)
            },
            |a, b| EqAcc {
                classes: a.classes + b.classes,
                divergences: a.divergences + b.divergences,
                first: a.first.or(b.first),
            },
        )?;
        if first_divergence.is_none() {
            first_divergence = acc.first;
        }
        lengths.push(LengthSummary { r, classes: acc.classes, divergences: acc.divergences });
    }
    Ok(EquivalenceSummary { lengths, first_divergence })
}

/// Realized nonholonomy degrees in one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub r: usize,
    pub realized: BTreeSet<BigUint>,
    pub min: BigUint,
    pub max: BigUint,
    /// Unrealized values in `[r+1, F_{r+2}]`, ascending, possibly truncated.
    pub missing: Vec<BigUint>,
    /// Size of the full unrealized set.
    pub missing_count: BigUint,
    pub missing_truncated: bool,
}

impl SpectrumReport {
    pub fn lower_bound(&self) -> BigUint {
        BigUint::from(self.r + 1)
    }

    pub fn upper_bound(&self) -> BigUint {
        fibonacci(self.r + 2)
    }
}

pub fn degree_spectrum(
    r: usize,
    jobs: Option<usize>,
    max_missing: Option<usize>,
) -> Result<SpectrumReport, AnalysisError> {
    let realized = sweep(
        r,
        jobs,
        BTreeSet::new(),
        |mut set, w| {
            set.insert(nonholonomy_degree(&recurrence(&w)?));
            Ok(set)
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )?;
    let min = realized.first().cloned().expect("at least one class per length");
    let max = realized.last().cloned().expect("at least one class per length");
    let lower = BigUint::from(r + 1);
    let upper = fibonacci(r + 2);
    let in_range = realized.range(&lower..=&upper).count();
    let missing_count = &upper + 1u32 - &lower - BigUint::from(in_range);

    let cap = max_missing.unwrap_or(usize::MAX);
    let mut missing = Vec::new();
    let mut v = lower;
    while v <= upper && missing.len() < cap {
        if !realized.contains(&v) {
            missing.push(v.clone());
        }
        v += 1u32;
    }
    let missing_truncated = BigUint::from(missing.len()) < missing_count;
    Ok(SpectrumReport { r, realized, min, max, missing, missing_count, missing_truncated })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinctnessReport {
    pub r: usize,
    pub classes: u64,
    pub distinct_vectors: u64,
    /// Pairs of words sharing a derived vector (first word seen, later word).
    pub collisions: Vec<(ClassCode, ClassCode)>,
}

impl DistinctnessReport {
    pub fn all_distinct(&self) -> bool {
        self.collisions.is_empty()
    }
}

/// Checks that the derived vectors of length `r` are pairwise distinct, keyed
/// by their decimal row form.
pub fn distinctness(r: usize, jobs: Option<usize>) -> Result<DistinctnessReport, AnalysisError> {
    let keyed = sweep(
        r,
        jobs,
        Vec::new(),
        |mut v, w| {
            let key = recurrence(&w)?.to_string();
            v.push((key, w));
            Ok(v)
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )?;
    let classes = keyed.len() as u64;
    let mut seen: HashMap<String, ClassCode> = HashMap::with_capacity(keyed.len());
    let mut collisions = Vec::new();
    for (key, w) in keyed {
        match seen.get(&key) {
            Some(first) => collisions.push((first.clone(), w)),
            None => {
                seen.insert(key, w);
            }
        }
    }
    Ok(DistinctnessReport {
        r,
        classes,
        distinct_vectors: seen.len() as u64,
        collisions,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremes {
    pub min_degree: BigUint,
    pub min_classes: Vec<ClassCode>,
    pub max_degree: BigUint,
    pub max_classes: Vec<ClassCode>,
}

/// Classes attaining the smallest and largest nonholonomy degree in length `r`.
pub fn extremal_classes(r: usize, jobs: Option<usize>) -> Result<Extremes, AnalysisError> {
    fn keep(best: Option<(BigUint, Vec<ClassCode>)>, other: (BigUint, Vec<ClassCode>), want_max: bool) -> (BigUint, Vec<ClassCode>) {
        match best {
            None => other,
            Some((d, mut ws)) => {
                if d == other.0 {
                    ws.extend(other.1);
                    (d, ws)
                } else if (other.0 > d) == want_max {
                    other
                } else {
                    (d, ws)
                }
            }
        }
    }
    type Acc = (Option<(BigUint, Vec<ClassCode>)>, Option<(BigUint, Vec<ClassCode>)>);
    let (lo, hi): Acc = sweep(
        r,
        jobs,
        (None, None),
        |(lo, hi), w| {
            let d = nonholonomy_degree(&recurrence(&w)?);
            Ok((
                Some(keep(lo, (d.clone(), vec![w.clone()]), false)),
                Some(keep(hi, (d, vec![w]), true)),
            ))
        },
        |(alo, ahi), (blo, bhi)| {
            (
                match blo { Some(b) => Some(keep(alo, b, false)), None => alo },
                match bhi { Some(b) => Some(keep(ahi, b, true)), None => ahi },
            )
        },
    )?;
    let (min_degree, min_classes) = lo.expect("nonempty length");
    let (max_degree, max_classes) = hi.expect("nonempty length");
    Ok(Extremes { min_degree, min_classes, max_degree, max_classes })
}

/// Every per-class quantity, with the derived vector computed both ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub code: ClassCode,
    pub params: ClassParams,
    pub derived: DerivedVector,
    pub sgrv: SmallGrowthVector,
    pub degree: BigUint,
    pub codim: usize,
    pub big_growth: Vec<usize>,
}

impl ClassReport {
    pub fn r(&self) -> usize {
        self.code.len()
    }
}

pub fn class_report(code: &ClassCode) -> Result<ClassReport, AnalysisError> {
    let rec = recurrence(code)?;
    let closed = derived_closed(code);
    if rec != closed {
        return Err(AnalysisError::OracleDivergence(Box::new(Divergence {
            word: code.clone(),
            recurrence: rec,
            closed,
        })));
    }
    Ok(ClassReport {
        code: code.clone(),
        params: extract_params(code),
        sgrv: small_growth_vector(&rec),
        degree: nonholonomy_degree(&rec),
        codim: code.codimension(),
        big_growth: big_growth_vector(code.len()),
        derived: rec,
    })
}
