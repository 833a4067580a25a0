//! Codes of geometric classes: the admissible-word grammar, enumeration and
//! the discrete parameters `s`, `k_j`, `l_j`, `n_i`, `q`.
//!
//! A code containing at least one `S` decomposes uniquely as
//!
//! ```text
//! G^{l_{s+1}} S T^{k_s} G^{l_s} S T^{k_{s-1}} G^{l_{s-1}} ... S T^{k_0} G^{l_0}
//! ```
//!
//! so that the parameters are indexed from the rightmost `S` backwards. The
//! all-`G` code has no such decomposition and is reported as
//! [`ClassParams::Generic`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::fibonacci::fibonacci;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    G,
    S,
    T,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::G, Letter::S, Letter::T];

    pub fn as_char(self) -> char {
        match self {
            Letter::G => 'G',
            Letter::S => 'S',
            Letter::T => 'T',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'G' => Some(Letter::G),
            'S' => Some(Letter::S),
            'T' => Some(Letter::T),
            _ => None,
        }
    }

    /// Letter in the `{R, V, T}` alphabet (R for G, V for S).
    pub fn rvt_char(self) -> char {
        match self {
            Letter::G => 'R',
            Letter::S => 'V',
            Letter::T => 'T',
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Grammar violations. Positions are 0-based character offsets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid character {found:?} at position {position}, expected G, S or T")]
    InvalidCharacter { position: usize, found: char },
    #[error("word of length {len} is too short, admissible words have length at least 2")]
    TooShort { len: usize },
    #[error("letter at position {position} must be G, admissible words start with GG")]
    BadPrefix { position: usize },
    #[error("forbidden factor GT ending at position {position}")]
    ForbiddenFactor { position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("word length must be at least 2, got {0}")]
    LengthTooSmall(usize),
    #[error("invalid parameter profile: {0}")]
    InvalidProfile(String),
    #[error("prefix {prefix} is longer than the requested length {r}")]
    PrefixTooLong { prefix: String, r: usize },
}

/// An admissible word: starts with `GG`, no factor `GT`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassCode(Vec<Letter>);

impl ClassCode {
    pub fn from_letters(letters: Vec<Letter>) -> Result<Self, ParseError> {
        if letters.len() < 2 {
            return Err(ParseError::TooShort { len: letters.len() });
        }
        if let Some(position) = letters[..2].iter().position(|&l| l != Letter::G) {
            return Err(ParseError::BadPrefix { position });
        }
        if let Some(i) = letters
            .windows(2)
            .position(|w| w == [Letter::G, Letter::T])
        {
            return Err(ParseError::ForbiddenFactor { position: i + 1 });
        }
        Ok(ClassCode(letters))
    }

    /// The generic (jet-like) class `G^r`.
    pub fn generic(r: usize) -> Result<Self, WordError> {
        if r < 2 {
            return Err(WordError::LengthTooSmall(r));
        }
        Ok(ClassCode(vec![Letter::G; r]))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Word length `r`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of non-`G` letters, the codimension of the stratum.
    pub fn codimension(&self) -> usize {
        self.0.iter().filter(|&&l| l != Letter::G).count()
    }

    pub fn count_s(&self) -> usize {
        self.0.iter().filter(|&&l| l == Letter::S).count()
    }

    /// Whether `x` may be appended without leaving the grammar.
    pub fn can_append(&self, x: Letter) -> bool {
        !(x == Letter::T && self.0.last() == Some(&Letter::G))
    }

    /// The word `self · x`, if admissible.
    pub fn appended(&self, x: Letter) -> Option<ClassCode> {
        if !self.can_append(x) {
            return None;
        }
        let mut letters = self.0.clone();
        letters.push(x);
        Some(ClassCode(letters))
    }

    /// The word with its last letter removed, if still of length ≥ 2.
    pub fn truncated(&self) -> Option<ClassCode> {
        (self.0.len() > 2).then(|| ClassCode(self.0[..self.0.len() - 1].to_vec()))
    }

    pub fn to_rvt_string(&self) -> String {
        self.0.iter().map(|l| l.rvt_char()).collect()
    }
}

impl fmt::Display for ClassCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for ClassCode {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Parses an uppercase `G`/`S`/`T` string into an admissible word.
pub fn parse(text: &str) -> Result<ClassCode, ParseError> {
    let letters = text
        .chars()
        .enumerate()
        .map(|(position, c)| {
            Letter::from_char(c).ok_or(ParseError::InvalidCharacter { position, found: c })
        })
        .collect::<Result<Vec<_>, _>>()?;
    ClassCode::from_letters(letters)
}

/// Number of admissible words of length `r`, `F_{2r-3}`.
pub fn count_admissible(r: usize) -> Result<BigUint, WordError> {
    if r < 2 {
        return Err(WordError::LengthTooSmall(r));
    }
    Ok(fibonacci(2 * r - 3))
}

/// Streams the admissible words of length `r` in lexicographic order
/// (`G < S < T`).
pub fn enumerate_admissible(r: usize) -> Result<AdmissibleWords, WordError> {
    AdmissibleWords::with_prefix(&ClassCode::generic(2).expect("GG"), r)
}

/// Lexicographic stream of admissible words sharing a fixed prefix.
///
/// Holds one word at a time; each step changes the rightmost letter that can
/// be increased and resets everything after it to `G`.
#[derive(Debug, Clone)]
pub struct AdmissibleWords {
    current: Option<Vec<Letter>>,
    fixed: usize,
}

impl AdmissibleWords {
    pub fn with_prefix(prefix: &ClassCode, r: usize) -> Result<Self, WordError> {
        if r < 2 {
            return Err(WordError::LengthTooSmall(r));
        }
        if prefix.len() > r {
            return Err(WordError::PrefixTooLong {
                prefix: prefix.to_string(),
                r,
            });
        }
        let mut first = prefix.letters().to_vec();
        first.resize(r, Letter::G);
        Ok(AdmissibleWords {
            current: Some(first),
            fixed: prefix.len(),
        })
    }

    fn advance(word: &mut [Letter], fixed: usize) -> bool {
        for i in (fixed..word.len()).rev() {
            let next = match word[i] {
                Letter::G => Some(Letter::S),
                Letter::S if word[i - 1] != Letter::G => Some(Letter::T),
                _ => None,
            };
            if let Some(next) = next {
                word[i] = next;
                word[i + 1..].fill(Letter::G);
                return true;
            }
        }
        false
    }
}

impl Iterator for AdmissibleWords {
    type Item = ClassCode;

    fn next(&mut self) -> Option<ClassCode> {
        let word = self.current.take()?;
        let mut succ = word.clone();
        if Self::advance(&mut succ, self.fixed) {
            self.current = Some(succ);
        }
        Some(ClassCode(word))
    }
}

/// All admissible words of length `min(depth, r)`, used to split a length-`r`
/// sweep into independent chunks.
pub fn partition_prefixes(r: usize, depth: usize) -> Result<Vec<ClassCode>, WordError> {
    let len = depth.clamp(2, r.max(2));
    Ok(enumerate_admissible(len)?.collect())
}

/// Discrete parameters of a code with `s + 1 ≥ 1` letters `S`.
///
/// `k[j]` and `l[j]` follow the backwards indexing: `k[0]`, `l[0]` are the
/// runs of `T` and `G` after the rightmost `S`, and `l[s+1]` is the leading
/// run of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamProfile {
    k: Vec<usize>,
    l: Vec<usize>,
}

impl ParamProfile {
    pub fn new(k: Vec<usize>, l: Vec<usize>) -> Result<Self, WordError> {
        if k.is_empty() {
            return Err(WordError::InvalidProfile("k must have at least one entry".into()));
        }
        if l.len() != k.len() + 1 {
            return Err(WordError::InvalidProfile(format!(
                "expected {} l-parameters for {} k-parameters, got {}",
                k.len() + 1,
                k.len(),
                l.len()
            )));
        }
        let lead = l[l.len() - 1];
        if lead < 2 {
            return Err(WordError::InvalidProfile(format!(
                "leading G-run l_(s+1) must be at least 2, got {lead}"
            )));
        }
        Ok(ParamProfile { k, l })
    }

    /// `s`, the number of letters `S` minus one.
    pub fn s(&self) -> usize {
        self.k.len() - 1
    }

    pub fn k(&self) -> &[usize] {
        &self.k
    }

    pub fn l(&self) -> &[usize] {
        &self.l
    }

    /// Indices `1 ≤ i ≤ s` with `l_i > 0`, ascending.
    pub fn n(&self) -> Vec<usize> {
        (1..=self.s()).filter(|&i| self.l[i] > 0).collect()
    }

    pub fn q(&self) -> usize {
        self.l[1..=self.s()].iter().filter(|&&x| x > 0).count()
    }

    /// Word length `r`.
    pub fn word_len(&self) -> usize {
        self.s() + 1 + self.k.iter().sum::<usize>() + self.l.iter().sum::<usize>()
    }

    pub fn render(&self) -> ClassCode {
        let mut letters = Vec::with_capacity(self.word_len());
        letters.extend(std::iter::repeat_n(Letter::G, self.l[self.s() + 1]));
        for j in (0..=self.s()).rev() {
            letters.push(Letter::S);
            letters.extend(std::iter::repeat_n(Letter::T, self.k[j]));
            letters.extend(std::iter::repeat_n(Letter::G, self.l[j]));
        }
        ClassCode(letters)
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Vec<usize>, &mut Vec<usize>) {
        (&mut self.k, &mut self.l)
    }
}

/// Parameters of a class: either the generic all-`G` class of length `r`, or
/// a profile of a singular class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassParams {
    Generic { r: usize },
    Singular(ParamProfile),
}

impl ClassParams {
    pub fn word_len(&self) -> usize {
        match self {
            ClassParams::Generic { r } => *r,
            ClassParams::Singular(p) => p.word_len(),
        }
    }

    pub fn render(&self) -> ClassCode {
        match self {
            ClassParams::Generic { r } => ClassCode(vec![Letter::G; *r]),
            ClassParams::Singular(p) => p.render(),
        }
    }

    pub fn profile(&self) -> Option<&ParamProfile> {
        match self {
            ClassParams::Generic { .. } => None,
            ClassParams::Singular(p) => Some(p),
        }
    }
}

/// Renders `G^{l_{s+1}} S T^{k_s} G^{l_s} ... S T^{k_0} G^{l_0}`.
pub fn render_params(k: &[usize], l: &[usize]) -> Result<ClassCode, WordError> {
    Ok(ParamProfile::new(k.to_vec(), l.to_vec())?.render())
}

pub fn extract_params(code: &ClassCode) -> ClassParams {
    let letters = code.letters();
    let lead = letters.iter().take_while(|&&l| l == Letter::G).count();
    if lead == letters.len() {
        return ClassParams::Generic { r: letters.len() };
    }
    // Blocks S T^a G^b, left to right; reversed below into backwards indexing.
    let mut k = Vec::new();
    let mut l = Vec::new();
    let mut i = lead;
    while i < letters.len() {
        debug_assert_eq!(letters[i], Letter::S);
        i += 1;
        let t_run = letters[i..].iter().take_while(|&&x| x == Letter::T).count();
        i += t_run;
        let g_run = letters[i..].iter().take_while(|&&x| x == Letter::G).count();
        i += g_run;
        k.push(t_run);
        l.push(g_run);
    }
    k.reverse();
    l.reverse();
    l.push(lead);
    ClassParams::Singular(ParamProfile { k, l })
}
