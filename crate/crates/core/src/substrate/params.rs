use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::lazy::least_lazy_period;
use super::window::{word_str, HOLE};
use crate::error::{Assumption, Error, Result};

/// The tuple `(p, p', q, w)` defining the subshift, validated against the
/// standing assumptions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    p: usize,
    p_prime: usize,
    q: usize,
    word: Vec<u8>,
    holes: Vec<usize>,
}

/// Unvalidated parameters, as read from a config file or the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsConfig {
    pub p: usize,
    pub p_prime: usize,
    pub q: usize,
    pub w: String,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig {
            p: 5,
            p_prime: 2,
            q: 2,
            w: "1_0_0".into(),
        }
    }
}

impl ParamsConfig {
    pub fn validate(&self) -> Result<Params> {
        validate_params(self.p, self.p_prime, self.q, &self.w)
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Check every standing assumption that does not need the subshift itself.
///
/// The "identity is the only symbol map" assumption is checked separately by
/// [`crate::blockmap::flip_witness`].
pub fn validate_params(p: usize, p_prime: usize, q: usize, w: &str) -> Result<Params> {
    let word = w.as_bytes().to_vec();
    if let Some(bad) = word.iter().find(|&&b| !matches!(b, b'0' | b'1' | HOLE)) {
        return Err(Error::Parse(format!(
            "w contains {:?}; expected 0, 1 or _",
            *bad as char
        )));
    }
    if word.is_empty() {
        return Err(Error::Parse("w is empty".into()));
    }

    let mut violated = Vec::new();
    if p != 2 * p_prime + 1 {
        violated.push(Assumption::OddSplit);
    }
    if !(1 < q && q <= p_prime) {
        violated.push(Assumption::HoleCountRange);
    }
    if q.gcd(&p) != 1 {
        violated.push(Assumption::Coprime);
    }
    if !is_prime(p) {
        violated.push(Assumption::PrimePeriod);
    }
    if word.len() != p {
        violated.push(Assumption::WordLength);
    }
    if word[0] == HOLE {
        violated.push(Assumption::FirstLetter);
    }
    if word[word.len() - 1] == HOLE {
        violated.push(Assumption::LastLetter);
    }
    if word.windows(2).any(|pair| pair == [HOLE, HOLE]) {
        violated.push(Assumption::AdjacentHoles);
    }
    let holes: Vec<usize> = (0..word.len()).filter(|&i| word[i] == HOLE).collect();
    if holes.len() != q {
        violated.push(Assumption::HoleCount);
    }
    if least_lazy_period(&word) != p {
        violated.push(Assumption::LazyPeriod);
    }

    if violated.is_empty() {
        Ok(Params {
            p,
            p_prime,
            q,
            word,
            holes,
        })
    } else {
        Err(Error::AssumptionViolated(violated))
    }
}

impl Default for Params {
    /// `(5, 2, 2, 1_0_0)`.
    fn default() -> Self {
        ParamsConfig::default()
            .validate()
            .expect("default parameters are valid")
    }
}

impl Params {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn p_prime(&self) -> usize {
        self.p_prime
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `w` as bytes over `{0,1,_}`.
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn word_string(&self) -> String {
        word_str(&self.word)
    }

    /// Offsets of the holes of `w`, increasing.
    pub fn hole_offsets(&self) -> &[usize] {
        &self.holes
    }

    pub fn config(&self) -> ParamsConfig {
        ParamsConfig {
            p: self.p,
            p_prime: self.p_prime,
            q: self.q,
            w: self.word_string(),
        }
    }

    /// Cell of `w^Z` at `pos`.
    pub fn skeleton_cell(&self, pos: i64) -> u8 {
        self.word[pos.rem_euclid(self.p as i64) as usize]
    }

    /// Absolute position of the hole of `w^Z` with signed index `k`; index 0
    /// is the least nonnegative hole.
    pub fn hole_position(&self, k: i64) -> i64 {
        let (m, t) = k.div_mod_floor(&(self.q as i64));
        m * self.p as i64 + self.holes[t as usize] as i64
    }

    /// Signed hole index of `pos` in `w^Z`, or `None` for a letter cell.
    pub fn hole_index(&self, pos: i64) -> Option<i64> {
        let (m, r) = pos.div_mod_floor(&(self.p as i64));
        let t = self.holes.iter().position(|&h| h as i64 == r)?;
        Some(m * self.q as i64 + t as i64)
    }

    /// Number of holes of `w^Z` in `[start, start + len)`.
    pub fn holes_in(&self, start: i64, len: usize) -> usize {
        (start..start + len as i64)
            .filter(|&i| self.skeleton_cell(i) == HOLE)
            .count()
    }

    /// The letters that occur in `w`, sorted.
    pub fn letters(&self) -> Vec<u8> {
        let mut v: Vec<u8> = self.word.iter().copied().filter(|&b| b != HOLE).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}
