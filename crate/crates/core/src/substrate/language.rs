//! Factor sets of `X_w`.
//!
//! Two independent routes:
//!
//! * [`language`] enumerates the length-`L` factors of `x(w)_{[0, N)}`,
//!   doubling `N` until two consecutive rounds agree;
//! * [`language_recursive`] builds them from `X = U_c sigma^c psi_w(X)`:
//!   a factor at phase `c` is a window of `w^Z` whose holes carry a shorter
//!   factor.
//!
//! The recursive count certifies the enumeration, which keeps doubling while
//! it falls short of it.

use std::collections::{BTreeSet, HashMap};

use super::params::Params;
use super::point::{point_word, CELL_BUDGET};
use super::window::HOLE;
use crate::error::{Error, Result};

/// Sorted, duplicate-free set of equal-length words stored back to back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Language {
    word_len: usize,
    data: Vec<u8>,
    /// Size of the sample window the set was read from (0 when built
    /// recursively).
    sample: usize,
}

impl Language {
    /// Build from any collection of words of length `word_len`.
    pub fn from_words<'a, I>(word_len: usize, words: I) -> Language
    where
        I: IntoIterator<Item = &'a [u8]>,
    {
        let mut v: Vec<&[u8]> = words.into_iter().collect();
        debug_assert!(v.iter().all(|w| w.len() == word_len));
        v.sort_unstable();
        v.dedup();
        Language {
            word_len,
            data: v.concat(),
            sample: 0,
        }
    }

    pub fn word_len(&self) -> usize {
        self.word_len
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.word_len).unwrap_or(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sample_window(&self) -> usize {
        self.sample
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.data[i * self.word_len..(i + 1) * self.word_len]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        (0..self.len()).map(move |i| self.word(i))
    }

    pub fn index_of(&self, word: &[u8]) -> Option<usize> {
        if word.len() != self.word_len {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.word(mid).cmp(word) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, word: &[u8]) -> bool {
        self.index_of(word).is_some()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.iter()
            .map(|w| String::from_utf8_lossy(w).into_owned())
            .collect()
    }
}

/// Initial sample size for words of length `len`.
fn initial_window(params: &Params, len: usize) -> usize {
    let p = params.p();
    let mut block = 1usize;
    while block < len {
        block *= p;
    }
    (4 * block).max(4096)
}

/// Length-`len` factors of `x(w)_{[0, n)}`.
fn factors_of_prefix(params: &Params, len: usize, n: usize) -> Result<Language> {
    let x = point_word(params, 0, n as i64 - 1)?;
    let mut lang = Language::from_words(len, x.windows(len));
    lang.sample = n;
    Ok(lang)
}

/// The length-`len` factors of `X_w`, read from a growing prefix of `x(w)`.
///
/// Rounds are nested, so equal sizes mean equal sets. A stable round is only
/// accepted once it reaches the exact count from [`exact_count`].
pub fn language(params: &Params, len: usize) -> Result<Language> {
    if len == 0 {
        return Ok(Language::from_words(0, [&[][..]]));
    }
    let target = exact_count(params, len);
    let mut n = initial_window(params, len);
    let mut prev = factors_of_prefix(params, len, n)?;
    loop {
        n *= 2;
        if n as u64 > CELL_BUDGET {
            return Err(Error::Unstable(len));
        }
        let next = factors_of_prefix(params, len, n)?;
        if next.len() == prev.len() && next.len() as u128 >= target {
            assert_eq!(
                next.len() as u128,
                target,
                "enumeration exceeds the exact count"
            );
            return Ok(prev);
        }
        prev = next;
    }
}

/// Phase-`c` window of length `len` of `psi_w(v)`, where `v` fills the holes
/// of `w^Z` in `[c, c + len)` in order.
fn phase_word(params: &Params, c: usize, len: usize, v: &[u8]) -> Vec<u8> {
    let mut holes = v.iter();
    (c..c + len)
        .map(|i| match params.skeleton_cell(i as i64) {
            HOLE => *holes.next().expect("fill covers every hole"),
            b => b,
        })
        .collect()
}

/// Exact length-`len` factor set built from `X = U_c sigma^c psi_w(X)`.
pub fn language_recursive(params: &Params, len: usize) -> Language {
    let mut memo = HashMap::new();
    recursive_set(params, len, &mut memo).clone()
}

fn recursive_set<'m>(
    params: &Params,
    len: usize,
    memo: &'m mut HashMap<usize, Language>,
) -> &'m Language {
    if !memo.contains_key(&len) {
        let lang = if len == 0 {
            Language::from_words(0, [&[][..]])
        } else if len == 1 {
            // Every letter of x(w) is eventually a letter of w.
            let letters: Vec<[u8; 1]> = params.letters().into_iter().map(|b| [b]).collect();
            Language::from_words(1, letters.iter().map(|a| &a[..]))
        } else {
            let mut words: BTreeSet<Vec<u8>> = BTreeSet::new();
            for c in 0..params.p() {
                let inner_len = params.holes_in(c as i64, len);
                // inner_len < len because w^Z has no two adjacent holes
                let inner = recursive_set(params, inner_len, memo).clone();
                for v in inner.iter() {
                    words.insert(phase_word(params, c, len, v));
                }
            }
            Language::from_words(len, words.iter().map(Vec::as_slice))
        };
        memo.insert(len, lang);
    }
    &memo[&len]
}

/// Length from which every factor has a single phase mod `p`, found on the
/// recursive sets: the first `len` at which the per-phase sets are disjoint.
fn disjoint_phase_length(params: &Params) -> usize {
    let mut memo = HashMap::new();
    for len in 2.. {
        let mut total = 0;
        for c in 0..params.p() {
            let inner_len = params.holes_in(c as i64, len);
            total += recursive_set(params, inner_len, &mut memo).len();
        }
        if total == recursive_set(params, len, &mut memo).len() {
            return len;
        }
    }
    unreachable!()
}

/// Exact factor counts `n(0..=max_len)`.
///
/// Below the disjoint-phase length the recursive sets are counted; beyond it
/// `n(L) = sum_c n(holes of w^Z in [c, c+L))`, since phases separate and
/// the hole content determines the word.
pub fn exact_counts(params: &Params, max_len: usize) -> Vec<u128> {
    let d = disjoint_phase_length(params);
    let mut counts: Vec<u128> = Vec::with_capacity(max_len + 1);
    for len in 0..=max_len {
        let n = if len <= d {
            language_recursive(params, len).len() as u128
        } else {
            (0..params.p())
                .map(|c| counts[params.holes_in(c as i64, len)])
                .sum()
        };
        counts.push(n);
    }
    counts
}

pub fn exact_count(params: &Params, len: usize) -> u128 {
    exact_counts(params, len)[len]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substrate::window::flip;

    fn p() -> Params {
        Params::default()
    }

    #[test]
    fn short_lengths() {
        let l1 = language(&p(), 1).unwrap();
        assert_eq!(l1.to_strings(), vec!["0", "1"]);
        let l2 = language(&p(), 2).unwrap();
        assert!(l2.contains(b"11") && l2.contains(b"00"));
        assert_eq!(l2.len(), 4);
    }

    #[test]
    fn routes_agree() {
        for len in 1..=60 {
            let a = language(&p(), len).unwrap();
            let b = language_recursive(&p(), len);
            assert_eq!(
                a,
                Language {
                    sample: a.sample,
                    ..b
                },
                "length {len}"
            );
        }
    }

    #[test]
    fn known_counts() {
        let counts = exact_counts(&p(), 300);
        assert_eq!(
            &counts[1..=12],
            &[2, 4, 7, 13, 20, 26, 32, 41, 53, 65, 79, 93]
        );
        assert_eq!(counts[100], 3550);
        assert_eq!(counts[300], 23825);
    }

    #[test]
    fn long_words_need_a_large_sample() {
        // 200k cells miss some length-300 factors; the certificate forces more
        let lang = language(&p(), 300).unwrap();
        assert_eq!(lang.len(), 23825);
        assert!(lang.sample_window() > 200_000);
    }

    #[test]
    fn flip_is_not_a_symmetry() {
        let l3 = language(&p(), 3).unwrap();
        assert!(l3.contains(b"000") && !l3.contains(&flip(b"000")));
    }

    #[test]
    fn lookup() {
        let l = language(&p(), 5).unwrap();
        for (i, w) in l.iter().enumerate() {
            assert_eq!(l.index_of(w), Some(i));
        }
        assert_eq!(l.index_of(b"11111"), None);
        assert_eq!(l.index_of(b"1"), None);
    }
}
