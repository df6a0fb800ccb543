//! Local rules of endomorphisms.
//!
//! A [`Rule`] of radius `R` is a table over the length-`2R+1` factors of the
//! subshift: maps are only defined on `X`, so tables never mention words
//! outside the language. Rules are stored centered; `f(y)_i` is the table
//! entry for `y_{[i-R, i+R]}`.

use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{induced_shift, Phase};
use crate::shift::ToeplitzShift;
use crate::substrate::{flip, word_str, Language, PartialWindow};

#[derive(Clone, Debug)]
pub struct Rule {
    radius: usize,
    domain: Arc<Language>,
    /// `outputs[i]` is the image of `domain.word(i)`.
    outputs: Vec<u8>,
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.radius == other.radius && self.outputs == other.outputs
    }
}

impl Eq for Rule {}

impl Hash for Rule {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.radius.hash(state);
        self.outputs.hash(state);
    }
}

#[derive(Serialize, Deserialize)]
struct RuleJson {
    radius: usize,
    table: BTreeMap<String, String>,
}

impl Rule {
    /// Tabulate `local` over `language(2R+1)`.
    pub fn try_from_fn<F>(shift: &ToeplitzShift, radius: usize, mut local: F) -> Result<Rule>
    where
        F: FnMut(&[u8]) -> Result<u8>,
    {
        let domain = shift.language(2 * radius + 1)?;
        let outputs = domain.iter().map(&mut local).collect::<Result<Vec<u8>>>()?;
        Ok(Rule {
            radius,
            domain,
            outputs,
        })
    }

    pub fn from_fn<F>(shift: &ToeplitzShift, radius: usize, mut local: F) -> Result<Rule>
    where
        F: FnMut(&[u8]) -> u8,
    {
        Rule::try_from_fn(shift, radius, |u| Ok(local(u)))
    }

    /// `sigma^i`: radius `|i|`, output `u_{|i| + i}`.
    pub fn shift_power(shift: &ToeplitzShift, i: i64) -> Result<Rule> {
        let r = i.unsigned_abs() as usize;
        Rule::from_fn(shift, r, |u| u[(r as i64 + i) as usize])
    }

    pub fn identity(shift: &ToeplitzShift) -> Result<Rule> {
        Rule::shift_power(shift, 0)
    }

    /// The symbol map exchanging 0 and 1.
    pub fn flip(shift: &ToeplitzShift) -> Result<Rule> {
        Rule::from_fn(shift, 0, |u| flip(u)[0])
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn domain(&self) -> &Language {
        &self.domain
    }

    pub fn outputs(&self) -> &[u8] {
        &self.outputs
    }

    /// Table entry for a word of length `2R+1`.
    pub fn eval(&self, word: &[u8]) -> Result<u8> {
        self.domain
            .index_of(word)
            .map(|i| self.outputs[i])
            .ok_or_else(|| Error::UnknownWord(word_str(word)))
    }

    /// Image of the centered subword of radius `R` of a longer odd word.
    fn eval_center(&self, word: &[u8]) -> Result<u8> {
        let c = word.len() / 2;
        self.eval(&word[c - self.radius..=c + self.radius])
    }

    /// Image of a word of length `n >= 2R+1`: a word of length `n - 2R`.
    pub fn apply_word(&self, word: &[u8]) -> Result<Vec<u8>> {
        let span = 2 * self.radius + 1;
        if word.len() < span {
            return Err(Error::WindowArithmetic(self.radius));
        }
        word.windows(span).map(|u| self.eval(u)).collect()
    }

    /// The sign-free part of `sigma^i` detection: `Some(i)` when this rule is
    /// the shift power `sigma^i` at its own radius.
    pub fn as_shift_power(&self) -> Option<i64> {
        let r = self.radius;
        let candidates: &[i64] = if r == 0 {
            &[0]
        } else {
            &[r as i64, -(r as i64)]
        };
        candidates.iter().copied().find(|&i| {
            self.domain
                .iter()
                .zip(&self.outputs)
                .all(|(u, &o)| u[(r as i64 + i) as usize] == o)
        })
    }

    /// `{"radius":R,"table":{...}}` with keys in lexicographic order.
    pub fn to_json(&self) -> String {
        let table = self
            .domain
            .iter()
            .zip(&self.outputs)
            .map(|(u, &o)| (word_str(u), (o as char).to_string()))
            .collect();
        serde_json::to_string(&RuleJson {
            radius: self.radius,
            table,
        })
        .expect("rule json")
    }

    /// Parse a rule; its table must cover exactly `language(2R+1)`.
    pub fn from_json(shift: &ToeplitzShift, text: &str) -> Result<Rule> {
        let raw: RuleJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let domain = shift.language(2 * raw.radius + 1)?;
        if raw.table.len() != domain.len() {
            return Err(Error::Parse(format!(
                "table has {} entries, language({}) has {}",
                raw.table.len(),
                2 * raw.radius + 1,
                domain.len()
            )));
        }
        let mut outputs = Vec::with_capacity(domain.len());
        for u in domain.iter() {
            let o = raw
                .table
                .get(&word_str(u))
                .ok_or_else(|| Error::Parse(format!("table misses factor {}", word_str(u))))?;
            match o.as_bytes() {
                [b @ (b'0' | b'1')] => outputs.push(*b),
                _ => return Err(Error::Parse(format!("bad output {o:?}"))),
            }
        }
        Ok(Rule {
            radius: raw.radius,
            domain,
            outputs,
        })
    }
}

/// `f(y)` on a hole-free window: offset grows by `R`, length shrinks by `2R`.
pub fn apply(f: &Rule, y: &PartialWindow) -> Result<PartialWindow> {
    let word = y
        .to_word()
        .ok_or_else(|| Error::Parse("rules apply to hole-free windows".into()))?;
    let image = f.apply_word(&word)?;
    PartialWindow::from_word(y.offset() + f.radius() as i64, &image)
}

/// `f o g`: evaluate `g`, then `f`. The result has radius `R_f + R_g`.
pub fn compose(shift: &ToeplitzShift, f: &Rule, g: &Rule) -> Result<Rule> {
    Rule::try_from_fn(shift, f.radius + g.radius, |u| f.eval(&g.apply_word(u)?))
}

/// `f^n` for `n >= 0`, minimized after every step.
pub fn compose_power(shift: &ToeplitzShift, f: &Rule, n: u32) -> Result<Rule> {
    let mut acc = Rule::identity(shift)?;
    for _ in 0..n {
        acc = minimize(shift, &compose(shift, f, &acc)?)?;
    }
    Ok(acc)
}

/// Whether two rules define the same map on `X`: agreement on every factor
/// of the common length.
pub fn equal(shift: &ToeplitzShift, f: &Rule, g: &Rule) -> Result<bool> {
    let r = f.radius.max(g.radius);
    let lang = shift.language(2 * r + 1)?;
    for u in lang.iter() {
        if f.eval_center(u)? != g.eval_center(u)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the outputs of `f` only depend on the centered radius-`r` subword.
fn center_table(f: &Rule, r: usize) -> Option<HashMap<&[u8], u8>> {
    let (lo, hi) = (f.radius - r, f.radius + r);
    let mut table = HashMap::with_capacity(f.outputs.len());
    for (u, &o) in f.domain.iter().zip(&f.outputs) {
        if *table.entry(&u[lo..=hi]).or_insert(o) != o {
            return None;
        }
    }
    Some(table)
}

/// The same map at its least centered radius.
pub fn minimize(shift: &ToeplitzShift, f: &Rule) -> Result<Rule> {
    // Being determined by radius r is monotone in r.
    let (mut lo, mut hi) = (0, f.radius);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if center_table(f, mid).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if lo == f.radius {
        return Ok(f.clone());
    }
    let table = center_table(f, lo).expect("determined at the found radius");
    Rule::try_from_fn(shift, lo, |u| {
        table
            .get(u)
            .copied()
            .ok_or_else(|| Error::UnknownWord(word_str(u)))
    })
}

/// Evidence that a rule maps the factors of length `checked_depth` into the
/// language; a semi-decision, so the depth is part of the certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoCertificate {
    pub rule: Rule,
    pub checked_depth: usize,
    pub induced: Phase,
}

pub fn is_endomorphism(shift: &ToeplitzShift, f: &Rule, depth: usize) -> Result<EndoCertificate> {
    let span = 2 * f.radius + 1;
    if depth < span {
        return Err(Error::WindowArithmetic(f.radius));
    }
    let target = shift.language(depth - 2 * f.radius)?;
    for u in shift.language(depth)?.iter() {
        let image = f.apply_word(u)?;
        if !target.contains(&image) {
            return Err(Error::ClosureFailure {
                word: word_str(u),
                image: word_str(&image),
            });
        }
    }
    let induced = induced_shift(shift, f, 1)?;
    Ok(EndoCertificate {
        rule: f.clone(),
        checked_depth: depth,
        induced,
    })
}

/// Default search cap for [`flip_witness`].
pub const FLIP_WITNESS_CAP: usize = 200;

/// A factor whose complement is not a factor: the bit flip is not a symbol
/// map of `X`, so the identity is the only one.
pub fn flip_witness(shift: &ToeplitzShift, cap: usize) -> Result<Vec<u8>> {
    for len in 1..=cap {
        let lang = shift.language(len)?;
        let found = lang
            .iter()
            .find(|u| !lang.contains(&flip(u)))
            .map(<[u8]>::to_vec);
        if let Some(u) = found {
            return Ok(u);
        }
    }
    Err(Error::NotFound(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substrate::point_window;

    fn sh() -> ToeplitzShift {
        ToeplitzShift::default()
    }

    #[test]
    fn identity_and_shift_application() {
        let s = sh();
        let y = point_window(s.params(), 0, 20).unwrap();
        let id = Rule::identity(&s).unwrap();
        assert_eq!(apply(&id, &y).unwrap(), y);

        let sigma = Rule::shift_power(&s, 1).unwrap();
        assert_eq!(sigma.radius(), 1);
        let image = apply(&sigma, &y).unwrap();
        assert_eq!(image.offset(), 1);
        // sigma(y)_i = y_{i+1}
        assert_eq!(image.cells(), y.slice(2, 20).unwrap().cells());
    }

    #[test]
    fn apply_rejects_short_windows() {
        let s = sh();
        let sigma = Rule::shift_power(&s, 2).unwrap();
        let y = point_window(s.params(), 0, 3).unwrap();
        assert!(apply(&sigma, &y).is_err());
    }

    #[test]
    fn shift_inverse_minimizes_to_identity() {
        let s = sh();
        let f = Rule::shift_power(&s, 1).unwrap();
        let g = Rule::shift_power(&s, -1).unwrap();
        let fg = compose(&s, &f, &g).unwrap();
        assert_eq!(fg.radius(), 2);
        let m = minimize(&s, &fg).unwrap();
        assert_eq!(m.radius(), 0);
        assert_eq!(m, Rule::identity(&s).unwrap());
    }

    #[test]
    fn identity_is_neutral() {
        let s = sh();
        let f = Rule::shift_power(&s, -2).unwrap();
        let id = Rule::identity(&s).unwrap();
        assert_eq!(minimize(&s, &compose(&s, &id, &f).unwrap()).unwrap(), f);
        assert_eq!(minimize(&s, &compose(&s, &f, &id).unwrap()).unwrap(), f);
    }

    #[test]
    fn padded_tables_compare_equal() {
        let s = sh();
        let id = Rule::identity(&s).unwrap();
        let padded = Rule::from_fn(&s, 2, |u| u[2]).unwrap();
        assert_ne!(padded, id);
        assert!(equal(&s, &padded, &id).unwrap());
        assert_eq!(minimize(&s, &padded).unwrap(), id);
        assert!(equal(&s, &id, &minimize(&s, &id).unwrap()).unwrap());
    }

    #[test]
    fn shift_powers_are_recognized() {
        let s = sh();
        for i in -3..=3 {
            let f = Rule::shift_power(&s, i).unwrap();
            assert_eq!(minimize(&s, &f).unwrap(), f);
            assert_eq!(f.as_shift_power(), Some(i));
        }
    }

    #[test]
    fn endomorphism_checks() {
        let s = sh();
        let sigma = Rule::shift_power(&s, 1).unwrap();
        let cert = is_endomorphism(&s, &sigma, 30).unwrap();
        assert_eq!(cert.checked_depth, 30);
        assert_eq!(cert.induced.value, 1);

        let zero = Rule::from_fn(&s, 0, |_| b'0').unwrap();
        match is_endomorphism(&s, &zero, 10) {
            Err(Error::ClosureFailure { image, .. }) => assert!(image.bytes().all(|b| b == b'0')),
            other => panic!("expected a closure failure, got {other:?}"),
        }
        let flip = Rule::flip(&s).unwrap();
        assert!(matches!(
            is_endomorphism(&s, &flip, 10),
            Err(Error::ClosureFailure { .. })
        ));
    }

    #[test]
    fn flip_witness_found() {
        let s = sh();
        let u = flip_witness(&s, FLIP_WITNESS_CAP).unwrap();
        let lang = s.language(u.len()).unwrap();
        assert!(lang.contains(&u));
        assert!(!lang.contains(&flip(&u)));
        assert_eq!(u, b"000");
    }

    #[test]
    fn json_round_trip() {
        let s = sh();
        let f = Rule::shift_power(&s, 1).unwrap();
        let text = f.to_json();
        assert!(text.starts_with(r#"{"radius":1,"table":{"000":"0","001":"1","010":"0""#));
        assert_eq!(Rule::from_json(&s, &text).unwrap(), f);
        let missing = r#"{"radius":0,"table":{"0":"0"}}"#;
        assert!(Rule::from_json(&s, missing).is_err());
    }

    #[test]
    fn unknown_words_are_reported() {
        let s = sh();
        let f = Rule::identity(&s).unwrap();
        assert!(matches!(f.eval(b"01"), Err(Error::UnknownWord(_))));
    }
}
