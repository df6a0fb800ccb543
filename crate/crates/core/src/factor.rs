//! Finite factors `X -> Z_{p^l}`: phase detection by alignment with the
//! exact skeleton, and the rotation an endomorphism induces on them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::blockmap::{apply, Rule};
use crate::error::{Error, Result};
use crate::shift::ToeplitzShift;
use crate::substrate::{cell_with_depth, point_window, point_word, PartialWindow, HOLE};

/// A residue `value` modulo `modulus = p^l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phase {
    pub value: u64,
    pub modulus: u64,
}

impl Phase {
    pub fn new(value: i128, modulus: u64) -> Phase {
        Phase {
            value: value.rem_euclid(modulus as i128) as u64,
            modulus,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("phase json")
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// Phases `c` mod `p^level` with which `y` is consistent: every letter cell
/// of the skeleton shifted by `c` agrees with `y`.
fn consistent_phases(
    shift: &ToeplitzShift,
    word: &[u8],
    offset: i64,
    level: u32,
) -> Result<Vec<u64>> {
    let sk = shift.skeleton(level)?;
    let m = sk.len() as i64;
    Ok((0..m)
        .filter(|&c| {
            word.iter().enumerate().all(|(t, &b)| {
                let s = sk[(offset + t as i64 + c).rem_euclid(m) as usize];
                s == HOLE || s == b
            })
        })
        .map(|c| c as u64)
        .collect())
}

/// `chi_l(y)`: the residue `c` with `y_i` aligned to `Sk(p^l, x(w))_{i+c}`.
/// Absolute indices of `y` are respected, so a window of `x(w)` itself has
/// phase 0 wherever it starts.
pub fn phase(shift: &ToeplitzShift, y: &PartialWindow, level: u32) -> Result<Phase> {
    let word = y
        .to_word()
        .ok_or_else(|| Error::Parse("phase needs a hole-free window".into()))?;
    phase_of_word(shift, &word, y.offset(), level)
}

pub(crate) fn phase_of_word(
    shift: &ToeplitzShift,
    word: &[u8],
    offset: i64,
    level: u32,
) -> Result<Phase> {
    let modulus = shift.params().p().pow(level) as u64;
    match consistent_phases(shift, word, offset, level)?.as_slice() {
        [c] => Ok(Phase { value: *c, modulus }),
        [] => Err(Error::NotInLanguage),
        _ => Err(Error::WindowTooShort {
            required: detection_length(shift, level)?,
        }),
    }
}

/// Least `L` such that every factor of length `L` has a unique phase mod
/// `p^level`.
pub fn detection_length(shift: &ToeplitzShift, level: u32) -> Result<usize> {
    if let Some(&l) = shift.detection.lock().unwrap().get(&level) {
        return Ok(l);
    }
    let mut len = 1;
    let found = loop {
        let lang = shift.language(len)?;
        let mut unique = true;
        for u in lang.iter() {
            if consistent_phases(shift, u, 0, level)?.len() != 1 {
                unique = false;
                break;
            }
        }
        if unique {
            break len;
        }
        len += 1;
    };
    shift.detection.lock().unwrap().insert(level, found);
    Ok(found)
}

/// Right radius of `chi`, with the witness showing it is minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightRadius {
    pub radius: usize,
    /// A factor of length `radius` occurring at two residues mod `p`, with
    /// those residues.
    pub witness: Option<(Vec<u8>, Vec<u64>)>,
}

/// Least `r` such that each factor of length `r + 1` occurs in `x(w)` only
/// at positions of one residue class mod `p`.
pub fn right_radius(shift: &ToeplitzShift) -> Result<RightRadius> {
    let p = shift.params().p() as u64;
    let mut witness = None;
    for len in 1.. {
        let lang = shift.language(len)?;
        let n = lang.sample_window().max(4096);
        let x = point_word(shift.params(), 0, n as i64 - 1)?;
        let mut residues: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); lang.len()];
        for (i, u) in x.windows(len).enumerate() {
            let idx = lang.index_of(u).expect("sample realizes the language");
            residues[idx].insert(i as u64 % p);
        }
        match residues.iter().position(|r| r.len() > 1) {
            None => {
                return Ok(RightRadius {
                    radius: len - 1,
                    witness,
                })
            }
            Some(idx) => {
                witness = Some((
                    lang.word(idx).to_vec(),
                    residues[idx].iter().copied().collect(),
                ));
            }
        }
    }
    unreachable!()
}

/// Least `m` such that `m` equal symbols at `k`-spaced cells mark exactly the
/// cells of the `k`-skeleton, on a sample of `x(w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectionConstant {
    pub period: u64,
    pub m: u64,
    /// Cells of `x(w)` inspected.
    pub window: usize,
    /// A cell outside the skeleton whose `m - 1` spaced cells all agree:
    /// `m - 1` does not suffice.
    pub counterexample: Option<i64>,
}

/// Default cap factor: `m` is searched up to `64 k`.
pub const DETECTION_CAP_FACTOR: u64 = 64;

fn detection_on_window(shift: &ToeplitzShift, k: u64, n: usize) -> Result<(u64, Option<i64>)> {
    let params = shift.params();
    let x = point_word(params, 0, n as i64 - 1)?;
    let k = k as usize;
    let mut best: (u64, Option<i64>) = (1, None);
    for j in 0..n {
        let (_, depth) = cell_with_depth(params, j as i64)?;
        let in_skeleton = params
            .p()
            .checked_pow(depth)
            .is_some_and(|per| k.is_multiple_of(per));
        // run of equal symbols x_j = x_{j+k} = ... inside the sample
        let mut run = 1u64;
        let mut t = j + k;
        while t < n && x[t] == x[j] {
            run += 1;
            t += k;
        }
        if in_skeleton {
            continue;
        }
        if t >= n {
            // truncated by the window; says nothing about m
            continue;
        }
        if run + 1 > best.0 {
            best = (run + 1, Some(j as i64));
        }
    }
    Ok(best)
}

pub fn detection_constant(shift: &ToeplitzShift, k: u64) -> Result<DetectionConstant> {
    let cap = DETECTION_CAP_FACTOR * k;
    let mut n = (64 * k as usize * k as usize).max(1 << 14);
    let mut prev = detection_on_window(shift, k, n)?;
    loop {
        if prev.0 > cap {
            return Err(Error::NotVerified { period: k, cap });
        }
        let next = detection_on_window(shift, k, 2 * n)?;
        if next.0 == prev.0 {
            return Ok(DetectionConstant {
                period: k,
                m: prev.0,
                window: n,
                counterexample: prev.1,
            });
        }
        n *= 2;
        if n as u64 > crate::substrate::CELL_BUDGET {
            return Err(Error::NotVerified { period: k, cap });
        }
        prev = next;
    }
}

/// Whether `m` spaced equal symbols at `j` hold in `x`, and whether `j` is in
/// the `k`-skeleton; the two must coincide for a valid detection constant.
pub fn detection_holds(shift: &ToeplitzShift, k: u64, m: u64, window: usize) -> Result<bool> {
    let params = shift.params();
    let x = point_word(params, 0, window as i64 - 1)?;
    let (k, m) = (k as usize, m as usize);
    for j in 0..window.saturating_sub((m - 1) * k) {
        let (_, depth) = cell_with_depth(params, j as i64)?;
        let in_skeleton = params
            .p()
            .checked_pow(depth)
            .is_some_and(|per| k % per == 0);
        let repeats = (1..m).all(|t| x[j + t * k] == x[j]);
        if repeats != in_skeleton {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The constant `c` with `chi_l(f(y)) = chi_l(y) + c` mod `p^l`, read from
/// two separate windows of `x(w)`.
pub fn induced_shift(shift: &ToeplitzShift, f: &Rule, level: u32) -> Result<Phase> {
    let len = detection_length(shift, level)? + 2 * f.radius() + 8;
    let modulus = shift.params().p().pow(level) as u64;
    let mut seen = None;
    for start in [0i64, 1_000_003] {
        let y = point_window(shift.params(), start, start + len as i64 - 1)?;
        let before = phase(shift, &y, level)?;
        let after = phase(shift, &apply(f, &y)?, level)?;
        let c = Phase::new(after.value as i128 - before.value as i128, modulus);
        match seen {
            None => seen = Some(c),
            Some(s) if s != c => return Err(Error::Inconsistent(s.value, c.value)),
            _ => {}
        }
    }
    Ok(seen.expect("two samples"))
}
