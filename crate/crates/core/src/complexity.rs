//! Factor complexity `n(k)`: profiles, the recurrence
//! `n(k) <= p n(ceil(q k / p) + 2p)`, the power bound and a log-log fit.

use num_traits::Float;
use suffix::SuffixTable;

use crate::error::{Error, Result};
use crate::substrate::{exact_counts, language, point_word, Params, CELL_BUDGET};

/// `n(k)` for a run of lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityProfile {
    pub params: Params,
    /// `(k, n(k))`, increasing in `k`.
    pub entries: Vec<(usize, u64)>,
}

impl ComplexityProfile {
    pub fn get(&self, k: usize) -> Option<u64> {
        self.entries
            .binary_search_by_key(&k, |&(k, _)| k)
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,n_k\n");
        for (k, n) in &self.entries {
            out.push_str(&format!("{k},{n}\n"));
        }
        out
    }

    /// Restrict to `from..=to`.
    pub fn range(&self, from: usize, to: usize) -> ComplexityProfile {
        let entries = self
            .entries
            .iter()
            .copied()
            .filter(|&(k, _)| k >= from && k <= to)
            .collect();
        ComplexityProfile {
            params: self.params.clone(),
            entries,
        }
    }
}

/// `|language(k)|`.
pub fn count_factors(params: &Params, k: usize) -> Result<u64> {
    Ok(language(params, k)?.len() as u64)
}

/// Longest common prefixes of neighbouring suffixes (Kasai et al.);
/// `lcp[0] = 0`.
fn lcp_array(text: &[u8], sa: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut rank = vec![0u32; n];
    for (r, &s) in sa.iter().enumerate() {
        rank[s as usize] = r as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && text[i + h] == text[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

/// Distinct factors of each length `1..=max_k` of `text`, index `k`.
fn window_profile(text: &[u8], max_k: usize) -> Vec<u64> {
    let s = std::str::from_utf8(text).expect("ascii symbols");
    let table = SuffixTable::new(s);
    let sa = table.table();
    let lcp = lcp_array(text, sa);
    // suffix i starts a new factor of every length in (lcp_i, len_i]
    let mut diff = vec![0i64; max_k + 2];
    for (r, &start) in sa.iter().enumerate() {
        let len = (text.len() - start as usize).min(max_k);
        let lo = lcp[r] as usize + 1;
        if lo <= len {
            diff[lo] += 1;
            diff[len + 1] -= 1;
        }
    }
    let mut out = vec![0u64; max_k + 1];
    let mut acc = 0i64;
    for k in 1..=max_k {
        acc += diff[k];
        out[k] = acc as u64;
    }
    out
}

/// `n(1..=max_k)` read from growing prefixes of `x(w)`, accepted once every
/// count matches the exact recursive count.
pub fn profile(params: &Params, max_k: usize) -> Result<ComplexityProfile> {
    let exact = exact_counts(params, max_k);
    let mut n = (64 * max_k).max(1 << 14);
    loop {
        if n as u64 > CELL_BUDGET {
            return Err(Error::Unstable(max_k));
        }
        let x = point_word(params, 0, n as i64 - 1)?;
        let counts = window_profile(&x, max_k);
        if (1..=max_k).all(|k| counts[k] as u128 == exact[k]) {
            let entries = (1..=max_k).map(|k| (k, counts[k])).collect();
            return Ok(ComplexityProfile {
                params: params.clone(),
                entries,
            });
        }
        n *= 2;
    }
}

/// Outcome of the recurrence check at one `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecurrenceCase {
    Holds {
        k: usize,
        lhs: u64,
        rhs: u64,
    },
    Fails {
        k: usize,
        lhs: u64,
        rhs: u64,
    },
    /// `ceil(qk/p) + 2p >= k`: the inequality says nothing.
    Vacuous {
        k: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceReport {
    pub cases: Vec<RecurrenceCase>,
}

impl RecurrenceReport {
    pub fn passed(&self) -> bool {
        !self
            .cases
            .iter()
            .any(|c| matches!(c, RecurrenceCase::Fails { .. }))
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.cases.iter().find_map(|c| match c {
            RecurrenceCase::Fails { k, .. } => Some(*k),
            _ => None,
        })
    }

    pub fn checked(&self) -> usize {
        self.cases
            .iter()
            .filter(|c| !matches!(c, RecurrenceCase::Vacuous { .. }))
            .count()
    }
}

/// `n(k) <= p n(ceil(qk/p) + 2p)` for every `k` in the profile; with the
/// default parameters this is `n(k) <= 5 n(ceil(2k/5) + 10)`.
pub fn recurrence_check(profile: &ComplexityProfile) -> Result<RecurrenceReport> {
    let params = &profile.params;
    let (p, q) = (params.p(), params.q());
    let mut cases = Vec::with_capacity(profile.entries.len());
    for &(k, n_k) in &profile.entries {
        let inner = (q * k).div_ceil(p) + 2 * p;
        if inner >= k {
            cases.push(RecurrenceCase::Vacuous { k });
            continue;
        }
        let n_inner = profile.get(inner).ok_or(Error::MissingEntry(inner))?;
        let rhs = p as u64 * n_inner;
        cases.push(if n_k <= rhs {
            RecurrenceCase::Holds { k, lhs: n_k, rhs }
        } else {
            RecurrenceCase::Fails { k, lhs: n_k, rhs }
        });
    }
    Ok(RecurrenceReport { cases })
}

/// `log_{p/q} p`, the exponent the recurrence yields.
pub fn theoretical_exponent<F: Float>(params: &Params) -> F {
    let p = F::from(params.p()).expect("float");
    let q = F::from(params.q()).expect("float");
    p.ln() / (p / q).ln()
}

/// Least-squares slope of `log n(k)` against `log k` over the profile
/// entries with `k` in `from..=to`. `None` below 8 points.
pub fn exponent_fit<F: Float>(profile: &ComplexityProfile, from: usize, to: usize) -> Option<F> {
    let pts: Vec<(F, F)> = profile
        .entries
        .iter()
        .filter(|&&(k, n)| k >= from && k <= to && n > 0)
        .map(|&(k, n)| (F::from(k).unwrap().ln(), F::from(n).unwrap().ln()))
        .collect();
    if pts.len() < 8 {
        return None;
    }
    let len = F::from(pts.len()).unwrap();
    let mx = pts.iter().fold(F::zero(), |a, &(x, _)| a + x) / len;
    let my = pts.iter().fold(F::zero(), |a, &(_, y)| a + y) / len;
    let (sxy, sxx) = pts
        .iter()
        .fold((F::zero(), F::zero()), |(sxy, sxx), &(x, y)| {
            (sxy + (x - mx) * (y - my), sxx + (x - mx) * (x - mx))
        });
    Some(sxy / sxx)
}

/// `n(k) <= slack C k^e` with `C = max n(k)/k^e` over the calibration range.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck<F> {
    pub exponent: F,
    pub constant: F,
    pub slack: F,
    /// `k` values in the checked range where the bound fails.
    pub violations: Vec<usize>,
}

pub fn bound_check<F: Float>(
    profile: &ComplexityProfile,
    exponent: F,
    slack: F,
    calibrate: (usize, usize),
    check: (usize, usize),
) -> BoundCheck<F> {
    let ratio = |k: usize, n: u64| F::from(n).unwrap() / F::from(k).unwrap().powf(exponent);
    let constant = profile
        .entries
        .iter()
        .filter(|&&(k, _)| k >= calibrate.0 && k <= calibrate.1)
        .map(|&(k, n)| ratio(k, n))
        .fold(F::zero(), F::max);
    let violations = profile
        .entries
        .iter()
        .filter(|&&(k, n)| k >= check.0 && k <= check.1 && ratio(k, n) > slack * constant)
        .map(|&(k, _)| k)
        .collect();
    BoundCheck {
        exponent,
        constant,
        slack,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p() -> Params {
        Params::default()
    }

    #[test]
    fn window_profile_matches_brute_force() {
        let x = point_word(&p(), 0, 3000).unwrap();
        let prof = window_profile(&x, 40);
        for (k, &n) in prof.iter().enumerate().skip(1) {
            let set: HashSet<&[u8]> = x.windows(k).collect();
            assert_eq!(n, set.len() as u64, "k={k}");
        }
        // all lengths up to the whole text
        let short = b"0110100110";
        let prof = window_profile(short, short.len());
        for (k, &n) in prof.iter().enumerate().skip(1) {
            let set: HashSet<&[u8]> = short.windows(k).collect();
            assert_eq!(n, set.len() as u64);
        }
    }

    #[test]
    fn small_profile() {
        let prof = profile(&p(), 100).unwrap();
        assert_eq!(prof.get(1), Some(2));
        assert_eq!(prof.get(12), Some(93));
        assert_eq!(prof.get(100), Some(3550));
        for k in 1..=20 {
            assert_eq!(prof.get(k).unwrap(), count_factors(&p(), k).unwrap());
        }
        for w in prof.entries.windows(2) {
            assert!(w[0].1 <= w[1].1 && w[1].1 <= 2 * w[0].1);
        }
    }

    #[test]
    fn recurrence_controls() {
        let prof = profile(&p(), 200).unwrap();
        let report = recurrence_check(&prof).unwrap();
        assert!(report.passed());
        assert!(matches!(report.cases[0], RecurrenceCase::Vacuous { k: 1 }));
        // ceil(2k/5) + 10 < k from k = 19 on
        assert!(matches!(
            report.cases[17],
            RecurrenceCase::Vacuous { k: 18 }
        ));
        assert!(matches!(
            report.cases[18],
            RecurrenceCase::Holds { k: 19, .. }
        ));

        let mut fake = prof.clone();
        fake.entries[99].1 = 10_000_000;
        let report = recurrence_check(&fake).unwrap();
        assert_eq!(report.first_failure(), Some(100));

        let gappy = prof.range(50, 200);
        assert!(matches!(
            recurrence_check(&gappy),
            Err(Error::MissingEntry(_))
        ));
    }

    #[test]
    fn fit_calibration() {
        let params = p();
        let linear = ComplexityProfile {
            params: params.clone(),
            entries: (1..=100).map(|k| (k, 3 * k as u64)).collect(),
        };
        let slope: f64 = exponent_fit(&linear, 1, 100).unwrap();
        assert!((slope - 1.0).abs() < 1e-12);
        assert!(exponent_fit::<f64>(&linear, 1, 5).is_none());
        let e: f64 = theoretical_exponent(&params);
        assert!((e - 1.756_470_798).abs() < 1e-6);
        let e32: f32 = theoretical_exponent(&params);
        assert!((e32 - 1.756_470_8).abs() < 1e-4);
    }

    #[test]
    fn bound_on_small_range() {
        let prof = profile(&p(), 300).unwrap();
        let b = bound_check(&prof, 1.7565f64, 1.1, (10, 100), (10, 300));
        assert!(b.violations.is_empty());
        assert!(b.constant > 1.0 && b.constant < 1.3);
        let tight = bound_check(&prof, 1.7565f64, 0.5, (10, 100), (10, 300));
        assert!(!tight.violations.is_empty());
    }

    #[test]
    fn csv_format() {
        let prof = profile(&p(), 3).unwrap();
        assert_eq!(prof.to_csv(), "k,n_k\n1,2\n2,4\n3,7\n");
    }
}
