//! Lazy periods of periodic partial points.
//!
//! A periodic partial point is given by one period word (holes allowed).
//! `t` is a lazy period when `y_i = y_{i+kt}` for every pair of cells that
//! both carry letters.

use num_integer::Integer;

use super::window::HOLE;

/// Whether the periodic extension of `period_word` has lazy period `t`.
///
/// Indices `i + kt` modulo `n = |period_word|` sweep the coset of
/// `gcd(t, n)` containing `i`, so the check is per residue class.
pub fn lazy_period_check(period_word: &[u8], t: usize) -> bool {
    assert!(!period_word.is_empty() && t >= 1);
    let g = t.gcd(&period_word.len());
    (0..g).all(|r| {
        let mut seen = None;
        period_word.iter().skip(r).step_by(g).all(|&b| {
            if b == HOLE {
                return true;
            }
            match seen {
                None => {
                    seen = Some(b);
                    true
                }
                Some(s) => s == b,
            }
        })
    })
}

/// Least lazy period of the periodic extension of `period_word`.
pub fn least_lazy_period(period_word: &[u8]) -> usize {
    let n = period_word.len();
    // The condition for t only depends on gcd(t, n), so the least one divides n.
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| lazy_period_check(period_word, d))
        .expect("n itself is always a lazy period")
}
