//! The fill map and the substitution steps built on it.
//!
//! `fill(y, z)` writes the two-sided sequence `z` into the holes of `y`,
//! anchored so that the least nonnegative hole of `y` receives `z_0`; holes
//! to the right take `z_1, z_2, ...` and holes to the left `z_{-1}, z_{-2},
//! ...`. With `w^Z` as one argument this gives `psi_w(x) = fill(w^Z, x)` and
//! `psi'_w(x) = fill(x, w^Z)`.

use super::params::Params;
use super::window::{PartialWindow, Symbol};
use crate::error::{Error, Result};

/// What [`fill`] does with a window that has no holes at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FullWindow {
    #[default]
    Reject,
    /// Return the window unchanged.
    Allow,
}

pub fn fill(y: &PartialWindow, z: &PartialWindow, full: FullWindow) -> Result<PartialWindow> {
    let holes: Vec<i64> = y.holes().collect();
    if holes.is_empty() && full == FullWindow::Allow {
        return Ok(y.clone());
    }
    let anchor = holes.iter().position(|&h| h >= 0).ok_or(Error::NoAnchor)?;
    let mut out = y.clone();
    for (i, &pos) in holes.iter().enumerate() {
        let k = i as i64 - anchor as i64;
        let s = z.get(k).ok_or(Error::InsufficientFill(k))?;
        out.set(pos, s);
    }
    Ok(out)
}

/// `w^Z` restricted to `[a, b]`.
pub fn periodic_window(params: &Params, a: i64, b: i64) -> PartialWindow {
    let cells = (a..=b)
        .map(|i| Symbol::from_byte(params.skeleton_cell(i)).expect("validated word"))
        .collect();
    PartialWindow::new(a, cells).expect("a <= b")
}

/// `psi_w(z)`: the hole of `w^Z` with index `k` receives `z_k`.
///
/// The output spans the hole positions of `z`'s first and last index, so
/// `psi_w_inverse(psi_w(z)) == z`.
pub fn psi_w(params: &Params, z: &PartialWindow) -> Result<PartialWindow> {
    if !z.is_hole_free() {
        return Err(Error::Parse("psi_w expects a hole-free window".into()));
    }
    let word = z.to_word().expect("hole-free");
    let (start, cells) = psi_w_word(params, z.offset(), &word);
    PartialWindow::from_word(start, &cells)
}

/// Inverse of [`psi_w`] on hole-free windows aligned with `w^Z` at phase 0:
/// reads the cells at the hole positions of `w^Z`.
pub fn psi_w_inverse(params: &Params, y: &PartialWindow) -> Result<PartialWindow> {
    if !y.is_hole_free() {
        return Err(Error::Parse(
            "psi_w_inverse expects a hole-free window".into(),
        ));
    }
    let mut first = None;
    let mut cells = Vec::new();
    for (i, s) in y.cells().iter().enumerate() {
        let pos = y.offset() + i as i64;
        match params.hole_index(pos) {
            Some(k) => {
                first.get_or_insert(k);
                cells.push(*s);
            }
            None => {
                if s.to_byte() != params.skeleton_cell(pos) {
                    return Err(Error::PhaseMismatch(pos));
                }
            }
        }
    }
    let first = first.ok_or(Error::NoHoles)?;
    PartialWindow::new(first, cells)
}

/// Word-level `psi_w`: cells of `psi_w(v)` on `[hole_position(v_offset),
/// hole_position(v_offset + |v| - 1)]`, returned with that start position.
pub(crate) fn psi_w_word(params: &Params, v_offset: i64, v: &[u8]) -> (i64, Vec<u8>) {
    let start = params.hole_position(v_offset);
    let end = params.hole_position(v_offset + v.len() as i64 - 1);
    let mut out: Vec<u8> = (start..=end).map(|i| params.skeleton_cell(i)).collect();
    for (j, &b) in v.iter().enumerate() {
        out[(params.hole_position(v_offset + j as i64) - start) as usize] = b;
    }
    (start, out)
}
