//! The Toeplitz point `x(w)`, its approximations `x^j(w)` and skeletons.

use super::fill::{fill, periodic_window, FullWindow};
use super::params::Params;
use super::window::{PartialWindow, Symbol, HOLE};
use crate::error::{Error, Result};

/// Substitution depth after which a cell is declared undetermined.
pub const DEPTH_CAP: u32 = 64;

/// Largest number of cells a single computed window may hold.
pub const CELL_BUDGET: u64 = 1 << 25;

/// `x(w)_i` together with the depth `j` at which `x^j(w)` first fills cell `i`.
///
/// Uses `x(w) = psi_w(x(w))`: a letter cell of `w^Z` is final, and the hole
/// with index `k` carries `x(w)_k`.
pub fn cell_with_depth(params: &Params, i: i64) -> Result<(u8, u32)> {
    let mut pos = i;
    for depth in 1..=DEPTH_CAP {
        let b = params.skeleton_cell(pos);
        if b != HOLE {
            return Ok((b, depth));
        }
        pos = params.hole_index(pos).expect("hole cell");
    }
    Err(Error::DepthCapExceeded {
        index: i,
        cap: DEPTH_CAP,
    })
}

pub fn cell(params: &Params, i: i64) -> Result<u8> {
    cell_with_depth(params, i).map(|(b, _)| b)
}

/// `x(w)` on `[a, b]` as a word.
pub fn point_word(params: &Params, a: i64, b: i64) -> Result<Vec<u8>> {
    if a > b {
        return Err(Error::Parse(format!("empty range {a}:{b}")));
    }
    check_budget((b - a + 1) as u64)?;
    (a..=b).map(|i| cell(params, i)).collect()
}

/// The exact restriction `x(w)_{[a, b]}`.
pub fn point_window(params: &Params, a: i64, b: i64) -> Result<PartialWindow> {
    PartialWindow::from_word(a, &point_word(params, a, b)?)
}

fn check_budget(cells: u64) -> Result<()> {
    if cells > CELL_BUDGET {
        Err(Error::RangeTooLarge {
            cells,
            budget: CELL_BUDGET,
        })
    } else {
        Ok(())
    }
}

/// `p^j`, or `RangeTooLarge` when it exceeds the cell budget.
pub(crate) fn period_len(params: &Params, depth: u32) -> Result<usize> {
    let p = params.p() as u64;
    let mut n: u64 = 1;
    for _ in 0..depth {
        n = n.saturating_mul(p);
        check_budget(n)?;
    }
    Ok(n as usize)
}

/// One period `x^j(w)_{[0, p^j - 1]}`, built by iterating `psi'_w`.
///
/// `x^{j+1}` on `[0, p^{j+1})` is `p` copies of the period of `x^j` with its
/// holes filled from `w^Z`; the window starts at 0, so its first hole is the
/// anchor.
pub fn period_of_approximation(params: &Params, depth: u32) -> Result<PartialWindow> {
    if depth > DEPTH_CAP {
        return Err(Error::DepthCapExceeded {
            index: 0,
            cap: DEPTH_CAP,
        });
    }
    period_len(params, depth)?;
    let mut current = PartialWindow::new(0, vec![Symbol::Hole])?;
    for _ in 0..depth {
        let tiled: Vec<Symbol> = current.cells().repeat(params.p());
        let y = PartialWindow::new(0, tiled)?;
        let z = periodic_window(params, 0, y.hole_count().max(1) as i64 - 1);
        current = fill(&y, &z, FullWindow::Allow)?;
    }
    Ok(current)
}

/// `x^j(w)` restricted to `[a, b]`.
///
/// `x^j` has period `p^j`, so the range is read off one exact period.
pub fn generate(params: &Params, depth: u32, a: i64, b: i64) -> Result<PartialWindow> {
    if a > b {
        return Err(Error::Parse(format!("empty range {a}:{b}")));
    }
    let period = period_of_approximation(params, depth)?;
    check_budget((b - a + 1) as u64 + period.len() as u64)?;
    let n = period.len() as i64;
    let cells = (a..=b)
        .map(|i| period.cells()[i.rem_euclid(n) as usize])
        .collect();
    PartialWindow::new(a, cells)
}

/// `Sk(p^j, x(w))` on `[a, b]`, which equals `x^j(w)` there.
///
/// Level 0 is `Sk(1, x(w))`, all holes since `x(w)` is not constant.
pub fn skeleton_xw(params: &Params, level: u32, a: i64, b: i64) -> Result<PartialWindow> {
    generate(params, level, a, b)
}

/// Whether `p^depth` divides `k`.
fn level_divides(p: usize, depth: u32, k: usize) -> bool {
    p.checked_pow(depth).is_some_and(|m| k.is_multiple_of(m))
}

/// One period `Sk(k, x(w))_{[0, k-1]}`.
///
/// The least period of cell `i` is `p^d` with `d` its fill depth, so the cell
/// survives in the `k`-skeleton exactly when `p^d | k`.
pub fn skeleton_period(params: &Params, k: usize) -> Result<Vec<u8>> {
    (0..k as i64)
        .map(|i| {
            let (b, d) = cell_with_depth(params, i)?;
            Ok(if level_divides(params.p(), d, k) {
                b
            } else {
                HOLE
            })
        })
        .collect()
}

/// Whether no proper rotation of the period word fixes it.
fn has_full_orbit(period: &[u8]) -> bool {
    let k = period.len();
    (1..k).all(|l| (0..k).any(|i| period[i] != period[(i + l) % k]))
}

/// All essential periods `k <= k_max` of `x(w)`, increasing.
pub fn essential_periods(params: &Params, k_max: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        if has_full_orbit(&skeleton_period(params, k)?) {
            out.push(k);
        }
    }
    Ok(out)
}

/// Minimal distance between consecutive holes of `x^j(w)` (cyclically over
/// one period).
pub fn gap_stat(params: &Params, depth: u32) -> Result<usize> {
    let period = period_of_approximation(params, depth)?;
    let holes: Vec<i64> = period.holes().collect();
    let (first, last) = match (holes.first(), holes.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => return Err(Error::NoHoles),
    };
    let wrap = first + period.len() as i64 - last;
    let inner = holes.windows(2).map(|w| w[1] - w[0]).min();
    Ok(inner.map_or(wrap, |g| g.min(wrap)) as usize)
}
