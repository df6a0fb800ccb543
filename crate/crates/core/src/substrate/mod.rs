//! Alphabet, windows, the fill/substitution machinery generating `x(w)`,
//! periods, skeletons and factor sets.

mod fill;
mod language;
mod lazy;
mod params;
mod point;
mod window;

pub(crate) use fill::psi_w_word;
pub use fill::{fill, periodic_window, psi_w, psi_w_inverse, FullWindow};
pub use language::{exact_count, exact_counts, language, language_recursive, Language};
pub use lazy::{lazy_period_check, least_lazy_period};
pub use params::{validate_params, Params, ParamsConfig};
pub use point::{
    cell, cell_with_depth, essential_periods, gap_stat, generate, period_of_approximation,
    point_window, point_word, skeleton_period, skeleton_xw, CELL_BUDGET, DEPTH_CAP,
};
pub use window::{flip, occurrences, parse_word, word_str, PartialWindow, Symbol, HOLE};
