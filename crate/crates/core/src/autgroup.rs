//! Unlifting and lifting endomorphisms through `psi_w`, the higher order
//! shifts `sigma_j = unlift^j(sigma)`, and the decomposition of an
//! endomorphism into them.
//!
//! All rules are extracted by evaluation: every factor of the output length
//! is probed.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::pow;
use serde::Serialize;

use crate::blockmap::{compose, compose_power, equal, minimize, Rule};
use crate::error::{Error, Result};
use crate::factor::{induced_shift, phase_of_word};
use crate::lifting_group::{format_rational, from_rational, ratio, to_rational, CoeffVector};
use crate::shift::ToeplitzShift;
use crate::substrate::{psi_w_word, HOLE};

/// Largest `j` for which [`sigma`] builds `sigma_j`.
pub const SIGMA_BUDGET: usize = 4;

/// Lift steps allowed in [`decompose`].
pub const ITERATION_CAP: usize = 64;

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn unlift_at(shift: &ToeplitzShift, f: &Rule, out_radius: usize) -> Result<Rule> {
    let params = shift.params();
    let p = params.p() as i64;
    let r = f.radius() as i64;
    let center = out_radius as i64;
    Rule::try_from_fn(shift, out_radius, |u| {
        // u = y_{[-R', R']} with y = sigma^c psi_w(z), 0 <= c < p
        let c = phase_of_word(shift, u, -center, 1)?.value as i64;
        if params.skeleton_cell(c) != HOLE {
            return Ok(u[center as usize]);
        }
        let k = params.hole_index(c).expect("hole cell");
        // z_j sits at psi-coordinate hole_position(j), i.e. y-coordinate
        // hole_position(j) - c
        let mut v = Vec::with_capacity(2 * r as usize + 1);
        for j in k - r..=k + r {
            let at = params.hole_position(j) - c + center;
            if at < 0 || at >= u.len() as i64 {
                return Err(Error::WindowArithmetic(out_radius));
            }
            v.push(u[at as usize]);
        }
        debug_assert!(c < p);
        f.eval(&v)
    })
}

/// The rule of `unlift(f)`, which acts on `sigma^c psi_w(z)` as
/// `sigma^c psi_w(f(z))`.
pub fn unlift(shift: &ToeplitzShift, f: &Rule) -> Result<Rule> {
    let params = shift.params();
    let margin = ceil_div(params.p() * f.radius(), params.q()) + 3 * params.p();
    let rule = match unlift_at(shift, f, margin) {
        Err(Error::WindowArithmetic(_)) => unlift_at(shift, f, 2 * margin)?,
        other => other?,
    };
    minimize(shift, &rule)
}

/// Result of one lifting step: `f = unlift(h) o sigma^{-k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    pub k: u64,
    pub h: Rule,
}

/// Write `f` as `unlift(h) o sigma^{-k}` with `0 <= k < p`.
pub fn lift(shift: &ToeplitzShift, f: &Rule) -> Result<Lift> {
    let params = shift.params();
    let p = params.p() as u64;
    let c = induced_shift(shift, f, 1)?.value;
    let k = (p - c) % p;
    let f1 = minimize(
        shift,
        &compose(shift, f, &Rule::shift_power(shift, k as i64)?)?,
    )?;
    let r1 = f1.radius() as i64;
    let radius = ceil_div(params.q() * (f1.radius() + 3 * params.p()), params.p());
    // f1 preserves the phase-0 class, where it reads as psi_w(h(z)); h(z)_0
    // is f1(psi_w(z)) at the anchor hole
    let anchor = params.hole_position(0);
    let h = Rule::try_from_fn(shift, radius, |u| {
        let (start, y) = psi_w_word(params, -(radius as i64), u);
        let lo = anchor - r1 - start;
        let hi = anchor + r1 - start;
        if lo < 0 || hi >= y.len() as i64 {
            return Err(Error::WindowArithmetic(radius));
        }
        f1.eval(&y[lo as usize..=hi as usize])
    })?;
    let h = minimize(shift, &h)?;
    let back = compose(
        shift,
        &unlift(shift, &h)?,
        &Rule::shift_power(shift, -(k as i64))?,
    )?;
    if !equal(shift, f, &back)? {
        return Err(Error::RoundTripFailure(format!(
            "k={k}, h of radius {} does not reproduce the rule",
            h.radius()
        )));
    }
    Ok(Lift { k, h })
}

/// `sigma_j`, cached on the shift. `sigma_j^{-1}` for `inverse`.
pub fn sigma(shift: &ToeplitzShift, j: usize) -> Result<Rule> {
    sigma_signed(shift, j, false)
}

pub fn sigma_inverse(shift: &ToeplitzShift, j: usize) -> Result<Rule> {
    sigma_signed(shift, j, true)
}

fn sigma_signed(shift: &ToeplitzShift, j: usize, inverse: bool) -> Result<Rule> {
    if j > SIGMA_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "sigma_{j} exceeds the budget {SIGMA_BUDGET}"
        )));
    }
    if let Some(rule) = shift.sigmas.lock().unwrap().get(&(j, inverse)) {
        return Ok(rule.clone());
    }
    let rule = if j == 0 {
        Rule::shift_power(shift, if inverse { -1 } else { 1 })?
    } else {
        unlift(shift, &sigma_signed(shift, j - 1, inverse)?)?
    };
    shift
        .sigmas
        .lock()
        .unwrap()
        .insert((j, inverse), rule.clone());
    Ok(rule)
}

/// `prod_t sigma_t^{k_t}`, minimized.
pub fn reconstruct(shift: &ToeplitzShift, c: &CoeffVector) -> Result<Rule> {
    let mut acc = Rule::identity(shift)?;
    for (t, &k) in c.coeffs().iter().enumerate() {
        if k == 0 {
            continue;
        }
        let base = if k > 0 {
            sigma(shift, t)?
        } else {
            sigma_inverse(shift, t)?
        };
        let power = compose_power(shift, &base, k.unsigned_abs() as u32)?;
        acc = minimize(shift, &compose(shift, &power, &acc)?)?;
    }
    Ok(acc)
}

/// The rational an endomorphism corresponds to, with the data that
/// produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `-k_t` from the lift at level `t`.
    pub level_coeffs: Vec<i64>,
    /// The final residual is `sigma^residual_shift` at level `residual_level`.
    pub residual_shift: i64,
    pub residual_level: usize,
    pub value: BigRational,
    /// Balanced normal form of `value`.
    pub coeffs: CoeffVector,
}

#[derive(Serialize)]
struct DecompositionJson<'a> {
    coeffs: &'a [i64],
    value: String,
    residual_level: usize,
}

impl Decomposition {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&DecompositionJson {
            coeffs: self.coeffs.coeffs(),
            value: format_rational(&self.value),
            residual_level: self.residual_level,
        })
        .expect("decomposition json")
    }
}

/// Iterate [`lift`] until the residual is a shift power, then fold
/// `f = sigma^{-k_0} unlift(sigma^{-k_1} unlift(... sigma^i))` into
/// `sum -k_t (p/q)^t + i (p/q)^n`. The result is checked against
/// [`reconstruct`].
pub fn decompose(shift: &ToeplitzShift, f: &Rule) -> Result<Decomposition> {
    let params = shift.params();
    let mut current = minimize(shift, f)?;
    let mut seen = HashSet::new();
    let mut level_coeffs = Vec::new();
    let residual_shift = loop {
        if let Some(i) = current.as_shift_power() {
            break i;
        }
        if level_coeffs.len() >= ITERATION_CAP {
            return Err(Error::IterationCap(ITERATION_CAP));
        }
        if !seen.insert(current.clone()) {
            return Err(Error::NotInGroup(format!(
                "residual of radius {} recurs after {} lifts without being a shift: {}",
                current.radius(),
                level_coeffs.len(),
                current.to_json()
            )));
        }
        let Lift { k, h } = lift(shift, &current)?;
        level_coeffs.push(-(k as i64));
        current = h;
    };
    let n = level_coeffs.len();
    let r = ratio::<BigInt>(params);
    let value = to_rational::<BigInt>(params, &CoeffVector::new(level_coeffs.clone()))
        + pow(r, n) * BigRational::from_integer(residual_shift.into());
    let coeffs = from_rational(params, &value)?;
    let rebuilt = reconstruct(shift, &coeffs)?;
    if !equal(shift, f, &rebuilt)? {
        return Err(Error::RoundTripFailure(format!(
            "value {} rebuilds a different map (coeffs {coeffs})",
            format_rational(&value)
        )));
    }
    Ok(Decomposition {
        level_coeffs,
        residual_shift,
        residual_level: n,
        value,
        coeffs,
    })
}

/// Whether `f` is the identity.
pub fn is_identity(shift: &ToeplitzShift, f: &Rule) -> Result<bool> {
    equal(shift, f, &Rule::identity(shift)?)
}
