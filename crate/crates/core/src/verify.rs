//! The acceptance battery: twelve exact checks with runtime limits, each
//! reported as one line.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::autgroup::{decompose, reconstruct, sigma};
use crate::blockmap::{compose, compose_power, equal, flip_witness, Rule, FLIP_WITNESS_CAP};
use crate::complexity::{bound_check, exponent_fit, profile, recurrence_check};
use crate::endo_search::{classify, enumerate};
use crate::error::Result;
use crate::factor::{induced_shift, phase};
use crate::lifting_group::{
    base_digits, denominator_exponent, from_rational, member, nonfg_witness, residue, to_rational,
    CoeffVector,
};
use crate::shift::ToeplitzShift;
use crate::substrate::{essential_periods, gap_stat, language, point_window, psi_w, psi_w_inverse};
use crate::Rational;

/// Seed for the randomized parts of the battery.
pub const SEED: u64 = 0x5eed_2024;

/// Exponent and slack of the complexity bound.
pub const BOUND_EXPONENT: f64 = 1.7565;
pub const BOUND_SLACK: f64 = 1.1;
/// Ceiling for the fitted exponent on `[100, 2000]`.
pub const FIT_CEILING: f64 = 1.80;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} AC{:02} {}: {} [{:.2}s",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )?;
        if let Some(limit) = self.limit {
            write!(f, " / limit {}s", limit.as_secs())?;
        }
        write!(f, "]")
    }
}

type Check = fn(&ToeplitzShift) -> Result<(bool, String)>;

/// Every criterion, in order, with its runtime limit.
pub fn criteria() -> Vec<(u32, &'static str, Option<u64>, Check)> {
    vec![
        (1, "essential periods", Some(10), essential),
        (2, "gap bound", Some(10), gaps),
        (3, "lifting relation", Some(60), lifting),
        (4, "commutativity", None, commutativity),
        (5, "decomposition round trip", Some(300), round_trip),
        (6, "5-adic cross-check", None, five_adic),
        (7, "normal-form uniqueness", None, normal_forms),
        (8, "non-finite-generation witness", None, nonfg),
        (9, "complexity", Some(300), complexity),
        (10, "oracle agreement", Some(900), oracle),
        (11, "symbol-map assumption", None, symbol_map),
        (12, "homeomorphism check", None, homeomorphism),
    ]
}

pub fn run_one(shift: &ToeplitzShift, id: u32) -> Option<CriterionResult> {
    let (id, name, limit, check) = criteria().into_iter().find(|c| c.0 == id)?;
    let limit = limit.map(Duration::from_secs);
    let start = Instant::now();
    let outcome = check(shift);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if limit.is_some_and(|l| elapsed > l) {
        passed = false;
        detail.push_str("; over the time limit");
    }
    Some(CriterionResult {
        id,
        name,
        passed,
        detail,
        elapsed,
        limit,
    })
}

pub fn run_all(shift: &ToeplitzShift) -> Vec<CriterionResult> {
    criteria()
        .iter()
        .filter_map(|c| run_one(shift, c.0))
        .collect()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn essential(shift: &ToeplitzShift) -> Result<(bool, String)> {
    let got = essential_periods(shift.params(), 130)?;
    Ok((got == [1, 5, 25, 125], format!("{got:?}")))
}

fn gaps(shift: &ToeplitzShift) -> Result<(bool, String)> {
    let mut stats = Vec::new();
    for j in 1..=10u32 {
        stats.push(gap_stat(shift.params(), j)?);
    }
    let ok = stats.iter().enumerate().all(|(i, &g)| g >= 1 << (i + 1));
    Ok((ok, format!("gaps for j=1..10: {stats:?}")))
}

fn lifting(shift: &ToeplitzShift) -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut ok = true;
    for j in 0..=1 {
        let a = compose_power(shift, &sigma(shift, j + 1)?, 2)?;
        let b = compose_power(shift, &sigma(shift, j)?, 5)?;
        let same = equal(shift, &a, &b)?;
        ok &= same;
        parts.push(format!(
            "sigma_{}^2 {} sigma_{j}^5",
            j + 1,
            if same { "==" } else { "!=" }
        ));
    }
    Ok((ok, parts.join(", ")))
}

fn commutativity(shift: &ToeplitzShift) -> Result<(bool, String)> {
    let mut pairs = 0;
    for i in 0..=3 {
        for j in i + 1..=3 {
            let (a, b) = (sigma(shift, i)?, sigma(shift, j)?);
            if !equal(shift, &compose(shift, &a, &b)?, &compose(shift, &b, &a)?)? {
                return Ok((false, format!("sigma_{i} and sigma_{j} do not commute")));
            }
            pairs += 1;
        }
    }
    Ok((true, format!("{pairs} pairs commute")))
}

fn round_trip(shift: &ToeplitzShift) -> Result<(bool, String)> {
    let mut cases = 0;
    for code in 0..125i64 {
        let c = CoeffVector::new((0..3).map(|t| (code / 5i64.pow(t)) % 5 - 2).collect());
        let expected = to_rational::<BigInt>(shift.params(), &c);
        let got = decompose(shift, &reconstruct(shift, &c)?)?.value;
        if got != expected {
            return Ok((
                false,
                format!("{c} decomposes to {got}, expected {expected}"),
            ));
        }
        cases += 1;
    }
    Ok((true, format!("{cases} cases")))
}

fn five_adic(shift: &ToeplitzShift) -> Result<(bool, String)> {
    let c1 = induced_shift(shift, &sigma(shift, 1)?, 2)?;
    let c2 = induced_shift(shift, &sigma(shift, 2)?, 3)?;
    let r1 = residue(&q(5, 2), &BigInt::from(25));
    let r2 = residue(&q(25, 4), &BigInt::from(125));
    let (d1, d2) = (base_digits(&r1, 5, 2), base_digits(&r2, 5, 3));
    let ok = c1.value == 15
        && c2.value == 100
        && r1 == BigInt::from(c1.value)
        && r2 == BigInt::from(c2.value)
        && "22230".ends_with(&d1)
        && "1113400".ends_with(&d2);
    Ok((
        ok,
        format!("sigma_1: {c1} (digits {d1}), sigma_2: {c2} (digits {d2})"),
    ))
}

fn normal_forms(shift: &ToeplitzShift) -> Result<(bool, String)> {
    let params = shift.params();
    let half = params.p_prime() as i64;
    let base = 2 * half + 1;
    let mut seen = std::collections::HashSet::new();
    for len in 0..=4u32 {
        for code in 0..base.pow(len) {
            let c = CoeffVector::new(
                (0..len)
                    .map(|t| (code / base.pow(t)) % base - half)
                    .collect(),
            );
            if !c.is_normal(params.p_prime()) {
                continue;
            }
            if !seen.insert(to_rational::<BigInt>(params, &c)) {
                return Ok((false, format!("{c} collides")));
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(SEED);
    for _ in 0..1000 {
        let x = q(
            rng.gen_range(-1_000_000..=1_000_000),
            2i64.pow(rng.gen_range(0..20)),
        );
        let c = from_rational(params, &x)?;
        if !c.is_normal(params.p_prime()) || to_rational::<BigInt>(params, &c) != x {
            return Ok((false, format!("{x} round-trips badly")));
        }
    }
    Ok((
        true,
        format!("{} distinct vectors, 1000 round trips", seen.len()),
    ))
}

fn nonfg(shift: &ToeplitzShift) -> Result<(bool, String)> {
    let params = shift.params();
    let mut rng = StdRng::seed_from_u64(SEED ^ 1);
    for _ in 0..100 {
        let size = rng.gen_range(1..10);
        let sample: Vec<Rational> = (0..size)
            .map(|_| {
                q(
                    rng.gen_range(-10_000..=10_000),
                    2i64.pow(rng.gen_range(0..30)),
                )
            })
            .collect();
        let max = sample
            .iter()
            .filter_map(|x| denominator_exponent(params, x))
            .max()
            .unwrap_or(0);
        let w = nonfg_witness(params, &sample)?;
        let e = denominator_exponent(params, &w);
        if !member(params, &w) || e.is_none_or(|e| e <= max) {
            return Ok((false, format!("witness {w} for exponent {max}")));
        }
    }
    Ok((true, "100 random samples".into()))
}

fn complexity(shift: &ToeplitzShift) -> Result<(bool, String)> {
    let prof = profile(shift.params(), 2000)?;
    let rec = recurrence_check(&prof)?;
    let bound = bound_check(&prof, BOUND_EXPONENT, BOUND_SLACK, (10, 100), (10, 2000));
    let fit: f64 = exponent_fit(&prof, 100, 2000).expect("enough points");
    let ok = rec.passed() && bound.violations.is_empty() && fit <= FIT_CEILING;
    Ok((
        ok,
        format!(
            "recurrence on {} lengths {}, C = {:.4}, bound violations {}, fitted exponent {fit:.4}",
            rec.checked(),
            if rec.passed() { "holds" } else { "fails" },
            bound.constant,
            bound.violations.len()
        ),
    ))
}

fn oracle(shift: &ToeplitzShift) -> Result<(bool, String)> {
    let zero = enumerate(shift, 0, 40)?;
    if zero != [Rule::identity(shift)?] {
        return Ok((false, format!("{} radius-0 survivors", zero.len())));
    }
    let mut counts = Vec::new();
    for r in 0..=2 {
        let rules = enumerate(shift, r, 40)?;
        let c = classify(shift, &rules, r)?;
        counts.push(format!(
            "R={r}: {} -> {} values",
            rules.len(),
            c.values().len()
        ));
    }
    Ok((true, counts.join(", ")))
}

fn symbol_map(shift: &ToeplitzShift) -> Result<(bool, String)> {
    let u = flip_witness(shift, FLIP_WITNESS_CAP)?;
    let lang = language(shift.params(), u.len())?;
    let flipped = crate::substrate::flip(&u);
    let ok = lang.contains(&u) && !lang.contains(&flipped);
    Ok((ok, format!("witness {}", crate::substrate::word_str(&u))))
}

fn homeomorphism(shift: &ToeplitzShift) -> Result<(bool, String)> {
    let params = shift.params();
    let mut rng = StdRng::seed_from_u64(SEED ^ 2);
    for _ in 0..100 {
        let a = rng.gen_range(-1_000_000i64..1_000_000);
        let z = point_window(params, a, a + rng.gen_range(20..80))?;
        let y = psi_w(params, &z)?;
        if phase(shift, &y, 1)?.value != 0 {
            return Ok((
                false,
                format!("psi_w of the window at {a} has nonzero phase"),
            ));
        }
        if psi_w_inverse(params, &y)? != z {
            return Ok((false, format!("round trip fails at {a}")));
        }
    }
    Ok((true, "100 windows".into()))
}
