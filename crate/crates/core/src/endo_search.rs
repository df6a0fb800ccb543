//! Exhaustive search for endomorphisms of small radius, as an oracle for the
//! decomposition.
//!
//! Tables are filled one language word at a time. Every factor of length
//! `2R+2..=L` is checked as soon as all the windows it reads are assigned,
//! so most partial tables die early.

use std::collections::{BTreeMap, BTreeSet};

use crate::autgroup::{decompose, reconstruct};
use crate::blockmap::{is_endomorphism, minimize, Rule};
use crate::error::{Error, Result};
use crate::lifting_group::{format_rational, CoeffVector};
use crate::shift::ToeplitzShift;
use crate::Rational;

/// Largest radius [`enumerate`] accepts.
pub const RADIUS_BUDGET: usize = 2;

/// A factor to check once the table is filled up to its last window.
struct Probe {
    /// Domain indices of its windows, left to right.
    windows: Vec<usize>,
    /// Index into `targets` by length.
    target: usize,
}

struct Search<'a> {
    probes_at: Vec<Vec<Probe>>,
    targets: Vec<std::sync::Arc<crate::substrate::Language>>,
    outputs: Vec<u8>,
    found: &'a mut Vec<Vec<u8>>,
}

impl Search<'_> {
    fn consistent(&self, i: usize) -> bool {
        let mut image = Vec::new();
        self.probes_at[i].iter().all(|probe| {
            image.clear();
            image.extend(probe.windows.iter().map(|&j| self.outputs[j]));
            self.targets[probe.target].contains(&image)
        })
    }

    fn run(&mut self, i: usize) {
        if i == self.outputs.len() {
            self.found.push(self.outputs.clone());
            return;
        }
        for b in *b"01" {
            self.outputs[i] = b;
            if self.consistent(i) {
                self.run(i + 1);
            }
        }
    }
}

/// Every table over `language(2R+1)` that maps all factors of length up to
/// `depth` into the language, in lexicographic order of outputs.
pub fn enumerate(shift: &ToeplitzShift, radius: usize, depth: usize) -> Result<Vec<Rule>> {
    if radius > RADIUS_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "radius {radius} exceeds {RADIUS_BUDGET}"
        )));
    }
    let span = 2 * radius + 1;
    if depth < span + 1 {
        return Err(Error::WindowArithmetic(radius));
    }
    let domain = shift.language(span)?;
    let mut probes_at: Vec<Vec<Probe>> = (0..domain.len()).map(|_| Vec::new()).collect();
    let mut targets = Vec::new();
    for len in span + 1..=depth {
        targets.push(shift.language(len - 2 * radius)?);
        for u in shift.language(len)?.iter() {
            let windows: Vec<usize> = u
                .windows(span)
                .map(|v| domain.index_of(v).expect("subwords of factors are factors"))
                .collect();
            let last = *windows.iter().max().expect("nonempty");
            probes_at[last].push(Probe {
                windows,
                target: targets.len() - 1,
            });
        }
    }
    let mut found = Vec::new();
    Search {
        probes_at,
        targets,
        outputs: vec![b'0'; domain.len()],
        found: &mut found,
    }
    .run(0);
    let mut rules = Vec::with_capacity(found.len());
    for outputs in found {
        let rule = Rule::from_fn(shift, radius, |u| {
            outputs[domain.index_of(u).expect("domain word")]
        })?;
        // the probes cover the certificate; re-check through the public path
        is_endomorphism(shift, &rule, depth)?;
        rules.push(rule);
    }
    Ok(rules)
}

/// Rules with the rationals they decompose to.
#[derive(Clone, Debug)]
pub struct Classification {
    pub entries: Vec<(Rule, Rational)>,
}

impl Classification {
    pub fn values(&self) -> BTreeSet<Rational> {
        self.entries.iter().map(|(_, v)| v.clone()).collect()
    }
}

/// Decompose every rule; the values must be pairwise distinct, and `-v` must
/// appear whenever `v` does and the inverse fits in `radius`.
pub fn classify(shift: &ToeplitzShift, rules: &[Rule], radius: usize) -> Result<Classification> {
    let mut entries = Vec::with_capacity(rules.len());
    let mut seen = BTreeMap::new();
    for rule in rules {
        let d = decompose(shift, rule)?;
        if let Some(prev) = seen.insert(d.value.clone(), entries.len()) {
            return Err(Error::RoundTripFailure(format!(
                "rules {prev} and {} both decompose to {}",
                entries.len(),
                format_rational(&d.value)
            )));
        }
        entries.push((rule.clone(), d.value));
    }
    for (_, v) in &entries {
        let neg = -v.clone();
        if seen.contains_key(&neg) {
            continue;
        }
        let coeffs = crate::lifting_group::from_rational(shift.params(), &neg)?;
        if minimize(shift, &reconstruct(shift, &coeffs)?)?.radius() <= radius {
            return Err(Error::RoundTripFailure(format!(
                "{} survives but its inverse of radius <= {radius} does not",
                format_rational(v)
            )));
        }
    }
    Ok(Classification { entries })
}

/// Values of normal forms with at most `len` digits whose rebuilt map has
/// radius at most `radius`.
pub fn small_group_elements(
    shift: &ToeplitzShift,
    len: u32,
    radius: usize,
) -> Result<BTreeSet<Rational>> {
    let params = shift.params();
    let half = params.p_prime() as i64;
    let base = 2 * half + 1;
    let mut out = BTreeSet::new();
    for code in 0..base.pow(len) {
        let digits: Vec<i64> = (0..len)
            .map(|t| (code / base.pow(t)) % base - half)
            .collect();
        let c = CoeffVector::new(digits);
        if reconstruct(shift, &c)?.radius() <= radius {
            out.insert(crate::lifting_group::to_rational(params, &c));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgroup::sigma;
    use crate::blockmap::compose;

    fn sh() -> ToeplitzShift {
        ToeplitzShift::default()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn radius_zero_is_identity_only() {
        let s = sh();
        let rules = enumerate(&s, 0, 20).unwrap();
        assert_eq!(rules, vec![Rule::identity(&s).unwrap()]);
    }

    #[test]
    fn radius_one() {
        let s = sh();
        let rules = enumerate(&s, 1, 30).unwrap();
        for i in -1..=1 {
            let f = minimize(&s, &Rule::shift_power(&s, i).unwrap()).unwrap();
            let padded =
                Rule::try_from_fn(&s, 1, |u| f.eval(&u[1 - f.radius()..=1 + f.radius()])).unwrap();
            assert!(rules.contains(&padded), "sigma^{i}");
        }
        let c = classify(&s, &rules, 1).unwrap();
        assert_eq!(c.values(), small_group_elements(&s, 3, 1).unwrap());
        // the only symbol map among the survivors is the identity
        for (rule, _) in &c.entries {
            let m = minimize(&s, rule).unwrap();
            assert!(m.radius() > 0 || m == Rule::identity(&s).unwrap());
        }
    }

    #[test]
    fn classify_shift() {
        let s = sh();
        let c = classify(&s, &[Rule::shift_power(&s, 1).unwrap()], 0).unwrap();
        assert_eq!(c.values().into_iter().collect::<Vec<_>>(), vec![q(1, 1)]);
    }

    #[test]
    fn classify_rejects_duplicates() {
        let s = sh();
        let a = compose(&s, &sigma(&s, 1).unwrap(), &Rule::identity(&s).unwrap()).unwrap();
        let b = sigma(&s, 1).unwrap();
        assert!(matches!(
            classify(&s, &[a, b], 0),
            Err(Error::RoundTripFailure(_))
        ));
    }

    #[test]
    fn budget_and_depth() {
        let s = sh();
        assert!(matches!(
            enumerate(&s, 3, 40),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(matches!(
            enumerate(&s, 1, 3),
            Err(Error::WindowArithmetic(_))
        ));
    }
}
