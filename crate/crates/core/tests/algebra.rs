use num_bigint::BigInt;
use num_traits::{pow, Zero};
use proptest::prelude::*;
use toeplitz_core::autgroup::{decompose, reconstruct, sigma, unlift};
use toeplitz_core::blockmap::{apply, compose, equal, is_endomorphism, minimize, Rule};
use toeplitz_core::endo_search::{classify, enumerate};
use toeplitz_core::factor::{induced_shift, phase};
use toeplitz_core::lifting_group::{member, residue, to_rational};
use toeplitz_core::substrate::point_window;
use toeplitz_core::{CoeffVector, Rational, ToeplitzShift};

fn sh() -> ToeplitzShift {
    ToeplitzShift::default()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Small elements of the group: `sigma^a sigma_1^b`.
fn small(shift: &ToeplitzShift, a: i64, b: i64) -> Rule {
    reconstruct(shift, &CoeffVector::new(vec![a, b])).unwrap()
}

fn samples(shift: &ToeplitzShift) -> Vec<(Rule, Rational)> {
    let mut out = Vec::new();
    for a in -2..=2 {
        for b in -1..=1 {
            out.push((small(shift, a, b), q(2 * a + 5 * b, 2)));
        }
    }
    out
}

#[test]
fn application_of_compositions() {
    let s = sh();
    let f = sigma(&s, 1).unwrap();
    let g = small(&s, -2, 1);
    let fg = compose(&s, &f, &g).unwrap();
    for start in [0i64, 333, -9_000] {
        let y = point_window(&s.params().clone(), start, start + 60).unwrap();
        let direct = apply(&fg, &y).unwrap();
        let stepwise = apply(&f, &apply(&g, &y).unwrap()).unwrap();
        assert_eq!(direct, stepwise);
    }
}

#[test]
fn composition_is_associative() {
    let s = sh();
    let (f, g, h) = (
        sigma(&s, 1).unwrap(),
        small(&s, 1, -1),
        Rule::shift_power(&s, 2).unwrap(),
    );
    let left = compose(&s, &compose(&s, &f, &g).unwrap(), &h).unwrap();
    let right = compose(&s, &f, &compose(&s, &g, &h).unwrap()).unwrap();
    assert!(equal(&s, &left, &right).unwrap());
}

#[test]
fn shift_commutes_with_endomorphisms() {
    let s = sh();
    let sigma0 = Rule::shift_power(&s, 1).unwrap();
    for (f, _) in samples(&s) {
        let a = compose(&s, &sigma0, &f).unwrap();
        let b = compose(&s, &f, &sigma0).unwrap();
        assert!(equal(&s, &a, &b).unwrap());
    }
}

#[test]
fn minimize_is_idempotent() {
    let s = sh();
    for (f, _) in samples(&s) {
        let padded = compose(&s, &f, &Rule::shift_power(&s, 0).unwrap()).unwrap();
        let m = minimize(&s, &padded).unwrap();
        assert_eq!(minimize(&s, &m).unwrap(), m);
        assert!(equal(&s, &m, &f).unwrap());
    }
}

#[test]
fn sigma_one_keeps_phase_zero() {
    let s = sh();
    let s1 = sigma(&s, 1).unwrap();
    let y = point_window(s.params(), 0, 80).unwrap();
    assert_eq!(phase(&s, &apply(&s1, &y).unwrap(), 1).unwrap().value, 0);
    assert!(is_endomorphism(&s, &s1, 2 * s1.radius() + 12).is_ok());
}

#[test]
fn induced_shifts_follow_residues() {
    let s = sh();
    for (f, v) in samples(&s) {
        for level in 1..=3u32 {
            let m = 5u64.pow(level);
            let c = induced_shift(&s, &f, level).unwrap();
            assert_eq!(
                BigInt::from(c.value),
                residue(&v, &BigInt::from(m)),
                "{v} at level {level}"
            );
            if level > 1 {
                let coarse = induced_shift(&s, &f, level - 1).unwrap();
                assert_eq!(c.value % coarse.modulus, coarse.value);
            }
        }
    }
}

#[test]
fn induced_shift_is_additive() {
    let s = sh();
    let all = samples(&s);
    for (f, _) in all.iter().step_by(4) {
        for (g, _) in all.iter().step_by(3) {
            let fg = compose(&s, f, g).unwrap();
            let (a, b, c) = (
                induced_shift(&s, f, 2).unwrap(),
                induced_shift(&s, g, 2).unwrap(),
                induced_shift(&s, &fg, 2).unwrap(),
            );
            assert_eq!(c.value, (a.value + b.value) % 25);
        }
    }
}

#[test]
fn decompose_is_a_homomorphism() {
    let s = sh();
    let all = samples(&s);
    for (f, vf) in all.iter().step_by(2) {
        for (g, vg) in all.iter().step_by(5) {
            let fg = compose(&s, f, g).unwrap();
            assert_eq!(decompose(&s, &fg).unwrap().value, vf + vg);
        }
    }
}

#[test]
fn reconstruction_is_faithful() {
    let s = sh();
    let id = Rule::identity(&s).unwrap();
    for code in 0..125i64 {
        let c = CoeffVector::new((0..3).map(|t| (code / 5i64.pow(t)) % 5 - 2).collect());
        let v = to_rational::<BigInt>(s.params(), &c);
        let is_id = equal(&s, &reconstruct(&s, &c).unwrap(), &id).unwrap();
        assert_eq!(is_id, v.is_zero(), "{c}");
    }
}

#[test]
fn sigma_powers_decompose() {
    let s = sh();
    for j in 0..=3 {
        let d = decompose(&s, &sigma(&s, j).unwrap()).unwrap();
        assert_eq!(d.value, pow(q(5, 2), j));
    }
}

#[test]
fn relations_at_level_two() {
    let s = sh();
    let a = toeplitz_core::blockmap::compose_power(&s, &sigma(&s, 3).unwrap(), 2).unwrap();
    let b = toeplitz_core::blockmap::compose_power(&s, &sigma(&s, 2).unwrap(), 5).unwrap();
    assert!(equal(&s, &a, &b).unwrap());
}

#[test]
fn enumeration_grows_with_radius() {
    let s = sh();
    let by_radius: Vec<Vec<Rule>> = (0..=2).map(|r| enumerate(&s, r, 40).unwrap()).collect();
    for r in 0..2 {
        for f in &by_radius[r] {
            assert!(by_radius[r + 1].iter().any(|g| equal(&s, f, g).unwrap()));
        }
    }
    let c = classify(&s, &by_radius[2], 2).unwrap();
    assert!(c.values().iter().all(|v| member(s.params(), v)));
    assert!(c.values().contains(&q(1, 2)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unlift_is_a_homomorphism(a in -2i64..=2, b in -1i64..=1, c in -2i64..=2, d in -1i64..=1) {
        let s = sh();
        let (f, g) = (small(&s, a, b), small(&s, c, d));
        let lhs = unlift(&s, &compose(&s, &f, &g).unwrap()).unwrap();
        let rhs = compose(&s, &unlift(&s, &f).unwrap(), &unlift(&s, &g).unwrap()).unwrap();
        prop_assert!(equal(&s, &lhs, &rhs).unwrap());
        let v = decompose(&s, &lhs).unwrap().value;
        prop_assert_eq!(v, q(5, 2) * q(2 * (a + c) + 5 * (b + d), 2));
    }
}
