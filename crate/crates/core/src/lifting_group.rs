//! Arithmetic in `A(p,q)`, the subgroup of `(Q,+)` generated by the powers
//! `(p/q)^t`.
//!
//! Everything is generic over the integer type backing the rationals; the
//! crate root fixes it to `BigInt`.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::substrate::Params;

/// Integer types the group arithmetic runs over.
pub trait GroupInt: Integer + Signed + Clone + FromPrimitive + ToPrimitive + fmt::Display {}

impl<T> GroupInt for T where T: Integer + Signed + Clone + FromPrimitive + ToPrimitive + fmt::Display
{}

/// Coefficients `(k_0, ..., k_j)` of `sum k_t (p/q)^t`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoeffVector(pub Vec<i64>);

impl CoeffVector {
    pub fn new(coeffs: Vec<i64>) -> Self {
        CoeffVector(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    /// Balanced digits in `[-p', p']` with a nonzero last digit, or empty.
    pub fn is_normal(&self, p_prime: usize) -> bool {
        let bound = p_prime as i64;
        self.0.iter().all(|k| k.abs() <= bound) && self.0.last().is_none_or(|&k| k != 0)
    }
}

impl fmt::Display for CoeffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "]")
    }
}

fn int<I: GroupInt>(n: usize) -> I {
    I::from_usize(n).expect("parameter fits the integer type")
}

/// `p/q` as a rational.
pub fn ratio<I: GroupInt>(params: &Params) -> Ratio<I> {
    Ratio::new(int(params.p()), int(params.q()))
}

/// `sum k_t (p/q)^t`.
pub fn to_rational<I: GroupInt>(params: &Params, c: &CoeffVector) -> Ratio<I> {
    let r = ratio::<I>(params);
    // Horner from the top digit
    c.0.iter().rev().fold(Ratio::zero(), |acc, &k| {
        acc * r.clone() + Ratio::from_integer(I::from_i64(k).expect("digit fits"))
    })
}

/// Denominator is a power of `q`.
pub fn member<I: GroupInt>(params: &Params, x: &Ratio<I>) -> bool {
    denominator_exponent(params, x).is_some()
}

/// `e` with `denominator(x) = q^e`, if any.
pub fn denominator_exponent<I: GroupInt>(params: &Params, x: &Ratio<I>) -> Option<u32> {
    let q: I = int(params.q());
    let mut d = x.denom().clone();
    let mut e = 0;
    while d > I::one() {
        let (quot, rem) = d.div_rem(&q);
        if !rem.is_zero() {
            return None;
        }
        d = quot;
        e += 1;
    }
    Some(e)
}

/// Inverse of `a` modulo `m` for coprime `a`, in `[0, m)`.
fn mod_inverse<I: GroupInt>(a: &I, m: &I) -> I {
    let g = a.extended_gcd(m);
    assert!(
        g.gcd.is_one() || (-g.gcd.clone()).is_one(),
        "not invertible"
    );
    let x = if g.gcd.is_one() { g.x } else { -g.x };
    x.mod_floor(m)
}

/// `numerator * denominator^{-1} mod modulus`, in `[0, modulus)`.
pub fn residue<I: GroupInt>(x: &Ratio<I>, modulus: &I) -> I {
    let inv = mod_inverse(&x.denom().mod_floor(modulus), modulus);
    (x.numer().mod_floor(modulus) * inv).mod_floor(modulus)
}

/// The balanced normal form of a member.
///
/// Digit `k_0` is the representative of `x mod p` in `[-p', p']`; the rest is
/// the normal form of `(x - k_0) q / p`.
pub fn from_rational<I: GroupInt>(params: &Params, x: &Ratio<I>) -> Result<CoeffVector> {
    if !member(params, x) {
        return Err(Error::NotMember(x.to_string()));
    }
    let p: I = int(params.p());
    let q: I = int(params.q());
    let half: I = int(params.p_prime());
    let step = Ratio::new(q, p.clone());
    let mut digits = Vec::new();
    let mut rest = x.clone();
    while !rest.is_zero() {
        let mut k = residue(&rest, &p);
        if k > half {
            k = k - p.clone();
        }
        digits.push(k.to_i64().expect("digit fits i64"));
        rest = (rest - Ratio::from_integer(k)) * step.clone();
    }
    Ok(CoeffVector(digits))
}

pub fn add<I: GroupInt>(a: &Ratio<I>, b: &Ratio<I>) -> Ratio<I> {
    a.clone() + b.clone()
}

pub fn neg<I: GroupInt>(a: &Ratio<I>) -> Ratio<I> {
    -a.clone()
}

/// `(p/q)^{E+1}` with `E` the largest denominator exponent among `elements`:
/// a member outside the subgroup they generate.
pub fn nonfg_witness<I: GroupInt>(params: &Params, elements: &[Ratio<I>]) -> Result<Ratio<I>> {
    let mut e = 0;
    for x in elements {
        e = e.max(denominator_exponent(params, x).ok_or_else(|| Error::NotMember(x.to_string()))?);
    }
    Ok(num_traits::pow(ratio::<I>(params), e as usize + 1))
}

/// Base-`p` digits of a residue, most significant first, padded to `width`.
pub fn base_digits<I: GroupInt>(x: &I, base: usize, width: usize) -> String {
    let b: I = int(base);
    let mut n = x.clone();
    let mut out = vec![b'0'; width];
    for slot in out.iter_mut().rev() {
        let (quot, rem) = n.div_rem(&b);
        *slot = b'0' + rem.to_u8().expect("digit");
        n = quot;
    }
    String::from_utf8(out).expect("ascii")
}

/// Parse `a/b` or `a`.
pub fn parse_rational<I: GroupInt + std::str::FromStr>(text: &str) -> Result<Ratio<I>> {
    let bad = || Error::Parse(format!("bad rational {text:?}"));
    let (n, d) = match text.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let n: I = n.parse().map_err(|_| bad())?;
    let d: I = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Ratio::new(n, d))
}

/// `a/b` always, so integers print as `a/1`.
pub fn format_rational<I: GroupInt>(x: &Ratio<I>) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type Q = Ratio<BigInt>;

    fn p() -> Params {
        Params::default()
    }

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn to_rational_examples() {
        assert_eq!(to_rational::<BigInt>(&p(), &CoeffVector(vec![1])), q(1, 1));
        assert_eq!(
            to_rational::<BigInt>(&p(), &CoeffVector(vec![0, 2])),
            q(5, 1)
        );
        assert_eq!(
            to_rational::<BigInt>(&p(), &CoeffVector(vec![-2, 1])),
            q(1, 2)
        );
        assert_eq!(to_rational::<BigInt>(&p(), &CoeffVector(vec![])), q(0, 1));
    }

    #[test]
    fn normal_forms() {
        assert_eq!(from_rational(&p(), &q(5, 1)).unwrap().0, vec![0, 2]);
        assert_eq!(from_rational(&p(), &q(3, 1)).unwrap().0, vec![-2, 2]);
        assert_eq!(from_rational(&p(), &q(1, 2)).unwrap().0, vec![-2, 1]);
        assert!(from_rational(&p(), &q(0, 1)).unwrap().0.is_empty());
        let seven_quarters = from_rational(&p(), &q(7, 4)).unwrap();
        assert!(seven_quarters.is_normal(2));
        assert_eq!(to_rational::<BigInt>(&p(), &seven_quarters), q(7, 4));
        assert!(matches!(
            from_rational(&p(), &q(1, 3)),
            Err(Error::NotMember(_))
        ));
    }

    #[test]
    fn membership() {
        assert!(member(&p(), &q(7, 4)));
        assert!(!member(&p(), &q(1, 3)));
        assert!(member(&p(), &q(-12, 1)));
    }

    #[test]
    fn residues_match_expansions() {
        let r = residue(&q(5, 2), &BigInt::from(25));
        assert_eq!(r, BigInt::from(15));
        assert_eq!(base_digits(&r, 5, 2), "30");
        let r = residue(&q(25, 4), &BigInt::from(125));
        assert_eq!(r, BigInt::from(100));
        assert_eq!(base_digits(&r, 5, 3), "400");
        assert_eq!(residue(&q(1, 1), &BigInt::from(5)), BigInt::from(1));
        // more digits: -1/2 = ...2222 and -1/4 = ...1111 in base 5
        assert_eq!(
            base_digits(&residue(&q(5, 2), &BigInt::from(3125)), 5, 5),
            "22230"
        );
        let m = BigInt::from(78125);
        let r = residue(&q(25, 4), &m);
        assert_eq!(base_digits(&r, 5, 7), "3333400");
        assert_eq!((r * 4) % &m, BigInt::from(25));
    }

    #[test]
    fn exponents_and_witness() {
        for i in 0..6u32 {
            let x = num_traits::pow(q(5, 2), i as usize);
            assert_eq!(denominator_exponent(&p(), &x), Some(i));
        }
        assert_eq!(denominator_exponent(&p(), &q(7, 4)), Some(2));
        assert_eq!(nonfg_witness(&p(), &[q(1, 1), q(5, 2)]).unwrap(), q(25, 4));
    }

    #[test]
    fn group_operations() {
        assert_eq!(add(&q(5, 2), &q(5, 2)), q(5, 1));
        assert_eq!(add(&q(1, 1), &neg(&q(1, 1))), q(0, 1));
    }

    #[test]
    fn lifting_relation() {
        // q * (k at index t+1) = (k p at index t)
        for t in 0..4 {
            for k in -3..=3i64 {
                let mut hi = vec![0; t + 2];
                hi[t + 1] = k;
                let mut lo = vec![0; t + 1];
                lo[t] = 5 * k;
                let lhs = to_rational::<BigInt>(&p(), &CoeffVector(hi)) * BigInt::from(2);
                assert_eq!(lhs, to_rational::<BigInt>(&p(), &CoeffVector(lo)));
            }
        }
    }

    #[test]
    fn four_digit_normal_forms_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        let mut count = 0;
        for len in 0..=4u32 {
            for code in 0..5i64.pow(len) {
                let mut digits: Vec<i64> = (0..len).map(|t| (code / 5i64.pow(t)) % 5 - 2).collect();
                if digits.last() == Some(&0) {
                    continue;
                }
                let c = CoeffVector(std::mem::take(&mut digits));
                assert!(c.is_normal(2));
                assert!(seen.insert(to_rational::<BigInt>(&p(), &c)));
                assert_eq!(
                    from_rational(&p(), &to_rational::<BigInt>(&p(), &c)).unwrap(),
                    c
                );
                count += 1;
            }
        }
        assert_eq!(count, 1 + 4 + 20 + 100 + 500);
    }

    #[test]
    fn works_over_machine_integers() {
        let x = Ratio::<i64>::new(7, 4);
        let c = from_rational(&p(), &x).unwrap();
        assert_eq!(to_rational::<i64>(&p(), &c), x);
        assert_eq!(residue(&Ratio::<i64>::new(5, 2), &25), 15);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational::<BigInt>("7/4").unwrap(), q(7, 4));
        assert_eq!(parse_rational::<BigInt>("-3").unwrap(), q(-3, 1));
        assert_eq!(format_rational(&q(10, 4)), "5/2");
        assert_eq!(format_rational(&q(3, 1)), "3/1");
        assert!(parse_rational::<BigInt>("1/0").is_err());
        assert!(parse_rational::<BigInt>("x").is_err());
    }

    fn member_strategy() -> impl Strategy<Value = Q> {
        (-10_000i64..10_000, 0u32..12).prop_map(|(n, e)| q(n, 2i64.pow(e)))
    }

    proptest! {
        #[test]
        fn from_rational_round_trips(x in member_strategy()) {
            let c = from_rational(&p(), &x).unwrap();
            prop_assert!(c.is_normal(2));
            prop_assert_eq!(to_rational::<BigInt>(&p(), &c), x);
        }

        #[test]
        fn sums_stay_members_and_reduce(a in member_strategy(), b in member_strategy()) {
            let s = add(&a, &b);
            prop_assert!(member(&p(), &s));
            let ea = denominator_exponent(&p(), &a).unwrap();
            let eb = denominator_exponent(&p(), &b).unwrap();
            prop_assert!(denominator_exponent(&p(), &s).unwrap() <= ea.max(eb));
            let m = BigInt::from(625);
            prop_assert_eq!(residue(&s, &m), (residue(&a, &m) + residue(&b, &m)) % &m);
            let ca = to_rational::<BigInt>(&p(), &from_rational(&p(), &a).unwrap());
            let cb = to_rational::<BigInt>(&p(), &from_rational(&p(), &b).unwrap());
            prop_assert_eq!(from_rational(&p(), &(ca + cb)).unwrap(), from_rational(&p(), &s).unwrap());
        }
    }
}
