//! The question mark function: exact dyadic values at rationals, the inverse
//! (box) function, floating-point evaluation `F(x)` on the half line, and
//! the periodic remainder `Ψ(x) = 2^x (1 − F(x))`.
//!
//! With `x = [a0; a1, a2, ...]` the distribution function is
//! `F(x) = 1 − 2^{-a0} + 2^{-(a0+a1)} − 2^{-(a0+a1+a2)} + ...` and
//! `?(x) = 2 F(x)` on `[0,1]`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::contfrac::{cf_from_rational, Rational};
use crate::error::{Error, Result};

/// Exact dyadic rational `k / 2^e`, normalized so that k is odd or zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicRational {
    k: BigInt,
    e: u32,
}

impl DyadicRational {
    pub fn new(mut k: BigInt, mut e: u32) -> Self {
        if k.is_zero() {
            return DyadicRational { k, e: 0 };
        }
        while e > 0 && (&k % 2i32).is_zero() {
            k /= 2;
            e -= 1;
        }
        DyadicRational { k, e }
    }

    pub fn numer(&self) -> &BigInt {
        &self.k
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.k.clone(), BigInt::one() << self.e)
    }

    pub fn to_f64(&self) -> f64 {
        let num = self.k.to_f64().unwrap_or(f64::NAN);
        num * 2f64.powi(-(self.e as i32))
    }

    fn double(&self) -> DyadicRational {
        if self.e > 0 {
            DyadicRational::new(self.k.clone(), self.e - 1)
        } else {
            DyadicRational {
                k: &self.k * 2,
                e: 0,
            }
        }
    }
}

/// Exact F(r) for any rational r >= 0, as a dyadic rational.
pub fn f_exact(r: &Rational) -> Result<DyadicRational> {
    if r.is_negative() {
        return Err(Error::domain("F exact evaluation needs r >= 0"));
    }
    let cf = cf_from_rational(r)?;
    // F = 1 + Σ_{i} (−1)^{i+1} 2^{−A_i},  A_i = a_0 + ... + a_i
    let mut exps: Vec<u64> = Vec::with_capacity(cf.quotients().len());
    let mut acc = 0u64;
    for &a in cf.quotients() {
        acc = acc
            .checked_add(a)
            .ok_or_else(|| Error::limit("digit sum overflow"))?;
        exps.push(acc);
    }
    let e_max = *exps.last().unwrap();
    if e_max > u32::MAX as u64 {
        return Err(Error::limit("dyadic exponent exceeds u32"));
    }
    let mut k = BigInt::one() << e_max; // the leading 1
    for (i, &a) in exps.iter().enumerate() {
        let term = BigInt::one() << (e_max - a);
        if i % 2 == 0 {
            k -= term;
        } else {
            k += term;
        }
    }
    Ok(DyadicRational::new(k, e_max as u32))
}

/// Exact ?(r) = 2 F(r) for r in [0, 1].
pub fn qm_exact(r: &Rational) -> Result<DyadicRational> {
    if r.is_negative() || r > &Rational::one() {
        return Err(Error::domain("?(x) exact evaluation needs 0 <= r <= 1"));
    }
    Ok(f_exact(r)?.double())
}

/// Exact inverse of ?(x) on dyadic rationals in [0, 1] (the box function).
///
/// Recovers the partial quotients greedily from
/// `?(x) = 2^{1−B_1} − 2^{1−B_2} + ...` with increasing `B_i`.
pub fn qm_inverse(d: &DyadicRational) -> Result<Rational> {
    let k = d.numer().clone();
    if k.is_negative() || d.value() > Rational::one() {
        return Err(Error::domain("qm_inverse needs a dyadic in [0, 1]"));
    }
    if k.is_zero() {
        return Ok(Rational::zero());
    }
    if k.is_one() && d.exponent() == 0 {
        return Ok(Rational::one());
    }
    // remainder k / 2^e with k odd; exponents tracked via B = 1 - p
    let mut k = k;
    let mut e = d.exponent() as i64;
    let mut prev_b: i64 = 0;
    // convergents of [0; a1, a2, ...]
    let (mut h_prev, mut h) = (BigInt::one(), BigInt::zero());
    let (mut k_prev, mut kk) = (BigInt::zero(), BigInt::one());
    loop {
        let bits = k.bits() as i64;
        let (b, rem) = if k.is_one() {
            // exact power 2^{-e}: final quotient
            (1 + e, BigInt::zero())
        } else {
            // 2^{bits-1-e} < d' < 2^{bits-e}; peel 2^{bits-e}
            let p = bits - e;
            ((1 - p), (BigInt::one() << bits) - &k)
        };
        let a = BigInt::from(b - prev_b);
        prev_b = b;
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &kk + &k_prev;
        h_prev = h;
        h = h_next;
        k_prev = kk;
        kk = k_next;
        if rem.is_zero() {
            break;
        }
        let norm = DyadicRational::new(rem, e as u32);
        k = norm.k;
        e = norm.e as i64;
    }
    Ok(Rational::new(h, kk))
}

/// Longest partial quotient kept by the floating expansion; the tail beyond
/// contributes less than 2^-60.
const MAX_FLOAT_QUOTIENT: f64 = 60.0;

/// F(x) for real x >= 0 via floating continued fraction extraction.
///
/// Quotients are accumulated until the dyadic weight drops below
/// `truncation_eps`; near-integers are snapped before extraction.
pub fn f_real(x: f64, truncation_eps: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("F needs finite x"));
    }
    if x < 0.0 {
        return Err(Error::domain("F real evaluation needs x >= 0"));
    }
    let mut x = x;
    if (x - x.round()).abs() < 1e-14 {
        x = x.round();
    }
    let a0 = x.floor();
    let mut frac = x - a0;
    // F(a0 + t) = 1 − 2^{-a0} + 2^{-a0} F(t)
    let lead = if a0 > 1070.0 { 0.0 } else { 2f64.powi(-(a0 as i32)) };
    let mut sum = 1.0 - lead;
    if frac == 0.0 || lead == 0.0 {
        return Ok(sum);
    }
    // F(t) = 2^{-a1} - 2^{-(a1+a2)} + ... for t in (0,1)
    let mut sign = 1.0;
    let mut b = 0.0;
    loop {
        if frac < 1e-14 {
            break;
        }
        let inv = 1.0 / frac;
        let mut a = inv.floor();
        if inv - a > 1.0 - 1e-12 {
            a += 1.0;
            frac = 0.0;
        } else {
            frac = inv - a;
        }
        if a > MAX_FLOAT_QUOTIENT {
            break;
        }
        b += a;
        let weight = lead * 2f64.powi(-(b as i32));
        sum += sign * weight;
        sign = -sign;
        if weight < truncation_eps {
            break;
        }
    }
    Ok(sum.clamp(0.0, 1.0))
}

/// The periodic function Ψ(x) = 2^x (1 − F(x)), computed on x mod 1 so the
/// periodicity is exact by construction.
pub fn psi(x: f64, truncation_eps: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("Ψ needs finite x"));
    }
    let frac = x - x.floor();
    let f = f_real(frac, truncation_eps)?;
    Ok(2f64.powf(frac) * (1.0 - f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::{cw_generation_iter, farey_level, rat};
    use rand::{Rng, SeedableRng};

    fn dy(k: i64, e: u32) -> DyadicRational {
        DyadicRational::new(BigInt::from(k), e)
    }

    #[test]
    fn qm_exact_examples() {
        assert_eq!(qm_exact(&rat(1, 2)).unwrap(), dy(1, 1));
        assert_eq!(qm_exact(&rat(2, 5)).unwrap(), dy(3, 3));
        assert_eq!(qm_exact(&rat(1, 3)).unwrap(), dy(1, 2));
        assert_eq!(qm_exact(&rat(0, 1)).unwrap(), dy(0, 0));
        assert_eq!(qm_exact(&rat(1, 1)).unwrap(), dy(1, 0));
        assert!(qm_exact(&rat(3, 2)).is_err());
    }

    #[test]
    fn qm_inverse_examples() {
        assert_eq!(qm_inverse(&dy(1, 1)).unwrap(), rat(1, 2));
        assert_eq!(qm_inverse(&dy(1, 2)).unwrap(), rat(1, 3));
        assert_eq!(qm_inverse(&dy(3, 3)).unwrap(), rat(2, 5));
        assert_eq!(qm_inverse(&dy(0, 0)).unwrap(), rat(0, 1));
        assert_eq!(qm_inverse(&dy(1, 0)).unwrap(), rat(1, 1));
        assert_eq!(qm_inverse(&dy(5, 4)).unwrap(), rat(3, 8));
    }

    #[test]
    fn inverse_roundtrip_all_dyadics() {
        for e in 1..=12u32 {
            for k in (1..(1u64 << e)).step_by(2) {
                let d = DyadicRational::new(BigInt::from(k), e);
                let r = qm_inverse(&d).unwrap();
                assert_eq!(qm_exact(&r).unwrap(), d, "roundtrip failed at {k}/2^{e}");
            }
        }
    }

    #[test]
    fn inverse_roundtrip_random_e16() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let e = rng.gen_range(1..=16u32);
            let k = rng.gen_range(0..(1u64 << e)) | 1;
            let d = DyadicRational::new(BigInt::from(k), e);
            let r = qm_inverse(&d).unwrap();
            assert_eq!(qm_exact(&r).unwrap(), d);
        }
    }

    #[test]
    fn monotone_on_farey_12() {
        let pts = farey_level(12).unwrap();
        let mut prev: Option<Rational> = None;
        for p in pts {
            let v = qm_exact(&p).unwrap().value();
            if let Some(q) = prev {
                assert!(v > q, "?(x) not strictly increasing at {p}");
            }
            prev = Some(v);
        }
    }

    #[test]
    fn mediant_bisection() {
        // ?((a+c)/(b+d)) = (?(a/b) + ?(c/d)) / 2 exactly for Farey neighbors
        for level in 1..=12u32 {
            let pts = farey_level(level).unwrap();
            for w in pts.windows(2) {
                let mediant = Rational::new(
                    w[0].numer() + w[1].numer(),
                    w[0].denom() + w[1].denom(),
                );
                let lhs = qm_exact(&mediant).unwrap().value();
                let rhs = (qm_exact(&w[0]).unwrap().value()
                    + qm_exact(&w[1]).unwrap().value())
                    / rat(2, 1);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn pair_functional_equation_exact() {
        // 2F(x) = F(x−1) + 1 for x >= 1 and 2F(x) = F(x/(1−x)) on [0,1),
        // exactly on generation 10
        let one = Rational::one();
        for (a, b) in cw_generation_iter(10) {
            let x = rat(a as i64, b as i64);
            let fx = f_exact(&x).unwrap().value();
            if x >= one {
                let f1 = f_exact(&(x.clone() - &one)).unwrap().value();
                assert_eq!(rat(2, 1) * fx, f1 + one.clone());
            } else {
                let y = x.clone() / (one.clone() - x.clone());
                let fy = f_exact(&y).unwrap().value();
                assert_eq!(rat(2, 1) * fx, fy);
            }
        }
    }

    #[test]
    fn tree_image_is_odd_dyadics() {
        // F(generation n) = { odd k / 2^n } for n <= 12
        for n in 1..=12u32 {
            let mut images: Vec<Rational> = cw_generation_iter(n)
                .map(|(a, b)| f_exact(&rat(a as i64, b as i64)).unwrap().value())
                .collect();
            images.sort();
            let expect: Vec<Rational> = (0..1u64 << (n - 1))
                .map(|i| rat((2 * i + 1) as i64, 1i64 << n))
                .collect();
            assert_eq!(images, expect, "generation {n}");
        }
    }

    #[test]
    fn f_real_examples() {
        let eps = 1e-17;
        assert!((f_real(1.0, eps).unwrap() - 0.5).abs() < 1e-15);
        let golden = 0.5 * (1.0 + 5f64.sqrt());
        assert!((f_real(golden, eps).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(f_real(0.0, eps).unwrap(), 0.0);
    }

    #[test]
    fn f_real_symmetry() {
        // F(x) + F(1/x) = 1 within 1e-10 on 100 seeded random points
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let eps = 1e-17;
        for _ in 0..100 {
            let x: f64 = rng.gen_range(0.02..50.0);
            let s = f_real(x, eps).unwrap() + f_real(1.0 / x, eps).unwrap();
            assert!((s - 1.0).abs() < 1e-10, "symmetry failed at {x}: {s}");
        }
    }

    #[test]
    fn f_real_matches_exact_on_tree() {
        let eps = 1e-17;
        for (a, b) in cw_generation_iter(11) {
            let x = a as f64 / b as f64;
            let exact = f_exact(&rat(a as i64, b as i64)).unwrap().to_f64();
            let approx = f_real(x, eps).unwrap();
            assert!(
                (exact - approx).abs() < 2e-11,
                "{a}/{b}: exact {exact} vs {approx}"
            );
        }
    }

    #[test]
    fn psi_values_and_periodicity() {
        let eps = 1e-17;
        assert!((psi(0.0, eps).unwrap() - 1.0).abs() < 1e-15);
        assert!((psi(1.0, eps).unwrap() - 1.0).abs() < 1e-15);
        // dyadic grid keeps x and x+3 exactly representable, so the
        // mod-1 construction makes the two evaluations bit-identical
        for i in 0..256 {
            let x = i as f64 / 256.0;
            let a = psi(x, eps).unwrap();
            let b = psi(x + 3.0, eps).unwrap();
            assert_eq!(a, b, "periodicity broken at {x}");
        }
    }

    #[test]
    fn psi_brackets_one() {
        // min and max of Ψ on a grid straddle 1 (the measured extremal
        // constants of the tail estimate)
        let eps = 1e-17;
        let n = 1 << 12;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let v = psi(i as f64 / n as f64, eps).unwrap();
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert!(lo < 1.0 && hi > 1.0, "Ψ range [{lo}, {hi}] should straddle 1");
        assert!(lo > 0.5 && hi < 1.5);
    }
}
