//! Precision configuration plus a small fixed-point big-number layer.
//!
//! The extended-precision work in this crate (moment solve, eigenvector
//! refinement, high-order series) only ever needs field operations and a few
//! fixed constants, so instead of a full arbitrary-precision float we use
//! fixed-point numbers `m / 2^bits` backed by `BigInt`. All operations are
//! deterministic; rounding is toward negative infinity on the final shift,
//! which costs at most one ulp per multiply and is absorbed by guard bits.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Bits per requested decimal digit (log2 10, rounded up at use sites).
const BITS_PER_DIGIT: f64 = 3.3219280948873626;

/// Guard bits added on top of the requested precision.
const GUARD_BITS: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecisionMode {
    Standard,
    Extended,
}

/// Global numeric configuration threaded through the heavy computations.
///
/// `digits` only matters in extended mode. `quadrature_depth` is the dyadic
/// refinement depth r of the measure-uniform midpoint rule (2^r nodes);
/// `matrix_dim` the default collocation dimension for spectra.
#[derive(Clone, Debug)]
pub struct PrecisionConfig {
    pub mode: PrecisionMode,
    pub digits: u32,
    pub quadrature_depth: u8,
    pub matrix_dim: usize,
    pub truncation_eps: f64,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            mode: PrecisionMode::Standard,
            digits: 16,
            quadrature_depth: 24,
            matrix_dim: 64,
            truncation_eps: 1e-17,
        }
    }
}

impl PrecisionConfig {
    pub fn extended(digits: u32) -> Self {
        PrecisionConfig {
            mode: PrecisionMode::Extended,
            digits,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == PrecisionMode::Extended && self.digits < 30 {
            return Err(Error::domain("extended mode requires digits >= 30"));
        }
        if self.quadrature_depth > 26 {
            return Err(Error::limit("quadrature_depth must be <= 26"));
        }
        Ok(())
    }

    /// Truncation index for the geometric sums `Σ_n 2^{-n} (...)` inside the
    /// transfer operator: tail below `truncation_eps` plus a safety margin.
    pub fn operator_terms(&self) -> usize {
        ((-self.truncation_eps.log2()).ceil() as usize) + 4
    }
}

/// Fixed-point context: all values managed by one context share the scale
/// `2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FxCtx {
    bits: u64,
}

/// Fixed-point number; value is `m / 2^bits` for the owning context.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fx {
    pub(crate) m: BigInt,
}

impl FxCtx {
    pub fn new(digits: u32) -> Self {
        let bits = (digits as f64 * BITS_PER_DIGIT).ceil() as u64 + GUARD_BITS;
        FxCtx { bits }
    }

    pub fn with_bits(bits: u64) -> Self {
        FxCtx { bits }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Smallest positive representable value, as f64 (0 if below f64 range).
    pub fn ulp(&self) -> f64 {
        pow2(-(self.bits as i64))
    }

    pub fn zero(&self) -> Fx {
        Fx { m: BigInt::zero() }
    }

    pub fn one(&self) -> Fx {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Fx {
        Fx {
            m: BigInt::from(v) << self.bits,
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Fx {
        Fx { m: v << self.bits }
    }

    /// Exact ratio of two big integers, rounded to the working scale.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Fx {
        assert!(!den.is_zero(), "division by zero");
        Fx {
            m: (num << self.bits) / den,
        }
    }

    pub fn from_f64(&self, v: f64) -> Fx {
        assert!(v.is_finite());
        let (mant, exp, sign) = integer_decode(v);
        let mut m = BigInt::from(mant) * sign;
        let shift = exp + self.bits as i64;
        if shift >= 0 {
            m <<= shift as u64;
        } else {
            m >>= (-shift) as u64;
        }
        Fx { m }
    }

    pub fn to_f64(&self, a: &Fx) -> f64 {
        let bits = a.m.bits();
        if bits == 0 {
            return 0.0;
        }
        if bits <= 900 {
            let t = a.m.to_f64().unwrap_or(0.0);
            return t * pow2(-(self.bits as i64));
        }
        let shift = bits - 64;
        let top: BigInt = &a.m >> shift;
        let t = top.to_f64().unwrap_or(0.0);
        t * pow2(shift as i64 - self.bits as i64)
    }

    pub fn add(&self, a: &Fx, b: &Fx) -> Fx {
        Fx { m: &a.m + &b.m }
    }

    pub fn sub(&self, a: &Fx, b: &Fx) -> Fx {
        Fx { m: &a.m - &b.m }
    }

    pub fn neg(&self, a: &Fx) -> Fx {
        Fx { m: -&a.m }
    }

    pub fn abs(&self, a: &Fx) -> Fx {
        Fx { m: a.m.abs() }
    }

    pub fn mul(&self, a: &Fx, b: &Fx) -> Fx {
        Fx {
            m: (&a.m * &b.m) >> self.bits,
        }
    }

    pub fn mul_i64(&self, a: &Fx, k: i64) -> Fx {
        Fx { m: &a.m * k }
    }

    pub fn mul_bigint(&self, a: &Fx, k: &BigInt) -> Fx {
        Fx { m: &a.m * k }
    }

    pub fn div(&self, a: &Fx, b: &Fx) -> Fx {
        assert!(!b.m.is_zero(), "division by zero");
        Fx {
            m: (&a.m << self.bits) / &b.m,
        }
    }

    pub fn div_i64(&self, a: &Fx, k: i64) -> Fx {
        assert!(k != 0);
        Fx { m: &a.m / k }
    }

    /// Multiply by 2^k (k may be negative).
    pub fn ldexp(&self, a: &Fx, k: i64) -> Fx {
        if k >= 0 {
            Fx {
                m: &a.m << k as u64,
            }
        } else {
            Fx {
                m: &a.m >> (-k) as u64,
            }
        }
    }

    pub fn is_zero(&self, a: &Fx) -> bool {
        a.m.is_zero()
    }

    /// |a| < 2^-k, cheap magnitude test.
    pub fn below_pow2(&self, a: &Fx, k: u64) -> bool {
        if k > self.bits {
            return a.m.is_zero();
        }
        a.m.bits() <= self.bits - k
    }

    /// Move a value to another context, shifting the scale.
    pub fn rescale(&self, a: &Fx, target: &FxCtx) -> Fx {
        if target.bits >= self.bits {
            Fx {
                m: &a.m << (target.bits - self.bits),
            }
        } else {
            Fx {
                m: &a.m >> (self.bits - target.bits),
            }
        }
    }

    /// ln 2 via 2·atanh(1/3) = 2 Σ_{k≥0} 3^{-(2k+1)}/(2k+1).
    pub fn ln2(&self) -> Fx {
        let mut sum = BigInt::zero();
        let mut p: BigInt = (BigInt::from(1) << self.bits) / 3;
        let mut k: u64 = 0;
        while !p.is_zero() {
            sum += &p / (2 * k + 1);
            p /= 9;
            k += 1;
        }
        Fx { m: sum << 1 }
    }

    /// π via Machin's formula 16·atan(1/5) − 4·atan(1/239).
    pub fn pi(&self) -> Fx {
        let a5 = self.atan_inv(5);
        let a239 = self.atan_inv(239);
        Fx {
            m: (a5.m << 4) - (a239.m << 2),
        }
    }

    fn atan_inv(&self, q: u64) -> Fx {
        let q2 = BigInt::from(q) * BigInt::from(q);
        let mut p: BigInt = (BigInt::from(1) << self.bits) / q;
        let mut sum = BigInt::zero();
        let mut k: u64 = 0;
        while !p.is_zero() {
            let term = &p / (2 * k + 1);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            p /= &q2;
            k += 1;
        }
        Fx { m: sum }
    }

    /// Li_m(1/2) = Σ_{n≥1} 2^{-n} n^{-m} at full working precision.
    pub fn polylog_half(&self, m: u32) -> Fx {
        let mut sum = BigInt::zero();
        let mut n: u64 = 1;
        while n <= self.bits {
            let num: BigInt = BigInt::from(1) << (self.bits - n);
            let term = if m == 0 {
                num
            } else {
                num / BigInt::from(n).pow(m)
            };
            if term.is_zero() {
                break;
            }
            sum += term;
            n += 1;
        }
        Fx { m: sum }
    }
}

/// Complex number over a fixed-point context.
#[derive(Clone, Debug)]
pub struct CFx {
    pub re: Fx,
    pub im: Fx,
}

impl FxCtx {
    pub fn c_from(&self, re: Fx, im: Fx) -> CFx {
        CFx { re, im }
    }

    pub fn c_zero(&self) -> CFx {
        CFx {
            re: self.zero(),
            im: self.zero(),
        }
    }

    pub fn c_add(&self, a: &CFx, b: &CFx) -> CFx {
        CFx {
            re: self.add(&a.re, &b.re),
            im: self.add(&a.im, &b.im),
        }
    }

    pub fn c_mul(&self, a: &CFx, b: &CFx) -> CFx {
        CFx {
            re: self.sub(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im)),
            im: self.add(&self.mul(&a.re, &b.im), &self.mul(&a.im, &b.re)),
        }
    }

    pub fn c_mul_fx(&self, a: &CFx, s: &Fx) -> CFx {
        CFx {
            re: self.mul(&a.re, s),
            im: self.mul(&a.im, s),
        }
    }

    pub fn c_div_i64(&self, a: &CFx, k: i64) -> CFx {
        CFx {
            re: self.div_i64(&a.re, k),
            im: self.div_i64(&a.im, k),
        }
    }

    pub fn c_to_f64(&self, a: &CFx) -> (f64, f64) {
        (self.to_f64(&a.re), self.to_f64(&a.im))
    }

    /// max(|re|, |im|) < 2^-k.
    pub fn c_below_pow2(&self, a: &CFx, k: u64) -> bool {
        self.below_pow2(&a.re, k) && self.below_pow2(&a.im, k)
    }
}

fn integer_decode(v: f64) -> (u64, i64, i64) {
    let bits = v.to_bits();
    let sign: i64 = if bits >> 63 == 0 { 1 } else { -1 };
    let mut exponent = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = if exponent == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    exponent -= 1075;
    (mantissa, exponent, sign)
}

/// 2^e as f64 with clamping on overflow/underflow.
fn pow2(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (e + 1074) as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_f64() {
        let ctx = FxCtx::new(50);
        for &v in &[0.0, 1.0, -1.5, 0.1234567890123, 1e-12, 123456.789] {
            let fx = ctx.from_f64(v);
            assert!((ctx.to_f64(&fx) - v).abs() <= v.abs() * 1e-15 + 1e-300);
        }
    }

    #[test]
    fn field_ops() {
        let ctx = FxCtx::new(60);
        let a = ctx.from_ratio(&BigInt::from(1), &BigInt::from(3));
        let b = ctx.from_ratio(&BigInt::from(3), &BigInt::from(7));
        let p = ctx.mul(&a, &b);
        assert!((ctx.to_f64(&p) - 1.0 / 7.0).abs() < 1e-30);
        let q = ctx.div(&a, &b);
        assert!((ctx.to_f64(&q) - 7.0 / 9.0).abs() < 1e-30);
    }

    #[test]
    fn ln2_and_pi() {
        let ctx = FxCtx::new(80);
        assert!((ctx.to_f64(&ctx.ln2()) - std::f64::consts::LN_2).abs() < 1e-16);
        assert!((ctx.to_f64(&ctx.pi()) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn polylog_small_orders() {
        let ctx = FxCtx::new(60);
        // Li_0(1/2) = 1, Li_1(1/2) = ln 2
        assert!((ctx.to_f64(&ctx.polylog_half(0)) - 1.0).abs() < 1e-17);
        assert!((ctx.to_f64(&ctx.polylog_half(1)) - std::f64::consts::LN_2).abs() < 1e-16);
    }

    #[test]
    fn to_f64_huge_mantissa() {
        let ctx = FxCtx::new(400);
        let three = ctx.from_i64(3);
        let v = ctx.mul(&three, &three);
        assert_eq!(ctx.to_f64(&v), 9.0);
    }
}
