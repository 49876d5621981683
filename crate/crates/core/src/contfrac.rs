//! Exact rational and continued-fraction arithmetic, the Calkin–Wilf tree,
//! the Stern diatomic sequence, Newman's recurrence and the Stern–Brocot
//! (mediant) partition of the unit interval.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact fraction; `num_rational` keeps it reduced with positive denominator.
pub type Rational = num_rational::BigRational;

/// Convenience constructor from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Default cap on tree-generation index: generation 24 has 2^23 elements.
pub const GENERATION_LIMIT: u32 = 24;

/// Default cap on mediant-partition depth.
pub const FAREY_LIMIT: u32 = 26;

/// Canonical continued fraction `[a0; a1, ..., as]`: `a0 >= 0`, inner
/// quotients >= 1 and the last quotient >= 2 whenever s >= 1, so that the
/// map to rationals is a bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    quotients: Vec<u64>,
}

impl ContinuedFraction {
    pub fn new(quotients: Vec<u64>) -> Result<Self> {
        let cf = ContinuedFraction { quotients };
        cf.check_canonical()?;
        Ok(cf)
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    /// Sum of all partial quotients (the tree-generation index for tree
    /// elements).
    pub fn digit_sum(&self) -> u64 {
        self.quotients.iter().sum()
    }

    fn check_canonical(&self) -> Result<()> {
        let q = &self.quotients;
        if q.is_empty() {
            return Err(Error::domain("empty continued fraction"));
        }
        for (i, &a) in q.iter().enumerate().skip(1) {
            if a == 0 {
                return Err(Error::domain(format!("quotient a{i} must be >= 1")));
            }
        }
        if q.len() > 1 && *q.last().unwrap() < 2 {
            return Err(Error::domain("last quotient must be >= 2 in canonical form"));
        }
        Ok(())
    }
}

/// Euclidean expansion of a non-negative rational into canonical form.
pub fn cf_from_rational(r: &Rational) -> Result<ContinuedFraction> {
    if r.is_negative() {
        return Err(Error::domain("continued fraction of a negative number"));
    }
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    let mut quotients = Vec::new();
    loop {
        let (q, rem) = num_integer::div_rem(num.clone(), den.clone());
        let q = q
            .to_u64()
            .ok_or_else(|| Error::limit("partial quotient exceeds u64"))?;
        quotients.push(q);
        if rem.is_zero() {
            break;
        }
        num = den;
        den = rem;
    }
    // Euclid can end with a trailing 1 ([..., a, 1] == [..., a+1])
    if quotients.len() > 1 && *quotients.last().unwrap() == 1 {
        quotients.pop();
        *quotients.last_mut().unwrap() += 1;
    }
    ContinuedFraction::new(quotients)
}

/// Exact value of a canonical continued fraction.
pub fn cf_to_rational(cf: &ContinuedFraction) -> Result<Rational> {
    cf.check_canonical()?;
    // convergent recurrence h_k = a_k h_{k-1} + h_{k-2}
    let mut h_prev = BigInt::one();
    let mut h = BigInt::from(cf.quotients[0]);
    let mut k_prev = BigInt::zero();
    let mut k = BigInt::one();
    for &a in &cf.quotients[1..] {
        let h_next = BigInt::from(a) * &h + &h_prev;
        let k_next = BigInt::from(a) * &k + &k_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
    Ok(Rational::new(h, k))
}

/// One generation (row) of the Calkin–Wilf tree in left-to-right order.
#[derive(Clone, Debug)]
pub struct TreeGeneration {
    pub index: u32,
    pub elements: Vec<Rational>,
}

/// Stream the n-th generation without materializing earlier rows: the
/// element at position `idx` follows the path given by the binary digits of
/// `idx` (0 = left child a/(a+b), 1 = right child (a+b)/b).
pub fn cw_generation_iter(n: u32) -> impl Iterator<Item = (u64, u64)> {
    let count: u64 = 1 << (n - 1);
    (0..count).map(move |idx| {
        let mut a: u64 = 1;
        let mut b: u64 = 1;
        for bit in (0..n - 1).rev() {
            if idx >> bit & 1 == 0 {
                b += a;
            } else {
                a += b;
            }
        }
        (a, b)
    })
}

pub fn cw_generation(n: u32) -> Result<TreeGeneration> {
    if n == 0 {
        return Err(Error::domain("generation index starts at 1"));
    }
    if n > GENERATION_LIMIT {
        return Err(Error::limit(format!(
            "generation {n} exceeds limit {GENERATION_LIMIT}"
        )));
    }
    let elements = cw_generation_iter(n)
        .map(|(a, b)| Rational::new(BigInt::from(a), BigInt::from(b)))
        .collect();
    Ok(TreeGeneration { index: n, elements })
}

/// Newman's single-orbit recurrence x ↦ 1/(2⌊x⌋ + 1 − x); starting from 1 it
/// walks the whole tree line by line.
pub fn newman_next(x: &Rational) -> Result<Rational> {
    if !x.is_positive() {
        return Err(Error::domain("newman iteration needs x > 0"));
    }
    let floor = x.floor();
    let denom = Rational::from(BigInt::from(2)) * floor + Rational::one() - x;
    Ok(Rational::one() / denom)
}

/// Stern diatomic sequence s(n); pair walk over the binary digits keeps it
/// O(log n).
pub fn stern(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut u: u64 = 1; // s(m) with m = 1 after consuming the leading bit
    let mut v: u64 = 1; // s(m+1)
    let bits = 63 - n.leading_zeros();
    for i in (0..bits).rev() {
        if n >> i & 1 == 0 {
            v += u;
        } else {
            u += v;
        }
    }
    u
}

/// Endpoints of the depth-r mediant partition of [0,1]: 2^r + 1 sorted
/// rationals obtained by r rounds of mediant insertion starting from {0, 1}.
pub fn farey_level(r: u32) -> Result<Vec<Rational>> {
    if r > FAREY_LIMIT {
        return Err(Error::limit(format!("farey depth {r} exceeds {FAREY_LIMIT}")));
    }
    let mut level: Vec<(u64, u64)> = vec![(0, 1), (1, 1)];
    for _ in 0..r {
        let mut next = Vec::with_capacity(level.len() * 2 - 1);
        for w in level.windows(2) {
            let (a, b) = w[0];
            let (c, d) = w[1];
            next.push((a, b));
            next.push((a + c, b + d));
        }
        next.push(*level.last().unwrap());
        level = next;
    }
    Ok(level
        .into_iter()
        .map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
        .collect())
}

/// Exact sum of generation n (n >= 2); equals 3·2^(n−2) − 1/2.
pub fn generation_sum(n: u32) -> Result<Rational> {
    if n < 2 {
        return Err(Error::domain("generation_sum needs n >= 2"));
    }
    if n > GENERATION_LIMIT {
        return Err(Error::limit(format!(
            "generation {n} exceeds limit {GENERATION_LIMIT}"
        )));
    }
    let mut sum = Rational::zero();
    for (a, b) in cw_generation_iter(n) {
        sum += Rational::new(BigInt::from(a), BigInt::from(b));
    }
    Ok(sum)
}

/// Fraction of generation-n elements that are <= x.
pub fn generation_cdf(n: u32, x: f64) -> Result<f64> {
    if n == 0 || n > GENERATION_LIMIT {
        return Err(Error::limit("generation index out of range"));
    }
    if !(x >= 0.0) {
        return Err(Error::domain("generation_cdf needs x >= 0"));
    }
    let count = cw_generation_iter(n)
        .filter(|&(a, b)| (a as f64) <= x * (b as f64))
        .count();
    Ok(count as f64 / (1u64 << (n - 1)) as f64)
}
