//! The period function G(z) = Σ m_{L+1} z^L and its eigen-relatives
//! G_λ(z), evaluated on the cut plane ℂ∖(1,∞); the integral identities
//! tying them to the distribution, and the bilinear orthogonality check
//! between eigenfunctions.
//!
//! Evaluation strategy: Taylor series inside |z| ≤ 0.9 (with the
//! drift-model coefficient extension carrying the series to the unit
//! circle), the reflection
//! `G(−w) = Σ 2^{-n} [(w+n)^{-1} − (w+n)^{-2} G(−1/(w+n))]` for
//! Re z ≤ −0.2, and otherwise one step of the three-term descent
//! `G(z) = [G(z−1) − 1/(z−1) − (z−1)^{-2} G(1/(z−1))]/2`, which lowers
//! Re z by one per step.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::moments::MomentTable;
use crate::quadrature::{integrate_unit, Kahan};
use crate::transfer::EigenPair;

/// Series/evaluation form of the period function bound to a moment table.
pub struct PeriodFunction {
    /// m_{L+1} for L = 0..len: trusted table entries, then the calibrated
    /// asymptotic model so the series converges on the whole closed disk
    coeffs: Vec<f64>,
    /// geometric truncation of the operator sums
    terms: usize,
}

const DESCENT_CAP: u32 = 64;

impl PeriodFunction {
    pub fn new(table: &MomentTable) -> Self {
        let len = 1600;
        let coeffs = (0..len).map(|l| table.m_model(l + 1)).collect();
        PeriodFunction { coeffs, terms: 60 }
    }

    /// G(1) = Σ m_{L+1} (the boundary value; all left derivatives exist).
    pub fn at_one(&self) -> f64 {
        let mut acc = Kahan::default();
        for &c in &self.coeffs {
            acc.add(c);
        }
        acc.value()
    }

    /// Σ L m_{L+1}: the first left derivative at z = 1.
    pub fn derivative_at_one(&self) -> f64 {
        let mut acc = Kahan::default();
        for (l, &c) in self.coeffs.iter().enumerate() {
            acc.add(l as f64 * c);
        }
        acc.value()
    }

    fn series(&self, z: Complex64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for &c in &self.coeffs {
            sum += c * pw;
            pw *= z;
            if c * pw.norm() < 1e-19 && pw.norm() < 1.0 {
                break;
            }
        }
        sum
    }

    fn reflection(&self, z: Complex64) -> Complex64 {
        // Re z <= −0.2: w = −z has Re w >= 0.2 and every 1/(w+n) lands in
        // the series disk
        let w = -z;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pw = 0.5;
        for n in 1..=self.terms {
            let d = w + n as f64;
            let inv = 1.0 / d;
            sum += pw * (inv - inv * inv * self.series(-inv));
            pw *= 0.5;
        }
        sum
    }

    fn eval_depth(&self, z: Complex64, depth: u32) -> Result<Complex64> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::domain("period function needs a finite argument"));
        }
        let cut_dist = if z.re >= 1.0 {
            z.im.abs()
        } else {
            (z - Complex64::new(1.0, 0.0)).norm()
        };
        if cut_dist < 1e-6 {
            return Err(Error::domain("argument too close to the cut [1, ∞)"));
        }
        if z.norm() <= 0.9 {
            return Ok(self.series(z));
        }
        if z.re <= -0.2 {
            return Ok(self.reflection(z));
        }
        if z.norm() < 1.0 - 1e-9 {
            // annulus 0.9 < |z| < 1 away from the cut: still inside the
            // (extended) series disk
            return Ok(self.series(z));
        }
        if depth == 0 {
            return Err(Error::limit("descent recursion exceeded"));
        }
        // three-term descent towards smaller real part
        let zm = z - 1.0;
        let a = self.eval_depth(zm, depth - 1)?;
        let b = self.eval_depth(1.0 / zm, depth - 1)?;
        Ok(0.5 * (a - 1.0 / zm - b / (zm * zm)))
    }

    /// G(z) on the cut plane.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_depth(z, DESCENT_CAP)
    }

    /// Residual of the merged three-term equation
    /// 1/z + z^{-2} G(1/z) + 2G(z+1) − G(z).
    pub fn three_term_residual(&self, z: Complex64) -> Result<f64> {
        let g = self.eval(z)?;
        let g1 = self.eval(z + 1.0)?;
        let ginv = self.eval(1.0 / z)?;
        Ok((1.0 / z + ginv / (z * z) + 2.0 * g1 - g).norm())
    }

    /// Residual of the symmetry property G(z+1) + z^{-2} G(1/z + 1) + 1/z.
    pub fn symmetry_residual(&self, z: Complex64) -> Result<f64> {
        let a = self.eval(z + 1.0)?;
        let b = self.eval(1.0 / z + 1.0)?;
        Ok((a + b / (z * z) + 1.0 / z).norm())
    }
}

/// G_λ(z) from an eigenpair's Taylor data; series inside the unit disk and
/// the eigen-relation reflection for arguments left of −1.
pub fn g_lambda_eval(pair: &EigenPair, z: Complex64) -> Result<Complex64> {
    let w = -z; // φ(w) = G_λ(−w) = Σ g_j w^j
    if w.norm() <= 1.0 + 1e-12 {
        return Ok(pair.phi(w));
    }
    if w.re > 0.95 {
        // reflection φ(w) = (1/λ) Σ 2^{-n} (w+n)^{-2} φ(1/(w+n))
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pw2 = 0.5;
        for n in 1..=60usize {
            let d = w + n as f64;
            sum += pw2 * pair.phi(1.0 / d) / (d * d);
            pw2 *= 0.5;
        }
        return Ok(sum / pair.lambda);
    }
    Err(Error::domain(
        "eigenfunction evaluation outside the validated domain",
    ))
}

/// Residual of the eigen-equation 2G_λ(z+1) − G_λ(z) − (1/(λz²))G_λ(1/z).
pub fn eigen_equation_residual(pair: &EigenPair, z: f64) -> Result<f64> {
    let zc = Complex64::new(z, 0.0);
    let a = g_lambda_eval(pair, zc + 1.0)?;
    let b = g_lambda_eval(pair, zc)?;
    let c = g_lambda_eval(pair, 1.0 / zc)?;
    Ok((2.0 * a - b - c / (pair.lambda * z * z)).norm())
}

/// The four integral identities, reported as residuals.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    /// |Σ (−1)^{L−1} m_L (m_{L−1}+m_{L+1}) − 1/2|, exact table arithmetic
    pub alternating_sum: f64,
    /// per eigen index: |I₂/I₁ − λ/(λ+1)|
    pub ratio: Vec<(usize, f64)>,
    /// the three expressions of the logarithmic identity
    pub log_values: [f64; 3],
    /// per eigen index: relative residual of ∫G_λ(−x)(1 − x²/λ) dF = 0
    pub annihilation: Vec<(usize, f64)>,
}

pub fn theorem_identities(
    table: &MomentTable,
    pairs: &[EigenPair],
    depth: u8,
) -> Result<IdentityReport> {
    // (iii) in fixed point: Σ (−1)^{L−1} m_L (m_{L−1} + m_{L+1}) = 1/2;
    // terms beyond the trusted range are below 1e−20
    let ctx = table.ctx();
    let mut acc = ctx.zero();
    for l in 1..table.trusted_len() {
        let s = ctx.add(table.m_fx(l - 1), table.m_fx(l + 1));
        let mut t = ctx.mul(table.m_fx(l), &s);
        if (l - 1) % 2 == 1 {
            t = ctx.neg(&t);
        }
        acc = ctx.add(&acc, &t);
    }
    let alternating_sum = (ctx.to_f64(&acc) - 0.5).abs();

    let mut ratio = Vec::new();
    let mut annihilation = Vec::new();
    for pair in pairs {
        // I₁ = ∫₀¹ G_λ(−x) dx, I₂ = ∫₀¹ G_λ(−x) F(x) dx in coefficient form
        let mut i1 = Kahan::default();
        let mut i2 = Kahan::default();
        for (j, &g) in pair.taylor.iter().enumerate() {
            i1.add(g / (j + 1) as f64);
            if j + 1 <= table.lmax {
                i2.add(g * (1.0 - table.m[j + 1]) / (2.0 * (j + 1) as f64));
            }
        }
        ratio.push((
            pair.index,
            (i2.value() / i1.value() - pair.lambda / (pair.lambda + 1.0)).abs(),
        ));
        // (iv): Σ g_j (m_j − m_{j+2}/λ) / 2, relative to the term scale
        let mut num = Kahan::default();
        let mut scale = 0.0f64;
        for (j, &g) in pair.taylor.iter().enumerate() {
            if j + 2 > table.lmax {
                break;
            }
            let t = 0.5 * g * (table.m[j] - table.m[j + 2] / pair.lambda);
            num.add(t);
            scale = scale.max(t.abs());
        }
        annihilation.push((pair.index, num.value().abs() / scale.max(1e-300)));
    }

    // (ii): −∫ log x dF = 2∫ log(1+x) dF = ∫₀¹ G(−x) dx
    let terms = 60usize;
    let a = integrate_unit(
        |x| {
            let mut s = 0.0;
            let mut pw = 0.5;
            for n in 1..=terms {
                s += pw * (x + n as f64).ln();
                pw *= 0.5;
            }
            s
        },
        depth,
    )?;
    let b = 2.0 * integrate_unit(|x| (1.0 + x).ln(), depth)?;
    let mut c = Kahan::default();
    for l in 1..=table.trusted_len() {
        let sign = if (l - 1) % 2 == 0 { 1.0 } else { -1.0 };
        c.add(sign * table.m[l] / l as f64);
    }
    Ok(IdentityReport {
        alternating_sum,
        ratio,
        log_values: [a, b, c.value()],
        annihilation,
    })
}

/// Bilinear orthogonality residual between two eigenpairs, relative to the
/// size of the largest term: Σ_L (−1)^L (m^μ_L m^λ_{L+1} λ − m^λ_L m^μ_{L+1} μ).
pub fn orthogonality(p: &EigenPair, q: &EigenPair) -> f64 {
    let len = p.taylor.len().min(q.taylor.len()) - 1;
    let mut acc = Kahan::default();
    let mut scale = 0.0f64;
    for l in 1..=len {
        let t1 = q.eigen_moment(l) * p.eigen_moment(l + 1) * p.lambda;
        let t2 = p.eigen_moment(l) * q.eigen_moment(l + 1) * q.lambda;
        let signed = if l % 2 == 0 { t1 - t2 } else { t2 - t1 };
        acc.add(signed);
        // scale of the bilinear terms before cancellation
        scale = scale.max(t1.abs().max(t2.abs()));
    }
    acc.value().abs() / scale.max(1e-300)
}
