//! Moment tables m_L = 2∫₀¹ x^L dF and M_L = ∫₀^∞ x^L dF, the exact
//! relations between them, the annihilator polynomials, asymptotic ratio
//! diagnostics, the exponential generating function m(t), and the Bessel
//! integral-equation residual.
//!
//! m comes out of the extended-precision operator solve; M follows by the
//! exact binomial recursion M_L = m_L + Σ_{s<L} C(L,s) M_s, which avoids
//! integrating the factorially growing x^L over the half line.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::contfrac::{cw_generation_iter, generation_sum, rat, Rational};
use crate::error::{Error, Result};
use crate::precision::{CFx, Fx, FxCtx};
use crate::quadrature::{adaptive_simpson, nodes, ChebGrid, Kahan};
use crate::special::bessel_j;
use crate::transfer::solve_period_coeffs;

/// Exact binomial coefficient.
pub(crate) fn binomial_bigint(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// High-precision moment table with f64 mirrors.
pub struct MomentTable {
    pub lmax: usize,
    pub digits: u32,
    pub method: &'static str,
    pub solve_residual: f64,
    ctx: FxCtx,
    m_fx: Vec<Fx>,
    big_m_fx: Vec<Fx>,
    /// f64 mirrors of m_0..m_lmax
    pub m: Vec<f64>,
    /// f64 mirrors of M_0..M_lmax (these overflow to +inf for L ≳ 170)
    pub big_m: Vec<f64>,
    /// two-parameter fit r_L ≈ A − B/√L of the scaled-moment ratio,
    /// calibrated on the trusted window and used to extend the table
    asym_a: f64,
    asym_b: f64,
}

impl MomentTable {
    /// Build the table from the coefficient-space solve at dimension
    /// `lmax` and the given working precision. Entries with
    /// L ≲ lmax − 100 carry the full f64 accuracy; the top of the table
    /// degrades gradually and is only used inside tail bounds.
    pub fn build(lmax: usize, digits: u32) -> Result<Self> {
        let solve = solve_period_coeffs(lmax, digits)?;
        let ctx = solve.ctx;
        let mut m_fx = Vec::with_capacity(lmax + 1);
        m_fx.push(ctx.one());
        m_fx.extend(solve.m_fx);
        let mut big_m_fx: Vec<Fx> = Vec::with_capacity(lmax + 1);
        big_m_fx.push(ctx.one());
        for l in 1..=lmax {
            let mut acc = m_fx[l].clone();
            for s in 0..l {
                let c = binomial_bigint(l as u64, s as u64);
                let t = ctx.mul_bigint(&big_m_fx[s], &c);
                acc = ctx.add(&acc, &t);
            }
            big_m_fx.push(acc);
        }
        let m: Vec<f64> = m_fx.iter().map(|v| ctx.to_f64(v)).collect();
        let big_m = big_m_fx.iter().map(|v| ctx.to_f64(v)).collect();
        // calibrate r_L ≈ A − B/√L at two trusted anchors
        let trusted = lmax - 100.min(lmax / 2);
        let scale = |l: usize| {
            let lf = l as f64;
            lf.powf(0.25) * (-2.0 * std::f64::consts::LN_2.sqrt() * lf.sqrt()).exp()
        };
        let t2 = trusted;
        let t1 = (t2 - 20).max(t2 / 2);
        let r1 = m[t1] / scale(t1);
        let r2 = m[t2] / scale(t2);
        let (s1, s2) = (1.0 / (t1 as f64).sqrt(), 1.0 / (t2 as f64).sqrt());
        let asym_b = (r2 - r1) / (s1 - s2);
        let asym_a = r2 + asym_b * s2;
        Ok(MomentTable {
            lmax,
            digits,
            method: "transfer-solve",
            solve_residual: solve.residual_sup,
            ctx,
            m_fx,
            big_m_fx,
            m,
            big_m,
            asym_a,
            asym_b,
        })
    }

    pub fn ctx(&self) -> &FxCtx {
        &self.ctx
    }

    pub fn m_fx(&self, l: usize) -> &Fx {
        &self.m_fx[l]
    }

    pub fn big_m_fx(&self, l: usize) -> &Fx {
        &self.big_m_fx[l]
    }

    /// Number of leading entries unaffected by the solve truncation
    /// (measured: the top ~100 indices of a solve degrade gradually).
    pub fn trusted_len(&self) -> usize {
        self.lmax - 100.min(self.lmax / 2)
    }

    /// m_l for any l: table value in the trusted range, beyond it the
    /// drift-calibrated asymptotic model (A − B/√l)·l^{1/4} C^{√l}.
    pub fn m_model(&self, l: usize) -> f64 {
        if l <= self.trusted_len() {
            return self.m[l];
        }
        let lf = l as f64;
        (self.asym_a - self.asym_b / lf.sqrt())
            * lf.powf(0.25)
            * (-2.0 * std::f64::consts::LN_2.sqrt() * lf.sqrt()).exp()
    }

    /// Taylor coefficients of the period function at 0: G(z) = Σ m_{L+1} z^L.
    pub fn period_taylor(&self) -> Vec<f64> {
        self.m[1..].to_vec()
    }
}

/// Convenience constructor mirroring the library defaults.
pub fn moment_tables(lmax: usize, digits: u32) -> Result<MomentTable> {
    MomentTable::build(lmax, digits)
}

/// Residual report for the inter-moment relations.
#[derive(Clone, Debug)]
pub struct CrossRelations {
    /// (L, |m_L − Σ (−1)^s C(L,s) m_s|), exact arithmetic on the table
    pub symmetry: Vec<(usize, f64)>,
    /// (L, relative residual of M_L = Σ_{s≥L} C(s−1,L−1) m_s with tail bound)
    pub est: Vec<(usize, f64)>,
    /// smallest value of 2∫ x^n (1−x)^m dF over m,n ≤ 12
    pub hausdorff_min: f64,
    pub hausdorff_all_positive: bool,
}

pub fn check_cross_relations(table: &MomentTable) -> CrossRelations {
    let ctx = table.ctx();
    let mut symmetry = Vec::new();
    for l in 1..=table.lmax.min(20) {
        let mut acc = ctx.neg(&table.m_fx[l]);
        for s in 0..=l {
            let c = binomial_bigint(l as u64, s as u64);
            let mut t = ctx.mul_bigint(&table.m_fx[s], &c);
            if s % 2 == 1 {
                t = ctx.neg(&t);
            }
            acc = ctx.add(&acc, &t);
        }
        symmetry.push((l, ctx.to_f64(&acc).abs()));
    }
    let mut est = Vec::new();
    for l in 1..=6usize {
        est.push((l, est_relation_residual(table, l, table.lmax)));
    }
    let mut hausdorff_min = f64::INFINITY;
    let mut all_positive = true;
    for m in 0..=12usize {
        for n in 0..=12usize {
            let mut acc = ctx.zero();
            for i in 0..=m {
                let c = binomial_bigint(m as u64, i as u64);
                let mut t = ctx.mul_bigint(&table.m_fx[i + n], &c);
                if i % 2 == 1 {
                    t = ctx.neg(&t);
                }
                acc = ctx.add(&acc, &t);
            }
            let v = ctx.to_f64(&acc);
            hausdorff_min = hausdorff_min.min(v);
            all_positive &= v > 0.0;
        }
    }
    CrossRelations {
        symmetry,
        est,
        hausdorff_min,
        hausdorff_all_positive: all_positive,
    }
}

/// Relative residual of M_L = Σ_{s≥L} C(s−1, L−1) m_s truncated at `terms`
/// trusted table entries, the tail filled in from the asymptotic moment
/// model anchored at the truncation point.
pub fn est_relation_residual(table: &MomentTable, l: usize, terms: usize) -> f64 {
    assert!(l >= 1);
    let hi = terms.min(table.trusted_len());
    let binom = |s: usize| -> f64 {
        let mut c = 1.0f64;
        for i in 0..l - 1 {
            c *= (s - 1 - i) as f64 / (i + 1) as f64;
        }
        c
    };
    let mut sum = Kahan::default();
    for s in l..=hi {
        sum.add(binom(s) * table.m[s]);
    }
    // synthetic tail from the drift-calibrated asymptotic model
    let mut tail = Kahan::default();
    for s in hi + 1..hi + 2500 {
        let t = binom(s) * table.m_model(s);
        tail.add(t);
        if t < 1e-18 * table.big_m[l] {
            break;
        }
    }
    (sum.value() + tail.value() - table.big_m[l]).abs() / table.big_m[l].abs()
}

/// The integer annihilator polynomial 2x^n − (x+1)^n − 2(1−x)^n + (−x)^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPolynomial {
    pub n: usize,
    /// ascending coefficients, trailing zeros trimmed
    pub coeffs: Vec<Rational>,
}

pub fn q_polynomial(n: usize) -> Result<QPolynomial> {
    if n == 0 || n > 16 {
        return Err(Error::domain("annihilator polynomial index must be 1..=16"));
    }
    let mut coeffs = vec![Rational::zero(); n + 1];
    // 2x^n and (−x)^n
    coeffs[n] += rat(if n % 2 == 0 { 3 } else { 1 }, 1);
    for k in 0..=n {
        let c = Rational::from(binomial_bigint(n as u64, k as u64));
        // −(x+1)^n
        coeffs[k] -= c.clone();
        // −2(1−x)^n
        let signed = if k % 2 == 0 { c.clone() } else { -c };
        coeffs[k] -= rat(2, 1) * signed;
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    Ok(QPolynomial { n, coeffs })
}

impl QPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Annihilation residual Σ coeffs_k M_k against a moment table.
    pub fn moment_residual(&self, table: &MomentTable) -> f64 {
        let ctx = table.ctx();
        let mut acc = ctx.zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let scaled = ctx.mul_bigint(&table.big_m_fx[k], c.numer());
            let t = ctx.div(&scaled, &ctx.from_bigint(c.denom()));
            acc = ctx.add(&acc, &t);
        }
        ctx.to_f64(&acc)
    }

    /// Reciprocity of (Q_{2n}(x) + 3)/x: palindromic coefficient vector.
    pub fn hat_is_reciprocal(&self) -> bool {
        if self.n % 2 == 1 {
            return false;
        }
        let mut hat = self.coeffs.clone();
        hat[0] += rat(3, 1);
        if !hat[0].is_zero() {
            return false;
        }
        let hat = &hat[1..];
        let d = hat.len();
        (0..d).all(|i| hat[i] == hat[d - 1 - i])
    }
}

/// Exact coefficients c_k with Q_{2n} = Σ_{k=1..n} c_k Q_{2k−1}; errors if
/// the overdetermined system were inconsistent.
pub fn q_span_solve(n: usize) -> Result<Vec<Rational>> {
    if n == 0 || n > 8 {
        return Err(Error::domain("span solve index must be 1..=8"));
    }
    let target = q_polynomial(2 * n)?;
    let basis: Vec<QPolynomial> = (1..=n).map(|k| q_polynomial(2 * k - 1).unwrap()).collect();
    let rows = 2 * n;
    let cols = n;
    let mut aug: Vec<Vec<Rational>> = (0..rows)
        .map(|d| {
            let mut row: Vec<Rational> = basis
                .iter()
                .map(|b| b.coeffs.get(d).cloned().unwrap_or_else(Rational::zero))
                .collect();
            row.push(target.coeffs.get(d).cloned().unwrap_or_else(Rational::zero));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = Rational::one() / aug[r][c].clone();
        for v in aug[r].iter_mut() {
            *v *= inv.clone();
        }
        for i in 0..rows {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..=cols {
                    let sub = f.clone() * aug[r][j].clone();
                    aug[i][j] -= sub;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    for row in aug.iter().skip(r) {
        if !row[cols].is_zero() {
            return Err(Error::domain("span system inconsistent"));
        }
    }
    let mut sol = vec![Rational::zero(); cols];
    for &(row, col) in &pivots {
        sol[col] = aug[row][cols].clone();
    }
    Ok(sol)
}

/// Finite-generation estimates of the moments: the tree average
/// 2^{1−n} Σ_{gen n} r^L (→ M_L) and the unit-interval variant
/// 2^{2−n} Σ_{gen n, r<1} r^L (→ m_L).
pub fn empirical_moment(n: u32, l: u32) -> Result<(f64, f64)> {
    if n == 0 || n > 20 {
        return Err(Error::limit("empirical moments run on generations 1..=20"));
    }
    if l > 4 {
        return Err(Error::limit("empirical moments capped at L = 4"));
    }
    let mut big = Kahan::default();
    let mut small = Kahan::default();
    for (a, b) in cw_generation_iter(n) {
        let x = a as f64 / b as f64;
        let p = x.powi(l as i32);
        big.add(p);
        if a < b {
            small.add(p);
        }
    }
    Ok((
        big.value() * 2f64.powi(1 - n as i32),
        small.value() * 2f64.powi(2 - n as i32),
    ))
}

/// Exact first-moment identity 2^{1−n} Σ_{gen n} r = 3/2 − 2^{−n}.
pub fn empirical_first_moment_exact(n: u32) -> Result<Rational> {
    let sum = if n == 1 {
        Rational::one()
    } else {
        generation_sum(n)?
    };
    Ok(sum * Rational::new(BigInt::one(), BigInt::one() << (n - 1)))
}

/// Asymptotic scale constant e^{−2√(log 2)} ≈ 0.18917.
pub fn asym_constant() -> f64 {
    (-2.0 * std::f64::consts::LN_2.sqrt()).exp()
}

/// Ratios m_L / (L^{1/4} C^{√L}), L = 1..lmax within the trusted range;
/// expected to increase.
pub fn asym_ratio(table: &MomentTable, lmax: usize) -> Vec<f64> {
    let c = asym_constant();
    (1..=lmax.min(table.trusted_len()))
        .map(|l| {
            let lf = l as f64;
            table.m[l] / (lf.powf(0.25) * c.powf(lf.sqrt()))
        })
        .collect()
}

/// The Chebyshev-quotient chain c*_j = sin((j+1)π/(J+2)) / sin(jπ/(J+2)).
pub struct ChebyshevChain {
    pub values: Vec<f64>,
    /// max residual of c*_1 = 1/c*_j + c*_{j+1} (j < J) and c*_1 = 1/c*_J
    pub chain_residual: f64,
}

pub fn chebyshev_chain(j_max: usize) -> Result<ChebyshevChain> {
    if j_max == 0 {
        return Err(Error::domain("chain needs J >= 1"));
    }
    let denom = (j_max + 2) as f64;
    let values: Vec<f64> = (1..=j_max)
        .map(|j| {
            ((j + 1) as f64 * std::f64::consts::PI / denom).sin()
                / (j as f64 * std::f64::consts::PI / denom).sin()
        })
        .collect();
    let c1 = values[0];
    let mut res = (c1 - 1.0 / values[j_max - 1]).abs();
    for j in 1..j_max {
        res = res.max((c1 - (1.0 / values[j - 1] + values[j])).abs());
    }
    Ok(ChebyshevChain {
        values,
        chain_residual: res,
    })
}

/// Quadrature kernel for m(t) = 2 Σ_n 2^{-n} ∫₀¹ e^{t/(x+n)} dF(x):
/// flattened sample points y = 1/(x+n) with folded weights. One build
/// serves every t, which is what the Fourier and Bessel loops need.
pub struct SmoothedExpKernel {
    y: Vec<f64>,
    b: Vec<f64>,
}

impl SmoothedExpKernel {
    pub fn build(depth: u8, terms: usize) -> Result<Self> {
        let pts = nodes(depth)?;
        let w = 2f64.powi(-(depth as i32 + 1));
        let mut y = Vec::with_capacity(pts.len() * terms);
        let mut b = Vec::with_capacity(pts.len() * terms);
        let mut pw = 0.5;
        for n in 1..=terms {
            for &x in pts.iter() {
                y.push(1.0 / (x + n as f64));
                b.push(pw * w);
            }
            pw *= 0.5;
        }
        Ok(SmoothedExpKernel { y, b })
    }

    /// m(t) = 2 Σ b e^{t y} for complex t.
    pub fn m_exp(&self, t: Complex64) -> Complex64 {
        let mut re = Kahan::default();
        let mut im = Kahan::default();
        for (&y, &b) in self.y.iter().zip(&self.b) {
            let e = (t * y).exp() * b;
            re.add(e.re);
            im.add(e.im);
        }
        Complex64::new(2.0 * re.value(), 2.0 * im.value())
    }

    /// m'(−t) = 2 Σ b y e^{−t y} for real t ≥ 0.
    pub fn m_prime_neg(&self, t: f64) -> f64 {
        let mut acc = Kahan::default();
        for (&y, &b) in self.y.iter().zip(&self.b) {
            acc.add(b * y * (-t * y).exp());
        }
        2.0 * acc.value()
    }
}

/// Digits needed so the series peak e^{|t|} stays harmless.
fn series_digits_needed(t_abs: f64) -> u32 {
    (0.4343 * t_abs) as u32 + 25
}

/// Series length after which |t|^L m_L / L! is negligible.
fn series_terms_needed(t_abs: f64) -> usize {
    (2.8 * t_abs) as usize + 30
}

/// True when the table can evaluate the m(t) series at this |t|.
pub fn series_covers(table: &MomentTable, t_abs: f64) -> bool {
    series_terms_needed(t_abs) <= table.lmax && series_digits_needed(t_abs) <= table.digits
}

/// m(t) by the extended-precision series Σ m_L t^L / L!.
pub fn m_exp_series(table: &MomentTable, t: Complex64) -> Result<Complex64> {
    let t_abs = t.norm();
    if !series_covers(table, t_abs) {
        return Err(Error::precision(format!(
            "m(t) series needs a longer table for |t| = {t_abs:.1}"
        )));
    }
    let ctx = table.ctx();
    let tf = ctx.c_from(ctx.from_f64(t.re), ctx.from_f64(t.im));
    let mut pw = ctx.c_from(ctx.one(), ctx.zero()); // t^L / L!
    let mut sum = ctx.c_from(table.m_fx[0].clone(), ctx.zero());
    for l in 1..=table.lmax {
        pw = ctx.c_div_i64(&ctx.c_mul(&pw, &tf), l as i64);
        let term = CFx {
            re: ctx.mul(&pw.re, &table.m_fx[l]),
            im: ctx.mul(&pw.im, &table.m_fx[l]),
        };
        sum = ctx.c_add(&sum, &term);
        if l > t_abs as usize + 10 && ctx.c_below_pow2(&pw, (ctx.bits() * 3) / 4) {
            break;
        }
    }
    let (re, im) = ctx.c_to_f64(&sum);
    Ok(Complex64::new(re, im))
}

/// m(t): extended series when the table covers |t|, otherwise the smoothed
/// quadrature form.
pub fn m_exp(
    table: &MomentTable,
    t: Complex64,
    fallback: Option<&SmoothedExpKernel>,
) -> Result<Complex64> {
    match m_exp_series(table, t) {
        Ok(v) => Ok(v),
        Err(e) => match fallback {
            Some(k) => Ok(k.m_exp(t)),
            None => Err(e),
        },
    }
}

/// m(log 2 − 2πin) by the extended series with the argument built inside
/// the working context (these are the starred Fourier coefficients of the
/// periodic tail).
pub fn m_exp_at_vertical(table: &MomentTable, n: i64) -> Result<Complex64> {
    let t_abs = (std::f64::consts::LN_2.powi(2)
        + (2.0 * std::f64::consts::PI * n as f64).powi(2))
    .sqrt();
    if !series_covers(table, t_abs) {
        return Err(Error::precision(format!(
            "vertical series needs a longer table for n = {n}"
        )));
    }
    let ctx = table.ctx();
    let two_pi_n = ctx.mul_i64(&ctx.pi(), -2 * n);
    let tf = ctx.c_from(ctx.ln2(), two_pi_n);
    let mut pw = ctx.c_from(ctx.one(), ctx.zero());
    let mut sum = ctx.c_from(table.m_fx[0].clone(), ctx.zero());
    for l in 1..=table.lmax {
        pw = ctx.c_div_i64(&ctx.c_mul(&pw, &tf), l as i64);
        let term = CFx {
            re: ctx.mul(&pw.re, &table.m_fx[l]),
            im: ctx.mul(&pw.im, &table.m_fx[l]),
        };
        sum = ctx.c_add(&sum, &term);
        if l > t_abs as usize + 10 && ctx.c_below_pow2(&pw, (ctx.bits() * 3) / 4) {
            break;
        }
    }
    let (re, im) = ctx.c_to_f64(&sum);
    Ok(Complex64::new(re, im))
}

/// m'(−t) = Σ_{L≥1} m_L (−t)^{L−1}/(L−1)! for real t ≥ 0 by the series.
pub fn m_prime_neg_series(table: &MomentTable, t: f64) -> Result<f64> {
    if !series_covers(table, t) {
        return Err(Error::precision("series range exceeded for m'(−t)"));
    }
    let ctx = table.ctx();
    let tf = ctx.from_f64(-t);
    let mut pw = ctx.one();
    let mut sum = table.m_fx[1].clone();
    for l in 2..=table.lmax {
        pw = ctx.div_i64(&ctx.mul(&pw, &tf), (l - 1) as i64);
        let term = ctx.mul(&pw, &table.m_fx[l]);
        sum = ctx.add(&sum, &term);
        if l > t as usize + 10 && ctx.below_pow2(&pw, (ctx.bits() * 3) / 4) {
            break;
        }
    }
    Ok(ctx.to_f64(&sum))
}

/// Residual of the Bessel-kernel integral equation
/// |m(−s) − (2e^s − 1) ∫₀^∞ m'(−t) J₀(2√(st)) dt| for real s in (0, 20].
///
/// The substitution t = u² tames the square-root oscillation; m'(−u²) is
/// sampled on a Chebyshev grid (series where the table reaches, smoothed
/// quadrature beyond) and the oscillatory integral is done adaptively. The
/// cutoff at t = 400 sits far below the 1e−4 scale of interest because the
/// integrand decays like e^{−√(t log 2)}.
pub fn integral_equation_residual(
    table: &MomentTable,
    kernel: &SmoothedExpKernel,
    s: f64,
) -> Result<f64> {
    if !(s > 0.0) || s > 20.0 {
        return Err(Error::domain("integral equation residual needs 0 < s <= 20"));
    }
    let u_max = 20.0;
    let grid = ChebGrid::new(260);
    let phi_vals: Vec<f64> = grid
        .points
        .iter()
        .map(|&p| {
            let t = (p * u_max) * (p * u_max);
            m_prime_neg_series(table, t).unwrap_or_else(|_| kernel.m_prime_neg(t))
        })
        .collect();
    let integrand = |u: f64| -> f64 {
        grid.eval(&phi_vals, u / u_max) * bessel_j(0, 2.0 * s.sqrt() * u).unwrap() * 2.0 * u
    };
    let integral = adaptive_simpson(&integrand, 0.0, u_max, 1e-8, 24);
    let lhs = m_exp_series(table, Complex64::new(-s, 0.0))?.re;
    Ok((lhs - (2.0 * s.exp() - 1.0) * integral).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn table() -> &'static MomentTable {
        static T: OnceLock<MomentTable> = OnceLock::new();
        T.get_or_init(|| MomentTable::build(120, 220).unwrap())
    }

    #[test]
    fn table_basics() {
        let t = table();
        assert_eq!(t.m[0], 1.0);
        assert_eq!(t.big_m[0], 1.0);
        assert!((t.m[1] - 0.5).abs() < 1e-12, "m1 = {}", t.m[1]);
        assert!((t.big_m[1] - 1.5).abs() < 1e-10, "M1 = {}", t.big_m[1]);
        for l in 1..60 {
            assert!(t.m[l + 1] < t.m[l] && t.m[l + 1] > 0.0);
            assert!(t.big_m[l + 1] > t.big_m[l]);
        }
        let lin = 2.0 * t.big_m[3] - 9.0 * t.big_m[2] + 3.0 * t.big_m[1];
        assert!((lin - 3.0).abs() < 1e-8, "2M3-9M2+3M1 = {lin}");
    }

    #[test]
    fn cross_relations_on_test_table() {
        let rep = check_cross_relations(table());
        for &(l, r) in rep.symmetry.iter().take(10) {
            assert!(r < 1e-10, "symmetry residual at L={l}: {r}");
        }
        // the synthetic tail carries a growing share of M_L as L rises, and
        // the dimension-120 anchors add ~1% model error; the acceptance
        // suite re-runs this on the production table at tighter caps
        for &(l, r) in &rep.est {
            let cap = match l {
                1 | 2 => 1e-3,
                3 | 4 => 5e-3,
                _ => 5e-2,
            };
            assert!(r < cap, "(est) residual at L={l}: {r}");
        }
        assert!(rep.hausdorff_all_positive);
        assert!(rep.hausdorff_min > 0.0);
    }

    #[test]
    fn est_truncated_at_60_terms() {
        let r = est_relation_residual(table(), 2, 60);
        assert!(r < 1e-4, "(est) with 60 terms: {r}");
    }

    #[test]
    fn q_polynomial_table() {
        let q = |n: usize| q_polynomial(n).unwrap().coeffs;
        assert_eq!(q(1), vec![rat(-3, 1), rat(2, 1)]);
        assert_eq!(q(2), vec![rat(-3, 1), rat(2, 1)]);
        assert_eq!(q(3), vec![rat(-3, 1), rat(3, 1), rat(-9, 1), rat(2, 1)]);
        assert_eq!(q(4), vec![rat(-3, 1), rat(4, 1), rat(-18, 1), rat(4, 1)]);
        assert_eq!(
            q(5),
            vec![
                rat(-3, 1),
                rat(5, 1),
                rat(-30, 1),
                rat(10, 1),
                rat(-15, 1),
                rat(2, 1)
            ]
        );
        assert_eq!(
            q(6),
            vec![
                rat(-3, 1),
                rat(6, 1),
                rat(-45, 1),
                rat(20, 1),
                rat(-45, 1),
                rat(6, 1)
            ]
        );
        assert_eq!(
            q(7),
            vec![
                rat(-3, 1),
                rat(7, 1),
                rat(-63, 1),
                rat(35, 1),
                rat(-105, 1),
                rat(21, 1),
                rat(-21, 1),
                rat(2, 1)
            ]
        );
        assert_eq!(
            q(8),
            vec![
                rat(-3, 1),
                rat(8, 1),
                rat(-84, 1),
                rat(56, 1),
                rat(-210, 1),
                rat(56, 1),
                rat(-84, 1),
                rat(8, 1)
            ]
        );
    }

    #[test]
    fn q_degrees() {
        for n in 1..=8usize {
            assert_eq!(q_polynomial(2 * n).unwrap().degree(), 2 * n - 1);
            assert_eq!(q_polynomial(2 * n - 1).unwrap().degree(), 2 * n - 1);
        }
    }

    #[test]
    fn q_hat_reciprocity() {
        for n in 1..=8usize {
            assert!(q_polynomial(2 * n).unwrap().hat_is_reciprocal(), "n = {n}");
        }
    }

    #[test]
    fn q_span_membership() {
        assert_eq!(q_span_solve(1).unwrap(), vec![rat(1, 1)]);
        assert_eq!(q_span_solve(2).unwrap(), vec![rat(-1, 1), rat(2, 1)]);
        for n in 3..=4usize {
            let c = q_span_solve(n).unwrap();
            let target = q_polynomial(2 * n).unwrap();
            let mut acc = vec![Rational::zero(); target.coeffs.len()];
            for (k, ck) in c.iter().enumerate() {
                let b = q_polynomial(2 * (k + 1) - 1).unwrap();
                for (d, bc) in b.coeffs.iter().enumerate() {
                    acc[d] += ck.clone() * bc.clone();
                }
            }
            assert_eq!(acc, target.coeffs, "span combo failed for Q_{}", 2 * n);
        }
    }

    #[test]
    fn q_annihilation_residuals() {
        for n in 1..=8 {
            let q = q_polynomial(n).unwrap();
            let r = q.moment_residual(table());
            assert!(r.abs() < 1e-6, "annihilation residual Q_{n}: {r}");
        }
    }

    #[test]
    fn empirical_moments() {
        let (m1, _) = empirical_moment(1, 0).unwrap();
        assert_eq!(m1, 1.0);
        for n in 1..=12 {
            let exact = empirical_first_moment_exact(n).unwrap();
            let expect = rat(3, 2) - Rational::new(BigInt::one(), BigInt::one() << n);
            assert_eq!(exact, expect, "first moment at generation {n}");
        }
        let (m2_est, small2) = empirical_moment(14, 2).unwrap();
        assert!((m2_est - table().big_m[2]).abs() < 0.01, "M2 est {m2_est}");
        assert!((small2 - table().m[2]).abs() < 0.01, "m2 est {small2}");
    }

    #[test]
    fn asym_constant_and_ratios() {
        let c = asym_constant();
        assert!((c - 0.18917).abs() < 5e-6, "C = {c}");
        // The measured sequence r_L decreases monotonically towards its
        // positive limit (~2.10), i.e. m_L meets the upper envelope
        // L^{1/4} C^{√L} up to a constant from below. (The original
        // monotonicity remark claims the opposite direction; the verify
        // registry reports that discrepancy explicitly.)
        let r = asym_ratio(table(), 40);
        for i in 1..r.len() {
            assert!(r[i] < r[i - 1], "ratio not decreasing at L = {}", i + 1);
        }
        assert!(r.iter().all(|v| *v > 1.5 && *v < 3.0));
        // the companion increasing variant without the L^{1/4} factor
        for l in 2..40usize {
            let a = table().m[l] / c.powf((l as f64).sqrt());
            let b = table().m[l + 1] / c.powf(((l + 1) as f64).sqrt());
            assert!(b > a, "m_L/C^√L should increase at L = {l}");
        }
        let v = table().m[40].ln() / 40f64.sqrt();
        assert!(
            v > -2.0 * std::f64::consts::LN_2.sqrt() && v < -1.2,
            "log m_L/√L = {v}"
        );
    }

    #[test]
    fn chebyshev_chain_values() {
        let one = chebyshev_chain(1).unwrap();
        assert!((one.values[0] - 1.0).abs() < 1e-15);
        let six = chebyshev_chain(6).unwrap();
        assert!((six.values[0] - 2.0 * (std::f64::consts::PI / 8.0).cos()).abs() < 1e-14);
        assert!(six.chain_residual < 1e-14);
        assert!(six.values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn m_exp_series_basics() {
        let t = table();
        let zero = m_exp_series(t, Complex64::new(0.0, 0.0)).unwrap();
        assert!((zero.re - 1.0).abs() < 1e-14 && zero.im.abs() < 1e-14);
        let a = m_exp_series(t, Complex64::new(1.0, 0.0)).unwrap().re;
        let b = m_exp_series(t, Complex64::new(-1.0, 0.0)).unwrap().re;
        assert!((a - 1f64.exp() * b).abs() < 1e-10, "symmetry {a} vs {b}");
        let c0 = m_exp_series(t, Complex64::new(std::f64::consts::LN_2, 0.0))
            .unwrap()
            .re;
        assert!((c0 - 1.428159).abs() < 1e-6, "m(log2) = {c0}");
    }

    #[test]
    fn m_exp_quadrature_agrees_with_series() {
        let t = table();
        let k = SmoothedExpKernel::build(16, 40).unwrap();
        for &tt in &[
            Complex64::new(0.5, 0.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.3, 3.0),
        ] {
            let a = m_exp_series(t, tt).unwrap();
            let b = k.m_exp(tt);
            assert!((a - b).norm() < 1e-4, "mismatch at {tt}: {a} vs {b}");
        }
    }

    #[test]
    fn m_prime_series_vs_kernel() {
        let t = table();
        let k = SmoothedExpKernel::build(16, 40).unwrap();
        for &tt in &[0.5f64, 2.0, 10.0, 16.0] {
            let a = m_prime_neg_series(t, tt).unwrap();
            let b = k.m_prime_neg(tt);
            assert!(
                (a - b).abs() < 1e-4 * a.abs().max(1e-3),
                "m'(-{tt}): {a} vs {b}"
            );
        }
    }

    #[test]
    fn integral_equation_smoke() {
        // tight tolerances need the long production table; the dim-80 test
        // table still pins the residual to the percent level
        let k = SmoothedExpKernel::build(14, 40).unwrap();
        let r = integral_equation_residual(table(), &k, 1.0).unwrap();
        assert!(r < 1e-2, "s=1 residual {r}");
    }
}
