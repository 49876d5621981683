//! Fourier coefficients of Ψ, the moment-from-Fourier identity, the dyadic
//! zeta function with its two independent evaluation routes, the critical
//! line, the Mellin transform of the period function, and the Eisenstein
//! series check for the homogeneous three-term equation.
//!
//! All zeta work fixes the branch of r^s = e^{s log r} by arg r ∈
//! (−π/2, π/2) for Re r > 0, which the points log2 − 2πin satisfy by
//! construction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::minkowski::psi;
use crate::moments::{m_exp_at_vertical, MomentTable, SmoothedExpKernel};
use crate::periodfn::PeriodFunction;
use crate::quadrature::{adaptive_simpson, nodes, Kahan};
use crate::special::gamma_complex;

const LN2: f64 = std::f64::consts::LN_2;
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// r_n = log 2 − 2πin, the lattice of the Dirichlet expansion.
pub fn vertical_point(n: i64) -> Complex64 {
    Complex64::new(LN2, -TWO_PI * n as f64)
}

/// Table of starred Fourier coefficients c*_n = c_n (2 log2 − 4πin) for
/// n = 0..=nmax; c*_n = m(log2 − 2πin).
pub struct FourierTable {
    pub star: Vec<Complex64>,
    pub depth: u8,
    /// quadrature is used beyond this index, the extended series below it
    pub series_upto: usize,
}

impl FourierTable {
    /// c_n (the unstarred coefficient); negative indices by conjugation.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let star = self.star_coeff(n);
        star / (2.0 * vertical_point(n))
    }

    pub fn star_coeff(&self, n: i64) -> Complex64 {
        let s = self.star[n.unsigned_abs() as usize];
        if n >= 0 {
            s
        } else {
            s.conj()
        }
    }

    pub fn len(&self) -> usize {
        self.star.len()
    }

    pub fn is_empty(&self) -> bool {
        self.star.is_empty()
    }
}

/// Build the c*_n table: extended series while the moment table covers the
/// argument, then one swept quadrature pass
/// c*_n = 2 Σ_k w 2^{x_k} e^{−2πin x_k} with a per-node rotation recurrence.
pub fn fourier_table(table: &MomentTable, nmax: usize, depth: u8) -> Result<FourierTable> {
    let mut star = Vec::with_capacity(nmax + 1);
    let mut series_upto = 0;
    for n in 0..=nmax as i64 {
        match m_exp_at_vertical(table, n) {
            Ok(v) => {
                star.push(v);
                series_upto = n as usize;
            }
            Err(_) => break,
        }
    }
    if star.len() <= nmax {
        let pts = nodes(depth)?;
        let w = 2f64.powi(-(depth as i32 + 1));
        let mut phase: Vec<Complex64> = Vec::with_capacity(pts.len());
        let mut rot: Vec<Complex64> = Vec::with_capacity(pts.len());
        let mut amp: Vec<f64> = Vec::with_capacity(pts.len());
        let start = star.len() as i64;
        for &x in pts.iter() {
            amp.push(w * 2f64.powf(x));
            rot.push(Complex64::from_polar(1.0, -TWO_PI * x));
            phase.push(Complex64::from_polar(1.0, -TWO_PI * x * start as f64));
        }
        for _n in start..=nmax as i64 {
            let mut re = Kahan::default();
            let mut im = Kahan::default();
            for i in 0..pts.len() {
                re.add(amp[i] * phase[i].re);
                im.add(amp[i] * phase[i].im);
                phase[i] *= rot[i];
            }
            star.push(Complex64::new(2.0 * re.value(), 2.0 * im.value()));
        }
    }
    Ok(FourierTable {
        star,
        depth,
        series_upto,
    })
}

/// Single Fourier coefficient c_n (series route when available, otherwise
/// the smoothed quadrature kernel).
pub fn fourier_coeff(
    table: &MomentTable,
    kernel: Option<&SmoothedExpKernel>,
    n: i64,
) -> Result<Complex64> {
    if n.unsigned_abs() > 10_000 {
        return Err(Error::limit("fourier coefficients capped at |n| = 10^4"));
    }
    let star = match m_exp_at_vertical(table, n.abs()) {
        Ok(v) => v,
        Err(e) => match kernel {
            Some(k) => k.m_exp(vertical_point(n.abs())),
            None => return Err(e),
        },
    };
    let star = if n >= 0 { star } else { star.conj() };
    Ok(star / (2.0 * vertical_point(n)))
}

/// L² distance ∫₀¹ |Ψ − Σ_{|n|≤N} c_n e^{2πinx}|² dx by Simpson on a
/// dyadic grid, plus the Bessel-inequality slack ∫Ψ² − Σ|c_n|².
pub struct FourierL2 {
    pub distance_sq: f64,
    pub psi_norm_sq: f64,
    pub coeff_energy: f64,
}

pub fn psi_fourier_l2(
    ftable: &FourierTable,
    n_terms: usize,
    truncation_eps: f64,
) -> Result<FourierL2> {
    if n_terms > 512 || n_terms >= ftable.len() {
        return Err(Error::limit("partial sum order out of range"));
    }
    let grid = 1usize << 14;
    let mut err_vals = Vec::with_capacity(grid + 1);
    let mut psi_vals = Vec::with_capacity(grid + 1);
    for i in 0..=grid {
        let x = i as f64 / grid as f64;
        let p = psi(x, truncation_eps)?;
        // real form of the symmetric partial sum
        let c0 = ftable.coeff(0);
        let mut s = c0.re;
        for n in 1..=n_terms as i64 {
            let c = ftable.coeff(n);
            let ang = TWO_PI * n as f64 * x;
            s += 2.0 * (c.re * ang.cos() - c.im * ang.sin());
        }
        err_vals.push((p - s) * (p - s));
        psi_vals.push(p * p);
    }
    let simpson = |v: &[f64]| -> f64 {
        let h = 1.0 / grid as f64;
        let mut acc = v[0] + v[grid];
        for (i, x) in v.iter().enumerate().take(grid).skip(1) {
            acc += if i % 2 == 1 { 4.0 * x } else { 2.0 * x };
        }
        acc * h / 3.0
    };
    let mut energy = ftable.coeff(0).norm_sqr();
    for n in 1..=n_terms as i64 {
        energy += 2.0 * ftable.coeff(n).norm_sqr();
    }
    Ok(FourierL2 {
        distance_sq: simpson(&err_vals),
        psi_norm_sq: simpson(&psi_vals),
        coeff_energy: energy,
    })
}

/// M_L = L! Σ_n c_n / (log2 − 2πin)^L by symmetric partial sums (±n terms
/// paired so each pair is real).
pub fn moment_from_fourier(ftable: &FourierTable, l: u32, n_terms: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::domain("moment-from-fourier needs L >= 1"));
    }
    if n_terms >= ftable.len() {
        return Err(Error::limit("not enough Fourier coefficients in the table"));
    }
    let mut acc = Kahan::default();
    acc.add((ftable.coeff(0) / vertical_point(0).powi(l as i32)).re);
    for n in 1..=n_terms as i64 {
        let t = ftable.coeff(n) / vertical_point(n).powi(l as i32);
        acc.add(2.0 * t.re);
    }
    let mut factorial = 1.0;
    for k in 2..=l {
        factorial *= k as f64;
    }
    Ok(factorial * acc.value())
}

/// Quadrature kernel for Φ(w) = ∫₀¹ x^{-w} dF = Σ_n 2^{-n} ∫₀¹ (x+n)^w dF:
/// flattened points ln(x+n) with folded weights, so Φ(w) = Σ c e^{w z} and
/// the critical line Z(t) = 2 Σ c cos(t z).
pub struct LogKernel {
    z: Vec<f64>,
    c: Vec<f64>,
}

impl LogKernel {
    pub fn build(depth: u8, terms: usize) -> Result<Self> {
        let pts = nodes(depth)?;
        let w = 2f64.powi(-(depth as i32 + 1));
        let mut z = Vec::with_capacity(pts.len() * terms);
        let mut c = Vec::with_capacity(pts.len() * terms);
        let mut pw = 0.5;
        for n in 1..=terms {
            for &x in pts.iter() {
                z.push((x + n as f64).ln());
                c.push(pw * w);
            }
            pw *= 0.5;
        }
        Ok(LogKernel { z, c })
    }

    pub fn phi(&self, w: Complex64) -> Complex64 {
        let mut re = Kahan::default();
        let mut im = Kahan::default();
        for (&z, &c) in self.z.iter().zip(&self.c) {
            let e = (w * z).exp() * c;
            re.add(e.re);
            im.add(e.im);
        }
        Complex64::new(re.value(), im.value())
    }

    /// Z(t) = 2 Re Φ(it) = 2 Σ c cos(t z).
    pub fn critical_z(&self, t: f64) -> f64 {
        let mut acc = Kahan::default();
        for (&z, &c) in self.z.iter().zip(&self.c) {
            acc.add(c * (t * z).cos());
        }
        2.0 * acc.value()
    }

    /// Z on a uniform grid via per-point rotation recurrences.
    pub fn critical_sweep(&self, t0: f64, step: f64, count: usize) -> Vec<f64> {
        let mut phase: Vec<Complex64> = self
            .z
            .iter()
            .map(|&z| Complex64::from_polar(1.0, t0 * z))
            .collect();
        let rot: Vec<Complex64> = self
            .z
            .iter()
            .map(|&z| Complex64::from_polar(1.0, step * z))
            .collect();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let mut acc = Kahan::default();
            for (p, &c) in phase.iter().zip(&self.c) {
                acc.add(c * p.re);
            }
            out.push(2.0 * acc.value());
            for (p, r) in phase.iter_mut().zip(&rot) {
                *p *= r;
            }
        }
        out
    }
}

/// How ζ_M was evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaMethod {
    /// moment-series Φ(s) + Φ(−s) over Γ(s+1); symmetric by construction
    Phi,
    /// Dirichlet sum over the vertical lattice (needs Re s > 0.25)
    Dirichlet,
}

#[derive(Clone, Debug)]
pub struct ZetaValue {
    pub s: Complex64,
    pub value: Complex64,
    pub method: ZetaMethod,
}

/// Φ(w) = ∫₀¹ x^{−w} dF by the binomial moment series
/// (1/2) Σ_n 2^{−n} Σ_j C(w,j) n^{w−j} m_j
/// for moderate |Im w|; the swept log-kernel takes over beyond.
pub fn phi_series(table: &MomentTable, w: Complex64) -> Result<Complex64> {
    if w.re.abs() > 40.0 {
        return Err(Error::domain("phi series limited to |Re w| <= 40"));
    }
    // integer arguments close in terms of the table alone: Φ(−L) is the
    // moment m_L/2 and Φ(L) a finite binomial sum
    if w.im == 0.0 && w.re == w.re.round() {
        let l = w.re as i64;
        if l <= 0 {
            let idx = (-l) as usize;
            if idx <= table.lmax {
                return Ok(Complex64::new(0.5 * table.m[idx], 0.0));
            }
        } else {
            let l = l as usize;
            let mut total = Kahan::default();
            for n in 1..=90u32 {
                let nf = n as f64;
                let mut inner = 0.0;
                let mut binom = 1.0;
                for j in 0..=l {
                    inner += binom * table.m[j] / nf.powi(j as i32);
                    binom = binom * (l - j) as f64 / (j + 1) as f64;
                }
                total.add(nf.powi(l as i32) * 2f64.powi(-(n as i32)) * inner);
            }
            return Ok(Complex64::new(0.5 * total.value(), 0.0));
        }
    }
    let jcap = 900usize;
    let mut total = Complex64::new(0.0, 0.0);
    for n in 1..=90u32 {
        let nf = n as f64;
        // inner Σ_j C(w,j) n^{-j} m_j, drift-model values past the trusted
        // range (the n = 1 row needs the deep moment tail)
        let mut inner = Complex64::new(0.0, 0.0);
        let mut binom = Complex64::new(1.0, 0.0);
        let mut prev = f64::INFINITY;
        let mut growing = 0;
        for j in 0..jcap {
            let term = binom * table.m_model(j) / nf.powi(j as i32);
            inner += term;
            let mag = term.norm();
            if mag < 1e-19 && j as f64 > w.norm() {
                break;
            }
            if mag > prev {
                growing += 1;
                if growing > 60 && j as f64 > 3.0 * w.norm() + 20.0 {
                    return Err(Error::precision("phi series diverging"));
                }
            } else {
                growing = 0;
            }
            prev = mag;
            binom = binom * (w - j as f64) / (j as f64 + 1.0);
        }
        let weight = (w * nf.ln() - nf * LN2).exp(); // n^w 2^{-n}
        total += weight * inner;
        if weight.norm() * inner.norm() < 1e-19 * total.norm().max(1e-10) && n > 20 {
            break;
        }
    }
    Ok(0.5 * total)
}

/// Φ(w) with the quadrature fallback for large |Im w|.
pub fn phi(table: &MomentTable, kernel: &LogKernel, w: Complex64) -> Result<Complex64> {
    if w.im.abs() <= 10.0 {
        phi_series(table, w)
    } else {
        Ok(kernel.phi(w))
    }
}

/// ζ_M(s) = [Φ(s) + Φ(−s)] / Γ(s+1) — entire, symmetric route. At the
/// negative integers the Γ pole in the denominator forces the trivial
/// zeros exactly.
pub fn zeta_m(table: &MomentTable, kernel: &LogKernel, s: Complex64) -> Result<ZetaValue> {
    if s.im == 0.0 && s.re < 0.0 && s.re == s.re.round() {
        return Ok(ZetaValue {
            s,
            value: Complex64::new(0.0, 0.0),
            method: ZetaMethod::Phi,
        });
    }
    let a = phi(table, kernel, s)?;
    let b = phi(table, kernel, -s)?;
    let g = gamma_complex(s + 1.0)?;
    Ok(ZetaValue {
        s,
        value: (a + b) / g,
        method: ZetaMethod::Phi,
    })
}

/// ζ_M(s) by the Dirichlet expansion Σ c_n r_n^{−s} with ±n pairing.
pub fn zeta_m_dirichlet(ftable: &FourierTable, s: Complex64, n_terms: usize) -> Result<ZetaValue> {
    if s.re <= 0.25 {
        return Err(Error::domain("dirichlet route needs Re s > 0.25"));
    }
    if n_terms >= ftable.len() {
        return Err(Error::limit("not enough Fourier coefficients in the table"));
    }
    let mut acc_re = Kahan::default();
    let mut acc_im = Kahan::default();
    let term = |n: i64| -> Complex64 {
        let r = vertical_point(n);
        // r^{-s} on the principal branch (Re r > 0 always)
        ftable.coeff(n) * (-s * r.ln()).exp()
    };
    let t0 = term(0);
    acc_re.add(t0.re);
    acc_im.add(t0.im);
    for n in 1..=n_terms as i64 {
        let t = term(n) + term(-n);
        acc_re.add(t.re);
        acc_im.add(t.im);
    }
    Ok(ZetaValue {
        s,
        value: Complex64::new(acc_re.value(), acc_im.value()),
        method: ZetaMethod::Dirichlet,
    })
}

/// One located zero of Z(t) = ζ_M(it)Γ(1+it) on the critical line.
#[derive(Clone, Debug)]
pub struct CriticalZero {
    pub t: f64,
    pub bracket_width: f64,
    pub z_left: f64,
    pub z_right: f64,
}

/// Scan [t0, t1] with the given step, bracket sign changes and bisect each
/// to 1e-8. Zeros are reported, never asserted complete.
pub fn zero_scan(
    kernel: &LogKernel,
    t0: f64,
    t1: f64,
    step: f64,
) -> Result<Vec<CriticalZero>> {
    if !(t0 < t1) || step <= 0.0 || t1 > 200.0 {
        return Err(Error::domain("scan range must satisfy t0 < t1 <= 200, step > 0"));
    }
    let count = ((t1 - t0) / step).ceil() as usize + 1;
    let vals = kernel.critical_sweep(t0, step, count);
    let mut zeros = Vec::new();
    for i in 1..count {
        let (a, b) = (vals[i - 1], vals[i]);
        if a == 0.0 || a * b >= 0.0 {
            continue;
        }
        let mut lo = t0 + (i - 1) as f64 * step;
        let mut hi = lo + step;
        let mut fl = a;
        let mut fh = b;
        while hi - lo > 1e-8 {
            let mid = 0.5 * (lo + hi);
            let fm = kernel.critical_z(mid);
            if fl * fm <= 0.0 {
                hi = mid;
                fh = fm;
            } else {
                lo = mid;
                fl = fm;
            }
        }
        zeros.push(CriticalZero {
            t: 0.5 * (lo + hi),
            bracket_width: hi - lo,
            z_left: fl,
            z_right: fh,
        });
    }
    Ok(zeros)
}

/// Mellin transform G*(s) = ∫₀^∞ G(1−z) z^{s−1} dz for real 0 < s < 1,
/// evaluated directly: the [0,1] piece under the regularizing substitution
/// z = v^{1/s}, the [1, Z] piece on a logarithmic scale, and the tail from
/// the decay G(1−z) = 1/z − G(1−1/z)/z².
pub fn mellin_direct(period: &PeriodFunction, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain("direct Mellin transform needs 0 < s < 1"));
    }
    let g = |x: f64| -> f64 {
        period
            .eval(Complex64::new(x, 0.0))
            .map(|v| v.re)
            .unwrap_or(f64::NAN)
    };
    let g1 = period.at_one();
    let dg1 = period.derivative_at_one();
    let head = adaptive_simpson(
        &|v: f64| {
            let eps = if v <= 0.0 { 0.0 } else { v.powf(1.0 / s) };
            if eps < 1e-6 {
                // boundary expansion keeps the evaluation off the cut
                g1 - dg1 * eps
            } else {
                g(1.0 - eps)
            }
        },
        0.0,
        1.0,
        1e-10,
        28,
    ) / s;
    let z_cut = 1e4f64;
    let mid = adaptive_simpson(
        &|u: f64| {
            let z = u.exp();
            g(1.0 - z) * (s * u).exp()
        },
        0.0,
        z_cut.ln(),
        1e-10,
        28,
    );
    let tail = z_cut.powf(s - 1.0) / (1.0 - s) - period.at_one() * z_cut.powf(s - 2.0) / (2.0 - s);
    Ok(head + mid + tail)
}

/// Closed form G*(s) = ζ_M(s−1) Γ(s) π / sin(πs).
pub fn mellin_closed(table: &MomentTable, kernel: &LogKernel, s: f64) -> Result<f64> {
    let z = zeta_m(table, kernel, Complex64::new(s - 1.0, 0.0))?;
    let g = gamma_complex(Complex64::new(s, 0.0))?;
    let v = z.value * g * std::f64::consts::PI / (std::f64::consts::PI * s).sin();
    Ok(v.re)
}

/// Residue of G*(s) at the integer s = L by third-order Richardson
/// extrapolation of (s − L)·G*(s) through the closed form.
pub fn mellin_residue(table: &MomentTable, kernel: &LogKernel, l: u32) -> Result<f64> {
    let lf = l as f64;
    let r = |eps: f64| -> Result<f64> { Ok(eps * mellin_closed(table, kernel, lf + eps)?) };
    let e = 2e-3;
    let (r1, r2, r4) = (r(e)?, r(0.5 * e)?, r(0.25 * e)?);
    let t1 = 2.0 * r2 - r1;
    let t2 = 2.0 * r4 - r2;
    Ok((4.0 * t2 - t1) / 3.0)
}

/// Eisenstein q-series π²/3 − 8π² Σ σ₁(n) e^{2πinz} on Im z ≥ 0.3.
pub fn eisenstein_g1(z: Complex64) -> Result<Complex64> {
    if z.im < 0.3 {
        return Err(Error::domain("eisenstein series needs Im z >= 0.3"));
    }
    let pi = std::f64::consts::PI;
    let q = (Complex64::new(0.0, TWO_PI) * z).exp();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 1..=200u64 {
        qn *= q;
        let sigma = (1..=n).filter(|d| n % d == 0).sum::<u64>() as f64;
        let term = sigma * qn;
        sum += term;
        if term.norm() < 1e-19 {
            break;
        }
    }
    Ok(pi * pi / 3.0 - 8.0 * pi * pi * sum)
}

/// Residual of the homogeneous three-term equation for
/// f₀ = G − (i/2π)G₁ in the upper half plane:
/// |−(1−z)^{−2} f₀(1/(1−z)) + 2 f₀(z+1) − f₀(z)|.
pub fn dpf_residual(period: &PeriodFunction, z: Complex64) -> Result<f64> {
    let f0 = |w: Complex64| -> Result<Complex64> {
        let g = period.eval(w)?;
        let e = eisenstein_g1(w)?;
        Ok(g - Complex64::new(0.0, 1.0) / TWO_PI * e)
    };
    let one = Complex64::new(1.0, 0.0);
    let a = f0(one / (one - z))?;
    let b = f0(z + 1.0)?;
    let c = f0(z)?;
    Ok((-a / ((one - z) * (one - z)) + 2.0 * b - c).norm())
}
