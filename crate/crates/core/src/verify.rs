//! The verification registry: every quantitative claim the library
//! reproduces, run against the production-size tables and reported as one
//! deterministic record per check.
//!
//! Two checks are expected to fail and are kept honest rather than
//! loosened; see `KNOWN_DIVERGENT` and the README notes: the printed
//! reference table of starred Fourier coefficients carries ~1e-5..7e-5
//! errors, and the scaled moment ratio m_L/(L^{1/4}C^{√L}) decreases
//! monotonically rather than increases.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::contfrac::{cw_generation_iter, newman_next, rat, stern, Rational};
use crate::error::Result;
use crate::minkowski::f_exact;
use crate::moments::{
    self, asym_constant, asym_ratio, check_cross_relations, integral_equation_residual,
    m_exp_at_vertical, q_polynomial, q_span_solve, MomentTable, SmoothedExpKernel,
};
use crate::periodfn::{
    eigen_equation_residual, g_lambda_eval, orthogonality, theorem_identities, PeriodFunction,
};
use crate::precision::PrecisionConfig;
use crate::quadrature::{integrate_unit, nodes, Kahan};
use crate::special::gamma_complex;
use crate::transfer::{eigen_polynomial, eigenfunction, spectrum, EigenPair};
use crate::zeta::{
    dpf_residual, eisenstein_g1, fourier_table, mellin_closed, mellin_direct, mellin_residue,
    vertical_point, zero_scan, zeta_m, zeta_m_dirichlet, FourierTable, LogKernel,
};

/// One verification record; the JSON schema of the machine-readable report.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyCheck {
    pub id: String,
    pub description: String,
    pub paper_anchor: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<VerifyCheck>,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Core,
    Full,
}

/// Check ids that measure claims of the source material known to be wrong;
/// they stay red in the report by design. The companion `*.observed`
/// entries assert the verified behavior.
pub const KNOWN_DIVERGENT: [&str; 2] = ["fourier.reference-table", "asym.increasing"];

/// Reference eigenvalues of the weight-2 operator (figure-2 captions).
pub const LAMBDA_REF: [f64; 6] = [
    0.25553210,
    -0.08892666,
    0.03261586,
    -0.01217621,
    0.00458154,
    -0.00173113,
];

/// Printed starred Fourier coefficients c*_0..c*_8 (reference table).
pub const CSTAR_REF: [(f64, f64); 9] = [
    (1.428159, 0.0),
    (-0.521907, 0.148754),
    (-0.334910, -0.017869),
    (0.128533, -0.026840),
    (-0.140524, -0.021886),
    (0.285790, 0.003744),
    (-0.262601, 0.004128),
    (0.198742, -0.013703),
    (-0.008479, 0.024012),
];

/// Production sizes: the moment table is trusted through L = 140 here,
/// which every tolerance below relies on.
const TABLE_DIM: usize = 240;
const TABLE_DIGITS: u32 = 380;
const EIGEN_COUNT: usize = 4;

pub struct Artifacts {
    pub cfg: PrecisionConfig,
    pub table: MomentTable,
    pub period: PeriodFunction,
    pub pairs: Vec<EigenPair>,
    pub log_kernel: LogKernel,
    pub exp_kernel: SmoothedExpKernel,
    pub ftable: FourierTable,
    pub spectrum: Vec<f64>,
    pub spectrum_seconds: f64,
    pub fourier_seconds: f64,
}

impl Artifacts {
    pub fn build(cfg: &PrecisionConfig) -> Result<Self> {
        let t0 = std::time::Instant::now();
        let spec = spectrum(64, cfg)?;
        let spectrum_seconds = t0.elapsed().as_secs_f64();
        let table = MomentTable::build(TABLE_DIM, TABLE_DIGITS)?;
        let period = PeriodFunction::new(&table);
        let mut pairs = Vec::new();
        for i in 1..=EIGEN_COUNT {
            pairs.push(eigenfunction(i, cfg)?);
        }
        let log_kernel = LogKernel::build(16, 40)?;
        let exp_kernel = SmoothedExpKernel::build(16, 40)?;
        let t1 = std::time::Instant::now();
        let ftable = fourier_table(&table, 2000, 18)?;
        let fourier_seconds = t1.elapsed().as_secs_f64();
        Ok(Artifacts {
            cfg: cfg.clone(),
            table,
            period,
            pairs,
            log_kernel,
            exp_kernel,
            ftable,
            spectrum: spec,
            spectrum_seconds,
            fourier_seconds,
        })
    }
}

struct Registry {
    checks: Vec<VerifyCheck>,
}

impl Registry {
    fn push(
        &mut self,
        id: &str,
        description: &str,
        anchor: &str,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
    ) {
        let residual = (lhs - rhs).abs();
        self.checks.push(VerifyCheck {
            id: id.into(),
            description: description.into(),
            paper_anchor: anchor.into(),
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual <= tolerance,
        });
    }

    /// Residual-style check: lhs is the measured residual, rhs 0.
    fn push_residual(&mut self, id: &str, description: &str, anchor: &str, res: f64, tol: f64) {
        self.checks.push(VerifyCheck {
            id: id.into(),
            description: description.into(),
            paper_anchor: anchor.into(),
            lhs: res,
            rhs: 0.0,
            residual: res,
            tolerance: tol,
            pass: res <= tol,
        });
    }

    /// Boolean check; residual is 0/1.
    fn push_bool(&mut self, id: &str, description: &str, anchor: &str, ok: bool) {
        self.checks.push(VerifyCheck {
            id: id.into(),
            description: description.into(),
            paper_anchor: anchor.into(),
            lhs: if ok { 1.0 } else { 0.0 },
            rhs: 1.0,
            residual: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: ok,
        });
    }
}

/// Run the registry. `Core` covers every numbered criterion; `Full` adds
/// the slow cross-validations (zero-scan refinement, Nyström spectrum,
/// deep L² partial sums).
pub fn run(suite: Suite, cfg: &PrecisionConfig) -> Result<VerifyReport> {
    let art = Artifacts::build(cfg)?;
    run_with(&art, suite)
}

pub fn run_with(art: &Artifacts, suite: Suite) -> Result<VerifyReport> {
    let mut reg = Registry { checks: Vec::new() };
    check_spectrum(&mut reg, art);
    check_fourier(&mut reg, art)?;
    check_moments(&mut reg, art);
    check_identities(&mut reg, art)?;
    check_functional_equations(&mut reg, art)?;
    check_zeta(&mut reg, art)?;
    check_mellin(&mut reg, art)?;
    check_asym(&mut reg, art);
    check_exact_combinatorics(&mut reg)?;
    check_eigen_polynomials(&mut reg, art)?;
    check_q_polynomials(&mut reg, art)?;
    check_dpf(&mut reg, art)?;
    check_scan(&mut reg, art, suite)?;
    check_bessel_equation(&mut reg, art)?;
    if suite == Suite::Full {
        check_full_extras(&mut reg, art)?;
    }
    let passed = reg.checks.iter().filter(|c| c.pass).count();
    let failed = reg.checks.len() - passed;
    Ok(VerifyReport {
        suite: match suite {
            Suite::Core => "core".into(),
            Suite::Full => "full".into(),
        },
        checks: reg.checks,
        passed,
        failed,
    })
}

fn check_spectrum(reg: &mut Registry, art: &Artifacts) {
    for (i, &expect) in LAMBDA_REF.iter().enumerate() {
        reg.push(
            &format!("fig2.lambda{}", i + 1),
            "weight-2 collocation eigenvalue at dim 64",
            "figure-2 captions",
            art.spectrum[i],
            expect,
            1e-6,
        );
    }
    reg.push_bool(
        "fig2.runtime",
        &format!(
            "spectrum at dim 64 in {:.2}s (< 10s)",
            art.spectrum_seconds
        ),
        "acceptance runtime bound",
        art.spectrum_seconds < 10.0,
    );
}

fn check_fourier(reg: &mut Registry, art: &Artifacts) -> Result<()> {
    // honest check against the printed table (known divergent)
    let mut worst = 0.0f64;
    for (n, &(re, im)) in CSTAR_REF.iter().enumerate() {
        let c = m_exp_at_vertical(&art.table, n as i64)?;
        worst = worst.max((c.re - re).abs()).max((c.im - im).abs());
    }
    reg.push_residual(
        "fourier.reference-table",
        "max component deviation of c*_0..8 from the printed reference",
        "section-8 coefficient table",
        worst,
        5e-6,
    );
    // three independent routes agree: series vs direct quadrature at depth 20
    let pts = nodes(20)?;
    let w = 2f64.powi(-21);
    let mut route_gap = 0.0f64;
    for n in 0..=8i64 {
        let series = m_exp_at_vertical(&art.table, n)?;
        let mut re = Kahan::default();
        let mut im = Kahan::default();
        for &x in pts.iter() {
            let amp = w * 2f64.powf(x);
            let ang = -2.0 * std::f64::consts::PI * n as f64 * x;
            re.add(amp * ang.cos());
            im.add(amp * ang.sin());
        }
        let quad = Complex64::new(2.0 * re.value(), 2.0 * im.value());
        let smooth = art.exp_kernel.m_exp(vertical_point(n));
        route_gap = route_gap
            .max((series - quad).norm())
            .max((series - smooth).norm().min((quad - smooth).norm()));
    }
    reg.push_residual(
        "fourier.observed",
        "series / direct-quadrature / smoothed-kernel agreement on c*_0..8",
        "independent evaluation routes",
        route_gap,
        1e-5,
    );
    reg.push_bool(
        "fourier.runtime",
        &format!("coefficient table built in {:.1}s (< 60s)", art.fourier_seconds),
        "acceptance runtime bound",
        art.fourier_seconds < 60.0,
    );
    Ok(())
}

fn check_moments(reg: &mut Registry, art: &Artifacts) {
    let t = &art.table;
    reg.push("moments.m1", "first unit-interval moment", "m1 = 1/2", t.m[1], 0.5, 1e-12);
    reg.push(
        "moments.bigm1",
        "mean value over the half line",
        "M1 = 3/2",
        t.big_m[1],
        1.5,
        1e-10,
    );
    reg.push(
        "moments.linear-relation",
        "2M3 − 9M2 + 3M1 = 3",
        "section-4 annihilator row n=3",
        2.0 * t.big_m[3] - 9.0 * t.big_m[2] + 3.0 * t.big_m[1],
        3.0,
        1e-8,
    );
    let rel = check_cross_relations(t);
    let worst_sym = rel
        .symmetry
        .iter()
        .map(|&(_, r)| r)
        .fold(0.0f64, f64::max);
    reg.push_residual(
        "moments.symmetry",
        "m_L = Σ (−1)^s C(L,s) m_s for L <= 20 (exact table arithmetic)",
        "symmetry of the generating function",
        worst_sym,
        1e-10,
    );
    reg.push_bool(
        "moments.hausdorff",
        &format!("Hausdorff positivity, min value {:.3e}", rel.hausdorff_min),
        "section-5 moment-problem inequalities",
        rel.hausdorff_all_positive,
    );
    let est2 = moments::est_relation_residual(t, 2, t.lmax);
    reg.push_residual(
        "moments.est-relation",
        "M2 from Σ C(s−1,1) m_s with tail model (relative)",
        "binomial change-of-basis relation",
        est2,
        1e-5,
    );
}

fn check_identities(reg: &mut Registry, art: &Artifacts) -> Result<()> {
    let rep = theorem_identities(&art.table, &art.pairs, art.cfg.quadrature_depth.min(22))?;
    reg.push_residual(
        "theorem5.iii",
        "Σ (−1)^{L−1} m_L (m_{L−1}+m_{L+1}) = 1/2",
        "integral identity (iii)",
        rep.alternating_sum,
        1e-10,
    );
    reg.push_residual(
        "theorem5.i",
        "eigen ratio ∫G_λF dx / ∫G_λ dx = λ/(λ+1) for the leading eigenvalue",
        "integral identity (i)",
        rep.ratio[0].1,
        1e-5,
    );
    let [a, b, c] = rep.log_values;
    reg.push_residual(
        "theorem5.ii",
        "three forms of the logarithmic integral agree",
        "integral identity (ii)",
        (a - b).abs().max((a - c).abs()).max((b - c).abs()),
        1e-6,
    );
    let worst_iv = rep
        .annihilation
        .iter()
        .map(|&(_, r)| r)
        .fold(0.0f64, f64::max);
    reg.push_residual(
        "theorem5.iv",
        "∫G_λ(−x)(1 − x²/λ) dF = 0 for the first four eigenfunctions (relative)",
        "integral identity (iv)",
        worst_iv,
        1e-6,
    );
    reg.push_residual(
        "orthogonality.12",
        "bilinear eigen-moment pairing of λ1 and λ2 (relative)",
        "pair-correlation identity",
        orthogonality(&art.pairs[0], &art.pairs[1]),
        1e-6,
    );
    Ok(())
}

fn check_functional_equations(reg: &mut Registry, art: &Artifacts) -> Result<()> {
    // 100 deterministic points, |z| <= 20, dist(z, (1,∞)) >= 0.1
    let mut worst_sim = 0.0f64;
    let mut worst_symm = 0.0f64;
    let mut accepted = 0usize;
    let mut i = 0usize;
    while accepted < 100 {
        i += 1;
        let re = -19.0 + 38.5 * ((i as f64) * 0.618_033_988_749_895).fract();
        let im = -16.0 + 32.0 * ((i as f64) * 0.414_213_562_373_095).fract();
        let z = Complex64::new(re, im);
        let cut = if z.re >= 1.0 {
            z.im.abs()
        } else {
            (z - Complex64::new(1.0, 0.0)).norm()
        };
        if z.norm() > 20.0 || z.norm() < 0.05 || cut < 0.1 {
            continue;
        }
        // arguments z+1 and 1/z must respect the cut guard too
        let z1 = z + 1.0;
        let zi = 1.0 / z;
        let cut1 = if z1.re >= 1.0 { z1.im.abs() } else { (z1 - 1.0).norm() };
        let cuti = if zi.re >= 1.0 { zi.im.abs() } else { (zi - 1.0).norm() };
        if cut1 < 1e-3 || cuti < 1e-3 {
            continue;
        }
        worst_sim = worst_sim.max(art.period.three_term_residual(z)?);
        worst_symm = worst_symm.max(art.period.symmetry_residual(z)?);
        accepted += 1;
    }
    reg.push_residual(
        "functeq.three-term",
        "merged three-term equation on 100 points, |z| <= 20",
        "equation (sim)",
        worst_sim,
        1e-8,
    );
    reg.push_residual(
        "functeq.symmetry",
        "symmetry property on the same points",
        "theorem-1 symmetry",
        worst_symm,
        1e-8,
    );
    let mut worst_eigen = 0.0f64;
    for pair in &art.pairs {
        for i in 0..=20 {
            let z = -1.0 + 0.8 * i as f64 / 20.0;
            worst_eigen = worst_eigen.max(eigen_equation_residual(pair, z)?);
        }
    }
    reg.push_residual(
        "eigen.equation",
        "eigen three-term equation for the first 4 eigenfunctions on [−1,−0.2]",
        "theorem-2 equation",
        worst_eigen,
        1e-7,
    );
    Ok(())
}

fn check_zeta(reg: &mut Registry, art: &Artifacts) -> Result<()> {
    let t = &art.table;
    let k = &art.log_kernel;
    let mut worst = 0.0f64;
    let mut fact = 1.0f64;
    for l in 1..=6usize {
        fact *= l as f64;
        let z = zeta_m(t, k, Complex64::new(l as f64, 0.0))?;
        worst = worst.max((z.value.re - t.big_m[l] / fact).abs());
    }
    reg.push_residual(
        "zeta.special-values",
        "ζ_M(L) = M_L / L! for L = 1..6",
        "theorem-6 special values",
        worst,
        1e-8,
    );
    let d = zeta_m_dirichlet(&art.ftable, Complex64::new(1.0, 0.0), art.ftable.len() - 1)?;
    reg.push(
        "zeta.dirichlet-cross",
        "Dirichlet route at s = 1 against M1 = 3/2",
        "definition (dir)",
        d.value.re,
        1.5,
        2e-3,
    );
    let mut worst_im = 0.0f64;
    for i in 0..20 {
        let tt = 0.8 + 1.9 * i as f64;
        let zv = zeta_m(t, k, Complex64::new(0.0, tt))?;
        let g = gamma_complex(Complex64::new(1.0, tt))?;
        worst_im = worst_im.max((zv.value * g).im.abs());
    }
    reg.push_residual(
        "zeta.reality",
        "Im[ζ_M(it)Γ(1+it)] on 20 samples",
        "critical-line reality",
        worst_im,
        1e-9,
    );
    let mut worst_d = 0.0f64;
    for l in 1..=4i32 {
        let h = 5e-3;
        let f = |x: f64| -> Result<f64> {
            Ok(zeta_m(t, k, Complex64::new(-l as f64 + x, 0.0))?.value.re)
        };
        let d1 = (8.0 * (f(h)? - f(-h)?) - (f(2.0 * h)? - f(-2.0 * h)?)) / (12.0 * h);
        let mut fct = 1.0;
        for j in 2..l {
            fct *= j as f64;
        }
        let expect = fct * t.big_m[l as usize];
        worst_d = worst_d.max((d1.abs() / expect - 1.0).abs());
    }
    reg.push_residual(
        "zeta.derivative-magnitude",
        "|ζ_M'(−L)| = (L−1)! M_L for L = 1..4 (relative)",
        "theorem-6 trivial-zero slopes",
        worst_d,
        1e-4,
    );
    // functional equation across the two routes at 10 points
    let mut worst_fe = 0.0f64;
    for i in 0..10 {
        let s = Complex64::new(0.3 + 0.07 * i as f64, 0.0);
        let lhs = zeta_m_dirichlet(&art.ftable, s, art.ftable.len() - 1)?.value
            * gamma_complex(s)?;
        let rhs = -(zeta_m(t, k, -s)?.value) * gamma_complex(-s)?;
        worst_fe = worst_fe.max((lhs - rhs).norm());
    }
    reg.push_residual(
        "zeta.functional-equation",
        "ζ_M(s)Γ(s) = −ζ_M(−s)Γ(−s), Dirichlet vs moment-series routes",
        "theorem-6 functional equation",
        worst_fe,
        1e-3,
    );
    Ok(())
}

fn check_mellin(reg: &mut Registry, art: &Artifacts) -> Result<()> {
    let mut worst = 0.0f64;
    for &s in &[0.3, 0.5, 0.7] {
        let direct = mellin_direct(&art.period, s)?;
        let closed = mellin_closed(&art.table, &art.log_kernel, s)?;
        worst = worst.max((direct - closed).abs());
    }
    reg.push_residual(
        "mellin.identity",
        "direct Mellin transform vs ζ_M(s−1)Γ(s)π/sin(πs) at s = 0.3, 0.5, 0.7",
        "proposition-4 identity",
        worst,
        1e-6,
    );
    let r1 = mellin_residue(&art.table, &art.log_kernel, 1)?;
    reg.push(
        "mellin.residue1",
        "residue at s = 1 equals (−1)^1 M_0 = −1",
        "proposition-4 poles",
        r1,
        -1.0,
        1e-6,
    );
    let r2 = mellin_residue(&art.table, &art.log_kernel, 2)?;
    reg.push(
        "mellin.residue2",
        "residue at s = 2 equals (−1)^2 M_1 = 3/2",
        "proposition-4 poles",
        r2,
        1.5,
        1e-6,
    );
    Ok(())
}

fn check_asym(reg: &mut Registry, art: &Artifacts) {
    let c = asym_constant();
    reg.push(
        "asym.constant",
        "C = e^{−2√log2} prints as 0.18917",
        "theorem-3 constant",
        c,
        0.18917,
        5e-6,
    );
    let r = asym_ratio(&art.table, 61);
    let mut increasing = true;
    let mut decreasing = true;
    for i in 2..r.len() {
        increasing &= r[i] > r[i - 1];
        decreasing &= r[i] < r[i - 1];
    }
    // claim as stated (known divergent): the ratio increases on 2..60
    reg.push_bool(
        "asym.increasing",
        "m_L/(L^{1/4}C^{√L}) strictly increasing for 2 <= L <= 60 (as stated)",
        "section-5 monotonicity remark",
        increasing,
    );
    reg.push_bool(
        "asym.observed",
        "measured behavior: the ratio decreases monotonically towards its limit, \
         and m_L/C^{√L} increases",
        "measured moment table",
        decreasing && {
            let mut inc = true;
            for l in 2..60usize {
                let a = art.table.m[l] / c.powf((l as f64).sqrt());
                let b = art.table.m[l + 1] / c.powf(((l + 1) as f64).sqrt());
                inc &= b > a;
            }
            inc
        },
    );
    let v = art.table.m[60].ln() / 60f64.sqrt();
    reg.push_bool(
        "asym.log-window",
        &format!("log m_60/√60 = {v:.4} inside (−2√log2, −1.2)"),
        "theorem-3 bracketing",
        v > -2.0 * std::f64::consts::LN_2.sqrt() && v < -1.2,
    );
}

fn check_exact_combinatorics(reg: &mut Registry) -> Result<()> {
    let expect: [u64; 17] = [0, 1, 1, 2, 1, 3, 2, 3, 1, 4, 3, 5, 2, 5, 3, 4, 1];
    let stern_ok = expect
        .iter()
        .enumerate()
        .all(|(n, &e)| stern(n as u64) == e);
    reg.push_bool(
        "exact.stern",
        "first 17 values of the diatomic sequence",
        "section-1 sequence list",
        stern_ok,
    );
    let mut sums_ok = true;
    for n in 2..=12u32 {
        let expect = Rational::from(num_bigint::BigInt::from(3i64 * (1i64 << (n - 2)))) - rat(1, 2);
        sums_ok &= crate::contfrac::generation_sum(n)? == expect;
    }
    reg.push_bool(
        "exact.generation-sums",
        "Σ generation n = 3·2^{n−2} − 1/2 for n = 2..12 (exact)",
        "section-10 sum identity",
        sums_ok,
    );
    let mut image_ok = true;
    for n in 1..=12u32 {
        let mut images: Vec<Rational> = cw_generation_iter(n)
            .map(|(a, b)| f_exact(&rat(a as i64, b as i64)).unwrap().value())
            .collect();
        images.sort();
        let want: Vec<Rational> = (0..1u64 << (n - 1))
            .map(|i| rat((2 * i + 1) as i64, 1i64 << n))
            .collect();
        image_ok &= images == want;
    }
    reg.push_bool(
        "exact.tree-image",
        "distribution image of generation n is the odd dyadics k/2^n, n <= 12 (exact)",
        "section-10 image tree",
        image_ok,
    );
    let mut x = rat(1, 1);
    let mut newman_ok = true;
    'outer: for n in 1..=14u32 {
        for (a, b) in cw_generation_iter(n) {
            if x != Rational::new(num_bigint::BigInt::from(a), num_bigint::BigInt::from(b)) {
                newman_ok = false;
                break 'outer;
            }
            x = newman_next(&x)?;
        }
    }
    reg.push_bool(
        "exact.newman",
        "single-orbit recurrence walks the tree in order for 2^14 − 1 steps (exact)",
        "section-1 recurrence",
        newman_ok,
    );
    let mut first_moment_ok = true;
    for n in 1..=12u32 {
        let lhs = moments::empirical_first_moment_exact(n)?;
        let rhs = rat(3, 2)
            - Rational::new(num_bigint::BigInt::from(1), num_bigint::BigInt::from(1) << n);
        first_moment_ok &= lhs == rhs;
    }
    reg.push_bool(
        "exact.empirical-mean",
        "2^{1−n} Σ generation n = 3/2 − 2^{−n} (exact)",
        "finite-generation mean",
        first_moment_ok,
    );
    Ok(())
}

fn check_eigen_polynomials(reg: &mut Registry, art: &Artifacts) -> Result<()> {
    let p1 = eigen_polynomial(1)?;
    let p2 = eigen_polynomial(2)?;
    let p3 = eigen_polynomial(3)?;
    let p4 = eigen_polynomial(4)?;
    let table_ok = p1.coeffs == vec![rat(-1, 4), rat(1, 1)]
        && p2.coeffs == vec![rat(1, 15), rat(-3, 5), rat(1, 1)]
        && p3.coeffs == vec![rat(-7, 352), rat(3, 11), rat(-21, 22), rat(1, 1)]
        && p4.coeffs[0] == rat(37, 5865);
    reg.push_bool(
        "eigenpoly.table",
        "P1..P4 match the point-spectrum table exactly",
        "section-6 polynomial table",
        table_ok,
    );
    // ‖S(P_n∘F) − δ_n P_n∘F‖∞ on 50 samples, operator truncated at 64 terms
    let eps = art.cfg.truncation_eps;
    let mut worst = 0.0f64;
    for n in 1..=4usize {
        let p = eigen_polynomial(n)?;
        let delta = p.delta.numer().to_string().parse::<f64>().unwrap()
            / p.delta.denom().to_string().parse::<f64>().unwrap();
        for i in 0..50 {
            let x = (i as f64 + 0.5) / 50.0;
            let mut s = 0.0;
            let mut w = 0.5;
            for k in 1..=64u32 {
                let f = crate::minkowski::f_real(1.0 / (x + k as f64), eps)?;
                s += w * p.eval_f64(f);
                w *= 0.5;
            }
            let direct = delta * p.eval_f64(crate::minkowski::f_real(x, eps)?);
            worst = worst.max((s - direct).abs());
        }
    }
    reg.push_residual(
        "eigenpoly.point-spectrum",
        "S(P_n∘F) = δ_n P_n∘F on 50 samples, n <= 4",
        "proposition-2 eigenfunctions",
        worst,
        1e-10,
    );
    Ok(())
}

fn check_q_polynomials(reg: &mut Registry, art: &Artifacts) -> Result<()> {
    let q1 = q_polynomial(1)?;
    let q2 = q_polynomial(2)?;
    let q5 = q_polynomial(5)?;
    let table_ok = q1.coeffs == vec![rat(-3, 1), rat(2, 1)]
        && q2.coeffs == q1.coeffs
        && q5.coeffs
            == vec![
                rat(-3, 1),
                rat(5, 1),
                rat(-30, 1),
                rat(10, 1),
                rat(-15, 1),
                rat(2, 1),
            ];
    reg.push_bool(
        "qpoly.table",
        "annihilator rows match the section-4 table exactly (Q2 = Q1 included)",
        "section-4 polynomial table",
        table_ok,
    );
    let mut recip_ok = true;
    for n in 1..=8usize {
        recip_ok &= q_polynomial(2 * n)?.hat_is_reciprocal();
    }
    reg.push_bool(
        "qpoly.reciprocity",
        "(Q_{2n}+3)/x is palindromic for n <= 8 (exact)",
        "proposition-1 (iii)",
        recip_ok,
    );
    let mut span_ok = true;
    for n in 2..=4usize {
        let c = q_span_solve(n)?;
        let target = q_polynomial(2 * n)?;
        let mut acc = vec![Rational::zero(); target.coeffs.len()];
        for (k, ck) in c.iter().enumerate() {
            let b = q_polynomial(2 * (k + 1) - 1)?;
            for (d, bc) in b.coeffs.iter().enumerate() {
                acc[d] += ck.clone() * bc.clone();
            }
        }
        span_ok &= acc == target.coeffs;
    }
    reg.push_bool(
        "qpoly.span",
        "Q4, Q6, Q8 expand exactly over the odd annihilators",
        "proposition-1 (i)",
        span_ok,
    );
    let mut worst = 0.0f64;
    for n in 1..=8usize {
        worst = worst.max(q_polynomial(n)?.moment_residual(&art.table).abs());
    }
    reg.push_residual(
        "qpoly.annihilation",
        "Σ coeffs(Q_n)·M = 0 for n <= 8 on the extended table",
        "proposition-1 (iv)",
        worst,
        1e-6,
    );
    Ok(())
}

fn check_dpf(reg: &mut Registry, art: &Artifacts) -> Result<()> {
    let g1 = eisenstein_g1(Complex64::new(0.0, 1.0))?;
    reg.push(
        "dpf.fixed-point",
        "Eisenstein value at the elliptic fixed point equals π",
        "modular transformation law",
        g1.re,
        std::f64::consts::PI,
        1e-9,
    );
    let mut worst = g1.im.abs();
    for &(re, im) in &[(-0.5, 2.0), (0.0, 1.0), (0.3, 1.5), (-0.3, 1.8), (0.2, 3.0)] {
        worst = worst.max(dpf_residual(&art.period, Complex64::new(re, im))?);
    }
    reg.push_residual(
        "dpf.homogeneous",
        "homogeneous three-term residual of G − (i/2π)G₁ at 5 points, Im z >= 1",
        "section-10 dyadic period functions",
        worst,
        1e-6,
    );
    Ok(())
}

fn check_scan(reg: &mut Registry, art: &Artifacts, suite: Suite) -> Result<()> {
    let z0 = art.log_kernel.critical_z(0.0);
    reg.push(
        "scan.z0",
        "Z(0) equals the total mass",
        "critical line normalization",
        z0,
        1.0,
        1e-10,
    );
    let kernel = LogKernel::build(14, 24)?;
    let zeros = zero_scan(&kernel, 1.5, 90.0, 0.05)?;
    reg.push_bool(
        "scan.bracketing",
        &format!(
            "{} zeros located in [1.5, 90], every bracket below 1e-8",
            zeros.len()
        ),
        "figure-4 sign changes",
        !zeros.is_empty()
            && zeros
                .iter()
                .all(|z| z.bracket_width <= 1e-8 && z.z_left * z.z_right <= 0.0),
    );
    // |Z(t)| <= Z(0) along the scan
    let bound_ok = {
        let vals = kernel.critical_sweep(1.5, 0.05, 1771);
        vals.iter().all(|v| v.abs() <= z0 + 1e-9)
    };
    reg.push_bool(
        "scan.bound",
        "|Z(t)| <= Z(0) across the window",
        "vertical-strip bound",
        bound_ok,
    );
    if suite == Suite::Full {
        let refined_kernel = LogKernel::build(16, 28)?;
        let refined = zero_scan(&refined_kernel, 1.5, 90.0, 0.025)?;
        let stable = refined.len() == zeros.len()
            && zeros
                .iter()
                .zip(&refined)
                .all(|(a, b)| (a.t - b.t).abs() < 2e-3);
        reg.push_bool(
            "scan.stability",
            &format!(
                "zero list stable under step halving and depth+2 ({} zeros)",
                zeros.len()
            ),
            "refinement cross-check",
            stable,
        );
    }
    Ok(())
}

fn check_bessel_equation(reg: &mut Registry, art: &Artifacts) -> Result<()> {
    let mut worst = 0.0f64;
    for &s in &[1.0, 4.0] {
        worst = worst.max(integral_equation_residual(&art.table, &art.exp_kernel, s)?);
    }
    reg.push_residual(
        "integral-equation.residual",
        "Bessel-kernel integral equation residual at s = 1 and 4",
        "equation (integ)",
        worst,
        1e-4,
    );
    Ok(())
}

fn check_full_extras(reg: &mut Registry, art: &Artifacts) -> Result<()> {
    let nys = crate::transfer::nystrom_spectrum(160)?;
    reg.push(
        "nystrom.lambda1",
        "leading eigenvalue of the symmetric Bessel kernel",
        "equation (fred)",
        nys[0],
        0.2555,
        1e-3,
    );
    reg.push_bool(
        "nystrom.lambda2-sign",
        "second kernel eigenvalue is negative",
        "figure-2 captions",
        nys[1] < 0.0,
    );
    // quadrature vs solve cross-check of the second moment
    let m2_quad = 2.0 * integrate_unit(|x| x * x, 22)?;
    reg.push(
        "quad.m2-cross",
        "second moment by measure quadrature vs operator solve",
        "independent quadrature oracle",
        m2_quad,
        art.table.m[2],
        1e-5,
    );
    let eps = art.cfg.truncation_eps;
    let l2a = crate::zeta::psi_fourier_l2(&art.ftable, 8, eps)?;
    let l2b = crate::zeta::psi_fourier_l2(&art.ftable, 64, eps)?;
    reg.push_bool(
        "fourier.l2-decrease",
        "L² distance of the partial Fourier sums decreases (N = 8 vs 64)",
        "square-integrable remainder",
        l2b.distance_sq < l2a.distance_sq
            && l2b.coeff_energy <= l2b.psi_norm_sq + 1e-6,
    );
    let m1f = crate::zeta::moment_from_fourier(&art.ftable, 1, art.ftable.len() - 1)?;
    reg.push(
        "fourier.moment-sum",
        "M1 from the coefficient expansion (slow conditional convergence)",
        "proposition (sum)",
        m1f,
        1.5,
        2e-3,
    );
    // eigenvalue gauge ratio for the leading pair
    let p1 = &art.pairs[0];
    let g0 = g_lambda_eval(p1, Complex64::new(0.0, 0.0))?.re;
    reg.push(
        "eigen.gauge-ratio",
        "G_λ(0)/G_λ(−1) = (1 + 1/λ)/2 for the leading eigenvalue",
        "section-2 value relation",
        g0,
        0.5 * (1.0 + 1.0 / p1.lambda),
        1e-7,
    );
    Ok(())
}

/// Pretty one-line rendering used by the CLI and the acceptance suite.
pub fn format_check(c: &VerifyCheck) -> String {
    format!(
        "[{}] {:28} residual {:.3e} (tol {:.1e})  {}",
        if c.pass { "PASS" } else { "FAIL" },
        c.id,
        c.residual,
        c.tolerance,
        c.description
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_divergent_list_is_stable() {
        assert_eq!(KNOWN_DIVERGENT.len(), 2);
        assert!(KNOWN_DIVERGENT.contains(&"asym.increasing"));
    }

    #[test]
    fn reference_constants_sane() {
        assert_eq!(LAMBDA_REF.len(), 6);
        assert_eq!(CSTAR_REF.len(), 9);
        assert!((LAMBDA_REF[0] - 0.2555321).abs() < 1e-7);
    }
}
