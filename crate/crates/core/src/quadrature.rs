//! Stieltjes integration against dF on [0,1] and [0,∞).
//!
//! The rule at depth r places nodes at the preimages of the odd dyadics
//! `(2k−1)/2^{r+1}` under ?(x), each with weight `2^{-(r+1)}`; that is the
//! measure-uniform midpoint rule (total mass of [0,1] under dF is 1/2).
//! Nodes are decoded once per depth with u64 continued-fraction arithmetic
//! and cached as floats.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use crate::contfrac::Rational;
use crate::error::{Error, Result};

/// Hard cap (memory) on cached quadrature depth.
pub const MAX_DEPTH: u8 = 26;

/// Invert ?(x) on the dyadic k/2^e in u64 arithmetic (k odd, 0 < k < 2^e).
///
/// Greedy peeling of `? = 2^{1-B1} - 2^{1-B2} + ...`; convergent numerators
/// stay below Fibonacci(e+2), far inside u64 range for any cacheable depth.
pub fn box_inverse_u64(mut k: u64, mut e: i64) -> (u64, u64) {
    debug_assert!(k % 2 == 1);
    let mut prev_b: i64 = 0;
    let (mut h_prev, mut h): (u64, u64) = (1, 0);
    let (mut q_prev, mut q): (u64, u64) = (0, 1);
    loop {
        let bits = 64 - k.leading_zeros() as i64;
        let (b, rem) = if k == 1 {
            (1 + e, 0u64)
        } else {
            (1 - (bits - e), (1u64 << bits) - k)
        };
        let a = (b - prev_b) as u64;
        prev_b = b;
        let h_next = a * h + h_prev;
        let q_next = a * q + q_prev;
        h_prev = h;
        h = h_next;
        q_prev = q;
        q = q_next;
        if rem == 0 {
            break;
        }
        let tz = rem.trailing_zeros();
        k = rem >> tz;
        e -= tz as i64;
    }
    (h, q)
}

fn node_cache() -> &'static Mutex<HashMap<u8, Arc<Vec<f64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u8, Arc<Vec<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Nodes of the depth-r rule, ascending, cached per depth.
pub fn nodes(r: u8) -> Result<Arc<Vec<f64>>> {
    if r > MAX_DEPTH {
        return Err(Error::limit(format!("quadrature depth {r} exceeds {MAX_DEPTH}")));
    }
    if let Some(v) = node_cache().lock().unwrap().get(&r) {
        return Ok(v.clone());
    }
    let count = 1u64 << r;
    let mut v = Vec::with_capacity(count as usize);
    for k in 1..=count {
        let (p, q) = box_inverse_u64(2 * k - 1, r as i64 + 1);
        v.push(p as f64 / q as f64);
    }
    let arc = Arc::new(v);
    node_cache().lock().unwrap().insert(r, arc.clone());
    Ok(arc)
}

/// The rule as exact data: nodes as reduced fractions with the uniform
/// weight 2^{-(r+1)}. Only sensible for small depths.
pub struct QuadratureRule {
    pub depth: u8,
    pub nodes: Vec<Rational>,
}

impl QuadratureRule {
    pub fn new(depth: u8) -> Result<Self> {
        if depth > 20 {
            return Err(Error::limit("exact rule materialization capped at depth 20"));
        }
        let count = 1u64 << depth;
        let nodes = (1..=count)
            .map(|k| {
                let (p, q) = box_inverse_u64(2 * k - 1, depth as i64 + 1);
                Rational::new(BigInt::from(p), BigInt::from(q))
            })
            .collect();
        Ok(QuadratureRule { depth, nodes })
    }

    pub fn weight(&self) -> Rational {
        Rational::new(BigInt::from(1), BigInt::from(1) << (self.depth + 1))
    }

    /// Exact total mass: (number of nodes) × weight.
    pub fn weight_sum(&self) -> Rational {
        Rational::new(
            BigInt::from(self.nodes.len() as u64),
            BigInt::from(1) << (self.depth + 1),
        )
    }
}

/// Neumaier-compensated accumulator; deterministic in ascending node order.
#[derive(Default, Clone, Copy)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// ∫₀¹ f dF at depth r: Σ f(node) 2^{-(r+1)}; error ≤ Lip(f)·2^{-(r+1)}
/// for Lipschitz f (in practice much better for smooth f).
pub fn integrate_unit(f: impl Fn(f64) -> f64, r: u8) -> Result<f64> {
    let pts = nodes(r)?;
    let mut acc = Kahan::default();
    for &x in pts.iter() {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::domain(format!("integrand not finite at node {x}")));
        }
        acc.add(v);
    }
    Ok(acc.value() * 2f64.powi(-(r as i32 + 1)))
}

/// ∫₀^∞ g dF at depth r via the symmetry reduction
/// ∫₀^∞ g dF = ∫₀¹ [g(x) + g(1/x)] dF(x).
pub fn integrate_halfline(g: impl Fn(f64) -> f64, r: u8) -> Result<f64> {
    let pts = nodes(r)?;
    let mut acc = Kahan::default();
    for &x in pts.iter() {
        let v = g(x) + g(1.0 / x);
        if !v.is_finite() {
            return Err(Error::domain(format!(
                "half-line integrand not finite at node {x}"
            )));
        }
        acc.add(v);
    }
    Ok(acc.value() * 2f64.powi(-(r as i32 + 1)))
}

/// Adaptive Simpson integration of a smooth f64 integrand.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

/// Chebyshev grid on [0,1] with barycentric interpolation (second-kind
/// points, so the barycentric weights are ±1 with halved ends).
#[derive(Clone, Debug)]
pub struct ChebGrid {
    pub points: Vec<f64>,
}

impl ChebGrid {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let points = (0..n)
            .map(|j| 0.5 * (1.0 - (std::f64::consts::PI * j as f64 / (n - 1) as f64).cos()))
            .collect();
        ChebGrid { points }
    }

    /// Barycentric evaluation of the interpolant through `vals`.
    pub fn eval(&self, vals: &[f64], x: f64) -> f64 {
        let n = self.points.len();
        debug_assert_eq!(vals.len(), n);
        let mut num = 0.0;
        let mut den = 0.0;
        let mut sign = 1.0;
        for j in 0..n {
            let d = x - self.points[j];
            if d == 0.0 {
                return vals[j];
            }
            let mut w = sign / d;
            if j == 0 || j == n - 1 {
                w *= 0.5;
            }
            num += w * vals[j];
            den += w;
            sign = -sign;
        }
        num / den
    }
}

/// One application of the averaging operator
/// `[S f](x) = Σ_{k≥1} 2^{-k} f(1/(x+k))` to a function given by values on
/// a Chebyshev grid; `terms` bounds the geometric sum.
pub fn apply_transfer_average(grid: &ChebGrid, vals: &[f64], terms: usize) -> Vec<f64> {
    grid.points
        .iter()
        .map(|&x| {
            let mut acc = 0.0;
            let mut w = 0.5;
            for k in 1..=terms {
                acc += w * grid.eval(vals, 1.0 / (x + k as f64));
                w *= 0.5;
            }
            acc
        })
        .collect()
}

/// Iterates of (1/2)[Sⁿ f](1/2); the sequence converges to T(f) = ∫₀¹ f dF
/// geometrically (rate = leading eigenvalue of the weight-2 operator).
pub fn transfer_average_trace(
    f: impl Fn(f64) -> f64,
    iterations: usize,
    degree: usize,
    terms: usize,
) -> Result<Vec<f64>> {
    if iterations > 60 {
        return Err(Error::limit("transfer averaging capped at 60 iterations"));
    }
    let grid = ChebGrid::new(degree);
    let mut vals: Vec<f64> = grid.points.iter().map(|&x| f(x)).collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("transfer averaging needs a finite integrand"));
    }
    let mut out = Vec::with_capacity(iterations + 1);
    out.push(0.5 * grid.eval(&vals, 0.5));
    for _ in 0..iterations {
        vals = apply_transfer_average(&grid, &vals, terms);
        let probe = 0.5 * grid.eval(&vals, 0.5);
        if !probe.is_finite() {
            return Err(Error::NoConvergence(
                "transfer averaging diverged (interpolation residual growth)".into(),
            ));
        }
        out.push(probe);
    }
    Ok(out)
}

/// T(f) estimate after n averaging steps.
pub fn transfer_average(f: impl Fn(f64) -> f64, iterations: usize) -> Result<f64> {
    let trace = transfer_average_trace(f, iterations, 40, 60)?;
    Ok(*trace.last().unwrap())
}

/// Solution of g − S g = f as Chebyshev values, with the achieved residual.
pub struct NeumannSolution {
    pub grid: ChebGrid,
    pub values: Vec<f64>,
    pub iterations: usize,
    pub residual_sup: f64,
}

impl NeumannSolution {
    pub fn eval(&self, x: f64) -> f64 {
        self.grid.eval(&self.values, x)
    }
}

/// Solve g − S g = f by the geometric series g = Σ Sⁿ f, which converges
/// exactly when the mean T(f) vanishes (otherwise the iterates approach the
/// constant 2 T(f) and the series diverges).
pub fn neumann_solve(f: impl Fn(f64) -> f64, tolerance: f64) -> Result<NeumannSolution> {
    let mean = integrate_unit(&f, 20)?;
    if mean.abs() > 1e-10 {
        return Err(Error::domain(format!(
            "neumann_solve needs T(f) = 0, got {mean:.3e}"
        )));
    }
    let degree = 40;
    let terms = 60;
    let grid = ChebGrid::new(degree);
    let mut term: Vec<f64> = grid.points.iter().map(|&x| f(x)).collect();
    let mut sum = term.clone();
    let mut iterations = 0;
    for _ in 0..200 {
        term = apply_transfer_average(&grid, &term, terms);
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
        iterations += 1;
        let sup = term.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if sup < tolerance {
            break;
        }
    }
    // residual check ‖(g − Sg) − f‖∞ on a fresh grid
    let sg = apply_transfer_average(&grid, &sum, terms);
    let mut residual_sup = 0.0f64;
    for i in 0..200 {
        let x = i as f64 / 199.0;
        let g = grid.eval(&sum, x);
        let sgx = grid.eval(&sg, x);
        residual_sup = residual_sup.max((g - sgx - f(x)).abs());
    }
    if residual_sup > 10.0 * tolerance {
        return Err(Error::NoConvergence(format!(
            "neumann residual {residual_sup:.3e} above 10×tolerance"
        )));
    }
    Ok(NeumannSolution {
        grid,
        values: sum,
        iterations,
        residual_sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn constant_has_exact_mass() {
        assert_eq!(integrate_unit(|_| 1.0, 10).unwrap(), 0.5);
        assert!((integrate_halfline(|_| 1.0, 10).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn first_moment_on_unit_interval() {
        // ∫₀¹ x dF = 1/4
        let v = integrate_unit(|x| x, 22).unwrap();
        assert!((v - 0.25).abs() < 1e-6, "got {v}");
    }

    #[test]
    fn halfline_first_moment_and_q1() {
        let v = integrate_halfline(|x| x, 22).unwrap();
        assert!((v - 1.5).abs() < 1e-4, "mean value: {v}");
        let q1 = integrate_halfline(|x| 2.0 * x - 3.0, 22).unwrap();
        assert!(q1.abs() < 1e-4, "Q1 annihilation: {q1}");
    }

    #[test]
    fn node_decode_agrees_with_exact_inverse() {
        use crate::minkowski::{qm_inverse, DyadicRational};
        for e in 2..=14i64 {
            for k in (1..(1u64 << e)).step_by(17) {
                let k = k | 1;
                let (p, q) = box_inverse_u64(k, e);
                let d = DyadicRational::new(BigInt::from(k), e as u32);
                let r = qm_inverse(&d).unwrap();
                assert_eq!(
                    r,
                    Rational::new(BigInt::from(p), BigInt::from(q)),
                    "mismatch at {k}/2^{e}"
                );
            }
        }
    }

    #[test]
    fn nodes_ascending_and_weights_sum() {
        let pts = nodes(12).unwrap();
        assert_eq!(pts.len(), 1 << 12);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        for r in [1u8, 4, 10, 16, 24] {
            // 2^r nodes × 2^-(r+1) = 1/2 exactly
            let total = Rational::new(BigInt::one() << r, BigInt::one() << (r + 1));
            assert_eq!(total, Rational::new(BigInt::one(), BigInt::from(2)));
        }
        let rule = QuadratureRule::new(8).unwrap();
        assert_eq!(rule.weight_sum(), Rational::new(BigInt::one(), BigInt::from(2)));
    }

    #[test]
    fn refinement_consistency() {
        for f in [|x: f64| x, |x: f64| x * x, |x: f64| x.exp()] {
            for r in [14u8, 16, 18] {
                let a = integrate_unit(f, r).unwrap();
                let b = integrate_unit(f, r + 2).unwrap();
                let lip = 3.0; // max |f'| on [0,1] among the three
                assert!((a - b).abs() <= lip * 2f64.powi(-(r as i32 + 1)));
            }
        }
    }

    #[test]
    fn transfer_average_basics() {
        let t0 = transfer_average_trace(|_| 1.0, 0, 40, 60).unwrap();
        assert!((t0[0] - 0.5).abs() < 1e-14);
        let v = transfer_average(|x| x, 25).unwrap();
        assert!((v - 0.25).abs() < 1e-10, "T(x) = {v}");
    }

    #[test]
    fn transfer_average_contraction_rate() {
        // successive errors shrink at the subleading spectral rate ≈ 0.2555,
        // safely below the coarse bound γ^{-2} ≈ 0.382
        let trace = transfer_average_trace(|x| x, 25, 40, 60).unwrap();
        let limit = *trace.last().unwrap();
        let mut ratios = Vec::new();
        for i in 3..12 {
            let e0 = (trace[i] - limit).abs();
            let e1 = (trace[i + 1] - limit).abs();
            if e0 > 1e-13 && e1 > 1e-13 {
                ratios.push(e1 / e0);
            }
        }
        assert!(!ratios.is_empty());
        for &r in &ratios {
            assert!(r < 0.382, "contraction ratio {r} above the coarse bound");
        }
        let mid = ratios[ratios.len() / 2];
        assert!((mid - 0.2555).abs() < 0.02, "observed rate {mid}");
    }

    #[test]
    fn neumann_solves_centered_linear() {
        // f = x − 1/2 has T(f) = 1/4 − 1/4 = 0
        let sol = neumann_solve(|x| x - 0.5, 1e-10).unwrap();
        assert!(sol.residual_sup < 1e-9, "residual {}", sol.residual_sup);
        // spot check the fixed identity g − Sg = f away from the grid
        let g = |x: f64| sol.eval(x);
        let mut sg = 0.0;
        let mut w = 0.5;
        for k in 1..=60 {
            sg += w * g(1.0 / (0.3 + k as f64));
            w *= 0.5;
        }
        assert!((g(0.3) - sg - (0.3 - 0.5)).abs() < 1e-9);
    }

    #[test]
    fn neumann_rejects_nonzero_mean() {
        assert!(neumann_solve(|_| 1.0, 1e-10).is_err());
        assert!(neumann_solve(|_| 0.0, 1e-10).is_ok());
    }

    /// Diagnostic: empirical convergence order of the midpoint rule.
    #[test]
    #[ignore]
    fn probe_convergence_rates() {
        println!("depth   err(x)        err(x^2)      err(e^x)");
        for r in 6..=22u8 {
            let e1 = integrate_unit(|x| x, r).unwrap() - 0.25;
            let e2 = integrate_unit(|x| x * x, r).unwrap();
            let e3 = integrate_unit(|x| x.exp(), r).unwrap();
            println!("{r:>5} {e1:>13.3e} {e2:>13.6} {e3:>13.6}");
        }
    }
}
