//! General fractional integrals and derivatives on h-series, the sampled
//! (product-integration) path, and fundamental-theorem checks.

use crate::error::{Error, Result};
use crate::hseries::{HSeries, TruncationPolicy, MERGE_TOL};
use crate::kernels::SoninePair;
use crate::specfun::{incomplete_beta, ln_gamma};
use num_complex::Complex64 as C64;
use std::fmt;
use std::str::FromStr;

/// n-fold general fractional integral κⁿ * f.
pub fn gfi(kappa: &HSeries, f: &HSeries, n: u32) -> Result<HSeries> {
    Ok(kappa.power(n)?.convolve(f))
}

/// n-fold Caputo-type derivative kⁿ * f⁽ⁿ⁾.
///
/// When f⁽ⁿ⁾ leaves C₋₁ (some intermediate exponent drops below 1) but f has
/// no exponents below 1, the regularized form dⁿ/dtⁿ (kⁿ * [f - Σ_{j<n} cⱼh_{j+1}])
/// is used instead, where cⱼ are the h_{j+1} coefficients of f. Both agree
/// whenever both are defined.
pub fn gfd_caputo(pair: &SoninePair, f: &HSeries, n: u32, policy: TruncationPolicy) -> Result<HSeries> {
    check_n(n)?;
    let kn = pair.k_lowered(policy)?.power(n)?;
    match f.differentiate_n(n) {
        Ok(d) => Ok(kn.convolve(&d)),
        Err(direct) => {
            if f.min_exponent().is_some_and(|p| p < 1.0 - MERGE_TOL) {
                return Err(direct);
            }
            let reg = regularize(f, n);
            kn.convolve(&reg).differentiate_n(n).map_err(|_| direct)
        }
    }
}

/// f - Σ_{j<n} f⁽ʲ⁾(0)·h_{j+1}, read off from the integer-exponent terms.
fn regularize(f: &HSeries, n: u32) -> HSeries {
    let mut poly = HSeries::zero_with(f.policy());
    for j in 0..n {
        let c = f.coefficient((j + 1) as f64);
        if c != C64::new(0.0, 0.0) {
            poly = poly.add(&HSeries::monomial(c, (j + 1) as f64));
        }
    }
    f.sub(&poly)
}

/// n-fold Riemann-Liouville-type derivative dⁿ/dtⁿ (kⁿ * f).
pub fn gfd_rl(pair: &SoninePair, f: &HSeries, n: u32, policy: TruncationPolicy) -> Result<HSeries> {
    check_n(n)?;
    let g = pair.k_lowered(policy)?.power(n)?.convolve(f);
    g.differentiate_n(n)
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::usage("operator order n must be >= 1"))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// D(I f) = f.
    Ft1Rl,
    /// *D(I f) = f for f = kⁿ * φ.
    Ft1C,
    /// I(*D f) = f - Σ f⁽ʲ⁾(0)h_{j+1}.
    Ft2C,
    /// I(D f) = f when (kⁿ * f)⁽ʲ⁾(0) = 0.
    Ft2Rl,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::Ft1Rl => "FT1-RL",
            Theorem::Ft1C => "FT1-C",
            Theorem::Ft2C => "FT2-C",
            Theorem::Ft2Rl => "FT2-RL",
        })
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Theorem> {
        match s.to_ascii_uppercase().as_str() {
            "FT1-RL" => Ok(Theorem::Ft1Rl),
            "FT1-C" => Ok(Theorem::Ft1C),
            "FT2-C" => Ok(Theorem::Ft2C),
            "FT2-RL" => Ok(Theorem::Ft2Rl),
            _ => Err(Error::usage(format!("unknown theorem '{s}' (FT1-RL, FT1-C, FT2-C, FT2-RL)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FtReport {
    pub theorem: Theorem,
    pub n: u32,
    /// max over the grid of |lhs - rhs|.
    pub residual: f64,
    /// Largest truncation tail estimate of the difference series on the grid.
    pub tail_bound: f64,
    pub grid: Vec<f64>,
}

/// Checks one fundamental theorem on `f` over `grid`. Inadmissible inputs
/// are reported as domain errors.
pub fn verify_ft(
    pair: &SoninePair,
    f: &HSeries,
    theorem: Theorem,
    n: u32,
    grid: &[f64],
    policy: TruncationPolicy,
) -> Result<FtReport> {
    check_n(n)?;
    let kappa = pair.kappa_series(policy)?;
    let (lhs, rhs) = match theorem {
        Theorem::Ft1Rl => (gfd_rl(pair, &gfi(&kappa, f, n)?, n, policy)?, f.clone()),
        Theorem::Ft1C => (gfd_caputo(pair, &gfi(&kappa, f, n)?, n, policy)?, f.clone()),
        Theorem::Ft2C => {
            let mut rhs = f.clone();
            for j in 0..n {
                let c = f.derivative_at_zero(j)?;
                if c != C64::new(0.0, 0.0) {
                    rhs = rhs.sub(&HSeries::monomial(c, (j + 1) as f64));
                }
            }
            let d = f.differentiate_n(n)?;
            let lhs = gfi(&kappa, &pair.k_lowered(policy)?.power(n)?.convolve(&d), n)?;
            (lhs, rhs)
        }
        Theorem::Ft2Rl => {
            let g = pair.k_lowered(policy)?.power(n)?.convolve(f);
            for j in 0..n {
                let v = g.derivative_at_zero(j)?;
                if v.norm() > 1e-12 {
                    return Err(Error::domain(format!(
                        "FT2-RL needs (k^n * f)^({j})(0) = 0, found {v}"
                    )));
                }
            }
            let lhs = gfi(&kappa, &g.differentiate_n(n)?, n)?;
            (lhs, f.clone())
        }
    };
    let diff = lhs.sub(&rhs);
    let mut residual: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for &t in grid {
        let ev = diff.evaluate(t)?;
        residual = residual.max(ev.value.norm());
        tail = tail.max(ev.tail_bound);
    }
    Ok(FtReport {
        theorem,
        n,
        residual,
        tail_bound: tail,
        grid: grid.to_vec(),
    })
}

/// f(t) = t^{p-1}·f₁(t) with f₁ piecewise linear between the nodes and
/// linearly extrapolated on [0, t₁].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    p: f64,
    nodes: Vec<f64>,
    f1: Vec<C64>,
}

impl SampledFunction {
    /// From samples of the regular factor f₁.
    pub fn new(p: f64, nodes: Vec<f64>, f1: Vec<C64>) -> Result<SampledFunction> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::domain(format!("p must lie in (0,1], got {p}")));
        }
        if nodes.len() < 2 {
            return Err(Error::usage("a sampled function needs at least 2 nodes"));
        }
        if nodes.len() != f1.len() {
            return Err(Error::usage("nodes and values differ in length"));
        }
        if !(nodes[0] > 0.0) || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::usage("nodes must be positive and strictly increasing"));
        }
        Ok(SampledFunction { p, nodes, f1 })
    }

    /// Samples `f` itself at the nodes.
    pub fn from_fn(p: f64, nodes: Vec<f64>, f: impl Fn(f64) -> C64) -> Result<SampledFunction> {
        let f1 = nodes.iter().map(|&t| f(t) * t.powf(1.0 - p)).collect();
        Self::new(p, nodes, f1)
    }

    pub fn from_hseries(s: &HSeries, nodes: Vec<f64>) -> Result<SampledFunction> {
        let p = s.min_exponent().unwrap_or(1.0).min(1.0);
        let vals = nodes.iter().map(|&t| s.eval(t)).collect::<Result<Vec<_>>>()?;
        let f1 = nodes.iter().zip(vals).map(|(&t, v)| v * t.powf(1.0 - p)).collect();
        Self::new(p, nodes, f1)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn f1(&self) -> &[C64] {
        &self.f1
    }

    /// f at the nodes.
    pub fn values(&self) -> Vec<C64> {
        self.nodes
            .iter()
            .zip(&self.f1)
            .map(|(&t, &v)| v * t.powf(self.p - 1.0))
            .collect()
    }

    fn f1_at(&self, t: f64) -> C64 {
        let j = match self.nodes.partition_point(|&x| x <= t) {
            0 => 0,
            k if k >= self.nodes.len() => self.nodes.len() - 2,
            k => k - 1,
        };
        let (t0, t1) = (self.nodes[j], self.nodes[j + 1]);
        let s = (self.f1[j + 1] - self.f1[j]) / (t1 - t0);
        self.f1[j] + s * (t - t0)
    }

    /// Value of the represented function on (0, t_N].
    pub fn eval(&self, t: f64) -> Result<C64> {
        let last = *self.nodes.last().unwrap();
        if !(t > 0.0) || t > last * (1.0 + 1e-12) {
            return Err(Error::domain(format!("t = {t} outside (0, {last}]")));
        }
        Ok(self.f1_at(t) * t.powf(self.p - 1.0))
    }

    /// CSV with header `t,re,im` holding the values of f at the nodes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re,im\n");
        for (t, v) in self.nodes.iter().zip(self.values()) {
            out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", t, v.re, v.im));
        }
        out
    }
}

/// Graded mesh tᵢ = T·(i/N)^γ, i = 1..N, with γ = 2/p for singularity order p.
pub fn graded_mesh(t_max: f64, n: usize, p: f64) -> Vec<f64> {
    let gamma = 2.0 / p.min(1.0);
    (1..=n).map(|i| t_max * (i as f64 / n as f64).powf(gamma)).collect()
}

/// Linear pieces of f₁ as (a, b, c, d): f₁(τ) = c + dτ on [a, b].
fn pieces(f: &SampledFunction, upto: usize) -> Vec<(f64, f64, C64, C64)> {
    let mut out = Vec::with_capacity(upto + 1);
    let line = |j: usize| {
        let (t0, t1) = (f.nodes[j], f.nodes[j + 1]);
        let s = (f.f1[j + 1] - f.f1[j]) / (t1 - t0);
        (f.f1[j] - s * t0, s)
    };
    let (c, d) = line(0);
    out.push((0.0, f.nodes[0], c, d));
    for j in 0..upto {
        let (c, d) = line(j);
        out.push((f.nodes[j], f.nodes[j + 1], c, d));
    }
    out
}

/// GFI of sampled data by product integration. Terms of κ with exponent
/// below 2 are integrated exactly against τ^{p-1}·(linear) on every piece
/// via incomplete Beta functions; the smooth remainder of κ is folded into
/// the linear interpolant.
pub fn gfi_sampled(kappa: &HSeries, f: &SampledFunction) -> Result<SampledFunction> {
    let p_k = kappa
        .min_exponent()
        .ok_or_else(|| Error::domain("kernel series is empty"))?;
    if !(p_k > 0.0 && p_k < 1.0) {
        return Err(Error::domain(format!("kernel order must lie in (0,1), got {p_k}")));
    }
    convolve_sampled(kappa, f)
}

/// Product-integration convolution of any non-empty h-series with sampled data.
pub(crate) fn convolve_sampled(kappa: &HSeries, f: &SampledFunction) -> Result<SampledFunction> {
    let p_k = kappa
        .min_exponent()
        .ok_or_else(|| Error::domain("kernel series is empty"))?;
    let (sing, smooth): (Vec<&crate::hseries::HTerm>, Vec<_>) = kappa.terms().iter().partition(|t| t.exponent < 2.0);
    let pf = f.p;
    let p_out = (p_k + pf).min(1.0);
    let mut out = Vec::with_capacity(f.nodes.len());
    for (i, &ti) in f.nodes.iter().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        let ps = pieces(f, i);
        for term in &sing {
            let beta = term.exponent;
            let scale0 = ((beta + pf - 1.0) * ti.ln() - ln_gamma(beta)).exp();
            let scale1 = scale0 * ti;
            let mut s = C64::new(0.0, 0.0);
            for &(a, b, c, d) in &ps {
                let (ua, ub) = (a / ti, (b / ti).min(1.0));
                let m0 = incomplete_beta(pf, beta, ub) - incomplete_beta(pf, beta, ua);
                let m1 = incomplete_beta(pf + 1.0, beta, ub) - incomplete_beta(pf + 1.0, beta, ua);
                s += c * (scale0 * m0) + d * (scale1 * m1);
            }
            acc += term.coeff * s;
        }
        if !smooth.is_empty() {
            let g = |x: f64| -> C64 {
                smooth
                    .iter()
                    .map(|t| t.coeff * ((t.exponent - 1.0) * x.ln() - ln_gamma(t.exponent)).exp())
                    .sum()
            };
            // φ(τ) = g(tᵢ-τ)·f₁(τ), linear between 0, t₁, ..., tᵢ
            let mut knots = vec![0.0];
            knots.extend_from_slice(&f.nodes[..=i]);
            let phi: Vec<C64> = knots
                .iter()
                .map(|&tau| {
                    let gv = if ti - tau > 0.0 { g(ti - tau) } else { C64::new(0.0, 0.0) };
                    gv * f.f1_at(tau)
                })
                .collect();
            for w in 0..knots.len() - 1 {
                let (a, b) = (knots[w], knots[w + 1]);
                let slope = (phi[w + 1] - phi[w]) / (b - a);
                let c = phi[w] - slope * a;
                let m0 = (b.powf(pf) - a.powf(pf)) / pf;
                let m1 = (b.powf(pf + 1.0) - a.powf(pf + 1.0)) / (pf + 1.0);
                acc += c * m0 + slope * m1;
            }
        }
        out.push(acc * ti.powf(1.0 - p_out));
    }
    SampledFunction::new(p_out, f.nodes.clone(), out)
}
