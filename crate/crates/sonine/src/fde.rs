//! Initial-value problems Σ aⱼ·(*Dʲ y)(t) = f(t), y⁽ⁱ⁾(0) = y_{i,0}, where
//! *Dʲ is the j-fold Caputo-type derivative of a Sonine pair, solved through
//! partial fractions in S_κ and resolvent series.

use crate::error::{Error, Result};
use crate::hseries::{HSeries, TruncationPolicy, MERGE_TOL};
use crate::kernels::{KernelSpec, Lowered, SoninePair};
use crate::opcalc::{
    conv_series_L, conv_series_l, partial_fractions, rational_to_hseries, rational_to_hseries_with,
    OperatorPolynomial, ASSEMBLY_TOL,
};
use crate::operators::{convolve_sampled, gfd_caputo, SampledFunction};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Source term of an equation.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Series(HSeries),
    Sampled(SampledFunction),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IvpProblem {
    pub pair: SoninePair,
    /// a₀…a_n, a_n ≠ 0.
    pub a: Vec<f64>,
    pub f: Source,
    /// y_{0,0}…y_{n-1,0}.
    pub inits: Vec<f64>,
}

impl IvpProblem {
    pub fn order(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        match self.a.last() {
            None => return Err(Error::usage("coefficient list a is empty")),
            Some(&0.0) => return Err(Error::usage("leading coefficient a_n must be non-zero")),
            _ => {}
        }
        if self.a.len() < 2 {
            return Err(Error::usage("the equation needs order n >= 1"));
        }
        if self.a.iter().chain(&self.inits).any(|x| !x.is_finite()) {
            return Err(Error::usage("coefficients and initial values must be finite"));
        }
        if self.inits.len() != self.order() {
            return Err(Error::usage(format!(
                "{} initial values given for an equation of order {}",
                self.inits.len(),
                self.order()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// Largest mismatch between conjugate residues (real problems).
    pub imag_residue: f64,
    /// Largest imaginary coefficient dropped from the solution series.
    pub imag_dropped: f64,
    /// Exponent below which the solution series is exact, if truncated.
    pub horizon: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IvpSolution {
    /// Full solution when the source is a series; otherwise the part
    /// Σ y_{i,0}·ỹᵢ only, with the source response in `y_f_sampled`.
    pub y: HSeries,
    pub y_f: Option<HSeries>,
    pub y_f_sampled: Option<SampledFunction>,
    /// ỹ₀…ỹ_{n-1}, with ỹᵢ⁽ᵏ⁾(0) = δᵢₖ.
    pub y_tilde: Vec<HSeries>,
    /// G = I/P(S_κ); y_f = f * G.
    pub green: HSeries,
    pub diagnostics: Diagnostics,
}

impl IvpSolution {
    pub fn eval(&self, t: f64) -> Result<C64> {
        let mut v = self.y.eval(t)?;
        if let Some(s) = &self.y_f_sampled {
            v += s.eval(t)?;
        }
        Ok(v)
    }
}

/// (*D y) - λy = f, y(0) = y0: y = f * l_{κ,λ} + y0·L_{κ,λ}.
pub fn solve_single(pair: &SoninePair, lambda: f64, f: &HSeries, y0: f64, policy: TruncationPolicy) -> Result<IvpSolution> {
    if !lambda.is_finite() || !y0.is_finite() {
        return Err(Error::usage("lambda and y0 must be finite"));
    }
    let lam = C64::new(lambda, 0.0);
    let l = conv_series_l(pair, lam, policy)?;
    let big_l = conv_series_L(pair, lam, policy)?;
    let y_f = f.convolve(&l);
    let y = y_f.add(&big_l.scale(y0));
    let diagnostics = Diagnostics {
        horizon: y.horizon(),
        ..Diagnostics::default()
    };
    Ok(IvpSolution {
        y,
        y_f: Some(y_f),
        y_f_sampled: None,
        y_tilde: vec![big_l],
        green: l,
        diagnostics,
    })
}

/// Multi-term problem: y_f = f * G with G = I/P(S_κ), and
/// ỹᵢ = k^i * Σⱼ d_{ij}·L_{κ,λⱼ}, the d_{ij} being the partial-fraction
/// residues of Pᵢ(S)/P(S) with Pᵢ(S) = Σ_{j>i} aⱼS^{j-i-1}.
pub fn solve_multiterm(problem: &IvpProblem, policy: TruncationPolicy) -> Result<IvpSolution> {
    problem.validate()?;
    let n = problem.order();
    let poly = OperatorPolynomial::from_real(&problem.a)?;
    let mut numerators = vec![OperatorPolynomial::from_real(&[1.0])?];
    for i in 0..n {
        numerators.push(OperatorPolynomial::new(poly.tail_quotient(i))?);
    }
    let decomp = partial_fractions(&poly, &numerators)?;
    let mut diagnostics = Diagnostics::default();
    if let Some(w) = &decomp.warning {
        diagnostics.warnings.push(w.clone());
    }
    if decomp.multiplicities.iter().any(|&m| m > 1) {
        diagnostics
            .warnings
            .push("repeated roots: using powers of the resolvent series".into());
    }
    let pair = &problem.pair;
    let green = rational_to_hseries(&decomp, 0, pair, policy)?;
    diagnostics.imag_residue = green.imag_residue;
    let green = green.series;

    let k = pair.k_lowered(policy)?;
    // basis for (λ, m): k * l^m = L·l^{m-1}
    let mut cache: Vec<(C64, HSeries, HSeries)> = Vec::new();
    let mut basis = |lam: C64, m: u32| -> Result<HSeries> {
        let idx = match cache.iter().position(|(c, _, _)| *c == lam) {
            Some(i) => i,
            None => {
                let l = conv_series_l(pair, lam, policy)?;
                let big = conv_series_L(pair, lam, policy)?;
                cache.push((lam, l, big));
                cache.len() - 1
            }
        };
        let (_, l, big) = &cache[idx];
        if m == 1 {
            Ok(big.clone())
        } else {
            Ok(big.convolve(&l.power(m - 1)?))
        }
    };
    let mut y_tilde = Vec::with_capacity(n);
    let mut k_pow = Lowered::Identity;
    for i in 0..n {
        let part = rational_to_hseries_with(&decomp, i + 1, policy, &mut basis)?;
        diagnostics.imag_residue = diagnostics.imag_residue.max(part.imag_residue);
        let yt = match &k_pow {
            Lowered::Identity => part.series,
            Lowered::Series(kp) => kp.convolve_with_tol(&part.series, ASSEMBLY_TOL),
        };
        y_tilde.push(yt);
        k_pow = match (&k_pow, &k) {
            (_, Lowered::Identity) => Lowered::Identity,
            (Lowered::Identity, Lowered::Series(ks)) => Lowered::Series(ks.clone()),
            (Lowered::Series(kp), Lowered::Series(ks)) => Lowered::Series(kp.convolve(ks)),
        };
    }

    let mut items: Vec<(C64, &HSeries)> = y_tilde
        .iter()
        .zip(&problem.inits)
        .map(|(s, &y0)| (C64::new(y0, 0.0), s))
        .collect();
    let (y_f, y_f_sampled) = match &problem.f {
        Source::Series(f) => (Some(f.convolve(&green)), None),
        Source::Sampled(f) => {
            diagnostics
                .warnings
                .push("source given as samples: y_f is a product-integration approximation".into());
            (None, Some(convolve_sampled(&green, f)?))
        }
    };
    if let Some(yf) = &y_f {
        items.push((C64::new(1.0, 0.0), yf));
    }
    let y = if items.is_empty() {
        HSeries::zero_with(policy)
    } else {
        HSeries::linear_combination(&items, 0.0)
    };
    diagnostics.imag_dropped = y.max_abs_imag();
    diagnostics.horizon = y.horizon();
    Ok(IvpSolution {
        y,
        y_f,
        y_f_sampled,
        y_tilde,
        green,
        diagnostics,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// max over the grid of |Σ aⱼ(*Dʲ y)(t) - f(t)|.
    pub equation_residual: f64,
    /// max over j < n of |y⁽ʲ⁾(0) - y_{j,0}| (infinite if y⁽ʲ⁾ is singular at 0).
    pub initial_residual: f64,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.equation_residual.max(self.initial_residual)
    }
}

/// Grid points below this are skipped: near zero the derivatives of
/// solutions with fractional exponents may be singular.
pub const RESIDUAL_T_MIN: f64 = 0.01;

/// Re-applies the Caputo derivatives to `y` and measures how well the
/// equation and the initial conditions hold.
pub fn residual_report(problem: &IvpProblem, y: &HSeries, grid: &[f64], policy: TruncationPolicy) -> Result<ResidualReport> {
    problem.validate()?;
    let f = match &problem.f {
        Source::Series(f) => f.clone(),
        Source::Sampled(_) => {
            return Err(Error::usage("residual checks need the source as a series"));
        }
    };
    let mut derivs = vec![y.clone()];
    for j in 1..problem.a.len() {
        derivs.push(gfd_caputo(&problem.pair, y, j as u32, policy)?);
    }
    let mut items: Vec<(C64, &HSeries)> = problem
        .a
        .iter()
        .zip(&derivs)
        .filter(|(a, _)| **a != 0.0)
        .map(|(&a, d)| (C64::new(a, 0.0), d))
        .collect();
    items.push((C64::new(-1.0, 0.0), &f));
    let r = HSeries::linear_combination(&items, 0.0);
    let mut eq: f64 = 0.0;
    for &t in grid.iter().filter(|&&t| t >= RESIDUAL_T_MIN) {
        eq = eq.max(r.eval(t)?.norm());
    }
    let mut init: f64 = 0.0;
    for (j, &y0) in problem.inits.iter().enumerate() {
        init = init.max(match y.derivative_at_zero(j as u32) {
            Ok(v) => (v - y0).norm(),
            Err(_) => f64::INFINITY,
        });
    }
    Ok(ResidualReport {
        equation_residual: eq,
        initial_residual: init,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmOrder {
    pub n: u32,
    /// min over the grid of (-1)ⁿΔⁿ_h f.
    pub min_difference: f64,
    /// Tolerance applied to the differences.
    pub tol: f64,
    /// min over the grid of (-1)ⁿf⁽ⁿ⁾(t) scaled by max|f⁽ⁿ⁾| (pointwise series derivatives).
    pub min_derivative: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmReport {
    pub pass: bool,
    pub orders: Vec<CmOrder>,
}

/// Sign pattern of complete monotonicity on [0, T]: (-1)ⁿΔⁿ_h f ≥ -tol for
/// n ≤ `orders` on the uniform grid h = T/256, tol = 1e-9·max|f|, and the
/// same sign pattern for the term-wise derivatives at the grid points t > 0.
pub fn complete_monotonicity_check(series: &HSeries, t_max: f64, orders: u32) -> Result<CmReport> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::usage("T must be positive"));
    }
    if orders > 6 {
        return Err(Error::usage("orders must be <= 6"));
    }
    const STEPS: usize = 256;
    let h = t_max / STEPS as f64;
    let start = if series.value_at_zero().is_ok() { 0 } else { 1 };
    let ts: Vec<f64> = (start..=STEPS).map(|i| i as f64 * h).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| series.eval(t).map(|v| v.re)).collect::<Result<_>>()?;
    let vmax = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let tol = 1e-9 * vmax;
    let mut out = Vec::new();
    for n in 0..=orders {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mut min_d = f64::INFINITY;
        let nn = n as usize;
        for i in 0..vals.len().saturating_sub(nn) {
            let mut d = 0.0;
            let mut binom = 1.0;
            for k in 0..=nn {
                let s = if (nn - k) % 2 == 0 { 1.0 } else { -1.0 };
                d += s * binom * vals[i + k];
                binom = binom * (nn - k) as f64 / (k + 1) as f64;
            }
            min_d = min_d.min(sign * d);
        }
        let ders: Vec<f64> = ts
            .iter()
            .filter(|&&t| t > 0.0)
            .map(|&t| series.eval_derivative(t, n).map(|v| v.re))
            .collect::<Result<_>>()?;
        let dmax = ders.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let min_der = ders.iter().map(|v| sign * v).fold(f64::INFINITY, f64::min);
        let min_der = if dmax > 0.0 { min_der / dmax } else { 0.0 };
        out.push(CmOrder {
            n,
            min_difference: min_d,
            tol,
            min_derivative: min_der,
            pass: min_d >= -tol && min_der >= -1e-9,
        });
    }
    Ok(CmReport {
        pass: out.iter().all(|o| o.pass),
        orders: out,
    })
}

/// Problem file: `{"kernel": KernelSpec, "a": [...], "inits": [...], "f": HSeries | {"sampled": ...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub kernel: KernelSpec,
    pub a: Vec<f64>,
    pub inits: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<SourceSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceSpec {
    Sampled { sampled: SampledSpec },
    Series(HSeries),
}

/// Samples of f itself: f(t) = t^{p-1}·f₁(t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSpec {
    pub p: f64,
    pub t: Vec<f64>,
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl ProblemSpec {
    pub fn to_problem(&self, policy: TruncationPolicy) -> Result<IvpProblem> {
        let pair = SoninePair::from_kernel(self.kernel.clone())?;
        let f = match &self.f {
            None => Source::Series(HSeries::zero_with(policy)),
            Some(SourceSpec::Series(s)) => Source::Series(s.clone()),
            Some(SourceSpec::Sampled { sampled }) => {
                let n = sampled.t.len();
                if sampled.re.len() != n || sampled.im.as_ref().is_some_and(|im| im.len() != n) {
                    return Err(Error::usage("sampled source: t, re, im lengths differ"));
                }
                let vals: Vec<C64> = (0..n)
                    .map(|i| C64::new(sampled.re[i], sampled.im.as_ref().map_or(0.0, |im| im[i])))
                    .collect();
                let f1 = sampled
                    .t
                    .iter()
                    .zip(vals)
                    .map(|(&t, v)| v * t.powf(1.0 - sampled.p))
                    .collect();
                Source::Sampled(SampledFunction::new(sampled.p, sampled.t.clone(), f1)?)
            }
        };
        let problem = IvpProblem {
            pair,
            a: self.a.clone(),
            f,
            inits: self.inits.clone(),
        };
        problem.validate()?;
        Ok(problem)
    }
}

/// ỹᵢ⁽ᵏ⁾(0) for i, k < n; `None` where the derivative is singular at 0.
pub fn initial_value_matrix(solution: &IvpSolution) -> Vec<Vec<Option<f64>>> {
    let n = solution.y_tilde.len();
    solution
        .y_tilde
        .iter()
        .map(|yt| {
            (0..n)
                .map(|k| yt.derivative_at_zero(k as u32).ok().map(|v| v.re))
                .collect()
        })
        .collect()
}

/// Largest |ỹᵢ⁽ᵏ⁾(0) - δᵢₖ| (infinite when some entry is undefined).
pub fn initial_value_matrix_error(solution: &IvpSolution) -> f64 {
    let m = initial_value_matrix(solution);
    let mut worst: f64 = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            let want = if i == k { 1.0 } else { 0.0 };
            worst = worst.max(v.map_or(f64::INFINITY, |v| (v - want).abs()));
        }
    }
    worst
}

/// True when every exponent of `s` is an integer or exceeds `n`, i.e. the
/// series is n times continuously differentiable at zero.
pub fn is_cn(s: &HSeries, n: u32) -> bool {
    s.terms()
        .iter()
        .all(|t| (t.exponent - t.exponent.round()).abs() <= MERGE_TOL || t.exponent > n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::mittag_leffler;

    fn p() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn unit_pair_gives_exponential_solution() {
        // y' + y = 0, y(0) = 1
        let sol = solve_single(&SoninePair::unit(), -1.0, &HSeries::zero(), 1.0, p()).unwrap();
        for t in [0.1, 1.0, 3.0] {
            assert!((sol.eval(t).unwrap().re - (-t).exp()).abs() < 1e-13);
        }
    }

    #[test]
    fn caputo_relaxation_matches_ml() {
        let pair = SoninePair::power(0.5).unwrap();
        let sol = solve_single(&pair, -1.0, &HSeries::zero(), 1.0, p()).unwrap();
        let want = mittag_leffler(0.5, 1.0, C64::new(-1.0, 0.0)).unwrap().re;
        assert!((sol.eval(1.0).unwrap().re - want).abs() < 1e-12);
    }

    #[test]
    fn multiterm_order_one_reduces_to_single() {
        let pair = SoninePair::power(0.6).unwrap();
        let f = HSeries::h(1.0);
        let single = solve_single(&pair, -2.0, &f, 0.5, p()).unwrap();
        let problem = IvpProblem {
            pair,
            a: vec![2.0, 1.0],
            f: Source::Series(f),
            inits: vec![0.5],
        };
        let multi = solve_multiterm(&problem, p()).unwrap();
        let d = multi.y.sub(&single.y);
        let scale = single.y.max_abs_coeff();
        assert!(d.terms().iter().all(|t| t.coeff.norm() <= 1e-12 * scale));
    }

    #[test]
    fn zero_problem_has_zero_solution() {
        let problem = IvpProblem {
            pair: SoninePair::power(0.8).unwrap(),
            a: vec![1.0, 0.0, 1.0],
            f: Source::Series(HSeries::zero()),
            inits: vec![0.0, 0.0],
        };
        let sol = solve_multiterm(&problem, p()).unwrap();
        assert!(sol.y.is_zero());
        let r = residual_report(&problem, &sol.y, &[0.5, 1.0], p()).unwrap();
        assert_eq!(r.max(), 0.0);
    }

    #[test]
    fn problem_validation() {
        let mut problem = IvpProblem {
            pair: SoninePair::power(0.8).unwrap(),
            a: vec![1.0, 0.0],
            f: Source::Series(HSeries::zero()),
            inits: vec![0.0],
        };
        assert!(matches!(solve_multiterm(&problem, p()), Err(Error::Usage(_))));
        problem.a = vec![1.0, 1.0];
        problem.inits = vec![];
        assert!(solve_multiterm(&problem, p()).is_err());
    }

    #[test]
    fn cm_check_on_exponential() {
        let l = conv_series_l(&SoninePair::unit(), C64::new(-2.0, 0.0), p()).unwrap();
        let r = complete_monotonicity_check(&l, 1.0, 4).unwrap();
        assert!(r.pass, "{r:?}");
        // e^{t} is not completely monotone
        let g = conv_series_l(&SoninePair::unit(), C64::new(1.0, 0.0), p()).unwrap();
        assert!(!complete_monotonicity_check(&g, 1.0, 2).unwrap().pass);
    }

    #[test]
    fn problem_json() {
        let j = r#"{"kernel":{"type":"power","alpha":0.8},"a":[1,0,1],"inits":[1,0]}"#;
        let spec: ProblemSpec = serde_json::from_str(j).unwrap();
        let problem = spec.to_problem(p()).unwrap();
        assert_eq!(problem.order(), 2);
        let j = r#"{"kernel":{"type":"power","alpha":0.8},"a":[1,1],"inits":[0],
            "f":{"sampled":{"p":1,"t":[0.5,1],"re":[1,1]}}}"#;
        let spec: ProblemSpec = serde_json::from_str(j).unwrap();
        assert!(matches!(spec.to_problem(p()).unwrap().f, Source::Sampled(_)));
    }
}
