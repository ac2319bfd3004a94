//! Sonine kernel catalog, lowering to h-series and associate kernels.
//!
//! Coefficient lists `a`/`b` always use the factorized convention
//! κ = h_α·Σ aₖtᵏ and k = h_{1-α}·Σ bₖtᵏ; [`factorized_to_hseries`] converts
//! them to raw h-series coefficients aₖ·Γ(α+k)/Γ(α) on h_{α+k}.

use crate::error::{Error, Result};
use crate::hseries::{HSeries, HTerm, TruncationPolicy};
use crate::specfun::ln_gamma;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub weight: f64,
    pub order: f64,
}

/// A kernel from the built-in catalog. JSON form: `{"type": "power", "alpha": 0.5}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum KernelSpec {
    /// h_α.
    Power { alpha: f64 },
    /// h_α(t)·e^{-ρt}.
    Tempered { alpha: f64, rho: f64 },
    /// Σ wᵢ·h_{αᵢ}.
    Sum { terms: Vec<PowerTerm> },
    /// t^{(α-1)/2}·J_{α-1}(2√t).
    Bessel { alpha: f64 },
    /// t^{β-1}·E_{α,β}(-t^α).
    Ml { alpha: f64, beta: f64 },
    /// h_α(t)·Σ aₖtᵏ. `alpha = 1, a = [1]` is the constant kernel {1}.
    Series { alpha: f64, a: Vec<f64> },
}

fn in_open_unit(x: f64) -> bool {
    x > 0.0 && x < 1.0
}

impl KernelSpec {
    /// The constant kernel {1} = h_1, whose associate is the identity.
    pub fn unit() -> KernelSpec {
        KernelSpec::Series {
            alpha: 1.0,
            a: vec![1.0],
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, KernelSpec::Series { alpha, a } if *alpha == 1.0 && a.as_slice() == [1.0])
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::domain(msg));
        match self {
            KernelSpec::Power { alpha } | KernelSpec::Bessel { alpha } => {
                if !in_open_unit(*alpha) {
                    return bad(format!("alpha must lie in (0,1), got {alpha}"));
                }
            }
            KernelSpec::Tempered { alpha, rho } => {
                if !in_open_unit(*alpha) {
                    return bad(format!("alpha must lie in (0,1), got {alpha}"));
                }
                if !(*rho >= 0.0) || !rho.is_finite() {
                    return bad(format!("rho must be >= 0, got {rho}"));
                }
            }
            KernelSpec::Sum { terms } => {
                if terms.is_empty() {
                    return Err(Error::usage("sum kernel needs at least one term"));
                }
                for (i, t) in terms.iter().enumerate() {
                    if !in_open_unit(t.order) {
                        return bad(format!("order must lie in (0,1), got {}", t.order));
                    }
                    if t.weight == 0.0 || !t.weight.is_finite() {
                        return bad("weights must be finite and non-zero".into());
                    }
                    if terms[..i].iter().any(|s| (s.order - t.order).abs() <= 1e-12) {
                        return bad(format!("repeated order {}", t.order));
                    }
                }
            }
            KernelSpec::Ml { alpha, beta } => {
                if !(*alpha > 0.0 && alpha < beta && *beta < 1.0) {
                    return bad(format!("need 0 < alpha < beta < 1, got alpha={alpha}, beta={beta}"));
                }
            }
            KernelSpec::Series { alpha, a } => {
                if a.is_empty() || a[0] == 0.0 {
                    return bad("series kernel needs a[0] != 0".into());
                }
                if a.iter().any(|x| !x.is_finite()) {
                    return bad("series coefficients must be finite".into());
                }
                if !(in_open_unit(*alpha) || self.is_unit()) {
                    return bad(format!("alpha must lie in (0,1), got {alpha}"));
                }
            }
        }
        Ok(())
    }

    /// Smallest exponent of the lowered series (the singularity order p).
    pub fn order(&self) -> f64 {
        match self {
            KernelSpec::Power { alpha }
            | KernelSpec::Tempered { alpha, .. }
            | KernelSpec::Bessel { alpha }
            | KernelSpec::Series { alpha, .. } => *alpha,
            KernelSpec::Ml { beta, .. } => *beta,
            KernelSpec::Sum { terms } => terms.iter().map(|t| t.order).fold(f64::INFINITY, f64::min),
        }
    }

    pub fn to_hseries(&self, policy: TruncationPolicy) -> Result<HSeries> {
        kernel_to_hseries(self, policy)
    }
}

/// Lowers a kernel to its h-series expansion. Infinite expansions stop at the
/// policy caps and carry the corresponding horizon.
pub fn kernel_to_hseries(spec: &KernelSpec, policy: TruncationPolicy) -> Result<HSeries> {
    spec.validate()?;
    policy.validate()?;
    match spec {
        KernelSpec::Power { alpha } => HSeries::new(vec![HTerm::new(1.0, *alpha)], policy),
        KernelSpec::Tempered { alpha, rho } => {
            if *rho == 0.0 {
                return HSeries::new(vec![HTerm::new(1.0, *alpha)], policy);
            }
            // (-ρ)^j (α)_j / j!
            let mut c = 1.0;
            lower_infinite(policy, *alpha, 1.0, |j| {
                if j > 0 {
                    c *= -rho * (alpha + (j - 1) as f64) / j as f64;
                }
                c
            })
        }
        KernelSpec::Sum { terms } => HSeries::new(
            terms.iter().map(|t| HTerm::new(t.weight, t.order)).collect(),
            policy,
        ),
        KernelSpec::Bessel { alpha } => {
            let mut c = 1.0;
            lower_infinite(policy, *alpha, 1.0, |j| {
                if j > 0 {
                    c *= -1.0 / j as f64;
                }
                c
            })
        }
        KernelSpec::Ml { alpha, beta } => {
            lower_infinite(policy, *beta, *alpha, |j| if j % 2 == 0 { 1.0 } else { -1.0 })
        }
        KernelSpec::Series { alpha, a } => factorized_to_hseries(*alpha, a, policy, false),
    }
}

/// Builds Σ_j coeff(j)·h_{start + j·step} up to the policy caps; the first
/// omitted exponent becomes the horizon.
fn lower_infinite(
    policy: TruncationPolicy,
    start: f64,
    step: f64,
    mut coeff: impl FnMut(usize) -> f64,
) -> Result<HSeries> {
    let mut terms = Vec::new();
    let mut j = 0usize;
    loop {
        let e = start + j as f64 * step;
        if e > policy.max_exponent || j >= policy.max_terms {
            break;
        }
        terms.push(HTerm::new(coeff(j), e));
        j += 1;
    }
    let horizon = start + j as f64 * step;
    Ok(HSeries::new(terms, policy)?.with_horizon(horizon))
}

/// Converts h_α·Σ cₖtᵏ to raw coefficients cₖ·Γ(α+k)/Γ(α) on h_{α+k}.
/// With `infinite` set the list is treated as the head of an infinite
/// expansion, so the result is truncated right after the last supplied term.
pub fn factorized_to_hseries(alpha: f64, coeffs: &[f64], policy: TruncationPolicy, infinite: bool) -> Result<HSeries> {
    if !(alpha > 0.0) {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    let lg0 = ln_gamma(alpha);
    let mut terms = Vec::with_capacity(coeffs.len());
    let mut horizon = f64::INFINITY;
    for (k, c) in coeffs.iter().enumerate() {
        let e = alpha + k as f64;
        if e > policy.max_exponent || k >= policy.max_terms {
            horizon = e;
            break;
        }
        let raw = c * (ln_gamma(e) - lg0).exp();
        if !raw.is_finite() {
            horizon = e;
            break;
        }
        terms.push(HTerm::new(raw, e));
    }
    if infinite && horizon.is_infinite() {
        horizon = alpha + coeffs.len() as f64;
    }
    Ok(HSeries::new(terms, policy)?.with_horizon(horizon))
}

/// Coefficients b₀…b_{n-1} of the associate kernel together with a
/// conditioning warning.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociateCoefficients {
    pub b: Vec<f64>,
    pub warning: Option<String>,
}

/// Solves Σ_{k=0}^{m} Γ(k+1-α)·Γ(α+m-k)·a_{m-k}·b_k = δ_{m0}·Γ(α)Γ(1-α)
/// forward for the first `n` coefficients of k₁ in k = h_{1-α}·k₁.
pub fn associate_kernel(alpha: f64, a: &[f64], n: usize) -> Result<AssociateCoefficients> {
    if !in_open_unit(alpha) {
        return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if a.is_empty() || a[0] == 0.0 {
        return Err(Error::domain("degenerate kernel: a[0] = 0"));
    }
    let ga = |k: usize| ln_gamma(alpha + k as f64);
    let gb = |k: usize| ln_gamma(1.0 - alpha + k as f64);
    let mut b: Vec<f64> = Vec::with_capacity(n);
    for m in 0..n {
        if m == 0 {
            b.push(1.0 / a[0]);
            continue;
        }
        // divide the whole row by Γ(α)Γ(1-α+m), the coefficient of b_m
        let denom = ga(0) + gb(m);
        let mut s = 0.0;
        for (k, bk) in b.iter().enumerate() {
            let j = m - k;
            if j >= a.len() || a[j] == 0.0 {
                continue;
            }
            s += a[j] * bk * (gb(k) + ga(j) - denom).exp();
        }
        let bm = -s / a[0];
        if !bm.is_finite() {
            return Err(Error::Range(format!("associate coefficient b_{m} overflowed")));
        }
        b.push(bm);
    }
    let warning = match (b.first(), b.last()) {
        (Some(b0), Some(bn)) if bn.abs() > 1e12 * b0.abs() => Some(format!(
            "associate coefficients grow fast: |b_{}| / |b_0| = {:.3e}; the radius of convergence may be small",
            b.len() - 1,
            bn.abs() / b0.abs()
        )),
        _ => None,
    };
    Ok(AssociateCoefficients { b, warning })
}

/// Residuals of every row of the triangular system, relative to the largest
/// term in the row.
pub fn associate_row_residuals(alpha: f64, a: &[f64], b: &[f64]) -> Vec<f64> {
    let lg0 = ln_gamma(alpha) + ln_gamma(1.0 - alpha);
    (0..b.len())
        .map(|m| {
            let mut s = if m == 0 { -1.0 } else { 0.0 };
            let mut scale: f64 = if m == 0 { 1.0 } else { 0.0 };
            for (k, bk) in b.iter().enumerate().take(m + 1) {
                let j = m - k;
                let aj = a.get(j).copied().unwrap_or(0.0);
                let t = aj * bk * (ln_gamma(1.0 - alpha + k as f64) + ln_gamma(alpha + j as f64) - lg0).exp();
                s += t;
                scale = scale.max(t.abs());
            }
            if scale == 0.0 {
                0.0
            } else {
                s.abs() / scale
            }
        })
        .collect()
}

/// How the associate kernel of a pair is represented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AssociateSpec {
    /// Another catalog kernel.
    Kernel { spec: KernelSpec },
    /// h_{1-α,ρ} + ρ·{1} * h_{1-α,ρ}.
    TemperedIntegral { alpha: f64, rho: f64 },
    /// t^{-α/2}·I_{-α}(2√t).
    BesselI { alpha: f64 },
    /// h_α·Σ bₖtᵏ with computed coefficients (a head of an infinite expansion).
    Computed { alpha: f64, b: Vec<f64> },
    /// Inverse of a sum-of-powers kernel via the resolvent series.
    SumInverse { terms: Vec<PowerTerm> },
    /// The identity (Dirac delta), associate of {1}.
    Delta,
}

/// Catalog metadata; never computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassFlags {
    /// Known member of the class K of kernels.
    pub in_class_k: bool,
    /// κ known to be completely monotone.
    pub completely_monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoninePair {
    pub kappa: KernelSpec,
    pub k: AssociateSpec,
    pub flags: ClassFlags,
    /// Conditioning note from the associate computation, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// A lowered associate: a function series or the identity operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Lowered {
    Identity,
    Series(HSeries),
}

impl Lowered {
    pub fn convolve(&self, f: &HSeries) -> HSeries {
        match self {
            Lowered::Identity => f.clone(),
            Lowered::Series(s) => s.convolve(f),
        }
    }

    pub fn power(&self, n: u32) -> Result<Lowered> {
        match self {
            Lowered::Identity => Ok(Lowered::Identity),
            Lowered::Series(s) => Ok(Lowered::Series(s.power(n)?)),
        }
    }

    pub fn series(&self) -> Option<&HSeries> {
        match self {
            Lowered::Identity => None,
            Lowered::Series(s) => Some(s),
        }
    }
}

impl SoninePair {
    /// Pairs a catalog kernel with its associate.
    pub fn from_kernel(kappa: KernelSpec) -> Result<SoninePair> {
        kappa.validate()?;
        let no = ClassFlags {
            in_class_k: false,
            completely_monotone: false,
        };
        let mut warning = None;
        let (k, flags) = match &kappa {
            KernelSpec::Power { alpha } => (
                AssociateSpec::Kernel {
                    spec: KernelSpec::Power { alpha: 1.0 - alpha },
                },
                ClassFlags {
                    in_class_k: true,
                    completely_monotone: true,
                },
            ),
            KernelSpec::Tempered { alpha, rho } => (
                AssociateSpec::TemperedIntegral {
                    alpha: *alpha,
                    rho: *rho,
                },
                ClassFlags {
                    in_class_k: false,
                    completely_monotone: true,
                },
            ),
            KernelSpec::Sum { terms } => (
                AssociateSpec::SumInverse { terms: terms.clone() },
                ClassFlags {
                    in_class_k: false,
                    completely_monotone: terms.iter().all(|t| t.weight > 0.0),
                },
            ),
            KernelSpec::Bessel { alpha } => (AssociateSpec::BesselI { alpha: *alpha }, no),
            KernelSpec::Ml { alpha, beta } => (
                AssociateSpec::Kernel {
                    spec: KernelSpec::Sum {
                        terms: vec![
                            PowerTerm {
                                weight: 1.0,
                                order: 1.0 - beta + alpha,
                            },
                            PowerTerm {
                                weight: 1.0,
                                order: 1.0 - beta,
                            },
                        ],
                    },
                },
                ClassFlags {
                    in_class_k: true,
                    completely_monotone: true,
                },
            ),
            KernelSpec::Series { alpha, a } => {
                if kappa.is_unit() {
                    (
                        AssociateSpec::Delta,
                        ClassFlags {
                            in_class_k: true,
                            completely_monotone: true,
                        },
                    )
                } else {
                    let n = ((TruncationPolicy::default().max_exponent - (1.0 - alpha)).floor() as usize + 1)
                        .min(TruncationPolicy::default().max_terms);
                    let assoc = associate_kernel(*alpha, a, n)?;
                    warning = assoc.warning;
                    (
                        AssociateSpec::Computed {
                            alpha: 1.0 - alpha,
                            b: assoc.b,
                        },
                        no,
                    )
                }
            }
        };
        Ok(SoninePair {
            kappa,
            k,
            flags,
            warning,
        })
    }

    pub fn power(alpha: f64) -> Result<SoninePair> {
        Self::from_kernel(KernelSpec::Power { alpha })
    }

    /// ({1}, δ): the classical calculus as a degenerate pair.
    pub fn unit() -> SoninePair {
        Self::from_kernel(KernelSpec::unit()).expect("unit pair is valid")
    }

    /// κ = h_{1-β+α} + h_{1-β}, k = t^{β-1}E_{α,β}(-t^α).
    pub fn ml(alpha: f64, beta: f64) -> Result<SoninePair> {
        KernelSpec::Ml { alpha, beta }.validate()?;
        Ok(SoninePair {
            kappa: KernelSpec::Sum {
                terms: vec![
                    PowerTerm {
                        weight: 1.0,
                        order: 1.0 - beta + alpha,
                    },
                    PowerTerm {
                        weight: 1.0,
                        order: 1.0 - beta,
                    },
                ],
            },
            k: AssociateSpec::Kernel {
                spec: KernelSpec::Ml { alpha, beta },
            },
            flags: ClassFlags {
                in_class_k: true,
                completely_monotone: true,
            },
            warning: None,
        })
    }

    /// The five catalog pairs with representative parameters.
    pub fn catalog() -> Vec<(&'static str, SoninePair)> {
        let pairs = [
            ("power", KernelSpec::Power { alpha: 0.5 }),
            ("tempered", KernelSpec::Tempered { alpha: 0.5, rho: 1.0 }),
            ("bessel", KernelSpec::Bessel { alpha: 0.4 }),
            (
                "series",
                KernelSpec::Series {
                    alpha: 0.6,
                    a: vec![1.0, -0.1, 0.02],
                },
            ),
        ];
        let mut out: Vec<(&'static str, SoninePair)> = pairs
            .into_iter()
            .map(|(name, spec)| (name, SoninePair::from_kernel(spec).expect("catalog kernel is valid")))
            .collect();
        out.insert(3, ("ml", SoninePair::ml(0.3, 0.7).expect("catalog kernel is valid")));
        out
    }

    pub fn kappa_series(&self, policy: TruncationPolicy) -> Result<HSeries> {
        kernel_to_hseries(&self.kappa, policy)
    }

    pub fn k_lowered(&self, policy: TruncationPolicy) -> Result<Lowered> {
        policy.validate()?;
        let s = match &self.k {
            AssociateSpec::Delta => return Ok(Lowered::Identity),
            AssociateSpec::Kernel { spec } => kernel_to_hseries(spec, policy)?,
            AssociateSpec::TemperedIntegral { alpha, rho } => tempered_associate(*alpha, *rho, policy)?,
            AssociateSpec::BesselI { alpha } => {
                let mut c = 1.0;
                lower_infinite(policy, 1.0 - alpha, 1.0, |j| {
                    if j > 0 {
                        c /= j as f64;
                    }
                    c
                })?
            }
            AssociateSpec::Computed { alpha, b } => factorized_to_hseries(*alpha, b, policy, true)?,
            AssociateSpec::SumInverse { terms } => sum_inverse(terms, policy)?,
        };
        Ok(Lowered::Series(s))
    }

    /// Lowered associate as a function series; the identity associate of {1}
    /// has none.
    pub fn k_series(&self, policy: TruncationPolicy) -> Result<HSeries> {
        match self.k_lowered(policy)? {
            Lowered::Series(s) => Ok(s),
            Lowered::Identity => Err(Error::domain("the associate of {1} is the identity, not a function")),
        }
    }

    /// Singularity order p of κ.
    pub fn kappa_order(&self) -> f64 {
        self.kappa.order()
    }
}

/// k = h_{1-α,ρ} + ρ·h_1 * h_{1-α,ρ}: coefficient of h_{1-α+j} is c_j + ρ·c_{j-1}
/// with c_j = (-ρ)^j (1-α)_j / j!.
fn tempered_associate(alpha: f64, rho: f64, policy: TruncationPolicy) -> Result<HSeries> {
    if rho == 0.0 {
        return HSeries::new(vec![HTerm::new(1.0, 1.0 - alpha)], policy);
    }
    let beta = 1.0 - alpha;
    let mut c = 1.0;
    let mut prev = 0.0;
    lower_infinite(policy, beta, 1.0, |j| {
        if j > 0 {
            prev = c;
            c *= -rho * (beta + (j - 1) as f64) / j as f64;
        }
        c + rho * prev
    })
}

/// κ = w₀h_{α₀} * (δ + v), v = Σ_{i≥1} (wᵢ/w₀)h_{αᵢ-α₀}, so
/// k = (h_{1-α₀} - h_{1-α₀} * l_{v,-1}) / w₀.
fn sum_inverse(terms: &[PowerTerm], policy: TruncationPolicy) -> Result<HSeries> {
    KernelSpec::Sum { terms: terms.to_vec() }.validate()?;
    let lead = terms
        .iter()
        .min_by(|a, b| a.order.total_cmp(&b.order))
        .copied()
        .expect("non-empty");
    let base = HSeries::new(vec![HTerm::new(1.0 / lead.weight, 1.0 - lead.order)], policy)?;
    let rest: Vec<HTerm> = terms
        .iter()
        .filter(|t| t.order != lead.order)
        .map(|t| HTerm::new(t.weight / lead.weight, t.order - lead.order))
        .collect();
    if rest.is_empty() {
        return Ok(base);
    }
    let v = HSeries::new(rest, policy)?;
    let l = v.resolvent(C64::new(-1.0, 0.0));
    Ok(base.sub(&base.convolve(&l)))
}

/// max over the grid of |(κ̂ * k̂)(t) - 1| plus the truncation tail bound.
pub fn sonine_residual(pair: &SoninePair, grid: &[f64], policy: TruncationPolicy) -> Result<f64> {
    let kappa = pair.kappa_series(policy)?;
    let prod = pair.k_lowered(policy)?.convolve(&kappa);
    let mut worst: f64 = 0.0;
    for &t in grid {
        if !(t > 0.0) {
            return Err(Error::domain(format!("grid points must be positive, got {t}")));
        }
        let ev = prod.evaluate(t)?;
        worst = worst.max((ev.value - 1.0).norm() + ev.tail_bound);
    }
    Ok(worst)
}

/// `count` points t_i = T·(i/count)^γ, i = 1..count.
pub fn graded_grid(t_max: f64, count: usize, gamma: f64) -> Vec<f64> {
    (1..=count)
        .map(|i| t_max * (i as f64 / count as f64).powf(gamma))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn power_lowering() {
        let s = kernel_to_hseries(&KernelSpec::Power { alpha: 0.3 }, p()).unwrap();
        assert_eq!(s.terms(), &[HTerm::new(1.0, 0.3)]);
    }

    #[test]
    fn ml_lowering_alternates() {
        let s = kernel_to_hseries(&KernelSpec::Ml { alpha: 0.2, beta: 0.6 }, p()).unwrap();
        let head: Vec<(f64, f64)> = s.terms()[..3].iter().map(|t| (t.coeff.re, t.exponent)).collect();
        for ((c, e), (wc, we)) in head.into_iter().zip([(1.0, 0.6), (-1.0, 0.8), (1.0, 1.0)]) {
            assert_eq!(c, wc);
            assert!((e - we).abs() < 1e-12);
        }
        assert!(s.is_truncated());
    }

    #[test]
    fn tempered_pointwise() {
        let s = kernel_to_hseries(&KernelSpec::Tempered { alpha: 0.5, rho: 1.0 }, p()).unwrap();
        let want = (-1.0f64).exp() / std::f64::consts::PI.sqrt();
        assert!((s.eval(1.0).unwrap().re - want).abs() < 1e-14);
    }

    #[test]
    fn validation() {
        assert!(KernelSpec::Power { alpha: 1.0 }.validate().is_err());
        assert!(KernelSpec::Ml { alpha: 0.7, beta: 0.3 }.validate().is_err());
        assert!(KernelSpec::Series { alpha: 0.5, a: vec![0.0, 1.0] }.validate().is_err());
        assert!(KernelSpec::Series { alpha: 1.0, a: vec![1.0, 2.0] }.validate().is_err());
        assert!(KernelSpec::unit().validate().is_ok());
        let dup = KernelSpec::Sum {
            terms: vec![
                PowerTerm { weight: 1.0, order: 0.5 },
                PowerTerm { weight: 2.0, order: 0.5 },
            ],
        };
        assert!(dup.validate().is_err());
    }

    #[test]
    fn associate_of_power_is_power() {
        let r = associate_kernel(0.37, &[1.0], 6).unwrap();
        assert_eq!(r.b, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(associate_kernel(0.5, &[0.0, 1.0], 3).is_err());
    }

    #[test]
    fn associate_of_bessel_first_coefficient() {
        let alpha = 0.3;
        let r = associate_kernel(alpha, &[1.0, -1.0 / alpha], 2).unwrap();
        assert!((r.b[1] - 1.0 / (1.0 - alpha)).abs() < 1e-14);
    }

    #[test]
    fn associate_growth_warning() {
        let r = associate_kernel(0.5, &[1.0, 1000.0], 12).unwrap();
        assert!(r.warning.is_some());
        let r = associate_kernel(0.5, &[1.0, 0.1], 12).unwrap();
        assert!(r.warning.is_none());
    }

    #[test]
    fn kernel_json_schema() {
        let j = r#"{"type":"ml","alpha":0.3,"beta":0.7}"#;
        let k: KernelSpec = serde_json::from_str(j).unwrap();
        assert_eq!(k, KernelSpec::Ml { alpha: 0.3, beta: 0.7 });
        let j = r#"{"type":"sum","terms":[{"weight":1,"order":0.4}]}"#;
        assert!(serde_json::from_str::<KernelSpec>(j).is_ok());
        let s = serde_json::to_string(&KernelSpec::Power { alpha: 0.5 }).unwrap();
        assert_eq!(s, r#"{"type":"power","alpha":0.5}"#);
    }

    #[test]
    fn power_pair_residual_is_roundoff() {
        let pair = SoninePair::power(0.7).unwrap();
        let grid = graded_grid(5.0, 32, 2.0);
        assert!(sonine_residual(&pair, &grid, p()).unwrap() <= 1e-13);
    }

    #[test]
    fn unit_pair_is_identity() {
        let pair = SoninePair::unit();
        assert_eq!(pair.k_lowered(p()).unwrap(), Lowered::Identity);
        assert!(pair.k_series(p()).is_err());
        assert_eq!(sonine_residual(&pair, &[0.5, 3.0], p()).unwrap(), 0.0);
    }

    #[test]
    fn sum_inverse_matches_ml_kernel() {
        let pair = SoninePair::from_kernel(KernelSpec::Sum {
            terms: vec![
                PowerTerm { weight: 1.0, order: 0.6 },
                PowerTerm { weight: 1.0, order: 0.3 },
            ],
        })
        .unwrap();
        let generic = pair.k_series(p()).unwrap();
        let ml = kernel_to_hseries(&KernelSpec::Ml { alpha: 0.3, beta: 0.7 }, p()).unwrap();
        for t in [0.1, 1.0, 3.0] {
            assert!((generic.eval(t).unwrap() - ml.eval(t).unwrap()).norm() < 1e-12);
        }
    }
}
