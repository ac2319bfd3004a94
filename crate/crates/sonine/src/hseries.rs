//! Generalized power series Σ cⱼ·h_{βⱼ}(t) with h_β(t) = t^{β-1}/Γ(β).
//!
//! Since h_a * h_b = h_{a+b} under the Laplace convolution, the series form a
//! commutative algebra that is closed under convolution, and products are
//! computed term by term.
//!
//! Every series carries a *horizon*: all terms with exponent below the horizon
//! are exact, everything at or beyond it was dropped (policy cap, exponent cap,
//! or overflow). A product is only exact up to `min(ha + min_b, hb + min_a)`,
//! and terms past that point are removed rather than kept incomplete. A series
//! is truncated iff its horizon is finite.

use crate::error::{Error, Result};
use crate::specfun::{ln_gamma, ln_gamma_sign};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exponents closer than this are merged into one term.
pub const MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    pub max_exponent: f64,
    pub prune_tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            max_terms: 512,
            max_exponent: 200.0,
            prune_tol: 1e-16,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(Error::usage("policy.max_terms must be >= 1"));
        }
        if !(self.max_exponent > 0.0) {
            return Err(Error::usage("policy.max_exponent must be positive"));
        }
        if !(self.prune_tol >= 0.0 && self.prune_tol < 1.0) {
            return Err(Error::usage("policy.prune_tol must lie in [0, 1)"));
        }
        Ok(())
    }

    pub fn stricter(&self, other: &TruncationPolicy) -> TruncationPolicy {
        TruncationPolicy {
            max_terms: self.max_terms.min(other.max_terms),
            max_exponent: self.max_exponent.min(other.max_exponent),
            prune_tol: self.prune_tol.max(other.prune_tol),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HTerm {
    pub coeff: C64,
    pub exponent: f64,
}

impl HTerm {
    pub fn new(coeff: impl Into<C64>, exponent: f64) -> Self {
        HTerm {
            coeff: coeff.into(),
            exponent,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HSeries {
    terms: Vec<HTerm>,
    policy: TruncationPolicy,
    horizon: f64,
}

/// Value of a series at a point together with an estimate of the dropped tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: C64,
    pub tail_bound: f64,
}

struct Raw {
    e: f64,
    c: C64,
    mag: f64,
}

fn snap(e: f64) -> f64 {
    let r = e.round();
    if (e - r).abs() <= MERGE_TOL && r > 0.0 {
        r
    } else {
        e
    }
}

/// Sort, merge, prune and cap. `noise_tol` raises the relative pruning
/// threshold above the policy's for callers that know the inputs carry
/// larger cancellation noise.
fn assemble(mut raw: Vec<Raw>, policy: TruncationPolicy, horizon: f64, noise_tol: f64) -> HSeries {
    let mut horizon = horizon;
    raw.retain(|r| r.e < horizon - MERGE_TOL);
    raw.sort_by(|a, b| a.e.total_cmp(&b.e));
    let mut out: Vec<HTerm> = Vec::new();
    let mut i = 0;
    while i < raw.len() {
        let e0 = raw[i].e;
        let mut c = C64::new(0.0, 0.0);
        let mut mag = 0.0;
        let mut n = 0usize;
        while i < raw.len() && raw[i].e - e0 <= MERGE_TOL {
            c += raw[i].c;
            mag += raw[i].mag;
            n += 1;
            i += 1;
        }
        let e = snap(e0);
        if !(c.re.is_finite() && c.im.is_finite()) || e > policy.max_exponent + MERGE_TOL {
            horizon = horizon.min(e);
            break;
        }
        let rel = policy
            .prune_tol
            .max(noise_tol)
            .max(n as f64 * f64::EPSILON);
        if c.norm() <= rel * mag {
            continue;
        }
        out.push(HTerm { coeff: c, exponent: e });
    }
    if out.len() > policy.max_terms {
        horizon = horizon.min(out[policy.max_terms].exponent);
        out.truncate(policy.max_terms);
    }
    HSeries {
        terms: out,
        policy,
        horizon,
    }
}

impl HSeries {
    /// Normalizes a raw term list: merges near-equal exponents, sorts, prunes
    /// cancelled terms and applies the policy caps.
    pub fn new(terms: Vec<HTerm>, policy: TruncationPolicy) -> Result<HSeries> {
        policy.validate()?;
        let mut raw = Vec::with_capacity(terms.len());
        for t in terms {
            if !(t.exponent > 0.0) || !t.exponent.is_finite() {
                return Err(Error::domain(format!(
                    "h-series exponent must be positive and finite, got {}",
                    t.exponent
                )));
            }
            raw.push(Raw {
                e: t.exponent,
                c: t.coeff,
                mag: t.coeff.norm(),
            });
        }
        Ok(assemble(raw, policy, f64::INFINITY, 0.0))
    }

    /// Builds a series from already normalized parts, checking the invariants
    /// without touching the coefficients.
    pub fn from_parts(terms: Vec<HTerm>, policy: TruncationPolicy, horizon: Option<f64>) -> Result<HSeries> {
        policy.validate()?;
        let horizon = horizon.unwrap_or(f64::INFINITY);
        for (i, t) in terms.iter().enumerate() {
            if !(t.exponent > 0.0) || !t.exponent.is_finite() {
                return Err(Error::domain(format!("non-positive exponent {}", t.exponent)));
            }
            if i > 0 && t.exponent <= terms[i - 1].exponent {
                return Err(Error::usage("exponents must be strictly increasing"));
            }
            if t.exponent >= horizon {
                return Err(Error::usage("term at or beyond the horizon"));
            }
        }
        if terms.len() > policy.max_terms {
            return Err(Error::usage("more terms than the policy allows"));
        }
        Ok(HSeries {
            terms,
            policy,
            horizon,
        })
    }

    pub fn zero() -> HSeries {
        Self::zero_with(TruncationPolicy::default())
    }

    pub fn zero_with(policy: TruncationPolicy) -> HSeries {
        HSeries {
            terms: Vec::new(),
            policy,
            horizon: f64::INFINITY,
        }
    }

    /// The single function h_β. Panics if β is not positive.
    pub fn h(beta: f64) -> HSeries {
        Self::monomial(1.0, beta)
    }

    /// c·h_β. Panics if β is not positive.
    pub fn monomial(c: impl Into<C64>, beta: f64) -> HSeries {
        HSeries::new(vec![HTerm::new(c, beta)], TruncationPolicy::default())
            .expect("monomial exponent must be positive")
    }

    /// Marks the series as known only below `horizon` (used by lowerings of
    /// infinite expansions).
    pub(crate) fn with_horizon(mut self, horizon: f64) -> HSeries {
        if horizon < self.horizon {
            self.terms.retain(|t| t.exponent < horizon - MERGE_TOL);
            self.horizon = horizon;
        }
        self
    }

    pub fn terms(&self) -> &[HTerm] {
        &self.terms
    }

    pub fn policy(&self) -> TruncationPolicy {
        self.policy
    }

    /// Exponent below which the series is exact, `None` if exact everywhere.
    pub fn horizon(&self) -> Option<f64> {
        if self.horizon.is_finite() {
            Some(self.horizon)
        } else {
            None
        }
    }

    pub fn is_truncated(&self) -> bool {
        self.horizon.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<f64> {
        self.terms.first().map(|t| t.exponent)
    }

    fn min_exp_or_horizon(&self) -> f64 {
        self.min_exponent().unwrap_or(self.horizon)
    }

    fn exact_zero(&self) -> bool {
        self.terms.is_empty() && !self.horizon.is_finite()
    }

    /// Coefficient of h_β (zero if absent).
    pub fn coefficient(&self, beta: f64) -> C64 {
        self.terms
            .iter()
            .find(|t| (t.exponent - beta).abs() <= MERGE_TOL)
            .map(|t| t.coeff)
            .unwrap_or_default()
    }

    /// Re-normalizes under another policy.
    pub fn with_policy(&self, policy: TruncationPolicy) -> Result<HSeries> {
        policy.validate()?;
        Ok(assemble(self.raw(C64::new(1.0, 0.0)), policy, self.horizon, 0.0))
    }

    fn raw(&self, w: C64) -> Vec<Raw> {
        self.terms
            .iter()
            .map(|t| {
                let c = w * t.coeff;
                Raw {
                    e: t.exponent,
                    c,
                    mag: c.norm(),
                }
            })
            .collect()
    }

    pub fn add(&self, other: &HSeries) -> HSeries {
        Self::linear_combination(&[(C64::new(1.0, 0.0), self), (C64::new(1.0, 0.0), other)], 0.0)
    }

    pub fn sub(&self, other: &HSeries) -> HSeries {
        Self::linear_combination(&[(C64::new(1.0, 0.0), self), (C64::new(-1.0, 0.0), other)], 0.0)
    }

    pub fn scale(&self, c: impl Into<C64>) -> HSeries {
        let c = c.into();
        if c == C64::new(0.0, 0.0) {
            return HSeries::zero_with(self.policy);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| HTerm {
                coeff: t.coeff * c,
                exponent: t.exponent,
            })
            .collect();
        HSeries {
            terms,
            policy: self.policy,
            horizon: self.horizon,
        }
    }

    /// Σ wᵢ·sᵢ. Terms whose merged coefficient is below `rel_tol` times the
    /// magnitude of their contributions are treated as cancelled.
    pub fn linear_combination(items: &[(C64, &HSeries)], rel_tol: f64) -> HSeries {
        let mut policy: Option<TruncationPolicy> = None;
        let mut horizon = f64::INFINITY;
        let mut raw = Vec::new();
        for (w, s) in items {
            policy = Some(match policy {
                None => s.policy,
                Some(p) => p.stricter(&s.policy),
            });
            if *w == C64::new(0.0, 0.0) {
                continue;
            }
            horizon = horizon.min(s.horizon);
            raw.extend(s.raw(*w));
        }
        assemble(raw, policy.unwrap_or_default(), horizon, rel_tol)
    }

    /// Laplace convolution, exact up to the combined horizon.
    pub fn convolve(&self, other: &HSeries) -> HSeries {
        self.convolve_with_tol(other, 0.0)
    }

    /// Convolution with an extra relative pruning threshold for cancelled terms.
    pub fn convolve_with_tol(&self, other: &HSeries, rel_tol: f64) -> HSeries {
        let policy = self.policy.stricter(&other.policy);
        if self.exact_zero() || other.exact_zero() {
            return HSeries::zero_with(policy);
        }
        let ma = self.min_exp_or_horizon();
        let mb = other.min_exp_or_horizon();
        let limit = (self.horizon + mb).min(other.horizon + ma);
        let cut = policy.max_exponent + MERGE_TOL;
        let mut skipped = f64::INFINITY;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for ta in &self.terms {
            if ta.exponent + mb >= limit - MERGE_TOL {
                break;
            }
            if ta.exponent + mb > cut {
                skipped = skipped.min(ta.exponent + mb);
                break;
            }
            for tb in &other.terms {
                let e = ta.exponent + tb.exponent;
                if e >= limit - MERGE_TOL {
                    break;
                }
                if e > cut {
                    skipped = skipped.min(e);
                    break;
                }
                let c = ta.coeff * tb.coeff;
                raw.push(Raw {
                    e,
                    c,
                    mag: ta.coeff.norm() * tb.coeff.norm(),
                });
            }
        }
        assemble(raw, policy, limit.min(skipped), rel_tol)
    }

    /// n-fold convolution power, n ≥ 1.
    pub fn power(&self, n: u32) -> Result<HSeries> {
        if n == 0 {
            return Err(Error::domain("convolution power requires n >= 1"));
        }
        let mut base = self.clone();
        let mut acc: Option<HSeries> = None;
        let mut k = n;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.convolve(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.convolve(&base);
        }
        Ok(acc.unwrap())
    }

    /// Σ_{j≥1} λ^{j-1}·selfʲ, the solution of l = κ + λ·κ * l.
    ///
    /// Coefficients are obtained by forward substitution on the additive
    /// lattice generated by the exponents of κ. Summing the powers κʲ directly
    /// would expand binomials whose terms cancel catastrophically for
    /// multi-term kernels.
    pub fn resolvent(&self, lambda: impl Into<C64>) -> HSeries {
        let lambda = lambda.into();
        if self.terms.is_empty() || lambda == C64::new(0.0, 0.0) {
            return self.clone();
        }
        let policy = self.policy;
        let (lattice, mut horizon) = exponent_lattice(&self.terms, policy);
        horizon = horizon.min(self.horizon);
        let find = |e: f64| -> Option<usize> {
            let i = lattice.partition_point(|&x| x < e - 1e-10);
            (i < lattice.len() && (lattice[i] - e).abs() <= 1e-10).then_some(i)
        };
        let mut coef: Vec<C64> = vec![C64::new(0.0, 0.0); lattice.len()];
        let mut out = Vec::with_capacity(lattice.len());
        for (i, &e) in lattice.iter().enumerate() {
            if e >= horizon - MERGE_TOL {
                break;
            }
            let k_e = self.coefficient(e);
            let mut acc = k_e;
            let mut mag = k_e.norm();
            let mut n = 1usize;
            for a in &self.terms {
                if a.exponent >= e - MERGE_TOL {
                    break;
                }
                if let Some(j) = find(e - a.exponent) {
                    let v = lambda * a.coeff * coef[j];
                    acc += v;
                    mag += v.norm();
                    n += 1;
                }
            }
            if !(acc.re.is_finite() && acc.im.is_finite()) {
                horizon = e;
                break;
            }
            let rel = policy.prune_tol.max(n as f64 * f64::EPSILON);
            if acc.norm() <= rel * mag {
                continue;
            }
            coef[i] = acc;
            out.push(HTerm { coeff: acc, exponent: e });
        }
        HSeries {
            terms: out,
            policy,
            horizon,
        }
    }

    /// Value at `t` with a geometric-ratio estimate of the dropped tail.
    pub fn evaluate(&self, t: f64) -> Result<Evaluation> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("evaluation point must be >= 0, got {t}")));
        }
        if t == 0.0 {
            return Ok(Evaluation {
                value: self.value_at_zero()?,
                tail_bound: 0.0,
            });
        }
        let lt = t.ln();
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for term in &self.terms {
            let v = ((term.exponent - 1.0) * lt - ln_gamma(term.exponent)).exp();
            re.add(term.coeff.re * v);
            im.add(term.coeff.im * v);
        }
        Ok(Evaluation {
            value: C64::new(re.value(), im.value()),
            tail_bound: self.tail_bound(t),
        })
    }

    /// n-th derivative at t > 0, term by term: h_β⁽ⁿ⁾ = h_{β-n}, where
    /// 1/Γ vanishes at the poles. Defined for every exponent since t > 0.
    pub fn eval_derivative(&self, t: f64, n: u32) -> Result<C64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("pointwise derivatives need t > 0, got {t}")));
        }
        let lt = t.ln();
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for term in &self.terms {
            let b = term.exponent - n as f64;
            let v = match ln_gamma_sign(b) {
                Ok((lg, sign)) => sign * ((b - 1.0) * lt - lg).exp(),
                Err(_) => 0.0,
            };
            re.add(term.coeff.re * v);
            im.add(term.coeff.im * v);
        }
        Ok(C64::new(re.value(), im.value()))
    }

    /// Shorthand for the value part of [`HSeries::evaluate`].
    pub fn eval(&self, t: f64) -> Result<C64> {
        Ok(self.evaluate(t)?.value)
    }

    fn term_magnitude(term: &HTerm, lt: f64) -> f64 {
        let c = term.coeff.norm();
        if c == 0.0 {
            return 0.0;
        }
        (c.ln() + (term.exponent - 1.0) * lt - ln_gamma(term.exponent)).exp()
    }

    /// Majorant for the part of the series beyond the horizon: the decay rate
    /// between the last two exponent bands is extrapolated geometrically.
    pub fn tail_bound(&self, t: f64) -> f64 {
        if !self.horizon.is_finite() {
            return 0.0;
        }
        let Some(p0) = self.min_exponent() else {
            return f64::INFINITY;
        };
        let h = self.horizon;
        // bands at least as wide as the exponent spacing near the horizon,
        // so that lattices with steps above p0 still fill both
        let n = self.terms.len();
        let gap = self.terms[n.saturating_sub(16)..]
            .windows(2)
            .map(|w| w[1].exponent - w[0].exponent)
            .fold(0.0f64, f64::max);
        let w = p0.max(0.5).max(gap * (1.0 + 1e-9));
        let lt = t.ln();
        let (mut upper, mut lower, mut n_up) = (0.0f64, 0.0f64, 0usize);
        for term in self.terms.iter().rev() {
            if term.exponent >= h - w {
                upper = upper.max(Self::term_magnitude(term, lt));
                n_up += 1;
            } else if term.exponent >= h - 2.0 * w {
                lower = lower.max(Self::term_magnitude(term, lt));
            } else {
                break;
            }
        }
        if upper == 0.0 {
            // exact zeros right below the horizon extrapolate to a zero tail
            return 0.0;
        }
        if lower == 0.0 {
            return f64::INFINITY;
        }
        let q = upper / lower;
        if q >= 1.0 {
            return f64::INFINITY;
        }
        n_up as f64 * upper * q / (1.0 - q)
    }

    /// Term-wise derivative: c·h_β ↦ c·h_{β-1}; constants vanish.
    pub fn differentiate(&self) -> Result<HSeries> {
        let mut raw = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.exponent < 1.0 - MERGE_TOL {
                return Err(Error::domain(format!(
                    "term {}·h_{} has exponent < 1 and is not differentiable within C_-1",
                    t.coeff, t.exponent
                )));
            }
            if (t.exponent - 1.0).abs() <= MERGE_TOL {
                continue;
            }
            raw.push(Raw {
                e: t.exponent - 1.0,
                c: t.coeff,
                mag: t.coeff.norm(),
            });
        }
        let horizon = if self.horizon.is_finite() {
            (self.horizon - 1.0).max(0.0)
        } else {
            f64::INFINITY
        };
        Ok(assemble(raw, self.policy, horizon, 0.0))
    }

    pub fn differentiate_n(&self, n: u32) -> Result<HSeries> {
        let mut s = self.clone();
        for _ in 0..n {
            s = s.differentiate()?;
        }
        Ok(s)
    }

    /// f(0): the coefficient of h_1, provided no term is singular at zero.
    pub fn value_at_zero(&self) -> Result<C64> {
        if let Some(t) = self.terms.iter().find(|t| t.exponent < 1.0 - MERGE_TOL) {
            return Err(Error::domain(format!(
                "term with exponent {} is singular at t = 0",
                t.exponent
            )));
        }
        Ok(self.coefficient(1.0))
    }

    /// f^{(j)}(0).
    pub fn derivative_at_zero(&self, j: u32) -> Result<C64> {
        self.differentiate_n(j)?.value_at_zero()
    }

    /// Series of real parts.
    pub fn real_part(&self) -> HSeries {
        let raw = self
            .terms
            .iter()
            .map(|t| Raw {
                e: t.exponent,
                c: C64::new(t.coeff.re, 0.0),
                mag: t.coeff.norm(),
            })
            .collect();
        assemble(raw, self.policy, self.horizon, 0.0)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
    }
}

/// Sorted additive closure of the exponents of `terms`, capped by the policy.
/// The second value is the first exponent left out (infinite if none).
///
/// Sums are carried in double-double so that every lattice point is the
/// correctly rounded value of its exact sum; plain summation drifts by more
/// than the merge tolerance after a few hundred additions.
fn exponent_lattice(terms: &[HTerm], policy: TruncationPolicy) -> (Vec<f64>, f64) {
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }
    fn add(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
        let (s, e) = two_sum(x.0, y.0);
        let e = e + x.1 + y.1;
        two_sum(s, e)
    }
    let cap = policy.max_exponent + MERGE_TOL;
    let mut set: Vec<(f64, f64)> = terms
        .iter()
        .map(|t| (t.exponent, 0.0))
        .filter(|e| e.0 <= cap)
        .collect();
    let mut cut = f64::INFINITY;
    loop {
        // set + set doubles the number of factors covered per pass
        let mut next = set.clone();
        for &x in &set {
            for &y in &set {
                let e = add(x, y);
                if e.0 > cap || e.0 >= cut {
                    break;
                }
                next.push(e);
            }
        }
        next.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        next.dedup_by(|a, b| (a.0 - b.0).abs() <= MERGE_TOL);
        if next.len() > policy.max_terms {
            cut = cut.min(next[policy.max_terms].0);
            next.truncate(policy.max_terms);
        }
        if next == set {
            break;
        }
        set = next;
    }
    if cut.is_infinite() {
        // smallest exponent past the cap that the closure would produce
        let last = set.last().map_or(0.0, |e| e.0);
        cut = set
            .iter()
            .flat_map(|&x| set.iter().map(move |&y| x.0 + y.0))
            .filter(|&e| e > last + MERGE_TOL)
            .fold(f64::INFINITY, f64::min);
    }
    (set.into_iter().map(|e| snap(e.0)).collect(), cut)
}

#[derive(Default)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn hs_normalize(terms: Vec<HTerm>, policy: TruncationPolicy) -> Result<HSeries> {
    HSeries::new(terms, policy)
}

pub fn hs_convolve(a: &HSeries, b: &HSeries) -> HSeries {
    a.convolve(b)
}

pub fn hs_power(a: &HSeries, n: u32) -> Result<HSeries> {
    a.power(n)
}

pub fn hs_evaluate(a: &HSeries, t: f64) -> Result<Evaluation> {
    a.evaluate(t)
}

pub fn hs_differentiate(a: &HSeries) -> Result<HSeries> {
    a.differentiate()
}

pub fn hs_value_at_zero(a: &HSeries) -> Result<C64> {
    a.value_at_zero()
}

// ---------------------------------------------------------------------------
// JSON wire format

#[derive(Serialize, Deserialize)]
struct TermWire {
    re: f64,
    im: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct SeriesWire {
    terms: Vec<TermWire>,
    policy: TruncationPolicy,
    truncated: bool,
    horizon: Option<f64>,
}

impl Serialize for HSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesWire {
            terms: self
                .terms
                .iter()
                .map(|t| TermWire {
                    re: t.coeff.re,
                    im: t.coeff.im,
                    beta: t.exponent,
                })
                .collect(),
            policy: self.policy,
            truncated: self.is_truncated(),
            horizon: self.horizon(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = SeriesWire::deserialize(d)?;
        if w.truncated != w.horizon.is_some() {
            return Err(serde::de::Error::custom("truncated flag disagrees with horizon"));
        }
        let terms = w
            .terms
            .into_iter()
            .map(|t| HTerm::new(C64::new(t.re, t.im), t.beta))
            .collect();
        HSeries::from_parts(terms, w.policy, w.horizon).map_err(serde::de::Error::custom)
    }
}
