//! Rational functions of the symbol S_κ reduced to h-series: the resolvent
//! series l_{κ,λ} = Σ λ^{j-1}κʲ, its companion L_{κ,λ} = k * l, polynomial
//! roots and partial fractions.

use crate::error::{Error, Result};
use crate::hseries::{HSeries, TruncationPolicy};
use crate::kernels::SoninePair;
use num_complex::Complex64 as C64;

/// l_{κ,λ} = Σ_{j≥1} λ^{j-1}κʲ, the series of I/(S_κ - λ).
pub fn conv_series_l(pair: &SoninePair, lambda: C64, policy: TruncationPolicy) -> Result<HSeries> {
    Ok(pair.kappa_series(policy)?.resolvent(lambda))
}

/// L_{κ,λ} = h₁ + h₁ * Σ_{j≥1} λʲκʲ = h₁ + λ·h₁ * l; L(0) = 1.
#[allow(non_snake_case)]
pub fn conv_series_L(pair: &SoninePair, lambda: C64, policy: TruncationPolicy) -> Result<HSeries> {
    let l = conv_series_l(pair, lambda, policy)?;
    Ok(big_l_from_l(&l, lambda, policy))
}

fn big_l_from_l(l: &HSeries, lambda: C64, policy: TruncationPolicy) -> HSeries {
    let h1 = HSeries::zero_with(policy).add(&HSeries::h(1.0));
    h1.add(&h1.convolve(l).scale(lambda))
}

/// l^m = Σ_{j≥m} C(j-1, m-1)·λ^{j-m}κʲ, the series of I/(S_κ - λ)^m.
pub fn resolvent_power(pair: &SoninePair, lambda: C64, m: u32, policy: TruncationPolicy) -> Result<HSeries> {
    conv_series_l(pair, lambda, policy)?.power(m)
}

/// Cached l and L for one (κ, λ).
#[derive(Debug, Clone)]
pub struct ResolventSeries {
    pub pair: SoninePair,
    pub lambda: C64,
    /// Number of complete powers κʲ represented in `l`.
    pub j_max: usize,
    pub l: HSeries,
    pub big_l: HSeries,
    /// L computed as k * l, kept for cross-checking.
    pub big_l_via_k: HSeries,
}

impl ResolventSeries {
    pub fn new(pair: &SoninePair, lambda: C64, policy: TruncationPolicy) -> Result<ResolventSeries> {
        let l = conv_series_l(pair, lambda, policy)?;
        let big_l = big_l_from_l(&l, lambda, policy);
        let big_l_via_k = pair.k_lowered(policy)?.convolve(&l);
        let p = pair.kappa_order();
        let j_max = match l.horizon() {
            None => usize::MAX,
            Some(h) => ((h / p).ceil() as usize).saturating_sub(1),
        };
        Ok(ResolventSeries {
            pair: pair.clone(),
            lambda,
            j_max,
            l,
            big_l,
            big_l_via_k,
        })
    }
}

/// a₀ + a₁S + … + a_nSⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPolynomial {
    coeffs: Vec<C64>,
}

impl OperatorPolynomial {
    /// Coefficients in ascending powers; trailing zeros are rejected.
    pub fn new(coeffs: Vec<C64>) -> Result<OperatorPolynomial> {
        match coeffs.last() {
            None => Err(Error::usage("polynomial needs at least one coefficient")),
            Some(c) if *c == C64::new(0.0, 0.0) => Err(Error::usage("leading coefficient must be non-zero")),
            Some(_) if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) => {
                Err(Error::usage("coefficients must be finite"))
            }
            Some(_) => Ok(OperatorPolynomial { coeffs }),
        }
    }

    pub fn from_real(coeffs: &[f64]) -> Result<OperatorPolynomial> {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, z: C64) -> C64 {
        horner(&self.coeffs, z)
    }

    pub fn derivative(&self) -> Vec<C64> {
        derivative(&self.coeffs)
    }

    /// P_i(S) = Σ_{j=i+1}^{n} a_j S^{j-i-1}.
    pub fn tail_quotient(&self, i: usize) -> Vec<C64> {
        self.coeffs[i + 1..].to_vec()
    }

    /// Σ|a_j||z|^j, the magnitude against which residuals are judged.
    pub fn scale_at(&self, z: C64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }
}

fn horner(c: &[C64], z: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, a| acc * z + a)
}

fn derivative(c: &[C64]) -> Vec<C64> {
    c.iter().enumerate().skip(1).map(|(j, a)| a * j as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Roots {
    /// (root, multiplicity).
    pub roots: Vec<(C64, usize)>,
    pub warning: Option<String>,
}

const DK_ITERATIONS: usize = 200;

fn cluster_tol(radius: f64, m: usize) -> f64 {
    (1.0 + radius) * 1e-8f64.max((64.0 * f64::EPSILON).powf(1.0 / m as f64))
}

/// Roots by simultaneous (Durand-Kerner) iteration, with nearby roots merged
/// into clusters of higher multiplicity and polished by Newton's method on
/// the appropriate derivative.
pub fn poly_roots(p: &OperatorPolynomial) -> Result<Roots> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::usage("polynomial of degree 0 has no roots"));
    }
    let lead = p.coeffs[n];
    let monic: Vec<C64> = p.coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..DK_ITERATIONS {
        let mut moved: f64 = 0.0;
        for k in 0..n {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    den *= z[k] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = C64::new(f64::EPSILON, 0.0);
            }
            let step = horner(&monic, z[k]) / den;
            z[k] -= step;
            moved = moved.max(step.norm() / (1.0 + z[k].norm()));
        }
        if moved < 1e-16 {
            break;
        }
    }
    if z.iter().any(|r| !(r.re.is_finite() && r.im.is_finite())) {
        return Err(Error::nonconv("root iteration diverged"));
    }

    // Clusters grown from each seed: the largest group of m nearest roots
    // that fits within the multiplicity-m tolerance around its centroid.
    let rmax = z.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let mut free: Vec<C64> = z.clone();
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    while let Some(seed) = free.first().copied() {
        let mut order: Vec<usize> = (0..free.len()).collect();
        order.sort_by(|&a, &b| (free[a] - seed).norm().total_cmp(&(free[b] - seed).norm()));
        let mut take = 1;
        let mut centre = seed;
        for m in (2..=free.len()).rev() {
            let c: C64 = order[..m].iter().map(|&i| free[i]).sum::<C64>() / m as f64;
            if order[..m].iter().all(|&i| (free[i] - c).norm() <= cluster_tol(rmax, m)) {
                take = m;
                centre = c;
                break;
            }
        }
        let mut chosen: Vec<usize> = order[..take].to_vec();
        chosen.sort_unstable_by(|a, b| b.cmp(a));
        for i in chosen {
            free.remove(i);
        }
        clusters.push((centre, take));
    }

    let mut warning = None;
    for a in 0..clusters.len() {
        for b in a + 1..clusters.len() {
            let d = (clusters[a].0 - clusters[b].0).norm();
            if d <= 10.0 * cluster_tol(rmax, clusters[a].1 + clusters[b].1) {
                warning = Some(format!(
                    "roots {} and {} are close ({d:.3e}); multiplicities may be ambiguous",
                    clusters[a].0, clusters[b].0
                ));
            }
        }
    }

    let mut out = Vec::with_capacity(clusters.len());
    for (mut r, m) in clusters {
        let mut d = monic.clone();
        for _ in 1..m {
            d = derivative(&d);
        }
        let dd = derivative(&d);
        for _ in 0..8 {
            let f = horner(&d, r);
            let fp = horner(&dd, r);
            if fp.norm() == 0.0 {
                break;
            }
            let cand = r - f / fp;
            if horner(&d, cand).norm() < f.norm() {
                r = cand;
            } else {
                break;
            }
        }
        let scale = p.scale_at(r);
        if p.eval(r).norm() > 1e-10 * scale {
            return Err(Error::nonconv(format!(
                "root {r} has residual {:.3e} (scale {scale:.3e})",
                p.eval(r).norm()
            )));
        }
        out.push((r, m));
    }
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    Ok(Roots { roots: out, warning })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractionDecomposition {
    pub roots: Vec<C64>,
    pub multiplicities: Vec<usize>,
    /// residues[numerator][root][j-1] is the coefficient of 1/(S - λ)^j.
    pub residues: Vec<Vec<Vec<C64>>>,
    /// Denominator and all numerators have real coefficients.
    pub real: bool,
    pub warning: Option<String>,
}

impl PartialFractionDecomposition {
    /// Σ c_{ij}/(s - λᵢ)^j for one numerator.
    pub fn reconstruct(&self, which: usize, s: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (i, &lam) in self.roots.iter().enumerate() {
            for (j, c) in self.residues[which][i].iter().enumerate() {
                acc += c / (s - lam).powu(j as u32 + 1);
            }
        }
        acc
    }
}

/// Taylor coefficients of N(S)/P(S)·(S-λ)^m around a root λ of multiplicity m,
/// up to order m-1, from the factored form of P.
fn local_expansion(num: &[C64], lead: C64, roots: &[(C64, usize)], i: usize) -> Vec<C64> {
    let (lam, m) = roots[i];
    // Q(S) = lead·Π_{k≠i} (S-λ_k)^{m_k} in powers of u = S - λ
    let mut q = vec![lead];
    for (k, &(rk, mk)) in roots.iter().enumerate() {
        if k == i {
            continue;
        }
        for _ in 0..mk {
            let mut next = vec![C64::new(0.0, 0.0); q.len() + 1];
            for (d, c) in q.iter().enumerate() {
                next[d] += c * (lam - rk);
                next[d + 1] += c;
            }
            q = next;
        }
    }
    // N in powers of u: N^{(d)}(λ)/d!
    let mut nn = Vec::with_capacity(m);
    let mut der = num.to_vec();
    let mut fact = 1.0;
    for d in 0..m {
        if d > 0 {
            fact *= d as f64;
        }
        nn.push(horner(&der, lam) / fact);
        der = derivative(&der);
    }
    // power-series division N/Q
    let mut out: Vec<C64> = Vec::with_capacity(m);
    for d in 0..m {
        let mut s = nn[d];
        for e in 1..=d.min(q.len() - 1) {
            s -= q[e] * out[d - e];
        }
        out.push(s / q[0]);
    }
    out
}

/// Residues of Nᵢ(S)/P(S) for every numerator.
pub fn partial_fractions(p: &OperatorPolynomial, numerators: &[OperatorPolynomial]) -> Result<PartialFractionDecomposition> {
    let roots = poly_roots(p)?;
    partial_fractions_with_roots(p, numerators, roots)
}

/// As [`partial_fractions`], with roots supplied by the caller.
pub fn partial_fractions_with_roots(
    p: &OperatorPolynomial,
    numerators: &[OperatorPolynomial],
    roots: Roots,
) -> Result<PartialFractionDecomposition> {
    let n = p.degree();
    if roots.roots.iter().map(|r| r.1).sum::<usize>() != n {
        return Err(Error::usage("root multiplicities do not sum to the degree"));
    }
    for num in numerators {
        if num.degree() >= n {
            return Err(Error::usage(format!(
                "numerator degree {} must be below the denominator degree {n}",
                num.degree()
            )));
        }
    }
    let dp = p.derivative();
    let lead = p.coeffs[n];
    let residues = numerators
        .iter()
        .map(|num| {
            roots
                .roots
                .iter()
                .enumerate()
                .map(|(i, &(lam, m))| {
                    if m == 1 {
                        vec![num.eval(lam) / horner(&dp, lam)]
                    } else {
                        // c_{i,j} is the (m-j)-th Taylor coefficient
                        let mut t = local_expansion(&num.coeffs, lead, &roots.roots, i);
                        t.reverse();
                        t
                    }
                })
                .collect()
        })
        .collect();
    Ok(PartialFractionDecomposition {
        roots: roots.roots.iter().map(|r| r.0).collect(),
        multiplicities: roots.roots.iter().map(|r| r.1).collect(),
        residues,
        real: p.is_real() && numerators.iter().all(|q| q.is_real()),
        warning: roots.warning,
    })
}

/// An h-series assembled from partial fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSeries {
    pub series: HSeries,
    /// For real problems: largest mismatch between the residue of a root and
    /// the conjugate of the residue of its conjugate root.
    pub imag_residue: f64,
}

/// Relative pruning level used when combining resolvent series; differences
/// of resolvents cancel their leading powers, which should vanish exactly.
pub const ASSEMBLY_TOL: f64 = 1e-11;

fn near_real(z: C64) -> bool {
    z.im.abs() <= 1e-10 * (1.0 + z.norm())
}

/// Σ_i Σ_j c_{ij}·l_{κ,λᵢ}^j for numerator `which`. For real problems
/// conjugate roots are combined as 2·Re(c·l^j), so the result is real.
pub fn rational_to_hseries(
    decomp: &PartialFractionDecomposition,
    which: usize,
    pair: &SoninePair,
    policy: TruncationPolicy,
) -> Result<RationalSeries> {
    rational_to_hseries_with(decomp, which, policy, |lam, m| resolvent_power(pair, lam, m, policy))
}

/// As [`rational_to_hseries`] with a caller-supplied builder for the basis
/// series attached to (λ, j). Used to substitute L-type series for l-type ones.
pub fn rational_to_hseries_with(
    decomp: &PartialFractionDecomposition,
    which: usize,
    policy: TruncationPolicy,
    mut basis: impl FnMut(C64, u32) -> Result<HSeries>,
) -> Result<RationalSeries> {
    let res = decomp
        .residues
        .get(which)
        .ok_or_else(|| Error::usage(format!("no numerator with index {which}")))?;
    let mut parts: Vec<(C64, HSeries)> = Vec::new();
    let mut imag_residue: f64 = 0.0;
    for (i, &lam) in decomp.roots.iter().enumerate() {
        let mut lam = lam;
        let mut weight = 1.0;
        if decomp.real {
            if near_real(lam) {
                lam = C64::new(lam.re, 0.0);
            } else if lam.im < 0.0 {
                continue;
            } else {
                weight = 2.0;
                if let Some(k) = (0..decomp.roots.len()).find(|&k| {
                    (decomp.roots[k] - lam.conj()).norm() <= 1e-8 * (1.0 + lam.norm())
                        && decomp.multiplicities[k] == decomp.multiplicities[i]
                }) {
                    for (a, b) in res[i].iter().zip(&res[k]) {
                        imag_residue = imag_residue.max((a - b.conj()).norm());
                    }
                } else {
                    return Err(Error::domain(format!("root {lam} of a real polynomial has no conjugate partner")));
                }
            }
        }
        for (j, &c) in res[i].iter().enumerate() {
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            let mut s = basis(lam, j as u32 + 1)?.scale(c * weight);
            if decomp.real {
                s = s.real_part();
            }
            parts.push((C64::new(1.0, 0.0), s));
        }
    }
    let items: Vec<(C64, &HSeries)> = parts.iter().map(|(w, s)| (*w, s)).collect();
    let series = if items.is_empty() {
        HSeries::zero_with(policy)
    } else {
        HSeries::linear_combination(&items, ASSEMBLY_TOL)
    };
    Ok(RationalSeries { series, imag_residue })
}
