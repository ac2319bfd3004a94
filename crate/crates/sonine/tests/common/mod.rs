//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use sonine::{HSeries, HTerm};

/// erfc(x) for x ≥ 0: Taylor series of erf below 1.5, Lentz continued fraction above.
pub fn erfc(x: f64) -> f64 {
    assert!(x >= 0.0);
    if x < 1.5 {
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        while term.abs() > 1e-18 * sum.abs() {
            n += 1.0;
            term *= -x * x / n;
            sum += term / (2.0 * n + 1.0);
        }
        1.0 - 2.0 / std::f64::consts::PI.sqrt() * sum
    } else {
        // erfc x = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
        let tiny = 1e-300;
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for k in 1..2000 {
            let a = k as f64 / 2.0;
            d = x + a * d;
            if d == 0.0 {
                d = tiny;
            }
            c = x + a / c;
            if c == 0.0 {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-x * x).exp() / std::f64::consts::PI.sqrt() / f
    }
}

/// E_{1/2,1}(-x) = e^{x²}·erfc(x).
pub fn ml_half(x: f64) -> f64 {
    (x * x).exp() * erfc(x)
}

/// Adaptive Simpson quadrature on [a, b].
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Largest per-exponent relative imbalance |Σ sᵢcᵢ(e)| / Σ|sᵢcᵢ(e)| of a
/// signed combination, over exponents below every horizon.
pub fn termwise_rel(parts: &[(C64, &HSeries)]) -> f64 {
    termwise_rel_scaled(parts, &HSeries::zero())
}

/// Convolution of the coefficient magnitudes: bounds the size of every
/// partial sum that enters a coefficient of `a * b`.
pub fn abs_convolve(a: &HSeries, b: &HSeries) -> HSeries {
    let abs = |s: &HSeries| {
        let terms = s.terms().iter().map(|t| HTerm::new(C64::new(t.coeff.norm(), 0.0), t.exponent)).collect();
        HSeries::from_parts(terms, s.policy(), s.horizon()).expect("magnitudes")
    };
    abs(a).convolve(&abs(b))
}

/// Per-exponent discrepancy |Σ sᵢcᵢ(e)| measured against `scale(e)` plus the
/// magnitudes of the parts, below every horizon.
pub fn termwise_rel_scaled(parts: &[(C64, &HSeries)], scale: &HSeries) -> f64 {
    let hz = parts
        .iter()
        .filter_map(|(_, s)| s.horizon())
        .fold(f64::INFINITY, f64::min);
    let mut worst: f64 = 0.0;
    for e in exponents_below(parts, hz) {
        let mut sum = C64::new(0.0, 0.0);
        let mut mag = scale.coefficient(e).norm();
        for (s, p) in parts {
            let c = *s * p.coefficient(e);
            sum += c;
            mag += c.norm();
        }
        if mag > 0.0 {
            worst = worst.max(sum.norm() / mag);
        }
    }
    worst
}

fn exponents_below(parts: &[(C64, &HSeries)], hz: f64) -> Vec<f64> {
    let mut exps: Vec<f64> = parts
        .iter()
        .flat_map(|(_, s)| s.terms().iter().map(|t| t.exponent))
        .filter(|&e| e < hz - 1e-9)
        .collect();
    exps.sort_by(f64::total_cmp);
    exps.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    exps
}

pub fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}
