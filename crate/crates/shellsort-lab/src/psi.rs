//! Exact and asymptotic evaluation of the inversion constant ψ(h, g),
//! together with the probabilistic building blocks it rests on: exact
//! binomial mean absolute deviations, the mod-g near-uniformity bound,
//! and the maximal coupling construction.

use crate::{gcd, Error, Result};
use std::f64::consts::PI;

/// The per-element third-pass inversion constant for increments `(h, g)`.
#[derive(Debug, Clone)]
pub struct PsiValue {
    pub h: u64,
    pub g: u64,
    /// The exact double-sum value.
    pub exact: f64,
    /// Leading asymptotic term `sqrt(π·h/128)·g`.
    pub asymptotic: f64,
    /// Per-d contributions; they sum to `exact`.
    pub terms: Vec<f64>,
}

/// Binomial(m, p) probabilities for z = 0..=m, computed by multiplicative
/// recurrence outward from the mode and normalized to sum to 1. Deep-tail
/// terms underflow to zero harmlessly; everything near the mode carries
/// full double precision.
fn binomial_pmf_row(m: u64, p: f64) -> Vec<f64> {
    let mu = m as usize;
    if p <= 0.0 {
        let mut row = vec![0.0; mu + 1];
        row[0] = 1.0;
        return row;
    }
    if p >= 1.0 {
        let mut row = vec![0.0; mu + 1];
        row[mu] = 1.0;
        return row;
    }
    let mut row = vec![0.0f64; mu + 1];
    let mode = (((m + 1) as f64) * p).floor().min(m as f64) as usize;
    row[mode] = 1.0;
    let ratio = p / (1.0 - p);
    for z in mode..mu {
        // pmf(z+1)/pmf(z) = (m-z)/(z+1) · p/(1-p)
        row[z + 1] = row[z] * ((m - z as u64) as f64 / (z as f64 + 1.0)) * ratio;
    }
    for z in (1..=mode).rev() {
        // pmf(z-1)/pmf(z) = z/(m-z+1) · (1-p)/p
        row[z - 1] = row[z] * (z as f64 / ((m - z as u64 + 1) as f64)) / ratio;
    }
    let sum: f64 = row.iter().sum();
    for v in &mut row {
        *v /= sum;
    }
    row
}

/// `E|Z - a|` by direct summation over the full pmf row.
fn abs_dev_direct(m: u64, p: f64, a: f64) -> f64 {
    binomial_pmf_row(m, p)
        .iter()
        .enumerate()
        .map(|(z, &pr)| pr * (z as f64 - a).abs())
        .sum()
}

/// Exact ψ(h, g): half the sum over list distances d of the mean absolute
/// deviation of Binomial(h-1, d/g) from `⌊hd/g⌋`.
pub fn psi_exact(h: u64, g: u64) -> Result<PsiValue> {
    if h < 1 || g < 1 {
        return Err(Error::InvalidArgument("h and g must be positive".into()));
    }
    if gcd(h, g) != 1 {
        return Err(Error::InvalidArgument(format!(
            "h={h} and g={g} must be relatively prime"
        )));
    }
    let mut terms = Vec::with_capacity((g - 1) as usize);
    for d in 1..g {
        let p = d as f64 / g as f64;
        let target = (h * d / g) as f64;
        terms.push(0.5 * abs_dev_direct(h - 1, p, target));
    }
    Ok(PsiValue {
        h,
        g,
        exact: terms.iter().sum(),
        asymptotic: psi_asymptotic(h, g),
        terms,
    })
}

/// Leading asymptotic term of ψ(h, g).
pub fn psi_asymptotic(h: u64, g: u64) -> f64 {
    (PI * h as f64 / 128.0).sqrt() * g as f64
}

/// `E|Z - a|` for `Z ~ Binomial(m, p)` via the De Moivre closed form for
/// `E|Z - mp|` shifted to `a`, valid for `⌊mp⌋ ≤ a ≤ ⌈mp⌉`.
pub fn mean_abs_dev_binomial(m: u64, p: f64, a: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "require 0 < p < 1, got p={p}"
        )));
    }
    let mp = m as f64 * p;
    if !(mp.floor() <= a && a <= mp.ceil()) {
        return Err(Error::InvalidArgument(format!(
            "require floor(mp) <= a <= ceil(mp), got m={m}, p={p}, a={a}"
        )));
    }
    let row = binomial_pmf_row(m, p);
    // E|Z - mp| = 2·⌈mp⌉·C(m,⌈mp⌉)·p^⌈mp⌉·(1-p)^(m+1-⌈mp⌉)
    //           = 2·⌈mp⌉·pmf(⌈mp⌉)·(1-p)
    let c = mp.ceil() as usize;
    let dev_at_mean = 2.0 * c as f64 * row[c] * (1.0 - p);
    // shift: E|Z - a| = E|Z - mp| + (mp - a)·(1 - 2·Pr[Z <= mp])
    let tail: f64 = row[..=mp.floor() as usize].iter().sum();
    Ok(dev_at_mean + (mp - a) * (1.0 - 2.0 * tail))
}

/// ψ(h, g) evaluated through the expectation route: the closed form where
/// the deviation target falls inside its window, direct summation where
/// it does not. Agrees with [`psi_exact`] to better than 1e-9 relative.
pub fn psi_via_expectation(h: u64, g: u64) -> Result<f64> {
    if h < 1 || g < 1 {
        return Err(Error::InvalidArgument("h and g must be positive".into()));
    }
    if gcd(h, g) != 1 {
        return Err(Error::InvalidArgument(format!(
            "h={h} and g={g} must be relatively prime"
        )));
    }
    let mut sum = 0.0;
    for d in 1..g {
        let m = h - 1;
        let p = d as f64 / g as f64;
        let a = (h * d / g) as f64;
        let mp = m as f64 * p;
        let dev = if m >= 1 && mp.floor() <= a && a <= mp.ceil() {
            mean_abs_dev_binomial(m, p, a)?
        } else {
            abs_dev_direct(m, p, a)
        };
        sum += 0.5 * dev;
    }
    Ok(sum)
}

/// Upper-bound series `2·Σ_{k≥1} exp(-8t(1-t)k²m/g²)` controlling how far
/// a Binomial(m, t) residue mod g can stray from uniform. At `t(1-t) = 0`
/// the series diverges and the trivial bound `g` is returned instead.
pub fn phi_bound(g: u64, m: u64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "require 0 <= t <= 1, got t={t}"
        )));
    }
    if g < 1 || m < 1 {
        return Err(Error::InvalidArgument("g and m must be positive".into()));
    }
    let rate = 8.0 * t * (1.0 - t) * m as f64 / (g as f64 * g as f64);
    if rate == 0.0 {
        return Ok(g as f64);
    }
    let mut sum = 0.0;
    let mut k = 1u64;
    loop {
        let term = 2.0 * (-rate * (k * k) as f64).exp();
        if term < 1e-16 {
            break;
        }
        sum += term;
        k += 1;
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy)]
pub struct ModUniformityReport {
    pub max_deviation: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Measures how non-uniform Binomial(m, t) mod g really is (exact dynamic
/// program over the m trials) and compares against `phi_bound / g`.
pub fn mod_uniformity_check(m: u64, t: f64, g: u64) -> Result<ModUniformityReport> {
    if g < 2 {
        return Err(Error::InvalidArgument("require g >= 2".into()));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "require 0 < t < 1, got t={t}"
        )));
    }
    let gu = g as usize;
    let mut dist = vec![0.0f64; gu];
    dist[0] = 1.0;
    for _ in 0..m {
        let mut next = vec![0.0f64; gu];
        for j in 0..gu {
            next[j] = dist[j] * (1.0 - t) + dist[(j + gu - 1) % gu] * t;
        }
        dist = next;
    }
    let uniform = 1.0 / g as f64;
    let max_deviation = dist
        .iter()
        .map(|&p| (p - uniform).abs())
        .fold(0.0, f64::max);
    let bound = phi_bound(g, m, t)? / g as f64;
    // The DP accumulates one rounding error per trial, so deviations below
    // that floor are indistinguishable from an exactly uniform distribution.
    let noise_floor = 4.0 * m as f64 * f64::EPSILON;
    Ok(ModUniformityReport {
        max_deviation,
        bound,
        holds: max_deviation < bound + noise_floor,
    })
}

/// A transport plan between two distributions on `{0, …, m-1}` whose
/// diagonal mass is maximal: off-diagonal mass equals the total variation
/// distance between the marginals.
#[derive(Debug, Clone)]
pub struct CouplingMatrix {
    pub m: usize,
    pub p: Vec<f64>,
    pub p_star: Vec<f64>,
    pub plan: Vec<Vec<f64>>,
}

impl CouplingMatrix {
    pub fn off_diagonal_mass(&self) -> f64 {
        let mut s = 0.0;
        for (i, row) in self.plan.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if i != j {
                    s += v;
                }
            }
        }
        s
    }

    pub fn total_variation(&self) -> f64 {
        0.5 * self
            .p
            .iter()
            .zip(&self.p_star)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

const DISTRIBUTION_SUM_TOLERANCE: f64 = 1e-12;

/// Builds a maximal coupling of `p` and `p_star`: diagonal entries are
/// `min(p_j, p*_j)` and the surplus is moved to the deficits by a
/// deterministic greedy sweep in index order.
pub fn maximal_coupling(p: &[f64], p_star: &[f64]) -> Result<CouplingMatrix> {
    if p.len() != p_star.len() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    for dist in [p, p_star] {
        if dist.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "distribution entries must be nonnegative and finite".into(),
            ));
        }
        let sum: f64 = dist.iter().sum();
        if (sum - 1.0).abs() > DISTRIBUTION_SUM_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "distribution must sum to 1 within {DISTRIBUTION_SUM_TOLERANCE}, got {sum}"
            )));
        }
    }
    let m = p.len();
    let mut plan = vec![vec![0.0f64; m]; m];
    let mut surplus = vec![0.0f64; m];
    let mut deficit = vec![0.0f64; m];
    for j in 0..m {
        let diag = p[j].min(p_star[j]);
        plan[j][j] = diag;
        surplus[j] = p[j] - diag;
        deficit[j] = p_star[j] - diag;
    }
    let mut j = 0usize;
    for i in 0..m {
        while surplus[i] > 0.0 && j < m {
            if deficit[j] <= 0.0 {
                j += 1;
                continue;
            }
            let moved = surplus[i].min(deficit[j]);
            plan[i][j] += moved;
            surplus[i] -= moved;
            deficit[j] -= moved;
            if surplus[i] > 0.0 {
                j += 1;
            }
        }
    }
    Ok(CouplingMatrix {
        m,
        p: p.to_vec(),
        p_star: p_star.to_vec(),
        plan,
    })
}
