//! Seeded Monte Carlo experiments over random permutations: third-pass
//! inversion counts against ψ(h, g)·n, cross-inversions under a common
//! increment factor, per-pass costs, the exact 2-ordered mean, and the
//! two-level stochastic counter trace.
//!
//! Every experiment derives an independent RNG substream per trial from
//! the configured seed, so results are bit-identical regardless of how
//! many threads execute the trials.

use crate::core_model::{
    count_inversions, inversions_of_slice, run_passes, stride_sort, IncrementPlan, KeyArray,
};
use crate::pass_analysis::cross_list_inversions;
use crate::psi::psi_exact;
use crate::{gcd, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Parameters of one Monte Carlo experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialConfig {
    pub h: u64,
    pub g: u64,
    pub c: u64,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.h < 1 || self.g < 1 || gcd(self.h, self.g) != 1 {
            return Err(Error::InvalidArgument(format!(
                "h={} and g={} must be positive and relatively prime",
                self.h, self.g
            )));
        }
        if self.c < 1 {
            return Err(Error::InvalidArgument("require c >= 1".into()));
        }
        if self.n < 1 {
            return Err(Error::InvalidArgument("require n >= 1".into()));
        }
        if self.trials < 1 {
            return Err(Error::InvalidArgument("require trials >= 1".into()));
        }
        Ok(())
    }
}

/// Trial statistics against an analytic target.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub config: TrialConfig,
    pub mean: f64,
    /// Sample standard deviation, (r-1) denominator.
    pub sample_std: f64,
    /// `sample_std / sqrt(trials)`.
    pub std_err: f64,
    pub target: f64,
    /// `(mean - target) / std_err`, or 0 when the standard error is 0.
    pub z_score: f64,
    pub per_trial: Vec<u64>,
}

fn summarize(config: TrialConfig, counts: Vec<u64>, target: f64) -> SimulationReport {
    let r = counts.len() as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / r;
    let sample_std = if counts.len() > 1 {
        let ss: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - mean;
                d * d
            })
            .sum();
        (ss / (r - 1.0)).sqrt()
    } else {
        0.0
    };
    let std_err = sample_std / r.sqrt();
    let z_score = if std_err > 0.0 {
        (mean - target) / std_err
    } else {
        0.0
    };
    SimulationReport {
        config,
        mean,
        sample_std,
        std_err,
        target,
        z_score,
        per_trial: counts,
    }
}

/// SplitMix64 finalizer, used to whiten seed/stream-index combinations.
fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// The RNG substream for one trial: ChaCha8 keyed by a SplitMix64-mixed
/// combination of the experiment seed and the trial index. Trial `t` is
/// reproducible in isolation.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix64(seed ^ mix64(trial)))
}

/// Uniform random permutation of `{0, …, n-1}` by Fisher-Yates.
pub fn random_permutation(n: usize, rng: &mut impl Rng) -> KeyArray {
    let mut keys: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        keys.swap(i, j);
    }
    KeyArray::from_distinct(keys)
}

/// Trials above this size skip the table-based per-trial cross-check;
/// building the tables is quadratic in n.
const CROSS_CHECK_MAX_N: usize = 2000;

/// Draws a permutation, h-sorts and g-sorts it, and reports the remaining
/// inversions against the target ψ(h, g)·n.
pub fn third_pass_experiment(cfg: &TrialConfig) -> Result<SimulationReport> {
    cfg.validate()?;
    if cfg.c != 1 {
        return Err(Error::InvalidArgument(
            "third-pass experiment requires c = 1".into(),
        ));
    }
    let target = psi_exact(cfg.h, cfg.g)?.exact * cfg.n as f64;
    let counts: Vec<u64> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let a = random_permutation(cfg.n, &mut rng);
            let (h_sorted, _) = stride_sort(&a, cfg.h as usize).expect("step >= 1");
            let (g_sorted, _) = stride_sort(&h_sorted, cfg.g as usize).expect("step >= 1");
            let inv = count_inversions(&g_sorted);
            // spot-check a 1% sample of trials against the table formula
            if t % 100 == 0 && cfg.n <= CROSS_CHECK_MAX_N {
                let by_tables: u64 = (0..cfg.g)
                    .flat_map(|j| (j + 1..cfg.g).map(move |jp| (j, jp)))
                    .map(|(j, jp)| {
                        cross_list_inversions(&a, cfg.h, cfg.g, j, jp).expect("valid pair")
                    })
                    .sum();
                assert_eq!(
                    inv, by_tables,
                    "trial {t}: direct count disagrees with list-pair formula"
                );
            }
            inv
        })
        .collect();
    Ok(summarize(*cfg, counts, target))
}

/// Inversions between different residue classes mod c after sorting with
/// steps `c·h` and `c·g`. The two passes never move an element out of its
/// class, so cross-inversions are total minus within-class inversions.
pub fn cross_inversion_experiment(cfg: &TrialConfig) -> Result<SimulationReport> {
    cfg.validate()?;
    if cfg.c < 2 {
        return Err(Error::InvalidArgument(
            "cross-inversion experiment requires c >= 2".into(),
        ));
    }
    let target = cross_inversion_leading_term(cfg.c, cfg.n);
    let counts: Vec<u64> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let a = random_permutation(cfg.n, &mut rng);
            let (a1, _) = stride_sort(&a, (cfg.c * cfg.h) as usize).expect("step >= 1");
            let (a2, _) = stride_sort(&a1, (cfg.c * cfg.g) as usize).expect("step >= 1");
            cross_class_inversions(a2.keys(), cfg.c as usize)
        })
        .collect();
    Ok(summarize(*cfg, counts, target))
}

/// Leading term of the expected cross-inversion count:
/// `(1/8)·sqrt(π·c)·(1 - 1/c)·n^(3/2)`.
pub fn cross_inversion_leading_term(c: u64, n: usize) -> f64 {
    let cf = c as f64;
    0.125 * (PI * cf).sqrt() * (1.0 - 1.0 / cf) * (n as f64).powf(1.5)
}

/// Inversions between positions in different residue classes mod c.
pub(crate) fn cross_class_inversions(keys: &[u32], c: usize) -> u64 {
    let total = inversions_of_slice(keys);
    let within: u64 = (0..c)
        .map(|class| {
            let sub: Vec<u32> = keys
                .iter()
                .copied()
                .skip(class)
                .step_by(c)
                .collect();
            inversions_of_slice(&sub)
        })
        .sum();
    total - within
}

/// Exact mean inversion count of a random 2-ordered permutation of 2n
/// elements: `n·2^(2n-2) / C(2n, n)`, evaluated in ratio form.
pub fn two_ordered_mean(n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n <= 26 {
        // numerator and denominator are exact integers below 2^53, so the
        // single division is correctly rounded
        let mut binom: u128 = 1;
        for i in 1..=n as u128 {
            binom = binom * (n as u128 + i) / i;
        }
        let numerator = n as u128 * (1u128 << (2 * n - 2));
        return numerator as f64 / binom as f64;
    }
    // log-space: n/4 · Π_{i=1..n} 4i/(n+i)
    let mut log_sum = (n as f64).ln() - 4.0f64.ln();
    for i in 1..=n {
        log_sum += 4.0f64.ln() + (i as f64).ln() - ((n + i) as f64).ln();
    }
    log_sum.exp()
}

/// Per-pass reports for a full `(c·h, c·g, 1)` run.
#[derive(Debug, Clone, PartialEq)]
pub struct PassReports {
    pub pass1: SimulationReport,
    pub pass2: SimulationReport,
    pub pass3: SimulationReport,
}

/// Runs all three passes per trial and compares each pass's mean move
/// count against its analytic leading terms.
pub fn theorem2_experiment(cfg: &TrialConfig) -> Result<PassReports> {
    cfg.validate()?;
    let plan = IncrementPlan::new(cfg.h, cfg.g, cfg.c)?;
    let triples: Vec<(u64, u64, u64)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let a = random_permutation(cfg.n, &mut rng);
            let (_, costs) = run_passes(&a, &plan);
            (costs.pass1, costs.pass2, costs.pass3)
        })
        .collect();
    let nf = cfg.n as f64;
    let (hf, gf, cf) = (cfg.h as f64, cfg.g as f64, cfg.c as f64);
    let target1 = nf * nf / (4.0 * cf * hf);
    let target2 = (PI / (cf * hf)).sqrt() * (hf - 1.0) * nf.powf(1.5) / (8.0 * gf);
    let target3 = psi_exact(cfg.h, cfg.g)?.exact * nf
        + 0.125 * (PI / cf).sqrt() * (cf - 1.0) * nf.powf(1.5);
    Ok(PassReports {
        pass1: summarize(*cfg, triples.iter().map(|t| t.0).collect(), target1),
        pass2: summarize(*cfg, triples.iter().map(|t| t.1).collect(), target2),
        pass3: summarize(*cfg, triples.iter().map(|t| t.2).collect(), target3),
    })
}

/// Trace of the two-level counter process abstracting a fourth pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterTrace {
    /// Emitted `(k, j, i)` triples, one per step.
    pub steps: Vec<(u64, u64, u64)>,
    pub i_counters: Vec<u64>,
    pub j_counters: Vec<u64>,
}

/// Executes the stochastic counter procedure: counters start at
/// `I_j = j mod f`, `J_k = k mod g`; each step draws a uniform `k < h`,
/// emits `(k, j, i)`, then advances `J_k` by `h` (mod g) and `I_j` by `g`
/// (mod f).
pub fn stochastic_counter_model(
    h: u64,
    g: u64,
    f: u64,
    steps: u64,
    seed: u64,
) -> Result<CounterTrace> {
    if h < 1 || g < 1 || f < 1 {
        return Err(Error::InvalidArgument(
            "h, g, f must be positive".into(),
        ));
    }
    if gcd(h, g) != 1 || gcd(g, f) != 1 || gcd(h, f) != 1 {
        return Err(Error::InvalidArgument(
            "h, g, f must be pairwise relatively prime".into(),
        ));
    }
    let mut i_counters: Vec<u64> = (0..g).map(|j| j % f).collect();
    let mut j_counters: Vec<u64> = (0..h).map(|k| k % g).collect();
    let mut rng = trial_rng(seed, 0);
    let mut trace = Vec::with_capacity(steps as usize);
    for _ in 0..steps {
        let k = rng.gen_range(0..h);
        let j = j_counters[k as usize];
        let i = i_counters[j as usize];
        trace.push((k, j, i));
        j_counters[k as usize] = (j + h) % g;
        i_counters[j as usize] = (i + g) % f;
    }
    Ok(CounterTrace {
        steps: trace,
        i_counters,
        j_counters,
    })
}

/// One row of the geometric-increment sweep `h = g²+1`, `n = g⁴+g²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub g: u64,
    pub h: u64,
    pub n: usize,
    pub report: SimulationReport,
    /// Conjecture diagnostic: the empirical mean stayed at or below ψ·n.
    pub mean_below_target: bool,
    /// Diagnostic ratio σ/μ (0 when μ = 0).
    pub sigma_over_mu: f64,
}

/// Runs the third-pass experiment for each g with `h = g²+1` and
/// `n = g⁴+g²`. `trials_for` maps g to its trial count; each g gets its
/// own deterministic seed substream.
pub fn geometric_sweep(
    g_list: &[u64],
    trials_for: impl Fn(u64) -> u64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(g_list.len());
    for &g in g_list {
        if g < 1 {
            return Err(Error::InvalidArgument("require g >= 1".into()));
        }
        let h = g * g + 1;
        let n = (g * g * g * g + g * g) as usize;
        let cfg = TrialConfig {
            h,
            g,
            c: 1,
            n,
            trials: trials_for(g).max(1),
            seed: mix64(seed ^ mix64(g)),
        };
        let report = third_pass_experiment(&cfg)?;
        let mean_below_target = report.mean <= report.target;
        let sigma_over_mu = if report.mean > 0.0 {
            report.sample_std / report.mean
        } else {
            0.0
        };
        rows.push(SweepRow {
            g,
            h,
            n,
            report,
            mean_below_target,
            sigma_over_mu,
        });
    }
    Ok(rows)
}

/// Trial counts used for the sweep at full scale: 10000 for g ≤ 10, 1024
/// for 10 < g < 20, 100 for g ≥ 20.
pub fn sweep_default_trials(g: u64) -> u64 {
    if g <= 10 {
        10000
    } else if g < 20 {
        1024
    } else {
        100
    }
}
