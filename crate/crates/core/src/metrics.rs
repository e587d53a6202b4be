//! Benchmark harness: time factor, entropy factor, restart statistics, and
//! the Poisson-process limit law the time factor converges to.
//!
//! The time factor of a run is the number of step slots read or written
//! divided by the step count of the output; the entropy factor divides the
//! model-entropy bits consumed by the Shannon entropy of the output
//! distribution (log₂ of the class size for uniform outputs). Output
//! entropies come from exact counts for small lengths, a log-space DP up to
//! 2·10⁴, and validated asymptotic formulas beyond.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::oracles::{count, ClassKind};
use crate::paths::Model;
use crate::random::{trial_seed, BitSource};
use crate::sampler::SamplerSpec;

const EXACT_COUNT_MAX: usize = 64;
const LOG_DP_MAX: usize = 20_000;

/// Natural log of the class count at (geometric) length `n`. Exact count for
/// small n, log-space DP up to 2·10⁴, asymptotics beyond (validated against
/// the DP in tests).
pub fn ln_count(model: Model, kind: ClassKind, n: usize) -> f64 {
    if n <= EXACT_COUNT_MAX {
        let c = count(model, kind, n);
        return c.to_f64().expect("count fits f64 at small n").ln();
    }
    if n <= LOG_DP_MAX {
        type LnCountCache = Mutex<HashMap<(&'static str, &'static str, usize), f64>>;
        static CACHE: OnceLock<LnCountCache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (model.name(), kind.name(), n);
        if let Some(&v) = cache.lock().unwrap().get(&key) {
            return v;
        }
        let v = ln_count_dp(model, kind, n);
        cache.lock().unwrap().insert(key, v);
        return v;
    }
    ln_count_asymptotic(model, kind, n)
}

/// Log-space DP over (position, height) with periodic rescaling.
fn ln_count_dp(model: Model, kind: ClassKind, n: usize) -> f64 {
    let little = matches!(kind, ClassKind::LittlePositive | ClassKind::LittleExcursion);
    if kind == ClassKind::Lukasiewicz {
        return ln_count_dp(model, ClassKind::Excursion, n - 1);
    }
    let mut cur = vec![0.0f64; n + 2];
    let mut prev = vec![0.0f64; n + 2];
    cur[0] = 1.0;
    let mut shift = 0.0f64;
    for _ in 0..n {
        let mut next = vec![0.0f64; n + 2];
        let mut max = 0.0f64;
        for h in 0..=n {
            let mut acc = cur[h + 1];
            if h > 0 {
                acc += cur[h - 1];
            }
            match model {
                Model::Motzkin => {
                    if !little || h != 0 {
                        acc += cur[h];
                    }
                }
                Model::Schroeder => {
                    if !little || h != 0 {
                        acc += prev[h];
                    }
                }
                Model::ColoredMotzkin => panic!("colored counts are weighted"),
            }
            next[h] = acc;
            max = max.max(acc);
        }
        if max > 1e250 {
            let inv = 1.0 / max;
            for v in next.iter_mut() {
                *v *= inv;
            }
            for v in cur.iter_mut() {
                *v *= inv;
            }
            shift += max.ln();
        }
        prev = cur;
        cur = next;
    }
    let value: f64 = match kind {
        ClassKind::Positive | ClassKind::LittlePositive => cur.iter().take(n + 1).sum(),
        ClassKind::Excursion | ClassKind::LittleExcursion => cur[0],
        ClassKind::Lukasiewicz => unreachable!(),
    };
    value.ln() + shift
}

/// Leading-order asymptotics of the class counts (relative error O(1/n)).
fn ln_count_asymptotic(model: Model, kind: ClassKind, n: usize) -> f64 {
    let nf = n as f64;
    let pi = std::f64::consts::PI;
    let ln2 = std::f64::consts::LN_2;
    let r = std::f64::consts::SQRT_2 - 1.0;
    match (model, kind) {
        (Model::Motzkin, ClassKind::Positive) => (nf + 0.5) * 3f64.ln() - 0.5 * (pi * nf).ln(),
        (Model::Motzkin, ClassKind::Excursion) => {
            (nf + 1.5) * 3f64.ln() - (2.0 * pi.sqrt()).ln() - 1.5 * nf.ln()
        }
        (Model::Schroeder, ClassKind::Positive) => {
            -(nf + 1.0) * r.ln() - 0.75 * ln2 - 0.5 * (pi * nf).ln()
        }
        (Model::Schroeder, ClassKind::Excursion) => {
            -nf * r.ln() + 0.25 * ln2 - (2.0 * r * pi.sqrt()).ln() - 1.5 * (nf / 2.0).ln()
        }
        // little excursions are exactly half the excursions (length ≥ 2)
        (Model::Schroeder, ClassKind::LittleExcursion) => {
            ln_count_asymptotic(Model::Schroeder, ClassKind::Excursion, n) - ln2
        }
        // little positives satisfy little(n) + little(n−1) ≈ positive(n)
        (Model::Schroeder, ClassKind::LittlePositive) => {
            ln_count_asymptotic(Model::Schroeder, ClassKind::Positive, n) - (1.0 + r).ln()
        }
        (_, ClassKind::Lukasiewicz) => {
            ln_count_asymptotic(model, ClassKind::Excursion, n - 1)
        }
        _ => panic!("no asymptotic for {} {}", model.name(), kind.name()),
    }
}

/// Shannon entropy (nats) of the mixed output law of the approximate
/// Schröder sampler: every length-n path with probability p, every
/// length-(n−1) path with probability p·r.
fn ln_entropy_mixed_schroeder(n: usize) -> f64 {
    let r = std::f64::consts::SQRT_2 - 1.0;
    let a = ln_count(Model::Schroeder, ClassKind::Positive, n);
    let b = ln_count(Model::Schroeder, ClassKind::Positive, n - 1);
    let t = r * (b - a).exp(); // r·S_{n−1}/S_n
    let ln_total = a + t.ln_1p();
    let frac_short = t / (1.0 + t);
    ln_total - frac_short * r.ln()
}

/// Output entropy in bits for a sampler's target distribution; `None` for
/// the weighted colored classes (their entropy is not a plain log-count).
pub fn output_entropy_bits(spec: &SamplerSpec) -> Option<f64> {
    let ln2 = std::f64::consts::LN_2;
    let n = spec.n();
    let nats = match spec {
        SamplerSpec::MotzkinPositive { weight: Some(_), .. }
        | SamplerSpec::MotzkinExcursion { weight: Some(_), .. } => return None,
        SamplerSpec::MotzkinPositive { .. } => ln_count(Model::Motzkin, ClassKind::Positive, n),
        SamplerSpec::MotzkinExcursion { .. } => ln_count(Model::Motzkin, ClassKind::Excursion, n),
        SamplerSpec::SchroederApprox { .. } => ln_entropy_mixed_schroeder(n),
        SamplerSpec::SchroederPositive { .. } => ln_count(Model::Schroeder, ClassKind::Positive, n),
        SamplerSpec::SchroederExcursion { .. } => ln_count(Model::Schroeder, ClassKind::Excursion, n),
        SamplerSpec::SchroederLittlePositive { .. } => {
            ln_count(Model::Schroeder, ClassKind::LittlePositive, n)
        }
        SamplerSpec::SchroederLittleExcursion { .. } => {
            ln_count(Model::Schroeder, ClassKind::LittleExcursion, n)
        }
        SamplerSpec::Baseline { model, .. } => match model {
            crate::florentine::BaselineModel::Motzkin => {
                ln_count(Model::Motzkin, ClassKind::Positive, n)
            }
            crate::florentine::BaselineModel::Schroeder => ln_entropy_mixed_schroeder(n),
            crate::florentine::BaselineModel::Dyck => {
                // positive up/down paths of length n: C(n, ⌊n/2⌋)
                use statrs::function::gamma::ln_gamma;
                let nf = n as f64;
                let k = (n / 2) as f64;
                ln_gamma(nf + 1.0) - ln_gamma(k + 1.0) - ln_gamma(nf - k + 1.0)
            }
        },
    };
    Some(nats / ln2)
}

/// One benchmarked trial.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRow {
    pub trial: u64,
    pub n: usize,
    pub time_factor: f64,
    pub entropy_bits: f64,
    pub physical_bits: u64,
    pub restarts: u64,
    pub discarded_steps: u64,
}

/// Aggregate benchmark report for one sampler configuration.
#[derive(Clone, Debug, Serialize)]
pub struct FactorReport {
    pub sampler: String,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub mean_time_factor: f64,
    pub sd_time_factor: f64,
    /// p50 / p90 / p99 of the per-trial time factor.
    pub time_factor_quantiles: [f64; 3],
    pub mean_entropy_bits: f64,
    pub mean_physical_bits: f64,
    pub output_entropy_bits: Option<f64>,
    pub entropy_factor: Option<f64>,
    pub mean_restarts: f64,
    pub first_try_success_rate: f64,
    pub mean_discarded_steps: f64,
    pub wall_seconds: f64,
    #[serde(skip)]
    pub rows: Vec<TrialRow>,
}

/// Run `trials` independent seeded trials of the sampler and aggregate the
/// meters. Trials fan out across threads; per-trial sources derive from
/// (seed, trial index), so aggregation is order-independent and
/// reproducible.
pub fn run_metered(spec: &SamplerSpec, trials: u64, seed: u64) -> FactorReport {
    assert!(trials >= 1);
    assert!(spec.n() >= 1, "benchmarks need n >= 1");
    let start = Instant::now();
    let rows: Vec<TrialRow> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut src = BitSource::for_trial(seed, t);
            let sample = spec.run(&mut src);
            TrialRow {
                trial: t,
                n: spec.n(),
                time_factor: sample.path.meter.total() as f64 / sample.path.len() as f64,
                entropy_bits: src.meter().model_entropy_bits,
                physical_bits: src.meter().physical_bits,
                restarts: sample.restarts,
                discarded_steps: sample.discarded_steps,
            }
        })
        .collect();
    let wall_seconds = start.elapsed().as_secs_f64();

    let tn = trials as f64;
    let mean = |f: &dyn Fn(&TrialRow) -> f64| rows.iter().map(f).sum::<f64>() / tn;
    let mean_time_factor = mean(&|r| r.time_factor);
    let var = rows
        .iter()
        .map(|r| (r.time_factor - mean_time_factor).powi(2))
        .sum::<f64>()
        / tn;
    let mut sorted: Vec<f64> = rows.iter().map(|r| r.time_factor).collect();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let q = |p: f64| sorted[((p * (trials - 1) as f64).round() as usize).min(sorted.len() - 1)];
    let mean_entropy_bits = mean(&|r| r.entropy_bits);
    let output_entropy = output_entropy_bits(spec);
    FactorReport {
        sampler: spec.label(),
        n: spec.n(),
        trials,
        seed,
        mean_time_factor,
        sd_time_factor: var.sqrt(),
        time_factor_quantiles: [q(0.5), q(0.9), q(0.99)],
        mean_entropy_bits,
        mean_physical_bits: mean(&|r| r.physical_bits as f64),
        output_entropy_bits: output_entropy,
        entropy_factor: output_entropy.map(|h| mean_entropy_bits / h),
        mean_restarts: mean(&|r| r.restarts as f64),
        first_try_success_rate: rows.iter().filter(|r| r.restarts == 0).count() as f64 / tn,
        mean_discarded_steps: mean(&|r| r.discarded_steps as f64),
        wall_seconds,
        rows,
    }
}

/// Samples of the limiting time-factor law `1 + S` (`1 + S + U` for the
/// excursion samplers): S sums Uniform[0, x] marks over an inhomogeneous
/// Poisson process with density 1/(2x) on (ε, 1], plus the ε/4 mean
/// correction for the truncated interval.
pub fn simulate_limit_law(trials: usize, eps: f64, seed: u64, add_uniform: bool) -> Vec<f64> {
    assert!(eps > 0.0 && eps <= 0.01);
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed ^ 0x5151_5151, t as u64));
            let lambda = 0.5 * (1.0 / eps).ln();
            let k = poisson(&mut rng, lambda);
            let mut s = eps / 4.0;
            for _ in 0..k {
                // intensity 1/(2x) is uniform in ln x: x = ε^u
                let x = eps.powf(rng.gen::<f64>());
                s += rng.gen::<f64>() * x;
            }
            if add_uniform {
                s += rng.gen::<f64>();
            }
            1.0 + s
        })
        .collect()
}

fn poisson<R: Rng>(rng: &mut R, lambda: f64) -> u64 {
    let limit = (-lambda).exp();
    let mut k = 0u64;
    let mut prod = rng.gen::<f64>();
    while prod > limit {
        k += 1;
        prod *= rng.gen::<f64>();
    }
    k
}

/// Pearson chi-square against the uniform distribution over the observed
/// cells. Returns (statistic, p-value).
pub fn chi_square_uniform(counts: &[u64]) -> (f64, f64) {
    let cells = counts.len();
    assert!(cells >= 2);
    let total: u64 = counts.iter().sum();
    let expect = total as f64 / cells as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    (stat, chi_square_p(stat, (cells - 1) as f64))
}

/// Two-sample chi-square homogeneity test over aligned cells.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len());
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    let ka = (nb as f64 / na as f64).sqrt();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        let (x, y) = (x as f64, y as f64);
        if x + y > 0.0 {
            stat += (ka * x - y / ka).powi(2) / (x + y);
            cells += 1;
        }
    }
    (stat, chi_square_p(stat, (cells - 1) as f64))
}

fn chi_square_p(stat: f64, df: f64) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let dist = ChiSquared::new(df).expect("positive degrees of freedom");
    1.0 - dist.cdf(stat)
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        let fa = i as f64 / a.len() as f64;
        let fb = j as f64 / b.len() as f64;
        d = d.max((fa - fb).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;

    #[test]
    fn ln_count_routes_agree_at_boundaries() {
        for (model, kind) in [
            (Model::Motzkin, ClassKind::Positive),
            (Model::Motzkin, ClassKind::Excursion),
            (Model::Schroeder, ClassKind::Positive),
            (Model::Schroeder, ClassKind::Excursion),
            (Model::Schroeder, ClassKind::LittlePositive),
            (Model::Schroeder, ClassKind::LittleExcursion),
        ] {
            let exact = count(model, kind, 60).to_f64().unwrap().ln();
            let dp = ln_count_dp(model, kind, 60);
            assert!((exact - dp).abs() < 1e-9, "{} {}", model.name(), kind.name());
        }
    }

    #[test]
    fn asymptotics_match_dp_and_tighten() {
        for (model, kind) in [
            (Model::Motzkin, ClassKind::Positive),
            (Model::Motzkin, ClassKind::Excursion),
            (Model::Schroeder, ClassKind::Positive),
            (Model::Schroeder, ClassKind::Excursion),
            (Model::Schroeder, ClassKind::LittlePositive),
            (Model::Schroeder, ClassKind::LittleExcursion),
        ] {
            let errs: Vec<f64> = [2000usize, 4000]
                .iter()
                .map(|&n| (ln_count_dp(model, kind, n) - ln_count_asymptotic(model, kind, n)).abs())
                .collect();
            assert!(errs[0] < 0.02, "{} {}: {}", model.name(), kind.name(), errs[0]);
            assert!(errs[1] < errs[0], "{} {} not tightening", model.name(), kind.name());
        }
    }

    #[test]
    fn limit_law_moments() {
        let samples = simulate_limit_law(100_000, 1e-6, 7, false);
        let n = samples.len() as f64;
        let mean_s = samples.iter().map(|v| v - 1.0).sum::<f64>() / n;
        let var_s = samples.iter().map(|v| (v - 1.0 - mean_s).powi(2)).sum::<f64>() / n;
        assert!((mean_s - 0.25).abs() < 0.01, "E[S] = {mean_s}");
        assert!((var_s - 1.0 / 12.0).abs() < 0.01, "Var[S] = {var_s}");
    }

    #[test]
    fn limit_law_truncation_insensitive() {
        let coarse = simulate_limit_law(200_000, 1e-4, 8, false);
        let fine = simulate_limit_law(200_000, 1e-6, 8, false);
        let m = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        // both carry their own tail correction; means agree within noise
        assert!((m(&coarse) - m(&fine)).abs() < 0.005);
    }

    #[test]
    fn chi_square_calibrates_on_uniform_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut counts = [0u64; 10];
        for _ in 0..100_000 {
            counts[rng.gen_range(0..10)] += 1;
        }
        let (_, p) = chi_square_uniform(&counts);
        assert!(p > 0.001, "p = {p}");
    }

    #[test]
    fn ks_distance_of_identical_samples_is_small() {
        let a = simulate_limit_law(20_000, 1e-6, 9, false);
        let b = simulate_limit_law(20_000, 1e-6, 10, false);
        assert!(ks_distance(&a, &b) < 0.02);
        let c: Vec<f64> = a.iter().map(|v| v + 0.5).collect();
        assert!(ks_distance(&a, &c) > 0.3);
    }

    #[test]
    fn small_scale_factor_sanity() {
        // loose version of the large-n benchmark checks
        let report = run_metered(&SamplerSpec::MotzkinPositive { n: 5000, weight: None }, 300, 33);
        assert!((report.mean_time_factor - 1.25).abs() < 0.06, "{}", report.mean_time_factor);
        let ef = report.entropy_factor.unwrap();
        assert!((1.0 - 1e-6..1.02).contains(&ef), "entropy factor {ef}");
        assert!(report.mean_time_factor >= 1.0);
    }

    #[test]
    fn excursion_factor_matches_shifted_limit_law() {
        // excursion time factors follow 1 + S + U; compare factor − 1
        // against simulated S + U at a reduced scale
        let trials = 4000;
        let report =
            run_metered(&SamplerSpec::MotzkinExcursion { n: 20_000, weight: None }, trials, 71);
        let empirical: Vec<f64> = report.rows.iter().map(|r| r.time_factor - 1.0).collect();
        let simulated: Vec<f64> = simulate_limit_law(trials as usize, 1e-6, 72, true)
            .into_iter()
            .map(|v| v - 1.0)
            .collect();
        let d = ks_distance(&empirical, &simulated);
        assert!(d < 0.05, "KS distance {d}");
    }

    #[test]
    fn first_try_rate_matches_formula() {
        for (n, trials, seed) in [(100usize, 4000u64, 61u64), (1000, 3000, 62)] {
            let report = run_metered(&SamplerSpec::MotzkinPositive { n, weight: None }, trials, seed);
            let (_, expect) = oracles::motzkin_success(n);
            let sigma = (expect * (1.0 - expect) / trials as f64).sqrt();
            assert!(
                (report.first_try_success_rate - expect).abs() < 3.0 * sigma + 1e-9,
                "n={n}: {} vs {expect}",
                report.first_try_success_rate
            );
        }
    }

    #[test]
    fn discarded_work_grows_slowly() {
        let small = run_metered(&SamplerSpec::MotzkinPositive { n: 1000, weight: None }, 600, 64);
        let large = run_metered(&SamplerSpec::MotzkinPositive { n: 100_000, weight: None }, 120, 65);
        let ratio = large.mean_discarded_steps / small.mean_discarded_steps;
        assert!(ratio < 3.0, "failed-step growth {ratio}");
    }
}
