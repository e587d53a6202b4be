//! Verification suites: aggregate distribution identities of the recovery
//! primitives, exact sampler uniformity via choice-tree exploration,
//! count/enumeration consistency, and convergence of the success
//! probabilities and complexity factors. Shared by the `verify` CLI command
//! and the acceptance test suite.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::exact::Exact;
use crate::florentine::BaselineModel;
use crate::metrics;
use crate::motzkin::MotzkinParams;
use crate::oracles::{
    self, count, count_weighted, enumerate, exact_extend_dist, exact_recover_dist_colored,
    exact_recover_dist_motzkin, exact_recover_dist_schroeder, exact_sampler_dist, ClassKind,
    DistTable,
};
use crate::paths::{fold_pair, unfold_concat, Model, Path, Step};
use crate::random::BitSource;
use crate::sampler::SamplerSpec;

/// Outcome of one verification check.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

fn merge_into(agg: &mut DistTable, d: &DistTable, scale: &Exact) {
    for (k, v) in &d.entries {
        agg.add(k.clone(), v * scale);
    }
    agg.add_reject(&d.reject * scale);
}

/// Aggregated recovery law, plain Motzkin: summing the recovery distribution
/// over all Łukasiewicz inputs of length n puts mass exactly 1/(2n+1) on
/// every positive path of length n.
pub fn check_motzkin_recover_aggregate(max_n: usize) -> Check {
    for n in 1..=max_n {
        let q = Exact::ratio(1, 2 * n as i64 + 1);
        let mut agg = DistTable::new();
        for w in enumerate(Model::Motzkin, ClassKind::Lukasiewicz, n) {
            merge_into(&mut agg, &exact_recover_dist_motzkin(&w), &Exact::one());
        }
        let class: Vec<String> =
            enumerate(Model::Motzkin, ClassKind::Positive, n).iter().map(|p| p.text()).collect();
        if agg.entries.len() != class.len()
            || !class.iter().all(|k| agg.entries.get(k) == Some(&q))
        {
            return Check::new(
                "motzkin-recover-aggregate",
                false,
                format!("mismatch at n={n}"),
            );
        }
    }
    Check::new(
        "motzkin-recover-aggregate",
        true,
        format!("uniform mass 1/(2n+1) per positive path, n <= {max_n}"),
    )
}

/// Aggregated recovery law, colored Motzkin: with inputs weighted by
/// c^{#weighted flats}, every positive path of length n receives mass
/// q_n · c^{#weighted flats}.
pub fn check_colored_recover_aggregate(max_n: usize, weights: &[BigRational]) -> Check {
    for c in weights {
        let ce = Exact::from_rational(c.clone());
        for n in 1..=max_n {
            let params = MotzkinParams::colored(n, c.clone());
            let q = Exact::from_rational(params.q(n));
            let mut agg = DistTable::new();
            for w in enumerate(Model::ColoredMotzkin, ClassKind::Lukasiewicz, n) {
                let wt = ce.pow(w.colored_flat_count() as u32);
                merge_into(&mut agg, &exact_recover_dist_colored(&w, c), &wt);
            }
            for target in enumerate(Model::ColoredMotzkin, ClassKind::Positive, n) {
                let expect = &q * &ce.pow(target.colored_flat_count() as u32);
                if agg.entries.get(&target.text()) != Some(&expect) {
                    return Check::new(
                        "colored-recover-aggregate",
                        false,
                        format!("mismatch at n={n}, c={c}, path {}", target.text()),
                    );
                }
            }
            let class_size = enumerate(Model::ColoredMotzkin, ClassKind::Positive, n).len();
            if agg.entries.len() != class_size {
                return Check::new(
                    "colored-recover-aggregate",
                    false,
                    format!("stray outputs at n={n}, c={c}"),
                );
            }
        }
    }
    Check::new(
        "colored-recover-aggregate",
        true,
        format!("weight-proportional mass per positive path, n <= {max_n}"),
    )
}

/// Aggregated extension law: summing the extend distribution over all
/// positive paths of length m puts mass exactly r on every positive path of
/// length m+1 with positive height.
pub fn check_extend_aggregate(max_len: usize) -> Check {
    let r = Exact::sqrt2_minus_one();
    for m in 0..=max_len {
        let mut agg = DistTable::new();
        for w in enumerate(Model::Schroeder, ClassKind::Positive, m) {
            merge_into(&mut agg, &exact_extend_dist(&w), &Exact::one());
        }
        for target in enumerate(Model::Schroeder, ClassKind::Positive, m + 1) {
            if target.height() > 0 && agg.entries.get(&target.text()) != Some(&r) {
                return Check::new(
                    "extend-aggregate",
                    false,
                    format!("mass at {} (m={m}) is not r", target.text()),
                );
            }
        }
    }
    Check::new(
        "extend-aggregate",
        true,
        format!("mass r per positive-height target, lengths <= {max_len}"),
    )
}

/// Aggregated Schröder recovery law at odd length m: mass q_m on every
/// positive path of length m, mass q_m·r on every positive path of length
/// m+1 ending with a flat, and nothing else.
pub fn check_schroeder_recover_aggregate(max_len: usize) -> Check {
    let r = Exact::sqrt2_minus_one();
    for m in (1..=max_len).step_by(2) {
        let q = (Exact::from_int(m as i64) + &r).recip();
        let qr = &q * &r;
        let mut agg = DistTable::new();
        for w in enumerate(Model::Schroeder, ClassKind::Lukasiewicz, m) {
            merge_into(&mut agg, &exact_recover_dist_schroeder(&w), &Exact::one());
        }
        let exact_len: Vec<Path> = enumerate(Model::Schroeder, ClassKind::Positive, m);
        let over_len: Vec<Path> = enumerate(Model::Schroeder, ClassKind::Positive, m + 1)
            .into_iter()
            .filter(|p| p.steps().last() == Some(&Step::Flat))
            .collect();
        let expected_keys = exact_len.len() + over_len.len();
        let ok = exact_len.iter().all(|p| agg.entries.get(&p.text()) == Some(&q))
            && over_len.iter().all(|p| agg.entries.get(&p.text()) == Some(&qr))
            && agg.entries.len() == expected_keys;
        if !ok {
            return Check::new("schroeder-recover-aggregate", false, format!("mismatch at m={m}"));
        }
    }
    Check::new(
        "schroeder-recover-aggregate",
        true,
        format!("mass q_m / q_m*r per target, odd lengths <= {max_len}"),
    )
}

/// Aggregated extension law restricted to little paths: over little inputs
/// of length m, every little target of length m+1 carries mass r unless it
/// has height 1 and ends with a flat.
pub fn check_little_extend_aggregate(max_len: usize) -> Check {
    let r = Exact::sqrt2_minus_one();
    for m in 0..=max_len {
        let mut agg = DistTable::new();
        for w in enumerate(Model::Schroeder, ClassKind::LittlePositive, m) {
            merge_into(&mut agg, &exact_extend_dist(&w), &Exact::one());
        }
        for target in enumerate(Model::Schroeder, ClassKind::LittlePositive, m + 1) {
            let excluded = target.height() == 1 && target.steps().last() == Some(&Step::Flat);
            if !excluded && agg.entries.get(&target.text()) != Some(&r) {
                return Check::new(
                    "little-extend-aggregate",
                    false,
                    format!("mass at {} (m={m}) is not r", target.text()),
                );
            }
        }
    }
    Check::new(
        "little-extend-aggregate",
        true,
        format!("mass r per unexcluded little target, lengths <= {max_len}"),
    )
}

/// The distribution identities of the recovery/extension primitives.
pub fn suite_lemmas(max_len: usize) -> Vec<Check> {
    let weights: Vec<BigRational> = [(1u64, 2u64), (1, 1), (2, 1), (3, 1)]
        .iter()
        .map(|&(p, q)| BigRational::new(p.into(), q.into()))
        .collect();
    vec![
        check_motzkin_recover_aggregate(max_len),
        check_colored_recover_aggregate(max_len.min(8), &weights),
        check_extend_aggregate(max_len),
        check_schroeder_recover_aggregate(if max_len.is_multiple_of(2) { max_len - 1 } else { max_len }),
        check_little_extend_aggregate(max_len),
    ]
}

fn check_exact_uniform(spec: SamplerSpec, model: Model, kind: ClassKind, n: usize) -> Check {
    let name = format!("uniform-{}", spec.label());
    let class: Vec<String> = enumerate(model, kind, n).iter().map(|p| p.text()).collect();
    let dist = exact_sampler_dist(&spec);
    let expect = Exact::ratio(1, class.len() as i64);
    let pass = dist.entries.len() == class.len()
        && class.iter().all(|k| dist.entries.get(k) == Some(&expect));
    Check::new(name, pass, format!("{} outcomes at exactly 1/{}", class.len(), class.len()))
}

fn check_exact_weighted(n: usize, c: &BigRational, excursion: bool) -> Check {
    let kind = if excursion { ClassKind::Excursion } else { ClassKind::Positive };
    let spec = if excursion {
        SamplerSpec::MotzkinExcursion { n, weight: Some(c.clone()) }
    } else {
        SamplerSpec::MotzkinPositive { n, weight: Some(c.clone()) }
    };
    let name = format!("weighted-{}", spec.label());
    let total = Exact::from_rational(count_weighted(kind, n, c));
    let ce = Exact::from_rational(c.clone());
    let dist = exact_sampler_dist(&spec);
    let class = enumerate(Model::ColoredMotzkin, kind, n);
    let pass = dist.entries.len() == class.len()
        && class.iter().all(|p| {
            let expect = ce.pow(p.colored_flat_count() as u32) / &total;
            dist.entries.get(&p.text()) == Some(&expect)
        });
    Check::new(name, pass, "output mass proportional to the path weight")
}

enum UniformityTask {
    Plain(SamplerSpec, Model, ClassKind, usize),
    Weighted(usize, BigRational, bool),
}

/// Exact output laws of every sampler by full choice-tree exploration,
/// conditioned on no restart: uniform for the plain samplers,
/// weight-proportional for the colored ones. Tasks fan out across threads,
/// heaviest trees first.
pub fn suite_uniformity_exact(max_n: usize, colored_max_n: usize) -> Vec<Check> {
    use rayon::prelude::*;
    let mut tasks = Vec::new();
    // colored excursion trees are by far the largest; schedule them first
    for (p, q) in [(1u64, 2u64), (2, 1)] {
        let c = BigRational::new(p.into(), q.into());
        for n in (0..=colored_max_n).rev() {
            tasks.push(UniformityTask::Weighted(n, c.clone(), true));
        }
        for n in (1..=colored_max_n).rev() {
            tasks.push(UniformityTask::Weighted(n, c.clone(), false));
        }
    }
    for n in (0..=max_n).rev() {
        if n >= 1 {
            tasks.push(UniformityTask::Plain(
                SamplerSpec::MotzkinPositive { n, weight: None },
                Model::Motzkin,
                ClassKind::Positive,
                n,
            ));
            tasks.push(UniformityTask::Plain(
                SamplerSpec::SchroederPositive { n },
                Model::Schroeder,
                ClassKind::Positive,
                n,
            ));
            tasks.push(UniformityTask::Plain(
                SamplerSpec::SchroederLittlePositive { n },
                Model::Schroeder,
                ClassKind::LittlePositive,
                n,
            ));
        }
        tasks.push(UniformityTask::Plain(
            SamplerSpec::MotzkinExcursion { n, weight: None },
            Model::Motzkin,
            ClassKind::Excursion,
            n,
        ));
        if n % 2 == 0 {
            tasks.push(UniformityTask::Plain(
                SamplerSpec::SchroederExcursion { n },
                Model::Schroeder,
                ClassKind::Excursion,
                n,
            ));
            tasks.push(UniformityTask::Plain(
                SamplerSpec::SchroederLittleExcursion { n },
                Model::Schroeder,
                ClassKind::LittleExcursion,
                n,
            ));
        }
    }
    tasks
        .into_par_iter()
        .map(|t| match t {
            UniformityTask::Plain(spec, model, kind, n) => check_exact_uniform(spec, model, kind, n),
            UniformityTask::Weighted(n, c, excursion) => check_exact_weighted(n, &c, excursion),
        })
        .collect()
}

fn empirical_histogram(
    spec: &SamplerSpec,
    class: &[Path],
    samples: u64,
    seed: u64,
) -> Vec<u64> {
    let index: BTreeMap<String, usize> =
        class.iter().enumerate().map(|(i, p)| (p.text(), i)).collect();
    let mut counts = vec![0u64; class.len()];
    let mut src = BitSource::new(seed);
    for _ in 0..samples {
        let s = spec.run(&mut src);
        counts[*index.get(&s.path.text()).expect("output outside the enumerated class")] += 1;
    }
    counts
}

/// Chi-square uniformity of sampled output over the enumerated classes, and
/// two-sample agreement between the recovery samplers and the baseline.
pub fn suite_uniformity_empirical(samples: u64, seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let p_floor = 0.001;
    let configs: Vec<(SamplerSpec, Model, ClassKind, usize)> = vec![
        (SamplerSpec::MotzkinPositive { n: 8, weight: None }, Model::Motzkin, ClassKind::Positive, 8),
        (SamplerSpec::MotzkinExcursion { n: 8, weight: None }, Model::Motzkin, ClassKind::Excursion, 8),
        (SamplerSpec::SchroederPositive { n: 8 }, Model::Schroeder, ClassKind::Positive, 8),
        (SamplerSpec::SchroederExcursion { n: 8 }, Model::Schroeder, ClassKind::Excursion, 8),
        (SamplerSpec::SchroederPositive { n: 7 }, Model::Schroeder, ClassKind::Positive, 7),
        (SamplerSpec::SchroederLittlePositive { n: 8 }, Model::Schroeder, ClassKind::LittlePositive, 8),
        (SamplerSpec::SchroederLittleExcursion { n: 8 }, Model::Schroeder, ClassKind::LittleExcursion, 8),
    ];
    for (i, (spec, model, kind, n)) in configs.into_iter().enumerate() {
        let class = enumerate(model, kind, n);
        let counts = empirical_histogram(&spec, &class, samples, seed + i as u64);
        let (stat, p) = metrics::chi_square_uniform(&counts);
        checks.push(Check::new(
            format!("chi-square-{}", spec.label()),
            p > p_floor,
            format!("chi2 = {stat:.1}, p = {p:.4} over {} cells", class.len()),
        ));
    }
    // baseline and recovery samplers target identical laws
    for (a, b, model, kind, n, tag) in [
        (
            SamplerSpec::MotzkinPositive { n: 8, weight: None },
            SamplerSpec::Baseline { model: BaselineModel::Motzkin, n: 8 },
            Model::Motzkin,
            ClassKind::Positive,
            8usize,
            "motzkin",
        ),
        (
            SamplerSpec::SchroederApprox { n: 8 },
            SamplerSpec::Baseline { model: BaselineModel::Schroeder, n: 8 },
            Model::Schroeder,
            ClassKind::Positive,
            8,
            "schroeder",
        ),
    ] {
        // the approximate law spans lengths n and n−1
        let mut class = enumerate(model, kind, n);
        if tag == "schroeder" {
            class.extend(enumerate(model, kind, n - 1));
        }
        let ca = empirical_histogram(&a, &class, samples, seed + 101);
        let cb = empirical_histogram(&b, &class, samples, seed + 102);
        let (stat, p) = metrics::chi_square_two_sample(&ca, &cb);
        checks.push(Check::new(
            format!("baseline-agreement-{tag}"),
            p > p_floor,
            format!("two-sample chi2 = {stat:.1}, p = {p:.4}"),
        ));
    }
    checks
}

/// Count/enumeration consistency, the reference counting sequences, the
/// unfold/fold bijection, and the lift bijection.
pub fn suite_counts(max_len: usize) -> Vec<Check> {
    let mut checks = Vec::new();

    let mut ok = true;
    let mut detail = String::new();
    'outer: for n in 0..=max_len.min(12) {
        for model in [Model::Motzkin, Model::Schroeder] {
            for kind in [ClassKind::Positive, ClassKind::Excursion, ClassKind::Lukasiewicz] {
                let c = count(model, kind, n);
                let e = enumerate(model, kind, n).len();
                if c != e.into() {
                    ok = false;
                    detail = format!("{} {} n={n}: DP {c} vs enumeration {e}", model.name(), kind.name());
                    break 'outer;
                }
            }
        }
        for kind in [ClassKind::LittlePositive, ClassKind::LittleExcursion] {
            let c = count(Model::Schroeder, kind, n);
            let e = enumerate(Model::Schroeder, kind, n).len();
            if c != e.into() {
                ok = false;
                detail = format!("{} n={n}: DP {c} vs enumeration {e}", kind.name());
                break 'outer;
            }
        }
    }
    checks.push(Check::new("counts-match-enumeration", ok, if ok { format!("all classes, n <= {}", max_len.min(12)) } else { detail }));

    let motzkin_exc = [1u64, 1, 2, 4, 9, 21, 51, 127];
    let ok = motzkin_exc
        .iter()
        .enumerate()
        .all(|(n, &e)| count(Model::Motzkin, ClassKind::Excursion, n) == e.into());
    checks.push(Check::new("motzkin-excursion-sequence", ok, "1,1,2,4,9,21,51,127"));

    let schroeder_exc = [(0usize, 1u64), (2, 2), (4, 6), (6, 22), (8, 90)];
    let ok = schroeder_exc
        .iter()
        .all(|&(n, e)| count(Model::Schroeder, ClassKind::Excursion, n) == e.into());
    checks.push(Check::new("schroeder-excursion-sequence", ok, "1,2,6,22,90"));

    let little_exc = [(0usize, 1u64), (2, 1), (4, 3), (6, 11), (8, 45)];
    let ok = little_exc
        .iter()
        .all(|&(n, e)| count(Model::Schroeder, ClassKind::LittleExcursion, n) == e.into());
    checks.push(Check::new("little-excursion-sequence", ok, "1,1,3,11,45"));

    let ok = (2..=max_len.max(14)).step_by(2).all(|n| {
        count(Model::Schroeder, ClassKind::Excursion, n)
            == count(Model::Schroeder, ClassKind::LittleExcursion, n) * 2u32
    });
    checks.push(Check::new("excursions-double-little", ok, "count(n) = 2*little(n), 2 <= n <= 14"));

    checks.push(check_round_trip(max_len.min(12)));
    checks.push(check_lift_bijection(max_len.min(12)));
    checks
}

/// fold(unfold(σ, τ)) = (σ, τ) for every split of every Łukasiewicz path,
/// and unfolding is a bijection onto positive paths of odd height.
pub fn check_round_trip(max_len: usize) -> Check {
    for model in [Model::Motzkin, Model::Schroeder] {
        for n in 1..=max_len {
            let mut seen = std::collections::BTreeSet::new();
            for w in enumerate(model, ClassKind::Lukasiewicz, n) {
                for j in 0..w.len() {
                    let sigma = Path::from_steps(model, &w.steps()[..j]);
                    let tau = Path::from_steps(model, &w.steps()[j..]);
                    let unfolded = unfold_concat(&sigma, &tau);
                    if unfolded.height() <= 0
                        || unfolded.height() % 2 == 0
                        || !unfolded.is_positive()
                        || unfolded.geo_len() != w.geo_len()
                    {
                        return Check::new("unfold-fold-round-trip", false, format!("bad unfold of {} @ {j}", w.text()));
                    }
                    if !seen.insert(unfolded.text()) {
                        return Check::new(
                            "unfold-fold-round-trip",
                            false,
                            format!("duplicate unfolding {}", unfolded.text()),
                        );
                    }
                    let (s2, t2) = fold_pair(&unfolded);
                    if s2.text() != sigma.text() || t2.text() != tau.text() {
                        return Check::new(
                            "unfold-fold-round-trip",
                            false,
                            format!("round trip failed for {} @ {j}", w.text()),
                        );
                    }
                }
            }
            // surjectivity: every positive path of odd height is an unfolding
            let odd_heights = enumerate(model, ClassKind::Positive, n)
                .into_iter()
                .filter(|p| p.height() % 2 == 1)
                .count();
            if odd_heights != seen.len() {
                return Check::new(
                    "unfold-fold-round-trip",
                    false,
                    format!("{} unfoldings vs {odd_heights} odd-height paths at n={n}", seen.len()),
                );
            }
        }
    }
    Check::new("unfold-fold-round-trip", true, format!("exhaustive, lengths <= {max_len}"))
}

/// lift maps non-little paths of length n bijectively onto little paths of
/// length n−1 with height ≥ 1, and appending a down step gives the
/// non-little ↔ little excursion bijection.
pub fn check_lift_bijection(max_len: usize) -> Check {
    for n in 1..=max_len {
        let non_little: Vec<Path> = enumerate(Model::Schroeder, ClassKind::Positive, n)
            .into_iter()
            .filter(|p| !p.is_little())
            .collect();
        let mut images = std::collections::BTreeSet::new();
        for p in &non_little {
            let mut q = p.clone();
            q.lift();
            if !(q.is_little() && q.height() >= 1 && q.geo_len() == n - 1) {
                return Check::new("lift-bijection", false, format!("bad lift of {}", p.text()));
            }
            if !images.insert(q.text()) {
                return Check::new("lift-bijection", false, format!("lift collision at {}", q.text()));
            }
        }
        let targets = enumerate(Model::Schroeder, ClassKind::LittlePositive, n.saturating_sub(1))
            .into_iter()
            .filter(|p| p.height() >= 1)
            .count();
        if images.len() != targets {
            return Check::new(
                "lift-bijection",
                false,
                format!("n={n}: {} images vs {targets} little targets", images.len()),
            );
        }
        // excursions: ω ↦ lift(ω)·D
        if n % 2 == 0 {
            let mut exc_images = std::collections::BTreeSet::new();
            let non_little_exc: Vec<Path> = enumerate(Model::Schroeder, ClassKind::Excursion, n)
                .into_iter()
                .filter(|p| !p.is_little())
                .collect();
            for p in &non_little_exc {
                let mut q = p.clone();
                q.lift();
                q.push(Step::Down);
                if !(q.is_little() && q.height() == 0 && q.geo_len() == n) {
                    return Check::new("lift-bijection", false, format!("bad excursion map of {}", p.text()));
                }
                exc_images.insert(q.text());
            }
            let little_exc = enumerate(Model::Schroeder, ClassKind::LittleExcursion, n).len();
            if n >= 2 && (exc_images.len() != non_little_exc.len() || exc_images.len() != little_exc) {
                return Check::new(
                    "lift-bijection",
                    false,
                    format!("excursion map not bijective at n={n}"),
                );
            }
        }
    }
    Check::new("lift-bijection", true, format!("exhaustive, lengths <= {max_len}"))
}

/// Success probabilities against their closed forms and limits, and the
/// limit-law moments.
pub fn suite_limits(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();

    let values: Vec<(usize, f64)> =
        [100usize, 1000, 10_000].iter().map(|&n| (n, oracles::motzkin_success(n).1)).collect();
    let limit = oracles::motzkin_success_limit();
    let in_band = values.iter().all(|&(_, s)| s > 0.86 && s < 0.90);
    let monotone = values.windows(2).all(|w| (w[1].1 - limit).abs() < (w[0].1 - limit).abs());
    checks.push(Check::new(
        "motzkin-first-try-success",
        in_band && monotone,
        format!(
            "success(100)={:.5}, success(1000)={:.5}, success(10000)={:.5}, limit={:.5}",
            values[0].1, values[1].1, values[2].1, limit
        ),
    ));

    let schroeder: Vec<(usize, f64)> = [100usize, 101, 1000, 10_000]
        .iter()
        .map(|&n| (n, oracles::schroeder_success(n).1))
        .collect();
    let ok = schroeder.iter().all(|&(_, s)| s > 0.94);
    let slimit = oracles::schroeder_success_limit();
    checks.push(Check::new(
        "schroeder-first-try-success",
        ok && slimit > 0.94,
        format!(
            "success(100)={:.5}, success(1000)={:.5}, success(10000)={:.5}, limit={:.5}",
            schroeder[0].1, schroeder[2].1, schroeder[3].1, slimit
        ),
    ));

    let samples = metrics::simulate_limit_law(100_000, 1e-6, seed, false);
    let n = samples.len() as f64;
    let mean_s = samples.iter().map(|v| v - 1.0).sum::<f64>() / n;
    let var_s = samples.iter().map(|v| (v - 1.0 - mean_s).powi(2)).sum::<f64>() / n;
    checks.push(Check::new(
        "limit-law-moments",
        (mean_s - 0.25).abs() < 0.01 && (var_s - 1.0 / 12.0).abs() < 0.01,
        format!("E[S] = {mean_s:.4} (target 0.25), Var[S] = {var_s:.4} (target 0.0833)"),
    ));

    // informational factor means at a reduced scale
    let pos = metrics::run_metered(&SamplerSpec::MotzkinPositive { n: 10_000, weight: None }, 300, seed);
    let exc = metrics::run_metered(&SamplerSpec::MotzkinExcursion { n: 10_000, weight: None }, 300, seed);
    checks.push(Check::new(
        "factor-means-reduced-scale",
        (pos.mean_time_factor - 1.25).abs() < 0.05 && (exc.mean_time_factor - 1.75).abs() < 0.07,
        format!(
            "positive time factor {:.3} (target 1.25), excursion {:.3} (target 1.75), entropy factor {:.4}",
            pos.mean_time_factor,
            exc.mean_time_factor,
            pos.entropy_factor.unwrap_or(f64::NAN)
        ),
    ));

    checks
}
