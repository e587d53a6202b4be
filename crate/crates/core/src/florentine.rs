//! Baseline anticipated-rejection samplers: draw steps until the target
//! length, restart from scratch the moment the path dips below the axis.
//! Used as the comparison point for the recovery samplers' benchmarks.

use crate::paths::{Model, Path, Step};
use crate::random::RandomDraws;
use crate::sampler::{Attempt, Discard};

/// Step model for the baseline. Dyck paths use fair up/down bits.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BaselineModel {
    Motzkin,
    Schroeder,
    Dyck,
}

impl BaselineModel {
    pub fn name(self) -> &'static str {
        match self {
            BaselineModel::Motzkin => "motzkin",
            BaselineModel::Schroeder => "schroeder",
            BaselineModel::Dyck => "dyck",
        }
    }
}

/// One anticipated-rejection attempt at a positive path of length `n`
/// (geometric length for the Schröder model, with the same overshoot trim as
/// the recovery sampler so both target the same output law).
pub(crate) fn attempt_positive<R: RandomDraws + ?Sized>(
    model: BaselineModel,
    n: usize,
    src: &mut R,
) -> Attempt {
    match model {
        BaselineModel::Motzkin => {
            let mut path = Path::new(Model::Motzkin);
            while path.len() < n {
                path.push(src.draw_step(Model::Motzkin, None));
                if path.height() < 0 {
                    return Err(Discard::of(path));
                }
            }
            Ok(path)
        }
        BaselineModel::Dyck => {
            let mut path = Path::new(Model::Motzkin);
            while path.len() < n {
                let step = if src.next_bit() { Step::Up } else { Step::Down };
                path.push(step);
                if path.height() < 0 {
                    return Err(Discard::of(path));
                }
            }
            Ok(path)
        }
        BaselineModel::Schroeder => {
            let mut path = Path::new(Model::Schroeder);
            while path.geo_len() < n {
                path.push(src.draw_step(Model::Schroeder, None));
                if path.height() < 0 {
                    return Err(Discard::of(path));
                }
            }
            if path.geo_len() == n + 1 {
                path.truncate_last();
            }
            Ok(path)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::BitSource;
    use crate::sampler::run_attempts;

    #[test]
    fn dyck_n2_uniform() {
        let mut src = BitSource::new(41);
        let trials = 40_000u64;
        let mut counts = std::collections::BTreeMap::new();
        for _ in 0..trials {
            let s = run_attempts(|r| attempt_positive(BaselineModel::Dyck, 2, r), &mut src);
            *counts.entry(s.path.text()).or_insert(0u64) += 1;
        }
        assert_eq!(counts.keys().cloned().collect::<Vec<_>>(), vec!["UD", "UU"]);
        for &c in counts.values() {
            let f = c as f64 / trials as f64;
            assert!((f - 0.5).abs() < 0.01);
        }
    }

    #[test]
    fn motzkin_n2_uniform_over_five() {
        let mut src = BitSource::new(42);
        let trials = 100_000u64;
        let mut counts = std::collections::BTreeMap::new();
        for _ in 0..trials {
            let s = run_attempts(|r| attempt_positive(BaselineModel::Motzkin, 2, r), &mut src);
            *counts.entry(s.path.text()).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 5);
        for &c in counts.values() {
            let f = c as f64 / trials as f64;
            assert!((f - 0.2).abs() < 0.006);
        }
    }

    #[test]
    fn motzkin_large_n_draws_about_two_n_steps() {
        let n = 10_000usize;
        let mut src = BitSource::new(43);
        let trials = 60u64;
        let mut total = 0u64;
        for _ in 0..trials {
            let s = run_attempts(|r| attempt_positive(BaselineModel::Motzkin, n, r), &mut src);
            total += s.path.len() as u64 + s.discarded_steps;
        }
        let per_n = total as f64 / (trials as f64 * n as f64);
        assert!((per_n - 2.0).abs() < 0.35, "steps drawn per n: {per_n}");
    }
}
