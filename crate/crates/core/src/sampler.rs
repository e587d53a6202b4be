//! Sampler dispatch: one enum naming every sampler in the crate, a common
//! attempt/restart protocol, and restart-aware meter accounting.
//!
//! Every sampler is split into a single *attempt* that may fail (recovery
//! rejection, a guard on an extend, or the baseline's dip below the axis)
//! and a driver that restarts attempts until one succeeds, accumulating the
//! discarded work into the final sample's meters.

use num_rational::BigRational;

use crate::florentine::{self, BaselineModel};
use crate::motzkin::{self, MotzkinParams};
use crate::paths::{Path, PathMeter};
use crate::random::RandomDraws;
use crate::schroeder;

/// Meter snapshot of a failed attempt.
#[derive(Clone, Copy, Debug)]
pub struct Discard {
    pub meter: PathMeter,
    pub steps: usize,
}

impl Discard {
    pub fn of(path: Path) -> Self {
        Discard { meter: path.meter, steps: path.len() }
    }
}

/// Outcome of one attempt: a finished path or the cost of the failure.
pub type Attempt = Result<Path, Discard>;

/// A successful sample. The path's meter includes the touches spent on
/// restarted attempts.
#[derive(Clone, Debug)]
pub struct Sample {
    pub path: Path,
    pub restarts: u64,
    /// Steps present in failed attempts at the moment they were discarded.
    pub discarded_steps: u64,
}

impl Sample {
    pub fn first_try(&self) -> bool {
        self.restarts == 0
    }
}

/// Restart `attempt` until it succeeds, folding discarded meters into the
/// returned sample.
pub fn run_attempts<R, F>(mut attempt: F, src: &mut R) -> Sample
where
    R: RandomDraws + ?Sized,
    F: FnMut(&mut R) -> Attempt,
{
    let mut restarts = 0u64;
    let mut discarded_steps = 0u64;
    let mut carry = PathMeter::default();
    loop {
        match attempt(src) {
            Ok(mut path) => {
                path.meter.absorb(carry);
                #[cfg(debug_assertions)]
                path.validate();
                return Sample { path, restarts, discarded_steps };
            }
            Err(d) => {
                restarts += 1;
                discarded_steps += d.steps as u64;
                carry.absorb(d.meter);
            }
        }
    }
}

/// Every sampler exposed by the crate. `n` is the step length for the
/// Motzkin models and the geometric length for the Schröder models.
#[derive(Clone, Debug)]
pub enum SamplerSpec {
    MotzkinPositive { n: usize, weight: Option<BigRational> },
    MotzkinExcursion { n: usize, weight: Option<BigRational> },
    /// Positive path of length n or n−1 (the approximate sampler the exact
    /// ones are built on).
    SchroederApprox { n: usize },
    /// Uniform positive path of geometric length n (odd and even variants
    /// dispatched on parity).
    SchroederPositive { n: usize },
    SchroederExcursion { n: usize },
    SchroederLittlePositive { n: usize },
    SchroederLittleExcursion { n: usize },
    /// Anticipated-rejection baseline.
    Baseline { model: BaselineModel, n: usize },
}

impl SamplerSpec {
    pub fn label(&self) -> String {
        match self {
            SamplerSpec::MotzkinPositive { n, weight: None } => format!("motzkin-positive(n={n})"),
            SamplerSpec::MotzkinPositive { n, weight: Some(c) } => {
                format!("motzkin-colored-positive(n={n},c={c})")
            }
            SamplerSpec::MotzkinExcursion { n, weight: None } => format!("motzkin-excursion(n={n})"),
            SamplerSpec::MotzkinExcursion { n, weight: Some(c) } => {
                format!("motzkin-colored-excursion(n={n},c={c})")
            }
            SamplerSpec::SchroederApprox { n } => format!("schroeder-approx(n={n})"),
            SamplerSpec::SchroederPositive { n } => format!("schroeder-positive(n={n})"),
            SamplerSpec::SchroederExcursion { n } => format!("schroeder-excursion(n={n})"),
            SamplerSpec::SchroederLittlePositive { n } => format!("schroeder-little-positive(n={n})"),
            SamplerSpec::SchroederLittleExcursion { n } => {
                format!("schroeder-little-excursion(n={n})")
            }
            SamplerSpec::Baseline { model, n } => format!("florentine-{}(n={n})", model.name()),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            SamplerSpec::MotzkinPositive { n, .. }
            | SamplerSpec::MotzkinExcursion { n, .. }
            | SamplerSpec::SchroederApprox { n }
            | SamplerSpec::SchroederPositive { n }
            | SamplerSpec::SchroederExcursion { n }
            | SamplerSpec::SchroederLittlePositive { n }
            | SamplerSpec::SchroederLittleExcursion { n }
            | SamplerSpec::Baseline { n, .. } => *n,
        }
    }

    /// Parity and bound checks, mirrored by the CLI.
    pub fn check(&self) -> Result<(), String> {
        match self {
            SamplerSpec::MotzkinPositive { n, .. } if *n == 0 => {
                Err("positive Motzkin paths need length >= 1".into())
            }
            SamplerSpec::SchroederApprox { n } | SamplerSpec::SchroederPositive { n } if *n == 0 => {
                Err("positive Schröder paths need length >= 1".into())
            }
            SamplerSpec::SchroederExcursion { n } if *n % 2 == 1 => {
                Err(format!("Schröder excursions need even length, got {n}"))
            }
            SamplerSpec::SchroederLittleExcursion { n } if *n % 2 == 1 => {
                Err(format!("little Schröder excursions need even length, got {n}"))
            }
            _ => Ok(()),
        }
    }

    /// One attempt; rejection returns the discarded cost.
    pub fn attempt<R: RandomDraws + ?Sized>(&self, src: &mut R) -> Attempt {
        match self {
            SamplerSpec::MotzkinPositive { n, weight } => {
                motzkin::attempt_positive(&motzkin_params(*n, weight), src)
            }
            SamplerSpec::MotzkinExcursion { n, weight } => {
                motzkin::attempt_excursion(&motzkin_params(*n, weight), src)
            }
            SamplerSpec::SchroederApprox { n } => schroeder::attempt_approx(*n, src),
            SamplerSpec::SchroederPositive { n } => {
                if *n % 2 == 1 {
                    schroeder::attempt_pos_odd(*n, src)
                } else {
                    schroeder::attempt_pos_even(*n, src)
                }
            }
            SamplerSpec::SchroederExcursion { n } => schroeder::attempt_excursion(*n, src),
            SamplerSpec::SchroederLittlePositive { n } => {
                if *n % 2 == 1 {
                    schroeder::attempt_little_odd(*n, src)
                } else {
                    schroeder::attempt_little_even(*n, src)
                }
            }
            SamplerSpec::SchroederLittleExcursion { n } => {
                schroeder::attempt_little_excursion(*n, src)
            }
            SamplerSpec::Baseline { model, n } => florentine::attempt_positive(*model, *n, src),
        }
    }

    /// Sample to completion, restarting on rejection.
    pub fn run<R: RandomDraws + ?Sized>(&self, src: &mut R) -> Sample {
        run_attempts(|r| self.attempt(r), src)
    }
}

fn motzkin_params(n: usize, weight: &Option<BigRational>) -> MotzkinParams {
    match weight {
        None => MotzkinParams::plain(n),
        Some(c) => MotzkinParams::colored(n, c.clone()),
    }
}
