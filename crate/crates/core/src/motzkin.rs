//! Recovery samplers for plain and colored Motzkin positive paths and
//! excursions.
//!
//! The positive-path sampler pushes uniform steps and, whenever the path dips
//! to height −1, applies a recovery transform that redistributes the failed
//! path over all positive paths of the same length instead of restarting.
//! A single uniform draw selects among the recovery cases; only one case can
//! reject, so the total rejection probability stays O(1) over a whole run.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::exact::Exact;
use crate::paths::{Model, Path, PathClass, Step};
use crate::random::RandomDraws;
use crate::sampler::{Attempt, Discard};

/// Target length plus the optional flat weight of the colored model.
#[derive(Clone, Debug)]
pub struct MotzkinParams {
    pub n: usize,
    weight: Option<(BigRational, u64, u64)>,
}

impl MotzkinParams {
    pub fn plain(n: usize) -> Self {
        MotzkinParams { n, weight: None }
    }

    /// Colored model with flat weight `c > 0` (rational, so every recovery
    /// probability stays exactly representable).
    pub fn colored(n: usize, c: BigRational) -> Self {
        assert!(c.is_positive(), "flat weight must be positive");
        let cp = c.numer().to_u64().expect("flat weight numerator must fit u64");
        let cq = c.denom().to_u64().expect("flat weight denominator must fit u64");
        assert!(cp <= i64::MAX as u64 && cq <= i64::MAX as u64);
        MotzkinParams { n, weight: Some((c, cp, cq)) }
    }

    pub fn model(&self) -> Model {
        if self.weight.is_some() {
            Model::ColoredMotzkin
        } else {
            Model::Motzkin
        }
    }

    pub fn weight(&self) -> Option<&BigRational> {
        self.weight.as_ref().map(|(c, _, _)| c)
    }

    /// The per-case recovery probability `q_len`: `1/(2·len+1)` plain,
    /// `1/(2·len+max(1,c))` colored.
    pub fn q(&self, len: usize) -> BigRational {
        let two_n = BigInt::from(2 * len as u64);
        match &self.weight {
            None => BigRational::new(BigInt::from(1), two_n + 1),
            Some((c, _, _)) => {
                let one = BigRational::from_integer(1.into());
                let m = if c > &one { c.clone() } else { one };
                (BigRational::from_integer(two_n) + m).recip()
            }
        }
    }

    fn with_n(&self, n: usize) -> Self {
        let mut p = self.clone();
        p.n = n;
        p
    }
}

/// Flippable step of a colored path: index and kind of the last U or F,
/// scanning over trailing down and weighted-flat steps. Charges one read per
/// examined step.
fn find_flippable(path: &mut Path) -> Option<(usize, Step)> {
    let mut i = path.len();
    let mut found = None;
    while i > 0 {
        i -= 1;
        path.meter.reads += 1;
        match path.steps()[i] {
            Step::Down | Step::ColoredFlat => continue,
            s => {
                found = Some((i, s));
                break;
            }
        }
    }
    found
}

/// Recovery transform for a Łukasiewicz path of length `n`. Returns false on
/// rejection (the caller restarts). The surviving path is positive with the
/// same length.
pub(crate) fn recover<R: RandomDraws + ?Sized>(
    path: &mut Path,
    params: &MotzkinParams,
    src: &mut R,
) -> bool {
    debug_assert_eq!(path.classify(), PathClass::Lukasiewicz);
    let n = path.len();
    match &params.weight {
        None => {
            let j = src.uniform_int(2 * n as u64 + 1) as usize;
            if j < n {
                // unfold at a uniform split
                path.unfold_at(j);
                true
            } else if j < 2 * n {
                // unfold, then flip to reach the even-height classes
                path.unfold_at(j - n);
                let flipped = path.flip();
                debug_assert!(flipped && path.height() >= 0);
                true
            } else {
                // flip the whole path; undefined or negative height rejects
                path.flip() && path.height() >= 0
            }
        }
        Some((_, cp, cq)) => {
            // Layered draw with the same exact case law: the unfold block
            // carries mass 2n·q_n (then a uniform split and a fair flip
            // bit, q_n per case); the remaining mass q_n·max(1,c) goes to
            // the single tail case selected by the flippable step.
            let q = Exact::from_rational(params.q(n));
            let block = &q * &Exact::from_int(2 * n as i64);
            if src.bernoulli(&block) {
                path.unfold_at(src.uniform_int(n as u64) as usize);
                if src.next_bit() {
                    let flipped = path.flip();
                    debug_assert!(flipped && path.height() >= 0);
                }
                true
            } else if let Some((pos, Step::Flat)) = find_flippable(path) {
                // excursion with the flippable step turned up, mass q_n:
                // within the tail that is probability 1/max(1,c)
                let take = *cp <= *cq || src.bernoulli(&Exact::ratio(*cq as i64, *cp as i64));
                if take {
                    path.rewrite_step(pos, Step::Up);
                    debug_assert_eq!(path.height(), 0);
                }
                take
            } else {
                // flippable step is U or absent: the final down step becomes
                // the weighted flat, mass q_n·c = c/max(1,c) of the tail
                let take = *cp >= *cq || src.bernoulli(&Exact::ratio(*cp as i64, *cq as i64));
                if take {
                    let last = path.len() - 1;
                    debug_assert_eq!(path.steps()[last], Step::Down);
                    path.rewrite_step(last, Step::ColoredFlat);
                    debug_assert_eq!(path.height(), 0);
                }
                take
            }
        }
    }
}

/// One attempt at a positive path of length `n`: push random steps, recover
/// on every dip to −1, fail out on rejection.
pub(crate) fn attempt_positive<R: RandomDraws + ?Sized>(
    params: &MotzkinParams,
    src: &mut R,
) -> Attempt {
    let model = params.model();
    let weight = params.weight().cloned();
    let mut path = Path::new(model);
    for _ in 0..params.n {
        path.push(src.draw_step(model, weight.as_ref()));
        if path.height() == -1 && !recover(&mut path, params, src) {
            return Err(Discard::of(path));
        }
    }
    Ok(path)
}

/// One attempt at an excursion of length `n`: sample a positive path of
/// length `n + 1`, flip odd (keeping height ≥ 1), fold, and drop the closing
/// down step.
pub(crate) fn attempt_excursion<R: RandomDraws + ?Sized>(
    params: &MotzkinParams,
    src: &mut R,
) -> Attempt {
    let inner = params.with_n(params.n + 1);
    let mut path = attempt_positive(&inner, src)?;
    if path.height() % 2 == 0 && (!path.flip() || path.height() < 1) {
        return Err(Discard::of(path));
    }
    path.fold_drop();
    Ok(path)
}
