//! Extend/recover primitives and the six Schröder samplers, including little
//! Schröder paths (no flat step at height 0).
//!
//! Steps are drawn with probabilities r, r², r for up, flat, down, where
//! r = √2 − 1 (so a path of geometric length ℓ has probability r^ℓ and the
//! conditional distributions are uniform). Flat steps count 2 toward the
//! geometric length, so a dip to −1 can only happen at odd length and
//! recovery fires there.

use crate::exact::Exact;
use crate::paths::{Model, Path, PathClass, Step};
use crate::random::RandomDraws;
use crate::sampler::{Attempt, Discard};

fn r_value() -> Exact {
    Exact::sqrt2_minus_one()
}

/// Random length-extension: appends U or D with probability r each, or with
/// probability r² turns the last non-flat step of the scanned prefix into a
/// flat (recursing past trailing flats). Returns false on the all-flat
/// rejection. Output has geometric length +1 and is positive whenever the
/// input has positive height; from height 0 it may end at −1 (callers
/// guard).
///
/// Meters one read per examined trailing step and one or two writes for the
/// final mutation.
pub(crate) fn extend<R: RandomDraws + ?Sized>(path: &mut Path, src: &mut R) -> bool {
    let r = r_value();
    let atoms = [r.clone(), r.clone(), &r * &r];
    let mut trailing = 0usize; // flats already scanned past
    loop {
        let choice = src.categorical(&atoms).expect("step atoms sum to 1");
        if choice < 2 {
            let step = if choice == 0 { Step::Up } else { Step::Down };
            let at = path.len() - trailing;
            let h_before = path.height(); // trailing flats contribute 0
            if trailing == 0 {
                path.push(step);
            } else {
                // insert before the trailing flats: all of them are equal,
                // so write the new step in place and append one flat
                path.push(Step::Flat);
                path.rewrite_step(at, step);
                path.refresh_flat_zero_from(at, h_before);
            }
            return true;
        }
        // flat transform
        let at = path.len() - trailing;
        if at == 0 {
            return false;
        }
        path.meter.reads += 1;
        match path.steps()[at - 1] {
            Step::Flat => {
                trailing += 1;
            }
            s @ (Step::Up | Step::Down) => {
                let h_prefix = path.height() - s.dh();
                path.rewrite_step(at - 1, Step::Flat);
                path.refresh_flat_zero_from(at - 1, h_prefix);
                return true;
            }
            Step::ColoredFlat => unreachable!("no weighted flats in the Schröder model"),
        }
    }
}

/// Recovery for a Łukasiewicz path of odd geometric length m. With
/// probability m/(m+r) a uniform geometric cell selects either an unfold
/// split (first cell of any step) or a marked flat (second cell of a flat);
/// otherwise the final down step becomes a flat. Returns false on rejection.
///
/// The marked-flat branch deletes the flat, unfolds at its position, extends,
/// requires height ≥ 2 and appends a flat; its cost is the size of the
/// scanned right factor, charged through the unfold plus one extra read.
pub(crate) fn recover<R: RandomDraws + ?Sized>(path: &mut Path, src: &mut R) -> bool {
    debug_assert_eq!(path.classify(), PathClass::Lukasiewicz);
    let m = path.geo_len();
    debug_assert_eq!(m % 2, 1);
    let r = r_value();
    let m_exact = Exact::from_int(m as i64);
    let slot_prob = &m_exact / &(&m_exact + &r);
    if src.bernoulli(&slot_prob) {
        let j = src.uniform_int(m as u64) as usize;
        // locate cell j scanning from the end; the scanned steps are the
        // right factor the rewrite will touch
        let mut cell_end = m;
        let mut t = path.len();
        let (split, mark) = loop {
            t -= 1;
            let g = if path.steps()[t] == Step::Flat { 2 } else { 1 };
            let cell_start = cell_end - g;
            if j >= cell_start {
                break (t, j > cell_start);
            }
            cell_end = cell_start;
        };
        if !mark {
            path.unfold_at(split);
            true
        } else {
            path.meter.reads += 1; // the marked flat itself
            path.remove_step(split);
            path.unfold_at(split);
            if !extend(path, src) || path.height() < 2 {
                return false;
            }
            path.push(Step::Flat);
            true
        }
    } else {
        let last = path.len() - 1;
        debug_assert_eq!(path.steps()[last], Step::Down);
        path.rewrite_step(last, Step::Flat);
        // the new flat closes an excursion, so its prefix height is 0
        path.refresh_flat_zero_from(last, 0);
        true
    }
}

/// One attempt at a positive path of geometric length n or n−1: draw steps
/// until length ≥ n, recovering on every dip, then trim an overshooting
/// trailing flat.
pub(crate) fn attempt_approx<R: RandomDraws + ?Sized>(n: usize, src: &mut R) -> Attempt {
    let mut path = Path::new(Model::Schroeder);
    while path.geo_len() < n {
        path.push(src.draw_step(Model::Schroeder, None));
        if path.height() == -1 && !recover(&mut path, src) {
            return Err(Discard::of(path));
        }
    }
    if path.geo_len() == n + 1 {
        debug_assert_eq!(*path.steps().last().unwrap(), Step::Flat);
        path.truncate_last();
    }
    Ok(path)
}

/// Uniform positive path of odd geometric length n.
pub(crate) fn attempt_pos_odd<R: RandomDraws + ?Sized>(n: usize, src: &mut R) -> Attempt {
    debug_assert_eq!(n % 2, 1);
    let mut path = attempt_approx(n, src)?;
    if path.geo_len() == n - 1 && (!extend(&mut path, src) || path.height() < 1) {
        return Err(Discard::of(path));
    }
    Ok(path)
}

/// Uniform excursion of even geometric length n.
pub(crate) fn attempt_excursion<R: RandomDraws + ?Sized>(n: usize, src: &mut R) -> Attempt {
    debug_assert_eq!(n % 2, 0);
    let mut path = attempt_approx(n, src)?;
    if path.geo_len() == n {
        if !extend(&mut path, src) || path.height() < 1 {
            return Err(Discard::of(path));
        }
        path.fold_drop();
    } else {
        path.fold_flat();
    }
    debug_assert_eq!(path.geo_len(), n);
    Ok(path)
}

/// Uniform positive path of even geometric length n ≥ 2: with probability
/// (n+1)/(n+1+r) run the approximate sampler and extend a short result
/// (height ≥ 2), otherwise return an excursion.
pub(crate) fn attempt_pos_even<R: RandomDraws + ?Sized>(n: usize, src: &mut R) -> Attempt {
    debug_assert!(n.is_multiple_of(2) && n >= 2);
    let r = r_value();
    let np1 = Exact::from_int(n as i64 + 1);
    let branch = &np1 / &(&np1 + &r);
    if src.bernoulli(&branch) {
        let mut path = attempt_approx(n, src)?;
        if path.geo_len() == n - 1 && (!extend(&mut path, src) || path.height() < 2) {
            return Err(Discard::of(path));
        }
        Ok(path)
    } else {
        attempt_excursion(n, src)
    }
}

/// Uniform little excursion of even geometric length n: lift a non-little
/// excursion and close it with a down step.
pub(crate) fn attempt_little_excursion<R: RandomDraws + ?Sized>(n: usize, src: &mut R) -> Attempt {
    let mut path = attempt_excursion(n, src)?;
    if !path.is_little() {
        path.lift();
        path.push(Step::Down);
    }
    Ok(path)
}

/// Uniform little positive path of even geometric length n.
pub(crate) fn attempt_little_even<R: RandomDraws + ?Sized>(n: usize, src: &mut R) -> Attempt {
    debug_assert_eq!(n % 2, 0);
    if n == 0 {
        return Ok(Path::new(Model::Schroeder));
    }
    let mut path = attempt_pos_even(n, src)?;
    if !path.is_little() {
        path.lift();
        if !extend(&mut path, src) || !path.is_little() {
            return Err(Discard::of(path));
        }
    }
    Ok(path)
}

/// Uniform little positive path of odd geometric length n: extend a little
/// path of length n−1, rejecting height-1 paths that end with a flat (those
/// arrive instead via the trailing-DD rewrite).
pub(crate) fn attempt_little_odd<R: RandomDraws + ?Sized>(n: usize, src: &mut R) -> Attempt {
    debug_assert_eq!(n % 2, 1);
    let mut path = attempt_little_even(n - 1, src)?;
    if !extend(&mut path, src) {
        return Err(Discard::of(path));
    }
    if path.height() == 1 && path.steps().last() == Some(&Step::Flat) {
        return Err(Discard::of(path));
    }
    if path.height() == -1 {
        let len = path.len();
        if len >= 2 && path.steps()[len - 2] == Step::Down {
            debug_assert_eq!(path.steps()[len - 1], Step::Down);
            path.truncate_last();
            let last = path.len() - 1;
            path.rewrite_step(last, Step::Flat);
            // the flat sits at height 1, above any little-path violation
            path.refresh_flat_zero_from(last, 1);
        } else {
            // extend of the empty path produced a bare down step; the
            // flat-rewrite target class is empty at this length
            return Err(Discard::of(path));
        }
    }
    debug_assert!(path.is_positive());
    Ok(path)
}
