//! Ground-truth machinery: exhaustive enumeration, counting DP, symbolic
//! distributions of the recovery primitives, full choice-tree sampler
//! distributions, and exact first-try success probabilities.
//!
//! Everything here is exact. Distributions are maps from path text to
//! elements of Q(√2); checks against them carry zero tolerance. The
//! symbolic recover/extend distributions are derived from the case structure
//! of the operations (not by calling the samplers), while
//! [`exact_sampler_dist`] drives the *real* sampler code through every
//! branch of its choice tree — the two routes meeting is the verification.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::{ln_ratio, Exact};
use crate::paths::{unfold_concat, Model, Path, PathClass, Step};
use crate::random::{step_outcomes, RandomDraws};
use crate::sampler::SamplerSpec;

/// Path classes the oracles enumerate and count. Lengths are geometric for
/// the Schröder model.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassKind {
    Positive,
    Excursion,
    Lukasiewicz,
    LittlePositive,
    LittleExcursion,
}

impl ClassKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassKind::Positive => "positive",
            ClassKind::Excursion => "excursion",
            ClassKind::Lukasiewicz => "lukasiewicz",
            ClassKind::LittlePositive => "little-positive",
            ClassKind::LittleExcursion => "little-excursion",
        }
    }

    fn little(self) -> bool {
        matches!(self, ClassKind::LittlePositive | ClassKind::LittleExcursion)
    }
}

/// All paths of the class with (geometric) length exactly `n`, in
/// lexicographic order of their tag strings.
pub fn enumerate(model: Model, kind: ClassKind, n: usize) -> Vec<Path> {
    assert!(
        model == Model::Schroeder || !kind.little(),
        "little classes are Schröder-only"
    );
    let mut out = Vec::new();
    let mut steps = Vec::new();
    // Tag alphabet in lexicographic order: C < D < F < U.
    let alphabet: &[Step] = match model {
        Model::ColoredMotzkin => &[Step::ColoredFlat, Step::Down, Step::Flat, Step::Up],
        _ => &[Step::Down, Step::Flat, Step::Up],
    };
    fn rec(
        model: Model,
        kind: ClassKind,
        alphabet: &[Step],
        steps: &mut Vec<Step>,
        h: i64,
        remaining: usize,
        out: &mut Vec<Path>,
    ) {
        if remaining == 0 {
            let done = match kind {
                ClassKind::Positive | ClassKind::LittlePositive => true,
                ClassKind::Excursion | ClassKind::LittleExcursion => h == 0,
                ClassKind::Lukasiewicz => h == -1,
            };
            if done {
                out.push(Path::from_steps(model, steps));
            }
            return;
        }
        for &s in alphabet {
            let geo = if s == Step::Flat && model == Model::Schroeder { 2 } else { 1 };
            if geo > remaining {
                continue;
            }
            let nh = h + s.dh();
            let legal = if kind == ClassKind::Lukasiewicz {
                // the single dip below 0 must close the path
                nh >= 0 || (nh == -1 && remaining == geo)
            } else {
                nh >= 0
            };
            if !legal {
                continue;
            }
            if kind.little() && s == Step::Flat && h == 0 {
                continue;
            }
            steps.push(s);
            rec(model, kind, alphabet, steps, nh, remaining - geo, out);
            steps.pop();
        }
    }
    rec(model, kind, alphabet, &mut steps, 0, n, &mut out);
    out
}

/// Exact count of the class at (geometric) length `n`, by dynamic
/// programming over (position, height).
pub fn count(model: Model, kind: ClassKind, n: usize) -> BigUint {
    assert_ne!(model, Model::ColoredMotzkin, "use count_weighted for the colored model");
    if kind == ClassKind::Lukasiewicz {
        // a Łukasiewicz path is an excursion plus its closing down step
        if n == 0 {
            return BigUint::zero();
        }
        return count(model, ClassKind::Excursion, n - 1);
    }
    let rows = positive_dp(model, kind.little(), n);
    match kind {
        ClassKind::Positive | ClassKind::LittlePositive => rows.iter().sum(),
        ClassKind::Excursion | ClassKind::LittleExcursion => rows[0].clone(),
        ClassKind::Lukasiewicz => unreachable!(),
    }
}

/// Height profile (counts by final height) of positive paths of length `n`.
fn positive_dp(model: Model, little: bool, n: usize) -> Vec<BigUint> {
    // cur[h] = paths of geometric length t ending at height h
    let mut cur = vec![BigUint::zero(); n + 2];
    let mut prev = vec![BigUint::zero(); n + 2]; // length t−1 (Schröder flat source)
    cur[0] = BigUint::one();
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); n + 2];
        for h in 0..=n {
            let mut acc = BigUint::zero();
            if h > 0 {
                acc += &cur[h - 1]; // up
            }
            acc += &cur[h + 1]; // down
            match model {
                Model::Motzkin => {
                    if !little || h != 0 {
                        acc += &cur[h];
                    }
                }
                Model::Schroeder => {
                    if !little || h != 0 {
                        acc += &prev[h]; // flat spans two geometric cells
                    }
                }
                Model::ColoredMotzkin => unreachable!(),
            }
            next[h] = acc;
        }
        prev = cur;
        cur = next;
    }
    cur.truncate(n + 1);
    cur
}

/// Total weight of the colored-Motzkin class at length `n`, where a path
/// weighs `c^{#weighted flats}`.
pub fn count_weighted(kind: ClassKind, n: usize, c: &BigRational) -> BigRational {
    assert!(!kind.little());
    if kind == ClassKind::Lukasiewicz {
        if n == 0 {
            return BigRational::zero();
        }
        return count_weighted(ClassKind::Excursion, n - 1, c);
    }
    let mut cur = vec![BigRational::zero(); n + 2];
    cur[0] = BigRational::one();
    for _ in 0..n {
        let mut next = vec![BigRational::zero(); n + 2];
        for h in 0..=n {
            let mut acc = BigRational::zero();
            if h > 0 {
                acc += &cur[h - 1];
            }
            acc += &cur[h + 1];
            acc += &cur[h] * (BigRational::one() + c); // plain flat + weighted flat
            next[h] = acc;
        }
        cur = next;
    }
    match kind {
        ClassKind::Positive => cur.iter().take(n + 1).sum(),
        ClassKind::Excursion => cur[0].clone(),
        _ => unreachable!(),
    }
}

/// Counting sequence of one class, indexed by (geometric) length.
#[derive(Clone, Debug)]
pub struct CountTable {
    pub model: Model,
    pub kind: ClassKind,
    pub values: Vec<BigUint>,
}

impl CountTable {
    pub fn compute(model: Model, kind: ClassKind, max_n: usize) -> Self {
        let values = (0..=max_n).map(|n| count(model, kind, n)).collect();
        CountTable { model, kind, values }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "model": self.model.name(),
            "kind": self.kind.name(),
            "values": self.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// A finite exact distribution over paths, plus explicit rejection mass.
#[derive(Clone, Debug)]
pub struct DistTable {
    pub entries: BTreeMap<String, Exact>,
    pub reject: Exact,
}

impl DistTable {
    pub fn new() -> Self {
        DistTable { entries: BTreeMap::new(), reject: Exact::zero() }
    }

    pub fn add(&mut self, key: String, p: Exact) {
        if p.is_zero() {
            return;
        }
        let slot = self.entries.entry(key).or_insert_with(Exact::zero);
        *slot = &*slot + &p;
    }

    pub fn add_reject(&mut self, p: Exact) {
        self.reject = &self.reject + &p;
    }

    pub fn total(&self) -> Exact {
        let mut t = self.reject.clone();
        for v in self.entries.values() {
            t = &t + v;
        }
        t
    }

    /// The distribution conditioned on no rejection.
    pub fn conditional(&self) -> DistTable {
        let keep = Exact::one() - &self.reject;
        assert!(keep.is_positive(), "all mass rejects");
        let mut out = DistTable::new();
        for (k, v) in &self.entries {
            out.entries.insert(k.clone(), v / &keep);
        }
        out
    }

    /// True iff every entry equals `p` and nothing else has mass.
    pub fn is_constant(&self, p: &Exact) -> bool {
        self.entries.values().all(|v| v == p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: serde_json::Map<String, serde_json::Value> = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.display_string())))
            .collect();
        serde_json::json!({
            "entries": entries,
            "reject_mass": self.reject.display_string(),
        })
    }
}

impl Default for DistTable {
    fn default() -> Self {
        Self::new()
    }
}

/// Exact distribution of the Schröder extend operation, derived from its
/// case structure (append U/D with probability r each; with probability r²
/// rewrite the last up/down to a flat, recursing past trailing flats).
pub fn exact_extend_dist(w: &Path) -> DistTable {
    assert_eq!(w.model(), Model::Schroeder);
    let r = Exact::sqrt2_minus_one();
    let r2 = &r * &r;
    let mut out = DistTable::new();
    let steps = w.steps().to_vec();
    // `prefix` is the part before the trailing flats consumed so far.
    let mut prefix = steps.len();
    let mut weight = Exact::one();
    loop {
        let insert = |s: Step| {
            let mut v = steps.clone();
            v.insert(prefix, s);
            Path::from_steps(Model::Schroeder, &v).text()
        };
        out.add(insert(Step::Up), &weight * &r);
        out.add(insert(Step::Down), &weight * &r);
        if prefix == 0 {
            out.add_reject(&weight * &r2);
            break;
        }
        match steps[prefix - 1] {
            Step::Flat => {
                weight = &weight * &r2;
                prefix -= 1;
            }
            _ => {
                let mut v = steps.clone();
                v[prefix - 1] = Step::Flat;
                out.add(Path::from_steps(Model::Schroeder, &v).text(), &weight * &r2);
                break;
            }
        }
    }
    debug_assert!(out.total().is_one());
    out
}

/// Exact distribution of plain Motzkin recovery on the Łukasiewicz path `w`:
/// each unfold split and each flipped unfold split carries q = 1/(2n+1), and
/// the flip of the whole path carries q when it lands at height ≥ 0.
pub fn exact_recover_dist_motzkin(w: &Path) -> DistTable {
    assert_eq!(w.model(), Model::Motzkin);
    assert_eq!(w.classify(), PathClass::Lukasiewicz);
    let n = w.len();
    let q = Exact::ratio(1, 2 * n as i64 + 1);
    let mut out = DistTable::new();
    for j in 0..n {
        let (sigma, tau) = split_at(w, j);
        let unfolded = unfold_concat(&sigma, &tau);
        out.add(unfolded.text(), q.clone());
        let mut flipped = unfolded;
        let ok = flipped.flip();
        debug_assert!(ok && flipped.height() >= 0);
        out.add(flipped.text(), q.clone());
    }
    let mut whole = w.clone();
    if whole.flip() && whole.height() >= 0 {
        out.add(whole.text(), q);
    } else {
        out.add_reject(q);
    }
    debug_assert!(out.total().is_one());
    out
}

/// Exact distribution of colored Motzkin recovery: unfold cases carry
/// q = 1/(2n+max(1,c)); the tail case is a flip when the flippable step is a
/// flat (mass q) and otherwise rewrites the final down step into the
/// weighted flat (mass q·c); leftover mass rejects.
pub fn exact_recover_dist_colored(w: &Path, c: &BigRational) -> DistTable {
    assert_eq!(w.model(), Model::ColoredMotzkin);
    assert_eq!(w.classify(), PathClass::Lukasiewicz);
    let n = w.len();
    let params = crate::motzkin::MotzkinParams::colored(n, c.clone());
    let q = Exact::from_rational(params.q(n));
    let mut out = DistTable::new();
    for j in 0..n {
        let (sigma, tau) = split_at(w, j);
        let unfolded = unfold_concat(&sigma, &tau);
        out.add(unfolded.text(), q.clone());
        let mut flipped = unfolded;
        let ok = flipped.flip();
        debug_assert!(ok && flipped.height() >= 0);
        out.add(flipped.text(), q.clone());
    }
    let fs = w
        .steps()
        .iter()
        .rev()
        .find(|s| matches!(s, Step::Up | Step::Flat))
        .copied();
    if fs == Some(Step::Flat) {
        let mut whole = w.clone();
        let ok = whole.flip();
        debug_assert!(ok);
        out.add(whole.text(), q.clone());
    } else {
        let mut v = w.steps().to_vec();
        let last = v.len() - 1;
        debug_assert_eq!(v[last], Step::Down);
        v[last] = Step::ColoredFlat;
        out.add(
            Path::from_steps(Model::ColoredMotzkin, &v).text(),
            &q * &Exact::from_rational(c.clone()),
        );
    }
    let total = out.total();
    out.add_reject(Exact::one() - total);
    debug_assert!(out.reject.signum() >= 0);
    out
}

/// Exact distribution of Schröder recovery on a Łukasiewicz path of odd
/// geometric length m: with weight q = 1/(m+r) per slot, every step split
/// unfolds, every flat slot marks that flat (delete, unfold, extend to
/// height ≥ 2, append a flat), and with weight q·r the final down step
/// becomes a flat.
pub fn exact_recover_dist_schroeder(w: &Path) -> DistTable {
    assert_eq!(w.model(), Model::Schroeder);
    assert_eq!(w.classify(), PathClass::Lukasiewicz);
    let m = w.geo_len();
    assert_eq!(m % 2, 1);
    let r = Exact::sqrt2_minus_one();
    let q = (Exact::from_int(m as i64) + &r).recip();
    let mut out = DistTable::new();
    for j in 0..w.len() {
        let (sigma, tau) = split_at(w, j);
        out.add(unfold_concat(&sigma, &tau).text(), q.clone());
    }
    for (f, &s) in w.steps().iter().enumerate() {
        if s != Step::Flat {
            continue;
        }
        let mut v = w.steps().to_vec();
        v.remove(f);
        let mut base = Path::from_steps(Model::Schroeder, &v);
        base.unfold_at(f);
        let ext = exact_extend_dist(&base);
        out.add_reject(&q * &ext.reject);
        for (text, p) in &ext.entries {
            let candidate = Path::from_text(Model::Schroeder, text);
            if candidate.height() >= 2 {
                out.add(format!("{text}F"), &q * p);
            } else {
                out.add_reject(&q * p);
            }
        }
    }
    {
        let mut v = w.steps().to_vec();
        let last = v.len() - 1;
        debug_assert_eq!(v[last], Step::Down);
        v[last] = Step::Flat;
        out.add(Path::from_steps(Model::Schroeder, &v).text(), &q * &r);
    }
    debug_assert!(out.total().is_one());
    out
}

fn split_at(w: &Path, j: usize) -> (Path, Path) {
    let sigma = Path::from_steps(w.model(), &w.steps()[..j]);
    let tau = Path::from_steps(w.model(), &w.steps()[j..]);
    (sigma, tau)
}

// ---------------------------------------------------------------------------
// Choice-tree exploration
// ---------------------------------------------------------------------------

struct Frame {
    probs: Vec<Exact>,
    choice: usize,
}

/// Replays a fixed prefix of choices into a sampler and records the first
/// unexplored branch point; used by [`explore`] to enumerate the full
/// randomness tree with exact probabilities.
pub struct Replayer<'a> {
    frames: &'a mut Vec<Frame>,
    pos: usize,
}

impl Replayer<'_> {
    fn choose(&mut self, probs: impl FnOnce() -> Vec<Exact>) -> usize {
        if self.pos < self.frames.len() {
            let c = self.frames[self.pos].choice;
            self.pos += 1;
            c
        } else {
            self.frames.push(Frame { probs: probs(), choice: 0 });
            self.pos += 1;
            0
        }
    }
}

impl RandomDraws for Replayer<'_> {
    fn next_bit(&mut self) -> bool {
        self.choose(|| vec![Exact::ratio(1, 2), Exact::ratio(1, 2)]) == 1
    }

    fn uniform_int(&mut self, m: u64) -> u64 {
        assert!(m >= 1);
        if m == 1 {
            return 0;
        }
        self.choose(|| vec![Exact::ratio(1, m as i64); m as usize]) as u64
    }

    fn bernoulli(&mut self, p: &Exact) -> bool {
        if p.is_zero() {
            return false;
        }
        if p.is_one() {
            return true;
        }
        // outcome order: [false, true]
        self.choose(|| vec![Exact::one() - p, p.clone()]) == 1
    }

    fn categorical(&mut self, atoms: &[Exact]) -> Option<usize> {
        let k = atoms.len();
        let residual = Exact::one() - atoms.iter().fold(Exact::zero(), |a, b| &a + b);
        assert!(residual.signum() >= 0);
        let has_residual = !residual.is_zero();
        let idx = self.choose(|| {
            let mut v = atoms.to_vec();
            if has_residual {
                v.push(residual);
            }
            v
        });
        if idx < k {
            Some(idx)
        } else {
            None
        }
    }

    fn draw_step(&mut self, model: Model, weight: Option<&BigRational>) -> Step {
        let (steps, probs) = step_outcomes(model, weight);
        let idx = self.choose(|| probs);
        steps[idx]
    }
}

/// Enumerate every run of `attempt` (one sampler attempt, no restarts) and
/// accumulate the exact probability of each outcome. `None` outcomes count
/// as rejection mass.
pub fn explore<F>(mut attempt: F) -> DistTable
where
    F: FnMut(&mut Replayer) -> Option<Path>,
{
    let mut frames: Vec<Frame> = Vec::new();
    // prefix[i] = probability of the first i recorded choices
    let mut prefix: Vec<Exact> = vec![Exact::one()];
    let mut table = DistTable::new();
    loop {
        let outcome = {
            let mut rp = Replayer { frames: &mut frames, pos: 0 };
            attempt(&mut rp)
        };
        while prefix.len() <= frames.len() {
            let i = prefix.len() - 1;
            let f = &frames[i];
            // zero-probability branches are possible in principle but our
            // samplers never emit them
            prefix.push(&prefix[i] * &f.probs[f.choice]);
        }
        let leaf = prefix[frames.len()].clone();
        match outcome {
            Some(p) => table.add(p.text(), leaf),
            None => table.add_reject(leaf),
        }
        // advance to the next unexplored leaf
        loop {
            match frames.last_mut() {
                None => return table,
                Some(f) if f.choice + 1 < f.probs.len() => {
                    f.choice += 1;
                    prefix.truncate(frames.len());
                    break;
                }
                Some(_) => {
                    frames.pop();
                    prefix.truncate(frames.len() + 1);
                }
            }
        }
    }
}

/// Exact conditional output distribution of one sampler: the full randomness
/// tree of a single attempt, conditioned on not rejecting. Restarting
/// samplers resample independently, so this equals their output law.
pub fn exact_sampler_dist(spec: &SamplerSpec) -> DistTable {
    explore(|rp| spec.attempt(rp).ok()).conditional()
}

// ---------------------------------------------------------------------------
// First-try success probabilities
// ---------------------------------------------------------------------------

/// Exact probability that one attempt of the Motzkin positive sampler
/// assigns to any single positive path of length n, and the resulting
/// first-try success probability p_n · #positive(n) in double precision.
pub fn motzkin_success(n: usize) -> (BigRational, f64) {
    // p_n = 3^{-n} ∏_{i=1..n} (2i+2)/(2i+1)
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=n as u64 {
        num *= BigInt::from(2 * i + 2);
        den *= BigInt::from(2 * i + 1);
    }
    den *= BigInt::from(3u32).pow(n as u32);
    let p = BigRational::new(num, den);
    let success = (ln_ratio(&p) + crate::metrics::ln_count(Model::Motzkin, ClassKind::Positive, n)).exp();
    (p, success)
}

/// Exact per-path output probability of the Schröder approximate sampler
/// (p_n for length-n paths; length n−1 paths carry p_n·r), and the first-try
/// success probability p_n·S_n + p_n·r·S_{n−1} in double precision.
pub fn schroeder_success(n: usize) -> (Exact, f64) {
    let r = Exact::sqrt2_minus_one();
    // p_n = r^n ∏_{i=1..⌈n/2⌉} (2i+r)/(2i−1+r); both products have
    // same-sign √2 coefficients, so their logs evaluate stably.
    let mut num = Exact::one();
    let mut den = Exact::one();
    for i in 1..=n.div_ceil(2) as i64 {
        num = num * (Exact::from_int(2 * i) + &r);
        den = den * (Exact::from_int(2 * i - 1) + &r);
    }
    let ln_p = n as f64 * r.ln() + num.ln() - den.ln();
    let p = r.pow(n as u32) * &num / &den;
    let ln_sn = crate::metrics::ln_count(Model::Schroeder, ClassKind::Positive, n);
    let ln_sn1 = crate::metrics::ln_count(Model::Schroeder, ClassKind::Positive, n - 1);
    // success = p·(S_n + r·S_{n−1})
    let rv = std::f64::consts::SQRT_2 - 1.0;
    let success = (ln_p + ln_sn).exp() * (1.0 + rv * (ln_sn1 - ln_sn).exp());
    (p, success)
}

/// Limit of the Motzkin first-try success probability: √3/2.
pub fn motzkin_success_limit() -> f64 {
    3f64.sqrt() / 2.0
}

/// Limit of the Schröder first-try success probability:
/// 2^{1/4}/√π · Γ(√2/2)/Γ((1+√2)/2), evaluated via a standard Gamma.
pub fn schroeder_success_limit() -> f64 {
    use statrs::function::gamma::gamma;
    let s = std::f64::consts::SQRT_2;
    2f64.powf(0.25) / std::f64::consts::PI.sqrt() * gamma(s / 2.0) / gamma((1.0 + s) / 2.0)
}
