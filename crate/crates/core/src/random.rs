//! Seeded fair-bit source with exact-bias discrete sampling and dual cost
//! metering.
//!
//! Two costs are tracked per source: `model_entropy_bits`, which grows by the
//! Shannon entropy of each primitive's distribution (the fair 3-sided die
//! costs log₂3 even though more physical bits may be consumed), and
//! `physical_bits`, the count of raw bits actually drawn from the stream.
//!
//! All discrete primitives are exact: `uniform_int` uses a fast-dice-roller
//! over fair bits, `bernoulli` lazily compares a uniform bit stream against
//! the binary expansion of the (possibly irrational) bias, and `categorical`
//! walks the binary digits of the exact cumulative boundaries.

use num_rational::BigRational;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{DigitStream, Exact};
use crate::paths::{Model, Step};

/// Cost counters for one source.
#[derive(Clone, Debug, Default)]
pub struct Meter {
    /// Sum of per-primitive distribution entropies, in bits.
    pub model_entropy_bits: f64,
    /// Raw bits consumed from the underlying stream.
    pub physical_bits: u64,
}

impl Meter {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "model_entropy_bits": self.model_entropy_bits,
            "physical_bits": self.physical_bits,
        })
    }
}

/// SplitMix64 finalizer; fixed algorithm for deriving per-trial seeds.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for trial `trial` of a run seeded with `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed.rotate_left(32) ^ splitmix64(trial))
}

/// The raw bit stream plus meters; split out so cached tables can borrow
/// alongside it.
#[derive(Clone, Debug)]
pub struct BitCore {
    rng: ChaCha8Rng,
    buf: u64,
    avail: u8,
    pub meter: Meter,
}

impl BitCore {
    fn new(seed: u64) -> Self {
        BitCore { rng: ChaCha8Rng::seed_from_u64(seed), buf: 0, avail: 0, meter: Meter::default() }
    }

    /// One fair bit; counts toward `physical_bits` only. Entropy accounting
    /// is the caller's responsibility (each primitive charges its own).
    fn raw_bit(&mut self) -> bool {
        if self.avail == 0 {
            self.buf = self.rng.next_u64();
            self.avail = 64;
        }
        let bit = self.buf & 1 == 1;
        self.buf >>= 1;
        self.avail -= 1;
        self.meter.physical_bits += 1;
        bit
    }
}

/// A categorical distribution with exact cumulative boundaries in [0, 1].
///
/// Draws refine a dyadic cell bit by bit until the cell lies strictly inside
/// one region. Boundary digit expansions are cached and grow lazily, so a
/// long-lived instance (the Schröder step distribution) costs a handful of
/// array reads per bit after warm-up.
#[derive(Clone, Debug)]
pub struct Categorical {
    bounds: Vec<Boundary>,
    regions: usize,
    has_residual: bool,
    entropy_bits: f64,
}

#[derive(Clone, Debug)]
struct Boundary {
    digits: Vec<bool>,
    tail: Option<DigitState>,
}

#[derive(Clone, Debug)]
struct DigitState {
    frac: Exact,
}

impl Boundary {
    fn new(value: Exact) -> Self {
        Boundary { digits: Vec::new(), tail: Some(DigitState { frac: value }) }
    }

    fn digit(&mut self, t: usize) -> bool {
        while t >= self.digits.len() {
            match &mut self.tail {
                None => return false, // terminated expansion: all zeros
                Some(state) => {
                    let doubled = &state.frac + &state.frac;
                    if (&doubled - &Exact::one()).signum() >= 0 {
                        state.frac = doubled - Exact::one();
                        self.digits.push(true);
                    } else {
                        state.frac = doubled;
                        self.digits.push(false);
                    }
                    if state.frac.is_zero() {
                        self.tail = None;
                    }
                }
            }
        }
        self.digits[t]
    }
}

fn entropy_of(probs: &[f64]) -> f64 {
    probs
        .iter()
        .map(|&p| if p > 0.0 { -p * p.log2() } else { 0.0 })
        .sum()
}

impl Categorical {
    /// Build from atom probabilities. Atoms must be ≥ 0 with sum ≤ 1; a sum
    /// strictly below 1 leaves residual mass on which `draw` returns `None`.
    pub fn new(atoms: &[Exact]) -> Self {
        let mut cum = Exact::zero();
        let mut bounds = Vec::new();
        let mut probs_f64 = Vec::with_capacity(atoms.len() + 1);
        for p in atoms {
            assert!(p.signum() >= 0, "negative probability atom");
            probs_f64.push(p.to_f64());
            cum = &cum + p;
            bounds.push(cum.clone());
        }
        let residual = Exact::one() - &cum;
        assert!(residual.signum() >= 0, "probability atoms sum beyond 1");
        let has_residual = !residual.is_zero();
        probs_f64.push(residual.to_f64());
        let entropy_bits = entropy_of(&probs_f64);
        // The final boundary (== 1 when no residual) is never straddled by a
        // cell in [0,1); drop exact ones.
        let one = Exact::one();
        let bounds = bounds
            .into_iter()
            .filter(|c| c < &one)
            .map(Boundary::new)
            .collect();
        Categorical { bounds, regions: atoms.len() + has_residual as usize, has_residual, entropy_bits }
    }

    pub fn entropy_bits(&self) -> f64 {
        self.entropy_bits
    }

    /// Draw an atom index, or `None` for the residual mass.
    pub fn draw(&mut self, core: &mut BitCore) -> Option<usize> {
        core.meter.model_entropy_bits += self.entropy_bits;
        // Boundaries whose expansion still matches the drawn prefix lie in
        // the current cell; once none do, the cell sits inside region `lo`.
        let mut lo = 0usize; // boundaries known to be below the cell
        let mut hi = self.bounds.len(); // bounds[lo..hi] are inside the cell
        let mut t = 0usize;
        while lo < hi {
            let bit = core.raw_bit();
            if bit {
                // Matching boundaries with digit 0 fall below the cell.
                let mut k = lo;
                while k < hi && !self.bounds[k].digit(t) {
                    k += 1;
                }
                lo = k;
            } else {
                // Matching boundaries with digit 1 rise above the cell.
                let mut k = hi;
                while k > lo && self.bounds[k - 1].digit(t) {
                    k -= 1;
                }
                hi = k;
            }
            t += 1;
        }
        debug_assert!(lo < self.regions);
        if self.has_residual && lo == self.regions - 1 {
            None
        } else {
            Some(lo)
        }
    }
}

/// The randomness interface the samplers are written against.
///
/// [`BitSource`] implements it with metered bits; the oracle choice-tree
/// explorer implements it by enumerating every outcome with its exact
/// probability.
pub trait RandomDraws {
    /// A fair bit.
    fn next_bit(&mut self) -> bool;

    /// Exactly uniform value in `[0, m)`.
    fn uniform_int(&mut self, m: u64) -> u64;

    /// True with probability exactly `p`.
    fn bernoulli(&mut self, p: &Exact) -> bool;

    /// Index `i` with probability `atoms[i]`, `None` with the residual mass.
    fn categorical(&mut self, atoms: &[Exact]) -> Option<usize>;

    /// One random step of the given model (colored Motzkin needs the flat
    /// weight `c`).
    fn draw_step(&mut self, model: Model, weight: Option<&BigRational>) -> Step;
}

/// Step alphabet and exact probabilities per model, in draw order.
pub fn step_outcomes(model: Model, weight: Option<&BigRational>) -> (Vec<Step>, Vec<Exact>) {
    match model {
        Model::Motzkin => {
            let third = Exact::ratio(1, 3);
            (vec![Step::Up, Step::Flat, Step::Down], vec![third.clone(), third.clone(), third])
        }
        Model::Schroeder => {
            let r = Exact::sqrt2_minus_one();
            let r2 = &r * &r;
            (vec![Step::Up, Step::Flat, Step::Down], vec![r.clone(), r2, r])
        }
        Model::ColoredMotzkin => {
            let c = weight.expect("colored Motzkin step draw requires a flat weight");
            assert!(c.numer().sign() == num_bigint::Sign::Plus, "flat weight must be positive");
            let c = Exact::from_rational(c.clone());
            let total = Exact::from_int(3) + &c;
            let unit = Exact::one() / &total;
            (
                vec![Step::Up, Step::Flat, Step::Down, Step::ColoredFlat],
                vec![unit.clone(), unit.clone(), unit, c / total],
            )
        }
    }
}

/// Deterministic, seeded source of fair bits with cost meters.
#[derive(Clone, Debug)]
pub struct BitSource {
    core: BitCore,
    schroeder_steps: Option<Categorical>,
    colored_steps: Option<(BigRational, Categorical)>,
}

impl BitSource {
    pub fn new(seed: u64) -> Self {
        BitSource { core: BitCore::new(seed), schroeder_steps: None, colored_steps: None }
    }

    /// Source for trial `trial` of a benchmark seeded with `seed`.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        BitSource::new(trial_seed(seed, trial))
    }

    pub fn meter(&self) -> &Meter {
        &self.core.meter
    }
}

impl RandomDraws for BitSource {
    fn next_bit(&mut self) -> bool {
        self.core.meter.model_entropy_bits += 1.0;
        self.core.raw_bit()
    }

    fn uniform_int(&mut self, m: u64) -> u64 {
        assert!(m >= 1, "uniform_int needs a positive bound");
        assert!(m <= 1 << 62);
        self.core.meter.model_entropy_bits += (m as f64).log2();
        if m == 1 {
            return 0;
        }
        // Fast dice roller: exactly uniform, < log₂m + 2 expected bits.
        let (mut v, mut c) = (1u64, 0u64);
        loop {
            v <<= 1;
            c = (c << 1) | self.core.raw_bit() as u64;
            if v >= m {
                if c < m {
                    return c;
                }
                v -= m;
                c -= m;
            }
        }
    }

    fn bernoulli(&mut self, p: &Exact) -> bool {
        let s = p.signum();
        assert!(s >= 0 && (p - &Exact::one()).signum() <= 0, "bias outside [0,1]");
        if s == 0 {
            return false;
        }
        if p.is_one() {
            return true;
        }
        let pf = p.to_f64();
        self.core.meter.model_entropy_bits += entropy_of(&[pf, 1.0 - pf]);
        let mut digits = DigitStream::new(p.clone());
        loop {
            match digits.next() {
                // Remaining expansion is all zeros: U < p is impossible on a tie.
                None => return false,
                Some(d) => {
                    let u = self.core.raw_bit();
                    if u != d {
                        // the drawn stream fell below p's expansion
                        return d && !u;
                    }
                }
            }
        }
    }

    fn categorical(&mut self, atoms: &[Exact]) -> Option<usize> {
        Categorical::new(atoms).draw(&mut self.core)
    }

    fn draw_step(&mut self, model: Model, weight: Option<&BigRational>) -> Step {
        match model {
            Model::Motzkin => [Step::Up, Step::Flat, Step::Down][self.uniform_int(3) as usize],
            Model::Schroeder => {
                let cat = self
                    .schroeder_steps
                    .get_or_insert_with(|| Categorical::new(&step_outcomes(Model::Schroeder, None).1));
                let idx = cat.draw(&mut self.core).expect("step atoms sum to 1");
                [Step::Up, Step::Flat, Step::Down][idx]
            }
            Model::ColoredMotzkin => {
                let c = weight.expect("colored Motzkin step draw requires a flat weight");
                let rebuild = match &self.colored_steps {
                    Some((cached, _)) => cached != c,
                    None => true,
                };
                if rebuild {
                    let cat = Categorical::new(&step_outcomes(Model::ColoredMotzkin, Some(c)).1);
                    self.colored_steps = Some((c.clone(), cat));
                }
                let cat = &mut self.colored_steps.as_mut().unwrap().1;
                let idx = cat.draw(&mut self.core).expect("step atoms sum to 1");
                [Step::Up, Step::Flat, Step::Down, Step::ColoredFlat][idx]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_seeds_reproduce_streams() {
        let mut a = BitSource::new(12345);
        let mut b = BitSource::new(12345);
        for _ in 0..256 {
            assert_eq!(a.next_bit(), b.next_bit());
        }
    }

    #[test]
    fn distinct_seeds_diverge_within_64_bits() {
        let mut a = BitSource::new(1);
        let mut b = BitSource::new(2);
        let differs = (0..64).any(|_| a.next_bit() != b.next_bit());
        assert!(differs);
    }

    #[test]
    fn bit_mean_is_balanced() {
        let mut src = BitSource::new(7);
        let n = 1_000_000u64;
        let ones: u64 = (0..n).map(|_| src.next_bit() as u64).sum();
        let mean = ones as f64 / n as f64;
        assert!((mean - 0.5).abs() < 0.002, "mean {}", mean);
        assert_eq!(src.meter().physical_bits, n);
        assert!((src.meter().model_entropy_bits - n as f64).abs() < 1e-6);
    }

    #[test]
    fn uniform_int_edge_cases() {
        let mut src = BitSource::new(3);
        assert_eq!(src.uniform_int(1), 0);
        assert_eq!(src.meter().physical_bits, 0);
        assert_eq!(src.meter().model_entropy_bits, 0.0);
        let _ = src.uniform_int(2);
        assert_eq!(src.meter().physical_bits, 1);
    }

    #[test]
    fn uniform_int_three_is_uniform() {
        let mut src = BitSource::new(99);
        let trials = 300_000;
        let mut counts = [0u64; 3];
        for _ in 0..trials {
            counts[src.uniform_int(3) as usize] += 1;
        }
        for &c in &counts {
            let f = c as f64 / trials as f64;
            assert!((f - 1.0 / 3.0).abs() < 0.005, "freq {}", f);
        }
    }

    #[test]
    fn bernoulli_trivial_biases() {
        let mut src = BitSource::new(5);
        assert!(!src.bernoulli(&Exact::zero()));
        assert!(src.bernoulli(&Exact::one()));
        assert_eq!(src.meter().physical_bits, 0);
        assert_eq!(src.meter().model_entropy_bits, 0.0);
    }

    #[test]
    fn bernoulli_half_uses_one_bit() {
        let mut src = BitSource::new(5);
        for i in 1..=64u64 {
            let _ = src.bernoulli(&Exact::ratio(1, 2));
            assert_eq!(src.meter().physical_bits, i);
        }
    }

    #[test]
    fn bernoulli_r_decides_immediately_on_high_first_bit() {
        // r < 1/2, so a leading 1 bit settles the comparison at once
        let r = Exact::sqrt2_minus_one();
        let mut checked = 0;
        for seed in 0..64u64 {
            let mut probe = BitSource::new(seed);
            if probe.next_bit() {
                let mut src = BitSource::new(seed);
                assert!(!src.bernoulli(&r));
                assert_eq!(src.meter().physical_bits, 1);
                checked += 1;
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn meter_snapshot_serializes() {
        let mut src = BitSource::new(8);
        src.uniform_int(3);
        let snap = src.meter().to_json();
        assert_eq!(snap["physical_bits"], src.meter().physical_bits);
        assert!((snap["model_entropy_bits"].as_f64().unwrap() - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn categorical_residual_with_irrational_atom() {
        // single atom 1/(1+r): residual mass r/(1+r)
        let r = Exact::sqrt2_minus_one();
        let atoms = vec![(Exact::from_int(1) + &r).recip()];
        let expect = (&r / &(Exact::from_int(1) + &r)).to_f64();
        let mut src = BitSource::new(21);
        let trials = 300_000u64;
        let rejects = (0..trials).filter(|_| src.categorical(&atoms).is_none()).count();
        let f = rejects as f64 / trials as f64;
        assert!((f - expect).abs() < 0.005, "reject freq {f} vs {expect}");
    }

    #[test]
    fn bernoulli_matches_exact_biases() {
        let r = Exact::sqrt2_minus_one();
        let cases = vec![
            (Exact::ratio(1, 4), 0.25),
            (Exact::ratio(1, 2), 0.5),
            (r.clone(), 0.41421356),
            (&r * &r, 0.17157288),
            (Exact::from_int(1) / (Exact::from_int(1) + &r), std::f64::consts::FRAC_1_SQRT_2),
        ];
        let trials = 300_000u64;
        for (i, (p, expect)) in cases.into_iter().enumerate() {
            let mut src = BitSource::new(1000 + i as u64);
            let hits: u64 = (0..trials).map(|_| src.bernoulli(&p) as u64).sum();
            let f = hits as f64 / trials as f64;
            let sigma = (expect * (1.0 - expect) / trials as f64).sqrt();
            assert!((f - expect).abs() < 3.0 * sigma + 1e-9, "bias {:?}: {} vs {}", p, f, expect);
        }
    }

    #[test]
    fn categorical_residual_mass() {
        let atoms = vec![Exact::ratio(1, 3), Exact::ratio(1, 3)];
        let mut src = BitSource::new(11);
        let trials = 300_000u64;
        let mut rejects = 0u64;
        for _ in 0..trials {
            if src.categorical(&atoms).is_none() {
                rejects += 1;
            }
        }
        let f = rejects as f64 / trials as f64;
        assert!((f - 1.0 / 3.0).abs() < 0.005, "reject freq {}", f);
    }

    #[test]
    fn categorical_single_atom_is_free() {
        let mut src = BitSource::new(11);
        assert_eq!(src.categorical(&[Exact::one()]), Some(0));
        assert_eq!(src.meter().physical_bits, 0);
        assert_eq!(src.meter().model_entropy_bits, 0.0);
    }

    #[test]
    fn schroeder_step_frequencies() {
        let mut src = BitSource::new(4242);
        let trials = 1_000_000u64;
        let mut counts = [0u64; 3];
        for _ in 0..trials {
            match src.draw_step(Model::Schroeder, None) {
                Step::Up => counts[0] += 1,
                Step::Flat => counts[1] += 1,
                Step::Down => counts[2] += 1,
                Step::ColoredFlat => unreachable!(),
            }
        }
        let r = std::f64::consts::SQRT_2 - 1.0;
        let expect = [r, r * r, r];
        for (i, &e) in expect.iter().enumerate() {
            let f = counts[i] as f64 / trials as f64;
            assert!((f - e).abs() < 0.002, "step {} freq {} vs {}", i, f, e);
        }
    }

    #[test]
    fn colored_step_frequencies_unit_weight() {
        let one = BigRational::from_integer(1.into());
        let mut src = BitSource::new(77);
        let trials = 1_000_000u64;
        let mut counts = [0u64; 4];
        for _ in 0..trials {
            let s = src.draw_step(Model::ColoredMotzkin, Some(&one));
            counts[match s {
                Step::Up => 0,
                Step::Flat => 1,
                Step::Down => 2,
                Step::ColoredFlat => 3,
            }] += 1;
        }
        for &c in &counts {
            let f = c as f64 / trials as f64;
            assert!((f - 0.25).abs() < 0.002, "freq {}", f);
        }
    }

    #[test]
    fn meter_identity_over_mixed_calls() {
        let mut src = BitSource::new(2024);
        let r = Exact::sqrt2_minus_one();
        let mut expected = 0.0;
        for i in 0..2000u64 {
            match i % 4 {
                0 => {
                    src.next_bit();
                    expected += 1.0;
                }
                1 => {
                    src.uniform_int(3);
                    expected += 3f64.log2();
                }
                2 => {
                    src.bernoulli(&r);
                    let p = std::f64::consts::SQRT_2 - 1.0;
                    expected += -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
                }
                _ => {
                    src.draw_step(Model::Schroeder, None);
                    let p = std::f64::consts::SQRT_2 - 1.0;
                    expected += -2.0 * p * p.log2() - (p * p) * (p * p).log2();
                }
            }
        }
        assert!((src.meter().model_entropy_bits - expected).abs() < 1e-6);
    }

    #[test]
    fn physical_bits_within_entropy_plus_two() {
        // Knuth–Yao style bound, measured per primitive over many calls.
        let r = Exact::sqrt2_minus_one();
        let calls = 100_000u64;

        let mut src = BitSource::new(31337);
        for _ in 0..calls {
            src.bernoulli(&r);
        }
        let h = src.meter().model_entropy_bits / calls as f64;
        let avg = src.meter().physical_bits as f64 / calls as f64;
        assert!(avg <= h + 2.0, "bernoulli: {} > {} + 2", avg, h);

        let mut src = BitSource::new(31338);
        for _ in 0..calls {
            src.draw_step(Model::Schroeder, None);
        }
        let h = src.meter().model_entropy_bits / calls as f64;
        let avg = src.meter().physical_bits as f64 / calls as f64;
        assert!(avg <= h + 2.0, "schroeder step: {} > {} + 2", avg, h);

        let mut src = BitSource::new(31339);
        for _ in 0..calls {
            src.uniform_int(5);
        }
        let h = src.meter().model_entropy_bits / calls as f64;
        let avg = src.meter().physical_bits as f64 / calls as f64;
        assert!(avg <= h + 2.0, "uniform_int(5): {} > {} + 2", avg, h);
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for t in 0..10_000u64 {
            assert!(seen.insert(trial_seed(42, t)));
        }
    }
}
