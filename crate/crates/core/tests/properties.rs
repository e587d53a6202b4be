//! Property tests over randomized inputs: structural invariants of the path
//! rewrites and end-to-end sampler guarantees.

use proptest::prelude::*;

use lattice_sampler::paths::{fold_pair, unfold_concat};
use lattice_sampler::{BitSource, Model, Path, PathClass, SamplerSpec, Step};

fn steps_from_bytes(model: Model, bytes: &[u8]) -> Path {
    let alphabet = match model {
        Model::ColoredMotzkin => &[Step::Up, Step::Flat, Step::Down, Step::ColoredFlat][..],
        _ => &[Step::Up, Step::Flat, Step::Down][..],
    };
    let steps: Vec<Step> = bytes.iter().map(|&b| alphabet[b as usize % alphabet.len()]).collect();
    Path::from_steps(model, &steps)
}

proptest! {
    /// Cached height, flat count and the first height-0 flat survive any
    /// prefix of pushes and truncations.
    #[test]
    fn caches_survive_push_truncate(bytes in prop::collection::vec(0u8..3, 0..40), cut in 0usize..40) {
        let mut p = Path::new(Model::Schroeder);
        for (i, &b) in bytes.iter().enumerate() {
            p.push([Step::Up, Step::Flat, Step::Down][b as usize]);
            if i == cut && !p.is_empty() {
                p.truncate_last();
            }
        }
        p.validate();
    }

    /// flip is an involution where defined: height moves by exactly one,
    /// length is preserved, and weighted flats are untouched.
    #[test]
    fn flip_involution(bytes in prop::collection::vec(0u8..4, 1..30)) {
        let p = steps_from_bytes(Model::ColoredMotzkin, &bytes);
        let mut q = p.clone();
        if q.flip() {
            prop_assert_eq!(q.len(), p.len());
            prop_assert!((q.height() - p.height()).abs() == 1);
            prop_assert_eq!(q.colored_flat_count(), p.colored_flat_count());
            prop_assert!(q.flip());
            prop_assert_eq!(q.text(), p.text());
        } else {
            // undefined only when no up or flat step exists
            prop_assert!(p.steps().iter().all(|s| matches!(s, Step::Down | Step::ColoredFlat)));
        }
    }

    /// Any sampled excursion closed with a down step is Łukasiewicz, and
    /// fold inverts unfold at every split.
    #[test]
    fn unfold_fold_round_trip(seed in any::<u64>(), n in 0usize..14, split_sel in any::<u64>()) {
        let mut src = BitSource::new(seed);
        let mut w = SamplerSpec::MotzkinExcursion { n, weight: None }.run(&mut src).path;
        w.push(Step::Down);
        prop_assert_eq!(w.classify(), PathClass::Lukasiewicz);
        let split = (split_sel % w.len() as u64) as usize;
        let sigma = Path::from_steps(w.model(), &w.steps()[..split]);
        let tau = Path::from_steps(w.model(), &w.steps()[split..]);
        let unfolded = unfold_concat(&sigma, &tau);
        prop_assert!(unfolded.is_positive());
        prop_assert_eq!(unfolded.height() % 2, 1);
        let (s2, t2) = fold_pair(&unfolded);
        prop_assert_eq!(s2.text(), sigma.text());
        prop_assert_eq!(t2.text(), tau.text());
    }

    /// Sampler outputs land in the right class with sound caches, and the
    /// Schröder parity invariant holds.
    #[test]
    fn sampler_outputs_well_formed(seed in any::<u64>(), n in 1usize..24) {
        let mut src = BitSource::new(seed);
        let pos = SamplerSpec::MotzkinPositive { n, weight: None }.run(&mut src).path;
        prop_assert!(pos.is_positive());
        prop_assert_eq!(pos.len(), n);
        pos.validate();

        let s = SamplerSpec::SchroederPositive { n }.run(&mut src).path;
        prop_assert!(s.is_positive());
        prop_assert_eq!(s.geo_len(), n);
        prop_assert_eq!((s.geo_len() as i64 - s.height()).rem_euclid(2), 0);
        s.validate();
        prop_assert!(s.meter.total() >= s.len() as u64);

        let lit = SamplerSpec::SchroederLittlePositive { n }.run(&mut src).path;
        prop_assert!(lit.is_little() && lit.is_positive());
        prop_assert_eq!(lit.geo_len(), n);
        lit.validate();
    }

    /// Runs are reproducible from the seed alone.
    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), n in 1usize..40) {
        let spec = SamplerSpec::SchroederExcursion { n: n * 2 };
        let a = spec.run(&mut BitSource::new(seed));
        let b = spec.run(&mut BitSource::new(seed));
        prop_assert_eq!(a.path.text(), b.path.text());
        prop_assert_eq!(a.restarts, b.restarts);
        prop_assert_eq!(a.path.meter.total(), b.path.meter.total());
    }
}
