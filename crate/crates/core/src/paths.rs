//! Step alphabet, instrumented path container, and the structural rewrites
//! (unfold/fold, flip, lift) shared by all samplers.
//!
//! # Cost metering
//!
//! Time complexity is modelled as the number of step slots touched in memory.
//! Every operation documents its charge:
//!
//! * `push` — 1 write.
//! * `truncate_last` — free (length decrement, no step content is read).
//! * `rewrite_step`, `lift` — 1 write.
//! * `unfold_at(s)` — `|τ|` reads, where τ is the rewritten suffix. The
//!   in-place rewrite touches each suffix slot exactly once; the charge is
//!   booked on the read meter.
//! * `fold_drop`, `fold_flat` — `|τ̃|` reads, same convention.
//! * `flip` — one read per step examined from the end, plus 1 write.
//!
//! Cache maintenance (height, flat counts, the first height-0 flat index)
//! rides along with these touches and is not charged separately; after a
//! suffix rewrite the flat index is refreshed by an unmetered scan of the
//! rewritten region only.

use std::fmt;

/// A lattice path step.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Step {
    Up,
    Flat,
    Down,
    /// The weighted flat step of the colored Motzkin model.
    ColoredFlat,
}

impl Step {
    #[inline]
    pub fn dh(self) -> i64 {
        match self {
            Step::Up => 1,
            Step::Flat | Step::ColoredFlat => 0,
            Step::Down => -1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Step::Up => 'U',
            Step::Flat => 'F',
            Step::Down => 'D',
            Step::ColoredFlat => 'C',
        }
    }

    pub fn from_char(c: char) -> Option<Step> {
        match c {
            'U' => Some(Step::Up),
            'F' => Some(Step::Flat),
            'D' => Some(Step::Down),
            'C' => Some(Step::ColoredFlat),
            _ => None,
        }
    }
}

/// Path model. Flat steps have geometric length 2 in the Schröder model and
/// 1 elsewhere; the colored model adds the weighted flat step `C`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Model {
    Motzkin,
    ColoredMotzkin,
    Schroeder,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Motzkin => "motzkin",
            Model::ColoredMotzkin => "motzkin-colored",
            Model::Schroeder => "schroeder",
        }
    }

    fn step_legal(self, s: Step) -> bool {
        match s {
            Step::ColoredFlat => self == Model::ColoredMotzkin,
            _ => true,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PathClass {
    Positive,
    Excursion,
    Lukasiewicz,
    Other,
}

/// Read/write touch counters for one path (restart accounting folds failed
/// attempts into the final path's meter).
#[derive(Clone, Copy, Debug, Default)]
pub struct PathMeter {
    pub reads: u64,
    pub writes: u64,
}

impl PathMeter {
    pub fn total(&self) -> u64 {
        self.reads + self.writes
    }

    pub fn absorb(&mut self, other: PathMeter) {
        self.reads += other.reads;
        self.writes += other.writes;
    }
}

/// An instrumented step sequence with cached height, flat count and the
/// index of the first flat step at height 0 (Schröder little-path tracking).
#[derive(Clone, Debug)]
pub struct Path {
    model: Model,
    steps: Vec<Step>,
    height: i64,
    flat_count: usize,
    first_flat_at_zero: Option<usize>,
    pub meter: PathMeter,
}

impl Path {
    pub fn new(model: Model) -> Self {
        Path {
            model,
            steps: Vec::new(),
            height: 0,
            flat_count: 0,
            first_flat_at_zero: None,
            meter: PathMeter::default(),
        }
    }

    /// Build from a tag string such as `"UUFDD"`. Test and oracle helper;
    /// does not meter.
    pub fn from_text(model: Model, text: &str) -> Self {
        let mut p = Path::new(model);
        for c in text.chars() {
            let s = Step::from_char(c).unwrap_or_else(|| panic!("bad step tag {c:?}"));
            assert!(model.step_legal(s), "step {c:?} illegal in {} model", model.name());
            p.push_unmetered(s);
        }
        p
    }

    /// Build from a step slice without metering. Oracle helper.
    pub fn from_steps(model: Model, steps: &[Step]) -> Self {
        let mut p = Path::new(model);
        for &s in steps {
            p.push_unmetered(s);
        }
        p
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Number of steps `|ω|`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Geometric length ℓ: `|ω| + |ω|_F` in the Schröder model, `|ω|`
    /// otherwise.
    pub fn geo_len(&self) -> usize {
        match self.model {
            Model::Schroeder => self.steps.len() + self.flat_count,
            _ => self.steps.len(),
        }
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn flat_count(&self) -> usize {
        self.flat_count
    }

    pub fn colored_flat_count(&self) -> usize {
        self.steps.iter().filter(|&&s| s == Step::ColoredFlat).count()
    }

    pub fn first_flat_at_zero(&self) -> Option<usize> {
        self.first_flat_at_zero
    }

    /// True iff the path has no flat step at height 0.
    pub fn is_little(&self) -> bool {
        debug_assert_eq!(self.model, Model::Schroeder);
        self.first_flat_at_zero.is_none()
    }

    pub fn text(&self) -> String {
        self.steps.iter().map(|s| s.as_char()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "model": self.model.name(),
            "steps": self.text(),
            "height": self.height,
            "geo_len": self.geo_len(),
            "little": if self.model == Model::Schroeder {
                serde_json::json!(self.is_little())
            } else {
                serde_json::Value::Null
            },
        })
    }

    fn push_unmetered(&mut self, s: Step) {
        debug_assert!(self.model.step_legal(s));
        if self.model == Model::Schroeder
            && s == Step::Flat
            && self.height == 0
            && self.first_flat_at_zero.is_none()
        {
            self.first_flat_at_zero = Some(self.steps.len());
        }
        self.height += s.dh();
        if s == Step::Flat {
            self.flat_count += 1;
        }
        self.steps.push(s);
    }

    /// Append a step. One write.
    pub fn push(&mut self, s: Step) {
        assert!(self.model.step_legal(s), "step {s:?} illegal in {} model", self.model.name());
        self.push_unmetered(s);
        self.meter.writes += 1;
    }

    /// Drop the last step. Constant-time, unmetered length decrement.
    pub fn truncate_last(&mut self) {
        let s = self.steps.pop().expect("truncate on empty path");
        self.height -= s.dh();
        if s == Step::Flat {
            self.flat_count -= 1;
            if self.first_flat_at_zero == Some(self.steps.len()) {
                self.first_flat_at_zero = None;
            }
        }
    }

    /// Overwrite the step at `i`. One write. The first-flat cache is NOT
    /// refreshed here; callers follow up with [`Path::refresh_flat_zero_from`]
    /// once the surrounding rewrite is complete.
    pub(crate) fn rewrite_step(&mut self, i: usize, s: Step) {
        assert!(self.model.step_legal(s));
        let old = self.steps[i];
        self.height += s.dh() - old.dh();
        self.flat_count = self.flat_count + (s == Step::Flat) as usize - (old == Step::Flat) as usize;
        self.steps[i] = s;
        self.meter.writes += 1;
    }

    /// Remove the step at `i` (used when recovery marks a flat step). The
    /// first-flat cache may be stale until the unfold that always follows.
    pub(crate) fn remove_step(&mut self, i: usize) {
        let s = self.steps.remove(i);
        self.height -= s.dh();
        if s == Step::Flat {
            self.flat_count -= 1;
        }
        self.first_flat_at_zero = match self.first_flat_at_zero {
            Some(j) if j < i => Some(j),
            Some(j) if j > i => Some(j - 1),
            _ => None,
        };
    }

    /// Recompute the first height-0 flat index over `[from, len)`, given the
    /// height of the prefix before `from`. No charge; recovery is rare and
    /// the scan covers only the rewritten region.
    pub(crate) fn refresh_flat_zero_from(&mut self, from: usize, height_before_from: i64) {
        if self.model != Model::Schroeder {
            return;
        }
        if let Some(i) = self.first_flat_at_zero {
            if i < from {
                return;
            }
        }
        self.first_flat_at_zero = None;
        let mut h = height_before_from;
        for m in from..self.steps.len() {
            if self.steps[m] == Step::Flat && h == 0 {
                self.first_flat_at_zero = Some(m);
                break;
            }
            h += self.steps[m].dh();
        }
    }

    /// Unfold in place at `split`: the suffix τ = steps[split..] becomes τ̃
    /// (leading up step, first-passage down steps turned up, final step
    /// dropped), keeping length. Requires the whole path to be Łukasiewicz
    /// with nonempty τ. Charges `|τ|` reads.
    pub fn unfold_at(&mut self, split: usize) {
        let len = self.steps.len();
        assert!(split < len, "unfold needs a nonempty suffix");
        debug_assert_eq!(self.classify(), PathClass::Lukasiewicz, "unfold input must be Łukasiewicz");
        self.meter.reads += (len - split) as u64;

        let mut rel = 0i64;
        let mut min_rel = 0i64;
        let mut prev = self.steps[split];
        self.steps[split] = Step::Up;
        for m in split + 1..len {
            let cur = self.steps[m];
            rel += prev.dh();
            self.steps[m] = if prev == Step::Down && rel < min_rel {
                min_rel = rel;
                Step::Up
            } else {
                prev
            };
            prev = cur;
        }
        debug_assert_eq!(prev, Step::Down, "Łukasiewicz suffix ends with a down step");
        let h_tau = rel - 1;
        debug_assert_eq!(self.height, -1);
        self.height = -1 - 2 * h_tau;
        // τ̃ carries no height-0 flats (its flats sit above the fold level).
        if let Some(i) = self.first_flat_at_zero {
            if i >= split {
                self.first_flat_at_zero = None;
            }
        }
    }

    /// Backward scan locating the mid-height factorization of a positive
    /// path of odd height `2k+1`: returns (split, marker positions), where
    /// markers are the last-passage up steps of the suffix τ̃.
    fn fold_scan(&self) -> (usize, Vec<usize>) {
        assert!(self.height > 0 && self.height % 2 == 1, "fold needs positive odd height");
        debug_assert!(matches!(self.classify(), PathClass::Positive | PathClass::Excursion));
        let k = (self.height - 1) / 2;
        let mut markers = Vec::new();
        let mut minb = self.height;
        let mut cur = self.height;
        let mut pos = self.steps.len();
        while minb > k {
            pos -= 1;
            let s = self.steps[pos];
            let before = cur - s.dh();
            if s == Step::Up && before < minb {
                markers.push(pos);
                minb = before;
            }
            cur = before;
        }
        markers.reverse();
        (pos, markers)
    }

    /// Fold and drop the closing down step: rewrites the path `στ̃` into the
    /// excursion `στ` minus its final down step (length −1). Charges `|τ̃|`
    /// reads. Returns the split index.
    pub fn fold_drop(&mut self) -> usize {
        let len = self.steps.len();
        let (split, markers) = self.fold_scan();
        debug_assert_eq!(markers.first(), Some(&split));
        self.meter.reads += (len - split) as u64;
        let k = (self.height - 1) / 2;
        let mut mk = 1; // markers[0] is the leading marker, dropped by the shift
        for m in split + 1..len {
            let rewritten = if mk < markers.len() && markers[mk] == m {
                mk += 1;
                Step::Down
            } else {
                self.steps[m]
            };
            self.steps[m - 1] = rewritten;
        }
        self.steps.pop();
        self.height = 0;
        self.refresh_flat_zero_exact(split, k);
        split
    }

    /// Fold, reinserting a flat step at the split: rewrites `στ̃` into
    /// `σFτ` minus its final down step (same step count, geometric length
    /// +1). Schröder only. Charges `|τ̃|` reads. Returns the split index.
    pub fn fold_flat(&mut self) -> usize {
        assert_eq!(self.model, Model::Schroeder);
        let len = self.steps.len();
        let (split, markers) = self.fold_scan();
        self.meter.reads += (len - split) as u64;
        let k = (self.height - 1) / 2;
        self.steps[split] = Step::Flat;
        self.flat_count += 1;
        for &m in &markers[1..] {
            self.steps[m] = Step::Down;
        }
        self.height = 0;
        self.refresh_flat_zero_exact(split, k);
        split
    }

    fn refresh_flat_zero_exact(&mut self, from: usize, height_at_from: i64) {
        if self.model == Model::Schroeder {
            self.refresh_flat_zero_from(from, height_at_from);
        }
    }

    /// Parity flip. Plain model: the last non-down step swaps U↔F; colored
    /// model: the flippable step (last U or F, scanning over trailing down
    /// and weighted-flat steps) swaps U↔F. Returns false when undefined.
    /// Charges one read per examined step and one write on success.
    pub fn flip(&mut self) -> bool {
        assert_ne!(self.model, Model::Schroeder, "flip is a Motzkin-model operation");
        let skippable = |s: Step| match self.model {
            Model::Motzkin => s == Step::Down,
            Model::ColoredMotzkin => s == Step::Down || s == Step::ColoredFlat,
            Model::Schroeder => unreachable!(),
        };
        let mut i = self.steps.len();
        while i > 0 {
            i -= 1;
            self.meter.reads += 1;
            let s = self.steps[i];
            if !skippable(s) {
                match s {
                    Step::Up => {
                        self.steps[i] = Step::Flat;
                        self.flat_count += 1;
                        self.height -= 1;
                    }
                    Step::Flat => {
                        self.steps[i] = Step::Up;
                        self.flat_count -= 1;
                        self.height += 1;
                    }
                    _ => unreachable!(),
                }
                self.meter.writes += 1;
                return true;
            }
        }
        false
    }

    /// Replace the first height-0 flat step by an up step. Requires a
    /// non-little Schröder path; the result is little with height +1 and
    /// geometric length −1. Constant time, one write.
    pub fn lift(&mut self) {
        assert_eq!(self.model, Model::Schroeder);
        let i = self.first_flat_at_zero.expect("lift requires a flat step at height 0");
        self.steps[i] = Step::Up;
        self.flat_count -= 1;
        self.height += 1;
        // Every later height-0 flat is raised to height 1, so none remain.
        self.first_flat_at_zero = None;
        self.meter.writes += 1;
    }

    pub fn classify(&self) -> PathClass {
        let mut h = 0i64;
        let len = self.steps.len();
        for (i, s) in self.steps.iter().enumerate() {
            h += s.dh();
            if h < 0 && i + 1 < len {
                return PathClass::Other;
            }
        }
        if h < 0 {
            PathClass::Lukasiewicz
        } else if h == 0 {
            PathClass::Excursion
        } else {
            PathClass::Positive
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self.classify(), PathClass::Positive | PathClass::Excursion)
    }

    /// Recompute every cached field from the raw steps and assert agreement.
    /// Test/debug helper.
    pub fn validate(&self) {
        let mut h = 0i64;
        let mut flats = 0usize;
        let mut first_zero_flat = None;
        for (i, &s) in self.steps.iter().enumerate() {
            assert!(self.model.step_legal(s));
            if s == Step::Flat {
                if h == 0 && first_zero_flat.is_none() {
                    first_zero_flat = Some(i);
                }
                flats += 1;
            }
            h += s.dh();
        }
        assert_eq!(h, self.height, "height cache mismatch on {}", self.text());
        assert_eq!(flats, self.flat_count, "flat count mismatch on {}", self.text());
        if self.model == Model::Schroeder {
            assert_eq!(
                first_zero_flat, self.first_flat_at_zero,
                "first-flat cache mismatch on {}",
                self.text()
            );
            debug_assert_eq!((self.geo_len() as i64 - self.height).rem_euclid(2), 0);
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

/// Pure unfold: builds `σ·τ̃` from separate σ and τ. Oracle/test helper
/// (unmetered); the samplers use the in-place [`Path::unfold_at`].
pub fn unfold_concat(sigma: &Path, tau: &Path) -> Path {
    assert_eq!(sigma.model(), tau.model());
    assert!(!tau.is_empty());
    let mut p = Path::new(sigma.model());
    for &s in sigma.steps() {
        p.push_unmetered(s);
    }
    for &s in tau.steps() {
        p.push_unmetered(s);
    }
    debug_assert_eq!(p.classify(), PathClass::Lukasiewicz);
    p.unfold_at(sigma.len());
    p.meter = PathMeter::default();
    p
}

/// Pure fold: the inverse factorization `(σ, τ)` of a positive path of odd
/// height. Oracle/test helper (unmetered).
pub fn fold_pair(p: &Path) -> (Path, Path) {
    let mut q = p.clone();
    let split = q.fold_drop();
    // q is now στ minus the final down step; rebuild the parts.
    let mut sigma = Path::new(p.model());
    let mut tau = Path::new(p.model());
    for (i, &s) in q.steps().iter().enumerate() {
        if i < split {
            sigma.push_unmetered(s);
        } else {
            tau.push_unmetered(s);
        }
    }
    tau.push_unmetered(Step::Down);
    (sigma, tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_updates_caches() {
        let mut p = Path::new(Model::Motzkin);
        p.push(Step::Up);
        assert_eq!((p.height(), p.geo_len()), (1, 1));

        let mut p = Path::from_text(Model::Schroeder, "UF");
        p.push(Step::Down);
        assert_eq!((p.height(), p.geo_len()), (0, 4));

        let mut p = Path::from_text(Model::Schroeder, "UD");
        p.push(Step::Flat);
        assert_eq!(p.first_flat_at_zero(), Some(2));
        assert!(!p.is_little());
    }

    #[test]
    #[should_panic]
    fn colored_flat_rejected_outside_colored_model() {
        let mut p = Path::new(Model::Motzkin);
        p.push(Step::ColoredFlat);
    }

    #[test]
    fn unfold_examples() {
        let s = Path::new(Model::Motzkin);
        let t = Path::from_text(Model::Motzkin, "FD");
        let u = unfold_concat(&s, &t);
        assert_eq!((u.text().as_str(), u.height()), ("UF", 1));

        let s = Path::from_text(Model::Motzkin, "F");
        let t = Path::from_text(Model::Motzkin, "D");
        assert_eq!(unfold_concat(&s, &t).text(), "FU");

        let s = Path::from_text(Model::Motzkin, "U");
        let t = Path::from_text(Model::Motzkin, "UDDD");
        let u = unfold_concat(&s, &t);
        assert_eq!((u.text().as_str(), u.height()), ("UUUDU", 3));
    }

    #[test]
    fn fold_examples() {
        let (s, t) = fold_pair(&Path::from_text(Model::Motzkin, "UF"));
        assert_eq!((s.text().as_str(), t.text().as_str()), ("", "FD"));

        let (s, t) = fold_pair(&Path::from_text(Model::Motzkin, "U"));
        assert_eq!((s.text().as_str(), t.text().as_str()), ("", "D"));

        let (s, t) = fold_pair(&Path::from_text(Model::Motzkin, "UUUDU"));
        assert_eq!((s.text().as_str(), t.text().as_str()), ("U", "UDDD"));
    }

    #[test]
    fn flip_examples() {
        let mut p = Path::from_text(Model::Motzkin, "UFDD");
        assert!(p.flip());
        assert_eq!(p.text(), "UUDD");

        let mut p = Path::from_text(Model::Motzkin, "D");
        assert!(!p.flip());

        let mut p = Path::from_text(Model::ColoredMotzkin, "UCD");
        assert!(p.flip());
        assert_eq!(p.text(), "FCD");
    }

    #[test]
    fn flip_is_involution() {
        for text in ["U", "F", "UF", "UUDD", "FUD", "UFFD"] {
            let p = Path::from_text(Model::Motzkin, text);
            let mut q = p.clone();
            assert!(q.flip());
            let dh = q.height() - p.height();
            assert!(dh == 1 || dh == -1);
            assert!(q.flip());
            assert_eq!(q.text(), p.text());
        }
    }

    #[test]
    fn lift_examples() {
        let mut p = Path::from_text(Model::Schroeder, "F");
        p.lift();
        assert_eq!(p.text(), "U");

        let mut p = Path::from_text(Model::Schroeder, "UDF");
        let before = p.geo_len();
        p.lift();
        assert_eq!(p.text(), "UDU");
        assert_eq!(p.geo_len(), before - 1);
        assert!(p.is_little());
        p.validate();

        let mut p = Path::from_text(Model::Schroeder, "FUD");
        p.lift();
        assert_eq!(p.text(), "UUD");
    }

    #[test]
    fn little_examples() {
        assert!(Path::from_text(Model::Schroeder, "UFD").is_little());
        assert!(!Path::from_text(Model::Schroeder, "F").is_little());
        assert!(!Path::from_text(Model::Schroeder, "UDF").is_little());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(Path::from_text(Model::Motzkin, "UD").classify(), PathClass::Excursion);
        assert_eq!(Path::from_text(Model::Motzkin, "FD").classify(), PathClass::Lukasiewicz);
        assert_eq!(Path::from_text(Model::Motzkin, "DU").classify(), PathClass::Other);
        assert_eq!(Path::new(Model::Motzkin).classify(), PathClass::Excursion);
    }

    #[test]
    fn truncate_restores_flat_cache() {
        let mut p = Path::from_text(Model::Schroeder, "UDF");
        assert_eq!(p.first_flat_at_zero(), Some(2));
        p.truncate_last();
        assert_eq!(p.first_flat_at_zero(), None);
        p.validate();
    }

    #[test]
    fn meter_counts_scripted_sequence() {
        // push ×4 (4 writes), unfold over τ of 3 steps (3 reads),
        // flip (examines the final non-down step: 1 read, 1 write).
        let mut p = Path::new(Model::Motzkin);
        for s in [Step::Up, Step::Flat, Step::Down, Step::Down] {
            p.push(s);
        }
        assert_eq!((p.meter.reads, p.meter.writes), (0, 4));
        p.unfold_at(1); // τ = FDD
        assert_eq!((p.meter.reads, p.meter.writes), (3, 4));
        assert_eq!(p.text(), "UUFU");
        assert!(p.flip());
        assert_eq!((p.meter.reads, p.meter.writes), (4, 5));
    }

    #[test]
    fn fold_meter_counts_suffix() {
        let mut p = Path::from_text(Model::Motzkin, "UUUDU");
        p.fold_drop();
        assert_eq!(p.text(), "UUDD");
        assert_eq!(p.meter.reads, 4); // τ̃ = UUDU
    }
}
