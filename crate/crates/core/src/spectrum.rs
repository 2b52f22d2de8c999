//! Slice-set algebra and slot selection.
//!
//! A link carries a fixed universe of `n_slices` spectrum slices. A
//! [`SliceSet`] is a bitset over that universe; a [`Slot`] is a contiguous
//! half-open range of slices that a connection occupies.

use std::fmt;

use rand::Rng;
use smallvec::SmallVec;

const WORD: usize = 64;

/// A set of slice indices drawn from a fixed universe `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SliceSet {
    universe: usize,
    words: SmallVec<[u64; 8]>,
}

/// Contiguous slices `lo..hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub lo: usize,
    pub hi: usize,
}

/// Spectrum allocation policy used to place a slot inside the available slices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Policy {
    First,
    Fittest,
    Random,
}

impl Policy {
    pub const ALL: [Policy; 3] = [Policy::First, Policy::Fittest, Policy::Random];

    pub fn name(self) -> &'static str {
        match self {
            Policy::First => "first",
            Policy::Fittest => "fittest",
            Policy::Random => "random",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "first" => Some(Policy::First),
            "fittest" => Some(Policy::Fittest),
            "random" => Some(Policy::Random),
            _ => None,
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Slot {
    pub fn new(lo: usize, hi: usize) -> Self {
        assert!(lo < hi, "slot must be non-empty: {lo}..{hi}");
        Slot { lo, hi }
    }

    pub fn width(&self) -> usize {
        self.hi - self.lo
    }

    pub fn to_set(&self, universe: usize) -> SliceSet {
        SliceSet::from_range(universe, self.lo, self.hi)
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

impl SliceSet {
    pub fn empty(universe: usize) -> Self {
        let n = universe.div_ceil(WORD);
        SliceSet {
            universe,
            words: SmallVec::from_elem(0, n),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        s.clear_tail();
        s
    }

    /// The slices `lo..hi`, clipped to the universe.
    pub fn from_range(universe: usize, lo: usize, hi: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in lo..hi.min(universe) {
            s.insert(i);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    fn clear_tail(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / WORD] & (1 << (i % WORD)) != 0
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "slice {i} outside universe {}", self.universe);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.universe {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    pub fn intersect_with(&mut self, other: &SliceSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn union_with(&mut self, other: &SliceSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn difference_with(&mut self, other: &SliceSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn intersection(&self, other: &SliceSet) -> SliceSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn union(&self, other: &SliceSet) -> SliceSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn complement(&self) -> SliceSet {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.clear_tail();
        s
    }

    pub fn is_subset(&self, other: &SliceSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &SliceSet) -> bool {
        other.is_subset(self)
    }

    /// True when every slice of `slot` is in the set.
    pub fn contains_slot(&self, slot: Slot) -> bool {
        slot.hi <= self.universe && self.next_clear(slot.lo) >= slot.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&i| self.contains(i))
    }

    /// Index of the first member `>= from`, or `universe`.
    fn next_set(&self, from: usize) -> usize {
        if from >= self.universe {
            return self.universe;
        }
        let mut wi = from / WORD;
        let mut w = self.words[wi] & (!0u64 << (from % WORD));
        loop {
            if w != 0 {
                return (wi * WORD + w.trailing_zeros() as usize).min(self.universe);
            }
            wi += 1;
            if wi == self.words.len() {
                return self.universe;
            }
            w = self.words[wi];
        }
    }

    /// Index of the first non-member `>= from`, or `universe`.
    fn next_clear(&self, from: usize) -> usize {
        if from >= self.universe {
            return self.universe;
        }
        let mut wi = from / WORD;
        let mut w = !self.words[wi] & (!0u64 << (from % WORD));
        loop {
            if w != 0 {
                return (wi * WORD + w.trailing_zeros() as usize).min(self.universe);
            }
            wi += 1;
            if wi == self.words.len() {
                return self.universe;
            }
            w = !self.words[wi];
        }
    }

    /// Maximal contiguous runs in ascending order.
    pub fn runs(&self) -> Runs<'_> {
        Runs { set: self, pos: 0 }
    }

    /// Keeps only slices that belong to a run of at least `width` slices.
    ///
    /// Slices in shorter runs can never carry a `width`-slice slot, and
    /// intersecting further can only shorten runs, so dropping them early
    /// does not change which slots are reachable.
    pub fn retain_runs_at_least(&mut self, width: usize) {
        let mut pos = 0;
        while pos < self.universe {
            let lo = self.next_set(pos);
            if lo >= self.universe {
                break;
            }
            let hi = self.next_clear(lo);
            if hi - lo < width {
                for i in lo..hi {
                    self.remove(i);
                }
            }
            pos = hi;
        }
    }
}

impl fmt::Debug for SliceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SliceSet<{}>{{", self.universe)?;
        for (i, r) in self.runs().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if r.width() == 1 {
                write!(f, "{}", r.lo)?;
            } else {
                write!(f, "{}-{}", r.lo, r.hi - 1)?;
            }
        }
        f.write_str("}")
    }
}

/// Iterator over maximal runs of a [`SliceSet`].
pub struct Runs<'a> {
    set: &'a SliceSet,
    pos: usize,
}

impl Iterator for Runs<'_> {
    type Item = Slot;

    fn next(&mut self) -> Option<Slot> {
        let lo = self.set.next_set(self.pos);
        if lo >= self.set.universe {
            self.pos = lo;
            return None;
        }
        let hi = self.set.next_clear(lo);
        self.pos = hi;
        Some(Slot { lo, hi })
    }
}

pub fn contiguous_runs(avail: &SliceSet) -> Vec<Slot> {
    avail.runs().collect()
}

/// True iff some maximal run of `avail` holds at least `width` slices.
pub fn supports(avail: &SliceSet, width: usize) -> bool {
    avail.runs().any(|r| r.width() >= width)
}

/// Places a `width`-slice slot inside `avail` according to `policy`.
pub fn select_slot<R: Rng + ?Sized>(
    avail: &SliceSet,
    width: usize,
    policy: Policy,
    rng: &mut R,
) -> Option<Slot> {
    assert!(width >= 1, "slot width must be positive");
    match policy {
        Policy::First => avail
            .runs()
            .find(|r| r.width() >= width)
            .map(|r| Slot::new(r.lo, r.lo + width)),
        Policy::Fittest => avail
            .runs()
            .filter(|r| r.width() >= width)
            // min_by_key keeps the first minimum, i.e. the lowest run.
            .min_by_key(|r| r.width())
            .map(|r| Slot::new(r.lo, r.lo + width)),
        Policy::Random => {
            let windows: usize = avail
                .runs()
                .filter(|r| r.width() >= width)
                .map(|r| r.width() - width + 1)
                .sum();
            if windows == 0 {
                return None;
            }
            let mut k = rng.random_range(0..windows);
            for r in avail.runs().filter(|r| r.width() >= width) {
                let n = r.width() - width + 1;
                if k < n {
                    return Some(Slot::new(r.lo + k, r.lo + k + width));
                }
                k -= n;
            }
            unreachable!("window index within counted total")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(universe: usize, xs: &[usize]) -> SliceSet {
        SliceSet::from_indices(universe, xs.iter().copied())
    }

    #[test]
    fn runs_examples() {
        assert!(contiguous_runs(&SliceSet::empty(10)).is_empty());
        assert_eq!(
            contiguous_runs(&set(10, &[0, 1, 2, 5, 6])),
            vec![Slot::new(0, 3), Slot::new(5, 7)]
        );
        assert_eq!(contiguous_runs(&SliceSet::full(400)), vec![Slot::new(0, 400)]);
    }

    #[test]
    fn runs_across_word_boundaries() {
        let s = SliceSet::from_range(200, 60, 130);
        assert_eq!(contiguous_runs(&s), vec![Slot::new(60, 130)]);
        let s = set(128, &[63, 64, 127]);
        assert_eq!(contiguous_runs(&s), vec![Slot::new(63, 65), Slot::new(127, 128)]);
    }

    #[test]
    fn supports_examples() {
        let s = set(10, &[0, 1, 2, 5, 6]);
        assert!(supports(&s, 3));
        assert!(!supports(&s, 4));
        assert!(!supports(&SliceSet::empty(10), 1));
    }

    #[test]
    fn select_examples() {
        let s = set(10, &[0, 1, 2, 3, 5, 6]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(select_slot(&s, 2, Policy::First, &mut rng), Some(Slot::new(0, 2)));
        assert_eq!(select_slot(&s, 2, Policy::Fittest, &mut rng), Some(Slot::new(5, 7)));
        assert_eq!(select_slot(&s, 5, Policy::Random, &mut rng), None);
    }

    #[test]
    fn fittest_ties_take_lowest_run() {
        let s = set(20, &[0, 1, 2, 3, 5, 6, 8, 9, 12, 13, 14]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(select_slot(&s, 2, Policy::Fittest, &mut rng), Some(Slot::new(5, 7)));
        assert_eq!(select_slot(&s, 3, Policy::Fittest, &mut rng), Some(Slot::new(12, 15)));
    }

    #[test]
    fn random_is_uniform_over_windows() {
        let s = set(10, &[0, 1, 2, 3, 5, 6]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts = std::collections::BTreeMap::new();
        let trials = 10_000;
        for _ in 0..trials {
            let slot = select_slot(&s, 2, Policy::Random, &mut rng).unwrap();
            *counts.entry(slot.lo).or_insert(0usize) += 1;
        }
        assert_eq!(counts.keys().copied().collect::<Vec<_>>(), vec![0, 1, 2, 5]);
        for (&lo, &c) in &counts {
            let p = c as f64 / trials as f64;
            assert!((p - 0.25).abs() <= 0.03, "window at {lo}: {p}");
        }
    }

    #[test]
    fn retain_runs_drops_short_runs() {
        let mut s = set(16, &[0, 1, 3, 4, 5, 9, 10, 11, 12]);
        s.retain_runs_at_least(3);
        assert_eq!(s, set(16, &[3, 4, 5, 9, 10, 11, 12]));
    }

    #[test]
    fn algebra() {
        let a = set(70, &[1, 2, 65]);
        let b = set(70, &[2, 3, 65, 69]);
        assert_eq!(a.intersection(&b), set(70, &[2, 65]));
        assert_eq!(a.union(&b), set(70, &[1, 2, 3, 65, 69]));
        assert_eq!(a.complement().len(), 67);
        assert!(set(70, &[2]).is_subset(&a));
        assert!(!a.is_subset(&b));
        assert!(a.contains_slot(Slot::new(1, 3)));
        assert!(!a.contains_slot(Slot::new(1, 4)));
    }

    fn arb_set() -> impl Strategy<Value = SliceSet> {
        (1usize..140).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n).prop_map(move |bits| {
                SliceSet::from_indices(n, bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
            })
        })
    }

    proptest! {
        #[test]
        fn runs_reassemble(s in arb_set()) {
            let runs = contiguous_runs(&s);
            let mut back = SliceSet::empty(s.universe());
            for w in runs.windows(2) {
                prop_assert!(w[0].hi < w[1].lo);
            }
            for r in &runs {
                back.union_with(&r.to_set(s.universe()));
            }
            prop_assert_eq!(back, s);
        }

        #[test]
        fn selection_matches_support(s in arb_set(), width in 1usize..8, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for policy in Policy::ALL {
                let got = select_slot(&s, width, policy, &mut rng);
                prop_assert_eq!(got.is_some(), supports(&s, width));
                if let Some(slot) = got {
                    prop_assert_eq!(slot.width(), width);
                    prop_assert!(slot.to_set(s.universe()).is_subset(&s));
                    let runs: Vec<_> = contiguous_runs(&s).into_iter().filter(|r| r.width() >= width).collect();
                    match policy {
                        Policy::First => prop_assert!(runs.iter().all(|r| slot.lo <= r.lo)),
                        Policy::Fittest => {
                            let chosen = runs.iter().find(|r| r.lo <= slot.lo && slot.hi <= r.hi).unwrap();
                            prop_assert!(runs.iter().all(|r| chosen.width() <= r.width()));
                        }
                        Policy::Random => {}
                    }
                }
            }
        }
    }
}
