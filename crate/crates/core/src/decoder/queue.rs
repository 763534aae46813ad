//! Priority structure over cached flip candidates.
//!
//! Every `(decrease, size)` pair that a generator can produce is given a rank
//! once, ordered by exact ratio (descending) and then by decrease
//! (descending). Each rank owns a bucket of generator ids kept in ascending
//! order, and a bitset records which buckets are nonempty. The best entry is
//! the smallest id in the first nonempty bucket, which matches the decoder's
//! tie-breaking rule.

use std::cmp::Ordering;
use std::collections::BTreeSet;

/// Dense rank table for `(decrease, size)` pairs.
#[derive(Debug, Clone)]
pub(crate) struct RatioKeys {
    max_size: usize,
    max_decrease: usize,
    rank: Vec<u32>,
    count: usize,
}

/// Orders `(d1, s1)` before `(d2, s2)` when its ratio is larger, or the
/// ratios are equal and its decrease is larger.
pub(crate) fn compare_ratio(d1: u32, s1: u32, d2: u32, s2: u32) -> Ordering {
    let lhs = u64::from(d1) * u64::from(s2);
    let rhs = u64::from(d2) * u64::from(s1);
    rhs.cmp(&lhs).then(d2.cmp(&d1))
}

impl RatioKeys {
    pub(crate) fn new(max_size: usize, max_decrease: usize) -> Self {
        let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(max_size * max_decrease);
        for d in 1..=max_decrease as u32 {
            for s in 1..=max_size as u32 {
                pairs.push((d, s));
            }
        }
        pairs.sort_by(|a, b| compare_ratio(a.0, a.1, b.0, b.1));
        let mut rank = vec![u32::MAX; (max_decrease + 1) * (max_size + 1)];
        for (r, &(d, s)) in pairs.iter().enumerate() {
            rank[d as usize * (max_size + 1) + s as usize] = r as u32;
        }
        Self {
            max_size,
            max_decrease,
            rank,
            count: pairs.len(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.count
    }

    pub(crate) fn key(&self, decrease: u32, size: u32) -> usize {
        let (d, s) = (decrease as usize, size as usize);
        assert!(
            (1..=self.max_decrease).contains(&d) && (1..=self.max_size).contains(&s),
            "pair ({d}, {s}) outside the key space"
        );
        self.rank[d * (self.max_size + 1) + s] as usize
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BucketQueue {
    buckets: Vec<BTreeSet<usize>>,
    occupied: Vec<u64>,
    len: usize,
}

impl BucketQueue {
    pub(crate) fn new(keys: usize) -> Self {
        Self {
            buckets: vec![BTreeSet::new(); keys],
            occupied: vec![0; keys.div_ceil(64)],
            len: 0,
        }
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn insert(&mut self, key: usize, item: usize) {
        if self.buckets[key].insert(item) {
            self.len += 1;
            self.occupied[key / 64] |= 1 << (key % 64);
        }
    }

    pub(crate) fn remove(&mut self, key: usize, item: usize) -> bool {
        let removed = self.buckets[key].remove(&item);
        if removed {
            self.len -= 1;
            if self.buckets[key].is_empty() {
                self.occupied[key / 64] &= !(1 << (key % 64));
            }
        }
        removed
    }

    /// The item in the best nonempty bucket with the smallest id.
    pub(crate) fn first(&self) -> Option<(usize, usize)> {
        let (w, word) = self
            .occupied
            .iter()
            .enumerate()
            .find(|(_, &word)| word != 0)?;
        let key = w * 64 + word.trailing_zeros() as usize;
        let item = *self.buckets[key].first().expect("occupied bucket is nonempty");
        Some((key, item))
    }

    pub(crate) fn clear(&mut self) {
        for (w, word) in self.occupied.iter_mut().enumerate() {
            let mut bits = *word;
            while bits != 0 {
                let key = w * 64 + bits.trailing_zeros() as usize;
                self.buckets[key].clear();
                bits &= bits - 1;
            }
            *word = 0;
        }
        self.len = 0;
    }
}
