//! Arrays, increment plans, sorting passes with cost accounting, and exact
//! inversion counting primitives.

use crate::{gcd, Error, Result};

/// A sequence of distinct, totally ordered keys.
///
/// Inversion statistics depend only on the relative order of the keys, so
/// the canonical domain is a permutation of `{0, …, n-1}`; any distinct
/// `u32` values are accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyArray {
    keys: Vec<u32>,
}

impl KeyArray {
    /// Builds a key array, rejecting duplicate keys.
    pub fn new(keys: Vec<u32>) -> Result<Self> {
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("keys must be distinct".into()));
        }
        Ok(KeyArray { keys })
    }

    /// Builds a key array from keys already known to be distinct
    /// (e.g. a freshly shuffled permutation).
    pub(crate) fn from_distinct(keys: Vec<u32>) -> Self {
        debug_assert!({
            let mut s = keys.clone();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] < w[1])
        });
        KeyArray { keys }
    }

    /// The identity permutation `(0, 1, …, n-1)`.
    pub fn identity(n: usize) -> Self {
        KeyArray {
            keys: (0..n as u32).collect(),
        }
    }

    pub fn keys(&self) -> &[u32] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn is_sorted(&self) -> bool {
        self.keys.windows(2).all(|w| w[0] < w[1])
    }
}

/// The increment triple `(c·h, c·g, 1)` with `gcd(h, g) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IncrementPlan {
    pub h: u64,
    pub g: u64,
    pub c: u64,
}

impl IncrementPlan {
    pub fn new(h: u64, g: u64, c: u64) -> Result<Self> {
        if g < 1 || h <= g {
            return Err(Error::InvalidArgument(format!(
                "require h > g >= 1, got h={h}, g={g}"
            )));
        }
        if c < 1 {
            return Err(Error::InvalidArgument("require c >= 1".into()));
        }
        if gcd(h, g) != 1 {
            return Err(Error::InvalidArgument(format!(
                "h={h} and g={g} must be relatively prime"
            )));
        }
        Ok(IncrementPlan { h, g, c })
    }
}

/// Inversions removed by each pass of a `(ch, cg, 1)` shellsort run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PassCosts {
    pub pass1: u64,
    pub pass2: u64,
    pub pass3: u64,
}

impl PassCosts {
    pub fn total(&self) -> u64 {
        self.pass1 + self.pass2 + self.pass3
    }
}

/// One insertion-sort pass with the given stride.
///
/// Every chain `a[j], a[j+step], a[j+2·step], …` comes out nondecreasing.
/// The returned move count is the number of shifts performed by straight
/// insertion, which equals the number of within-chain inversions present
/// before the pass.
pub fn stride_sort(a: &KeyArray, step: usize) -> Result<(KeyArray, u64)> {
    if step == 0 {
        return Err(Error::InvalidArgument("step must be >= 1".into()));
    }
    let mut keys = a.keys.clone();
    let mut moves = 0u64;
    for i in step..keys.len() {
        let x = keys[i];
        let mut j = i;
        while j >= step && keys[j - step] > x {
            keys[j] = keys[j - step];
            j -= step;
            moves += 1;
        }
        keys[j] = x;
    }
    Ok((KeyArray { keys }, moves))
}

/// Exact inversion count, merge-based, `O(n log n)`.
pub fn count_inversions(a: &KeyArray) -> u64 {
    inversions_of_slice(&a.keys)
}

/// Merge-counting over a raw slice; shared with the simulation layer.
pub(crate) fn inversions_of_slice(keys: &[u32]) -> u64 {
    let mut work = keys.to_vec();
    let mut buf = vec![0u32; keys.len()];
    merge_count(&mut work, &mut buf)
}

fn merge_count(a: &mut [u32], buf: &mut [u32]) -> u64 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let (left, right) = a.split_at_mut(mid);
    let mut inv = merge_count(left, buf) + merge_count(right, buf);
    // Stable merge into buf, counting right-before-left crossings.
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < left.len() && j < right.len() {
        if left[i] <= right[j] {
            buf[k] = left[i];
            i += 1;
        } else {
            buf[k] = right[j];
            j += 1;
            inv += (left.len() - i) as u64;
        }
        k += 1;
    }
    while i < left.len() {
        buf[k] = left[i];
        i += 1;
        k += 1;
    }
    while j < right.len() {
        buf[k] = right[j];
        j += 1;
        k += 1;
    }
    a.copy_from_slice(&buf[..n]);
    inv
}

/// Inversions of the interleaving of two individually sorted lists.
///
/// Returns `Σ_r |r - s_r|` where `s_r` is the number of second-list
/// elements below the `(r+1)`-st first-list element. The second list may
/// be the same length as the first or one element shorter.
pub fn interleaved_inversions(first: &[u32], second: &[u32]) -> Result<u64> {
    if !(second.len() == first.len() || second.len() + 1 == first.len()) {
        return Err(Error::InvalidArgument(format!(
            "list lengths must be (m, m) or (m, m-1), got ({}, {})",
            first.len(),
            second.len()
        )));
    }
    if first.windows(2).any(|w| w[0] >= w[1]) || second.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "both lists must be strictly increasing".into(),
        ));
    }
    let mut total = 0u64;
    let mut s = 0usize;
    for (r, &x) in first.iter().enumerate() {
        while s < second.len() && second[s] < x {
            s += 1;
        }
        total += (r as i64 - s as i64).unsigned_abs();
    }
    Ok(total)
}

/// Runs the three passes `(c·h, c·g, 1)` and records the moves of each.
pub fn run_passes(a: &KeyArray, plan: &IncrementPlan) -> (KeyArray, PassCosts) {
    let (a1, pass1) = stride_sort(a, (plan.c * plan.h) as usize).expect("step >= 1");
    let (a2, pass2) = stride_sort(&a1, (plan.c * plan.g) as usize).expect("step >= 1");
    let (a3, pass3) = stride_sort(&a2, 1).expect("step >= 1");
    (
        a3,
        PassCosts {
            pass1,
            pass2,
            pass3,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn section1_input() -> KeyArray {
        KeyArray::new(vec![
            3, 14, 15, 92, 65, 35, 89, 79, 32, 38, 46, 26, 43, 37, 31, 78, 50, 28, 84, 19,
        ])
        .unwrap()
    }

    fn brute_force_inversions(keys: &[u32]) -> u64 {
        let mut inv = 0u64;
        for k in 0..keys.len() {
            for l in k + 1..keys.len() {
                if keys[k] > keys[l] {
                    inv += 1;
                }
            }
        }
        inv
    }

    #[test]
    fn distinct_keys_required() {
        assert!(KeyArray::new(vec![1, 2, 1]).is_err());
        assert!(KeyArray::new(vec![]).is_ok());
    }

    #[test]
    fn h_sort_matches_worked_example() {
        let a = section1_input();
        let (h_sorted, _) = stride_sort(&a, 5).unwrap();
        assert_eq!(
            h_sorted.keys(),
            &[3, 14, 15, 32, 19, 35, 26, 28, 37, 31, 46, 50, 43, 84, 38, 78, 89, 79, 92, 65]
        );
    }

    #[test]
    fn g_sort_matches_worked_example() {
        let a = section1_input();
        let (h_sorted, _) = stride_sort(&a, 5).unwrap();
        let (g_sorted, _) = stride_sort(&h_sorted, 3).unwrap();
        assert_eq!(
            g_sorted.keys(),
            &[3, 14, 15, 26, 19, 35, 31, 28, 37, 32, 46, 38, 43, 65, 50, 78, 84, 79, 92, 89]
        );
    }

    #[test]
    fn step_one_is_full_sort_with_inversion_count() {
        let a = section1_input();
        let inv = count_inversions(&a);
        let (sorted, moves) = stride_sort(&a, 1).unwrap();
        assert!(sorted.is_sorted());
        assert_eq!(moves, inv);
    }

    #[test]
    fn zero_step_rejected() {
        let a = KeyArray::new(vec![1, 0]).unwrap();
        assert!(stride_sort(&a, 0).is_err());
    }

    #[test]
    fn inversion_count_examples() {
        let a = KeyArray::new(vec![3, 14, 26, 19, 31, 28, 32, 46, 43, 65, 78, 84, 92, 89]).unwrap();
        assert_eq!(count_inversions(&a), 4);
        assert_eq!(count_inversions(&KeyArray::identity(10)), 0);
        let rev = KeyArray::new(vec![4, 3, 2, 1, 0]).unwrap();
        assert_eq!(count_inversions(&rev), 10);
    }

    #[test]
    fn fast_count_matches_definition() {
        let mut state = 0x1234_5678_u64;
        for n in [0usize, 1, 2, 17, 50, 200] {
            // xorshift-driven Fisher-Yates, independent of the simulation RNG
            let mut keys: Vec<u32> = (0..n as u32).collect();
            for i in (1..n).rev() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                keys.swap(i, (state % (i as u64 + 1)) as usize);
            }
            let a = KeyArray::from_distinct(keys);
            assert_eq!(count_inversions(&a), brute_force_inversions(a.keys()));
        }
    }

    #[test]
    fn interleaved_inversions_worked_example() {
        let first = [3, 26, 31, 32, 43, 78, 92];
        let second = [14, 19, 28, 46, 65, 84, 89];
        assert_eq!(interleaved_inversions(&first, &second).unwrap(), 4);
    }

    #[test]
    fn interleaved_inversions_small_cases() {
        assert_eq!(interleaved_inversions(&[1, 3, 5], &[2, 4, 6]).unwrap(), 0);
        assert_eq!(interleaved_inversions(&[2, 4, 6], &[1, 3, 5]).unwrap(), 3);
        // second list entirely above the first, elementwise: s_r = r
        assert_eq!(
            interleaved_inversions(&[0, 2, 4], &[1, 3, 5]).unwrap(),
            0
        );
    }

    #[test]
    fn interleaved_inversions_rejects_bad_input() {
        assert!(interleaved_inversions(&[1, 2, 3], &[4]).is_err());
        assert!(interleaved_inversions(&[1], &[2, 3]).is_err());
        assert!(interleaved_inversions(&[2, 1], &[3, 4]).is_err());
    }

    /// Exhaustive check: for all splits of {0,…,t-1} into two sorted lists
    /// of lengths (m, m) or (m, m-1), the closed form equals the inversion
    /// count of the alternating interleave.
    #[test]
    fn interleaved_inversions_equals_direct_count_exhaustive() {
        for total in 2..=8usize {
            let m = total.div_ceil(2);
            for mask in 0u32..(1 << total) {
                if mask.count_ones() as usize != m {
                    continue;
                }
                let mut first = Vec::new();
                let mut second = Vec::new();
                for v in 0..total as u32 {
                    if mask & (1 << v) != 0 {
                        first.push(v);
                    } else {
                        second.push(v);
                    }
                }
                let mut merged = Vec::new();
                for i in 0..m {
                    merged.push(first[i]);
                    if i < second.len() {
                        merged.push(second[i]);
                    }
                }
                let direct = brute_force_inversions(&merged);
                assert_eq!(
                    interleaved_inversions(&first, &second).unwrap(),
                    direct,
                    "first={first:?} second={second:?}"
                );
            }
        }
    }

    #[test]
    fn plan_validation() {
        assert!(IncrementPlan::new(5, 3, 1).is_ok());
        assert!(IncrementPlan::new(4, 2, 1).is_err()); // gcd 2
        assert!(IncrementPlan::new(3, 3, 1).is_err()); // h == g
        assert!(IncrementPlan::new(5, 3, 0).is_err());
    }

    #[test]
    fn run_passes_worked_example() {
        let a = section1_input();
        let plan = IncrementPlan::new(5, 3, 1).unwrap();
        let (sorted, costs) = run_passes(&a, &plan);
        assert!(sorted.is_sorted());
        let (h_sorted, _) = stride_sort(&a, 5).unwrap();
        let (g_sorted, _) = stride_sort(&h_sorted, 3).unwrap();
        assert_eq!(costs.pass3, count_inversions(&g_sorted));
        assert_eq!(costs.total(), costs.pass1 + costs.pass2 + costs.pass3);
    }

    #[test]
    fn run_passes_sorted_input_is_free() {
        let a = KeyArray::identity(30);
        let plan = IncrementPlan::new(5, 3, 1).unwrap();
        let (_, costs) = run_passes(&a, &plan);
        assert_eq!((costs.pass1, costs.pass2, costs.pass3), (0, 0, 0));
    }

    #[test]
    fn stride_sort_idempotent() {
        let a = section1_input();
        for step in [1usize, 2, 3, 5, 7] {
            let (once, _) = stride_sort(&a, step).unwrap();
            let (twice, moves) = stride_sort(&once, step).unwrap();
            assert_eq!(once, twice);
            assert_eq!(moves, 0);
        }
    }
}
